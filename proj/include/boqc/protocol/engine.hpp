#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <variant>
#include <vector>

#include "boqc/protocol/setup.hpp"

namespace boqc::protocol {

class ProtocolViolation : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

// ---- transcript -------------------------------------------------------------

enum class Endpoint { alice, oscar, bob, key_channel };
enum class MessageKind { key_share, qubit, angle, outcome, output_qubit };

std::string to_string(Endpoint e);
std::string to_string(MessageKind k);

struct Message {
  std::size_t seq = 0;
  Endpoint from = Endpoint::alice;
  Endpoint to = Endpoint::bob;
  MessageKind kind = MessageKind::qubit;
  NodeId node = 0;
  std::optional<DyadicAngle> angle;
  std::optional<int> bit;
};

struct Keys {
  std::map<NodeId, int> r;
  std::map<NodeId, int> t;
};

// Capability labels each party exercised: C1..C3 for clients, S1..S3 for Bob.
struct Capabilities {
  std::set<std::string> alice;
  std::set<std::string> oscar;
  std::set<std::string> bob;
};

struct Transcript {
  std::vector<Message> messages;
  Keys keys;
  std::vector<std::string> deviations;
  Capabilities capabilities;
};

// Bob's side of a transcript: the public information and the messages he sent or received.
struct BobTranscript {
  PublicInfo info;
  std::vector<Message> messages;
};
BobTranscript bob_view(const Transcript& t, const PublicInfo& info);

// ---- compiled schedule ------------------------------------------------------

namespace step {
struct KeyShare {};
struct DrawKey { std::size_t v; bool is_t; };
struct DrawPad { std::size_t v; };
struct ClientSend { std::size_t v; };
struct BobPrepareOutput { std::size_t v; };
struct BobEntangle { std::vector<std::pair<std::size_t, std::size_t>> edges; };
struct SendAngle { std::size_t v; };
struct SimDrawDelta { std::size_t v; };
struct BobMeasure { std::size_t v; };
struct BobReport { std::size_t v; };
struct ClientsDecode { std::size_t v; };
struct SimEprHalf { std::size_t v; };
struct ResourceTeleportInput { std::size_t v; };
struct ResourceMeasure { std::size_t v; };
struct ReturnOutput { std::size_t v; };
// state of Bob's qubits: one received qubit, or everything he holds
struct Snapshot {
  std::string key;
  std::optional<std::size_t> received;
};
}  // namespace step

using Step = std::variant<step::KeyShare, step::DrawKey, step::DrawPad, step::ClientSend, step::BobPrepareOutput,
                          step::BobEntangle, step::SendAngle, step::SimDrawDelta, step::BobMeasure, step::BobReport,
                          step::ClientsDecode, step::SimEprHalf, step::ResourceTeleportInput, step::ResourceMeasure,
                          step::ReturnOutput, step::Snapshot>;

struct NodeInfo {
  NodeId id = 0;
  Party owner = Party::alice;
  bool input = false;
  bool quantum_input = false;
  bool output = false;
  bool quantum_output = false;
  int classical_bit = 0;
  DyadicAngle angle;
  std::optional<std::size_t> flow_parent;   // f^-1
  std::vector<std::size_t> z_deps;
  std::vector<std::size_t> neighbors;
  std::vector<std::size_t> input_neighbors;  // quantum inputs k with this node in N(k)

  bool measured() const { return !quantum_output; }
};

struct Program {
  Variant variant = Variant::boqc;
  World world = World::real;
  int b = 2;
  PublicInfo info;
  std::vector<NodeInfo> nodes;
  std::vector<Step> steps;
  qsim::QuantumRegister initial;
  std::vector<qsim::QubitLabel> output_labels;
  std::vector<std::size_t> classical_outputs;
  std::vector<qsim::QubitLabel> references;
  // teleported inputs: use delta - phi' for the resource angle regardless of t (kept to test the sign rule)
  bool unsigned_teleport_angle = false;

  std::size_t index_of(NodeId v) const;
};

Program compile(const Setup& s, Variant variant, World world);
std::string describe(const Step& st, const Program& p);

// ---- run state --------------------------------------------------------------

enum class Holder : std::uint8_t { alice, oscar, bob, resource };

struct ClientSlot {
  DyadicAngle pad;
  DyadicAngle angle;
  int r = -1;
  int t = 0;
  int s = -1;
  bool has_pad = false;
};

enum class ChoiceKind { none, key, alice_pad, oscar_pad, simulator, bob_outcome, resource_outcome };

struct Pending {
  ChoiceKind kind = ChoiceKind::none;
  std::size_t v = 0;
  int options = 0;
  std::array<double, 2> p{0.0, 0.0};
  qsim::Basis basis{};
  qsim::QubitLabel label = 0;

  bool secret() const {
    return kind == ChoiceKind::key || kind == ChoiceKind::alice_pad || kind == ChoiceKind::oscar_pad ||
           kind == ChoiceKind::simulator;
  }
};

struct RunState {
  qsim::QuantumRegister reg;
  std::vector<std::pair<qsim::QubitLabel, Holder>> holders;
  std::vector<ClientSlot> alice;  // in the ideal world: the resource's copy of Alice's data
  std::vector<ClientSlot> oscar;
  std::vector<std::int64_t> delta_k;  // angles Bob received, -1 before
  std::vector<int> raw;               // Bob's measurement outcomes
  std::vector<int> report_alice;
  std::vector<int> report_oscar;
  std::vector<std::int64_t> sim_delta;  // ideal world: the simulator's uniform angles
  std::string record;  // Bob's classical view as tagged binary events
  bool keep_record = true;
  double weight = 1.0;
  int bob_live = 0;
  int bob_peak = 0;
  std::size_t pc = 0;
  Pending pending;
  bool recording = false;
  Transcript transcript;

  Holder holder_of(qsim::QubitLabel l) const;
  std::vector<qsim::QubitLabel> held_by(Holder h) const;
};

// Read-only access to what Bob has seen so far.
class BobMemory {
 public:
  BobMemory(const Program& p, const RunState& s) : prog_(p), st_(s) {}
  std::optional<DyadicAngle> delta(NodeId v) const;
  std::optional<int> outcome(NodeId v) const;
  const PublicInfo& info() const { return prog_.info; }

 private:
  const Program& prog_;
  const RunState& st_;
};

// Operations a custom Bob may apply to qubits he holds. Everything is logged as a deviation.
class BobHands {
 public:
  BobHands(const Program& p, RunState& s) : prog_(p), st_(s) {}
  std::vector<qsim::QubitLabel> holdings() const { return st_.held_by(Holder::bob); }
  void apply_x(NodeId v);
  void apply_z(NodeId v);
  void apply_h(NodeId v);
  void apply_rotation(NodeId v, const DyadicAngle& theta);
  void apply_cz(NodeId a, NodeId b);

 private:
  bool owns(NodeId v, const char* op);
  const Program& prog_;
  RunState& st_;
};

struct Reports {
  int to_alice = 0;
  int to_oscar = 0;
};

struct BobBehavior {
  std::string name = "honest";
  // true when the hooks ignore BobMemory; the per-key verifier relies on it
  bool stateless = true;
  std::function<DyadicAngle(NodeId, const DyadicAngle&, const BobMemory&)> angle;  // empty: measure at delta
  std::function<Reports(NodeId, int, const BobMemory&)> report;                   // empty: truthful
  std::function<void(NodeId, BobHands&)> on_receive;
  std::function<void(NodeId, BobHands&)> before_return;
};

BobBehavior bob_honest();
BobBehavior bob_constant_report(int bit = 0);
BobBehavior bob_angle_offset(std::int64_t steps);  // steps of the run's grid; negative counts down
BobBehavior bob_angle_offset_pi();
BobBehavior bob_random_report(std::uint64_t seed);
BobBehavior bob_split_report();  // truthful to Alice, flipped to Oscar
BobBehavior bob_custom(std::string name, std::function<DyadicAngle(NodeId, const DyadicAngle&, const BobMemory&)> angle,
                       std::function<Reports(NodeId, int, const BobMemory&)> report,
                       std::function<void(NodeId, BobHands&)> on_receive = {},
                       std::function<void(NodeId, BobHands&)> before_return = {});
BobBehavior bob_by_name(const std::string& name, std::uint64_t seed = 0);

// ---- execution --------------------------------------------------------------

class Observer {
 public:
  virtual ~Observer() = default;
  virtual void on_angle(const RunState&, NodeId, const DyadicAngle&) {}
  virtual void on_snapshot(const RunState&, const step::Snapshot&, const std::vector<qsim::QubitLabel>&) {}
  virtual void on_leaf(const RunState&) {}
  // fresh empty observer of the same kind, for parallel enumeration
  virtual std::unique_ptr<Observer> fork() const { return nullptr; }
  virtual void merge(Observer&) {}
};

class ProtocolRun {
 public:
  ProtocolRun(std::shared_ptr<const Program> prog, std::shared_ptr<const BobBehavior> bob, bool recording);

  // Executes steps until a choice is pending or the schedule ends; returns false at the end.
  bool advance(Observer* obs);
  const Pending& pending() const { return st_.pending; }
  // `certain` keeps the weight unchanged (a fixed secret rather than a uniform draw)
  void choose(int option, bool certain = false);
  bool done() const { return st_.pc >= prog_->steps.size() && st_.pending.kind == ChoiceKind::none; }

  const RunState& state() const { return st_; }
  RunState& state() { return st_; }
  const Program& program() const { return *prog_; }
  const BobBehavior& bob() const { return *bob_; }

 private:
  void execute(const Step& s, Observer* obs);
  void log(Endpoint from, Endpoint to, MessageKind kind, NodeId node, std::optional<DyadicAngle> angle = {},
           std::optional<int> bit = {});
  void deviation(std::string what);
  void give(qsim::QubitLabel l, Holder h);
  void require_holder(qsim::QubitLabel l, Holder h, const char* what) const;
  ClientSlot& owner_slot(std::size_t v);
  DyadicAngle corrected_angle(std::size_t v, const std::vector<ClientSlot>& mem) const;
  int t_parity(std::size_t v, const std::vector<ClientSlot>& mem) const;
  void apply_t_updates(std::size_t v, int t);
  void bob_received(std::size_t v);

  std::shared_ptr<const Program> prog_;
  std::shared_ptr<const BobBehavior> bob_;
  RunState st_;
};

}  // namespace boqc::protocol
