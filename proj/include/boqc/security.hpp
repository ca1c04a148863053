#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "boqc/protocol.hpp"
#include "boqc/qsim/density.hpp"

namespace boqc::security {

using protocol::BobBehavior;
using protocol::Setup;
using protocol::Variant;
using protocol::World;

class StructuralMismatch : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

constexpr std::size_t kJointViewCap = 12;
constexpr double kBlindnessTol = 1e-9;
constexpr double kMinPValue = 1e-3;

struct ViewOptions {
  bool exhaustive = true;
  std::uint64_t shots = 10000;  // sampled mode
  std::uint64_t seed = 1;       // sampled mode
  bool zero_secrets = false;    // negative control: the clients skip keys and pads
  std::size_t joint_cap = kJointViewCap;
};

struct DeltaHistogram {
  std::vector<double> mass;           // probability of each grid value
  std::vector<std::uint64_t> visits;  // enumerated paths (exhaustive) or shots (sampled)
};

// Bob's quantum holdings at one point of the schedule, conditioned on his classical record so far.
// Above the joint cap only single-qubit and pairwise marginals are kept.
struct HoldingsView {
  std::vector<qsim::QubitLabel> labels;
  bool joint = true;
  // record prefix -> weighted (unnormalized) state; for marginals, one matrix per entry of `marginals`
  std::map<std::string, std::vector<qsim::Matrix>> blocks;
  std::vector<std::vector<std::size_t>> marginals;  // positions into labels
};

struct BobView {
  protocol::PublicInfo info;
  bool exhaustive = true;
  std::uint64_t runs = 0;  // leaves or shots
  double total_weight = 0.0;
  std::map<std::string, double> records;            // full classical record -> probability
  std::map<NodeId, DeltaHistogram> delta;
  std::map<NodeId, qsim::Matrix> received;          // each client-sent qubit, averaged over everything
  std::map<std::string, HoldingsView> holdings;     // by snapshot key; empty in sampled mode
  int bob_peak_qubits = 0;
  int simulator_peak_halves = 0;
};

// A readable form of one record: "recv 3", "delta 3 = 1", "outcome 3 = 0", ...
std::vector<std::string> describe_record(const protocol::Program& prog, const std::string& record);

BobView real_view(const Setup& s, Variant v, const BobBehavior& bob, const ViewOptions& opt = {});
BobView ideal_view(const Setup& s, Variant v, const BobBehavior& bob, const ViewOptions& opt = {});
BobView view_of(const protocol::Program& prog, const BobBehavior& bob, const ViewOptions& opt);

struct SimulatorRun {
  protocol::RunResult output;  // Alice's output from the ideal resource
  BobView view;                // the single run as Bob sees it
};

SimulatorRun run_simulator_boqc(const Setup& s, const BobBehavior& bob, const protocol::Seeds& seeds);
SimulatorRun run_simulator_boqco(const Setup& s, const BobBehavior& bob, const protocol::Seeds& seeds);

struct ViewDistance {
  double classical_tvd = 0.0;
  double quantum_trace_distance = 0.0;
  std::string worst_snapshot;  // where the quantum distance is attained
};

// Throws StructuralMismatch when the views do not describe the same message shapes.
ViewDistance compare_views(const BobView& real, const BobView& ideal);

struct ChiSquare {
  double statistic = 0.0;
  int dof = 0;
  double p_value = 1.0;
};
ChiSquare delta_uniformity(const DeltaHistogram& h);

struct BlindnessReport {
  Variant variant = Variant::boqc;
  std::string bob;
  ViewOptions options;
  BobView real;
  BobView ideal;
  ViewDistance distance;
  std::map<NodeId, ChiSquare> chi_square;  // real-world delta histograms
  double max_pad_deviation = 0.0;          // worst || received - I/2 ||_max
  bool delta_uniform = true;               // exact count equality (exhaustive mode)
  bool passed = false;
};

BlindnessReport check_blindness(const Setup& s, Variant v, const BobBehavior& bob, const ViewOptions& opt = {});

}  // namespace boqc::security
