#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <random>

#include "boqc/protocol/engine.hpp"

namespace boqc::protocol {

// Independent streams so any subset of the randomness can be fixed or enumerated.
struct Seeds {
  std::uint64_t keys = 1;
  std::uint64_t alice_pads = 2;
  std::uint64_t oscar_pads = 3;
  std::uint64_t outcomes = 4;
  std::uint64_t simulator = 5;

  static Seeds from(std::uint64_t master);
};

struct RunResult {
  Transcript transcript;
  std::map<NodeId, int> classical_output;
  qsim::QuantumRegister state;  // Alice's quantum output, exactly the qubits in output_labels
  std::vector<qsim::QubitLabel> output_labels;
  double probability = 1.0;     // product of the probabilities of every choice taken
  int bob_peak_qubits = 0;
  std::string bob_record;
};

using Chooser = std::function<int(const Pending&, const RunState&)>;

// Seeded sampling from the separate streams.
Chooser sampled_chooser(const Seeds& seeds);
// Every secret is 0 (keys, pads, simulator angles); outcomes are sampled.
Chooser zero_secret_chooser(std::uint64_t outcome_seed);

RunResult execute(const Program& prog, const BobBehavior& bob, const Chooser& choose, Observer* obs = nullptr);
RunResult run_protocol(const Setup& s, Variant variant, World world, const BobBehavior& bob, const Seeds& seeds);
RunResult run_boqc(const Setup& s, const BobBehavior& bob, const Seeds& seeds);
RunResult run_boqco(const Setup& s, const BobBehavior& bob, const Seeds& seeds);

// ---- exhaustive enumeration -------------------------------------------------

constexpr int kMaxExhaustiveMeasured = 8;
constexpr int kMaxExhaustivePrecision = 2;
constexpr std::uint64_t kMaxEnumeratedLeaves = std::uint64_t{1} << 28;

struct EnumerationOptions {
  bool zero_secrets = false;  // negative control: no keys, no pads
  bool parallel = true;       // OpenMP over a frontier; false runs the serial reference
};

struct EnumerationStats {
  std::uint64_t leaves = 0;
  double total_weight = 0.0;
};

// Throws SizeError past the exhaustive caps.
void require_enumerable(const Program& prog, bool zero_secrets = false);
// upper bound on the leaves of the choice tree
std::uint64_t leaf_bound(const Program& prog, bool zero_secrets);

// Depth-first walk over every choice, weighted by its probability.
EnumerationStats enumerate(const Program& prog, const BobBehavior& bob, Observer& obs, const EnumerationOptions& opt = {});

// Alice's output averaged over keys and outcomes, as a cq-state over her classical output bits.
calc::CqState output_channel(const Setup& s, Variant variant, World world, const BobBehavior& bob,
                             const EnumerationOptions& opt = {});

// Alice's output for one finished run, as it appears in the cq-state
std::string classical_key(const Program& prog, const RunState& st);

// ---- per-key verification ---------------------------------------------------

struct KeyVerification {
  std::uint64_t key_space = 0;     // product of every secret draw's range
  std::uint64_t keys_checked = 0;  // summed over surviving classes, must equal key_space
  std::size_t peak_classes = 0;
  std::size_t final_classes = 0;
  double max_distance = 0.0;       // worst cq trace distance to the reference
  double max_probability_defect = 0.0;

  bool passed(double tol) const {
    return keys_checked == key_space && max_distance <= tol && max_probability_defect <= tol;
  }
};

// Breadth-first over the schedule. Every key assignment is a class of outcome branches;
// classes whose branch mixtures coincide (after secrets are used up) are merged and counted.
// Each surviving class's output is compared with `reference`.
KeyVerification verify_every_key(const Setup& s, Variant variant, World world, const BobBehavior& bob,
                                 const calc::CqState& reference, std::size_t max_classes = std::size_t{1} << 20);

}  // namespace boqc::protocol
