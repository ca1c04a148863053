#pragma once

#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "boqc/angles.hpp"
#include "boqc/graph.hpp"
#include "boqc/qsim/density.hpp"
#include "boqc/qsim/register.hpp"

namespace boqc {

class SizeError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

namespace calc {

struct Prepare {
  NodeId node;
  DyadicAngle angle;
};

struct Entangle {
  NodeId a;
  NodeId b;
};

// measured at correct_angle(angle, xor of x_signals, xor of z_signals)
struct Measure {
  NodeId node;
  DyadicAngle angle;
  NodeSet x_signals;
  NodeSet z_signals;
};

struct CorrectX {
  NodeId node;
  NodeSet signals;
};

struct CorrectZ {
  NodeId node;
  NodeSet signals;
};

using Command = std::variant<Prepare, Entangle, Measure, CorrectX, CorrectZ>;

struct Pattern {
  std::vector<Command> commands;
  NodeSet inputs;
  NodeSet outputs;
};

using Angles = std::map<NodeId, DyadicAngle>;
using SignalState = std::map<NodeId, int>;

int signal_parity(const SignalState& s, const NodeSet& nodes);

// first broken runnability rule, or nothing when the pattern is runnable
std::optional<std::string> runnability_violation(const Pattern& p);
inline bool is_runnable(const Pattern& p) { return !runnability_violation(p).has_value(); }

// Flow pattern with corrections pushed forward onto f(i) and N(f(i)).
// `order` defaults to linearize(fl); it must respect the flow.
Pattern build_standard_pattern(const OpenGraph& g, const Flow& fl, const Angles& theta,
                               const TotalOrder& order = {});
// Same computation with each node's corrections applied right before it is measured.
Pattern build_p2_pattern(const OpenGraph& g, const Flow& fl, const Angles& theta,
                         const TotalOrder& order = {});
// Just-in-time preparation: before measuring i only A(i) is created.
Pattern build_lazy_pattern(const OpenGraph& g, const Flow& fl, const TotalOrder& order,
                           const Angles& theta);

struct PatternRun {
  qsim::QuantumRegister state;
  SignalState signals;
  double probability = 1.0;  // product of the probabilities of the taken branches
  bool valid = true;
};

// `input` holds the pattern inputs and optionally untouched reference qubits.
PatternRun run_pattern(const Pattern& p, qsim::QuantumRegister input, qsim::OutcomeSource& source);

constexpr int kMaxEnumeratedMeasurements = 14;

// sorted outputs followed by the remaining input-register labels in register order
std::vector<qsim::QubitLabel> output_labels(const Pattern& p, const qsim::QuantumRegister& input);

// Average output over every outcome branch.
qsim::DensityMatrix channel_of_pattern(const Pattern& p, const qsim::QuantumRegister& input);

// Same, but keeps the outcomes of `recorded` nodes as a classical register.
struct CqState {
  std::vector<qsim::QubitLabel> labels;
  std::map<std::string, qsim::Matrix> blocks;  // bit string over recorded nodes -> weighted state

  void add(const std::string& bits, const qsim::QuantumRegister& reg, double weight);
  void merge(const CqState& other);
  double total_weight() const;
};
double cq_trace_distance(const CqState& a, const CqState& b);
CqState cq_channel_of_pattern(const Pattern& p, const qsim::QuantumRegister& input,
                              const std::vector<NodeId>& recorded);

constexpr int kMaxIsometryNodes = 20;

// 2^|O| x 2^|I| matrix of the flow computation, rows/columns indexed by sorted node ids (LSB first)
qsim::Matrix isometry_matrix(const OpenGraph& g, const Angles& theta);

int max_concurrent_qubits(const Pattern& p);

struct LazyStep {
  NodeId node;
  NodeSet prepared;
  int live_peak;   // live qubits once A(node) is prepared
  int live_after;  // after node is measured; outputs stay live
};
std::vector<LazyStep> lazy_profile(const OpenGraph& g, const TotalOrder& order);

std::string describe(const Command& c);

}  // namespace calc
}  // namespace boqc
