#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "boqc/calculus.hpp"
#include "boqc/graph.hpp"
#include "boqc/qsim/register.hpp"

namespace boqc::protocol {

enum class Variant { boqc, boqco };
enum class World { real, ideal };
enum class IoMode { cc, cq, qc, qq };
enum class Party { alice, oscar, bob };

std::string to_string(Variant v);
std::string to_string(IoMode m);
std::string to_string(Party p);
Variant parse_variant(const std::string& s);
IoMode parse_io_mode(const std::string& s);

// Register labels reserved by the engine. Node ids and reference qubits stay below kReservedLabels.
constexpr qsim::QubitLabel kReservedLabels = qsim::QubitLabel{1} << 32;
constexpr qsim::QubitLabel kPartnerBase = kReservedLabels;            // simulator-side EPR halves
constexpr qsim::QubitLabel kAliceInputBase = 2 * kReservedLabels;     // Alice's input qubits in the ideal world

// What Bob is told before the run.
struct PublicInfo {
  NodeSet vertices;
  std::set<Edge> edges;
  NodeSet quantum_inputs;
  NodeSet quantum_outputs;
  NodeSet alice_nodes;
  NodeSet oscar_nodes;
  std::vector<NodeSet> layers;
  TotalOrder order;
  int b = 1;

  bool operator==(const PublicInfo&) const = default;
};

// Everything the two clients hold. `graph` carries I, O, the quantum subsets and ownership.
struct Setup {
  OpenGraph graph;
  Flow flow;
  TotalOrder order;
  int b = 2;
  calc::Angles phi;                      // Alice's angles on her measured nodes
  calc::Angles psi;                      // Oscar's angles on his measured nodes
  std::map<NodeId, int> classical_input; // c bits on I \ Itilde, missing bits are 0
  qsim::QuantumRegister quantum_input;   // holds Itilde plus optional reference qubits

  IoMode io_mode() const;
};

PublicInfo public_info(const Setup& s);

// Throws ValidationError on the first inconsistency.
void validate_setup(const Setup& s);

// measured angle of node v as the client sees it (0 for measured outputs without an angle)
DyadicAngle base_angle(const Setup& s, NodeId v);

// Sets quantum_inputs / quantum_outputs from the mode: the q side means all of I (resp. O).
void apply_io_mode(OpenGraph& g, IoMode mode);

struct PreProtocol {
  OpenGraph graph;
  Flow flow;
  TotalOrder order;
  PublicInfo info;
};

// Joins the drafts, finds a flow and fixes the total order.
PreProtocol pre_protocol(const AliceDraft& alice, const OscarDraft& oscar, const std::vector<Edge>& connection,
                         int b, IoMode mode = IoMode::cc);

// Single-party variant: Alice's graph with no oracle slots.
PreProtocol pre_protocol(const OpenGraph& graph, int b, IoMode mode = IoMode::cc);

// Reference computation: the flow pattern on the same inputs, with classical outputs measured.
calc::Pattern reference_pattern(const Setup& s);
qsim::QuantumRegister reference_input(const Setup& s);
std::vector<NodeId> classical_outputs(const Setup& s);  // O \ Otilde, sorted
// Alice's output labels: sorted Otilde, then reference qubits in register order.
std::vector<qsim::QubitLabel> alice_output_labels(const Setup& s);
calc::CqState reference_output(const Setup& s);

}  // namespace boqc::protocol
