#include <algorithm>
#include <cmath>

#include "boqc/protocol/setup.hpp"

namespace boqc::protocol {

std::string to_string(Variant v) { return v == Variant::boqc ? "boqc" : "boqco"; }

std::string to_string(IoMode m) {
  switch (m) {
    case IoMode::cc: return "cc";
    case IoMode::cq: return "cq";
    case IoMode::qc: return "qc";
    case IoMode::qq: return "qq";
  }
  return "?";
}

std::string to_string(Party p) {
  switch (p) {
    case Party::alice: return "alice";
    case Party::oscar: return "oscar";
    case Party::bob: return "bob";
  }
  return "?";
}

Variant parse_variant(const std::string& s) {
  if (s == "boqc") return Variant::boqc;
  if (s == "boqco") return Variant::boqco;
  throw ValidationError("unknown protocol '" + s + "' (expected boqc or boqco)");
}

IoMode parse_io_mode(const std::string& s) {
  if (s == "cc") return IoMode::cc;
  if (s == "cq") return IoMode::cq;
  if (s == "qc") return IoMode::qc;
  if (s == "qq") return IoMode::qq;
  throw ValidationError("unknown io mode '" + s + "' (expected cc, cq, qc or qq)");
}

IoMode Setup::io_mode() const {
  const bool qi = !graph.quantum_inputs.empty();
  const bool qo = !graph.quantum_outputs.empty();
  if (qi) return qo ? IoMode::qq : IoMode::qc;
  return qo ? IoMode::cq : IoMode::cc;
}

void apply_io_mode(OpenGraph& g, IoMode mode) {
  g.quantum_inputs = (mode == IoMode::qc || mode == IoMode::qq) ? g.inputs : NodeSet{};
  g.quantum_outputs = (mode == IoMode::cq || mode == IoMode::qq) ? g.outputs : NodeSet{};
}

PublicInfo public_info(const Setup& s) {
  PublicInfo p;
  p.vertices = s.graph.vertices;
  p.edges = s.graph.edges;
  p.quantum_inputs = s.graph.quantum_inputs;
  p.quantum_outputs = s.graph.quantum_outputs;
  p.alice_nodes = s.graph.alice_nodes;
  p.oscar_nodes = s.graph.oscar_nodes;
  p.layers = s.flow.layers;
  p.order = s.order;
  p.b = s.b;
  return p;
}

DyadicAngle base_angle(const Setup& s, NodeId v) {
  const calc::Angles& mine = s.graph.oscar_nodes.count(v) ? s.psi : s.phi;
  auto it = mine.find(v);
  return it == mine.end() ? DyadicAngle::zero(s.b) : it->second;
}

namespace {

void check_angles(const calc::Angles& angles, const NodeSet& owned, const Setup& s, const char* name) {
  for (const auto& [v, a] : angles) {
    if (!owned.count(v)) throw ValidationError(std::string(name) + " has an angle for node " + std::to_string(v) +
                                               " which its owner does not hold");
    if (s.graph.quantum_outputs.count(v)) {
      throw ValidationError(std::string(name) + " has an angle for quantum output " + std::to_string(v));
    }
    if (a.b() != s.b) throw PrecisionMismatch(std::string(name) + " angle at node " + std::to_string(v) +
                                              " uses b=" + std::to_string(a.b()) + ", run uses b=" +
                                              std::to_string(s.b));
  }
  for (NodeId v : owned) {
    if (!s.graph.outputs.count(v) && !angles.count(v)) {
      throw ValidationError(std::string("missing ") + name + " angle for measured node " + std::to_string(v));
    }
  }
}

}  // namespace

void validate_setup(const Setup& s) {
  const OpenGraph& g = s.graph;
  g.validate();
  if (s.b < 1 || s.b > kMaxPrecision) throw ValidationError("precision b out of range");
  for (NodeId v : g.inputs) {
    if (g.outputs.count(v)) throw ValidationError("node " + std::to_string(v) + " is both input and output");
  }
  for (NodeId v : g.vertices) {
    if (static_cast<qsim::QubitLabel>(v) < 0) throw ValidationError("node ids must be non-negative");
  }
  if (!verify_flow(g, s.flow)) throw ValidationError("flow does not satisfy the flow conditions");
  if (!is_permutation_of(s.order, g.vertices)) throw ValidationError("total order is not a permutation of V");
  if (!consistent_with_layers(s.order, s.flow.layers)) {
    throw ValidationError("total order is inconsistent with the layering");
  }
  if (!respects_flow(g, s.flow, s.order)) throw ValidationError("total order is inconsistent with the flow");

  check_angles(s.phi, g.alice_nodes, s, "phi");
  check_angles(s.psi, g.oscar_nodes, s, "psi");

  for (const auto& [v, c] : s.classical_input) {
    if (!g.inputs.count(v) || g.quantum_inputs.count(v)) {
      throw ValidationError("classical input bit for node " + std::to_string(v) + " which is not a classical input");
    }
    if (c != 0 && c != 1) throw ValidationError("classical input bits must be 0 or 1");
  }

  const auto& labels = s.quantum_input.labels();
  for (NodeId v : g.quantum_inputs) {
    if (!s.quantum_input.holds(v)) throw ValidationError("quantum input register lacks node " + std::to_string(v));
  }
  for (qsim::QubitLabel l : labels) {
    if (l < 0 || l >= kReservedLabels) throw ValidationError("reference qubit label out of range");
    const auto v = static_cast<NodeId>(l);
    if (g.quantum_inputs.count(v)) continue;
    if (g.contains(v)) {
      throw ValidationError("input register holds node " + std::to_string(l) + " which is not a quantum input");
    }
  }
  if (std::abs(s.quantum_input.norm() - 1.0) > 1e-10) throw ValidationError("quantum input is not normalized");
}

namespace {

PreProtocol finish(OpenGraph g, int b, IoMode mode) {
  apply_io_mode(g, mode);
  g.validate();
  auto fl = find_flow(g);
  if (!fl) throw InvalidConnection("graph has no flow");
  PreProtocol out;
  out.flow = *fl;
  out.order = linearize(out.flow);
  out.graph = std::move(g);
  Setup probe;
  probe.graph = out.graph;
  probe.flow = out.flow;
  probe.order = out.order;
  probe.b = b;
  out.info = public_info(probe);
  return out;
}

}  // namespace

PreProtocol pre_protocol(const AliceDraft& alice, const OscarDraft& oscar, const std::vector<Edge>& connection, int b,
                         IoMode mode) {
  if (b < 1 || b > kMaxPrecision) throw ValidationError("precision b out of range");
  return finish(join_graphs(alice, oscar, connection), b, mode);
}

PreProtocol pre_protocol(const OpenGraph& graph, int b, IoMode mode) {
  if (b < 1 || b > kMaxPrecision) throw ValidationError("precision b out of range");
  OpenGraph g = graph;
  if (g.alice_nodes.empty() && g.oscar_nodes.empty()) g.alice_nodes = g.vertices;
  return finish(std::move(g), b, mode);
}

std::vector<NodeId> classical_outputs(const Setup& s) {
  std::vector<NodeId> out;
  for (NodeId v : s.graph.outputs) {
    if (!s.graph.quantum_outputs.count(v)) out.push_back(v);
  }
  return out;
}

std::vector<qsim::QubitLabel> alice_output_labels(const Setup& s) {
  std::vector<qsim::QubitLabel> out(s.graph.quantum_outputs.begin(), s.graph.quantum_outputs.end());
  for (qsim::QubitLabel l : s.quantum_input.labels()) {
    if (!s.graph.quantum_inputs.count(static_cast<NodeId>(l))) out.push_back(l);
  }
  return out;
}

calc::Pattern reference_pattern(const Setup& s) {
  calc::Angles theta;
  for (NodeId v : s.graph.measured()) theta.emplace(v, base_angle(s, v));
  calc::Pattern p = calc::build_standard_pattern(s.graph, s.flow, theta, s.order);
  for (NodeId v : classical_outputs(s)) p.commands.push_back(calc::Measure{v, base_angle(s, v), {}, {}});
  p.outputs = s.graph.quantum_outputs;
  return p;
}

qsim::QuantumRegister reference_input(const Setup& s) {
  qsim::QuantumRegister reg = s.quantum_input;
  for (NodeId v : s.graph.inputs) {
    if (s.graph.quantum_inputs.count(v)) continue;
    auto it = s.classical_input.find(v);
    const int c = it == s.classical_input.end() ? 0 : it->second;
    reg.alloc_plus(v, c ? DyadicAngle::pi(s.b) : DyadicAngle::zero(s.b));
  }
  return reg;
}

calc::CqState reference_output(const Setup& s) {
  return calc::cq_channel_of_pattern(reference_pattern(s), reference_input(s), classical_outputs(s));
}

}  // namespace boqc::protocol
