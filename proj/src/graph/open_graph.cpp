#include <algorithm>
#include <string>

#include "boqc/graph.hpp"

namespace boqc {

namespace {

void require_subset(const NodeSet& sub, const NodeSet& super, const char* sub_name,
                    const char* super_name) {
  for (NodeId v : sub) {
    if (!super.count(v)) {
      throw ValidationError(std::string(sub_name) + " contains node " + std::to_string(v) +
                            " outside " + super_name);
    }
  }
}

}  // namespace

OpenGraph OpenGraph::make(NodeSet vertices, const std::vector<Edge>& edges, NodeSet inputs,
                          NodeSet outputs) {
  OpenGraph g;
  g.vertices = std::move(vertices);
  for (auto [a, b] : edges) g.add_edge(a, b);
  g.inputs = std::move(inputs);
  g.outputs = std::move(outputs);
  g.alice_nodes = g.vertices;
  return g;
}

void OpenGraph::add_edge(NodeId a, NodeId b) {
  if (a == b) throw ValidationError("self-loop on node " + std::to_string(a));
  if (!edges.insert(make_edge(a, b)).second) {
    throw ValidationError("duplicate edge (" + std::to_string(a) + "," + std::to_string(b) + ")");
  }
}

bool OpenGraph::has_edge(NodeId a, NodeId b) const { return edges.count(make_edge(a, b)) != 0; }

NodeSet OpenGraph::neighbors(NodeId v) const {
  NodeSet out;
  for (auto [a, b] : edges) {
    if (a == v) out.insert(b);
    if (b == v) out.insert(a);
  }
  return out;
}

NodeSet OpenGraph::closed_neighborhood(NodeId v) const {
  NodeSet out = neighbors(v);
  out.insert(v);
  return out;
}

NodeSet OpenGraph::measured() const {
  NodeSet out;
  std::set_difference(vertices.begin(), vertices.end(), outputs.begin(), outputs.end(),
                      std::inserter(out, out.end()));
  return out;
}

NodeSet OpenGraph::prepared() const {
  NodeSet out;
  std::set_difference(vertices.begin(), vertices.end(), inputs.begin(), inputs.end(),
                      std::inserter(out, out.end()));
  return out;
}

void OpenGraph::validate_structure() const {
  if (vertices.empty()) throw ValidationError("graph has no vertices");
  for (auto [a, b] : edges) {
    if (a == b) throw ValidationError("self-loop on node " + std::to_string(a));
    if (a > b) throw ValidationError("edge stored out of order");
    if (!vertices.count(a) || !vertices.count(b)) {
      throw ValidationError("edge (" + std::to_string(a) + "," + std::to_string(b) +
                            ") references an unknown node");
    }
  }
  if (inputs.empty()) throw ValidationError("input set I is empty");
  if (outputs.empty()) throw ValidationError("output set O is empty");
  require_subset(inputs, vertices, "I", "V");
  require_subset(outputs, vertices, "O", "V");
}

void OpenGraph::validate() const {
  validate_structure();
  require_subset(quantum_inputs, inputs, "tilde_I", "I");
  require_subset(quantum_outputs, outputs, "tilde_O", "O");
  require_subset(alice_nodes, vertices, "V_A", "V");
  require_subset(oscar_nodes, vertices, "V_O", "V");
  for (NodeId v : vertices) {
    const bool a = alice_nodes.count(v) != 0;
    const bool o = oscar_nodes.count(v) != 0;
    if (a == o) {
      throw ValidationError("node " + std::to_string(v) +
                            (a ? " belongs to both V_A and V_O" : " belongs to neither V_A nor V_O"));
    }
  }
  for (NodeId v : quantum_inputs) {
    if (oscar_nodes.count(v)) throw ValidationError("Oscar node " + std::to_string(v) + " in tilde_I");
  }
  for (NodeId v : quantum_outputs) {
    if (oscar_nodes.count(v)) throw ValidationError("Oscar node " + std::to_string(v) + " in tilde_O");
  }
}

}  // namespace boqc
