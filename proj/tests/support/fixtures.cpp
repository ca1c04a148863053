#include "fixtures.hpp"

#include "oracles.hpp"

namespace boqc::testing {

OpenGraph grover_graph() {
  OpenGraph g = OpenGraph::make({1, 2, 3, 4, 5, 6, 7, 8},
                                {{2, 3}, {1, 4}, {3, 4}, {5, 6}, {6, 7}, {5, 8}, {7, 2}, {8, 1}}, {5, 6},
                                {3, 4});
  g.alice_nodes = {1, 2, 3, 4};
  g.oscar_nodes = {5, 6, 7, 8};
  return g;
}

AliceDraft grover_alice() {
  AliceDraft a;
  a.graph = OpenGraph::make({1, 2, 3, 4}, {{2, 3}, {1, 4}, {3, 4}}, {}, {3, 4});
  a.slots = {SlotMarker{100, {1, 2}}};
  return a;
}

OscarDraft grover_oscar() {
  OscarDraft o;
  o.vertices = {5, 6, 7, 8};
  o.edges = {make_edge(5, 6), make_edge(6, 7), make_edge(5, 8)};
  o.inputs = {5, 6};
  return o;
}

OpenGraph lazy_graph() {
  return OpenGraph::make({1, 2, 3, 4, 5, 6, 7},
                         {{1, 3}, {2, 3}, {2, 4}, {4, 6}, {4, 5}, {3, 5}, {3, 7}, {6, 7}}, {1, 2},
                         {5, 6, 7});
}

OpenGraph path_graph() { return OpenGraph::make({1, 2, 3}, {{1, 2}, {2, 3}}, {1}, {3}); }

namespace {

protocol::Setup fill_setup(std::mt19937_64& rng, const protocol::PreProtocol& pre, int b) {
  protocol::Setup s;
  s.graph = pre.graph;
  s.flow = pre.flow;
  s.order = pre.order;
  s.b = b;
  NodeSet alice_angles, oscar_angles;
  for (NodeId v : s.graph.vertices) {
    if (s.graph.quantum_outputs.count(v)) continue;
    (s.graph.oscar_nodes.count(v) ? oscar_angles : alice_angles).insert(v);
  }
  s.phi = random_angles(rng, alice_angles, b);
  s.psi = random_angles(rng, oscar_angles, b);
  std::bernoulli_distribution coin;
  for (NodeId v : s.graph.inputs) {
    if (!s.graph.quantum_inputs.count(v)) s.classical_input[v] = coin(rng) ? 1 : 0;
  }
  if (!s.graph.quantum_inputs.empty()) {
    s.quantum_input = random_input_with_references(rng, s.graph.quantum_inputs, 1000);
  }
  return s;
}

}  // namespace

protocol::Setup random_setup(std::mt19937_64& rng, const OpenGraph& g, protocol::IoMode mode, int b) {
  return fill_setup(rng, protocol::pre_protocol(g, b, mode), b);
}

protocol::Setup grover_setup(std::mt19937_64& rng, protocol::IoMode mode, int b) {
  return fill_setup(rng, protocol::pre_protocol(grover_alice(), grover_oscar(), {{7, 2}, {8, 1}}, b, mode), b);
}

}  // namespace boqc::testing
