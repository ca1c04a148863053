#pragma once

#include <map>
#include <optional>
#include <random>
#include <set>
#include <utility>
#include <vector>

#include "boqc/angles.hpp"

namespace boqc {

using NodeId = int;
using NodeSet = std::set<NodeId>;
using Edge = std::pair<NodeId, NodeId>;
using TotalOrder = std::vector<NodeId>;

class NotFound : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

class InvalidConnection : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

inline Edge make_edge(NodeId a, NodeId b) { return a < b ? Edge{a, b} : Edge{b, a}; }

struct OpenGraph {
  NodeSet vertices;
  std::set<Edge> edges;  // stored with first < second
  NodeSet inputs;
  NodeSet outputs;
  NodeSet quantum_inputs;
  NodeSet quantum_outputs;
  NodeSet alice_nodes;
  NodeSet oscar_nodes;

  // Plain open graph owned entirely by Alice, classical I/O.
  static OpenGraph make(NodeSet vertices, const std::vector<Edge>& edges, NodeSet inputs,
                        NodeSet outputs);

  void add_edge(NodeId a, NodeId b);
  bool has_edge(NodeId a, NodeId b) const;
  bool contains(NodeId v) const { return vertices.count(v) != 0; }
  NodeSet neighbors(NodeId v) const;
  NodeSet closed_neighborhood(NodeId v) const;
  NodeSet measured() const;  // O^c
  NodeSet prepared() const;  // I^c

  // throws ValidationError describing the first broken invariant
  void validate() const;
  // invariants shared by every layer of the library (no ownership checks)
  void validate_structure() const;

  bool operator==(const OpenGraph&) const = default;
};

struct Flow {
  std::map<NodeId, NodeId> f;
  std::vector<NodeSet> layers;  // measurement order: layers.front() goes first

  std::optional<NodeId> inverse(NodeId v) const;
  int layer_of(NodeId v) const;  // -1 if absent

  bool operator==(const Flow&) const = default;
};

bool verify_flow(const OpenGraph& g, const Flow& fl);
std::optional<Flow> find_flow(const OpenGraph& g);

enum class TieBreak { ascending_id, descending_id };
TotalOrder linearize(const Flow& fl, TieBreak rule = TieBreak::ascending_id);

bool is_permutation_of(const TotalOrder& order, const NodeSet& vertices);
bool consistent_with_layers(const TotalOrder& order, const std::vector<NodeSet>& layers);
// j before f(j) and before every other neighbour of f(j)
bool respects_flow(const OpenGraph& g, const Flow& fl, const TotalOrder& order);

NodeSet assignment_set(const OpenGraph& g, const TotalOrder& order, NodeId i);
std::map<NodeId, NodeSet> assignment_sets(const OpenGraph& g, const TotalOrder& order);

// nodes k != i with i adjacent to f(k): the Z-signal dependencies of i
NodeSet z_dependencies(const OpenGraph& g, const Flow& fl, NodeId i);

struct SlotMarker {
  NodeId id = 0;                   // placeholder id, never a real vertex
  std::vector<NodeId> boundary;    // Alice nodes the black box attaches to
};

struct AliceDraft {
  OpenGraph graph;  // alice_nodes/oscar_nodes ignored
  std::vector<SlotMarker> slots;
};

struct OscarDraft {
  NodeSet vertices;
  std::set<Edge> edges;
  NodeSet inputs;
  NodeSet outputs;
};

// pairs are (oscar node, alice node)
OpenGraph join_graphs(const AliceDraft& alice, const OscarDraft& oscar,
                      const std::vector<Edge>& connection);

// paths ("wires") joined by random extra edges, keeping only edges that preserve a flow
OpenGraph random_flow_graph(std::mt19937_64& rng, int n_max, int n_min = 2);
// random linear extension of the order induced by the flow
TotalOrder random_flow_order(std::mt19937_64& rng, const OpenGraph& g, const Flow& fl);

std::vector<NodeSet> connected_components(const NodeSet& vertices, const std::set<Edge>& edges);

}  // namespace boqc
