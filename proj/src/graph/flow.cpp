#include <algorithm>
#include <map>

#include "boqc/graph.hpp"

namespace boqc {

std::optional<NodeId> Flow::inverse(NodeId v) const {
  for (auto [j, fj] : f) {
    if (fj == v) return j;
  }
  return std::nullopt;
}

int Flow::layer_of(NodeId v) const {
  for (std::size_t l = 0; l < layers.size(); ++l) {
    if (layers[l].count(v)) return static_cast<int>(l);
  }
  return -1;
}

bool verify_flow(const OpenGraph& g, const Flow& fl) {
  std::map<NodeId, int> layer;
  for (std::size_t l = 0; l < fl.layers.size(); ++l) {
    for (NodeId v : fl.layers[l]) {
      if (!g.contains(v) || !layer.emplace(v, static_cast<int>(l)).second) return false;
    }
  }
  if (layer.size() != g.vertices.size()) return false;

  const NodeSet measured = g.measured();
  if (fl.f.size() != measured.size()) return false;
  for (auto [j, fj] : fl.f) {
    if (!measured.count(j)) return false;
    if (!g.contains(fj) || g.inputs.count(fj)) return false;
    if (!g.has_edge(j, fj)) return false;                  // F0
    if (layer.at(fj) <= layer.at(j)) return false;          // F1
    for (NodeId k : g.neighbors(fj)) {                      // F2
      if (k != j && layer.at(k) <= layer.at(j)) return false;
    }
  }
  return true;
}

// Causal-flow search: peel the graph backwards from the outputs, one depth per round.
std::optional<Flow> find_flow(const OpenGraph& g) {
  std::map<NodeId, NodeSet> adj;
  for (NodeId v : g.vertices) adj[v];
  for (auto [a, b] : g.edges) {
    adj[a].insert(b);
    adj[b].insert(a);
  }

  Flow fl;
  std::map<NodeId, int> depth;
  NodeSet processed = g.outputs;
  for (NodeId v : g.outputs) depth[v] = 0;
  NodeSet correctors;
  for (NodeId v : g.outputs) {
    if (!g.inputs.count(v)) correctors.insert(v);
  }

  for (int k = 1;; ++k) {
    NodeSet fresh;
    NodeSet used;
    for (NodeId v : correctors) {
      NodeId candidate = 0;
      int open = 0;
      for (NodeId u : adj[v]) {
        if (!processed.count(u)) {
          candidate = u;
          ++open;
        }
      }
      if (open == 1 && !fresh.count(candidate)) {
        fl.f[candidate] = v;
        depth[candidate] = k;
        fresh.insert(candidate);
        used.insert(v);
      }
    }
    if (fresh.empty()) break;
    processed.insert(fresh.begin(), fresh.end());
    for (NodeId v : used) correctors.erase(v);
    for (NodeId u : fresh) {
      if (!g.inputs.count(u)) correctors.insert(u);
    }
  }

  if (processed.size() != g.vertices.size()) return std::nullopt;

  int max_depth = 0;
  for (auto [v, d] : depth) max_depth = std::max(max_depth, d);
  fl.layers.assign(static_cast<std::size_t>(max_depth) + 1, {});
  for (auto [v, d] : depth) fl.layers[static_cast<std::size_t>(max_depth - d)].insert(v);
  return fl;
}

TotalOrder linearize(const Flow& fl, TieBreak rule) {
  TotalOrder out;
  for (const NodeSet& layer : fl.layers) {
    if (rule == TieBreak::ascending_id) {
      out.insert(out.end(), layer.begin(), layer.end());
    } else {
      out.insert(out.end(), layer.rbegin(), layer.rend());
    }
  }
  return out;
}

bool is_permutation_of(const TotalOrder& order, const NodeSet& vertices) {
  if (order.size() != vertices.size()) return false;
  NodeSet seen(order.begin(), order.end());
  return seen == vertices;
}

bool consistent_with_layers(const TotalOrder& order, const std::vector<NodeSet>& layers) {
  std::map<NodeId, int> layer;
  for (std::size_t l = 0; l < layers.size(); ++l) {
    for (NodeId v : layers[l]) layer[v] = static_cast<int>(l);
  }
  if (order.size() != layer.size()) return false;
  int last = 0;
  for (NodeId v : order) {
    auto it = layer.find(v);
    if (it == layer.end() || it->second < last) return false;
    last = it->second;
  }
  return true;
}

bool respects_flow(const OpenGraph& g, const Flow& fl, const TotalOrder& order) {
  if (!is_permutation_of(order, g.vertices)) return false;
  std::map<NodeId, std::size_t> pos;
  for (std::size_t p = 0; p < order.size(); ++p) pos[order[p]] = p;
  for (auto [j, fj] : fl.f) {
    if (!pos.count(j) || !pos.count(fj) || pos[fj] <= pos[j]) return false;
    for (NodeId k : g.neighbors(fj)) {
      if (k != j && pos[k] <= pos[j]) return false;
    }
  }
  return true;
}

NodeSet assignment_set(const OpenGraph& g, const TotalOrder& order, NodeId i) {
  if (!g.contains(i)) throw NotFound("node " + std::to_string(i) + " is not in the graph");
  NodeSet taken = g.inputs;
  bool found = false;
  for (NodeId j : order) {
    if (j == i) {
      found = true;
      break;
    }
    NodeSet nj = g.closed_neighborhood(j);
    taken.insert(nj.begin(), nj.end());
  }
  if (!found) throw NotFound("node " + std::to_string(i) + " is not in the total order");
  NodeSet out;
  for (NodeId v : g.closed_neighborhood(i)) {
    if (!taken.count(v)) out.insert(v);
  }
  return out;
}

std::map<NodeId, NodeSet> assignment_sets(const OpenGraph& g, const TotalOrder& order) {
  std::map<NodeId, NodeSet> out;
  NodeSet taken = g.inputs;
  for (NodeId i : order) {
    if (!g.contains(i)) throw NotFound("node " + std::to_string(i) + " is not in the graph");
    NodeSet& a = out[i];
    for (NodeId v : g.closed_neighborhood(i)) {
      if (!taken.count(v)) a.insert(v);
    }
    taken.insert(a.begin(), a.end());
  }
  return out;
}

NodeSet z_dependencies(const OpenGraph& g, const Flow& fl, NodeId i) {
  NodeSet out;
  for (auto [k, fk] : fl.f) {
    if (k != i && g.has_edge(i, fk)) out.insert(k);
  }
  return out;
}

}  // namespace boqc
