#include <algorithm>
#include <map>
#include <random>

#include "boqc/graph.hpp"

namespace boqc {

OpenGraph random_flow_graph(std::mt19937_64& rng, int n_max, int n_min) {
  const int n = std::uniform_int_distribution<int>(std::max(2, n_min), n_max)(rng);
  const int wires = std::uniform_int_distribution<int>(1, std::max(1, std::min(4, n / 2)))(rng);
  std::vector<int> length(static_cast<std::size_t>(wires), 2);
  for (int extra = n - 2 * wires; extra > 0; --extra) {
    length[std::uniform_int_distribution<std::size_t>(0, length.size() - 1)(rng)]++;
  }
  std::vector<NodeId> ids(static_cast<std::size_t>(n));
  for (int v = 0; v < n; ++v) ids[static_cast<std::size_t>(v)] = v + 1;
  std::shuffle(ids.begin(), ids.end(), rng);

  OpenGraph g;
  g.vertices = NodeSet(ids.begin(), ids.end());
  std::size_t next = 0;
  std::vector<NodeId> heads;
  for (int len : length) {
    NodeId prev = ids[next++];
    heads.push_back(prev);
    for (int k = 1; k < len; ++k) {
      const NodeId cur = ids[next++];
      g.add_edge(prev, cur);
      prev = cur;
    }
    g.outputs.insert(prev);
  }
  std::bernoulli_distribution half(0.5);
  for (NodeId h : heads) {
    if (half(rng)) g.inputs.insert(h);
  }
  if (g.inputs.empty()) g.inputs.insert(heads.front());
  g.alice_nodes = g.vertices;

  std::vector<Edge> candidates;
  for (NodeId a : g.vertices) {
    for (NodeId b : g.vertices) {
      if (a < b && !g.has_edge(a, b)) candidates.emplace_back(a, b);
    }
  }
  std::shuffle(candidates.begin(), candidates.end(), rng);
  std::bernoulli_distribution keep(std::uniform_real_distribution<double>(0.2, 0.7)(rng));
  for (auto [a, b] : candidates) {
    if (!keep(rng)) continue;
    g.add_edge(a, b);
    if (!find_flow(g)) g.edges.erase(make_edge(a, b));
  }
  return g;
}

TotalOrder random_flow_order(std::mt19937_64& rng, const OpenGraph& g, const Flow& fl) {
  std::map<NodeId, NodeSet> after;  // j must precede every node in after[j]
  std::map<NodeId, int> indegree;
  for (NodeId v : g.vertices) indegree[v] = 0;
  for (auto [j, fj] : fl.f) {
    after[j].insert(fj);
    for (NodeId k : g.neighbors(fj)) {
      if (k != j) after[j].insert(k);
    }
  }
  for (const auto& [j, s] : after) {
    for (NodeId k : s) indegree[k]++;
  }
  TotalOrder out;
  std::vector<NodeId> ready;
  for (auto [v, d] : indegree) {
    if (d == 0) ready.push_back(v);
  }
  while (!ready.empty()) {
    const std::size_t pick = std::uniform_int_distribution<std::size_t>(0, ready.size() - 1)(rng);
    const NodeId v = ready[pick];
    ready.erase(ready.begin() + static_cast<std::ptrdiff_t>(pick));
    out.push_back(v);
    for (NodeId k : after[v]) {
      if (--indegree[k] == 0) ready.push_back(k);
    }
  }
  return out;
}

}  // namespace boqc
