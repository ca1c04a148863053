#include <map>
#include <string>

#include "boqc/graph.hpp"

namespace boqc {

std::vector<NodeSet> connected_components(const NodeSet& vertices, const std::set<Edge>& edges) {
  std::map<NodeId, NodeId> parent;
  for (NodeId v : vertices) parent[v] = v;
  auto find = [&](NodeId v) {
    while (parent[v] != v) v = parent[v] = parent[parent[v]];
    return v;
  };
  for (auto [a, b] : edges) {
    NodeId ra = find(a), rb = find(b);
    if (ra != rb) parent[std::max(ra, rb)] = std::min(ra, rb);
  }
  std::map<NodeId, NodeSet> groups;
  for (NodeId v : vertices) groups[find(v)].insert(v);
  std::vector<NodeSet> out;
  for (auto& [root, members] : groups) out.push_back(std::move(members));
  return out;
}

OpenGraph join_graphs(const AliceDraft& alice, const OscarDraft& oscar,
                      const std::vector<Edge>& connection) {
  const OpenGraph& a = alice.graph;
  for (NodeId v : oscar.vertices) {
    if (a.contains(v)) throw ValidationError("node " + std::to_string(v) + " appears in both graphs");
  }
  for (auto [x, y] : oscar.edges) {
    if (!oscar.vertices.count(x) || !oscar.vertices.count(y)) {
      throw ValidationError("oscar edge references an unknown node");
    }
  }

  const auto components = oscar.vertices.empty() ? std::vector<NodeSet>{}
                                                 : connected_components(oscar.vertices, oscar.edges);
  if (components.size() != alice.slots.size()) {
    throw ValidationError("component-count mismatch: " + std::to_string(alice.slots.size()) +
                          " slots but " + std::to_string(components.size()) + " oracle components");
  }

  // every slot is replaced by exactly one component, and its whole boundary gets wired
  std::map<NodeId, std::size_t> slot_of_boundary;
  for (std::size_t s = 0; s < alice.slots.size(); ++s) {
    if (a.contains(alice.slots[s].id)) {
      throw ValidationError("slot marker " + std::to_string(alice.slots[s].id) + " collides with a vertex");
    }
    for (NodeId v : alice.slots[s].boundary) {
      if (!a.contains(v)) throw ValidationError("slot boundary node " + std::to_string(v) + " not in Alice's graph");
      slot_of_boundary[v] = s;
    }
  }
  std::map<std::size_t, std::size_t> slot_for_component;
  std::map<std::size_t, std::size_t> component_for_slot;
  std::set<NodeId> wired;
  for (auto [o, al] : connection) {
    std::size_t comp = components.size();
    for (std::size_t c = 0; c < components.size(); ++c) {
      if (components[c].count(o)) comp = c;
    }
    if (comp == components.size()) {
      throw InvalidConnection("connection endpoint " + std::to_string(o) + " is not an oracle node");
    }
    auto it = slot_of_boundary.find(al);
    if (it == slot_of_boundary.end()) {
      throw InvalidConnection("connection endpoint " + std::to_string(al) + " is not on a slot boundary");
    }
    auto [cs, fresh_c] = slot_for_component.emplace(comp, it->second);
    auto [sc, fresh_s] = component_for_slot.emplace(it->second, comp);
    if (cs->second != it->second || sc->second != comp) {
      throw InvalidConnection("an oracle component must replace exactly one slot");
    }
    wired.insert(al);
  }
  for (auto [v, s] : slot_of_boundary) {
    if (!wired.count(v)) throw InvalidConnection("slot boundary node " + std::to_string(v) + " left unwired");
  }

  OpenGraph g = a;
  g.alice_nodes = a.vertices;
  g.oscar_nodes = oscar.vertices;
  g.vertices.insert(oscar.vertices.begin(), oscar.vertices.end());
  g.edges.insert(oscar.edges.begin(), oscar.edges.end());
  g.inputs.insert(oscar.inputs.begin(), oscar.inputs.end());
  g.outputs.insert(oscar.outputs.begin(), oscar.outputs.end());
  for (auto [o, al] : connection) g.add_edge(o, al);
  g.validate();
  if (!find_flow(g)) throw InvalidConnection("joined graph has no flow");
  return g;
}

}  // namespace boqc
