#include <algorithm>

#include "../common/overloaded.hpp"
#include "boqc/protocol/engine.hpp"

namespace boqc::protocol {

using detail::overloaded;

std::size_t Program::index_of(NodeId v) const {
  auto it = std::lower_bound(nodes.begin(), nodes.end(), v, [](const NodeInfo& n, NodeId id) { return n.id < id; });
  if (it == nodes.end() || it->id != v) throw NotFound("node " + std::to_string(v) + " is not in the graph");
  return static_cast<std::size_t>(it - nodes.begin());
}

namespace {

class Builder {
 public:
  Builder(const Setup& s, Program& p) : s_(s), p_(p) {
    for (std::size_t k = 0; k < s.order.size(); ++k) pos_[s.order[k]] = k;
  }

  void client_qubit(NodeId v) {
    const std::size_t i = p_.index_of(v);
    if (p_.world == World::real) {
      if (p_.nodes[i].quantum_input) add(step::DrawKey{i, true});
      add(step::DrawPad{i});
      add(step::ClientSend{i});
    } else {
      add(step::SimEprHalf{i});
      if (p_.nodes[i].quantum_input) add(step::ResourceTeleportInput{i});
    }
    add(step::Snapshot{"recv:" + std::to_string(v), i});
  }

  void fresh_qubit(NodeId v) {
    const std::size_t i = p_.index_of(v);
    if (p_.nodes[i].quantum_output) {
      add(step::BobPrepareOutput{i});
    } else {
      client_qubit(v);
    }
  }

  void measurement_round(NodeId v) {
    const std::size_t i = p_.index_of(v);
    if (p_.world == World::real) {
      add(step::DrawKey{i, false});
    } else {
      add(step::SimDrawDelta{i});
    }
    add(step::SendAngle{i});
    add(step::Snapshot{"pre:" + std::to_string(v), std::nullopt});
    add(step::BobMeasure{i});
    add(step::BobReport{i});
    if (p_.world == World::real) {
      add(step::ClientsDecode{i});
    } else {
      add(step::ResourceMeasure{i});
    }
  }

  void finish_node(NodeId v) {
    if (s_.graph.quantum_outputs.count(v)) {
      add(step::ReturnOutput{p_.index_of(v)});
    } else {
      measurement_round(v);
    }
  }

  void entangle(const std::vector<Edge>& edges) {
    step::BobEntangle e;
    for (auto [a, b] : edges) e.edges.emplace_back(p_.index_of(a), p_.index_of(b));
    if (!e.edges.empty()) add(std::move(e));
  }

  void build_boqc() {
    if (p_.world == World::real) add(step::KeyShare{});
    for (NodeId v : s_.order) {
      if (!s_.graph.quantum_outputs.count(v)) client_qubit(v);
    }
    for (NodeId v : s_.order) {
      if (s_.graph.quantum_outputs.count(v)) add(step::BobPrepareOutput{p_.index_of(v)});
    }
    entangle(std::vector<Edge>(s_.graph.edges.begin(), s_.graph.edges.end()));
    for (NodeId v : s_.order) {
      if (!s_.graph.quantum_outputs.count(v)) measurement_round(v);
    }
    for (NodeId v : s_.order) {
      if (s_.graph.quantum_outputs.count(v)) add(step::ReturnOutput{p_.index_of(v)});
    }
    add(step::Snapshot{"final", std::nullopt});
  }

  void build_boqco() {
    if (p_.world == World::real) add(step::KeyShare{});
    const auto assigned = assignment_sets(s_.graph, s_.order);
    for (NodeId v : s_.order) {
      if (s_.graph.inputs.count(v)) client_qubit(v);
    }
    for (NodeId i : s_.order) {
      std::vector<NodeId> fresh(assigned.at(i).begin(), assigned.at(i).end());
      std::sort(fresh.begin(), fresh.end(), [&](NodeId a, NodeId b) { return pos_.at(a) < pos_.at(b); });
      for (NodeId v : fresh) fresh_qubit(v);
      std::vector<Edge> later;
      for (NodeId j : s_.graph.neighbors(i)) {
        if (pos_.at(j) > pos_.at(i)) later.emplace_back(i, j);
      }
      entangle(later);
      finish_node(i);
    }
    add(step::Snapshot{"final", std::nullopt});
  }

 private:
  void add(Step st) { p_.steps.push_back(std::move(st)); }

  const Setup& s_;
  Program& p_;
  std::map<NodeId, std::size_t> pos_;
};

}  // namespace

Program compile(const Setup& s, Variant variant, World world) {
  validate_setup(s);
  const OpenGraph& g = s.graph;
  Program p;
  p.variant = variant;
  p.world = world;
  p.b = s.b;
  p.info = public_info(s);

  for (NodeId v : g.vertices) {
    NodeInfo n;
    n.id = v;
    n.owner = g.oscar_nodes.count(v) ? Party::oscar : Party::alice;
    n.input = g.inputs.count(v) != 0;
    n.quantum_input = g.quantum_inputs.count(v) != 0;
    n.output = g.outputs.count(v) != 0;
    n.quantum_output = g.quantum_outputs.count(v) != 0;
    auto c = s.classical_input.find(v);
    n.classical_bit = (n.input && !n.quantum_input && c != s.classical_input.end()) ? c->second : 0;
    n.angle = base_angle(s, v);
    p.nodes.push_back(std::move(n));
  }
  for (NodeInfo& n : p.nodes) {
    if (auto parent = s.flow.inverse(n.id)) n.flow_parent = p.index_of(*parent);
    for (NodeId k : z_dependencies(g, s.flow, n.id)) n.z_deps.push_back(p.index_of(k));
    for (NodeId k : g.neighbors(n.id)) {
      n.neighbors.push_back(p.index_of(k));
      if (g.quantum_inputs.count(k)) n.input_neighbors.push_back(p.index_of(k));
    }
  }

  p.initial = s.quantum_input;
  if (world == World::ideal) {
    for (NodeId v : g.quantum_inputs) p.initial.relabel(v, kAliceInputBase + v);
  }
  for (qsim::QubitLabel l : s.quantum_input.labels()) {
    if (!g.quantum_inputs.count(static_cast<NodeId>(l))) p.references.push_back(l);
  }
  p.output_labels = alice_output_labels(s);
  for (NodeId v : classical_outputs(s)) p.classical_outputs.push_back(p.index_of(v));

  Builder b(s, p);
  if (variant == Variant::boqc) {
    b.build_boqc();
  } else {
    b.build_boqco();
  }
  return p;
}

std::string describe(const Step& st, const Program& p) {
  auto id = [&](std::size_t i) { return std::to_string(p.nodes[i].id); };
  return std::visit(overloaded{
                        [&](const step::KeyShare&) { return std::string("key-share"); },
                        [&](const step::DrawKey& s) { return std::string(s.is_t ? "draw-t " : "draw-r ") + id(s.v); },
                        [&](const step::DrawPad& s) { return "draw-pad " + id(s.v); },
                        [&](const step::ClientSend& s) { return "send-qubit " + id(s.v); },
                        [&](const step::BobPrepareOutput& s) { return "bob-prepare " + id(s.v); },
                        [&](const step::BobEntangle& s) {
                          std::string out = "entangle";
                          for (auto [a, b] : s.edges) out += " " + id(a) + "-" + id(b);
                          return out;
                        },
                        [&](const step::SendAngle& s) { return "send-angle " + id(s.v); },
                        [&](const step::SimDrawDelta& s) { return "sim-draw-angle " + id(s.v); },
                        [&](const step::BobMeasure& s) { return "bob-measure " + id(s.v); },
                        [&](const step::BobReport& s) { return "bob-report " + id(s.v); },
                        [&](const step::ClientsDecode& s) { return "decode " + id(s.v); },
                        [&](const step::SimEprHalf& s) { return "sim-epr " + id(s.v); },
                        [&](const step::ResourceTeleportInput& s) { return "teleport-input " + id(s.v); },
                        [&](const step::ResourceMeasure& s) { return "resource-measure " + id(s.v); },
                        [&](const step::ReturnOutput& s) { return "return-output " + id(s.v); },
                        [&](const step::Snapshot& s) { return "snapshot " + s.key; },
                    },
                    st);
}

}  // namespace boqc::protocol
