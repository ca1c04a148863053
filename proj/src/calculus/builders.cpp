#include <map>

#include "boqc/calculus.hpp"

namespace boqc::calc {

namespace {

int precision_of(const Angles& theta) {
  int b = 0;
  for (const auto& [v, a] : theta) {
    if (b != 0 && a.b() != b) throw PrecisionMismatch("pattern angles use different precisions");
    b = a.b();
  }
  return b == 0 ? 1 : b;
}

void require_flow(const OpenGraph& g, const Flow& fl) {
  g.validate_structure();
  if (!verify_flow(g, fl)) throw ValidationError("flow does not satisfy the flow conditions");
}

const DyadicAngle& angle_for(const Angles& theta, NodeId v) {
  auto it = theta.find(v);
  if (it == theta.end()) throw ValidationError("missing angle for measured node " + std::to_string(v));
  return it->second;
}

TotalOrder order_or_default(const OpenGraph& g, const Flow& fl, const TotalOrder& order) {
  TotalOrder out = order.empty() ? linearize(fl) : order;
  if (!respects_flow(g, fl, out)) throw ValidationError("total order is inconsistent with the flow");
  return out;
}

NodeSet x_dependency(const Flow& fl, NodeId v) {
  auto inv = fl.inverse(v);
  return inv ? NodeSet{*inv} : NodeSet{};
}

void append_corrections(Pattern& p, NodeId v, const NodeSet& x, const NodeSet& z) {
  if (!x.empty()) p.commands.push_back(CorrectX{v, x});
  if (!z.empty()) p.commands.push_back(CorrectZ{v, z});
}

}  // namespace

Pattern build_standard_pattern(const OpenGraph& g, const Flow& fl, const Angles& theta,
                               const TotalOrder& order) {
  require_flow(g, fl);
  const int b = precision_of(theta);
  const TotalOrder ord = order_or_default(g, fl, order);
  Pattern p{{}, g.inputs, g.outputs};
  for (NodeId v : g.prepared()) p.commands.push_back(Prepare{v, DyadicAngle::zero(b)});
  for (auto [a, c] : g.edges) p.commands.push_back(Entangle{a, c});
  for (NodeId i : ord) {
    if (g.outputs.count(i)) continue;
    p.commands.push_back(Measure{i, angle_for(theta, i), {}, {}});
    const NodeId fi = fl.f.at(i);
    p.commands.push_back(CorrectX{fi, {i}});
    for (NodeId k : g.neighbors(fi)) {
      if (k != i) p.commands.push_back(CorrectZ{k, {i}});
    }
  }
  return p;
}

Pattern build_p2_pattern(const OpenGraph& g, const Flow& fl, const Angles& theta,
                         const TotalOrder& order) {
  require_flow(g, fl);
  const int b = precision_of(theta);
  const TotalOrder ord = order_or_default(g, fl, order);
  Pattern p{{}, g.inputs, g.outputs};
  for (NodeId v : g.prepared()) p.commands.push_back(Prepare{v, DyadicAngle::zero(b)});
  for (auto [a, c] : g.edges) p.commands.push_back(Entangle{a, c});
  for (NodeId i : ord) {
    if (g.outputs.count(i)) continue;
    append_corrections(p, i, x_dependency(fl, i), z_dependencies(g, fl, i));
    p.commands.push_back(Measure{i, angle_for(theta, i), {}, {}});
  }
  for (NodeId j : g.outputs) append_corrections(p, j, x_dependency(fl, j), z_dependencies(g, fl, j));
  return p;
}

Pattern build_lazy_pattern(const OpenGraph& g, const Flow& fl, const TotalOrder& order,
                           const Angles& theta) {
  require_flow(g, fl);
  if (!respects_flow(g, fl, order)) throw ValidationError("total order is inconsistent with the flow");
  const int b = precision_of(theta);
  std::map<NodeId, std::size_t> pos;
  for (std::size_t k = 0; k < order.size(); ++k) pos[order[k]] = k;
  const auto assigned = assignment_sets(g, order);

  Pattern p{{}, g.inputs, g.outputs};
  for (NodeId i : order) {
    for (NodeId v : assigned.at(i)) p.commands.push_back(Prepare{v, DyadicAngle::zero(b)});
    for (NodeId j : g.neighbors(i)) {
      if (pos[j] > pos[i]) p.commands.push_back(Entangle{i, j});
    }
    if (g.outputs.count(i)) {
      append_corrections(p, i, x_dependency(fl, i), z_dependencies(g, fl, i));
    } else {
      p.commands.push_back(Measure{i, angle_for(theta, i), x_dependency(fl, i), z_dependencies(g, fl, i)});
    }
  }
  return p;
}

}  // namespace boqc::calc
