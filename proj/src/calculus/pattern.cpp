#include <map>
#include <sstream>

#include "../common/overloaded.hpp"
#include "boqc/calculus.hpp"

namespace boqc::calc {

namespace {

using detail::overloaded;

std::string list(const NodeSet& s) {
  std::ostringstream os;
  os << '{';
  bool first = true;
  for (NodeId v : s) {
    os << (first ? "" : ",") << v;
    first = false;
  }
  os << '}';
  return os.str();
}

enum class Life { unborn, live, measured };

}  // namespace

int signal_parity(const SignalState& s, const NodeSet& nodes) {
  int p = 0;
  for (NodeId v : nodes) {
    auto it = s.find(v);
    if (it != s.end()) p ^= it->second & 1;
  }
  return p;
}

std::optional<std::string> runnability_violation(const Pattern& p) {
  std::map<NodeId, Life> life;
  for (NodeId v : p.inputs) life[v] = Life::live;
  auto state = [&](NodeId v) {
    auto it = life.find(v);
    return it == life.end() ? Life::unborn : it->second;
  };
  auto signals_ready = [&](const NodeSet& sig) -> std::optional<NodeId> {
    for (NodeId s : sig) {
      if (state(s) != Life::measured) return s;
    }
    return std::nullopt;
  };

  for (std::size_t idx = 0; idx < p.commands.size(); ++idx) {
    const std::string at = " (command " + std::to_string(idx) + ": " + describe(p.commands[idx]) + ")";
    std::optional<std::string> err = std::visit(
        overloaded{
            [&](const Prepare& c) -> std::optional<std::string> {
              if (p.inputs.count(c.node)) return "R2: input node prepared" + at;
              if (state(c.node) != Life::unborn) return "R1: node prepared twice" + at;
              life[c.node] = Life::live;
              return std::nullopt;
            },
            [&](const Entangle& c) -> std::optional<std::string> {
              if (c.a == c.b) return "R1: entangling a node with itself" + at;
              if (state(c.a) != Life::live || state(c.b) != Life::live) {
                return "R1: entangling a qubit that is not live" + at;
              }
              return std::nullopt;
            },
            [&](const Measure& c) -> std::optional<std::string> {
              if (state(c.node) != Life::live) return "R1: measuring a qubit that is not live" + at;
              if (signals_ready(c.x_signals) || signals_ready(c.z_signals)) {
                return "R0: depends on an outcome not yet measured" + at;
              }
              if (p.outputs.count(c.node)) return "R2: output node measured" + at;
              life[c.node] = Life::measured;
              return std::nullopt;
            },
            [&](const CorrectX& c) -> std::optional<std::string> {
              if (state(c.node) != Life::live) return "R1: correcting a qubit that is not live" + at;
              if (signals_ready(c.signals)) return "R0: depends on an outcome not yet measured" + at;
              return std::nullopt;
            },
            [&](const CorrectZ& c) -> std::optional<std::string> {
              if (state(c.node) != Life::live) return "R1: correcting a qubit that is not live" + at;
              if (signals_ready(c.signals)) return "R0: depends on an outcome not yet measured" + at;
              return std::nullopt;
            },
        },
        p.commands[idx]);
    if (err) return err;
  }

  for (NodeId o : p.outputs) {
    if (state(o) != Life::live) return "R2: output node " + std::to_string(o) + " is not live at the end";
  }
  for (auto [v, l] : life) {
    if (l == Life::live && !p.outputs.count(v)) {
      return "R2: non-output node " + std::to_string(v) + " is never measured";
    }
  }
  return std::nullopt;
}

int max_concurrent_qubits(const Pattern& p) {
  int live = static_cast<int>(p.inputs.size());
  int peak = live;
  for (const Command& c : p.commands) {
    if (std::holds_alternative<Prepare>(c)) {
      peak = std::max(peak, ++live);
    } else if (std::holds_alternative<Measure>(c)) {
      --live;
    }
  }
  return peak;
}

std::vector<LazyStep> lazy_profile(const OpenGraph& g, const TotalOrder& order) {
  const auto assigned = assignment_sets(g, order);
  std::vector<LazyStep> out;
  int live = static_cast<int>(g.inputs.size());
  for (NodeId i : order) {
    LazyStep step{i, assigned.at(i), 0, 0};
    live += static_cast<int>(step.prepared.size());
    step.live_peak = live;
    if (!g.outputs.count(i)) --live;
    step.live_after = live;
    out.push_back(std::move(step));
  }
  return out;
}

std::string describe(const Command& c) {
  return std::visit(
      overloaded{
          [](const Prepare& p) { return "N" + std::to_string(p.node) + "(" + std::to_string(p.angle.k()) + ")"; },
          [](const Entangle& e) { return "E" + std::to_string(e.a) + "," + std::to_string(e.b); },
          [](const Measure& m) {
            return "M" + std::to_string(m.node) + "(" + std::to_string(m.angle.k()) + ") x" +
                   list(m.x_signals) + " z" + list(m.z_signals);
          },
          [](const CorrectX& x) { return "X" + std::to_string(x.node) + list(x.signals); },
          [](const CorrectZ& z) { return "Z" + std::to_string(z.node) + list(z.signals); },
      },
      c);
}

}  // namespace boqc::calc
