#include <algorithm>
#include <cmath>

#include "../common/overloaded.hpp"
#include "boqc/calculus.hpp"

namespace boqc::calc {

using detail::overloaded;
using qsim::QuantumRegister;

namespace {

std::vector<NodeId> measured_nodes(const Pattern& p) {
  std::vector<NodeId> out;
  for (const Command& c : p.commands) {
    if (auto m = std::get_if<Measure>(&c)) out.push_back(m->node);
  }
  return out;
}

void require_enumerable(std::size_t measured) {
  if (measured > static_cast<std::size_t>(kMaxEnumeratedMeasurements)) {
    throw SizeError("pattern has " + std::to_string(measured) + " measurements; branch enumeration is capped at 2^" +
                    std::to_string(kMaxEnumeratedMeasurements));
  }
}

// calls fn(run) for every outcome branch of nonzero probability
template <class Fn>
void for_each_branch(const Pattern& p, const QuantumRegister& input, Fn&& fn) {
  const auto measured = measured_nodes(p);
  require_enumerable(measured.size());
  for (std::size_t bits = 0; bits < (std::size_t{1} << measured.size()); ++bits) {
    std::map<qsim::QubitLabel, int> forced;
    for (std::size_t q = 0; q < measured.size(); ++q) forced[measured[q]] = static_cast<int>((bits >> q) & 1u);
    auto source = qsim::OutcomeSource::forced(std::move(forced));
    PatternRun run = run_pattern(p, input, source);
    if (run.valid && run.probability > 0.0) fn(run);
  }
}

}  // namespace

PatternRun run_pattern(const Pattern& p, QuantumRegister input, qsim::OutcomeSource& source) {
  if (auto err = runnability_violation(p)) throw ValidationError("pattern is not runnable: " + *err);
  for (NodeId v : p.inputs) {
    if (!input.holds(v)) throw ValidationError("input register lacks input node " + std::to_string(v));
  }
  PatternRun run{std::move(input), {}, 1.0, true};
  QuantumRegister& reg = run.state;
  for (const Command& c : p.commands) {
    std::visit(overloaded{
                   [&](const Prepare& cmd) { reg.alloc_plus(cmd.node, cmd.angle); },
                   [&](const Entangle& cmd) { reg.apply_cz(cmd.a, cmd.b); },
                   [&](const Measure& cmd) {
                     const DyadicAngle angle = correct_angle(cmd.angle, signal_parity(run.signals, cmd.x_signals),
                                                             signal_parity(run.signals, cmd.z_signals));
                     const auto res = reg.measure_angle(cmd.node, angle, source);
                     run.signals[cmd.node] = res.outcome;
                     run.probability *= res.probability;
                   },
                   [&](const CorrectX& cmd) {
                     if (signal_parity(run.signals, cmd.signals)) reg.apply_x(cmd.node);
                   },
                   [&](const CorrectZ& cmd) {
                     if (signal_parity(run.signals, cmd.signals)) reg.apply_z(cmd.node);
                   },
               },
               c);
  }
  run.valid = reg.valid();
  return run;
}

std::vector<qsim::QubitLabel> output_labels(const Pattern& p, const QuantumRegister& input) {
  std::vector<qsim::QubitLabel> out(p.outputs.begin(), p.outputs.end());
  for (qsim::QubitLabel l : input.labels()) {
    if (!p.inputs.count(static_cast<NodeId>(l))) out.push_back(l);
  }
  return out;
}

qsim::DensityMatrix channel_of_pattern(const Pattern& p, const QuantumRegister& input) {
  qsim::DensityAccumulator acc(output_labels(p, input));
  for_each_branch(p, input, [&](const PatternRun& run) { acc.add(run.state, run.probability); });
  return {acc.labels(), acc.sum()};
}

void CqState::add(const std::string& bits, const QuantumRegister& reg, double weight) {
  qsim::DensityAccumulator acc(labels);
  acc.add(reg, weight);
  auto it = blocks.find(bits);
  if (it == blocks.end()) {
    blocks.emplace(bits, acc.sum());
  } else {
    it->second += acc.sum();
  }
}

void CqState::merge(const CqState& other) {
  if (other.labels != labels) throw std::invalid_argument("cq states over different qubits");
  for (const auto& [bits, m] : other.blocks) {
    auto it = blocks.find(bits);
    if (it == blocks.end()) {
      blocks.emplace(bits, m);
    } else {
      it->second += m;
    }
  }
}

double CqState::total_weight() const {
  double w = 0.0;
  for (const auto& [bits, m] : blocks) w += m.trace().real();
  return w;
}

double cq_trace_distance(const CqState& a, const CqState& b) {
  if (a.labels != b.labels) throw std::invalid_argument("cq states over different qubits");
  const auto d = static_cast<Eigen::Index>(std::size_t{1} << a.labels.size());
  const qsim::Matrix zero = qsim::Matrix::Zero(d, d);
  double total = 0.0;
  std::set<std::string> keys;
  for (const auto& [k, m] : a.blocks) keys.insert(k);
  for (const auto& [k, m] : b.blocks) keys.insert(k);
  for (const auto& k : keys) {
    auto ia = a.blocks.find(k);
    auto ib = b.blocks.find(k);
    total += qsim::trace_distance(ia == a.blocks.end() ? zero : ia->second,
                                  ib == b.blocks.end() ? zero : ib->second);
  }
  return total;
}

CqState cq_channel_of_pattern(const Pattern& p, const QuantumRegister& input,
                              const std::vector<NodeId>& recorded) {
  CqState cq{output_labels(p, input), {}};
  for_each_branch(p, input, [&](const PatternRun& run) {
    std::string bits;
    for (NodeId v : recorded) bits.push_back(run.signals.at(v) ? '1' : '0');
    cq.add(bits, run.state, run.probability);
  });
  return cq;
}

qsim::Matrix isometry_matrix(const OpenGraph& g, const Angles& theta) {
  g.validate_structure();
  if (g.vertices.size() > static_cast<std::size_t>(kMaxIsometryNodes)) {
    throw SizeError("isometry extraction is capped at " + std::to_string(kMaxIsometryNodes) + " nodes");
  }
  // qubit order: inputs (sorted), then the prepared nodes (sorted)
  std::vector<NodeId> slots(g.inputs.begin(), g.inputs.end());
  for (NodeId v : g.prepared()) slots.push_back(v);
  const std::size_t n = slots.size();
  const std::size_t n_in = g.inputs.size();
  const NodeSet measured = g.measured();
  for (NodeId v : measured) {
    if (!theta.count(v)) throw ValidationError("missing angle for measured node " + std::to_string(v));
  }

  const auto in_dim = static_cast<Eigen::Index>(std::size_t{1} << n_in);
  const auto out_dim = static_cast<Eigen::Index>(std::size_t{1} << g.outputs.size());
  qsim::Matrix V(out_dim, in_dim);
  const double fresh_amp = std::pow(2.0, -0.5 * static_cast<double>(n - n_in));
  const double renorm = std::pow(2.0, 0.5 * static_cast<double>(measured.size()));
  const double inv_sqrt2 = 1.0 / std::sqrt(2.0);

  for (Eigen::Index x = 0; x < in_dim; ++x) {
    qsim::Amplitudes amps(std::size_t{1} << n, qsim::cplx{});
    for (std::size_t rest = 0; rest < (std::size_t{1} << (n - n_in)); ++rest) {
      amps[static_cast<std::size_t>(x) | (rest << n_in)] = fresh_amp;
    }
    auto slot_of = [&](NodeId v) {
      return static_cast<unsigned>(std::find(slots.begin(), slots.end(), v) - slots.begin());
    };
    for (auto [a, b] : g.edges) qsim::serial::apply_cz(amps.data(), amps.size(), slot_of(a), slot_of(b));

    std::vector<NodeId> live = slots;
    for (NodeId v : measured) {
      const auto q = static_cast<unsigned>(std::find(live.begin(), live.end(), v) - live.begin());
      const qsim::cplx bra1 = inv_sqrt2 * std::polar(1.0, -theta.at(v).radians());
      qsim::Amplitudes next(amps.size() / 2);
      qsim::serial::contract(amps.data(), amps.size(), q, inv_sqrt2, bra1, next.data());
      amps = std::move(next);
      live.erase(live.begin() + q);
    }
    // live now lists the outputs in slot order; permute to sorted order
    std::vector<NodeId> sorted_out(g.outputs.begin(), g.outputs.end());
    for (std::size_t y = 0; y < amps.size(); ++y) {
      std::size_t row = 0;
      for (std::size_t q = 0; q < live.size(); ++q) {
        const auto pos = std::find(sorted_out.begin(), sorted_out.end(), live[q]) - sorted_out.begin();
        row |= ((y >> q) & 1u) << pos;
      }
      V(static_cast<Eigen::Index>(row), x) = renorm * amps[y];
    }
  }
  return V;
}

}  // namespace boqc::calc
