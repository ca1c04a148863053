#include <algorithm>
#include <cmath>
#include <unordered_map>

#include "boqc/security.hpp"

namespace boqc::security {

using protocol::Program;
using protocol::RunState;

namespace {

std::size_t index_at(const std::string& rec, std::size_t pos) {
  return static_cast<unsigned char>(rec[pos + 1]) | (std::size_t{static_cast<unsigned char>(rec[pos + 2])} << 8);
}

class ViewObserver : public protocol::Observer {
 public:
  ViewObserver(const Program& prog, bool sampled, bool holdings, std::size_t cap)
      : prog_(prog), sampled_(sampled), holdings_(holdings), cap_(cap) {}

  void on_angle(const RunState& st, NodeId v, const DyadicAngle& delta) override {
    auto [it, fresh] = delta_.try_emplace(v);
    if (fresh) {
      it->second.mass.assign(static_cast<std::size_t>(delta.modulus()), 0.0);
      it->second.visits.assign(static_cast<std::size_t>(delta.modulus()), 0);
    }
    const auto k = static_cast<std::size_t>(delta.k());
    it->second.mass[k] += weight(st);
    ++it->second.visits[k];
  }

  void on_snapshot(const RunState& st, const protocol::step::Snapshot& snap,
                   const std::vector<qsim::QubitLabel>& labels) override {
    int halves = 0;
    for (qsim::QubitLabel l : st.reg.labels()) {
      halves += (l >= protocol::kPartnerBase && l < protocol::kAliceInputBase) ? 1 : 0;
    }
    sim_peak_ = std::max(sim_peak_, halves);
    if (snap.received) {
      const NodeId v = static_cast<NodeId>(labels.front());
      auto [it, fresh] = received_.try_emplace(v);
      if (fresh) it->second = qsim::Matrix::Zero(2, 2);
      accumulate(st, labels, weight(st), it->second);
    }
    if (!holdings_) return;

    auto [it, fresh] = holdings_acc_.try_emplace(snap.key);
    Holdings& h = it->second;
    if (fresh) {
      h.labels = labels;
      h.joint = labels.size() <= cap_;
      if (!h.joint) {
        for (std::size_t i = 0; i < labels.size(); ++i) h.marginals.push_back({i});
        for (std::size_t i = 0; i < labels.size(); ++i) {
          for (std::size_t j = i + 1; j < labels.size(); ++j) h.marginals.push_back({i, j});
        }
      }
    } else if (h.labels != labels) {
      throw StructuralMismatch("bob's holdings at " + snap.key + " differ between runs");
    }
    auto [blk, made] = h.blocks.try_emplace(st.record);
    if (made) {
      if (h.joint) {
        const auto d = Eigen::Index{1} << labels.size();
        blk->second.push_back(qsim::Matrix::Zero(d, d));
      } else {
        for (const auto& m : h.marginals) {
          const auto d = Eigen::Index{1} << m.size();
          blk->second.push_back(qsim::Matrix::Zero(d, d));
        }
      }
    }
    if (h.joint) {
      accumulate(st, labels, weight(st), blk->second.front());
    } else {
      for (std::size_t k = 0; k < h.marginals.size(); ++k) {
        std::vector<qsim::QubitLabel> sub;
        for (std::size_t pos : h.marginals[k]) sub.push_back(labels[pos]);
        accumulate(st, sub, weight(st), blk->second[k]);
      }
    }
  }

  void on_leaf(const RunState& st) override {
    records_[st.record] += weight(st);
    ++runs_;
    total_ += weight(st);
    bob_peak_ = std::max(bob_peak_, st.bob_peak);
  }

  std::unique_ptr<protocol::Observer> fork() const override {
    return std::make_unique<ViewObserver>(prog_, sampled_, holdings_, cap_);
  }

  void merge(protocol::Observer& other) override {
    auto& o = static_cast<ViewObserver&>(other);
    for (auto& [k, h] : o.delta_) {
      auto [it, fresh] = delta_.try_emplace(k, h);
      if (fresh) continue;
      for (std::size_t i = 0; i < h.mass.size(); ++i) {
        it->second.mass[i] += h.mass[i];
        it->second.visits[i] += h.visits[i];
      }
    }
    for (auto& [v, m] : o.received_) {
      auto [it, fresh] = received_.try_emplace(v, m);
      if (!fresh) it->second += m;
    }
    for (auto& [key, h] : o.holdings_acc_) {
      auto [it, fresh] = holdings_acc_.try_emplace(key, h);
      if (fresh) continue;
      if (it->second.labels != h.labels) throw StructuralMismatch("bob's holdings at " + key + " differ");
      for (auto& [prefix, ms] : h.blocks) {
        auto [b, made] = it->second.blocks.try_emplace(prefix, ms);
        if (made) continue;
        for (std::size_t i = 0; i < ms.size(); ++i) b->second[i] += ms[i];
      }
    }
    for (auto& [r, p] : o.records_) records_[r] += p;
    runs_ += o.runs_;
    total_ += o.total_;
    bob_peak_ = std::max(bob_peak_, o.bob_peak_);
    sim_peak_ = std::max(sim_peak_, o.sim_peak_);
  }

  BobView view(bool exhaustive) const {
    BobView out;
    out.info = prog_.info;
    out.exhaustive = exhaustive;
    out.runs = runs_;
    // sampled views are normalized by the number of shots
    const double scale = sampled_ && runs_ ? 1.0 / static_cast<double>(runs_) : 1.0;
    out.total_weight = total_ * scale;
    for (const auto& [r, p] : records_) out.records.emplace(r, p * scale);
    for (const auto& [v, h] : delta_) {
      DeltaHistogram d = h;
      for (double& m : d.mass) m *= scale;
      out.delta.emplace(v, std::move(d));
    }
    for (const auto& [v, m] : received_) out.received.emplace(v, m * scale);
    for (const auto& [key, h] : holdings_acc_) {
      HoldingsView hv;
      hv.labels = h.labels;
      hv.joint = h.joint;
      hv.marginals = h.marginals;
      for (const auto& [prefix, ms] : h.blocks) {
        std::vector<qsim::Matrix> scaled;
        for (const auto& m : ms) scaled.push_back(m * scale);
        hv.blocks.emplace(prefix, std::move(scaled));
      }
      out.holdings.emplace(key, std::move(hv));
    }
    out.bob_peak_qubits = bob_peak_;
    out.simulator_peak_halves = sim_peak_;
    return out;
  }

 private:
  struct Holdings {
    std::vector<qsim::QubitLabel> labels;
    bool joint = true;
    std::vector<std::vector<std::size_t>> marginals;
    std::unordered_map<std::string, std::vector<qsim::Matrix>> blocks;
  };

  double weight(const RunState& st) const { return sampled_ ? 1.0 : st.weight; }

  static void accumulate(const RunState& st, const std::vector<qsim::QubitLabel>& labels, double w,
                         qsim::Matrix& rho) {
    unsigned slots[64];
    for (std::size_t i = 0; i < labels.size(); ++i) slots[i] = st.reg.slot(labels[i]);
    qsim::serial::accumulate_reduced(st.reg.amplitudes().data(), st.reg.dimension(), slots,
                                     static_cast<unsigned>(labels.size()), w, rho.data());
  }

  const Program& prog_;
  bool sampled_;
  bool holdings_;
  std::size_t cap_;
  std::unordered_map<NodeId, DeltaHistogram> delta_;
  std::unordered_map<NodeId, qsim::Matrix> received_;
  std::unordered_map<std::string, Holdings> holdings_acc_;
  std::unordered_map<std::string, double> records_;
  std::uint64_t runs_ = 0;
  double total_ = 0.0;
  int bob_peak_ = 0;
  int sim_peak_ = 0;
};

}  // namespace

std::vector<std::string> describe_record(const Program& prog, const std::string& rec) {
  std::vector<std::string> out;
  std::size_t pos = 0;
  while (pos < rec.size()) {
    const char tag = rec[pos];
    const std::string node = std::to_string(prog.nodes.at(index_at(rec, pos)).id);
    switch (tag) {
      case 'q': out.push_back("recv " + node); pos += 3; break;
      case 'r': out.push_back("return " + node); pos += 3; break;
      case 'd': {
        std::uint32_t k = 0;
        for (int b = 0; b < 4; ++b) k |= std::uint32_t{static_cast<unsigned char>(rec[pos + 3 + b])} << (8 * b);
        out.push_back("delta " + node + " = " + std::to_string(k));
        pos += 7;
        break;
      }
      case 'm':
      case 'a':
      case 'o': {
        const char* what = tag == 'm' ? "outcome " : (tag == 'a' ? "report-alice " : "report-oscar ");
        out.push_back(what + node + " = " + std::to_string(static_cast<int>(rec[pos + 3])));
        pos += 4;
        break;
      }
      default: throw std::invalid_argument("malformed record");
    }
  }
  return out;
}

BobView view_of(const Program& prog, const BobBehavior& bob, const ViewOptions& opt) {
  if (opt.exhaustive) {
    ViewObserver obs(prog, false, true, opt.joint_cap);
    protocol::EnumerationOptions eo;
    eo.zero_secrets = opt.zero_secrets;
    protocol::enumerate(prog, bob, obs, eo);
    return obs.view(true);
  }
  ViewObserver obs(prog, true, false, opt.joint_cap);
  const protocol::Chooser choose = opt.zero_secrets ? protocol::zero_secret_chooser(opt.seed)
                                                    : protocol::sampled_chooser(protocol::Seeds::from(opt.seed));
  for (std::uint64_t shot = 0; shot < opt.shots; ++shot) protocol::execute(prog, bob, choose, &obs);
  return obs.view(false);
}

BobView real_view(const Setup& s, Variant v, const BobBehavior& bob, const ViewOptions& opt) {
  return view_of(protocol::compile(s, v, World::real), bob, opt);
}

BobView ideal_view(const Setup& s, Variant v, const BobBehavior& bob, const ViewOptions& opt) {
  ViewOptions ideal = opt;
  ideal.zero_secrets = false;  // the simulator always draws its angles
  return view_of(protocol::compile(s, v, World::ideal), bob, ideal);
}

namespace {

SimulatorRun simulate(const Setup& s, Variant v, const BobBehavior& bob, const protocol::Seeds& seeds) {
  const Program prog = protocol::compile(s, v, World::ideal);
  ViewObserver obs(prog, true, true, kJointViewCap);
  SimulatorRun out;
  out.output = protocol::execute(prog, bob, protocol::sampled_chooser(seeds), &obs);
  out.view = obs.view(false);
  return out;
}

}  // namespace

SimulatorRun run_simulator_boqc(const Setup& s, const BobBehavior& bob, const protocol::Seeds& seeds) {
  return simulate(s, Variant::boqc, bob, seeds);
}

SimulatorRun run_simulator_boqco(const Setup& s, const BobBehavior& bob, const protocol::Seeds& seeds) {
  return simulate(s, Variant::boqco, bob, seeds);
}

ViewDistance compare_views(const BobView& real, const BobView& ideal) {
  if (!(real.info == ideal.info)) throw StructuralMismatch("views are over different public information");
  if (real.holdings.size() != ideal.holdings.size()) {
    throw StructuralMismatch("views hold snapshots at different points of the schedule");
  }
  for (const auto& [key, h] : real.holdings) {
    auto it = ideal.holdings.find(key);
    if (it == ideal.holdings.end()) throw StructuralMismatch("snapshot " + key + " is missing from one view");
    if (it->second.labels != h.labels || it->second.joint != h.joint) {
      throw StructuralMismatch("bob holds different qubits at " + key);
    }
  }
  for (const auto& [v, m] : real.received) {
    if (!ideal.received.count(v)) throw StructuralMismatch("qubit " + std::to_string(v) + " received in one view only");
  }
  if (real.received.size() != ideal.received.size()) throw StructuralMismatch("different received qubits");

  ViewDistance d;
  double tvd = 0.0;
  for (const auto& [r, p] : real.records) {
    auto it = ideal.records.find(r);
    tvd += std::abs(p - (it == ideal.records.end() ? 0.0 : it->second));
  }
  for (const auto& [r, q] : ideal.records) {
    if (!real.records.count(r)) tvd += q;
  }
  d.classical_tvd = 0.5 * tvd;

  auto note = [&](double dist, const std::string& where) {
    if (dist > d.quantum_trace_distance) {
      d.quantum_trace_distance = dist;
      d.worst_snapshot = where;
    }
  };
  for (const auto& [v, m] : real.received) {
    const qsim::Matrix& o = ideal.received.at(v);
    const double a = m.trace().real(), b = o.trace().real();
    if (a > 0 && b > 0) note(qsim::trace_distance(m / a, o / b), "recv:" + std::to_string(v));
  }
  for (const auto& [key, h] : real.holdings) {
    const HoldingsView& o = ideal.holdings.at(key);
    const std::size_t parts = h.joint ? 1 : h.marginals.size();
    std::vector<double> sums(parts, 0.0);
    auto dist = [&](const std::vector<qsim::Matrix>* a, const std::vector<qsim::Matrix>* b) {
      for (std::size_t k = 0; k < parts; ++k) {
        const qsim::Matrix& ref = a ? (*a)[k] : (*b)[k];
        const qsim::Matrix zero = qsim::Matrix::Zero(ref.rows(), ref.cols());
        sums[k] += qsim::trace_distance(a ? (*a)[k] : zero, b ? (*b)[k] : zero);
      }
    };
    for (const auto& [prefix, ms] : h.blocks) {
      auto it = o.blocks.find(prefix);
      dist(&ms, it == o.blocks.end() ? nullptr : &it->second);
    }
    for (const auto& [prefix, ms] : o.blocks) {
      if (!h.blocks.count(prefix)) dist(nullptr, &ms);
    }
    note(*std::max_element(sums.begin(), sums.end()), key);
  }
  return d;
}

}  // namespace boqc::security
