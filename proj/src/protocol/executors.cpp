#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <random>
#include <unordered_map>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "boqc/protocol/runs.hpp"
#include "boqc/qsim/density.hpp"

namespace boqc::protocol {

namespace {

// branches this unlikely are numerically empty and are not explored
constexpr double kPruneProbability = 1e-14;

}  // namespace

Seeds Seeds::from(std::uint64_t master) {
  std::seed_seq seq{static_cast<std::uint32_t>(master), static_cast<std::uint32_t>(master >> 32)};
  std::array<std::uint32_t, 10> words{};
  seq.generate(words.begin(), words.end());
  auto pair = [&](int i) { return (std::uint64_t{words[2 * i]} << 32) | words[2 * i + 1]; };
  return Seeds{pair(0), pair(1), pair(2), pair(3), pair(4)};
}

Chooser sampled_chooser(const Seeds& seeds) {
  struct Streams {
    std::mt19937_64 keys, alice, oscar, outcomes, simulator;
  };
  auto s = std::make_shared<Streams>(Streams{std::mt19937_64(seeds.keys), std::mt19937_64(seeds.alice_pads),
                                             std::mt19937_64(seeds.oscar_pads), std::mt19937_64(seeds.outcomes),
                                             std::mt19937_64(seeds.simulator)});
  return [s](const Pending& p, const RunState&) -> int {
    auto uniform = [&](std::mt19937_64& rng) {
      return static_cast<int>(std::uniform_int_distribution<int>(0, p.options - 1)(rng));
    };
    switch (p.kind) {
      case ChoiceKind::key: return uniform(s->keys);
      case ChoiceKind::alice_pad: return uniform(s->alice);
      case ChoiceKind::oscar_pad: return uniform(s->oscar);
      case ChoiceKind::simulator: return uniform(s->simulator);
      case ChoiceKind::bob_outcome:
      case ChoiceKind::resource_outcome: {
        const double u = std::uniform_real_distribution<double>(0.0, 1.0)(s->outcomes);
        return u < p.p[0] ? 0 : 1;
      }
      case ChoiceKind::none: break;
    }
    return 0;
  };
}

Chooser zero_secret_chooser(std::uint64_t outcome_seed) {
  auto rng = std::make_shared<std::mt19937_64>(outcome_seed);
  return [rng](const Pending& p, const RunState&) -> int {
    if (p.secret()) return 0;
    const double u = std::uniform_real_distribution<double>(0.0, 1.0)(*rng);
    return u < p.p[0] ? 0 : 1;
  };
}

std::string classical_key(const Program& prog, const RunState& st) {
  std::string bits;
  for (std::size_t v : prog.classical_outputs) bits.push_back(st.alice[v].s ? '1' : '0');
  return bits;
}

RunResult execute(const Program& prog, const BobBehavior& bob, const Chooser& choose, Observer* obs) {
  ProtocolRun run(std::make_shared<const Program>(prog), std::make_shared<const BobBehavior>(bob), true);
  while (run.advance(obs)) {
    const Pending& p = run.pending();
    int k = choose(p, run.state());
    if (!p.secret() && p.p[static_cast<std::size_t>(k)] < kPruneProbability) k ^= 1;
    run.choose(k);
  }
  const RunState& st = run.state();
  RunResult out;
  out.transcript = st.transcript;
  for (std::size_t v : prog.classical_outputs) out.classical_output[prog.nodes[v].id] = st.alice[v].s;
  out.state = st.reg;
  out.output_labels = prog.output_labels;
  out.probability = st.weight;
  out.bob_peak_qubits = st.bob_peak;
  out.bob_record = st.record;
  return out;
}

RunResult run_protocol(const Setup& s, Variant variant, World world, const BobBehavior& bob, const Seeds& seeds) {
  return execute(compile(s, variant, world), bob, sampled_chooser(seeds));
}

// ---- exhaustive enumeration -------------------------------------------------

std::uint64_t leaf_bound(const Program& prog, bool zero_secrets) {
  long double bound = 1.0L;
  const long double grid = static_cast<long double>(std::uint64_t{1} << prog.b);
  for (const Step& s : prog.steps) {
    if (std::holds_alternative<step::DrawKey>(s)) {
      bound *= zero_secrets ? 1 : 2;
    } else if (std::holds_alternative<step::DrawPad>(s) || std::holds_alternative<step::SimDrawDelta>(s)) {
      bound *= zero_secrets ? 1 : grid;
    } else if (std::holds_alternative<step::BobMeasure>(s) || std::holds_alternative<step::ResourceMeasure>(s) ||
               std::holds_alternative<step::ResourceTeleportInput>(s)) {
      bound *= 2;
    }
  }
  if (bound >= 1.8e19L) return std::numeric_limits<std::uint64_t>::max();
  return static_cast<std::uint64_t>(bound);
}

void require_enumerable(const Program& prog, bool zero_secrets) {
  int measured = 0;
  for (const NodeInfo& n : prog.nodes) measured += n.measured() ? 1 : 0;
  if (prog.b > kMaxExhaustivePrecision) {
    throw SizeError("exhaustive enumeration needs b <= " + std::to_string(kMaxExhaustivePrecision) + ", got b=" +
                    std::to_string(prog.b));
  }
  if (measured > kMaxExhaustiveMeasured) {
    throw SizeError("exhaustive enumeration needs at most " + std::to_string(kMaxExhaustiveMeasured) +
                    " measured nodes, got " + std::to_string(measured));
  }
  const std::uint64_t bound = leaf_bound(prog, zero_secrets);
  if (bound > kMaxEnumeratedLeaves) {
    throw SizeError("exhaustive enumeration would visit " + std::to_string(bound) + " leaves (cap " +
                    std::to_string(kMaxEnumeratedLeaves) + ")");
  }
}

namespace {

struct Walker {
  const EnumerationOptions& opt;
  EnumerationStats stats;

  // options to explore at the pending choice, in ascending order
  void options(const Pending& p, std::vector<int>& out) const {
    out.clear();
    if (p.secret()) {
      if (opt.zero_secrets) {
        out.push_back(0);
      } else {
        for (int k = 0; k < p.options; ++k) out.push_back(k);
      }
      return;
    }
    for (int k = 0; k < 2; ++k) {
      if (p.p[static_cast<std::size_t>(k)] >= kPruneProbability) out.push_back(k);
    }
  }

  void take(ProtocolRun& run, int k) const { run.choose(k, opt.zero_secrets && run.pending().secret()); }

  void dfs(ProtocolRun& run, Observer* obs) {
    std::vector<int> opts;
    while (run.advance(obs)) {
      options(run.pending(), opts);
      if (opts.empty()) return;
      for (std::size_t i = 0; i + 1 < opts.size(); ++i) {
        ProtocolRun branch = run;
        take(branch, opts[i]);
        dfs(branch, obs);
      }
      take(run, opts.back());
    }
    ++stats.leaves;
    stats.total_weight += run.state().weight;
  }
};

}  // namespace

EnumerationStats enumerate(const Program& prog, const BobBehavior& bob, Observer& obs, const EnumerationOptions& opt) {
  require_enumerable(prog, opt.zero_secrets);
  ProtocolRun root(std::make_shared<const Program>(prog), std::make_shared<const BobBehavior>(bob), false);
  root.state().keep_record = true;
  Walker walker{opt, {}};

  int threads = 1;
#ifdef _OPENMP
  threads = omp_get_max_threads();
#endif
  std::unique_ptr<Observer> probe = opt.parallel && threads > 1 ? obs.fork() : nullptr;
  if (!probe) {
    walker.dfs(root, &obs);
    return walker.stats;
  }

  // Breadth-first until the frontier can keep every thread busy, then walk the subtrees in parallel.
  std::vector<ProtocolRun> frontier{root};
  std::vector<int> opts;
  const std::size_t target = static_cast<std::size_t>(threads) * 8;
  while (frontier.size() < target) {
    std::vector<ProtocolRun> next;
    bool grew = false;
    for (ProtocolRun& run : frontier) {
      if (!run.advance(&obs)) {
        ++walker.stats.leaves;
        walker.stats.total_weight += run.state().weight;
        continue;
      }
      walker.options(run.pending(), opts);
      for (int k : opts) {
        next.push_back(run);
        walker.take(next.back(), k);
      }
      grew = true;
    }
    frontier = std::move(next);
    if (!grew) break;
  }

  std::vector<std::unique_ptr<Observer>> locals(static_cast<std::size_t>(threads));
  std::vector<EnumerationStats> partial(static_cast<std::size_t>(threads));
  for (auto& l : locals) l = obs.fork();
#pragma omp parallel num_threads(threads)
  {
    int me = 0;
#ifdef _OPENMP
    me = omp_get_thread_num();
#endif
    Walker local{opt, {}};
#pragma omp for schedule(static)
    for (std::size_t i = 0; i < frontier.size(); ++i) {
      local.dfs(frontier[i], locals[static_cast<std::size_t>(me)].get());
    }
    partial[static_cast<std::size_t>(me)] = local.stats;
  }
  // merge in thread order so results do not depend on timing
  for (int t = 0; t < threads; ++t) {
    obs.merge(*locals[static_cast<std::size_t>(t)]);
    walker.stats.leaves += partial[static_cast<std::size_t>(t)].leaves;
    walker.stats.total_weight += partial[static_cast<std::size_t>(t)].total_weight;
  }
  return walker.stats;
}

namespace {

// Alice's output per classical key, accumulated without rebuilding an accumulator per leaf.
class OutputObserver : public Observer {
 public:
  OutputObserver(const Program& prog) : prog_(prog) {}

  void on_leaf(const RunState& st) override {
    const auto& labels = prog_.output_labels;
    const Eigen::Index d = Eigen::Index{1} << labels.size();
    auto [it, fresh] = blocks_.try_emplace(classical_key(prog_, st));
    if (fresh) it->second = qsim::Matrix::Zero(d, d);
    std::vector<unsigned> slots;
    for (qsim::QubitLabel l : labels) slots.push_back(st.reg.slot(l));
    qsim::serial::accumulate_reduced(st.reg.amplitudes().data(), st.reg.dimension(), slots.data(),
                                     static_cast<unsigned>(slots.size()), st.weight, it->second.data());
  }

  std::unique_ptr<Observer> fork() const override { return std::make_unique<OutputObserver>(prog_); }

  void merge(Observer& other) override {
    for (auto& [k, m] : static_cast<OutputObserver&>(other).blocks_) {
      auto [it, fresh] = blocks_.try_emplace(k, m);
      if (!fresh) it->second += m;
    }
  }

  calc::CqState result() const {
    calc::CqState cq{prog_.output_labels, {}};
    for (const auto& [k, m] : blocks_) cq.blocks.emplace(k, m);
    return cq;
  }

 private:
  const Program& prog_;
  std::unordered_map<std::string, qsim::Matrix> blocks_;
};

}  // namespace

calc::CqState output_channel(const Setup& s, Variant variant, World world, const BobBehavior& bob,
                             const EnumerationOptions& opt) {
  const Program prog = compile(s, variant, world);
  OutputObserver obs(prog);
  enumerate(prog, bob, obs, opt);
  return obs.result();
}

}  // namespace boqc::protocol
