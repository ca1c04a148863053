#include <algorithm>
#include <cmath>
#include <unordered_map>

#include "boqc/protocol/runs.hpp"

namespace boqc::protocol {

namespace {

constexpr double kPruneProbability = 1e-14;
constexpr double kStateTolerance = 1e-10;

std::uint64_t mix(std::uint64_t h, std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return h ^ x ^ (x >> 31);
}

struct Branch {
  ProtocolRun run;
  qsim::Amplitudes phased;  // amplitudes with the global phase removed
  std::uint64_t hash = 0;
};

struct KeyClass {
  std::uint64_t count = 1;
  std::vector<Branch> branches;
  std::uint64_t hash = 0;
};

void hash_slot(std::uint64_t& h, const ClientSlot& c) {
  h = mix(h, c.has_pad ? static_cast<std::uint64_t>(c.pad.k()) : ~0ULL);
  h = mix(h, static_cast<std::uint64_t>(c.angle.k()));
  h = mix(h, static_cast<std::uint64_t>(c.r + 2));
  h = mix(h, static_cast<std::uint64_t>(c.t));
  h = mix(h, static_cast<std::uint64_t>(c.s + 2));
}

bool same_slot(const ClientSlot& a, const ClientSlot& b) {
  return a.has_pad == b.has_pad && (!a.has_pad || a.pad == b.pad) && a.angle == b.angle && a.r == b.r &&
         a.t == b.t && a.s == b.s;
}

// nodes whose measurement is not yet folded into the clients' signals
bool undecoded(const RunState& st, std::size_t v) { return st.alice[v].s < 0; }

void fingerprint(Branch& br) {
  const RunState& st = br.run.state();
  std::uint64_t h = mix(0, st.pc);
  for (std::size_t v = 0; v < st.alice.size(); ++v) {
    hash_slot(h, st.alice[v]);
    hash_slot(h, st.oscar[v]);
    h = mix(h, static_cast<std::uint64_t>(st.sim_delta[v]));
    if (undecoded(st, v)) {
      h = mix(h, static_cast<std::uint64_t>(st.delta_k[v]));
      h = mix(h, static_cast<std::uint64_t>(st.raw[v] + 2));
      h = mix(h, static_cast<std::uint64_t>(st.report_alice[v] + 2));
      h = mix(h, static_cast<std::uint64_t>(st.report_oscar[v] + 2));
    }
  }
  for (qsim::QubitLabel l : st.reg.labels()) h = mix(h, static_cast<std::uint64_t>(l));
  for (const auto& [l, who] : st.holders) h = mix(mix(h, static_cast<std::uint64_t>(l)), static_cast<std::uint64_t>(who));

  const auto& a = st.reg.amplitudes();
  double peak = 0.0;
  for (const auto& z : a) peak = std::max(peak, std::norm(z));
  qsim::cplx phase{1.0, 0.0};
  for (const auto& z : a) {
    if (std::norm(z) >= 0.5 * peak) {
      phase = std::conj(z) / std::abs(z);
      break;
    }
  }
  br.phased.resize(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    br.phased[i] = a[i] * phase;
    // coarse enough that equal states hash alike, fine enough to separate most distinct ones
    h = mix(h, static_cast<std::uint64_t>(std::llround(br.phased[i].real() * 1e6)));
    h = mix(h, static_cast<std::uint64_t>(std::llround(br.phased[i].imag() * 1e6)));
  }
  br.hash = h;
}

// same future: equal classical memory and equal quantum state up to a global phase
bool same_future(const Branch& x, const Branch& y) {
  if (x.hash != y.hash) return false;
  const RunState& a = x.run.state();
  const RunState& b = y.run.state();
  if (a.pc != b.pc || a.reg.labels() != b.reg.labels() || a.holders != b.holders) return false;
  for (std::size_t v = 0; v < a.alice.size(); ++v) {
    if (!same_slot(a.alice[v], b.alice[v]) || !same_slot(a.oscar[v], b.oscar[v])) return false;
    if (a.sim_delta[v] != b.sim_delta[v]) return false;
    if (undecoded(a, v) && (a.delta_k[v] != b.delta_k[v] || a.raw[v] != b.raw[v] ||
                            a.report_alice[v] != b.report_alice[v] || a.report_oscar[v] != b.report_oscar[v])) {
      return false;
    }
  }
  for (std::size_t i = 0; i < x.phased.size(); ++i) {
    if (std::abs(x.phased[i] - y.phased[i]) > kStateTolerance) return false;
  }
  return true;
}

void merge_branches(KeyClass& c) {
  for (Branch& br : c.branches) fingerprint(br);
  std::sort(c.branches.begin(), c.branches.end(), [](const Branch& a, const Branch& b) { return a.hash < b.hash; });
  std::vector<Branch> kept;
  for (Branch& br : c.branches) {
    bool merged = false;
    for (auto it = kept.rbegin(); it != kept.rend() && it->hash == br.hash; ++it) {
      if (same_future(*it, br)) {
        it->run.state().weight += br.run.state().weight;
        merged = true;
        break;
      }
    }
    if (!merged) kept.push_back(std::move(br));
  }
  c.branches = std::move(kept);
  std::uint64_t h = mix(0, c.branches.size());
  for (const Branch& br : c.branches) h = mix(h, br.hash);
  c.hash = h;
}

bool same_class(const KeyClass& a, const KeyClass& b) {
  if (a.hash != b.hash || a.branches.size() != b.branches.size()) return false;
  for (std::size_t i = 0; i < a.branches.size(); ++i) {
    if (!same_future(a.branches[i], b.branches[i])) return false;
    if (std::abs(a.branches[i].run.state().weight - b.branches[i].run.state().weight) > kStateTolerance) return false;
  }
  return true;
}

std::vector<KeyClass> merge_classes(std::vector<KeyClass> classes) {
  for (KeyClass& c : classes) merge_branches(c);
  std::unordered_multimap<std::uint64_t, std::size_t> seen;
  std::vector<KeyClass> out;
  for (KeyClass& c : classes) {
    bool merged = false;
    auto [lo, hi] = seen.equal_range(c.hash);
    for (auto it = lo; it != hi; ++it) {
      if (same_class(out[it->second], c)) {
        out[it->second].count += c.count;
        merged = true;
        break;
      }
    }
    if (!merged) {
      seen.emplace(c.hash, out.size());
      out.push_back(std::move(c));
    }
  }
  return out;
}

}  // namespace

KeyVerification verify_every_key(const Setup& s, Variant variant, World world, const BobBehavior& bob,
                                 const calc::CqState& reference, std::size_t max_classes) {
  if (!bob.stateless) throw ValidationError("per-key verification needs a Bob whose hooks ignore his memory");
  auto prog = std::make_shared<const Program>(compile(s, variant, world));
  auto behavior = std::make_shared<const BobBehavior>(bob);

  KeyVerification out;
  out.key_space = 1;
  std::vector<KeyClass> classes(1);
  ProtocolRun root(prog, behavior, false);
  root.state().keep_record = false;
  classes[0].branches.push_back(Branch{root, {}, 0});

  for (;;) {
    bool pending = false;
    for (KeyClass& c : classes) {
      for (Branch& br : c.branches) pending = br.run.advance(nullptr) || pending;
    }
    if (!pending) break;
    const Pending& p = classes.front().branches.front().run.pending();
    std::vector<KeyClass> next;
    if (p.secret()) {
      const int options = p.options;
      out.key_space *= static_cast<std::uint64_t>(options);
      next.reserve(classes.size() * static_cast<std::size_t>(options));
      for (KeyClass& c : classes) {
        for (int k = 0; k < options; ++k) {
          KeyClass child;
          child.count = c.count;
          for (const Branch& br : c.branches) {
            child.branches.push_back(Branch{br.run, {}, 0});
            child.branches.back().run.choose(k, true);
          }
          next.push_back(std::move(child));
        }
      }
    } else {
      next.reserve(classes.size());
      for (KeyClass& c : classes) {
        KeyClass child;
        child.count = c.count;
        for (Branch& br : c.branches) {
          const Pending q = br.run.pending();
          for (int k = 0; k < 2; ++k) {
            if (q.p[static_cast<std::size_t>(k)] < kPruneProbability) continue;
            child.branches.push_back(Branch{br.run, {}, 0});
            child.branches.back().run.choose(k);
          }
        }
        next.push_back(std::move(child));
      }
    }
    if (next.size() > max_classes) {
      throw SizeError("per-key verification needs more than " + std::to_string(max_classes) + " key classes");
    }
    out.peak_classes = std::max(out.peak_classes, next.size());
    classes = merge_classes(std::move(next));
  }

  out.final_classes = classes.size();
  for (const KeyClass& c : classes) {
    calc::CqState cq{prog->output_labels, {}};
    double total = 0.0;
    for (const Branch& br : c.branches) {
      const RunState& st = br.run.state();
      cq.add(classical_key(*prog, st), st.reg, st.weight);
      total += st.weight;
    }
    out.keys_checked += c.count;
    out.max_distance = std::max(out.max_distance, cq_trace_distance(cq, reference));
    out.max_probability_defect = std::max(out.max_probability_defect, std::abs(total - 1.0));
  }
  return out;
}

}  // namespace boqc::protocol
