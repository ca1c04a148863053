#include "boqc/qsim/register.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace boqc::qsim {

namespace k = boqc::qsim::omp;

namespace {

constexpr double kZeroProbability = 1e-14;

const double kInvSqrt2 = 1.0 / std::sqrt(2.0);

}  // namespace

Basis Basis::computational() { return Basis{{cplx{1, 0}, cplx{0, 0}}, {cplx{0, 0}, cplx{1, 0}}}; }

Basis Basis::equatorial(double delta) {
  const cplx phase = std::polar(1.0, -delta);
  return Basis{{cplx{kInvSqrt2, 0}, kInvSqrt2 * phase}, {cplx{kInvSqrt2, 0}, -kInvSqrt2 * phase}};
}

OutcomeSource OutcomeSource::sampler(std::uint64_t seed) {
  OutcomeSource s;
  s.rng_.emplace(seed);
  return s;
}

OutcomeSource OutcomeSource::forced(std::map<QubitLabel, int> outcomes, int fallback) {
  OutcomeSource s;
  s.forced_ = std::move(outcomes);
  s.fallback_ = fallback;
  return s;
}

int OutcomeSource::pick(QubitLabel label, double p0) {
  if (rng_) {
    std::uniform_real_distribution<double> u(0.0, 1.0);
    return u(*rng_) < p0 ? 0 : 1;
  }
  auto it = forced_.find(label);
  return it == forced_.end() ? fallback_ : it->second;
}

bool QuantumRegister::holds(QubitLabel label) const {
  return std::find(labels_.begin(), labels_.end(), label) != labels_.end();
}

unsigned QuantumRegister::slot(QubitLabel label) const {
  auto it = std::find(labels_.begin(), labels_.end(), label);
  if (it == labels_.end()) {
    throw AllocationError("qubit " + std::to_string(label) + " is not allocated");
  }
  return static_cast<unsigned>(it - labels_.begin());
}

double QuantumRegister::norm() const { return std::sqrt(k::norm2(amps_.data(), amps_.size())); }

void QuantumRegister::append_qubit(QubitLabel label, cplx a0, cplx a1) {
  if (holds(label)) throw AllocationError("qubit " + std::to_string(label) + " already allocated");
  const std::size_t dim = amps_.size();
  amps_.resize(2 * dim);
  std::copy(amps_.begin(), amps_.begin() + static_cast<std::ptrdiff_t>(dim),
            amps_.begin() + static_cast<std::ptrdiff_t>(dim));
  for (std::size_t i = 0; i < dim; ++i) {
    amps_[i] *= a0;
    amps_[i + dim] *= a1;
  }
  labels_.push_back(label);
}

void QuantumRegister::alloc_plus(QubitLabel label, const DyadicAngle& theta) {
  append_qubit(label, cplx{kInvSqrt2, 0}, kInvSqrt2 * std::polar(1.0, theta.radians()));
}

void QuantumRegister::alloc_basis(QubitLabel label, int bit) {
  append_qubit(label, bit ? cplx{0, 0} : cplx{1, 0}, bit ? cplx{1, 0} : cplx{0, 0});
}

void QuantumRegister::alloc_state(QubitLabel label, cplx a0, cplx a1) {
  const double n = std::norm(a0) + std::norm(a1);
  if (std::abs(n - 1.0) > 1e-12) throw AllocationError("single-qubit state is not normalized");
  append_qubit(label, a0, a1);
}

void QuantumRegister::append_state(const std::vector<QubitLabel>& labels, const Amplitudes& amps) {
  if (amps.size() != (std::size_t{1} << labels.size())) {
    throw AllocationError("state size does not match its qubit count");
  }
  double n = 0.0;
  for (const cplx& a : amps) n += std::norm(a);
  if (std::abs(n - 1.0) > 1e-10) throw AllocationError("appended state is not normalized");
  for (QubitLabel l : labels) {
    if (holds(l)) throw AllocationError("qubit " + std::to_string(l) + " already allocated");
  }
  for (std::size_t i = 0; i < labels.size(); ++i) {
    for (std::size_t j = i + 1; j < labels.size(); ++j) {
      if (labels[i] == labels[j]) throw AllocationError("duplicate qubit label in appended state");
    }
  }
  Amplitudes out(amps_.size() * amps.size());
  for (std::size_t hi = 0; hi < amps.size(); ++hi) {
    for (std::size_t lo = 0; lo < amps_.size(); ++lo) out[lo + hi * amps_.size()] = amps_[lo] * amps[hi];
  }
  amps_ = std::move(out);
  labels_.insert(labels_.end(), labels.begin(), labels.end());
}

void QuantumRegister::relabel(QubitLabel from, QubitLabel to) {
  if (from == to) return;
  if (holds(to)) throw AllocationError("qubit " + std::to_string(to) + " already allocated");
  labels_[slot(from)] = to;
}

void QuantumRegister::apply_cz(QubitLabel a, QubitLabel b) {
  const unsigned sa = slot(a), sb = slot(b);
  if (sa == sb) throw AllocationError("CZ needs two distinct qubits");
  k::apply_cz(amps_.data(), amps_.size(), sa, sb);
}

void QuantumRegister::apply_cnot(QubitLabel control, QubitLabel target) {
  const unsigned sc = slot(control), st = slot(target);
  if (sc == st) throw AllocationError("CNOT needs two distinct qubits");
  k::apply_cnot(amps_.data(), amps_.size(), sc, st);
}

void QuantumRegister::apply_x(QubitLabel label) { k::apply_x(amps_.data(), amps_.size(), slot(label)); }

void QuantumRegister::apply_z(QubitLabel label) {
  k::apply_phase(amps_.data(), amps_.size(), slot(label), cplx{-1.0, 0.0});
}

void QuantumRegister::apply_h(QubitLabel label) { k::apply_h(amps_.data(), amps_.size(), slot(label)); }

void QuantumRegister::apply_z_rotation(QubitLabel label, const DyadicAngle& theta) {
  apply_z_rotation(label, theta.radians());
}

void QuantumRegister::apply_z_rotation(QubitLabel label, double radians) {
  k::apply_phase(amps_.data(), amps_.size(), slot(label), std::polar(1.0, radians));
}

void QuantumRegister::apply_correction(QubitLabel label, int sx, int sz) {
  const unsigned s = slot(label);
  if (sx & 1) k::apply_x(amps_.data(), amps_.size(), s);
  if (sz & 1) k::apply_phase(amps_.data(), amps_.size(), s, cplx{-1.0, 0.0});
}

void QuantumRegister::apply_one_time_pad(QubitLabel label, const DyadicAngle& alpha, int t) {
  const unsigned s = slot(label);
  if (t & 1) k::apply_x(amps_.data(), amps_.size(), s);
  k::apply_phase(amps_.data(), amps_.size(), s, std::polar(1.0, alpha.radians()));
}

std::array<double, 2> QuantumRegister::probabilities(QubitLabel label, const Basis& basis) const {
  const unsigned s = slot(label);
  return k::branch_norms(amps_.data(), amps_.size(), s, basis.bra0.data(), basis.bra1.data());
}

void QuantumRegister::collapse(QubitLabel label, const Basis& basis, int outcome) {
  const unsigned s = slot(label);
  const auto& bra = outcome ? basis.bra1 : basis.bra0;
  Amplitudes out(amps_.size() / 2);
  k::contract(amps_.data(), amps_.size(), s, bra[0], bra[1], out.data());
  const double p = k::norm2(out.data(), out.size());
  if (p < kZeroProbability) {
    valid_ = false;
  } else {
    k::scale(out.data(), out.size(), 1.0 / std::sqrt(p));
  }
  amps_ = std::move(out);
  labels_.erase(labels_.begin() + s);
}

MeasureResult QuantumRegister::measure(QubitLabel label, const Basis& basis, OutcomeSource& source) {
  const auto p = probabilities(label, basis);
  const int outcome = source.pick(label, p[0]) & 1;
  collapse(label, basis, outcome);
  return {outcome, p[outcome]};
}

MeasureResult QuantumRegister::measure_angle(QubitLabel label, const DyadicAngle& delta,
                                             OutcomeSource& source) {
  return measure(label, Basis::equatorial(delta.radians()), source);
}

Amplitudes QuantumRegister::amplitudes_in_order(const std::vector<QubitLabel>& order) const {
  if (order.size() != labels_.size()) throw AllocationError("order must list every qubit exactly once");
  std::vector<unsigned> src(order.size());
  for (std::size_t q = 0; q < order.size(); ++q) src[q] = slot(order[q]);
  Amplitudes out(amps_.size());
  for (std::size_t i = 0; i < amps_.size(); ++i) {
    std::size_t j = 0;
    for (std::size_t q = 0; q < src.size(); ++q) j |= ((i >> q) & 1u) << src[q];
    out[i] = amps_[j];
  }
  return out;
}

double state_fidelity(const Amplitudes& a, const Amplitudes& b) {
  if (a.size() != b.size()) return 0.0;
  cplx overlap{};
  for (std::size_t i = 0; i < a.size(); ++i) overlap += std::conj(a[i]) * b[i];
  return std::norm(overlap);
}

}  // namespace boqc::qsim
