#include <algorithm>
#include <cmath>

#include "bits.hpp"
#include "boqc/qsim/kernels.hpp"

namespace boqc::qsim::serial {

using detail::insert_zero;

void apply_cz(cplx* amps, std::size_t dim, unsigned qa, unsigned qb) {
  const unsigned lo = std::min(qa, qb), hi = std::max(qa, qb);
  const std::size_t both = (std::size_t{1} << qa) | (std::size_t{1} << qb);
  for (std::size_t i = 0; i < dim / 4; ++i) {
    const std::size_t idx = insert_zero(insert_zero(i, lo), hi) | both;
    amps[idx] = -amps[idx];
  }
}

void apply_x(cplx* amps, std::size_t dim, unsigned q) {
  const std::size_t bit = std::size_t{1} << q;
  for (std::size_t i = 0; i < dim / 2; ++i) {
    const std::size_t i0 = insert_zero(i, q);
    std::swap(amps[i0], amps[i0 | bit]);
  }
}

void apply_phase(cplx* amps, std::size_t dim, unsigned q, cplx phase_on_one) {
  const std::size_t bit = std::size_t{1} << q;
  for (std::size_t i = 0; i < dim / 2; ++i) amps[insert_zero(i, q) | bit] *= phase_on_one;
}

void apply_h(cplx* amps, std::size_t dim, unsigned q) {
  const std::size_t bit = std::size_t{1} << q;
  const double s = 1.0 / std::sqrt(2.0);
  for (std::size_t i = 0; i < dim / 2; ++i) {
    const std::size_t i0 = insert_zero(i, q);
    const cplx a = amps[i0], b = amps[i0 | bit];
    amps[i0] = s * (a + b);
    amps[i0 | bit] = s * (a - b);
  }
}

void apply_cnot(cplx* amps, std::size_t dim, unsigned control, unsigned target) {
  const unsigned lo = std::min(control, target), hi = std::max(control, target);
  const std::size_t c = std::size_t{1} << control, t = std::size_t{1} << target;
  for (std::size_t i = 0; i < dim / 4; ++i) {
    const std::size_t idx = insert_zero(insert_zero(i, lo), hi) | c;
    std::swap(amps[idx], amps[idx | t]);
  }
}

void contract(const cplx* amps, std::size_t dim, unsigned q, cplx bra0, cplx bra1, cplx* out) {
  const std::size_t bit = std::size_t{1} << q;
  for (std::size_t i = 0; i < dim / 2; ++i) {
    const std::size_t i0 = insert_zero(i, q);
    out[i] = bra0 * amps[i0] + bra1 * amps[i0 | bit];
  }
}

double norm2(const cplx* amps, std::size_t dim) {
  double s = 0.0;
  for (std::size_t i = 0; i < dim; ++i) s += std::norm(amps[i]);
  return s;
}

void scale(cplx* amps, std::size_t dim, double factor) {
  for (std::size_t i = 0; i < dim; ++i) amps[i] *= factor;
}

void accumulate_reduced(const cplx* amps, std::size_t dim, const unsigned* qubits, unsigned k,
                        double weight, cplx* rho) {
  const auto layout = detail::reduced_layout(qubits, k);
  const std::size_t sub = std::size_t{1} << k;
  const std::size_t rest = dim >> k;
  if (rest == 1) {
    for (std::size_t y = 0; y < sub; ++y) {
      const cplx cy = weight * std::conj(amps[layout.offsets[y]]);
      if (cy == cplx{}) continue;
      for (std::size_t x = 0; x < sub; ++x) rho[x + y * sub] += amps[layout.offsets[x]] * cy;
    }
    return;
  }
  std::vector<cplx> column(sub);
  for (std::size_t r = 0; r < rest; ++r) {
    const std::size_t base = detail::insert_zeros(r, layout.sorted);
    for (std::size_t x = 0; x < sub; ++x) column[x] = amps[base | layout.offsets[x]];
    for (std::size_t y = 0; y < sub; ++y) {
      const cplx cy = weight * std::conj(column[y]);
      if (cy == cplx{}) continue;
      for (std::size_t x = 0; x < sub; ++x) rho[x + y * sub] += column[x] * cy;
    }
  }
}

std::array<double, 2> branch_norms(const cplx* amps, std::size_t dim, unsigned q, const cplx* bra0,
                                   const cplx* bra1) {
  const std::size_t bit = std::size_t{1} << q;
  double p0 = 0.0, p1 = 0.0;
  for (std::size_t i = 0; i < dim / 2; ++i) {
    const std::size_t i0 = insert_zero(i, q);
    const cplx a = amps[i0], b = amps[i0 | bit];
    p0 += std::norm(bra0[0] * a + bra0[1] * b);
    p1 += std::norm(bra1[0] * a + bra1[1] * b);
  }
  return {p0, p1};
}

}  // namespace boqc::qsim::serial
