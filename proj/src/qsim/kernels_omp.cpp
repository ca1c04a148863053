#include <algorithm>
#include <cmath>
#include <cstdint>

#include <omp.h>

#include "bits.hpp"
#include "boqc/qsim/kernels.hpp"

namespace boqc::qsim::omp {

using detail::insert_zero;
using index_t = std::int64_t;

void apply_cz(cplx* amps, std::size_t dim, unsigned qa, unsigned qb) {
  if (dim < kParallelThreshold) return serial::apply_cz(amps, dim, qa, qb);
  const unsigned lo = std::min(qa, qb), hi = std::max(qa, qb);
  const std::size_t both = (std::size_t{1} << qa) | (std::size_t{1} << qb);
  const index_t n = static_cast<index_t>(dim / 4);
#pragma omp parallel for schedule(static)
  for (index_t i = 0; i < n; ++i) {
    const std::size_t idx = insert_zero(insert_zero(static_cast<std::size_t>(i), lo), hi) | both;
    amps[idx] = -amps[idx];
  }
}

void apply_x(cplx* amps, std::size_t dim, unsigned q) {
  if (dim < kParallelThreshold) return serial::apply_x(amps, dim, q);
  const std::size_t bit = std::size_t{1} << q;
  const index_t n = static_cast<index_t>(dim / 2);
#pragma omp parallel for schedule(static)
  for (index_t i = 0; i < n; ++i) {
    const std::size_t i0 = insert_zero(static_cast<std::size_t>(i), q);
    std::swap(amps[i0], amps[i0 | bit]);
  }
}

void apply_phase(cplx* amps, std::size_t dim, unsigned q, cplx phase_on_one) {
  if (dim < kParallelThreshold) return serial::apply_phase(amps, dim, q, phase_on_one);
  const std::size_t bit = std::size_t{1} << q;
  const index_t n = static_cast<index_t>(dim / 2);
#pragma omp parallel for schedule(static)
  for (index_t i = 0; i < n; ++i) amps[insert_zero(static_cast<std::size_t>(i), q) | bit] *= phase_on_one;
}

void apply_h(cplx* amps, std::size_t dim, unsigned q) {
  if (dim < kParallelThreshold) return serial::apply_h(amps, dim, q);
  const std::size_t bit = std::size_t{1} << q;
  const double s = 1.0 / std::sqrt(2.0);
  const index_t n = static_cast<index_t>(dim / 2);
#pragma omp parallel for schedule(static)
  for (index_t i = 0; i < n; ++i) {
    const std::size_t i0 = insert_zero(static_cast<std::size_t>(i), q);
    const cplx a = amps[i0], b = amps[i0 | bit];
    amps[i0] = s * (a + b);
    amps[i0 | bit] = s * (a - b);
  }
}

void apply_cnot(cplx* amps, std::size_t dim, unsigned control, unsigned target) {
  if (dim < kParallelThreshold) return serial::apply_cnot(amps, dim, control, target);
  const unsigned lo = std::min(control, target), hi = std::max(control, target);
  const std::size_t c = std::size_t{1} << control, t = std::size_t{1} << target;
  const index_t n = static_cast<index_t>(dim / 4);
#pragma omp parallel for schedule(static)
  for (index_t i = 0; i < n; ++i) {
    const std::size_t idx = insert_zero(insert_zero(static_cast<std::size_t>(i), lo), hi) | c;
    std::swap(amps[idx], amps[idx | t]);
  }
}

void contract(const cplx* amps, std::size_t dim, unsigned q, cplx bra0, cplx bra1, cplx* out) {
  if (dim < kParallelThreshold) return serial::contract(amps, dim, q, bra0, bra1, out);
  const std::size_t bit = std::size_t{1} << q;
  const index_t n = static_cast<index_t>(dim / 2);
#pragma omp parallel for schedule(static)
  for (index_t i = 0; i < n; ++i) {
    const std::size_t i0 = insert_zero(static_cast<std::size_t>(i), q);
    out[i] = bra0 * amps[i0] + bra1 * amps[i0 | bit];
  }
}

double norm2(const cplx* amps, std::size_t dim) {
  if (dim < kParallelThreshold) return serial::norm2(amps, dim);
  double s = 0.0;
  const index_t n = static_cast<index_t>(dim);
#pragma omp parallel for schedule(static) reduction(+ : s)
  for (index_t i = 0; i < n; ++i) s += std::norm(amps[i]);
  return s;
}

void scale(cplx* amps, std::size_t dim, double factor) {
  if (dim < kParallelThreshold) return serial::scale(amps, dim, factor);
  const index_t n = static_cast<index_t>(dim);
#pragma omp parallel for schedule(static)
  for (index_t i = 0; i < n; ++i) amps[i] *= factor;
}

void accumulate_reduced(const cplx* amps, std::size_t dim, const unsigned* qubits, unsigned k,
                        double weight, cplx* rho) {
  if (dim < kParallelThreshold) return serial::accumulate_reduced(amps, dim, qubits, k, weight, rho);
  const auto layout = detail::reduced_layout(qubits, k);
  const std::size_t sub = std::size_t{1} << k;
  const index_t rest = static_cast<index_t>(dim >> k);
#pragma omp parallel
  {
    std::vector<cplx> local(sub * sub);
    std::vector<cplx> column(sub);
#pragma omp for schedule(static)
    for (index_t r = 0; r < rest; ++r) {
      const std::size_t base = detail::insert_zeros(static_cast<std::size_t>(r), layout.sorted);
      for (std::size_t x = 0; x < sub; ++x) column[x] = amps[base | layout.offsets[x]];
      for (std::size_t y = 0; y < sub; ++y) {
        const cplx cy = weight * std::conj(column[y]);
        if (cy == cplx{}) continue;
        for (std::size_t x = 0; x < sub; ++x) local[x + y * sub] += column[x] * cy;
      }
    }
#pragma omp critical(boqc_reduced_merge)
    for (std::size_t i = 0; i < sub * sub; ++i) rho[i] += local[i];
  }
}

std::array<double, 2> branch_norms(const cplx* amps, std::size_t dim, unsigned q, const cplx* bra0,
                                   const cplx* bra1) {
  if (dim < kParallelThreshold) return serial::branch_norms(amps, dim, q, bra0, bra1);
  const std::size_t bit = std::size_t{1} << q;
  const index_t n = static_cast<index_t>(dim / 2);
  double p0 = 0.0, p1 = 0.0;
#pragma omp parallel for schedule(static) reduction(+ : p0, p1)
  for (index_t i = 0; i < n; ++i) {
    const std::size_t i0 = insert_zero(static_cast<std::size_t>(i), q);
    const cplx a = amps[i0], b = amps[i0 | bit];
    p0 += std::norm(bra0[0] * a + bra0[1] * b);
    p1 += std::norm(bra1[0] * a + bra1[1] * b);
  }
  return {p0, p1};
}

}  // namespace boqc::qsim::omp
