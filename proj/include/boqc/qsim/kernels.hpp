#pragma once

#include <array>
#include <complex>
#include <cstddef>
#include <vector>

namespace boqc::qsim {

using cplx = std::complex<double>;
using Amplitudes = std::vector<cplx>;

// states with fewer amplitudes than this stay on one thread even in the omp variant
constexpr std::size_t kParallelThreshold = std::size_t{1} << 14;

// Raw statevector kernels. Qubit q is bit q of the basis index.
// `serial` is the reference implementation; `omp` is the one the simulator uses.
// Gate kernels agree exactly, reductions agree up to summation order.
namespace serial {

void apply_cz(cplx* amps, std::size_t dim, unsigned qa, unsigned qb);
void apply_x(cplx* amps, std::size_t dim, unsigned q);
void apply_phase(cplx* amps, std::size_t dim, unsigned q, cplx phase_on_one);
void apply_h(cplx* amps, std::size_t dim, unsigned q);
void apply_cnot(cplx* amps, std::size_t dim, unsigned control, unsigned target);
// out[rest] = bra0 * amps[q=0, rest] + bra1 * amps[q=1, rest]; out holds dim/2 entries
void contract(const cplx* amps, std::size_t dim, unsigned q, cplx bra0, cplx bra1, cplx* out);
double norm2(const cplx* amps, std::size_t dim);
void scale(cplx* amps, std::size_t dim, double factor);
// rho (2^k x 2^k, column-major) += weight * partial trace onto `qubits` (qubits[0] is bit 0)
void accumulate_reduced(const cplx* amps, std::size_t dim, const unsigned* qubits, unsigned k,
                        double weight, cplx* rho);
// squared norms of the two contractions with bra0 and bra1 (two entries each)
std::array<double, 2> branch_norms(const cplx* amps, std::size_t dim, unsigned q, const cplx* bra0,
                                   const cplx* bra1);

}  // namespace serial

namespace omp {

void apply_cz(cplx* amps, std::size_t dim, unsigned qa, unsigned qb);
void apply_x(cplx* amps, std::size_t dim, unsigned q);
void apply_phase(cplx* amps, std::size_t dim, unsigned q, cplx phase_on_one);
void apply_h(cplx* amps, std::size_t dim, unsigned q);
void apply_cnot(cplx* amps, std::size_t dim, unsigned control, unsigned target);
void contract(const cplx* amps, std::size_t dim, unsigned q, cplx bra0, cplx bra1, cplx* out);
double norm2(const cplx* amps, std::size_t dim);
void scale(cplx* amps, std::size_t dim, double factor);
void accumulate_reduced(const cplx* amps, std::size_t dim, const unsigned* qubits, unsigned k,
                        double weight, cplx* rho);
std::array<double, 2> branch_norms(const cplx* amps, std::size_t dim, unsigned q, const cplx* bra0,
                                   const cplx* bra1);

}  // namespace omp

}  // namespace boqc::qsim
