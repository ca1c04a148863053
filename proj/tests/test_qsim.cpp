#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "boqc/qsim/density.hpp"
#include "boqc/qsim/kernels.hpp"
#include "boqc/qsim/register.hpp"
#include "support/oracles.hpp"

namespace boqc::qsim {
namespace {

using testing::Rng;

constexpr double kTol = 1e-12;
const double s2 = 1.0 / std::sqrt(2.0);

void expect_amps(const Amplitudes& got, const Amplitudes& want, double tol = kTol) {
  ASSERT_EQ(got.size(), want.size());
  for (std::size_t i = 0; i < got.size(); ++i) {
    EXPECT_NEAR(std::abs(got[i] - want[i]), 0.0, tol) << "index " << i;
  }
}

Matrix gate(cplx a, cplx b, cplx c, cplx d) {
  Matrix m(2, 2);
  m << a, b, c, d;
  return m;
}

TEST(Register, AllocPlus) {
  QuantumRegister r;
  r.alloc_plus(1, DyadicAngle(0, 4));
  expect_amps(r.amplitudes(), {s2, s2});
  QuantumRegister m;
  m.alloc_plus(1, DyadicAngle(8, 4));
  expect_amps(m.amplitudes(), {s2, -s2});
  r.alloc_plus(2, DyadicAngle(4, 4));
  expect_amps(r.amplitudes(), {0.5, 0.5, cplx{0, 0.5}, cplx{0, 0.5}});
  EXPECT_THROW(r.alloc_plus(2, DyadicAngle(0, 4)), AllocationError);
}

TEST(Register, ControlledZ) {
  QuantumRegister r;
  r.alloc_plus(1, DyadicAngle::zero(2));
  r.alloc_plus(2, DyadicAngle::zero(2));
  r.apply_cz(1, 2);
  expect_amps(r.amplitudes(), {0.5, 0.5, 0.5, -0.5});
  r.apply_cz(2, 1);
  expect_amps(r.amplitudes(), {0.5, 0.5, 0.5, 0.5});

  QuantumRegister z;
  z.alloc_basis(1, 0);
  z.alloc_plus(2, DyadicAngle::zero(2));
  const Amplitudes before = z.amplitudes();
  z.apply_cz(1, 2);
  expect_amps(z.amplitudes(), before);
  EXPECT_THROW(z.apply_cz(1, 1), AllocationError);
  EXPECT_THROW(z.apply_cz(1, 9), AllocationError);
}

TEST(Register, MeasureAngleExamples) {
  for (std::int64_t k = 0; k < 16; ++k) {
    QuantumRegister r;
    r.alloc_plus(1, DyadicAngle(k, 4));
    const auto p = r.probabilities(1, Basis::equatorial(DyadicAngle(k, 4).radians()));
    EXPECT_NEAR(p[0], 1.0, kTol);
    EXPECT_NEAR(p[1], 0.0, kTol);
  }
  QuantumRegister r;
  r.alloc_plus(1, DyadicAngle::zero(4));
  const auto p = r.probabilities(1, Basis::equatorial(DyadicAngle(4, 4).radians()));
  EXPECT_NEAR(p[0], 0.5, kTol);
  EXPECT_NEAR(p[1], 0.5, kTol);

  QuantumRegister q;
  q.alloc_state(1, s2, s2 * std::polar(1.0, std::numbers::pi / 4));
  auto src = OutcomeSource::forced();
  const auto res = q.measure_angle(1, DyadicAngle(2, 4), src);
  EXPECT_EQ(res.outcome, 0);
  EXPECT_NEAR(res.probability, 1.0, kTol);
  EXPECT_EQ(q.num_qubits(), 0u);
}

TEST(Register, ForcedZeroProbabilityBranchIsFlagged) {
  QuantumRegister r;
  r.alloc_plus(1, DyadicAngle(3, 3));
  auto src = OutcomeSource::forced({{1, 1}});
  const auto res = r.measure_angle(1, DyadicAngle(3, 3), src);
  EXPECT_EQ(res.outcome, 1);
  EXPECT_NEAR(res.probability, 0.0, kTol);
  EXPECT_FALSE(r.valid());
}

TEST(Register, MeasurementRemovesQubitAndKeepsRest) {
  Rng rng(3);
  QuantumRegister r;
  r.append_state({1, 2, 3}, testing::random_state(rng, 3));
  const auto p = r.probabilities(2, Basis::equatorial(0.7));
  EXPECT_NEAR(p[0] + p[1], 1.0, kTol);
  QuantumRegister copy = r;
  copy.collapse(2, Basis::equatorial(0.7), 1);
  EXPECT_EQ(copy.labels(), (std::vector<QubitLabel>{1, 3}));
  EXPECT_NEAR(copy.norm(), 1.0, kTol);
  // oracle: contract the explicit vector by hand
  const Amplitudes& a = r.amplitudes();
  const cplx bra0 = s2, bra1 = -s2 * std::polar(1.0, -0.7);
  Amplitudes want(4);
  for (std::size_t x = 0; x < 2; ++x) {
    for (std::size_t z = 0; z < 2; ++z) {
      want[x | (z << 1)] = (bra0 * a[x | (z << 2)] + bra1 * a[x | 2 | (z << 2)]) / std::sqrt(p[1]);
    }
  }
  expect_amps(copy.amplitudes(), want);
}

TEST(Register, Corrections) {
  QuantumRegister r;
  r.alloc_plus(1, DyadicAngle(3, 4));
  QuantumRegister id = r;
  id.apply_correction(1, 0, 0);
  expect_amps(id.amplitudes(), r.amplitudes());

  QuantumRegister x = r;
  x.apply_correction(1, 1, 0);
  QuantumRegister want_x;
  want_x.alloc_plus(1, DyadicAngle(-3, 4));
  EXPECT_NEAR(state_fidelity(x.amplitudes(), want_x.amplitudes()), 1.0, kTol);

  QuantumRegister z = r;
  z.apply_correction(1, 0, 1);
  QuantumRegister want_z;
  want_z.alloc_plus(1, DyadicAngle(3 + 8, 4));
  expect_amps(z.amplitudes(), want_z.amplitudes());
}

TEST(Register, ZRotation) {
  QuantumRegister r;
  r.alloc_plus(1, DyadicAngle(1, 3));
  QuantumRegister same = r;
  same.apply_z_rotation(1, DyadicAngle::zero(3));
  expect_amps(same.amplitudes(), r.amplitudes());
  QuantumRegister a = r, b = r;
  a.apply_z_rotation(1, DyadicAngle::pi(3));
  b.apply_z(1);
  expect_amps(a.amplitudes(), b.amplitudes());
}

TEST(Register, OneTimePadAveragesToMaximallyMixed) {
  Rng rng(19);
  for (int b = 2; b <= 4; ++b) {
    for (int trial = 0; trial < 5; ++trial) {
      const Amplitudes psi = testing::random_state(rng, 1);
      DensityAccumulator acc({1});
      for (const auto& alpha : angle_grid(b)) {
        for (int t = 0; t < 2; ++t) {
          QuantumRegister r;
          r.alloc_state(1, psi[0], psi[1]);
          r.apply_one_time_pad(1, alpha, t);
          acc.add(r, 1.0);
        }
      }
      EXPECT_LT(trace_distance(acc.average(), DensityMatrix::maximally_mixed({1})), 1e-10);
    }
  }
}

TEST(Register, PadOrderIsXThenRotation) {
  QuantumRegister r;
  r.alloc_state(1, 0.6, 0.8);
  r.apply_one_time_pad(1, DyadicAngle(1, 2), 1);
  // X then Z(pi/2): (0.8, 0.6 i)
  expect_amps(r.amplitudes(), {0.8, cplx{0, 0.6}});
}

TEST(Density, ReducedExamples) {
  QuantumRegister r;
  r.alloc_plus(1, DyadicAngle::zero(2));
  r.alloc_basis(2, 0);
  const auto rho = reduced_density(r, {1});
  EXPECT_NEAR(std::abs(rho.matrix(0, 0) - 0.5), 0.0, kTol);
  EXPECT_NEAR(std::abs(rho.matrix(0, 1) - 0.5), 0.0, kTol);
  EXPECT_TRUE(rho.is_physical());

  QuantumRegister bell;
  bell.append_state({1, 2}, {s2, 0, 0, s2});
  for (QubitLabel q : {1, 2}) {
    EXPECT_LT(trace_distance(reduced_density(bell, {q}), DensityMatrix::maximally_mixed({q})), kTol);
  }

  DensityAccumulator acc({1});
  for (const auto& a : angle_grid(2)) {
    QuantumRegister p;
    p.alloc_plus(1, a);
    acc.add(p, 0.25);
  }
  EXPECT_LT(trace_distance(acc.average(), DensityMatrix::maximally_mixed({1})), kTol);
}

TEST(Density, ReducedOrderFollowsLabels) {
  QuantumRegister r;
  r.alloc_basis(1, 1);
  r.alloc_basis(2, 0);
  const auto rho = reduced_density(r, {2, 1});
  // index bit 0 <-> qubit 2 (=0), bit 1 <-> qubit 1 (=1): basis state 2
  EXPECT_NEAR(rho.matrix(2, 2).real(), 1.0, kTol);
}

TEST(Density, TraceDistanceOfOrthogonalStates) {
  const auto a = DensityMatrix::pure({1}, {1, 0});
  const auto b = DensityMatrix::pure({1}, {0, 1});
  EXPECT_NEAR(trace_distance(a, b), 1.0, kTol);
  EXPECT_NEAR(trace_distance(a, a), 0.0, kTol);
}

TEST(Register, AmplitudesInOrder) {
  QuantumRegister r;
  r.alloc_basis(7, 1);
  r.alloc_basis(3, 0);
  const Amplitudes a = r.amplitudes_in_order({3, 7});
  // qubit 3 is bit 0 (value 0), qubit 7 is bit 1 (value 1)
  EXPECT_NEAR(std::abs(a[2]), 1.0, kTol);
}

TEST(Register, NormPreservedByRandomCircuits) {
  Rng rng(23);
  QuantumRegister r;
  r.append_state({0, 1, 2, 3, 4}, testing::random_state(rng, 5));
  std::uniform_int_distribution<int> q(0, 4), op(0, 4);
  for (int step = 0; step < 300; ++step) {
    const int a = q(rng);
    int b = q(rng);
    if (b == a) b = (a + 1) % 5;
    switch (op(rng)) {
      case 0: r.apply_cz(a, b); break;
      case 1: r.apply_h(a); break;
      case 2: r.apply_x(a); break;
      case 3: r.apply_z_rotation(a, DyadicAngle(step, 5)); break;
      default: r.apply_cnot(a, b); break;
    }
  }
  EXPECT_NEAR(r.norm(), 1.0, kTol);
}

TEST(Register, CzPairsCommute) {
  Rng rng(29);
  const Amplitudes psi = testing::random_state(rng, 4);
  QuantumRegister a, b;
  a.append_state({0, 1, 2, 3}, psi);
  b.append_state({0, 1, 2, 3}, psi);
  a.apply_cz(0, 1);
  a.apply_cz(1, 2);
  a.apply_cz(0, 3);
  b.apply_cz(3, 0);
  b.apply_cz(2, 1);
  b.apply_cz(1, 0);
  expect_amps(a.amplitudes(), b.amplitudes());
}

TEST(Kernels, AgreeWithDenseOracle) {
  Rng rng(31);
  const std::size_t n = 4;
  const Amplitudes psi = testing::random_state(rng, n);
  const Matrix H = gate(s2, s2, s2, -s2);
  const Matrix X = gate(0, 1, 1, 0);
  const Matrix P = gate(1, 0, 0, std::polar(1.0, 0.3));
  for (unsigned q = 0; q < n; ++q) {
    Amplitudes a = psi;
    serial::apply_h(a.data(), a.size(), q);
    expect_amps(a, testing::apply_dense(psi, n, q, H));
    a = psi;
    serial::apply_x(a.data(), a.size(), q);
    expect_amps(a, testing::apply_dense(psi, n, q, X));
    a = psi;
    serial::apply_phase(a.data(), a.size(), q, std::polar(1.0, 0.3));
    expect_amps(a, testing::apply_dense(psi, n, q, P));
  }
}

class KernelParity : public ::testing::TestWithParam<std::size_t> {};

TEST_P(KernelParity, OmpMatchesSerial) {
  const std::size_t n = GetParam();
  Rng rng(37 + n);
  const Amplitudes psi = testing::random_state(rng, n);
  const std::size_t dim = psi.size();
  auto both = [&](auto&& serial_op, auto&& omp_op) {
    Amplitudes a = psi, b = psi;
    serial_op(a.data());
    omp_op(b.data());
    ASSERT_EQ(a, b);
  };
  for (unsigned q = 0; q < n; q += 3) {
    const unsigned r = (q + 5) % static_cast<unsigned>(n);
    both([&](cplx* p) { serial::apply_h(p, dim, q); }, [&](cplx* p) { omp::apply_h(p, dim, q); });
    both([&](cplx* p) { serial::apply_x(p, dim, q); }, [&](cplx* p) { omp::apply_x(p, dim, q); });
    both([&](cplx* p) { serial::apply_phase(p, dim, q, cplx{0, 1}); },
         [&](cplx* p) { omp::apply_phase(p, dim, q, cplx{0, 1}); });
    if (r != q) {
      both([&](cplx* p) { serial::apply_cz(p, dim, q, r); }, [&](cplx* p) { omp::apply_cz(p, dim, q, r); });
      both([&](cplx* p) { serial::apply_cnot(p, dim, q, r); }, [&](cplx* p) { omp::apply_cnot(p, dim, q, r); });
    }
    Amplitudes cs(dim / 2), co(dim / 2);
    serial::contract(psi.data(), dim, q, s2, cplx{0, s2}, cs.data());
    omp::contract(psi.data(), dim, q, s2, cplx{0, s2}, co.data());
    ASSERT_EQ(cs, co);
  }
  EXPECT_NEAR(serial::norm2(psi.data(), dim), omp::norm2(psi.data(), dim), 1e-12);
  const unsigned qubits[] = {1, 0, static_cast<unsigned>(n - 1)};
  std::vector<cplx> rs(64), ro(64);
  serial::accumulate_reduced(psi.data(), dim, qubits, 3, 0.5, rs.data());
  omp::accumulate_reduced(psi.data(), dim, qubits, 3, 0.5, ro.data());
  for (std::size_t i = 0; i < rs.size(); ++i) EXPECT_NEAR(std::abs(rs[i] - ro[i]), 0.0, 1e-12);
}

INSTANTIATE_TEST_SUITE_P(Sizes, KernelParity, ::testing::Values(5, 10, 16));

}  // namespace
}  // namespace boqc::qsim
