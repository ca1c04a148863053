#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <random>
#include <stdexcept>
#include <vector>

#include "boqc/angles.hpp"
#include "boqc/qsim/kernels.hpp"

namespace boqc::qsim {

using QubitLabel = std::int64_t;

class AllocationError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

// A single-qubit projective basis given by the bras of its two outcomes.
struct Basis {
  std::array<cplx, 2> bra0;
  std::array<cplx, 2> bra1;

  static Basis computational();
  // outcome 0 <-> |+_delta>, outcome 1 <-> |+_{delta+pi}>
  static Basis equatorial(double delta_radians);
};

// Either a seeded sampler or a forced branch (per qubit label, with a fallback bit).
class OutcomeSource {
 public:
  static OutcomeSource sampler(std::uint64_t seed);
  static OutcomeSource forced(std::map<QubitLabel, int> outcomes = {}, int fallback = 0);

  int pick(QubitLabel label, double p0);
  bool is_forced() const { return !rng_.has_value(); }

 private:
  std::optional<std::mt19937_64> rng_;
  std::map<QubitLabel, int> forced_;
  int fallback_ = 0;
};

struct MeasureResult {
  int outcome = 0;
  double probability = 0.0;
};

class QuantumRegister {
 public:
  QuantumRegister() : amps_{cplx{1.0, 0.0}} {}

  std::size_t num_qubits() const { return labels_.size(); }
  std::size_t dimension() const { return amps_.size(); }
  bool holds(QubitLabel label) const;
  const std::vector<QubitLabel>& labels() const { return labels_; }
  const Amplitudes& amplitudes() const { return amps_; }
  // false once a forced branch of probability zero was taken
  bool valid() const { return valid_; }
  double norm() const;

  void alloc_plus(QubitLabel label, const DyadicAngle& theta);
  void alloc_basis(QubitLabel label, int bit);
  void alloc_state(QubitLabel label, cplx a0, cplx a1);
  // tensors in a multi-qubit state; labels[q] is bit q of the index
  void append_state(const std::vector<QubitLabel>& labels, const Amplitudes& amps);
  void relabel(QubitLabel from, QubitLabel to);

  void apply_cz(QubitLabel a, QubitLabel b);
  void apply_cnot(QubitLabel control, QubitLabel target);
  void apply_x(QubitLabel label);
  void apply_z(QubitLabel label);
  void apply_h(QubitLabel label);
  void apply_z_rotation(QubitLabel label, const DyadicAngle& theta);
  void apply_z_rotation(QubitLabel label, double radians);
  // X^sx first, then Z^sz
  void apply_correction(QubitLabel label, int sx, int sz);
  // X^t first, then Z(alpha)
  void apply_one_time_pad(QubitLabel label, const DyadicAngle& alpha, int t);

  std::array<double, 2> probabilities(QubitLabel label, const Basis& basis) const;
  // projects, renormalizes and removes the qubit
  void collapse(QubitLabel label, const Basis& basis, int outcome);
  MeasureResult measure(QubitLabel label, const Basis& basis, OutcomeSource& source);
  MeasureResult measure_angle(QubitLabel label, const DyadicAngle& delta, OutcomeSource& source);

  // amplitudes with the qubits permuted into `order` (a permutation of labels())
  Amplitudes amplitudes_in_order(const std::vector<QubitLabel>& order) const;

  unsigned slot(QubitLabel label) const;

 private:
  void append_qubit(QubitLabel label, cplx a0, cplx a1);

  std::vector<QubitLabel> labels_;
  Amplitudes amps_;
  bool valid_ = true;
};

// |<a|b>|^2 for two vectors in the same basis ordering
double state_fidelity(const Amplitudes& a, const Amplitudes& b);

}  // namespace boqc::qsim
