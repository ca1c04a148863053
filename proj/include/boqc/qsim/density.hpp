#pragma once

#include <Eigen/Dense>
#include <vector>

#include "boqc/qsim/register.hpp"

namespace boqc::qsim {

using Matrix = Eigen::MatrixXcd;

// Density matrix over named qubits; labels[q] is bit q of the row/column index.
struct DensityMatrix {
  std::vector<QubitLabel> labels;
  Matrix matrix;

  static DensityMatrix pure(std::vector<QubitLabel> labels, const Amplitudes& amps);
  static DensityMatrix maximally_mixed(std::vector<QubitLabel> labels);

  std::size_t dimension() const { return static_cast<std::size_t>(matrix.rows()); }
  // Hermitian, unit trace, eigenvalues >= -tol
  bool is_physical(double tol = 1e-10) const;
};

DensityMatrix reduced_density(const QuantumRegister& reg, const std::vector<QubitLabel>& labels);

// Probability-weighted ensemble average of reduced states.
class DensityAccumulator {
 public:
  explicit DensityAccumulator(std::vector<QubitLabel> labels);

  void add(const QuantumRegister& reg, double weight);
  void add(const DensityAccumulator& other);
  void add_matrix(const Matrix& m, double weight);
  double total_weight() const { return weight_; }
  const std::vector<QubitLabel>& labels() const { return labels_; }
  // unnormalized sum
  const Matrix& sum() const { return sum_; }
  DensityMatrix average() const;

 private:
  std::vector<QubitLabel> labels_;
  Matrix sum_;
  double weight_ = 0.0;
};

// (1/2) || a - b ||_1
double trace_distance(const Matrix& a, const Matrix& b);
double trace_distance(const DensityMatrix& a, const DensityMatrix& b);

}  // namespace boqc::qsim
