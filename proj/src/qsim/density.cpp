#include "boqc/qsim/density.hpp"

#include <Eigen/Eigenvalues>
#include <stdexcept>

namespace boqc::qsim {

DensityMatrix DensityMatrix::pure(std::vector<QubitLabel> labels, const Amplitudes& amps) {
  if (amps.size() != (std::size_t{1} << labels.size())) {
    throw std::invalid_argument("state size does not match its qubit count");
  }
  Eigen::Map<const Eigen::VectorXcd> v(amps.data(), static_cast<Eigen::Index>(amps.size()));
  return {std::move(labels), v * v.adjoint()};
}

DensityMatrix DensityMatrix::maximally_mixed(std::vector<QubitLabel> labels) {
  const auto d = static_cast<Eigen::Index>(std::size_t{1} << labels.size());
  return {std::move(labels), Matrix::Identity(d, d) / static_cast<double>(d)};
}

bool DensityMatrix::is_physical(double tol) const {
  if (matrix.rows() != matrix.cols()) return false;
  if ((matrix - matrix.adjoint()).cwiseAbs().maxCoeff() > tol) return false;
  if (std::abs(matrix.trace() - cplx{1.0, 0.0}) > tol) return false;
  Eigen::SelfAdjointEigenSolver<Matrix> es(matrix);
  return es.eigenvalues().minCoeff() >= -tol;
}

DensityMatrix reduced_density(const QuantumRegister& reg, const std::vector<QubitLabel>& labels) {
  DensityAccumulator acc(labels);
  acc.add(reg, 1.0);
  return {labels, acc.sum()};
}

DensityAccumulator::DensityAccumulator(std::vector<QubitLabel> labels) : labels_(std::move(labels)) {
  const auto d = static_cast<Eigen::Index>(std::size_t{1} << labels_.size());
  sum_ = Matrix::Zero(d, d);
}

void DensityAccumulator::add(const QuantumRegister& reg, double weight) {
  std::vector<unsigned> slots;
  slots.reserve(labels_.size());
  for (QubitLabel l : labels_) slots.push_back(reg.slot(l));
  omp::accumulate_reduced(reg.amplitudes().data(), reg.dimension(), slots.data(),
                          static_cast<unsigned>(slots.size()), weight, sum_.data());
  weight_ += weight;
}

void DensityAccumulator::add(const DensityAccumulator& other) {
  if (other.labels_ != labels_) throw std::invalid_argument("accumulators over different qubits");
  sum_ += other.sum_;
  weight_ += other.weight_;
}

void DensityAccumulator::add_matrix(const Matrix& m, double weight) {
  sum_ += weight * m;
  weight_ += weight;
}

DensityMatrix DensityAccumulator::average() const {
  if (weight_ <= 0.0) throw std::logic_error("empty ensemble");
  return {labels_, sum_ / weight_};
}

double trace_distance(const Matrix& a, const Matrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    throw std::invalid_argument("trace distance between matrices of different size");
  }
  const Matrix diff = a - b;
  const Matrix herm = 0.5 * (diff + diff.adjoint());
  Eigen::SelfAdjointEigenSolver<Matrix> es(herm, Eigen::EigenvaluesOnly);
  return 0.5 * es.eigenvalues().cwiseAbs().sum();
}

double trace_distance(const DensityMatrix& a, const DensityMatrix& b) {
  if (a.labels != b.labels) throw std::invalid_argument("density matrices over different qubits");
  return trace_distance(a.matrix, b.matrix);
}

}  // namespace boqc::qsim
