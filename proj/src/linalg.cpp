#include "bcdbench/linalg.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>
#include <stdexcept>

namespace bcd {

double spectral_norm_sym(const Eigen::MatrixXd& g, double rel_tol, int max_iter) {
  const Eigen::Index n = g.rows();
  if (g.cols() != n) throw std::invalid_argument("spectral_norm_sym: matrix not square");
  if (n == 0) return 0.0;

  // Deterministic start with a mild ramp so it is not orthogonal to the
  // leading eigenvector of the matrices seen here.
  Eigen::VectorXd v(n);
  for (Eigen::Index i = 0; i < n; ++i) v[i] = 1.0 + 0.25 * static_cast<double>(i) / static_cast<double>(n);
  v.normalize();

  double lambda = 0.0;
  double increment = 0.0;
  for (int it = 0; it < max_iter; ++it) {
    Eigen::VectorXd w = g * v;
    const double norm = w.norm();
    if (norm == 0.0) return 0.0;
    const double next = v.dot(w);
    increment = std::abs(next - lambda);
    lambda = next;
    v = w / norm;
    if (it > 0 && increment <= rel_tol * std::abs(lambda)) break;
  }
  // Over-estimating only slows a gradient step; under-estimating breaks the
  // progress bound, so pad with the residual scale of the iteration.
  return lambda + 4.0 * increment + 1e-14 * std::abs(lambda);
}

double smallest_eigenvalue_sym(const Eigen::MatrixXd& g) {
  if (g.rows() == 0) return 0.0;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(g, Eigen::EigenvaluesOnly);
  return es.eigenvalues().minCoeff();
}

PinvSolver::PinvSolver(const Eigen::MatrixXd& g, double cutoff) {
  if (g.rows() != g.cols()) throw std::invalid_argument("PinvSolver: matrix not square");
  if (g.rows() == 0) return;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(g);
  const Eigen::VectorXd eig = es.eigenvalues();
  basis_ = es.eigenvectors();
  inv_eigvals_ = Eigen::VectorXd::Zero(eig.size());
  const double max_eig = eig.cwiseAbs().maxCoeff();
  const double floor = cutoff * max_eig;
  for (Eigen::Index i = 0; i < eig.size(); ++i) {
    if (eig[i] > floor && eig[i] > 0.0) {
      inv_eigvals_[i] = 1.0 / eig[i];
      ++rank_;
    }
  }
}

Eigen::VectorXd PinvSolver::solve(const Eigen::VectorXd& rhs) const {
  if (rhs.size() == 0) return rhs;
  if (basis_.rows() != rhs.size()) throw std::invalid_argument("PinvSolver: size mismatch");
  return basis_ * inv_eigvals_.cwiseProduct(basis_.transpose() * rhs);
}

}  // namespace bcd
