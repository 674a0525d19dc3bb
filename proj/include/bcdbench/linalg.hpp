#pragma once

#include <Eigen/Core>

namespace bcd {

// Largest eigenvalue of a symmetric PSD matrix by power iteration (Rayleigh
// quotient stopping rule). The returned value is nudged up by the last
// observed increment so it never under-estimates the true spectral norm by
// more than round-off.
double spectral_norm_sym(const Eigen::MatrixXd& g, double rel_tol = 1e-10, int max_iter = 10000);

double smallest_eigenvalue_sym(const Eigen::MatrixXd& g);

// Minimum-norm solver for symmetric PSD systems g x = rhs. Eigenvalues below
// cutoff * max eigenvalue are treated as zero, which makes rank-deficient
// solves deterministic.
class PinvSolver {
 public:
  explicit PinvSolver(const Eigen::MatrixXd& g, double cutoff = 1e-12);
  PinvSolver() = default;

  Eigen::VectorXd solve(const Eigen::VectorXd& rhs) const;
  int rank() const { return rank_; }

 private:
  Eigen::MatrixXd basis_;        // eigenvectors
  Eigen::VectorXd inv_eigvals_;  // zero where truncated
  int rank_ = 0;
};

}  // namespace bcd
