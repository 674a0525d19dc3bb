#pragma once

#include <Eigen/Core>

#include "bcdbench/blocks.hpp"

namespace bcd {

// Deterministic lower-bound accumulator: aggregates the (strong) convexity
// inequality at recorded iterates into
//   L_k(u) = [sum a_j f(x_j) + sum a_j <grad f(x_j), u - x_j>
//             + (mu/2) sum a_j |u - x_j|^2] / A_k,
// stored as a linear form plus quadratic bookkeeping so it can be queried at
// any point afterwards. L_k(x*) <= f(x*) holds per sample.
class GapAccumulator {
 public:
  GapAccumulator(int dim, double mu);

  void record(double a_k, const Eigen::VectorXd& x_k, const Eigen::VectorXd& grad_k, double f_k);

  bool empty() const { return count_ == 0; }
  long count() const { return count_; }
  double A() const { return big_a_; }

  double lower_bound(const Eigen::VectorXd& x_star) const;
  // G_k = f_latest - L_k(x*); upper-bounds the optimality gap of the latest iterate.
  double gap(double f_latest, const Eigen::VectorXd& x_star) const;

 private:
  int dim_;
  double mu_;
  long count_ = 0;
  double big_a_ = 0;
  double sum_af_ = 0;
  Eigen::VectorXd weighted_grad_;  // sum a_j grad f(x_j)
  double grad_dot_x_ = 0;          // sum a_j <grad f(x_j), x_j>
  Eigen::VectorXd weighted_x_;     // sum a_j x_j
  double weighted_x_sq_ = 0;       // sum a_j |x_j|^2
};

// Randomized lower bound for the accelerated runs:
//   Lambda_k = [sum a_j f(x_j) + min_u m_k(u)
//               - sum_i (sigma_i/2) |x*^i - x_1^i|^2] / A_k,
// with m_k(u) = sum a_j <Delta_j, u - x_j> + sum_i (sigma_i/2)|u^i - x_1^i|^2
// over the sampled blocks. min_u m_k is maintained incrementally from the
// block-local step quantities; a from-scratch evaluation is kept for tests.
class RandGapAccumulator {
 public:
  RandGapAccumulator(PartitionPtr partition, Eigen::VectorXd x1, Eigen::VectorXd sigma);

  void record(double a_k, double A_k, double f_xk, int block, const Eigen::VectorXd& delta_block,
              const Eigen::VectorXd& v_new_block, const Eigen::VectorXd& v_old_block,
              const Eigen::VectorXd& x_block);

  bool empty() const { return count_ == 0; }
  double A() const { return big_a_; }
  double min_m() const { return min_m_; }
  double min_m_from_scratch() const;

  double lambda(const Eigen::VectorXd& x_star) const;
  double gamma(double f_y_k, const Eigen::VectorXd& x_star) const;

 private:
  PartitionPtr partition_;
  Eigen::VectorXd x1_;
  Eigen::VectorXd sigma_;
  long count_ = 0;
  double big_a_ = 0;
  double sum_af_ = 0;
  double min_m_ = 0;
  Eigen::VectorXd g_;          // sum a_j Delta_j (zero on the exact block)
  double delta_dot_x_ = 0;     // sum a_j <Delta_j, x_j>
};

}  // namespace bcd
