#pragma once

#include <Eigen/Core>

#include <functional>
#include <limits>
#include <memory>
#include <vector>

#include "bcdbench/blocks.hpp"
#include "bcdbench/linalg.hpp"

namespace bcd {

// Sentinel for a non-smooth block. Never used in arithmetic; a schedule or
// sampler touching it is a configuration error.
inline constexpr double kInfiniteSmoothness = std::numeric_limits<double>::infinity();

// Per-block gradient Lipschitz constants plus the strong-convexity modulus.
// Only the last block may be non-smooth (infinite); a zero entry is legal
// only for an empty last block.
struct SmoothnessProfile {
  Eigen::VectorXd per_block_l;
  double mu = 0.0;

  void validate(const BlockPartition& partition) const;
  double sampled_sum() const;       // sum of L_i over blocks 0..n-2
  double sampled_sqrt_sum() const;  // sum of sqrt(L_i) over blocks 0..n-2
};

class Objective {
 public:
  virtual ~Objective() = default;

  const BlockPartition& partition() const { return *partition_; }
  PartitionPtr partition_ptr() const { return partition_; }
  int dim() const { return partition_->n_coords(); }

  virtual double eval(const Eigen::VectorXd& x) const = 0;
  virtual Eigen::VectorXd block_gradient(const Eigen::VectorXd& x, int block) const = 0;
  Eigen::VectorXd full_gradient(const Eigen::VectorXd& x) const;

  double block_smoothness(int block) const;
  double strong_convexity() const { return profile_.mu; }
  const SmoothnessProfile& smoothness() const { return profile_; }

  virtual bool supports_exact_min(int block) const = 0;
  virtual void exact_block_min_inplace(Eigen::VectorXd& x, int block) const = 0;
  Eigen::VectorXd exact_block_min(const Eigen::VectorXd& x, int block) const;

 protected:
  Objective(PartitionPtr partition, SmoothnessProfile profile);
  void check_dim(const Eigen::VectorXd& x) const;

  PartitionPtr partition_;
  SmoothnessProfile profile_;
};

// f(x) = 0.5 |A x - b|^2 + 0.5 lambda |x|^2. Every block is exactly
// minimizable through a precomputed pseudoinverse of its normal-equation
// matrix, so rank-deficient blocks get the minimum-norm update.
class QuadraticProblem final : public Objective {
 public:
  QuadraticProblem(Eigen::MatrixXd a, Eigen::VectorXd b, double lambda, PartitionPtr partition);

  double eval(const Eigen::VectorXd& x) const override;
  Eigen::VectorXd block_gradient(const Eigen::VectorXd& x, int block) const override;
  bool supports_exact_min(int) const override { return true; }
  void exact_block_min_inplace(Eigen::VectorXd& x, int block) const override;

  // Minimum-norm solution of the normal equations (the f* reference point).
  Eigen::VectorXd minimum_norm_solution() const;

  const Eigen::MatrixXd& design() const { return a_; }
  const Eigen::VectorXd& labels() const { return b_; }
  double ridge() const { return lambda_; }

 private:
  Eigen::MatrixXd a_;
  Eigen::VectorXd b_;
  double lambda_;
  std::vector<Eigen::MatrixXd> block_cols_;
  std::vector<PinvSolver> block_solvers_;
};

// Scalar link functions phi_j with derivatives; j is the row index.
struct RowLink {
  std::function<double(int row, double t)> value;
  std::function<double(int row, double t)> derivative;
};

RowLink least_squares_link(Eigen::VectorXd labels);  // phi_j(t) = 0.5 (t - b_j)^2

// Block-separable term psi = sum_i psi_i.
class SeparableTerm {
 public:
  virtual ~SeparableTerm() = default;
  virtual double value(const Eigen::VectorXd& x) const = 0;
  virtual Eigen::VectorXd block_gradient(const Eigen::VectorXd& x_block, int block) const = 0;
};

class RidgePenalty final : public SeparableTerm {
 public:
  explicit RidgePenalty(double lambda) : lambda_(lambda) {}
  double value(const Eigen::VectorXd& x) const override { return 0.5 * lambda_ * x.squaredNorm(); }
  Eigen::VectorXd block_gradient(const Eigen::VectorXd& x_block, int) const override {
    return lambda_ * x_block;
  }
  double lambda() const { return lambda_; }

 private:
  double lambda_;
};

// m-dimensional residuals maintained by the cached accelerated solver:
// r_u = B u, r_v = B v (sampled blocks), r_n = C x^n.
struct ResidualCache {
  Eigen::VectorXd r_u, r_v, r_n;
};

// Composite objective f(x) = sum_j phi_j(e_j^T M x) + psi(x). The column
// submatrix B covers blocks 0..n-2 (packed in block order), C covers the
// last block; block gradients and the exact last-block step can then be
// computed from m-length residuals without materializing iterates.
class StructuredObjective final : public Objective {
 public:
  using LastBlockMin =
      std::function<Eigen::VectorXd(const StructuredObjective&, const Eigen::VectorXd& x)>;

  StructuredObjective(Eigen::MatrixXd m, PartitionPtr partition, RowLink link,
                      std::shared_ptr<const SeparableTerm> psi, SmoothnessProfile profile,
                      LastBlockMin last_block_min = {});

  // The ridge / least-squares instance: phi_j(t) = 0.5 (t - b_j)^2,
  // psi = 0.5 lambda |x|^2, closed-form exact minimization on the last block.
  static StructuredObjective least_squares(Eigen::MatrixXd m, Eigen::VectorXd labels,
                                           double lambda, PartitionPtr partition);

  double eval(const Eigen::VectorXd& x) const override;
  Eigen::VectorXd block_gradient(const Eigen::VectorXd& x, int block) const override;
  bool supports_exact_min(int block) const override;
  void exact_block_min_inplace(Eigen::VectorXd& x, int block) const override;

  int rows() const { return static_cast<int>(m_.rows()); }
  const Eigen::MatrixXd& link_matrix() const { return m_; }
  const Eigen::MatrixXd& sampled_columns() const { return b_cols_; }  // B
  const Eigen::MatrixXd& exact_columns() const { return c_cols_; }    // C
  // Offset of a sampled block inside the packed (blocks 0..n-2) coordinate order.
  int packed_offset(int block) const;
  Eigen::VectorXd pack_sampled(const Eigen::VectorXd& x) const;
  void unpack_sampled(const Eigen::VectorXd& packed, Eigen::VectorXd& x) const;

  bool has_least_squares_form() const { return least_squares_form_; }
  const Eigen::VectorXd& labels() const;
  double ridge() const { return lambda_; }

  // x^n = pinv(C^T C + lambda I) C^T b', with b' = labels - ratio r_u - r_v
  // and ratio = a_k^2 / A_k^2. Refreshes cache.r_n. Least-squares form only.
  Eigen::VectorXd closed_form_exact_min(ResidualCache& cache, double ratio) const;

  // Gradient of f over `block` at the iterate implied by the caches, i.e. at
  // x with M x = ratio r_u + r_v + r_n and x^block = x_block.
  Eigen::VectorXd cached_block_gradient(const ResidualCache& cache, double ratio,
                                        const Eigen::VectorXd& x_block, int block) const;

  const SeparableTerm* psi() const { return psi_.get(); }

 private:
  Eigen::VectorXd residual_without_last(const Eigen::VectorXd& x) const;

  Eigen::MatrixXd m_;
  RowLink link_;
  std::shared_ptr<const SeparableTerm> psi_;
  LastBlockMin last_block_min_;
  Eigen::MatrixXd b_cols_, c_cols_;
  std::vector<int> packed_offset_;
  std::vector<Eigen::MatrixXd> block_cols_;  // per-block columns of M (global block order)
  bool least_squares_form_ = false;
  Eigen::VectorXd labels_;
  double lambda_ = 0.0;
  PinvSolver exact_solver_;  // pinv of C^T C + lambda I (least-squares form)
};

// Central finite differences; the independent oracle the analytic gradients
// are tested against.
Eigen::VectorXd finite_diff_gradient(const Objective& f, const Eigen::VectorXd& x, double h);

// Per-block L for a quadratic design: spectral norm of A_i^T A_i plus ridge;
// mu = smallest eigenvalue of A^T A plus ridge. Zero entries are produced
// only for an empty last block.
SmoothnessProfile quadratic_smoothness(const Eigen::MatrixXd& a, double lambda,
                                       const BlockPartition& partition);

}  // namespace bcd
