#include "bcdbench/objective.hpp"

#include <cmath>
#include <stdexcept>
#include <string>
#include <utility>

namespace bcd {

void SmoothnessProfile::validate(const BlockPartition& partition) const {
  const int n = partition.n_blocks();
  if (per_block_l.size() != n)
    throw std::invalid_argument("smoothness profile: expected one L per block");
  if (mu < 0) throw std::invalid_argument("smoothness profile: mu must be nonnegative");

  double min_finite = kInfiniteSmoothness;
  for (int i = 0; i < n; ++i) {
    const double l = per_block_l[i];
    const bool empty = partition.block_size(i) == 0;
    if (empty) continue;  // only the last block can be empty; any L is ignored
    if (i == partition.last_block()) {
      // Never gradient-stepped: zero (degenerate flat block) and infinity
      // (non-smooth) are both representable here.
      if (std::isnan(l) || l < 0)
        throw std::invalid_argument("smoothness profile: last-block L must be nonnegative");
      continue;
    }
    if (std::isnan(l) || l <= 0 || std::isinf(l))
      throw std::invalid_argument(
          "smoothness profile: L must be positive and finite for block " + std::to_string(i));
    min_finite = std::min(min_finite, l);
  }
  if (std::isfinite(min_finite) && mu > min_finite * (1.0 + 1e-9))
    throw std::invalid_argument("smoothness profile: mu exceeds the smallest finite block L");
}

double SmoothnessProfile::sampled_sum() const {
  double s = 0;
  for (Eigen::Index i = 0; i + 1 < per_block_l.size(); ++i) s += per_block_l[i];
  return s;
}

double SmoothnessProfile::sampled_sqrt_sum() const {
  double s = 0;
  for (Eigen::Index i = 0; i + 1 < per_block_l.size(); ++i) s += std::sqrt(per_block_l[i]);
  return s;
}

Objective::Objective(PartitionPtr partition, SmoothnessProfile profile)
    : partition_(std::move(partition)), profile_(std::move(profile)) {
  if (!partition_) throw std::invalid_argument("objective: null partition");
  profile_.validate(*partition_);
}

void Objective::check_dim(const Eigen::VectorXd& x) const {
  if (x.size() != dim())
    throw std::invalid_argument("objective: vector length " + std::to_string(x.size()) +
                                " does not match dimension " + std::to_string(dim()));
}

Eigen::VectorXd Objective::full_gradient(const Eigen::VectorXd& x) const {
  check_dim(x);
  Eigen::VectorXd g = Eigen::VectorXd::Zero(dim());
  for (int i = 0; i < partition().n_blocks(); ++i)
    block_scatter(partition(), g, i, block_gradient(x, i));
  return g;
}

double Objective::block_smoothness(int block) const {
  if (block < 0 || block >= partition().n_blocks())
    throw std::out_of_range("block_smoothness: block index out of range");
  return profile_.per_block_l[block];
}

Eigen::VectorXd Objective::exact_block_min(const Eigen::VectorXd& x, int block) const {
  Eigen::VectorXd y = x;
  exact_block_min_inplace(y, block);
  return y;
}

SmoothnessProfile quadratic_smoothness(const Eigen::MatrixXd& a, double lambda,
                                       const BlockPartition& partition) {
  SmoothnessProfile profile;
  profile.per_block_l = Eigen::VectorXd::Zero(partition.n_blocks());
  for (int i = 0; i < partition.n_blocks(); ++i) {
    const auto& idx = partition.block(i);
    if (idx.empty()) continue;
    Eigen::MatrixXd cols(a.rows(), static_cast<Eigen::Index>(idx.size()));
    for (size_t j = 0; j < idx.size(); ++j) cols.col(static_cast<Eigen::Index>(j)) = a.col(idx[j]);
    profile.per_block_l[i] = spectral_norm_sym(cols.transpose() * cols) + lambda;
  }
  profile.mu = std::max(0.0, smallest_eigenvalue_sym(a.transpose() * a)) + lambda;
  return profile;
}

QuadraticProblem::QuadraticProblem(Eigen::MatrixXd a, Eigen::VectorXd b, double lambda,
                                   PartitionPtr partition)
    : Objective(partition, quadratic_smoothness(a, lambda, *partition)),
      a_(std::move(a)),
      b_(std::move(b)),
      lambda_(lambda) {
  if (a_.cols() != dim()) throw std::invalid_argument("quadratic: design has wrong column count");
  if (b_.size() != a_.rows()) throw std::invalid_argument("quadratic: label length mismatch");
  if (lambda_ < 0) throw std::invalid_argument("quadratic: ridge must be nonnegative");

  block_cols_.reserve(static_cast<size_t>(partition_->n_blocks()));
  block_solvers_.reserve(static_cast<size_t>(partition_->n_blocks()));
  for (int i = 0; i < partition_->n_blocks(); ++i) {
    const auto& idx = partition_->block(i);
    Eigen::MatrixXd cols(a_.rows(), static_cast<Eigen::Index>(idx.size()));
    for (size_t j = 0; j < idx.size(); ++j) cols.col(static_cast<Eigen::Index>(j)) = a_.col(idx[j]);
    Eigen::MatrixXd gram = cols.transpose() * cols;
    gram.diagonal().array() += lambda_;
    block_cols_.push_back(std::move(cols));
    block_solvers_.emplace_back(gram);
  }
}

double QuadraticProblem::eval(const Eigen::VectorXd& x) const {
  check_dim(x);
  return 0.5 * (a_ * x - b_).squaredNorm() + 0.5 * lambda_ * x.squaredNorm();
}

Eigen::VectorXd QuadraticProblem::block_gradient(const Eigen::VectorXd& x, int block) const {
  check_dim(x);
  const Eigen::VectorXd r = a_ * x - b_;
  return block_cols_[static_cast<size_t>(block)].transpose() * r +
         lambda_ * block_restrict(partition(), x, block);
}

void QuadraticProblem::exact_block_min_inplace(Eigen::VectorXd& x, int block) const {
  check_dim(x);
  const auto& cols = block_cols_[static_cast<size_t>(block)];
  if (cols.cols() == 0) return;
  // residual contributed by the other blocks
  const Eigen::VectorXd t = a_ * x - cols * block_restrict(partition(), x, block);
  const Eigen::VectorXd u = block_solvers_[static_cast<size_t>(block)].solve(
      cols.transpose() * (b_ - t));
  block_scatter(partition(), x, block, u);
}

Eigen::VectorXd QuadraticProblem::minimum_norm_solution() const {
  Eigen::MatrixXd gram = a_.transpose() * a_;
  gram.diagonal().array() += lambda_;
  return PinvSolver(gram).solve(a_.transpose() * b_);
}

RowLink least_squares_link(Eigen::VectorXd labels) {
  auto b = std::make_shared<Eigen::VectorXd>(std::move(labels));
  RowLink link;
  link.value = [b](int row, double t) {
    const double d = t - (*b)[row];
    return 0.5 * d * d;
  };
  link.derivative = [b](int row, double t) { return t - (*b)[row]; };
  return link;
}

StructuredObjective::StructuredObjective(Eigen::MatrixXd m, PartitionPtr partition, RowLink link,
                                         std::shared_ptr<const SeparableTerm> psi,
                                         SmoothnessProfile profile, LastBlockMin last_block_min)
    : Objective(partition, std::move(profile)),
      m_(std::move(m)),
      link_(std::move(link)),
      psi_(std::move(psi)),
      last_block_min_(std::move(last_block_min)) {
  if (m_.cols() != dim()) throw std::invalid_argument("structured: link matrix column mismatch");
  if (!link_.value || !link_.derivative)
    throw std::invalid_argument("structured: row link needs value and derivative");

  const int n = partition_->n_blocks();
  packed_offset_.assign(static_cast<size_t>(n), 0);
  int off = 0;
  for (int i = 0; i + 1 < n; ++i) {
    packed_offset_[static_cast<size_t>(i)] = off;
    off += partition_->block_size(i);
  }
  b_cols_.resize(m_.rows(), off);
  for (int i = 0; i + 1 < n; ++i) {
    const auto& idx = partition_->block(i);
    for (size_t j = 0; j < idx.size(); ++j)
      b_cols_.col(packed_offset_[static_cast<size_t>(i)] + static_cast<Eigen::Index>(j)) =
          m_.col(idx[j]);
  }
  const auto& last = partition_->block(partition_->last_block());
  c_cols_.resize(m_.rows(), static_cast<Eigen::Index>(last.size()));
  for (size_t j = 0; j < last.size(); ++j)
    c_cols_.col(static_cast<Eigen::Index>(j)) = m_.col(last[j]);

  block_cols_.reserve(static_cast<size_t>(n));
  for (int i = 0; i < n; ++i) {
    const auto& idx = partition_->block(i);
    Eigen::MatrixXd cols(m_.rows(), static_cast<Eigen::Index>(idx.size()));
    for (size_t j = 0; j < idx.size(); ++j) cols.col(static_cast<Eigen::Index>(j)) = m_.col(idx[j]);
    block_cols_.push_back(std::move(cols));
  }
}

StructuredObjective StructuredObjective::least_squares(Eigen::MatrixXd m, Eigen::VectorXd labels,
                                                       double lambda, PartitionPtr partition) {
  if (labels.size() != m.rows())
    throw std::invalid_argument("structured least squares: label length mismatch");
  if (lambda < 0) throw std::invalid_argument("structured least squares: ridge must be nonnegative");
  SmoothnessProfile profile = quadratic_smoothness(m, lambda, *partition);
  std::shared_ptr<const SeparableTerm> psi;
  if (lambda > 0) psi = std::make_shared<RidgePenalty>(lambda);
  StructuredObjective obj(std::move(m), std::move(partition), least_squares_link(labels),
                          std::move(psi), std::move(profile));
  obj.least_squares_form_ = true;
  obj.labels_ = std::move(labels);
  obj.lambda_ = lambda;
  Eigen::MatrixXd gram = obj.c_cols_.transpose() * obj.c_cols_;
  gram.diagonal().array() += lambda;
  obj.exact_solver_ = PinvSolver(gram);
  return obj;
}

double StructuredObjective::eval(const Eigen::VectorXd& x) const {
  check_dim(x);
  const Eigen::VectorXd z = m_ * x;
  double f = 0;
  for (int j = 0; j < rows(); ++j) f += link_.value(j, z[j]);
  if (psi_) f += psi_->value(x);
  return f;
}

Eigen::VectorXd StructuredObjective::block_gradient(const Eigen::VectorXd& x, int block) const {
  check_dim(x);
  const Eigen::VectorXd z = m_ * x;
  Eigen::VectorXd w(rows());
  for (int j = 0; j < rows(); ++j) w[j] = link_.derivative(j, z[j]);
  Eigen::VectorXd g = block_cols_[static_cast<size_t>(block)].transpose() * w;
  if (psi_) g += psi_->block_gradient(block_restrict(partition(), x, block), block);
  return g;
}

bool StructuredObjective::supports_exact_min(int block) const {
  return block == partition().last_block() &&
         (least_squares_form_ || static_cast<bool>(last_block_min_));
}

Eigen::VectorXd StructuredObjective::residual_without_last(const Eigen::VectorXd& x) const {
  Eigen::VectorXd masked = x;
  const auto& last = partition().block(partition().last_block());
  for (int c : last) masked[c] = 0;
  return m_ * masked;
}

void StructuredObjective::exact_block_min_inplace(Eigen::VectorXd& x, int block) const {
  check_dim(x);
  if (!supports_exact_min(block))
    throw std::invalid_argument("structured: exact minimization unsupported on block " +
                                std::to_string(block));
  if (partition().block_size(block) == 0) return;
  if (least_squares_form_) {
    const Eigen::VectorXd b_prime = labels_ - residual_without_last(x);
    block_scatter(partition(), x, block, exact_solver_.solve(c_cols_.transpose() * b_prime));
  } else {
    block_scatter(partition(), x, block, last_block_min_(*this, x));
  }
}

int StructuredObjective::packed_offset(int block) const {
  if (block < 0 || block >= partition().last_block())
    throw std::out_of_range("packed_offset: not a sampled block");
  return packed_offset_[static_cast<size_t>(block)];
}

Eigen::VectorXd StructuredObjective::pack_sampled(const Eigen::VectorXd& x) const {
  check_dim(x);
  Eigen::VectorXd packed(partition().sampled_coords());
  for (int i = 0; i + 1 < partition().n_blocks(); ++i) {
    const auto& idx = partition().block(i);
    const int off = packed_offset_[static_cast<size_t>(i)];
    for (size_t j = 0; j < idx.size(); ++j) packed[off + static_cast<Eigen::Index>(j)] = x[idx[j]];
  }
  return packed;
}

void StructuredObjective::unpack_sampled(const Eigen::VectorXd& packed, Eigen::VectorXd& x) const {
  check_dim(x);
  for (int i = 0; i + 1 < partition().n_blocks(); ++i) {
    const auto& idx = partition().block(i);
    const int off = packed_offset_[static_cast<size_t>(i)];
    for (size_t j = 0; j < idx.size(); ++j) x[idx[j]] = packed[off + static_cast<Eigen::Index>(j)];
  }
}

const Eigen::VectorXd& StructuredObjective::labels() const {
  if (!least_squares_form_)
    throw std::logic_error("structured: labels only defined for the least-squares form");
  return labels_;
}

Eigen::VectorXd StructuredObjective::closed_form_exact_min(ResidualCache& cache,
                                                           double ratio) const {
  if (!least_squares_form_)
    throw std::logic_error("closed_form_exact_min: requires the least-squares form");
  const Eigen::VectorXd b_prime = labels_ - ratio * cache.r_u - cache.r_v;
  Eigen::VectorXd u = exact_solver_.solve(c_cols_.transpose() * b_prime);
  cache.r_n = c_cols_ * u;
  return u;
}

Eigen::VectorXd StructuredObjective::cached_block_gradient(const ResidualCache& cache,
                                                           double ratio,
                                                           const Eigen::VectorXd& x_block,
                                                           int block) const {
  const int off = packed_offset(block);
  const int size = partition().block_size(block);
  Eigen::VectorXd z = ratio * cache.r_u + cache.r_v + cache.r_n;
  for (int j = 0; j < rows(); ++j) z[j] = link_.derivative(j, z[j]);
  Eigen::VectorXd g = b_cols_.middleCols(off, size).transpose() * z;
  if (psi_) g += psi_->block_gradient(x_block, block);
  return g;
}

Eigen::VectorXd finite_diff_gradient(const Objective& f, const Eigen::VectorXd& x, double h) {
  if (h <= 0) throw std::invalid_argument("finite_diff_gradient: h must be positive");
  Eigen::VectorXd g(x.size());
  Eigen::VectorXd probe = x;
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    probe[i] = x[i] + h;
    const double fp = f.eval(probe);
    probe[i] = x[i] - h;
    const double fm = f.eval(probe);
    probe[i] = x[i];
    g[i] = (fp - fm) / (2.0 * h);
  }
  return g;
}

}  // namespace bcd
