#include "bcdbench/gap.hpp"

#include <stdexcept>

namespace bcd {

GapAccumulator::GapAccumulator(int dim, double mu) : dim_(dim), mu_(mu) {
  if (dim <= 0) throw std::invalid_argument("gap accumulator: dimension must be positive");
  if (mu < 0) throw std::invalid_argument("gap accumulator: mu must be nonnegative");
  weighted_grad_ = Eigen::VectorXd::Zero(dim);
  weighted_x_ = Eigen::VectorXd::Zero(dim);
}

void GapAccumulator::record(double a_k, const Eigen::VectorXd& x_k, const Eigen::VectorXd& grad_k,
                            double f_k) {
  if (!(a_k > 0)) throw std::invalid_argument("gap accumulator: a_k must be positive");
  if (x_k.size() != dim_ || grad_k.size() != dim_)
    throw std::invalid_argument("gap accumulator: dimension mismatch");
  ++count_;
  big_a_ += a_k;
  sum_af_ += a_k * f_k;
  weighted_grad_ += a_k * grad_k;
  grad_dot_x_ += a_k * grad_k.dot(x_k);
  weighted_x_ += a_k * x_k;
  weighted_x_sq_ += a_k * x_k.squaredNorm();
}

double GapAccumulator::lower_bound(const Eigen::VectorXd& x_star) const {
  if (empty()) throw std::logic_error("gap accumulator: no recorded iterates");
  if (x_star.size() != dim_) throw std::invalid_argument("gap accumulator: dimension mismatch");
  double value = sum_af_ + weighted_grad_.dot(x_star) - grad_dot_x_;
  if (mu_ > 0) {
    value += 0.5 * mu_ *
             (big_a_ * x_star.squaredNorm() - 2.0 * weighted_x_.dot(x_star) + weighted_x_sq_);
  }
  return value / big_a_;
}

double GapAccumulator::gap(double f_latest, const Eigen::VectorXd& x_star) const {
  return f_latest - lower_bound(x_star);
}

RandGapAccumulator::RandGapAccumulator(PartitionPtr partition, Eigen::VectorXd x1,
                                       Eigen::VectorXd sigma)
    : partition_(std::move(partition)), x1_(std::move(x1)), sigma_(std::move(sigma)) {
  if (!partition_) throw std::invalid_argument("rand gap accumulator: null partition");
  if (x1_.size() != partition_->n_coords())
    throw std::invalid_argument("rand gap accumulator: x1 length mismatch");
  if (sigma_.size() != partition_->n_blocks() - 1)
    throw std::invalid_argument("rand gap accumulator: sigma needs one entry per sampled block");
  for (Eigen::Index i = 0; i < sigma_.size(); ++i)
    if (!(sigma_[i] > 0))
      throw std::invalid_argument("rand gap accumulator: sigma must be positive");
  g_ = Eigen::VectorXd::Zero(partition_->n_coords());
}

void RandGapAccumulator::record(double a_k, double A_k, double f_xk, int block,
                                const Eigen::VectorXd& delta_block,
                                const Eigen::VectorXd& v_new_block,
                                const Eigen::VectorXd& v_old_block,
                                const Eigen::VectorXd& x_block) {
  if (block < 0 || block >= partition_->last_block())
    throw std::invalid_argument("rand gap accumulator: not a sampled block");
  ++count_;
  big_a_ = A_k;
  sum_af_ += a_k * f_xk;

  // m_k(v_k) = m_{k-1}(v_{k-1}) + a_k <Delta_k, v_k - x_k>
  //            + (sigma_{i_k}/2) |v_k - v_{k-1}|^2, all supported on block i_k
  min_m_ += a_k * delta_block.dot(v_new_block - x_block) +
            0.5 * sigma_[block] * (v_new_block - v_old_block).squaredNorm();

  const auto& idx = partition_->block(block);
  for (size_t j = 0; j < idx.size(); ++j)
    g_[idx[j]] += a_k * delta_block[static_cast<Eigen::Index>(j)];
  delta_dot_x_ += a_k * delta_block.dot(x_block);
}

double RandGapAccumulator::min_m_from_scratch() const {
  // minimizer u_i = x1_i - g_i / sigma_i per sampled block
  double value = -delta_dot_x_;
  for (int i = 0; i + 1 < partition_->n_blocks(); ++i) {
    const auto& idx = partition_->block(i);
    for (int c : idx) value += g_[c] * x1_[c] - 0.5 * g_[c] * g_[c] / sigma_[i];
  }
  return value;
}

double RandGapAccumulator::lambda(const Eigen::VectorXd& x_star) const {
  if (empty()) throw std::logic_error("rand gap accumulator: no recorded iterates");
  if (x_star.size() != partition_->n_coords())
    throw std::invalid_argument("rand gap accumulator: dimension mismatch");
  double penalty = 0;
  for (int i = 0; i + 1 < partition_->n_blocks(); ++i) {
    const auto& idx = partition_->block(i);
    double d = 0;
    for (int c : idx) {
      const double t = x_star[c] - x1_[c];
      d += t * t;
    }
    penalty += 0.5 * sigma_[i] * d;
  }
  return (sum_af_ + min_m_ - penalty) / big_a_;
}

double RandGapAccumulator::gamma(double f_y_k, const Eigen::VectorXd& x_star) const {
  return f_y_k - lambda(x_star);
}

}  // namespace bcd
