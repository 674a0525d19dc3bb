#include "bcdbench/schedule.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace bcd {

std::pair<double, double> polynomial_sequence(long k) {
  if (k < 1) throw std::invalid_argument("polynomial_sequence: k must be >= 1");
  const double kd = static_cast<double>(k);
  return {(kd + 1.0) / 2.0, kd * (kd + 3.0) / 4.0};
}

std::pair<double, double> geometric_sequence(double mu, double sum_l, long k) {
  if (k < 1) throw std::invalid_argument("geometric_sequence: k must be >= 1");
  if (!(mu > 0)) throw std::invalid_argument("geometric_sequence: mu must be positive (use the polynomial sequence when mu = 0)");
  if (!(mu < sum_l)) throw std::invalid_argument("geometric_sequence: requires mu < sum of block L");
  const double q = mu / sum_l;
  if (k == 1) return {1.0, 1.0};
  const double big_a = std::pow(1.0 - q, -static_cast<double>(k - 1));
  return {big_a * q, big_a};
}

StepSchedule::StepSchedule(ScheduleKind kind, double p1, double p2) : kind_(kind) {
  switch (kind) {
    case ScheduleKind::polynomial:
      break;
    case ScheduleKind::geometric:
      mu_ = p1;
      sum_l_ = p2;
      if (!(mu_ > 0)) throw std::invalid_argument("geometric schedule: mu must be positive (use the polynomial schedule when mu = 0)");
      if (!(mu_ < sum_l_)) throw std::invalid_argument("geometric schedule: requires mu < sum of block L");
      break;
    case ScheduleKind::constant_ratio:
      c_ = p1;
      if (!(c_ > 0) || !std::isfinite(c_))
        throw std::invalid_argument("constant-ratio schedule: c must be positive and finite");
      break;
  }
}

StepSchedule StepSchedule::polynomial() { return StepSchedule(ScheduleKind::polynomial, 0, 0); }

StepSchedule StepSchedule::geometric(double mu, double sum_l) {
  return StepSchedule(ScheduleKind::geometric, mu, sum_l);
}

StepSchedule StepSchedule::constant_ratio(double c) {
  return StepSchedule(ScheduleKind::constant_ratio, c, 0);
}

double StepSchedule::ratio_constant() const {
  if (kind_ != ScheduleKind::constant_ratio)
    throw std::logic_error("ratio_constant: schedule is not constant-ratio");
  return c_;
}

std::pair<double, double> StepSchedule::advance() {
  ++k_;
  switch (kind_) {
    case ScheduleKind::polynomial: {
      auto [a, big_a] = polynomial_sequence(k_);
      a_ = a;
      big_a_ = big_a;
      break;
    }
    case ScheduleKind::geometric: {
      if (k_ == 1) {
        a_ = 1.0;
        big_a_ = 1.0;
      } else {
        const double next = big_a_ / (1.0 - mu_ / sum_l_);
        a_ = next - big_a_;
        big_a_ = next;
      }
      break;
    }
    case ScheduleKind::constant_ratio: {
      if (k_ == 1) {
        a_ = c_;
        big_a_ = c_;
      } else {
        // positive root of a^2 - c a - c A_{k-1} = 0
        a_ = 0.5 * (c_ + std::sqrt(c_ * c_ + 4.0 * c_ * big_a_));
        big_a_ += a_;
      }
      break;
    }
  }
  return {a_, big_a_};
}

SamplingDistribution::SamplingDistribution(Eigen::VectorXd weights) {
  const double total = weights.sum();
  if (!(total > 0) || !std::isfinite(total))
    throw std::invalid_argument("sampling: weights must have a positive finite sum");
  p_ = weights / total;
  cumulative_.resize(p_.size());
  double acc = 0;
  for (Eigen::Index i = 0; i < p_.size(); ++i) {
    acc += p_[i];
    cumulative_[i] = acc;
  }
  cumulative_[p_.size() - 1] = 1.0;
}

namespace {

double sampling_weight(double l, SamplingMode mode) {
  switch (mode) {
    case SamplingMode::lip: return l;
    case SamplingMode::sqrt_lip: return std::sqrt(l);
    case SamplingMode::uniform: return 1.0;
  }
  return 0.0;
}

}  // namespace

SamplingDistribution SamplingDistribution::make(const SmoothnessProfile& profile,
                                                const BlockPartition& partition,
                                                SamplingMode mode) {
  profile.validate(partition);
  const int n = partition.n_blocks();
  Eigen::VectorXd w(n - 1);
  for (int i = 0; i + 1 < n; ++i) {
    const double l = profile.per_block_l[i];
    if (std::isinf(l))
      throw std::invalid_argument("sampling: block " + std::to_string(i) +
                                  " has infinite smoothness and cannot be sampled");
    w[i] = sampling_weight(l, mode);
  }
  return SamplingDistribution(std::move(w));
}

SamplingDistribution SamplingDistribution::over_all_blocks(const SmoothnessProfile& profile,
                                                           const BlockPartition& partition,
                                                           SamplingMode mode) {
  profile.validate(partition);
  const int n = partition.n_blocks();
  Eigen::VectorXd w(n);
  for (int i = 0; i < n; ++i) {
    if (partition.block_size(i) == 0) {
      w[i] = 0.0;
      continue;
    }
    const double l = profile.per_block_l[i];
    if (std::isinf(l))
      throw std::invalid_argument("sampling: block " + std::to_string(i) +
                                  " has infinite smoothness and cannot be sampled");
    w[i] = sampling_weight(l, mode);
  }
  return SamplingDistribution(std::move(w));
}

int SamplingDistribution::sample(RngStream& rng) const {
  const double u = rng.uniform01();
  for (Eigen::Index i = 0; i < cumulative_.size(); ++i)
    if (u < cumulative_[i]) return static_cast<int>(i);
  return static_cast<int>(cumulative_.size() - 1);
}

}  // namespace bcd
