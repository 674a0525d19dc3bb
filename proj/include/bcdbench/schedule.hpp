#pragma once

#include <Eigen/Core>

#include <utility>

#include "bcdbench/objective.hpp"
#include "bcdbench/rng.hpp"

namespace bcd {

enum class ScheduleKind { polynomial, geometric, constant_ratio };

// a_k = (k+1)/2, A_k = k(k+3)/4; a_k^2/A_k = (k+1)^2/(k(k+3)) <= 1.
std::pair<double, double> polynomial_sequence(long k);

// a_1 = A_1 = 1, A_k = A_{k-1}/(1 - mu/sum_l) for k >= 2, so a_k/A_k = mu/sum_l.
std::pair<double, double> geometric_sequence(double mu, double sum_l, long k);

// Step-weight cursor maintaining (a_k, A_k) incrementally; A_k = sum of a_j,
// strictly increasing. The constant-ratio kind keeps a_k^2/A_k = c exact per
// step by solving a^2 - c a - c A_{k-1} = 0 in closed form.
class StepSchedule {
 public:
  static StepSchedule polynomial();
  static StepSchedule geometric(double mu, double sum_l);
  static StepSchedule constant_ratio(double c);

  ScheduleKind kind() const { return kind_; }
  double ratio_constant() const;

  // Advances to the next iteration and returns (a_k, A_k).
  std::pair<double, double> advance();

  long k() const { return k_; }
  double a() const { return a_; }
  double A() const { return big_a_; }

 private:
  StepSchedule(ScheduleKind kind, double p1, double p2);

  ScheduleKind kind_;
  double mu_ = 0, sum_l_ = 0, c_ = 0;
  long k_ = 0;
  double a_ = 0, big_a_ = 0;
};

enum class SamplingMode { lip, sqrt_lip, uniform };

// Block-sampling distribution with an inverse-CDF table. The factory `make`
// covers blocks 0..n-2 only (the exact block is never sampled); the
// `over_all_blocks` factory covers every block and is what plain RCDM uses.
class SamplingDistribution {
 public:
  static SamplingDistribution make(const SmoothnessProfile& profile,
                                   const BlockPartition& partition, SamplingMode mode);
  static SamplingDistribution over_all_blocks(const SmoothnessProfile& profile,
                                              const BlockPartition& partition, SamplingMode mode);

  int n_outcomes() const { return static_cast<int>(p_.size()); }
  double p(int block) const { return p_[block]; }
  const Eigen::VectorXd& probabilities() const { return p_; }
  int sample(RngStream& rng) const;

 private:
  explicit SamplingDistribution(Eigen::VectorXd weights);

  Eigen::VectorXd p_;
  Eigen::VectorXd cumulative_;
};

}  // namespace bcd
