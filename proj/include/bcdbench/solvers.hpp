#pragma once

#include <Eigen/Core>

#include <functional>
#include <span>
#include <vector>

#include "bcdbench/objective.hpp"
#include "bcdbench/schedule.hpp"

namespace bcd {

// One smoothness-scaled gradient update on a block (ell_2 norm):
// block i of x becomes x^i - grad_i f(x) / L_i. Requires finite L_i.
Eigen::VectorXd gradient_step(const Objective& f, const Eigen::VectorXd& x, int block);
void gradient_step_inplace(const Objective& f, Eigen::VectorXd& x, int block);

// Snapshot handed to an observer after each completed iteration. Pointers are
// valid only during the callback. f_value is the solution-estimate value:
// f(x_k) for the basic methods, f(y_k) for the accelerated one (which also
// reports f_x = f(x_k) and the block-local quantities the gap monitors need).
struct StepInfo {
  long k = 0;
  int block = -1;
  double f_value = 0.0;
  double f_x = 0.0;
  double a_k = 0.0;
  double A_k = 0.0;
  double sigma_block = 0.0;
  const Eigen::VectorXd* x = nullptr;
  const Eigen::VectorXd* y = nullptr;
  const Eigen::VectorXd* v = nullptr;
  const Eigen::VectorXd* delta_block = nullptr;
  const Eigen::VectorXd* v_old_block = nullptr;
  const Eigen::VectorXd* v_new_block = nullptr;
  const Eigen::VectorXd* x_block = nullptr;
};

struct RunOptions {
  long iterations = 0;
  // Sorted 1-based iteration indices at which f is recorded.
  std::vector<long> checkpoints;
  // Optional per-iteration hook; forces an f evaluation every iteration.
  std::function<void(const StepInfo&)> observer;
};

struct RunResult {
  BlockVector solution;  // x_K for the basic methods, y_K for the accelerated one
  double f_final = 0.0;
  std::vector<double> f_checkpoints;
  long iterations = 0;
  // Count of recorded f values that rose by more than 1e-12 * scale above the
  // previous recorded value in a monotone method. Diagnostic, never fatal.
  int monotonicity_violations = 0;
};

enum class InnerStep { gradient, exact };

// Alternating minimization: exact minimization over block 1 then block 2.
RunResult run_am(const Objective& f, const BlockVector& x1, const RunOptions& opt);

// Randomized BCD. The distribution covers all blocks; with exact_last, a draw
// of the last block performs exact minimization instead of a gradient step.
RunResult run_rcdm(const Objective& f, const SamplingDistribution& sampling, bool exact_last,
                   const BlockVector& x1, const RunOptions& opt, RngStream& rng);

// Cyclic BCD over a fixed permutation of blocks; one iteration = one block
// update. With exact_last the last block's turn is an exact minimization.
RunResult run_cyclic(const Objective& f, std::span<const int> permutation, bool exact_last,
                     const BlockVector& x1, const RunOptions& opt);

// Alternating randomized BCD: per iteration, a gradient (or exact) step on a
// block drawn from the first n-1, then exact minimization over the last block.
RunResult run_arbcd(const Objective& f, const SamplingDistribution& sampling, InnerStep inner,
                    const BlockVector& x1, const RunOptions& opt, RngStream& rng);

// Accelerated variant, full-vector reference implementation. sigma has one
// entry per sampled block; the schedule must keep a_k^2/A_k equal to
// min_i sigma_i p_i^2 / L_i (checked up front). Returns the y_k estimate.
RunResult run_aarbcd_naive(const Objective& f, const SamplingDistribution& sampling,
                           const Eigen::VectorXd& sigma, StepSchedule schedule,
                           const BlockVector& x1, const RunOptions& opt, RngStream& rng);

double theorem4_ratio(const Eigen::VectorXd& sigma, const SamplingDistribution& sampling,
                      const SmoothnessProfile& profile);
// sigma_i = (sum_i sqrt L_i)^2 for every sampled block (pairs with sqrt-L sampling).
Eigen::VectorXd sigma_sqrt_lip(const SmoothnessProfile& profile, const BlockPartition& partition);
// sigma_i = L_i (pairs with uniform sampling).
Eigen::VectorXd sigma_lipschitz(const SmoothnessProfile& profile, const BlockPartition& partition);

// Distinct state coordinates written by one efficient step (sampled block plus
// exact block) and the length of the m-vector work.
struct StepCost {
  int coords_touched = 0;
  int residual_len = 0;
};

// Residual-cached AAR-BCD for structured objectives with a quadratic exact
// block and a constant-ratio schedule. Iterates are never materialized; each
// step touches the sampled block, the exact block, and m-length residuals.
class EfficientAarBcd {
 public:
  EfficientAarBcd(const StructuredObjective& f, const SamplingDistribution& sampling,
                  Eigen::VectorXd sigma, StepSchedule schedule, const BlockVector& x1);

  void step(RngStream& rng);
  long iteration() const { return k_; }
  // O(N + m): assembles y_k from the recursion state. Used for checkpoints
  // and the final output, never inside step().
  BlockVector current_y() const;
  const StepCost& last_step_cost() const { return cost_; }
  double ratio() const { return ratio_; }

 private:
  const StructuredObjective& f_;
  const SamplingDistribution& sampling_;
  Eigen::VectorXd sigma_;
  StepSchedule schedule_;

  long k_ = 0;
  double a_ = 0, big_a_ = 0, ratio_ = 0;
  Eigen::VectorXd u_, v_;  // packed over blocks 0..n-2
  Eigen::VectorXd x_n_;    // current exact-block values
  ResidualCache cache_;
  Eigen::VectorXd x1_;

  int last_block_ = -1;
  Eigen::VectorXd last_x_block_, last_v_old_;
  StepCost cost_;
};

RunResult run_aarbcd_efficient(const StructuredObjective& f, const SamplingDistribution& sampling,
                               const Eigen::VectorXd& sigma, StepSchedule schedule,
                               const BlockVector& x1, const RunOptions& opt, RngStream& rng,
                               std::vector<StepCost>* cost_log = nullptr);

}  // namespace bcd
