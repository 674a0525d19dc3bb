#pragma once

#include <Eigen/Core>

#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "bcdbench/objective.hpp"
#include "bcdbench/rng.hpp"
#include "bcdbench/schedule.hpp"
#include "bcdbench/solvers.hpp"

namespace bcd {

enum class SolverId { am, rcdm, rcdm_g, cbcd, cbcd_g, arbcd, aarbcd, aarbcd_naive };

const char* solver_name(SolverId id);
std::optional<SolverId> parse_solver_id(std::string_view name);
std::optional<SamplingMode> parse_sampling_mode(std::string_view name);
const char* sampling_name(SamplingMode mode);

// Iteration-cost multiplier used to convert raw iterations into comparable
// epochs: the alternating method does two steps per iteration, the
// accelerated one three steps against the usual two.
double cost_factor(SolverId id);

// Gaussian least-squares instance with scaled column groups, so the block
// smoothness parameters span a controlled range after sorted partitioning.
struct SyntheticSpec {
  int rows = 60;
  int cols = 30;
  // Squared-scale ratio between the last and first column when group_scales
  // is empty (per-column geometric ramp).
  double smoothness_spread = 100.0;
  // Explicit per-group column scales; splits the columns into equal groups.
  std::vector<double> group_scales;
  double noise = 0.5;
};

std::pair<Eigen::MatrixXd, Eigen::VectorXd> make_synthetic(const SyntheticSpec& spec,
                                                           RngStream& rng);

// Smoothness of each coordinate alone: squared column norm plus ridge.
Eigen::VectorXd coordinate_smoothness(const Eigen::MatrixXd& a, double lambda);

struct ExperimentConfig {
  bool use_csv = false;
  std::string csv_path;
  int label_column = -1;  // -1 = last column
  bool scale_max_abs = false;
  SyntheticSpec synthetic;
  double lambda = 0.0;

  int n_blocks = 3;
  int block_size = 0;  // > 0 overrides n_blocks
  bool empty_exact_block = false;
  bool nonsmooth_last = false;

  SolverId solver = SolverId::arbcd;
  SamplingMode sampling = SamplingMode::lip;

  long epochs = 100;
  int repetitions = 50;
  std::uint64_t master_seed = 0;
  bool monitors = false;
  int threads = 1;
};

// Assembled problem: the dense quadratic oracle, its structured twin (what the
// residual-cached solver runs on), and the smoothness profile the schedules
// and samplers should see (the last block may be declared non-smooth there).
struct Problem {
  PartitionPtr partition;
  std::shared_ptr<const QuadraticProblem> quadratic;
  std::shared_ptr<const StructuredObjective> structured;
  SmoothnessProfile effective_profile;
};

Problem build_problem(const ExperimentConfig& config);

struct ReferenceSolution {
  double f_star = 0;
  Eigen::VectorXd x_star;
};

// Direct minimum-norm solve for quadratics; otherwise a long deterministic
// reference run down to gradient norm <= 1e-12 * scale (throws with
// diagnostics when it fails to converge).
ReferenceSolution estimate_fstar(const Objective& f);

struct Trace {
  std::string solver;
  std::vector<long> epoch;                   // 1..E
  std::vector<std::vector<double>> per_rep;  // [repetition][epoch], f - f_star
  std::vector<double> median, q25, q75;
  std::vector<double> monitor_median;  // per-epoch monitor gap, empty when disabled
  double f_star = 0;
};

// Runs `repetitions` independently seeded solver runs, records f - f_star at
// cost-adjusted epoch boundaries (iteration floor(e * n / cost)), and
// aggregates medians and quartiles. Deterministic given the master seed.
Trace run_experiment(const ExperimentConfig& config);

// Least-squares slope of log(gap) against log(k) over k in [k_lo, k_hi]
// (1-based k, gap_by_k[0] is k = 1). Entries at the numerical floor are
// dropped and flagged.
struct RateFit {
  double slope = 0;
  long points_used = 0;
  bool truncated = false;
};

RateFit fit_rate_exponent(std::span<const double> gap_by_k, long k_lo, long k_hi);

// Per-k comparison of the mean gap across repetitions against
// 2 (sum sqrt L)^2 dist_sq / (k (k+3)) with 3-standard-error slack.
struct BoundCheck {
  long k = 0;
  double mean_gap = 0;
  double bound = 0;
  double stderr_mean = 0;
  bool ok = true;
};

struct BoundReport {
  std::vector<BoundCheck> checks;
  bool all_ok = true;
};

BoundReport verify_theorem4_bound(const std::vector<std::vector<double>>& gaps_per_rep,
                                  std::span<const long> ks, double sum_sqrt_l, double dist_sq);

// Linear-interpolation quantile of an unsorted sample.
double quantile(std::vector<double> values, double p);

}  // namespace bcd
