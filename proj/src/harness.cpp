#include "bcdbench/harness.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <mutex>
#include <stdexcept>
#include <thread>

#include "bcdbench/csv.hpp"
#include "bcdbench/gap.hpp"

namespace bcd {

const char* solver_name(SolverId id) {
  switch (id) {
    case SolverId::am: return "am";
    case SolverId::rcdm: return "rcdm";
    case SolverId::rcdm_g: return "rcdm-g";
    case SolverId::cbcd: return "cbcd";
    case SolverId::cbcd_g: return "cbcd-g";
    case SolverId::arbcd: return "arbcd";
    case SolverId::aarbcd: return "aarbcd";
    case SolverId::aarbcd_naive: return "aarbcd-naive";
  }
  return "?";
}

std::optional<SolverId> parse_solver_id(std::string_view name) {
  for (SolverId id : {SolverId::am, SolverId::rcdm, SolverId::rcdm_g, SolverId::cbcd,
                      SolverId::cbcd_g, SolverId::arbcd, SolverId::aarbcd, SolverId::aarbcd_naive})
    if (name == solver_name(id)) return id;
  return std::nullopt;
}

const char* sampling_name(SamplingMode mode) {
  switch (mode) {
    case SamplingMode::lip: return "lip";
    case SamplingMode::sqrt_lip: return "sqrt-lip";
    case SamplingMode::uniform: return "uniform";
  }
  return "?";
}

std::optional<SamplingMode> parse_sampling_mode(std::string_view name) {
  for (SamplingMode m : {SamplingMode::lip, SamplingMode::sqrt_lip, SamplingMode::uniform})
    if (name == sampling_name(m)) return m;
  return std::nullopt;
}

double cost_factor(SolverId id) {
  switch (id) {
    case SolverId::am:
    case SolverId::rcdm:
    case SolverId::rcdm_g:
    case SolverId::cbcd:
    case SolverId::cbcd_g:
      return 1.0;
    case SolverId::arbcd:
      return 2.0;
    case SolverId::aarbcd:
    case SolverId::aarbcd_naive:
      return 1.5;
  }
  throw std::invalid_argument("cost_factor: unknown solver id");
}

std::pair<Eigen::MatrixXd, Eigen::VectorXd> make_synthetic(const SyntheticSpec& spec,
                                                           RngStream& rng) {
  if (spec.rows <= 0 || spec.cols <= 0)
    throw std::invalid_argument("synthetic: rows and cols must be positive");
  const int m = spec.rows, n = spec.cols;

  Eigen::VectorXd scale(n);
  if (!spec.group_scales.empty()) {
    const int groups = static_cast<int>(spec.group_scales.size());
    const int per = std::max(1, n / groups);
    for (int j = 0; j < n; ++j)
      scale[j] = spec.group_scales[static_cast<size_t>(std::min(j / per, groups - 1))];
  } else {
    if (!(spec.smoothness_spread >= 1.0))
      throw std::invalid_argument("synthetic: smoothness spread must be >= 1");
    for (int j = 0; j < n; ++j)
      scale[j] = n == 1 ? 1.0
                        : std::pow(spec.smoothness_spread,
                                   0.5 * static_cast<double>(j) / static_cast<double>(n - 1));
  }

  Eigen::MatrixXd a(m, n);
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < m; ++i) a(i, j) = scale[j] * rng.normal();
  Eigen::VectorXd w(n);
  for (int j = 0; j < n; ++j) w[j] = rng.normal();
  Eigen::VectorXd b = a * w;
  for (int i = 0; i < m; ++i) b[i] += spec.noise * rng.normal();
  return {std::move(a), std::move(b)};
}

Eigen::VectorXd coordinate_smoothness(const Eigen::MatrixXd& a, double lambda) {
  return a.colwise().squaredNorm().transpose().array() + lambda;
}

Problem build_problem(const ExperimentConfig& config) {
  Eigen::MatrixXd a;
  Eigen::VectorXd b;
  if (config.use_csv) {
    CsvData data = ingest_csv(config.csv_path, config.label_column, config.scale_max_abs);
    a = std::move(data.features);
    b = std::move(data.labels);
  } else {
    // the problem instance is part of the experiment seed
    RngStream rng(splitmix64(config.master_seed ^ 0x9e1ab5f00dULL));
    std::tie(a, b) = make_synthetic(config.synthetic, rng);
  }
  if (config.lambda < 0) throw std::invalid_argument("config: ridge must be nonnegative");

  const int n_coords = static_cast<int>(a.cols());
  int block_size = config.block_size;
  if (block_size <= 0) {
    if (config.n_blocks < 2) throw std::invalid_argument("config: need at least two blocks");
    block_size = std::max(1, n_coords / config.n_blocks);
  }
  BlockPartition base =
      BlockPartition::by_sorted_smoothness(coordinate_smoothness(a, config.lambda), block_size);
  PartitionPtr partition = std::make_shared<BlockPartition>(
      config.empty_exact_block ? base.with_empty_last() : std::move(base));

  Problem problem;
  problem.partition = partition;
  problem.quadratic = std::make_shared<QuadraticProblem>(a, b, config.lambda, partition);
  problem.structured = std::make_shared<StructuredObjective>(
      StructuredObjective::least_squares(a, b, config.lambda, partition));
  problem.effective_profile = problem.quadratic->smoothness();

  if (config.nonsmooth_last) {
    if (config.solver != SolverId::arbcd && config.solver != SolverId::aarbcd &&
        config.solver != SolverId::aarbcd_naive)
      throw std::invalid_argument(
          "config: a non-smooth last block is only usable with arbcd / aarbcd solvers");
    // mark the last non-empty block as non-smooth for schedules and samplers
    int target = partition->last_block();
    while (target > 0 && partition->block_size(target) == 0) --target;
    problem.effective_profile.per_block_l[target] = kInfiniteSmoothness;
  }
  return problem;
}

ReferenceSolution estimate_fstar(const Objective& f) {
  if (const auto* quad = dynamic_cast<const QuadraticProblem*>(&f)) {
    ReferenceSolution ref;
    ref.x_star = quad->minimum_norm_solution();
    ref.f_star = quad->eval(ref.x_star);
    return ref;
  }
  if (const auto* s = dynamic_cast<const StructuredObjective*>(&f);
      s && s->has_least_squares_form()) {
    Eigen::MatrixXd gram = s->link_matrix().transpose() * s->link_matrix();
    gram.diagonal().array() += s->ridge();
    ReferenceSolution ref;
    ref.x_star = PinvSolver(gram).solve(s->link_matrix().transpose() * s->labels());
    ref.f_star = s->eval(ref.x_star);
    return ref;
  }

  // deterministic reference run: cyclic gradient sweeps with an exact step on
  // the last block when available
  const auto& part = f.partition();
  const int last = part.last_block();
  Eigen::VectorXd x = Eigen::VectorXd::Zero(f.dim());
  const long max_sweeps = 200000;
  double grad_norm = 0, scale = 1;
  for (long sweep = 0; sweep < max_sweeps; ++sweep) {
    for (int i = 0; i < part.n_blocks(); ++i) {
      if (part.block_size(i) == 0) continue;
      if (i == last && f.supports_exact_min(i))
        f.exact_block_min_inplace(x, i);
      else
        gradient_step_inplace(f, x, i);
    }
    grad_norm = f.full_gradient(x).norm();
    scale = std::max(1.0, std::abs(f.eval(x)));
    if (grad_norm <= 1e-12 * scale) return {f.eval(x), std::move(x)};
  }
  throw std::runtime_error("estimate_fstar: reference run did not converge (gradient norm " +
                           std::to_string(grad_norm) + " after " + std::to_string(max_sweeps) +
                           " sweeps, scale " + std::to_string(scale) + ")");
}

double quantile(std::vector<double> values, double p) {
  if (values.empty()) throw std::invalid_argument("quantile: empty sample");
  std::sort(values.begin(), values.end());
  const double pos = p * static_cast<double>(values.size() - 1);
  const auto lo = static_cast<size_t>(pos);
  if (lo + 1 >= values.size()) return values.back();
  const double frac = pos - static_cast<double>(lo);
  return values[lo] * (1.0 - frac) + values[lo + 1] * frac;
}

namespace {

std::vector<long> epoch_checkpoints(long epochs, int n_cost, double cost) {
  // cost factors are halves; integer arithmetic keeps the floor rule exact
  const long den = std::lround(2.0 * cost);
  std::vector<long> ks(static_cast<size_t>(epochs));
  for (long e = 1; e <= epochs; ++e)
    ks[static_cast<size_t>(e - 1)] = std::max<long>(1, (2 * e * n_cost) / den);
  return ks;
}

struct RepetitionOutput {
  std::vector<double> gaps;
  std::vector<double> monitor;
};

class MonitorState {
 public:
  virtual ~MonitorState() = default;
  virtual void observe(const StepInfo& info) = 0;
  std::vector<double> values;
};

// G_k monitor for the alternating runs: the accumulator holds iterates
// 1..k (including the start point) when the gap at iteration k is taken.
class DeterministicMonitor final : public MonitorState {
 public:
  DeterministicMonitor(const Objective& f, const Eigen::VectorXd& x1, StepSchedule schedule,
                       Eigen::VectorXd x_star, const std::vector<long>& checkpoints)
      : f_(f),
        acc_(f.dim(), f.strong_convexity()),
        schedule_(std::move(schedule)),
        x_star_(std::move(x_star)),
        checkpoints_(checkpoints) {
    const auto [a, big_a] = schedule_.advance();
    acc_.record(a, x1, f_.full_gradient(x1), f_.eval(x1));
  }

  void observe(const StepInfo& info) override {
    if (next_ < checkpoints_.size() && checkpoints_[next_] == info.k) {
      values.push_back(acc_.gap(info.f_value, x_star_));
      ++next_;
    }
    const auto [a, big_a] = schedule_.advance();
    acc_.record(a, *info.x, f_.full_gradient(*info.x), info.f_x);
  }

 private:
  const Objective& f_;
  GapAccumulator acc_;
  StepSchedule schedule_;
  Eigen::VectorXd x_star_;
  const std::vector<long>& checkpoints_;
  size_t next_ = 0;
};

// Gamma_k monitor for the accelerated runs.
class RandomizedMonitor final : public MonitorState {
 public:
  RandomizedMonitor(PartitionPtr partition, const Eigen::VectorXd& x1, Eigen::VectorXd sigma,
                    Eigen::VectorXd x_star, const std::vector<long>& checkpoints)
      : acc_(std::move(partition), x1, std::move(sigma)),
        x_star_(std::move(x_star)),
        checkpoints_(checkpoints) {}

  void observe(const StepInfo& info) override {
    acc_.record(info.a_k, info.A_k, info.f_x, info.block, *info.delta_block, *info.v_new_block,
                *info.v_old_block, *info.x_block);
    if (next_ < checkpoints_.size() && checkpoints_[next_] == info.k) {
      values.push_back(acc_.gamma(info.f_value, x_star_));
      ++next_;
    }
  }

 private:
  RandGapAccumulator acc_;
  Eigen::VectorXd x_star_;
  const std::vector<long>& checkpoints_;
  size_t next_ = 0;
};

RepetitionOutput run_repetition(const ExperimentConfig& config, const Problem& problem,
                                const ReferenceSolution& ref, const std::vector<long>& checkpoints,
                                int repetition) {
  RngStream rng = RngStream::for_repetition(config.master_seed, static_cast<std::uint64_t>(repetition));
  const auto& part = *problem.partition;
  const Objective& quad = *problem.quadratic;
  BlockVector x1(problem.partition, Eigen::VectorXd::Zero(part.n_coords()));

  RunOptions opt;
  opt.iterations = checkpoints.back();
  opt.checkpoints = checkpoints;

  std::unique_ptr<MonitorState> monitor;
  if (config.monitors) {
    if (config.solver == SolverId::arbcd) {
      StepSchedule sched = quad.strong_convexity() > 0
                               ? StepSchedule::geometric(quad.strong_convexity(),
                                                         problem.effective_profile.sampled_sum())
                               : StepSchedule::polynomial();
      monitor = std::make_unique<DeterministicMonitor>(quad, x1.values, std::move(sched),
                                                       ref.x_star, checkpoints);
    } else if (config.solver == SolverId::aarbcd_naive) {
      Eigen::VectorXd sigma = config.sampling == SamplingMode::sqrt_lip
                                  ? sigma_sqrt_lip(problem.effective_profile, part)
                                  : sigma_lipschitz(problem.effective_profile, part);
      monitor = std::make_unique<RandomizedMonitor>(problem.partition, x1.values,
                                                    std::move(sigma), ref.x_star, checkpoints);
    } else {
      throw std::invalid_argument(
          "config: gap monitors are available for arbcd and aarbcd-naive runs");
    }
    opt.observer = [&](const StepInfo& info) { monitor->observe(info); };
  }

  RunResult result{x1, 0, {}, 0, 0};
  switch (config.solver) {
    case SolverId::am: {
      if (part.n_blocks() != 2)
        throw std::invalid_argument("config: am needs a two-block partition");
      result = run_am(quad, x1, opt);
      break;
    }
    case SolverId::rcdm:
    case SolverId::rcdm_g: {
      auto sampling =
          SamplingDistribution::over_all_blocks(problem.effective_profile, part, config.sampling);
      result = run_rcdm(quad, sampling, config.solver == SolverId::rcdm, x1, opt, rng);
      break;
    }
    case SolverId::cbcd:
    case SolverId::cbcd_g: {
      std::vector<int> nonempty;
      for (int i = 0; i < part.n_blocks(); ++i)
        if (part.block_size(i) > 0) nonempty.push_back(i);
      // random but fixed permutation, drawn once per repetition
      const std::vector<int> shuffle = random_permutation(static_cast<int>(nonempty.size()), rng);
      std::vector<int> perm(nonempty.size());
      for (size_t j = 0; j < nonempty.size(); ++j)
        perm[j] = nonempty[static_cast<size_t>(shuffle[j])];
      if (config.solver == SolverId::cbcd_g) {
        for (int b : perm)
          if (!std::isfinite(problem.effective_profile.per_block_l[b]))
            throw std::invalid_argument("config: cbcd-g cannot gradient-step a non-smooth block");
      }
      result = run_cyclic(quad, perm, config.solver == SolverId::cbcd, x1, opt);
      break;
    }
    case SolverId::arbcd: {
      auto sampling = SamplingDistribution::make(problem.effective_profile, part, config.sampling);
      result = run_arbcd(quad, sampling, InnerStep::gradient, x1, opt, rng);
      break;
    }
    case SolverId::aarbcd:
    case SolverId::aarbcd_naive: {
      auto sampling = SamplingDistribution::make(problem.effective_profile, part, config.sampling);
      Eigen::VectorXd sigma = config.sampling == SamplingMode::sqrt_lip
                                  ? sigma_sqrt_lip(problem.effective_profile, part)
                                  : sigma_lipschitz(problem.effective_profile, part);
      auto schedule = StepSchedule::constant_ratio(
          theorem4_ratio(sigma, sampling, problem.effective_profile));
      if (config.solver == SolverId::aarbcd) {
        result = run_aarbcd_efficient(*problem.structured, sampling, sigma, std::move(schedule),
                                      x1, opt, rng);
      } else {
        result = run_aarbcd_naive(quad, sampling, sigma, std::move(schedule), x1, opt, rng);
      }
      break;
    }
  }

  RepetitionOutput out;
  out.gaps.resize(result.f_checkpoints.size());
  for (size_t i = 0; i < result.f_checkpoints.size(); ++i)
    out.gaps[i] = result.f_checkpoints[i] - ref.f_star;
  if (monitor) out.monitor = std::move(monitor->values);
  return out;
}

}  // namespace

Trace run_experiment(const ExperimentConfig& config) {
  if (config.repetitions < 1) throw std::invalid_argument("config: repetitions must be >= 1");
  if (config.epochs < 1) throw std::invalid_argument("config: epochs must be >= 1");

  const Problem problem = build_problem(config);
  const ReferenceSolution ref = estimate_fstar(*problem.quadratic);
  const std::vector<long> checkpoints =
      epoch_checkpoints(config.epochs, problem.partition->n_nonempty_blocks(),
                        cost_factor(config.solver));

  std::vector<RepetitionOutput> reps(static_cast<size_t>(config.repetitions));
  const int threads = std::max(1, config.threads);
  if (threads == 1) {
    for (int r = 0; r < config.repetitions; ++r)
      reps[static_cast<size_t>(r)] = run_repetition(config, problem, ref, checkpoints, r);
  } else {
    std::atomic<int> next{0};
    std::exception_ptr error;
    std::mutex error_mutex;
    auto worker = [&] {
      for (;;) {
        const int r = next.fetch_add(1);
        if (r >= config.repetitions) return;
        try {
          reps[static_cast<size_t>(r)] = run_repetition(config, problem, ref, checkpoints, r);
        } catch (...) {
          std::lock_guard<std::mutex> lock(error_mutex);
          if (!error) error = std::current_exception();
          return;
        }
      }
    };
    std::vector<std::thread> pool;
    for (int t = 0; t < threads; ++t) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
    if (error) std::rethrow_exception(error);
  }

  Trace trace;
  trace.solver = solver_name(config.solver);
  trace.f_star = ref.f_star;
  trace.epoch.resize(static_cast<size_t>(config.epochs));
  for (long e = 1; e <= config.epochs; ++e) trace.epoch[static_cast<size_t>(e - 1)] = e;
  trace.per_rep.reserve(reps.size());
  for (auto& r : reps) trace.per_rep.push_back(std::move(r.gaps));

  const auto n_epochs = static_cast<size_t>(config.epochs);
  trace.median.resize(n_epochs);
  trace.q25.resize(n_epochs);
  trace.q75.resize(n_epochs);
  std::vector<double> column(reps.size());
  for (size_t e = 0; e < n_epochs; ++e) {
    for (size_t r = 0; r < reps.size(); ++r) column[r] = trace.per_rep[r][e];
    trace.median[e] = quantile(column, 0.5);
    trace.q25[e] = quantile(column, 0.25);
    trace.q75[e] = quantile(column, 0.75);
  }
  if (config.monitors) {
    trace.monitor_median.resize(n_epochs);
    for (size_t e = 0; e < n_epochs; ++e) {
      for (size_t r = 0; r < reps.size(); ++r) column[r] = reps[r].monitor[e];
      trace.monitor_median[e] = quantile(column, 0.5);
    }
  }
  return trace;
}

RateFit fit_rate_exponent(std::span<const double> gap_by_k, long k_lo, long k_hi) {
  if (k_lo < 1 || k_hi < k_lo || static_cast<size_t>(k_hi) > gap_by_k.size())
    throw std::invalid_argument("fit_rate_exponent: bad k range");
  double gap_max = 0;
  for (long k = k_lo; k <= k_hi; ++k)
    gap_max = std::max(gap_max, gap_by_k[static_cast<size_t>(k - 1)]);
  if (!(gap_max > 0)) throw std::invalid_argument("fit_rate_exponent: no positive gaps in range");
  const double floor = 1e-14 * gap_max;

  RateFit fit;
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (long k = k_lo; k <= k_hi; ++k) {
    const double g = gap_by_k[static_cast<size_t>(k - 1)];
    if (!(g > floor)) {
      fit.truncated = true;
      continue;
    }
    const double lx = std::log(static_cast<double>(k));
    const double ly = std::log(g);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
    ++fit.points_used;
  }
  if (fit.points_used < 2) throw std::invalid_argument("fit_rate_exponent: fewer than two usable points");
  const double n = static_cast<double>(fit.points_used);
  fit.slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
  return fit;
}

BoundReport verify_theorem4_bound(const std::vector<std::vector<double>>& gaps_per_rep,
                                  std::span<const long> ks, double sum_sqrt_l, double dist_sq) {
  if (gaps_per_rep.empty()) throw std::invalid_argument("verify_theorem4_bound: no repetitions");
  const size_t reps = gaps_per_rep.size();
  BoundReport report;
  report.checks.reserve(ks.size());
  for (size_t i = 0; i < ks.size(); ++i) {
    const double kd = static_cast<double>(ks[i]);
    BoundCheck check;
    check.k = ks[i];
    check.bound = 2.0 * sum_sqrt_l * sum_sqrt_l * dist_sq / (kd * (kd + 3.0));
    double mean = 0;
    for (const auto& rep : gaps_per_rep) mean += rep[i];
    mean /= static_cast<double>(reps);
    double var = 0;
    for (const auto& rep : gaps_per_rep) var += (rep[i] - mean) * (rep[i] - mean);
    var = reps > 1 ? var / static_cast<double>(reps - 1) : 0.0;
    check.mean_gap = mean;
    check.stderr_mean = std::sqrt(var / static_cast<double>(reps));
    check.ok = mean <= check.bound + 3.0 * check.stderr_mean;
    report.all_ok = report.all_ok && check.ok;
    report.checks.push_back(check);
  }
  return report;
}

}  // namespace bcd
