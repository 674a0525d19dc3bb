#include "bcdbench/solvers.hpp"

#include <cmath>
#include <stdexcept>
#include <string>
#include <utility>

namespace bcd {

namespace {

void check_start(const Objective& f, const BlockVector& x1) {
  if (x1.values.size() != f.dim())
    throw std::invalid_argument("solver: start vector length does not match objective");
  if (x1.partition.get() != &f.partition() && !(*x1.partition == f.partition()))
    throw std::invalid_argument("solver: start vector partition does not match objective");
}

// Shared checkpoint/observer plumbing for the full-vector solvers.
class Recorder {
 public:
  Recorder(const Objective& f, const RunOptions& opt, RunResult& result, bool monotone = true)
      : f_(f), opt_(opt), result_(result), monotone_(monotone) {}

  bool wants_f(long k) const {
    if (opt_.observer) return true;
    return next_ < opt_.checkpoints.size() && opt_.checkpoints[next_] == k;
  }

  // `estimate` is the solution-estimate vector whose f value is traced.
  double record(long k, const Eigen::VectorXd& estimate) {
    const double fv = f_.eval(estimate);
    note_value(fv);
    while (next_ < opt_.checkpoints.size() && opt_.checkpoints[next_] == k) {
      result_.f_checkpoints.push_back(fv);
      ++next_;
    }
    return fv;
  }

  void note_value(double fv) {
    if (monotone_ && have_last_ && fv > last_f_ + 1e-12 * std::max(1.0, std::abs(last_f_)))
      ++result_.monotonicity_violations;
    last_f_ = fv;
    have_last_ = true;
  }

 private:
  const Objective& f_;
  const RunOptions& opt_;
  RunResult& result_;
  bool monotone_;
  size_t next_ = 0;
  double last_f_ = 0;
  bool have_last_ = false;
};

}  // namespace

Eigen::VectorXd gradient_step(const Objective& f, const Eigen::VectorXd& x, int block) {
  Eigen::VectorXd y = x;
  gradient_step_inplace(f, y, block);
  return y;
}

void gradient_step_inplace(const Objective& f, Eigen::VectorXd& x, int block) {
  const double l = f.block_smoothness(block);
  if (!std::isfinite(l) || l <= 0)
    throw std::invalid_argument("gradient_step: block " + std::to_string(block) +
                                " has no finite positive smoothness");
  const Eigen::VectorXd g = f.block_gradient(x, block);
  const auto& idx = f.partition().block(block);
  for (size_t j = 0; j < idx.size(); ++j)
    x[idx[j]] -= g[static_cast<Eigen::Index>(j)] / l;
}

RunResult run_am(const Objective& f, const BlockVector& x1, const RunOptions& opt) {
  check_start(f, x1);
  if (f.partition().n_blocks() != 2)
    throw std::invalid_argument("run_am: alternating minimization needs exactly two blocks");
  for (int i = 0; i < 2; ++i)
    if (!f.supports_exact_min(i))
      throw std::invalid_argument("run_am: block " + std::to_string(i) +
                                  " is not exactly minimizable");

  RunResult result{x1, 0, {}, 0, 0};
  Recorder rec(f, opt, result);
  Eigen::VectorXd& x = result.solution.values;
  for (long k = 1; k <= opt.iterations; ++k) {
    f.exact_block_min_inplace(x, 0);
    f.exact_block_min_inplace(x, 1);
    if (rec.wants_f(k)) {
      const double fv = rec.record(k, x);
      if (opt.observer) {
        StepInfo info;
        info.k = k;
        info.f_value = fv;
        info.f_x = fv;
        info.x = &x;
        opt.observer(info);
      }
    }
  }
  result.iterations = opt.iterations;
  result.f_final = f.eval(x);
  return result;
}

namespace {

RunResult run_basic_randomized(const Objective& f, const SamplingDistribution& sampling,
                               bool exact_last, bool always_exact_last, InnerStep inner,
                               const BlockVector& x1, const RunOptions& opt, RngStream& rng) {
  check_start(f, x1);
  const int last = f.partition().last_block();
  if (always_exact_last && !f.supports_exact_min(last))
    throw std::invalid_argument("solver: last block is not exactly minimizable");

  RunResult result{x1, 0, {}, 0, 0};
  Recorder rec(f, opt, result);
  Eigen::VectorXd& x = result.solution.values;
  for (long k = 1; k <= opt.iterations; ++k) {
    const int i = sampling.sample(rng);
    if (always_exact_last) {
      // alternating step: chosen block, then the exact block
      if (inner == InnerStep::exact)
        f.exact_block_min_inplace(x, i);
      else
        gradient_step_inplace(f, x, i);
      f.exact_block_min_inplace(x, last);
    } else {
      if (exact_last && i == last)
        f.exact_block_min_inplace(x, i);
      else
        gradient_step_inplace(f, x, i);
    }
    if (rec.wants_f(k)) {
      const double fv = rec.record(k, x);
      if (opt.observer) {
        StepInfo info;
        info.k = k;
        info.block = i;
        info.f_value = fv;
        info.f_x = fv;
        info.x = &x;
        opt.observer(info);
      }
    }
  }
  result.iterations = opt.iterations;
  result.f_final = f.eval(x);
  return result;
}

}  // namespace

RunResult run_rcdm(const Objective& f, const SamplingDistribution& sampling, bool exact_last,
                   const BlockVector& x1, const RunOptions& opt, RngStream& rng) {
  if (sampling.n_outcomes() != f.partition().n_blocks())
    throw std::invalid_argument("run_rcdm: sampling must cover all blocks");
  return run_basic_randomized(f, sampling, exact_last, false, InnerStep::gradient, x1, opt, rng);
}

RunResult run_arbcd(const Objective& f, const SamplingDistribution& sampling, InnerStep inner,
                    const BlockVector& x1, const RunOptions& opt, RngStream& rng) {
  if (sampling.n_outcomes() != f.partition().n_blocks() - 1)
    throw std::invalid_argument("run_arbcd: sampling must cover exactly the first n-1 blocks");
  return run_basic_randomized(f, sampling, false, true, inner, x1, opt, rng);
}

RunResult run_cyclic(const Objective& f, std::span<const int> permutation, bool exact_last,
                     const BlockVector& x1, const RunOptions& opt) {
  check_start(f, x1);
  if (permutation.empty()) throw std::invalid_argument("run_cyclic: empty permutation");
  const int last = f.partition().last_block();
  for (int b : permutation)
    if (b < 0 || b >= f.partition().n_blocks())
      throw std::invalid_argument("run_cyclic: permutation entry out of range");

  RunResult result{x1, 0, {}, 0, 0};
  Recorder rec(f, opt, result);
  Eigen::VectorXd& x = result.solution.values;
  for (long k = 1; k <= opt.iterations; ++k) {
    const int i = permutation[static_cast<size_t>((k - 1) % static_cast<long>(permutation.size()))];
    if (exact_last && i == last)
      f.exact_block_min_inplace(x, i);
    else
      gradient_step_inplace(f, x, i);
    if (rec.wants_f(k)) {
      const double fv = rec.record(k, x);
      if (opt.observer) {
        StepInfo info;
        info.k = k;
        info.block = i;
        info.f_value = fv;
        info.f_x = fv;
        info.x = &x;
        opt.observer(info);
      }
    }
  }
  result.iterations = opt.iterations;
  result.f_final = f.eval(x);
  return result;
}

double theorem4_ratio(const Eigen::VectorXd& sigma, const SamplingDistribution& sampling,
                      const SmoothnessProfile& profile) {
  if (sigma.size() != sampling.n_outcomes())
    throw std::invalid_argument("theorem4_ratio: sigma size does not match sampled blocks");
  double ratio = kInfiniteSmoothness;
  for (Eigen::Index i = 0; i < sigma.size(); ++i) {
    if (!(sigma[i] > 0) || !std::isfinite(sigma[i]))
      throw std::invalid_argument("theorem4_ratio: sigma must be positive and finite");
    const double p = sampling.p(static_cast<int>(i));
    ratio = std::min(ratio, sigma[i] * p * p / profile.per_block_l[i]);
  }
  return ratio;
}

Eigen::VectorXd sigma_sqrt_lip(const SmoothnessProfile& profile, const BlockPartition& partition) {
  const double s = profile.sampled_sqrt_sum();
  return Eigen::VectorXd::Constant(partition.n_blocks() - 1, s * s);
}

Eigen::VectorXd sigma_lipschitz(const SmoothnessProfile& profile, const BlockPartition& partition) {
  return profile.per_block_l.head(partition.n_blocks() - 1);
}

namespace {

void check_aarbcd_config(const Objective& f, const SamplingDistribution& sampling,
                         const Eigen::VectorXd& sigma, const StepSchedule& schedule) {
  const int n = f.partition().n_blocks();
  if (sampling.n_outcomes() != n - 1)
    throw std::invalid_argument("aarbcd: sampling must cover exactly the first n-1 blocks");
  if (sigma.size() != n - 1)
    throw std::invalid_argument("aarbcd: sigma needs one entry per sampled block");
  if (!f.supports_exact_min(f.partition().last_block()))
    throw std::invalid_argument("aarbcd: last block is not exactly minimizable");
  if (schedule.kind() != ScheduleKind::constant_ratio)
    throw std::invalid_argument("aarbcd: schedule must keep a_k^2/A_k constant");
  const double want = theorem4_ratio(sigma, sampling, f.smoothness());
  const double have = schedule.ratio_constant();
  if (std::abs(have - want) > 1e-9 * std::max(want, 1e-300))
    throw std::invalid_argument("aarbcd: schedule ratio " + std::to_string(have) +
                                " violates the step condition min sigma_i p_i^2 / L_i = " +
                                std::to_string(want));
}

}  // namespace

RunResult run_aarbcd_naive(const Objective& f, const SamplingDistribution& sampling,
                           const Eigen::VectorXd& sigma, StepSchedule schedule,
                           const BlockVector& x1, const RunOptions& opt, RngStream& rng) {
  check_start(f, x1);
  check_aarbcd_config(f, sampling, sigma, schedule);
  const auto& part = f.partition();
  const int last = part.last_block();

  Eigen::VectorXd x = x1.values;
  Eigen::VectorXd y = x1.values;
  Eigen::VectorXd v = x1.values;

  RunResult result{x1, 0, {}, 0, 0};
  Recorder rec(f, opt, result, /*monotone=*/false);

  for (long k = 1; k <= opt.iterations; ++k) {
    const auto [a, big_a] = schedule.advance();
    const int i = sampling.sample(rng);
    const double p = sampling.p(i);

    // x_hat = (A_{k-1}/A_k) y + (a_k/A_k) v; beta = 1 at k = 1 seeds x_hat = x_1.
    const double beta = a / big_a;
    x = y + beta * (v - y);
    f.exact_block_min_inplace(x, last);

    const Eigen::VectorXd delta = f.block_gradient(x, i) / p;
    const Eigen::VectorXd v_old = block_restrict(part, v, i);
    const Eigen::VectorXd v_new = v_old - (a / sigma[i]) * delta;

    y = x;
    const auto& idx = part.block(i);
    const double coeff = a / (p * big_a);
    for (size_t j = 0; j < idx.size(); ++j) {
      const auto jj = static_cast<Eigen::Index>(j);
      y[idx[j]] += coeff * (v_new[jj] - v_old[jj]);
      v[idx[j]] = v_new[jj];
    }

    if (rec.wants_f(k)) {
      const double fv = rec.record(k, y);
      if (opt.observer) {
        StepInfo info;
        info.k = k;
        info.block = i;
        info.f_value = fv;
        info.f_x = f.eval(x);
        info.a_k = a;
        info.A_k = big_a;
        info.sigma_block = sigma[i];
        info.x = &x;
        info.y = &y;
        info.v = &v;
        info.delta_block = &delta;
        info.v_old_block = &v_old;
        info.v_new_block = &v_new;
        const Eigen::VectorXd xb = block_restrict(part, x, i);
        info.x_block = &xb;
        opt.observer(info);
      }
    }
  }
  result.solution.values = y;
  result.iterations = opt.iterations;
  result.f_final = f.eval(y);
  return result;
}

EfficientAarBcd::EfficientAarBcd(const StructuredObjective& f,
                                 const SamplingDistribution& sampling, Eigen::VectorXd sigma,
                                 StepSchedule schedule, const BlockVector& x1)
    : f_(f), sampling_(sampling), sigma_(std::move(sigma)), schedule_(std::move(schedule)) {
  check_start(f, x1);
  check_aarbcd_config(f, sampling, sigma_, schedule_);
  if (!f.has_least_squares_form())
    throw std::invalid_argument(
        "efficient aarbcd: requires the least-squares structured objective");

  const auto& part = f.partition();
  x1_ = x1.values;
  v_ = f.pack_sampled(x1.values);
  u_ = Eigen::VectorXd::Zero(v_.size());
  x_n_ = block_restrict(part, x1.values, part.last_block());
  cache_.r_u = Eigen::VectorXd::Zero(f.rows());
  cache_.r_v = f.sampled_columns() * v_;
  cache_.r_n = f.exact_columns() * x_n_;
}

void EfficientAarBcd::step(RngStream& rng) {
  ++k_;
  const auto [a, big_a] = schedule_.advance();
  a_ = a;
  big_a_ = big_a;
  ratio_ = (a / big_a) * (a / big_a);
  const int i = sampling_.sample(rng);
  const double p = sampling_.p(i);
  const auto& part = f_.partition();

  // exact block first (closed form off the caches), as the naive order does
  x_n_ = f_.closed_form_exact_min(cache_, ratio_);

  const int off = f_.packed_offset(i);
  const int size = part.block_size(i);
  const auto u_seg = u_.segment(off, size);
  const auto v_seg = v_.segment(off, size);

  last_block_ = i;
  last_x_block_ = ratio_ * u_seg + v_seg;
  last_v_old_ = v_seg;

  const Eigen::VectorXd delta =
      f_.cached_block_gradient(cache_, ratio_, last_x_block_, i) / p;
  const Eigen::VectorXd v_new = last_v_old_ - (a / sigma_[i]) * delta;

  // u recursion: u_k = u_{k-1} + (A_k^2/a_k^2)(1 - a_k/(p A_k))(v_{k-1} - v_k)
  const double u_coeff = (1.0 / ratio_) * (1.0 - a / (p * big_a));
  const Eigen::VectorXd u_new = u_seg + u_coeff * (last_v_old_ - v_new);

  const auto cols = f_.sampled_columns().middleCols(off, size);
  cache_.r_v += cols * (v_new - last_v_old_);
  cache_.r_u += cols * (u_new - u_seg);
  u_.segment(off, size) = u_new;
  v_.segment(off, size) = v_new;

  cost_.coords_touched = size + part.block_size(part.last_block());
  cost_.residual_len = f_.rows();
}

BlockVector EfficientAarBcd::current_y() const {
  const auto& part = f_.partition();
  if (k_ == 0) return BlockVector(f_.partition_ptr(), x1_);

  Eigen::VectorXd y(part.n_coords());
  // y agrees with x = ratio * u + v outside the touched block
  Eigen::VectorXd packed = ratio_ * u_ + v_;
  const int off = f_.packed_offset(last_block_);
  const int size = part.block_size(last_block_);
  const double p = sampling_.p(last_block_);
  packed.segment(off, size) =
      last_x_block_ + (a_ / (p * big_a_)) * (v_.segment(off, size) - last_v_old_);
  f_.unpack_sampled(packed, y);
  block_scatter(part, y, part.last_block(), x_n_);
  return BlockVector(f_.partition_ptr(), y);
}

RunResult run_aarbcd_efficient(const StructuredObjective& f, const SamplingDistribution& sampling,
                               const Eigen::VectorXd& sigma, StepSchedule schedule,
                               const BlockVector& x1, const RunOptions& opt, RngStream& rng,
                               std::vector<StepCost>* cost_log) {
  if (opt.observer)
    throw std::invalid_argument(
        "efficient aarbcd: per-iteration observers defeat the cost contract; "
        "use run_aarbcd_naive for instrumented runs");
  EfficientAarBcd solver(f, sampling, sigma, std::move(schedule), x1);
  RunResult result{x1, 0, {}, 0, 0};
  size_t next = 0;
  for (long k = 1; k <= opt.iterations; ++k) {
    solver.step(rng);
    if (cost_log) cost_log->push_back(solver.last_step_cost());
    if (next < opt.checkpoints.size() && opt.checkpoints[next] == k) {
      const double fv = f.eval(solver.current_y().values);
      while (next < opt.checkpoints.size() && opt.checkpoints[next] == k) {
        result.f_checkpoints.push_back(fv);
        ++next;
      }
    }
  }
  result.solution = solver.current_y();
  result.iterations = opt.iterations;
  result.f_final = f.eval(result.solution.values);
  return result;
}

}  // namespace bcd
