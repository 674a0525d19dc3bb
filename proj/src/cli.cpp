#include "bcdbench/cli.hpp"

#include <CLI11.hpp>

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

#include "bcdbench/csv.hpp"

namespace bcd {

namespace {

int default_threads() {
  if (const char* env = std::getenv("BCDBENCH_THREADS")) {
    const int t = std::atoi(env);
    if (t >= 1) return t;
  }
  return 1;
}

}  // namespace

CliInvocation parse_args(const std::vector<std::string>& args) {
  CliInvocation inv;
  ExperimentConfig& cfg = inv.config;
  cfg.threads = default_threads();

  CLI::App app{"block coordinate descent benchmark"};
  std::string problem = "synthetic";
  std::string solver = "arbcd";
  std::string sampling = "lip";

  app.add_option("--problem", problem, "problem source")
      ->check(CLI::IsMember({"synthetic", "csv"}))
      ->capture_default_str();
  app.add_option("--csv", cfg.csv_path, "input CSV path (problem=csv)");
  app.add_option("--label-col", cfg.label_column, "label column index, -1 = last")
      ->capture_default_str();
  app.add_flag("--scale", cfg.scale_max_abs, "scale the design matrix by its max absolute entry");
  app.add_option("--m", cfg.synthetic.rows, "synthetic sample count")->capture_default_str();
  app.add_option("--n", cfg.synthetic.cols, "synthetic coordinate count")->capture_default_str();
  app.add_option("--spread", cfg.synthetic.smoothness_spread,
                 "synthetic coordinate smoothness spread")
      ->capture_default_str();
  app.add_option("--noise", cfg.synthetic.noise, "synthetic label noise")->capture_default_str();
  app.add_option("--lambda", cfg.lambda, "ridge weight")->capture_default_str();
  auto* blocks_opt =
      app.add_option("--blocks", cfg.n_blocks, "number of blocks")->capture_default_str();
  auto* bs_opt = app.add_option("--block-size", cfg.block_size, "coordinates per block");
  bs_opt->excludes(blocks_opt);
  blocks_opt->excludes(bs_opt);
  app.add_flag("--empty-exact", cfg.empty_exact_block,
               "append an empty exact block (pure coordinate descent behavior)");
  app.add_flag("--nonsmooth-last", cfg.nonsmooth_last,
               "treat the least smooth block as non-smooth (exact steps only)");
  app.add_option("--solver", solver, "solver id")
      ->check(CLI::IsMember({"am", "rcdm", "rcdm-g", "cbcd", "cbcd-g", "arbcd", "aarbcd",
                             "aarbcd-naive"}))
      ->capture_default_str();
  app.add_option("--sampling", sampling, "block sampling rule")
      ->check(CLI::IsMember({"lip", "sqrt-lip", "uniform"}))
      ->capture_default_str();
  app.add_option("--epochs", cfg.epochs, "epochs to run")->capture_default_str();
  app.add_option("--reps", cfg.repetitions, "independent repetitions")->capture_default_str();
  app.add_option("--seed", cfg.master_seed, "master seed")->capture_default_str();
  app.add_flag("--monitors", cfg.monitors, "record duality-gap monitor columns");
  app.add_flag("--verify-bounds", inv.verify_bounds,
               "append a convergence bound report to the CSV");
  app.add_option("--threads", cfg.threads, "repetition workers (env BCDBENCH_THREADS)");
  app.add_option("--out", inv.out_path, "output trace CSV")->required();

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    throw HelpRequested{app.help()};
  } catch (const CLI::ParseError& e) {
    throw std::invalid_argument(e.what());
  }

  cfg.use_csv = problem == "csv";
  if (cfg.use_csv && cfg.csv_path.empty())
    throw std::invalid_argument("--problem csv requires --csv");
  cfg.solver = *parse_solver_id(solver);
  cfg.sampling = *parse_sampling_mode(sampling);

  if (cfg.epochs < 1) throw std::invalid_argument("--epochs must be >= 1");
  if (cfg.repetitions < 1) throw std::invalid_argument("--reps must be >= 1");
  if (inv.verify_bounds) {
    if (cfg.solver != SolverId::aarbcd && cfg.solver != SolverId::aarbcd_naive)
      throw std::invalid_argument("--verify-bounds needs an aarbcd solver");
    if (cfg.sampling != SamplingMode::sqrt_lip)
      throw std::invalid_argument("--verify-bounds needs --sampling sqrt-lip");
  }
  if (cfg.monitors && cfg.solver != SolverId::arbcd && cfg.solver != SolverId::aarbcd_naive)
    throw std::invalid_argument("--monitors needs solver arbcd or aarbcd-naive");
  return inv;
}

std::vector<std::string> config_comment_lines(const CliInvocation& inv) {
  const ExperimentConfig& cfg = inv.config;
  std::ostringstream os;
  os << "config:";
  if (cfg.use_csv) {
    os << " problem=csv csv=" << cfg.csv_path << " label_col=" << cfg.label_column
       << " scale=" << (cfg.scale_max_abs ? 1 : 0);
  } else {
    os << " problem=synthetic m=" << cfg.synthetic.rows << " n=" << cfg.synthetic.cols
       << " spread=" << format_g17(cfg.synthetic.smoothness_spread)
       << " noise=" << format_g17(cfg.synthetic.noise);
  }
  os << " lambda=" << format_g17(cfg.lambda);
  if (cfg.block_size > 0)
    os << " block_size=" << cfg.block_size;
  else
    os << " blocks=" << cfg.n_blocks;
  if (cfg.empty_exact_block) os << " empty_exact=1";
  if (cfg.nonsmooth_last) os << " nonsmooth_last=1";
  os << " solver=" << solver_name(cfg.solver) << " sampling=" << sampling_name(cfg.sampling)
     << " epochs=" << cfg.epochs << " reps=" << cfg.repetitions << " seed=" << cfg.master_seed;
  return {os.str()};
}

int cli_main(int argc, const char* const* argv) {
  CliInvocation inv;
  try {
    std::vector<std::string> args;
    for (int i = 1; i < argc; ++i) args.emplace_back(argv[i]);
    inv = parse_args(args);
  } catch (const HelpRequested& h) {
    std::cout << h.text;
    return 0;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }

  try {
    const Trace trace = run_experiment(inv.config);

    BoundReport report;
    const BoundReport* report_ptr = nullptr;
    if (inv.verify_bounds) {
      const Problem problem = build_problem(inv.config);
      const ReferenceSolution ref = estimate_fstar(*problem.quadratic);
      double dist_sq = 0;
      for (int i = 0; i + 1 < problem.partition->n_blocks(); ++i)
        dist_sq += block_norm_sq(*problem.partition, ref.x_star, i);  // x1 = 0
      std::vector<long> ks;
      const double cost = cost_factor(inv.config.solver);
      for (long e = 1; e <= inv.config.epochs; ++e)
        ks.push_back(std::max<long>(
            1, (2 * e * problem.partition->n_nonempty_blocks()) / std::lround(2.0 * cost)));
      report = verify_theorem4_bound(trace.per_rep, ks,
                                     problem.effective_profile.sampled_sqrt_sum(), dist_sq);
      report_ptr = &report;
    }

    std::ofstream out(inv.out_path);
    if (!out) {
      std::cerr << "error: cannot open output file " << inv.out_path << "\n";
      return 3;
    }
    write_trace_csv(out, trace, config_comment_lines(inv), report_ptr);
    out.flush();
    if (!out) {
      std::cerr << "error: failed writing " << inv.out_path << "\n";
      return 3;
    }
    return 0;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}

}  // namespace bcd
