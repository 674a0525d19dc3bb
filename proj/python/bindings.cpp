#include <pybind11/eigen.h>
#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <fstream>
#include <sstream>

#include "bcdbench/csv.hpp"
#include "bcdbench/gap.hpp"
#include "bcdbench/harness.hpp"
#include "bcdbench/solvers.hpp"

namespace py = pybind11;
using namespace bcd;

namespace {

BlockVector to_block_vector(const PartitionPtr& partition, const Eigen::VectorXd& values) {
  return BlockVector(partition, values);
}

struct PyRunResult {
  Eigen::VectorXd solution;
  double f_final = 0;
  std::vector<double> f_checkpoints;
  int monotonicity_violations = 0;
};

PyRunResult wrap(RunResult&& r) {
  return {std::move(r.solution.values), r.f_final, std::move(r.f_checkpoints),
          r.monotonicity_violations};
}

RunOptions make_options(long iterations, const std::vector<long>& checkpoints) {
  RunOptions opt;
  opt.iterations = iterations;
  opt.checkpoints = checkpoints;
  return opt;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Block coordinate descent solvers and benchmark harness";

  py::class_<BlockPartition, std::shared_ptr<BlockPartition>>(m, "BlockPartition")
      .def(py::init<int, std::vector<std::vector<int>>>(), py::arg("n_coords"), py::arg("blocks"))
      .def_static("by_sorted_smoothness", &BlockPartition::by_sorted_smoothness,
                  py::arg("coord_smoothness"), py::arg("block_size"))
      .def_property_readonly("n_coords", &BlockPartition::n_coords)
      .def_property_readonly("n_blocks", &BlockPartition::n_blocks)
      .def("block", &BlockPartition::block, py::arg("i"))
      .def("block_size", &BlockPartition::block_size, py::arg("i"))
      .def("last_block_empty", &BlockPartition::last_block_empty)
      .def("with_empty_last", &BlockPartition::with_empty_last)
      .def("__eq__", [](const BlockPartition& a, const BlockPartition& b) { return a == b; });

  py::class_<SmoothnessProfile>(m, "SmoothnessProfile")
      .def_readonly("per_block_l", &SmoothnessProfile::per_block_l)
      .def_readonly("mu", &SmoothnessProfile::mu);

  py::class_<Objective, std::shared_ptr<Objective>>(m, "Objective")
      .def("eval", &Objective::eval, py::arg("x"))
      .def("block_gradient", &Objective::block_gradient, py::arg("x"), py::arg("block"))
      .def("full_gradient", &Objective::full_gradient, py::arg("x"))
      .def("block_smoothness", &Objective::block_smoothness, py::arg("block"))
      .def("strong_convexity", &Objective::strong_convexity)
      .def("smoothness", &Objective::smoothness)
      .def("exact_block_min", &Objective::exact_block_min, py::arg("x"), py::arg("block"))
      .def_property_readonly("dim", &Objective::dim);

  py::class_<QuadraticProblem, Objective, std::shared_ptr<QuadraticProblem>>(m,
                                                                             "QuadraticProblem")
      .def(py::init([](const Eigen::MatrixXd& a, const Eigen::VectorXd& b, double ridge,
                       PartitionPtr partition) {
             return std::make_shared<QuadraticProblem>(a, b, ridge, std::move(partition));
           }),
           py::arg("design"), py::arg("labels"), py::arg("ridge"), py::arg("partition"))
      .def("minimum_norm_solution", &QuadraticProblem::minimum_norm_solution);

  py::class_<StructuredObjective, Objective, std::shared_ptr<StructuredObjective>>(
      m, "StructuredObjective")
      .def_static(
          "least_squares",
          [](const Eigen::MatrixXd& mat, const Eigen::VectorXd& labels, double ridge,
             PartitionPtr partition) {
            return std::make_shared<StructuredObjective>(
                StructuredObjective::least_squares(mat, labels, ridge, std::move(partition)));
          },
          py::arg("design"), py::arg("labels"), py::arg("ridge"), py::arg("partition"));

  m.def("finite_diff_gradient", &finite_diff_gradient, py::arg("objective"), py::arg("x"),
        py::arg("h"));
  m.def("gradient_step", &gradient_step, py::arg("objective"), py::arg("x"), py::arg("block"));

  m.def("polynomial_sequence", &polynomial_sequence, py::arg("k"));
  m.def("geometric_sequence", &geometric_sequence, py::arg("mu"), py::arg("sum_l"), py::arg("k"));

  py::enum_<SamplingMode>(m, "SamplingMode")
      .value("lip", SamplingMode::lip)
      .value("sqrt_lip", SamplingMode::sqrt_lip)
      .value("uniform", SamplingMode::uniform);

  py::enum_<SolverId>(m, "SolverId")
      .value("am", SolverId::am)
      .value("rcdm", SolverId::rcdm)
      .value("rcdm_g", SolverId::rcdm_g)
      .value("cbcd", SolverId::cbcd)
      .value("cbcd_g", SolverId::cbcd_g)
      .value("arbcd", SolverId::arbcd)
      .value("aarbcd", SolverId::aarbcd)
      .value("aarbcd_naive", SolverId::aarbcd_naive);

  py::class_<PyRunResult>(m, "RunResult")
      .def_readonly("solution", &PyRunResult::solution)
      .def_readonly("f_final", &PyRunResult::f_final)
      .def_readonly("f_checkpoints", &PyRunResult::f_checkpoints)
      .def_readonly("monotonicity_violations", &PyRunResult::monotonicity_violations);

  m.def(
      "run_am",
      [](std::shared_ptr<Objective> f, const Eigen::VectorXd& x1, long iterations,
         const std::vector<long>& checkpoints) {
        return wrap(run_am(*f, to_block_vector(f->partition_ptr(), x1),
                           make_options(iterations, checkpoints)));
      },
      py::arg("objective"), py::arg("x1"), py::arg("iterations"),
      py::arg("checkpoints") = std::vector<long>{});

  m.def(
      "run_rcdm",
      [](std::shared_ptr<Objective> f, SamplingMode mode, bool exact_last,
         const Eigen::VectorXd& x1, long iterations, std::uint64_t seed,
         const std::vector<long>& checkpoints) {
        auto sampling =
            SamplingDistribution::over_all_blocks(f->smoothness(), f->partition(), mode);
        RngStream rng(seed);
        return wrap(run_rcdm(*f, sampling, exact_last, to_block_vector(f->partition_ptr(), x1),
                             make_options(iterations, checkpoints), rng));
      },
      py::arg("objective"), py::arg("sampling"), py::arg("exact_last"), py::arg("x1"),
      py::arg("iterations"), py::arg("seed"), py::arg("checkpoints") = std::vector<long>{});

  m.def(
      "run_cyclic",
      [](std::shared_ptr<Objective> f, const std::vector<int>& permutation, bool exact_last,
         const Eigen::VectorXd& x1, long iterations, const std::vector<long>& checkpoints) {
        return wrap(run_cyclic(*f, permutation, exact_last,
                               to_block_vector(f->partition_ptr(), x1),
                               make_options(iterations, checkpoints)));
      },
      py::arg("objective"), py::arg("permutation"), py::arg("exact_last"), py::arg("x1"),
      py::arg("iterations"), py::arg("checkpoints") = std::vector<long>{});

  m.def(
      "run_arbcd",
      [](std::shared_ptr<Objective> f, SamplingMode mode, bool exact_inner,
         const Eigen::VectorXd& x1, long iterations, std::uint64_t seed,
         const std::vector<long>& checkpoints) {
        auto sampling = SamplingDistribution::make(f->smoothness(), f->partition(), mode);
        RngStream rng(seed);
        return wrap(run_arbcd(*f, sampling, exact_inner ? InnerStep::exact : InnerStep::gradient,
                              to_block_vector(f->partition_ptr(), x1),
                              make_options(iterations, checkpoints), rng));
      },
      py::arg("objective"), py::arg("sampling"), py::arg("exact_inner"), py::arg("x1"),
      py::arg("iterations"), py::arg("seed"), py::arg("checkpoints") = std::vector<long>{});

  m.def(
      "run_aarbcd",
      [](std::shared_ptr<Objective> f, SamplingMode mode, const Eigen::VectorXd& x1,
         long iterations, std::uint64_t seed, const std::vector<long>& checkpoints) {
        auto sampling = SamplingDistribution::make(f->smoothness(), f->partition(), mode);
        Eigen::VectorXd sigma = mode == SamplingMode::sqrt_lip
                                    ? sigma_sqrt_lip(f->smoothness(), f->partition())
                                    : sigma_lipschitz(f->smoothness(), f->partition());
        auto schedule =
            StepSchedule::constant_ratio(theorem4_ratio(sigma, sampling, f->smoothness()));
        RngStream rng(seed);
        if (auto s = std::dynamic_pointer_cast<StructuredObjective>(f);
            s && s->has_least_squares_form()) {
          return wrap(run_aarbcd_efficient(*s, sampling, sigma, std::move(schedule),
                                           to_block_vector(f->partition_ptr(), x1),
                                           make_options(iterations, checkpoints), rng));
        }
        return wrap(run_aarbcd_naive(*f, sampling, sigma, std::move(schedule),
                                     to_block_vector(f->partition_ptr(), x1),
                                     make_options(iterations, checkpoints), rng));
      },
      py::arg("objective"), py::arg("sampling"), py::arg("x1"), py::arg("iterations"),
      py::arg("seed"), py::arg("checkpoints") = std::vector<long>{});

  py::class_<SyntheticSpec>(m, "SyntheticSpec")
      .def(py::init<>())
      .def_readwrite("rows", &SyntheticSpec::rows)
      .def_readwrite("cols", &SyntheticSpec::cols)
      .def_readwrite("smoothness_spread", &SyntheticSpec::smoothness_spread)
      .def_readwrite("group_scales", &SyntheticSpec::group_scales)
      .def_readwrite("noise", &SyntheticSpec::noise);

  m.def(
      "make_synthetic",
      [](const SyntheticSpec& spec, std::uint64_t seed) {
        RngStream rng(seed);
        return make_synthetic(spec, rng);
      },
      py::arg("spec"), py::arg("seed"));
  m.def("coordinate_smoothness", &coordinate_smoothness, py::arg("design"), py::arg("ridge"));

  m.def(
      "estimate_fstar",
      [](std::shared_ptr<Objective> f) {
        const auto ref = estimate_fstar(*f);
        return py::make_tuple(ref.f_star, ref.x_star);
      },
      py::arg("objective"));
  m.def(
      "cost_factor", [](const std::string& id) {
        const auto solver = parse_solver_id(id);
        if (!solver) throw std::invalid_argument("unknown solver id: " + id);
        return cost_factor(*solver);
      },
      py::arg("solver"));
  m.def(
      "fit_rate_exponent",
      [](const std::vector<double>& gaps, long k_lo, long k_hi) {
        const auto fit = fit_rate_exponent(gaps, k_lo, k_hi);
        return py::make_tuple(fit.slope, fit.truncated);
      },
      py::arg("gap_by_k"), py::arg("k_lo"), py::arg("k_hi"));

  py::class_<ExperimentConfig>(m, "ExperimentConfig")
      .def(py::init<>())
      .def_readwrite("use_csv", &ExperimentConfig::use_csv)
      .def_readwrite("csv_path", &ExperimentConfig::csv_path)
      .def_readwrite("label_column", &ExperimentConfig::label_column)
      .def_readwrite("scale_max_abs", &ExperimentConfig::scale_max_abs)
      .def_readwrite("synthetic", &ExperimentConfig::synthetic)
      .def_readwrite("ridge", &ExperimentConfig::lambda)
      .def_readwrite("n_blocks", &ExperimentConfig::n_blocks)
      .def_readwrite("block_size", &ExperimentConfig::block_size)
      .def_readwrite("empty_exact_block", &ExperimentConfig::empty_exact_block)
      .def_readwrite("nonsmooth_last", &ExperimentConfig::nonsmooth_last)
      .def_readwrite("solver", &ExperimentConfig::solver)
      .def_readwrite("sampling", &ExperimentConfig::sampling)
      .def_readwrite("epochs", &ExperimentConfig::epochs)
      .def_readwrite("repetitions", &ExperimentConfig::repetitions)
      .def_readwrite("master_seed", &ExperimentConfig::master_seed)
      .def_readwrite("monitors", &ExperimentConfig::monitors)
      .def_readwrite("threads", &ExperimentConfig::threads);

  py::class_<Trace>(m, "Trace")
      .def_readonly("solver", &Trace::solver)
      .def_readonly("epoch", &Trace::epoch)
      .def_readonly("per_rep", &Trace::per_rep)
      .def_readonly("median", &Trace::median)
      .def_readonly("q25", &Trace::q25)
      .def_readonly("q75", &Trace::q75)
      .def_readonly("monitor_median", &Trace::monitor_median)
      .def_readonly("f_star", &Trace::f_star);

  m.def("run_experiment", &run_experiment, py::arg("config"),
        py::call_guard<py::gil_scoped_release>());

  m.def(
      "write_trace_csv",
      [](const std::string& path, const Trace& trace, const std::vector<std::string>& comments) {
        std::ofstream out(path);
        if (!out) throw std::runtime_error("cannot open " + path);
        write_trace_csv(out, trace, comments);
      },
      py::arg("path"), py::arg("trace"), py::arg("comments") = std::vector<std::string>{});

  m.def(
      "ingest_csv",
      [](const std::string& path, int label_column, bool scale_max_abs) {
        auto data = ingest_csv(path, label_column, scale_max_abs);
        return py::make_tuple(std::move(data.features), std::move(data.labels));
      },
      py::arg("path"), py::arg("label_column") = -1, py::arg("scale_max_abs") = false);
}
