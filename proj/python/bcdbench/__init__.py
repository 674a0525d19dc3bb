"""Block coordinate descent solvers and a reproducible benchmark harness.

The heavy lifting lives in the C++ extension; this package re-exports the
main operations: partitions, objectives, the solver family (alternating
minimization, randomized and cyclic BCD, the alternating variants and their
accelerated form), and the experiment harness with CSV trace output.
"""

from ._core import (
    BlockPartition,
    ExperimentConfig,
    Objective,
    QuadraticProblem,
    RunResult,
    SamplingMode,
    SmoothnessProfile,
    SolverId,
    StructuredObjective,
    SyntheticSpec,
    Trace,
    coordinate_smoothness,
    cost_factor,
    estimate_fstar,
    finite_diff_gradient,
    fit_rate_exponent,
    geometric_sequence,
    gradient_step,
    ingest_csv,
    make_synthetic,
    polynomial_sequence,
    run_aarbcd,
    run_am,
    run_arbcd,
    run_cyclic,
    run_experiment,
    run_rcdm,
    write_trace_csv,
)

__all__ = [
    "BlockPartition",
    "ExperimentConfig",
    "Objective",
    "QuadraticProblem",
    "RunResult",
    "SamplingMode",
    "SmoothnessProfile",
    "SolverId",
    "StructuredObjective",
    "SyntheticSpec",
    "Trace",
    "coordinate_smoothness",
    "cost_factor",
    "estimate_fstar",
    "finite_diff_gradient",
    "fit_rate_exponent",
    "geometric_sequence",
    "gradient_step",
    "ingest_csv",
    "make_synthetic",
    "polynomial_sequence",
    "run_aarbcd",
    "run_am",
    "run_arbcd",
    "run_cyclic",
    "run_experiment",
    "run_rcdm",
    "write_trace_csv",
]

__version__ = "0.1.0"
