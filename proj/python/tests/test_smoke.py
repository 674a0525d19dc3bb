"""Smoke tests for the python bindings."""

import math

import numpy as np
import pytest

import bcdbench as bb


def make_problem(seed=3, rows=12, cols=8, blocks=2, ridge=0.0):
    spec = bb.SyntheticSpec()
    spec.rows = rows
    spec.cols = cols
    spec.smoothness_spread = 30.0
    a, b = bb.make_synthetic(spec, seed)
    part = bb.BlockPartition.by_sorted_smoothness(
        bb.coordinate_smoothness(a, ridge), cols // blocks
    )
    return bb.QuadraticProblem(a, b, ridge, part), a, b, part


def test_partition_basics():
    part = bb.BlockPartition(4, [[0, 1], [2, 3]])
    assert part.n_coords == 4
    assert part.n_blocks == 2
    assert part.block(1) == [2, 3]
    with pytest.raises(ValueError):
        bb.BlockPartition(4, [[0, 1], [1, 3]])

    sorted_part = bb.BlockPartition.by_sorted_smoothness(np.array([5.0, 1.0, 3.0, 2.0]), 2)
    assert sorted_part.block(0) == [1, 3]
    assert sorted_part.block(1) == [2, 0]


def test_quadratic_gradient_matches_numpy():
    q, a, b, part = make_problem()
    x = np.linspace(-1, 1, a.shape[1])
    g = q.full_gradient(x)
    expected = a.T @ (a @ x - b)
    assert np.allclose(g, expected, atol=1e-10)
    fd = bb.finite_diff_gradient(q, x, 1e-6)
    assert np.linalg.norm(fd - g) <= 1e-5 * (1 + np.linalg.norm(g))


def test_solvers_reduce_the_objective():
    q, a, b, part = make_problem(rows=16, cols=8, blocks=4)
    x1 = np.zeros(8)
    f0 = q.eval(x1)
    r = bb.run_arbcd(q, bb.SamplingMode.lip, False, x1, 200, seed=1)
    assert r.f_final < f0
    assert r.monotonicity_violations == 0

    f_star, x_star = bb.estimate_fstar(q)
    assert r.f_final >= f_star - 1e-9

    acc = bb.run_aarbcd(q, bb.SamplingMode.sqrt_lip, x1, 400, seed=1)
    assert acc.f_final - f_star < max(1e-6, 1e-3 * (f0 - f_star))


def test_efficient_accelerated_path_runs():
    q, a, b, part = make_problem(rows=10, cols=6, blocks=3)
    s = bb.StructuredObjective.least_squares(a, b, 0.0, part)
    x1 = np.zeros(6)
    naive = bb.run_aarbcd(q, bb.SamplingMode.sqrt_lip, x1, 300, seed=9)
    fast = bb.run_aarbcd(s, bb.SamplingMode.sqrt_lip, x1, 300, seed=9)
    assert np.linalg.norm(naive.solution - fast.solution) <= 1e-8 * (
        1 + np.linalg.norm(naive.solution)
    )


def test_experiment_is_deterministic(tmp_path):
    config = bb.ExperimentConfig()
    config.synthetic.rows = 12
    config.synthetic.cols = 8
    config.n_blocks = 2
    config.solver = bb.SolverId.arbcd
    config.epochs = 4
    config.repetitions = 3
    config.master_seed = 5

    t1 = bb.run_experiment(config)
    t2 = bb.run_experiment(config)
    assert t1.per_rep == t2.per_rep
    assert t1.median == t2.median
    assert len(t1.epoch) == 4

    out = tmp_path / "trace.csv"
    bb.write_trace_csv(str(out), t1, ["config: smoke"])
    text = out.read_text()
    assert text.startswith("# config: smoke")
    assert "epoch,solver,median_gap,q25,q75" in text


def test_cost_factors_and_sequences():
    assert bb.cost_factor("arbcd") == 2.0
    assert bb.cost_factor("aarbcd") == 1.5
    assert bb.cost_factor("rcdm") == 1.0
    with pytest.raises(ValueError):
        bb.cost_factor("nope")

    a1, A1 = bb.polynomial_sequence(1)
    assert (a1, A1) == (1.0, 1.0)
    slope, truncated = bb.fit_rate_exponent([1.0 / k for k in range(1, 2001)], 100, 2000)
    assert math.isclose(slope, -1.0, abs_tol=1e-6)
    assert not truncated


def test_csv_round_trip(tmp_path):
    path = tmp_path / "data.csv"
    path.write_text("1,2,3\n4,5,6\n7,8,9\n")
    features, labels = bb.ingest_csv(str(path), -1, False)
    assert features.shape == (3, 2)
    assert list(labels) == [3.0, 6.0, 9.0]
