import itertools

import numpy as np
import pytest
from scipy.optimize import linprog

from gcmc.lp import LPModel
from gcmc.simplex import (STATUS_INFEASIBLE, STATUS_OPTIMAL, SolverConfig,
                          check_solution, solve)

from conftest import pipeline_for


def _toy_model(objective, rows, lower, upper):
    n = len(objective)
    return LPModel(
        columns=[("z", (0, j)) for j in range(n)],
        objective=np.array(objective, dtype=float),
        rows=rows,
        lower=np.array(lower, dtype=float),
        upper=np.array(upper, dtype=float),
        td=None, dp=None, instance=None, family=[],
        col_index={("z", (0, j)): j for j in range(n)},
    )


def _scipy_value(model):
    n = model.ncols
    A = np.zeros((model.nrows, n))
    b = np.zeros(model.nrows)
    for k, (cols, coefs, rhs) in enumerate(model.rows):
        for j, c in zip(cols, coefs):
            A[k, j] += c
        b[k] = rhs
    res = linprog(-model.objective, A_eq=A, b_eq=b,
                  bounds=list(zip(model.lower, model.upper)),
                  method="highs")
    return res


def test_unconstrained_box():
    m = _toy_model([1, -2, 0], [], [0, 0, 0], [1, 1, 1])
    res = solve(m)
    assert res.status == STATUS_OPTIMAL
    assert res.objective == 1.0
    assert res.values[0] == 1.0 and res.values[1] == 0.0


def test_single_equality():
    # maximize x0 + x1 with x0 + x1 = 1 on [0,1]^2
    m = _toy_model([1, 1], [([0, 1], [1.0, 1.0], 1.0)], [0, 0], [1, 1])
    res = solve(m)
    assert res.status == STATUS_OPTIMAL
    assert abs(res.objective - 1.0) < 1e-9


def test_infeasible_detected():
    m = _toy_model([1, 1], [([0, 1], [1.0, 1.0], 5.0)], [0, 0], [1, 1])
    res = solve(m)
    assert res.status == STATUS_INFEASIBLE


def test_fixed_variables_presolved():
    # everything pinned: no simplex iterations at all
    m = _toy_model([3, 4], [([0, 1], [1.0, 1.0], 2.0)], [1, 1], [1, 1])
    res = solve(m)
    assert res.status == STATUS_OPTIMAL
    assert res.iterations == 0
    assert res.objective == 7.0


def test_fixed_variables_contradiction():
    m = _toy_model([1, 1], [([0, 1], [1.0, 1.0], 3.0)], [1, 1], [1, 1])
    res = solve(m)
    assert res.status == STATUS_INFEASIBLE


def test_random_lps_match_reference_solver():
    rng = np.random.default_rng(3)
    for trial in range(60):
        n = int(rng.integers(2, 7))
        mrows = int(rng.integers(1, 4))
        c = rng.integers(-5, 6, size=n).astype(float)
        lower = np.zeros(n)
        upper = rng.integers(1, 4, size=n).astype(float)
        rows = []
        for _ in range(mrows):
            support = rng.choice(n, size=int(rng.integers(1, n + 1)),
                                 replace=False)
            coefs = rng.integers(-3, 4, size=len(support)).astype(float)
            # pick a rhs hit by some interior point so most cases are feasible
            x0 = rng.uniform(0, 1, size=n) * upper
            rhs = float(sum(cc * x0[j] for j, cc in zip(support, coefs)))
            rows.append((list(int(j) for j in support), list(coefs), rhs))
        model = _toy_model(c, rows, lower, upper)
        res = solve(model)
        ref = _scipy_value(model)
        if ref.status == 2:
            assert res.status == STATUS_INFEASIBLE, trial
            continue
        assert ref.status == 0 and res.status == STATUS_OPTIMAL, trial
        assert abs(res.objective - (-ref.fun)) < 1e-6, trial
        rep = check_solution(model, res.values)
        assert rep["feasible"], trial


def test_corpus_lp_values_match_reference_solver():
    for name in ("is-p5", "vc-c4", "ds-p4", "conn-diamond", "is-grid23"):
        pipe = pipeline_for(name)
        ref = _scipy_value(pipe.model)
        assert ref.status == 0
        assert abs(pipe.lp_value - (-ref.fun)) < 1e-6, name
        rep = check_solution(pipe.model, pipe.result.values)
        assert rep["feasible"], name


def test_determinism():
    m = _toy_model([2, 1, 3], [([0, 1, 2], [1.0, 1.0, 1.0], 2.0)],
                   [0, 0, 0], [1, 1, 1])
    r1 = solve(m)
    r2 = solve(m)
    assert r1.status == r2.status
    assert r1.iterations == r2.iterations
    assert np.array_equal(r1.values, r2.values)


def test_degenerate_cycling_guard():
    # classic degenerate vertex: many rows meeting at the same point
    rows = [
        ([0, 1], [1.0, 1.0], 1.0),
        ([0, 2], [1.0, 1.0], 1.0),
        ([1, 2], [1.0, 1.0], 1.0),
    ]
    m = _toy_model([1, 1, 1], rows, [0, 0, 0], [1, 1, 1])
    res = solve(m)
    assert res.status == STATUS_OPTIMAL
    assert abs(res.objective - 1.5) < 1e-9
