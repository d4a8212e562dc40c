import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from olsaudit import lp


def test_textbook_max():
    # max 3x + 5y, x <= 4, 2y <= 12, 3x + 2y <= 18 -> (2, 6), value 36
    p = lp.LPProblem.build([3, 5], [([1, 0], "<=", 4), ([0, 2], "<=", 12), ([3, 2], "<=", 18)], maximize=True)
    for method in ("simplex", "highs"):
        sol = lp.solve(p, method)
        assert sol.optimal
        assert sol.value == pytest.approx(36.0)
        np.testing.assert_allclose(sol.x, [2.0, 6.0], atol=1e-9)


def test_infeasible_and_unbounded():
    infeas = lp.LPProblem.build([1.0], [([1.0], ">=", 2.0), ([1.0], "<=", 1.0)])
    unb = lp.LPProblem.build([1.0], [([1.0], ">=", 0.0)], maximize=True)
    for method in ("simplex", "highs"):
        assert lp.solve(infeas, method).status is lp.Status.INFEASIBLE
        assert lp.solve(unb, method).status is lp.Status.UNBOUNDED


def test_free_and_negative_variables():
    # min |x - 3| style: min t s.t. t >= x - 3, t >= 3 - x, x free, t free
    p = lp.LPProblem.build(
        [0.0, 1.0],
        [([1.0, -1.0], "<=", 3.0), ([-1.0, -1.0], "<=", -3.0)],
        lo=-np.inf,
    )
    sol = lp.solve(p, "simplex")
    assert sol.value == pytest.approx(0.0, abs=1e-12)
    assert sol.x[0] == pytest.approx(3.0)


def test_no_rows():
    p = lp.LPProblem([1.0, -1.0], np.zeros((0, 2)), [], [], [0.0, -2.0], [1.0, 5.0])
    sol = lp.solve(p, "simplex")
    assert sol.value == pytest.approx(-5.0)


def test_degenerate_cycling_example():
    # Beale's example cycles under naive Dantzig pricing without anti-cycling
    c = [-0.75, 150, -0.02, 6]
    rows = [
        ([0.25, -60, -0.04, 9], "<=", 0.0),
        ([0.5, -90, -0.02, 3], "<=", 0.0),
        ([0, 0, 1, 0], "<=", 1.0),
    ]
    sol = lp.solve(lp.LPProblem.build(c, rows), "simplex")
    assert sol.value == pytest.approx(-0.05)


def test_invalid_inputs():
    with pytest.raises(ValueError):
        lp.LPProblem.build([1.0], [([1.0], "<", 1.0)])
    with pytest.raises(ValueError):
        lp.LPProblem([1.0], [[np.inf]], ["<="], [1.0], 0.0, 1.0)
    with pytest.raises(ValueError):
        lp.solve(lp.LPProblem.build([1.0], hi=1.0), "bogus")


def _random_lp(rng):
    m, n = int(rng.integers(1, 7)), int(rng.integers(1, 9))
    A = rng.standard_normal((m, n))
    b = rng.standard_normal(m)
    c = rng.standard_normal(n)
    rel = list(rng.choice([lp.LE, lp.GE, lp.EQ], m))
    lo = np.where(rng.random(n) < 0.3, -np.inf, -rng.random(n))
    hi = np.where(rng.random(n) < 0.3, np.inf, rng.random(n) * 3)
    return lp.LPProblem(c, A, rel, b, lo, hi, maximize=bool(rng.random() < 0.5))


@settings(max_examples=300, deadline=None)
@given(st.integers(0, 2**32 - 1))
def test_simplex_agrees_with_highs(seed):
    p = _random_lp(np.random.default_rng(seed))
    a = lp.solve(p, "simplex")
    h = lp.solve(p, "highs")
    assert a.status == h.status
    if a.optimal:
        assert a.value == pytest.approx(h.value, rel=1e-7, abs=1e-7)
        assert p.max_violation(a.x) <= 1e-6


@settings(max_examples=200, deadline=None)
@given(st.integers(0, 2**32 - 1))
def test_weak_and_strong_duality(seed):
    # primal: min c x, A x >= b, x >= 0 ; dual: max b y, A^T y <= c, y >= 0
    rng = np.random.default_rng(seed)
    m, n = int(rng.integers(1, 6)), int(rng.integers(1, 6))
    A = rng.standard_normal((m, n))
    b = rng.standard_normal(m)
    c = rng.random(n) + 0.1  # keeps the primal bounded below
    primal = lp.solve(lp.LPProblem(c, A, [lp.GE] * m, b, 0.0, np.inf), "simplex")
    dual = lp.solve(lp.LPProblem(b, A.T, [lp.LE] * n, c, 0.0, np.inf, maximize=True), "simplex")
    if primal.optimal:
        assert dual.optimal
        # weak duality on the returned points, then equality of optimal values
        assert b @ dual.x <= c @ primal.x + 1e-7
        assert primal.value == pytest.approx(dual.value, rel=1e-7, abs=1e-7)
    else:
        assert primal.status is lp.Status.INFEASIBLE
        assert dual.status is lp.Status.UNBOUNDED


@settings(max_examples=100, deadline=None)
@given(st.integers(0, 2**32 - 1))
def test_homogeneous_box_warm_start_matches_cold(seed):
    rng = np.random.default_rng(seed)
    d, n = int(rng.integers(1, 4)), int(rng.integers(2, 40))
    A0 = rng.standard_normal((d, n))
    c = np.ones(n)
    sol0, state = lp.solve_homogeneous_box(c, A0, 1.0)
    A1 = A0 + 0.05 * rng.standard_normal((d, n))
    warm, _ = lp.solve_homogeneous_box(c, A1, 1.0, state)
    cold = lp.solve(lp.LPProblem(c, A1, [lp.EQ] * d, np.zeros(d), 0.0, 1.0, maximize=True), "highs")
    assert warm.value == pytest.approx(cold.value, abs=1e-7)
    assert np.max(np.abs(A1 @ warm.x)) < 1e-7 * (1 + np.abs(A1).max())


def test_highs_misreport_falls_back(monkeypatch):
    p = lp.LPProblem.build([1.0, 1.0], [([1.0, 1.0], ">=", 1.0)])
    calls = []

    def broken(c, A, rel, b, lo, hi, maximize):
        calls.append(1)
        if len(calls) == 1:
            return lp.LPSolution(lp.Status.INFEASIBLE)
        raise lp.SolverError("HiGHS failed: unknown model status")

    monkeypatch.setattr(lp, "_solve_highs", broken)
    sol = lp.solve(p, "highs")
    assert len(calls) == 2 and sol.optimal and sol.value == pytest.approx(1.0)
