import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from tvgame.environments import Stationary, TwoPhase
from tvgame.matrix_game import PayoffMatrix, nash_solve
from tvgame.metrics import MetricsAccumulator, NashCache, nonstationarity_measures

MP = [[1.0, -1.0], [-1.0, 1.0]]


def _play(schedule, xs, ys, avg=True):
    acc = MetricsAccumulator(schedule.shape, schedule.average() if avg else None)
    for A, x, y in zip(schedule, xs, ys):
        acc.step(A, x, y)
    return acc


def test_stationary_nash_play_is_zero():
    s = Stationary(50, MP)
    acc = _play(s, [[0.5, 0.5]] * 50, [[0.5, 0.5]] * 50)
    snap = acc.snapshot()
    for v in (snap.reg_x, snap.reg_y, snap.dyn_ne_reg, snap.ne_reg, snap.dual_gap):
        assert v == pytest.approx(0.0, abs=1e-12)
    assert (snap.p_t, snap.v_t, snap.w_t) == (0, 0, 0)


def test_two_phase_counterexample():
    T = 1000
    s = TwoPhase(T)
    cache = NashCache()
    xs = [cache(A).x_star for A in s]
    ys = [cache(A).y_star for A in s]
    acc = _play(s, xs, ys)
    assert acc.dyn_ne_reg() == 0.0
    assert acc.ne_reg() == pytest.approx(T / 2, abs=1e-9)
    assert cache.solves == 2


def test_one_round_regret():
    acc = MetricsAccumulator((2, 2))
    acc.step(PayoffMatrix(MP), [1, 0], [1, 0])
    assert acc.reg_x() == 2.0
    assert acc.reg_y() == 0.0
    assert acc.dual_gap == 2.0


def test_alternating_sign_fixed_equilibrium():
    # +A / -A share the uniform equilibrium, so P stays zero while V grows linearly
    from tvgame.environments import FileSchedule
    T = 40
    spec = {"steps": [{"matrix": {"rows": 2, "cols": 2, "entries": MP}},
                      {"matrix": {"rows": 2, "cols": 2, "entries": (-np.array(MP)).tolist()}}]}
    ns = nonstationarity_measures(FileSchedule(spec, T))
    assert ns.P == pytest.approx(0.0, abs=1e-12)
    assert ns.V == 4.0 * (T - 1)
    assert ns.W == T
    assert ns.Q == ns.V


def _brute_force(mats, xs, ys):
    T = len(mats)
    pay = [x @ A @ y for A, x, y in zip(mats, xs, ys)]
    cum = sum(pay)
    best_x = min(sum(A[i] @ y for A, y in zip(mats, ys)) for i in range(mats[0].shape[0]))
    best_y = max(sum(x @ A[:, j] for A, x in zip(mats, xs)) for j in range(mats[0].shape[1]))
    vals = [nash_solve(A).value for A in mats]
    gap = sum((x @ A).max() - (A @ y).min() for A, x, y in zip(mats, xs, ys))
    avg = sum(mats) / T
    W = sum(np.abs(A - avg).max() for A in mats)
    V = sum(np.abs(mats[t] - mats[t - 1]).max() ** 2 for t in range(1, T))
    nev = nash_solve(PayoffMatrix.unbounded(avg)).value
    return dict(reg_x=cum - best_x, reg_y=best_y - cum, dyn=abs(cum - sum(vals)),
                ne=abs(cum - T * nev), gap=gap, V=V, W=W)


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 2**32 - 1), st.integers(1, 20), st.integers(1, 4), st.integers(1, 4))
def test_accumulator_matches_brute_force(seed, T, m, n):
    rng = np.random.default_rng(seed)
    mats = [rng.uniform(-1, 1, (m, n)) for _ in range(T)]
    xs = [rng.dirichlet(np.ones(m)) for _ in range(T)]
    ys = [rng.dirichlet(np.ones(n)) for _ in range(T)]
    acc = MetricsAccumulator((m, n), sum(mats) / T)
    for A, x, y in zip(mats, xs, ys):
        acc.step(PayoffMatrix(A), x, y)
    ref = _brute_force(mats, xs, ys)
    got = dict(reg_x=acc.reg_x(), reg_y=acc.reg_y(), dyn=acc.dyn_ne_reg(), ne=acc.ne_reg(),
               gap=acc.dual_gap, V=acc.v_t, W=acc.w_t)
    for key in ref:
        assert got[key] == pytest.approx(ref[key], abs=1e-9), key
    # orderings between measures and the variation bound
    tol = 1e-9
    assert max(got["reg_x"], got["reg_y"], got["dyn"], got["ne"]) <= got["gap"] + tol
    assert got["V"] <= 4 * got["W"] + tol


def test_dual_gap_monotone():
    rng = np.random.default_rng(2)
    acc = MetricsAccumulator((3, 2))
    prev = 0.0
    for _ in range(100):
        acc.step(PayoffMatrix(rng.uniform(-1, 1, (3, 2))), rng.dirichlet(np.ones(3)), rng.dirichlet(np.ones(2)))
        assert acc.dual_gap >= prev
        prev = acc.dual_gap


def test_stationary_nonstationarity_zero():
    ns = nonstationarity_measures(Stationary(100, [[0.5, -1], [-0.3, 0.8]]))
    assert (ns.P, ns.V, ns.W) == (0.0, 0.0, 0.0)


def test_cache_reuses_solutions():
    cache = NashCache()
    A = PayoffMatrix(MP)
    assert cache(A) is cache(PayoffMatrix(MP))
    assert cache.solves == 1 and len(cache) == 1
