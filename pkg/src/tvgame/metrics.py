"""Performance and non-stationarity measures for a play trace.

Performance measures (all cumulative over rounds 1..t):

* individual regret of each player against the best fixed action in hindsight;
* dynamic NE-regret ``|sum payoff_t - sum value(A_t)|``;
* NE-regret ``|sum payoff_t - t * value(sum A_s / t)|``;
* duality gap ``sum (max_j (x_t^T A_t)_j - min_i (A_t y_t)_i)``.

Non-stationarity: P (path length of per-round equilibria), V (squared
variation of consecutive matrices), W (deviation from the averaged matrix).
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .matrix_game import DimensionError, NashSolution, PayoffMatrix, nash_solve


class NashCache:
    """Memoizes :func:`nash_solve` on exact matrix bytes."""

    def __init__(self):
        self._store: dict[bytes, NashSolution] = {}
        self.solves = 0

    def __call__(self, A: PayoffMatrix) -> NashSolution:
        key = A.key()
        sol = self._store.get(key)
        if sol is None:
            sol = nash_solve(A)
            self._store[key] = sol
            self.solves += 1
        return sol

    def __len__(self):
        return len(self._store)


@dataclass(frozen=True)
class Snapshot:
    t: int
    reg_x: float
    reg_y: float
    dyn_ne_reg: float
    ne_reg: float
    dual_gap: float
    p_t: float
    v_t: float
    w_t: float


class MetricsAccumulator:
    """Online accumulation of every measure, one :meth:`step` per round.

    ``avg_matrix`` is the full-horizon average used for W; without it W stays 0.
    """

    def __init__(self, shape: tuple[int, int], avg_matrix=None, cache: NashCache | None = None):
        m, n = shape
        self.shape = (m, n)
        self.cache = cache or NashCache()
        self.avg = None if avg_matrix is None else np.asarray(avg_matrix, dtype=float)
        if self.avg is not None and self.avg.shape != self.shape:
            raise DimensionError(f"average matrix {self.avg.shape} does not match {self.shape}")
        self.t = 0
        self.cum_payoff = 0.0
        self.cum_loss = np.zeros(m)
        self.cum_reward = np.zeros(n)
        self.cum_matrix = np.zeros((m, n))
        self.cum_value = 0.0
        self.dual_gap = 0.0
        self.path_length = 0.0
        self.v_t = 0.0
        self.w_t = 0.0
        self.prev_A = None
        self.prev_ne: NashSolution | None = None
        self.last_gap = 0.0

    def step(self, A: PayoffMatrix, x, y) -> None:
        a = A.entries
        if a.shape != self.shape:
            raise DimensionError(f"round matrix {a.shape} differs from {self.shape}")
        x = np.asarray(x, dtype=float)
        y = np.asarray(y, dtype=float)
        if x.shape != (self.shape[0],) or y.shape != (self.shape[1],):
            raise DimensionError(f"strategies {x.shape}, {y.shape} do not fit {self.shape}")
        loss = a @ y
        reward = x @ a
        self.t += 1
        self.cum_payoff += float(x @ loss)
        self.cum_loss += loss
        self.cum_reward += reward
        self.cum_matrix += a
        self.last_gap = float(reward.max() - loss.min())
        self.dual_gap += self.last_gap
        ne = self.cache(A)
        self.cum_value += ne.value
        if self.prev_A is not None:
            if ne is not self.prev_ne:
                self.path_length += (np.abs(ne.x_star - self.prev_ne.x_star).sum()
                                     + np.abs(ne.y_star - self.prev_ne.y_star).sum())
            if A is not self.prev_A:
                d = np.abs(a - self.prev_A.entries).max()
                self.v_t += d * d
        if self.avg is not None:
            self.w_t += np.abs(a - self.avg).max()
        self.prev_A = A
        self.prev_ne = ne

    # -- measures ---------------------------------------------------------

    def reg_x(self) -> float:
        return self.cum_payoff - float(self.cum_loss.min())

    def reg_y(self) -> float:
        return float(self.cum_reward.max()) - self.cum_payoff

    def dyn_ne_reg(self) -> float:
        return abs(self.cum_payoff - self.cum_value)

    def ne_reg(self) -> float:
        if self.t == 0:
            return 0.0
        value = nash_solve(PayoffMatrix.unbounded(self.cum_matrix / self.t)).value
        return abs(self.cum_payoff - self.t * value)

    def snapshot(self) -> Snapshot:
        return Snapshot(self.t, self.reg_x(), self.reg_y(), self.dyn_ne_reg(), self.ne_reg(),
                        self.dual_gap, self.path_length, self.v_t, self.w_t)


def individual_regret_x(acc: MetricsAccumulator) -> float:
    return acc.reg_x()


def individual_regret_y(acc: MetricsAccumulator) -> float:
    return acc.reg_y()


def ne_regret(acc: MetricsAccumulator) -> float:
    return acc.ne_reg()


@dataclass(frozen=True)
class NonStationarity:
    P: float
    V: float
    W: float

    @property
    def Q(self) -> float:
        return self.V + min(self.P, self.W)


def nonstationarity_measures(schedule, cache: NashCache | None = None) -> NonStationarity:
    """P_T, V_T, W_T (and Q_T) of a replayable schedule.

    P uses the solver's canonical equilibrium of each round, which upper-bounds
    the minimum over all equilibrium selections and equals it when every
    round's equilibrium is unique.
    """
    cache = cache or NashCache()
    avg = schedule.average()
    # replay must agree with the first pass
    P = V = W = 0.0
    prev = prev_ne = None
    for A in schedule:
        ne = cache(A)
        if prev is not None:
            if ne is not prev_ne:
                P += np.abs(ne.x_star - prev_ne.x_star).sum() + np.abs(ne.y_star - prev_ne.y_star).sum()
            if A is not prev:
                d = np.abs(A.entries - prev.entries).max()
                V += d * d
        W += np.abs(A.entries - avg).max()
        prev, prev_ne = A, ne
    return NonStationarity(float(P), float(V), float(W))
