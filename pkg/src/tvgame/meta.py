"""Two-layer no-regret learner for time-varying zero-sum games.

A meta-learner runs optimistic online gradient descent over a pool of
base-learners: ``N`` tuned learners with geometrically spaced step sizes plus
one dummy learner per pure action. Meta losses carry a stability correction
``lam * ||x_{t,i} - x_{t-1,i}||_1^2`` that pushes weight toward stable learners,
and the meta step size is tuned from the observed gradient variation.

The same class serves both players. The x-player feeds ``A_t y_t``; the
y-player feeds ``-A_t^T x_t`` (its reward negated into a loss).
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .learners import HEDGE, DrvuParams, drvu_params_for, make_learner
from .matrix_game import DimensionError, project_unchecked


def pool_size(T: int) -> int:
    """``floor(log2(T) / 2) + 1`` computed exactly in integers."""
    return (T.bit_length() - 1) // 2 + 1


@dataclass(frozen=True)
class StepSizePool:
    T: int
    L: float
    c: float
    lam: float
    etas: np.ndarray

    @property
    def N(self) -> int:
        return self.etas.size

    @classmethod
    def build(cls, T: int, drvu: DrvuParams, c: float = 0.5) -> "StepSizePool":
        if T < 2:
            raise ValueError(f"horizon must be at least 2, got {T}")
        L = max(4.0, math.sqrt(16 * c * drvu.beta), math.sqrt(8 * c * drvu.beta / drvu.gamma))
        N = pool_size(T)
        etas = 2.0 ** np.arange(N) / (L * math.sqrt(T))
        etas.setflags(write=False)
        return cls(T, L, c, drvu.gamma * L / 2.0, etas)


class PhaseError(RuntimeError):
    """decide/feed called out of order."""


class MetaLearner:
    """One player's two-layer algorithm.

    Call :meth:`decide` then :meth:`feed` once per round.
    """

    def __init__(self, k: int, T: int, base: str = HEDGE, c: float = 0.5,
                 drvu: DrvuParams | None = None, dummies: bool = True):
        self.k = k
        self.T = T
        self.base = base
        self.drvu = drvu or drvu_params_for(base, k, T)
        self.pool = StepSizePool.build(T, self.drvu, c)
        self.learners = make_learner(base, k, self.pool.etas, T=T)
        self.n_tuned = self.pool.N
        size = self.n_tuned + (k if dummies else 0)
        self.size = size
        # rows [0, N) are the tuned learners, rows [N, N+k) the vertices e_j
        self.decisions = np.zeros((size, k))
        if dummies:
            self.decisions[self.n_tuned:] = np.eye(k)
        self.prev_decisions = None
        self.aux = np.full(size, 1.0 / size)  # phat_t
        self.weights = self.aux.copy()  # p_t
        self.prev_grad = np.zeros(k)
        self.eps_acc = 0.0
        self.eps = 1.0 / self.pool.L
        self.corr = np.zeros(size)
        self.t = 0
        self._awaiting_feed = False
        self.decision = None

    @property
    def L(self) -> float:
        return self.pool.L

    @property
    def lam(self) -> float:
        return self.pool.lam

    def decide(self) -> np.ndarray:
        if self._awaiting_feed:
            raise PhaseError("decide called twice in one round")
        self.t += 1
        X = self.decisions
        X[:self.n_tuned] = self.learners.predict(self.prev_grad)
        if self.prev_decisions is None:
            self.prev_decisions = X.copy()  # x_{0,i} := x_{1,i}
            self.corr[:] = 0.0
        else:
            d = np.abs(X - self.prev_decisions).sum(axis=1)
            self.corr = self.lam * d * d
        if self.t == 1:
            optimism = np.zeros(self.size)
        else:
            optimism = X @ self.prev_grad + self.corr
        self.optimism = optimism
        self.weights = project_unchecked(self.aux - 0.5 * self.eps * optimism)
        self.decision = self.weights @ X
        self._awaiting_feed = True
        return self.decision

    def feed(self, g) -> None:
        if not self._awaiting_feed:
            raise PhaseError("feed called before decide")
        g = np.array(g, dtype=float)  # kept as next round's optimism
        if g.shape != (self.k,):
            raise DimensionError(f"loss vector has shape {g.shape}, expected ({self.k},)")
        if not np.isfinite(g).all():
            raise ValueError("non-finite loss vector")
        X = self.decisions
        loss = X @ g + self.corr
        self.meta_loss = loss
        self.aux = project_unchecked(self.aux - 0.5 * self.eps * loss)
        if self.t >= 2:
            dv = np.abs(g - self.prev_grad).max()
            self.eps_acc += dv * dv
        self.eps = 1.0 / math.sqrt(self.pool.L ** 2 + self.eps_acc)
        self.learners.update(g)
        self.prev_grad = g
        self.prev_decisions, self.decisions = X, self.prev_decisions
        if self.n_tuned < self.size:
            self.decisions[self.n_tuned:] = X[self.n_tuned:]
        self._awaiting_feed = False

    def weight_entropy(self) -> float:
        p = self.weights[self.weights > 0]
        return float(-(p * np.log(p)).sum())


def make_player_pair(m: int, n: int, T: int, base: str = HEDGE, c: float = 0.5):
    """x-player over ``m`` rows and y-player over ``n`` columns, same horizon and base kind."""
    return MetaLearner(m, T, base, c), MetaLearner(n, T, base, c)
