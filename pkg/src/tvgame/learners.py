"""Base-learners with the DRVU property.

Each learner class is vectorized over a batch of step sizes: the state arrays
have shape ``(B, k)`` where ``B`` is the number of step sizes, so the meta
algorithm runs its whole pool in a handful of numpy calls. A single learner is
just a batch of one.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .matrix_game import DimensionError

HEDGE = "hedge_fixed_share"
OGD = "optimistic_ogd"
DUMMY = "dummy"
KINDS = (HEDGE, OGD)


@dataclass(frozen=True)
class DrvuParams:
    alpha: float
    beta: float
    gamma: float

    def __post_init__(self):
        if min(self.alpha, self.beta, self.gamma) <= 0:
            raise ValueError(f"DRVU parameters must be positive: {self}")


def drvu_params_for(kind: str, m: int, T: int) -> DrvuParams:
    """Proven DRVU constants for a base-learner kind on an m-action simplex."""
    if m < 1 or T < 1:
        raise ValueError("need m >= 1 and T >= 1")
    if kind == HEDGE:
        return DrvuParams(3.0 + math.log(m * T), 1.0, 0.25)
    if kind == OGD:
        return DrvuParams(m + 2.0, m / 2.0, 1.0 / (4.0 * m))
    raise ValueError(f"no DRVU constants for learner kind {kind!r}")


def _finite(v: np.ndarray, what: str) -> np.ndarray:
    v = np.asarray(v, dtype=float)
    if not np.isfinite(v).all():
        raise ValueError(f"non-finite {what}")
    return v


def _project_rows(V: np.ndarray) -> np.ndarray:
    """Row-wise Euclidean projection onto the simplex."""
    B, k = V.shape
    U = -np.sort(-V, axis=1)
    css = np.cumsum(U, axis=1) - 1.0
    ind = np.arange(1, k + 1)
    cond = U - css / ind > 0
    rho = k - 1 - np.argmax(cond[:, ::-1], axis=1)
    tau = css[np.arange(B), rho] / (rho + 1.0)
    P = np.maximum(V - tau[:, None], 0.0)
    return P / P.sum(axis=1, keepdims=True)


class _Batch:
    kind: str

    def __init__(self, k: int, etas):
        etas = np.atleast_1d(np.asarray(etas, dtype=float))
        if k < 1:
            raise ValueError("dimension must be >= 1")
        if etas.ndim != 1 or np.any(etas <= 0) or not np.all(np.isfinite(etas)):
            raise ValueError(f"step sizes must be positive and finite, got {etas}")
        self.k = k
        self.etas = etas
        self._eta_col = etas[:, None]
        self.decision = np.full((etas.size, k), 1.0 / k)
        self.last_decision = self.decision.copy()
        self._decided = False

    def __len__(self):
        return self.etas.size

    def _check(self, v, what):
        v = _finite(v, what)
        if v.shape != (self.k,):
            raise DimensionError(f"{what} has shape {v.shape}, expected ({self.k},)")
        return v


class HedgeFixedShare(_Batch):
    """Optimistic Hedge with a fixed-share mixing step.

    ``x_t`` and ``xhat_{t+1}`` are both multiplicative steps from the mixed
    point ``xtilde_t``; then ``xtilde_{t+1} = (1 - xi) xhat_{t+1} + xi / k``.
    """

    kind = HEDGE

    def __init__(self, k: int, etas, xi: float):
        super().__init__(k, etas)
        if not 0.0 <= xi <= 1.0:
            raise ValueError(f"fixed-share coefficient must be in [0, 1], got {xi}")
        self.xi = xi
        self.mixed = np.full((len(self), k), 1.0 / k)  # xtilde_t
        self.auxiliary = self.mixed.copy()  # xhat_t

    def _step(self, v):
        # log-space with max subtraction; mixed > 0 always holds when xi > 0
        if self.xi > 0:
            z = np.log(self.mixed) - self._eta_col * v
        else:
            with np.errstate(divide="ignore"):
                z = np.log(self.mixed) - self._eta_col * v
        z -= z.max(axis=1, keepdims=True)
        w = np.exp(z)
        return w / w.sum(axis=1, keepdims=True)

    def predict(self, h) -> np.ndarray:
        h = self._check(h, "optimism vector")
        self.last_decision = self.decision
        self.decision = self._step(h)
        return self.decision

    def update(self, g) -> None:
        g = self._check(g, "loss vector")
        self.auxiliary = self._step(g)
        self.mixed = (1.0 - self.xi) * self.auxiliary + self.xi / self.k


class OptimisticOGD(_Batch):
    """Optimistic online gradient descent on the simplex (Euclidean projections)."""

    kind = OGD

    def __init__(self, k: int, etas):
        super().__init__(k, etas)
        self.auxiliary = np.full((len(self), k), 1.0 / k)  # xhat_t

    def predict(self, h) -> np.ndarray:
        h = self._check(h, "optimism vector")
        self.last_decision = self.decision
        self.decision = _project_rows(self.auxiliary - self._eta_col * h)
        return self.decision

    def update(self, g) -> None:
        g = self._check(g, "loss vector")
        self.auxiliary = _project_rows(self.auxiliary - self._eta_col * g)


class Dummy:
    """Always plays the j-th vertex; takes no feedback."""

    kind = DUMMY

    def __init__(self, k: int, j: int):
        if not 0 <= j < k:
            raise ValueError(f"vertex index {j} out of range for dimension {k}")
        self.k = k
        self.j = j
        self.decision = np.zeros((1, k))
        self.decision[0, j] = 1.0
        self.decision.setflags(write=False)
        self.last_decision = self.decision

    def __len__(self):
        return 1

    def predict(self, h=None) -> np.ndarray:
        return self.decision

    def update(self, g=None) -> None:
        pass


def make_learner(kind: str, k: int, etas, T: int | None = None, xi: float | None = None):
    """Build a batch of base-learners of one kind.

    Hedge uses the fixed-share coefficient ``xi = 1/T`` unless given explicitly.
    """
    if kind == HEDGE:
        if xi is None:
            if T is None:
                raise ValueError("hedge needs the horizon T (or an explicit xi)")
            xi = 1.0 / T
        return HedgeFixedShare(k, etas, xi)
    if kind == OGD:
        return OptimisticOGD(k, etas)
    raise ValueError(f"unknown learner kind {kind!r}")


@dataclass
class DrvuReport:
    holds: bool
    lhs: float
    rhs: float


def drvu_check(kind: str, eta: float, losses, comparators, params: DrvuParams | None = None,
               diameter_slack: bool | None = None) -> DrvuReport:
    """Run one learner on ``losses`` with optimism ``h_t = g_{t-1}`` and test the DRVU bound.

    LHS is the dynamic regret ``sum <x_t - u_t, g_t>``; RHS is
    ``alpha/eta (1 + P^u) + eta beta sum ||g_t - g_{t-1}||_inf^2
    - gamma/eta sum_{t>=2} ||x_t - x_{t-1}||_1^2`` with ``g_0 = 0``.
    For OGD the squared simplex diameter ``2m`` is added to the RHS to stand in
    for the bound's unspecified O(1) term.
    """
    G = _finite(losses, "loss sequence")
    U = np.asarray(comparators, dtype=float)
    if G.ndim != 2 or U.shape != G.shape:
        raise DimensionError(f"losses {G.shape} and comparators {U.shape} must both be (T, m)")
    T, m = G.shape
    params = params or drvu_params_for(kind, m, T)
    learner = make_learner(kind, m, [eta], T=T)

    X = np.empty_like(G)
    h = np.zeros(m)
    for t in range(T):
        X[t] = learner.predict(h)[0]
        learner.update(G[t])
        h = G[t]

    lhs = float(np.einsum("ti,ti->", X - U, G))
    path = float(np.abs(np.diff(U, axis=0)).sum())
    prev = np.vstack([np.zeros((1, m)), G[:-1]])
    variation = float((np.abs(G - prev).max(axis=1) ** 2).sum())
    stability = float((np.abs(np.diff(X, axis=0)).sum(axis=1) ** 2).sum())
    rhs = (params.alpha / eta) * (1.0 + path) + eta * params.beta * variation - (params.gamma / eta) * stability
    if diameter_slack is None:
        diameter_slack = kind == OGD
    if diameter_slack:
        rhs += 2.0 * m
    return DrvuReport(lhs <= rhs, lhs, rhs)
