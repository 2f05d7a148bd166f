"""Deterministic schedules of payoff matrices ``A_1, ..., A_T``.

``matrix_at(t)`` is a pure function of the schedule and ``t``, so metrics that
need two passes (the averaged matrix for W_T) can replay the sequence.
"""
from __future__ import annotations

import json
import math
from pathlib import Path

import numpy as np

from .matrix_game import DimensionError, PayoffMatrix, best_response_col

KINDS = ("stationary", "two_phase", "appendix_g", "periodic_drift", "file")

MATCHING_PENNIES = np.array([[1.0, -1.0], [-1.0, 1.0]])
FIRST_COLUMN_WINS = np.array([[1.0, -1.0], [1.0, -1.0]])

APPG_A0 = np.array([[0.5, 0.5], [-0.5, -0.5]])
APPG_A1 = np.array([[-1.0, -1.0], [1.0, 1.0]])
APPG_E = np.array([[1 / 3, -0.5], [1 / 3, -0.5]])


def _frozen(a) -> PayoffMatrix:
    return PayoffMatrix(np.asarray(a, dtype=float))


class GameSchedule:
    """Base class; subclasses implement :meth:`_matrix`."""

    kind = ""

    def __init__(self, T: int, shape: tuple[int, int]):
        if T < 1:
            raise ValueError(f"horizon must be positive, got {T}")
        self.T = T
        self.shape = shape
        self.clamped_rounds = 0

    def matrix_at(self, t: int) -> PayoffMatrix:
        if not 1 <= t <= self.T:
            raise IndexError(f"round {t} outside [1, {self.T}]")
        return self._matrix(t)

    def _matrix(self, t: int) -> PayoffMatrix:
        raise NotImplementedError

    def __iter__(self):
        for t in range(1, self.T + 1):
            yield self._matrix(t)

    def average(self) -> np.ndarray:
        """First pass: the averaged matrix ``(1/T) sum_t A_t``."""
        total = np.zeros(self.shape)
        for A in self:
            total += A.entries
        return total / self.T

    def describe(self) -> dict:
        return {"kind": self.kind, "T": self.T}


class Stationary(GameSchedule):
    kind = "stationary"

    def __init__(self, T: int, matrix):
        self.A = matrix if isinstance(matrix, PayoffMatrix) else _frozen(matrix)
        super().__init__(T, self.A.shape)

    def _matrix(self, t):
        return self.A

    def average(self):
        return self.A.entries.copy()

    def describe(self):
        return {**super().describe(), "matrix": self.A.to_json()}


class TwoPhase(GameSchedule):
    """Matching pennies for ``t <= T/2``, then a game where column 1 always wins."""

    kind = "two_phase"

    def __init__(self, T: int):
        super().__init__(T, (2, 2))
        self._first = _frozen(MATCHING_PENNIES)
        self._second = _frozen(FIRST_COLUMN_WINS)

    def _matrix(self, t):
        return self._first if 2 * t <= self.T else self._second


class AppendixG(GameSchedule):
    """Four epochs; each opens with ``T0 = 2 floor(sqrt T)`` rounds alternating
    ``A0 + (-1)^t E``, then plays ``(1/2 + (1/2 - (-1)^t T^{-1/4})) A1``.

    The scaling coefficient reaches ``1 + T^{-1/4}`` on odd rounds; those
    matrices are clamped entrywise to [-1, 1].
    """

    kind = "appendix_g"
    epochs = 4

    def __init__(self, T: int):
        T0 = 2 * math.isqrt(T)
        if T < 64 or T // self.epochs <= T0:
            raise ValueError(f"T={T} too small: each of the 4 epochs must be longer than T0={T0}")
        super().__init__(T, (2, 2))
        self.T0 = T0
        self.boundaries = [k * T // self.epochs for k in range(self.epochs + 1)]
        q = T ** -0.25
        self._phase1 = {0: _frozen(APPG_A0 + APPG_E), 1: _frozen(APPG_A0 - APPG_E)}
        even = (0.5 + (0.5 - q)) * APPG_A1
        odd = np.clip((0.5 + (0.5 + q)) * APPG_A1, -1.0, 1.0)
        self._phase2 = {0: _frozen(even), 1: _frozen(odd)}
        # count of rounds whose matrix was clamped (every odd phase-2 round)
        self.clamped_rounds = sum(self._phase2_odd_count(k) for k in range(self.epochs))

    def _phase2_odd_count(self, k):
        lo = self.boundaries[k] + self.T0 + 1
        hi = self.boundaries[k + 1]
        return (hi + 1) // 2 - lo // 2

    def epoch_start(self, t: int) -> int:
        k = min((t - 1) * self.epochs // self.T, self.epochs - 1)
        while self.boundaries[k] >= t:
            k -= 1
        while self.boundaries[k + 1] < t:
            k += 1
        return self.boundaries[k]

    def in_first_phase(self, t: int) -> bool:
        return t <= self.epoch_start(t) + self.T0

    def _matrix(self, t):
        parity = t & 1
        if self.in_first_phase(t):
            return self._phase1[parity]
        return self._phase2[parity]

    def describe(self):
        return {**super().describe(), "T0": self.T0, "clamped_rounds": self.clamped_rounds}


class PeriodicDrift(GameSchedule):
    """Smooth periodic interpolation ``(1 - w_t) A + w_t B`` with
    ``w_t = (1 - cos(2 pi t / period)) / 2``.

    When ``A`` or ``B`` is omitted it is drawn uniformly from [-1, 1] with ``seed``.
    """

    kind = "periodic_drift"

    def __init__(self, T: int, period: float, A=None, B=None, shape=(2, 2), seed: int = 0):
        rng = np.random.default_rng(seed)
        A = rng.uniform(-1, 1, shape) if A is None else np.asarray(A, dtype=float)
        B = rng.uniform(-1, 1, A.shape) if B is None else np.asarray(B, dtype=float)
        if A.shape != B.shape:
            raise DimensionError(f"endpoint shapes differ: {A.shape} vs {B.shape}")
        if period <= 0:
            raise ValueError("period must be positive")
        super().__init__(T, A.shape)
        self.A, self.B, self.period, self.seed = _frozen(A), _frozen(B), float(period), seed

    def _matrix(self, t):
        w = 0.5 * (1.0 - math.cos(2.0 * math.pi * t / self.period))
        return PayoffMatrix(np.clip((1.0 - w) * self.A.entries + w * self.B.entries, -1.0, 1.0))

    def describe(self):
        return {**super().describe(), "period": self.period, "seed": self.seed,
                "A": self.A.to_json(), "B": self.B.to_json()}


class FileSchedule(GameSchedule):
    """Schedule read from ``{"T": int, "steps": [{"matrix": {...}, "repeat": int}, ...]}``.

    Steps are played in order, each ``repeat`` times (default 1), cycling if the
    steps cover fewer than ``T`` rounds.
    """

    kind = "file"

    def __init__(self, spec: dict, T: int | None = None):
        steps = spec["steps"]
        if not steps:
            raise ValueError("schedule file has no steps")
        mats, reps = [], []
        for step in steps:
            mats.append(PayoffMatrix.from_json(step["matrix"]))
            r = int(step.get("repeat", 1))
            if r < 1:
                raise ValueError(f"repeat must be >= 1, got {r}")
            reps.append(r)
        shape = mats[0].shape
        for M in mats:
            if M.shape != shape:
                raise DimensionError(f"schedule mixes shapes {shape} and {M.shape}")
        super().__init__(int(T if T is not None else spec.get("T", sum(reps))), shape)
        self.matrices = mats
        self.ends = np.cumsum(reps)
        self.period = int(self.ends[-1])

    @classmethod
    def load(cls, path, T: int | None = None) -> "FileSchedule":
        return cls(json.loads(Path(path).read_text()), T)

    def _matrix(self, t):
        r = (t - 1) % self.period
        return self.matrices[int(np.searchsorted(self.ends, r, side="right"))]

    def to_json(self) -> dict:
        starts = np.concatenate([[0], self.ends[:-1]])
        return {"T": self.T, "steps": [{"matrix": M.to_json(), "repeat": int(e - s)}
                                       for M, s, e in zip(self.matrices, starts, self.ends)]}


def appendix_g_schedule(T: int) -> AppendixG:
    return AppendixG(T)


def matrix_at(schedule: GameSchedule, t: int) -> PayoffMatrix:
    return schedule.matrix_at(t)


def adversarial_opponent(x, A) -> np.ndarray:
    """Best-responding column player: the vertex maximizing ``x^T A y``."""
    return best_response_col(A, x)[1]


def build_schedule(spec: dict, T: int, base_dir: Path | None = None) -> GameSchedule:
    """Construct a schedule from its config dictionary."""
    kind = spec.get("kind")
    if kind == "stationary":
        M = spec["matrix"]
        M = PayoffMatrix.from_json(M) if isinstance(M, dict) else _frozen(M)
        return Stationary(T, M)
    if kind == "two_phase":
        return TwoPhase(T)
    if kind == "appendix_g":
        return AppendixG(T)
    if kind == "periodic_drift":
        def mat(key):
            v = spec.get(key)
            if isinstance(v, dict):
                return PayoffMatrix.from_json(v).entries
            return v
        return PeriodicDrift(T, spec.get("period", 1000), mat("A"), mat("B"),
                             tuple(spec.get("shape", (2, 2))), spec.get("seed", 0))
    if kind == "file":
        path = Path(spec["path"])
        if base_dir is not None and not path.is_absolute():
            path = base_dir / path
        return FileSchedule.load(path, T)
    raise ValueError(f"unknown schedule kind {kind!r}; expected one of {KINDS}")
