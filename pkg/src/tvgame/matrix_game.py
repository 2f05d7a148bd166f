"""Zero-sum matrix game primitives.

The row player (x) minimizes ``x^T A y``, the column player (y) maximizes it.
Mixed strategies are plain 1-D float arrays; :func:`as_strategy` validates them.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field

import numpy as np

SIMPLEX_TOL = 1e-12
SOLVER_TOL = 1e-9


class DimensionError(ValueError):
    """Shapes of a matrix and a strategy (or of consecutive rounds) disagree."""


class SolverError(RuntimeError):
    """The LP solver failed to terminate or produced an infeasible answer."""


@dataclass(frozen=True)
class PayoffMatrix:
    """Dense m x n payoff matrix.

    ``bounded=True`` (the default) enforces entries in [-1, 1], the per-round
    game model. Cumulative matrices are built with :meth:`unbounded`.
    """

    entries: np.ndarray
    bounded: bool = field(default=True, compare=False)

    def __post_init__(self):
        a = np.array(self.entries, dtype=float)
        if a.ndim != 2 or a.shape[0] < 1 or a.shape[1] < 1:
            raise DimensionError(f"payoff matrix must be 2-D and non-empty, got shape {a.shape}")
        if not np.all(np.isfinite(a)):
            raise ValueError("payoff matrix has non-finite entries")
        if self.bounded and np.abs(a).max() > 1.0:
            raise ValueError(f"payoff entries must lie in [-1, 1], max |a| = {np.abs(a).max()}")
        a.setflags(write=False)
        object.__setattr__(self, "entries", a)

    @classmethod
    def unbounded(cls, entries) -> "PayoffMatrix":
        return cls(entries, bounded=False)

    @property
    def rows(self) -> int:
        return self.entries.shape[0]

    @property
    def cols(self) -> int:
        return self.entries.shape[1]

    @property
    def shape(self) -> tuple[int, int]:
        return self.entries.shape

    def key(self) -> bytes:
        """Exact byte key, used for NE caching."""
        return self.entries.shape[0].to_bytes(4, "little") + self.entries.tobytes()

    def to_json(self) -> dict:
        return {"rows": self.rows, "cols": self.cols, "entries": self.entries.tolist()}

    @classmethod
    def from_json(cls, obj, bounded: bool = True) -> "PayoffMatrix":
        if isinstance(obj, str):
            obj = json.loads(obj)
        entries = np.asarray(obj["entries"], dtype=float)
        if entries.shape != (obj["rows"], obj["cols"]):
            raise DimensionError(
                f"declared shape ({obj['rows']}, {obj['cols']}) does not match entries {entries.shape}"
            )
        return cls(entries, bounded=bounded)

    def __eq__(self, other):
        if not isinstance(other, PayoffMatrix):
            return NotImplemented
        return self.shape == other.shape and np.array_equal(self.entries, other.entries)

    def __hash__(self):
        return hash(self.key())


@dataclass(frozen=True)
class NashSolution:
    x_star: np.ndarray
    y_star: np.ndarray
    value: float


def _entries(A) -> np.ndarray:
    return A.entries if isinstance(A, PayoffMatrix) else np.asarray(A, dtype=float)


def as_strategy(w, dim: int | None = None, tol: float = SIMPLEX_TOL) -> np.ndarray:
    """Validate ``w`` as a point of the probability simplex and return it as an array."""
    w = np.asarray(w, dtype=float)
    if w.ndim != 1 or w.size < 1:
        raise DimensionError(f"strategy must be a non-empty vector, got shape {w.shape}")
    if dim is not None and w.size != dim:
        raise DimensionError(f"strategy has dimension {w.size}, expected {dim}")
    if not np.all(np.isfinite(w)):
        raise ValueError("strategy has non-finite weights")
    if w.min() < -tol or abs(w.sum() - 1.0) > tol:
        raise ValueError(f"not a probability vector (min={w.min()}, sum={w.sum()})")
    return w


def basis_vector(k: int, j: int) -> np.ndarray:
    e = np.zeros(k)
    e[j] = 1.0
    return e


def _check_dims(a: np.ndarray, x=None, y=None):
    if x is not None and len(x) != a.shape[0]:
        raise DimensionError(f"x has dimension {len(x)}, matrix has {a.shape[0]} rows")
    if y is not None and len(y) != a.shape[1]:
        raise DimensionError(f"y has dimension {len(y)}, matrix has {a.shape[1]} columns")


def payoff(A, x, y) -> float:
    """Expected loss ``x^T A y`` of the row player."""
    a = _entries(A)
    _check_dims(a, x, y)
    return float(np.asarray(x) @ a @ np.asarray(y))


def loss_vector(A, y) -> np.ndarray:
    """Row player's loss vector ``A y``."""
    a = _entries(A)
    _check_dims(a, y=y)
    return a @ np.asarray(y, dtype=float)


def reward_vector(A, x) -> np.ndarray:
    """Column player's reward vector ``x^T A``."""
    a = _entries(A)
    _check_dims(a, x=x)
    return np.asarray(x, dtype=float) @ a


def duality_gap(A, x, y) -> float:
    """``max_y' x^T A y' - min_x' x'^T A y``; zero exactly at a Nash equilibrium."""
    a = _entries(A)
    _check_dims(a, x, y)
    return float((np.asarray(x) @ a).max() - (a @ np.asarray(y)).min())


def best_response_row(A, y) -> tuple[int, np.ndarray]:
    """Vertex minimizing ``x^T A y``; ties go to the lowest index."""
    a = _entries(A)
    _check_dims(a, y=y)
    i = int(np.argmin(a @ np.asarray(y)))
    return i, basis_vector(a.shape[0], i)


def best_response_col(A, x) -> tuple[int, np.ndarray]:
    """Vertex maximizing ``x^T A y``; ties go to the lowest index."""
    a = _entries(A)
    _check_dims(a, x=x)
    j = int(np.argmax(np.asarray(x) @ a))
    return j, basis_vector(a.shape[1], j)


def simplex_project(v) -> np.ndarray:
    """Euclidean projection onto the probability simplex (sort-and-threshold)."""
    v = np.asarray(v, dtype=float)
    if v.ndim != 1 or v.size == 0:
        raise DimensionError(f"expected a non-empty vector, got shape {v.shape}")
    if not np.isfinite(v).all():
        raise ValueError("cannot project a non-finite vector")
    return project_unchecked(v)


_RANKS = {}


def project_unchecked(v: np.ndarray) -> np.ndarray:
    """:func:`simplex_project` without input validation, for inner loops."""
    k = v.size
    ind = _RANKS.get(k)
    if ind is None:
        ind = _RANKS[k] = np.arange(1.0, k + 1.0)
    u = np.sort(v)[::-1]
    css = u.cumsum() - 1.0
    rho = k - 1 - (u - css / ind > 0)[::-1].argmax()
    p = v - css[rho] / (rho + 1.0)
    p[p < 0.0] = 0.0
    return p / p.sum()


# --- LP --------------------------------------------------------------------

def _bland_simplex(M: np.ndarray, max_iter: int = 10_000):
    """Maximize ``1^T z`` s.t. ``M z <= 1, z >= 0`` with Bland's rule.

    Returns ``(z, w)`` where ``w`` holds the dual prices of the constraints.
    The origin is feasible, so no phase 1 is needed.
    """
    r, c = M.shape
    # columns: c structural vars, then r slacks; last column is the rhs
    tab = np.zeros((r + 1, c + r + 1))
    tab[:r, :c] = M
    tab[:r, c:c + r] = np.eye(r)
    tab[:r, -1] = 1.0
    tab[r, :c] = -1.0  # objective row holds reduced costs (negative = improving)
    basis = list(range(c, c + r))

    for _ in range(max_iter):
        improving = np.nonzero(tab[r, :-1] < -SOLVER_TOL)[0]
        if improving.size == 0:
            break
        col = int(improving[0])
        column = tab[:r, col]
        rows = np.nonzero(column > SOLVER_TOL)[0]
        if rows.size == 0:
            raise SolverError("LP unbounded; payoff matrix must be strictly positive after shift")
        ratios = tab[rows, -1] / column[rows]
        best = ratios.min()
        ties = rows[ratios <= best + SOLVER_TOL * max(1.0, abs(best))]
        row = int(min(ties, key=lambda i: basis[i]))
        tab[row] /= tab[row, col]
        for i in range(r + 1):
            if i != row and tab[i, col] != 0.0:
                tab[i] -= tab[i, col] * tab[row]
        basis[row] = col
    else:
        raise SolverError(f"simplex did not terminate in {max_iter} pivots")

    z = np.zeros(c)
    for i, b in enumerate(basis):
        if b < c:
            z[b] = tab[i, -1]
    w = tab[r, c:c + r].copy()
    return z, w


def _clean(w: np.ndarray) -> np.ndarray:
    w = np.where(w < 0.0, 0.0, w)
    return w / w.sum()


def nash_solve(A) -> NashSolution:
    """Exact Nash equilibrium of a zero-sum game via the classic LP reduction.

    Entries are shifted so the smallest becomes 1, making the game value
    strictly positive; the row player's LP is then
    ``max 1^T z  s.t.  A'^T z <= 1, z >= 0`` with ``x = z / 1^T z`` and the
    column player's strategy read off the dual prices.
    """
    a = _entries(A)
    if a.ndim != 2 or min(a.shape) < 1:
        raise DimensionError(f"bad matrix shape {a.shape}")
    shift = 1.0 - a.min()
    z, w = _bland_simplex((a + shift).T)
    if z.sum() <= 0 or w.sum() <= 0:
        raise SolverError("degenerate LP solution")
    x = _clean(z)
    y = _clean(w)
    value = float(x @ a @ y)
    tol = 1e-9 * max(1.0, np.abs(a).max())
    if (x @ a).max() > value + tol or (a @ y).min() < value - tol:
        raise SolverError("LP solution fails the saddle-point check")
    return NashSolution(x, y, value)


def game_value(A) -> float:
    return nash_solve(A).value
