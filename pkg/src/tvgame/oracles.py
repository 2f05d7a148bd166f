"""Independent brute-force checks used by the verification suites."""
from __future__ import annotations

from itertools import combinations

import numpy as np

from .matrix_game import NashSolution


def support_enumeration(A, tol: float = 1e-9) -> NashSolution:
    """Nash equilibrium by enumerating equal-size support pairs.

    For each pair ``(I, J)`` with ``|I| = |J|`` the indifference system
    ``x_I^T A_IJ = v 1, sum x = 1`` and ``A_IJ y_J = v 1, sum y = 1`` is solved;
    the first solution that is nonnegative and survives every pure deviation
    is returned. Covers every nondegenerate game.
    """
    a = np.asarray(A.entries if hasattr(A, "entries") else A, dtype=float)
    m, n = a.shape
    for k in range(1, min(m, n) + 1):
        for I in combinations(range(m), k):
            for J in combinations(range(n), k):
                sub = a[np.ix_(I, J)]
                M = np.zeros((k + 1, k + 1))
                M[:k, :k] = sub
                M[:k, k] = -1.0
                M[k, :k] = 1.0
                rhs = np.zeros(k + 1)
                rhs[k] = 1.0
                Mx = M.copy()
                Mx[:k, :k] = sub.T
                try:
                    ys = np.linalg.solve(M, rhs)
                    xs = np.linalg.solve(Mx, rhs)
                except np.linalg.LinAlgError:
                    continue
                yJ, v1 = ys[:k], ys[k]
                xI, v2 = xs[:k], xs[k]
                if yJ.min() < -tol or xI.min() < -tol or abs(v1 - v2) > 1e-7:
                    continue
                x = np.zeros(m)
                y = np.zeros(n)
                x[list(I)] = np.clip(xI, 0.0, None)
                y[list(J)] = np.clip(yJ, 0.0, None)
                x /= x.sum()
                y /= y.sum()
                v = float(x @ a @ y)
                if (x @ a).max() <= v + 1e-7 and (a @ y).min() >= v - 1e-7:
                    return NashSolution(x, y, v)
    raise ArithmeticError("no equilibrium on equal-size supports (degenerate game)")
