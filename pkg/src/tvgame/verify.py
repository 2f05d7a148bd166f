"""Seeded verification suites behind ``tvgame verify``."""
from __future__ import annotations

import logging
from dataclasses import dataclass, field

import numpy as np

from .environments import AppendixG, Stationary, TwoPhase, MATCHING_PENNIES
from .harness import RunTrace, simulate
from .learners import KINDS, drvu_check
from .matrix_game import duality_gap, nash_solve
from .oracles import support_enumeration

log = logging.getLogger(__name__)

SUITES = ("drvu", "invariants", "oracle")


@dataclass
class SuiteReport:
    suite: str
    checked: int = 0
    violations: int = 0
    counterexample: dict | None = None
    stats: dict = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return self.violations == 0

    def fail(self, example: dict):
        self.violations += 1
        if self.counterexample is None:
            self.counterexample = example

    def to_dict(self) -> dict:
        return {"suite": self.suite, "passed": self.passed, "checked": self.checked,
                "violations": self.violations, "counterexample": self.counterexample,
                "stats": self.stats}


# --- DRVU -------------------------------------------------------------------

def random_loss_sequence(rng, T: int, m: int) -> np.ndarray:
    """Loss sequences in [-1, 1]^m of three flavours: i.i.d., slowly drifting, switching."""
    flavour = rng.integers(3)
    if flavour == 0:
        return rng.uniform(-1, 1, (T, m))
    if flavour == 1:
        steps = rng.normal(0, 0.05, (T, m))
        return np.clip(rng.uniform(-1, 1, m) + np.cumsum(steps, axis=0), -1, 1)
    G = np.empty((T, m))
    cur = rng.uniform(-1, 1, m)
    for t in range(T):
        if rng.random() < 0.02:
            cur = rng.uniform(-1, 1, m)
        G[t] = cur
    return G


def random_comparators(rng, G: np.ndarray) -> np.ndarray:
    """Comparator sequences: best fixed vertex, per-segment best vertex, or random switching points."""
    T, m = G.shape
    flavour = rng.integers(3)
    if flavour == 0:
        return np.tile(np.eye(m)[np.argmin(G.sum(axis=0))], (T, 1))
    U = np.empty((T, m))
    if flavour == 1:
        bounds = np.sort(rng.choice(np.arange(1, T), size=rng.integers(1, 8), replace=False))
        for seg in np.split(np.arange(T), bounds):
            U[seg] = np.eye(m)[np.argmin(G[seg].sum(axis=0))]
        return U
    cur = rng.dirichlet(np.ones(m))
    for t in range(T):
        if rng.random() < 0.01:
            cur = rng.dirichlet(np.ones(m))
        U[t] = cur
    return U


def drvu_suite(seed: int = 0, instances: int = 100, T: int = 500, m: int = 3,
               etas=(0.01, 0.1)) -> SuiteReport:
    report = SuiteReport("drvu")
    worst = -np.inf
    for i in range(instances):
        rng = np.random.default_rng([seed, i])
        G = random_loss_sequence(rng, T, m)
        U = random_comparators(rng, G)
        for kind in KINDS:
            for eta in etas:
                r = drvu_check(kind, eta, G, U)
                report.checked += 1
                worst = max(worst, r.lhs - r.rhs)
                if not r.holds:
                    report.fail({"instance": i, "kind": kind, "eta": eta, "lhs": r.lhs, "rhs": r.rhs,
                                 "losses": G.tolist(), "comparators": U.tolist()})
    report.stats["max_lhs_minus_rhs"] = float(worst)
    return report


# --- trace invariants ---------------------------------------------------------

def trace_violations(trace: RunTrace, rtol: float = 1e-9) -> list[dict]:
    """Measure orderings on every row: Reg^x, Reg^y, DynNE-Reg <= Dual-Gap; V <= 4W;
    Dual-Gap non-decreasing."""
    out = []
    gap = trace.column("dual_gap")
    slack = rtol * np.maximum(1.0, np.abs(gap))
    for name in ("reg_x", "reg_y", "dyn_ne_reg"):
        bad = np.nonzero(trace.column(name) > gap + slack)[0]
        if bad.size:
            out.append({"trace": trace.label, "check": f"{name} <= dual_gap", "row": int(bad[0]),
                        "t": int(trace.rows[bad[0]][0])})
    v, w = trace.column("v_t"), trace.column("w_t")
    bad = np.nonzero(v > 4 * w + rtol * np.maximum(1.0, v))[0]
    if bad.size:
        out.append({"trace": trace.label, "check": "V <= 4W", "row": int(bad[0])})
    bad = np.nonzero(np.diff(gap) < -slack[1:])[0]
    if bad.size:
        out.append({"trace": trace.label, "check": "dual_gap non-decreasing", "row": int(bad[0]) + 1})
    return out


def invariant_scenarios(scale: float = 1.0):
    """Desk-scale versions of the acceptance scenarios."""
    T = max(int(10_000 * scale), 64)
    Tg = max(int(20_000 * scale), 4096)
    two = {"algorithm": "two_layer"}
    oracle = {"algorithm": "nash_oracle"}
    return [
        ("two_phase_nash", TwoPhase(T), oracle, oracle),
        ("stationary_two_layer", Stationary(T, MATCHING_PENNIES), two, two),
        ("stationary_skewed_two_layer", Stationary(T, [[0.5, -1.0], [-0.3, 0.8]]), two, two),
        ("appendix_g_two_layer", AppendixG(Tg), two, two),
        ("appendix_g_adversary", AppendixG(Tg), two, {"algorithm": "adversarial_best_response"}),
        ("appendix_g_single", AppendixG(Tg), {"algorithm": "single_base", "eta": 0.05},
         {"algorithm": "single_base", "eta": 0.05}),
    ]


def invariants_suite(seed: int = 0, scale: float = 1.0, traces=None) -> SuiteReport:
    report = SuiteReport("invariants")
    if traces is None:
        traces = [simulate(s, xs, ys, stride=50, label=name)
                  for name, s, xs, ys in invariant_scenarios(scale)]
    for tr in traces:
        report.checked += 1
        for v in trace_violations(tr):
            report.fail(v)
    report.stats["traces"] = [tr.label for tr in traces]
    return report


# --- LP oracle ------------------------------------------------------------------

def oracle_suite(seed: int = 0, count: int = 1000, value_tol: float = 1e-6,
                 saddle_tol: float = 1e-8) -> SuiteReport:
    report = SuiteReport("oracle")
    rng = np.random.default_rng(seed)
    worst_value = worst_gap = 0.0
    for i in range(count):
        m, n = rng.integers(2, 6, size=2)
        A = rng.uniform(-1, 1, (m, n))
        sol = nash_solve(A)
        ref = support_enumeration(A)
        dv = abs(sol.value - ref.value)
        gap = duality_gap(A, sol.x_star, sol.y_star)
        worst_value = max(worst_value, dv)
        worst_gap = max(worst_gap, gap)
        report.checked += 1
        if dv > value_tol or gap > saddle_tol:
            report.fail({"index": i, "matrix": A.tolist(), "lp_value": sol.value,
                         "oracle_value": ref.value, "gap": gap})
    report.stats.update(max_value_diff=worst_value, max_saddle_gap=worst_gap)
    return report


def run_suite(name: str, seed: int = 0) -> SuiteReport:
    if name == "drvu":
        return drvu_suite(seed)
    if name == "invariants":
        return invariants_suite(seed)
    if name == "oracle":
        return oracle_suite(seed)
    raise ValueError(f"unknown suite {name!r}; expected one of {SUITES}")
