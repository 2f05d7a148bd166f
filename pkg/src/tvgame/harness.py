"""Simulation loop, run configuration and step-size sweeps."""
from __future__ import annotations

import json
import logging
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field
from pathlib import Path

import numpy as np

from .environments import GameSchedule, build_schedule
from .learners import HEDGE, KINDS, drvu_params_for, make_learner
from .matrix_game import DimensionError, as_strategy, best_response_col
from .meta import MetaLearner, StepSizePool
from .metrics import MetricsAccumulator, NashCache

log = logging.getLogger(__name__)

COLUMNS = ("t", "reg_x", "reg_y", "dyn_ne_reg", "ne_reg", "dual_gap", "p_t", "v_t", "w_t",
           "eps_x", "eps_y", "meta_entropy_x", "meta_entropy_y")

X_ALGORITHMS = ("two_layer", "single_base", "fixed_strategy", "nash_oracle")
Y_ALGORITHMS = X_ALGORITHMS + ("adversarial_best_response",)


class ConfigError(ValueError):
    pass


# --- players ----------------------------------------------------------------
#
# decide(A, x) gets the round matrix and (for the y side) x's decision; only
# the oracle players look at them. feed(g) delivers the loss vector: A y for
# the x side, -A^T x for the y side.

class TwoLayerPlayer:
    def __init__(self, k, T, base=HEDGE, c=0.5):
        self.meta = MetaLearner(k, T, base, c)
        self.eps = math.nan

    def decide(self, A, x=None):
        self.eps = self.meta.eps
        return self.meta.decide()

    def feed(self, g):
        self.meta.feed(g)

    def entropy(self):
        return self.meta.weight_entropy()


class SingleBasePlayer:
    def __init__(self, k, T, eta, base=HEDGE):
        self.learner = make_learner(base, k, [eta], T=T)
        self.h = np.zeros(k)
        self.eps = math.nan

    def decide(self, A, x=None):
        return self.learner.predict(self.h)[0]

    def feed(self, g):
        self.learner.update(g)
        self.h = g

    def entropy(self):
        return math.nan


class FixedPlayer:
    def __init__(self, strategy):
        self.strategy = as_strategy(strategy, tol=1e-9)
        self.eps = math.nan

    def decide(self, A, x=None):
        return self.strategy

    def feed(self, g):
        pass

    def entropy(self):
        return math.nan


class NashOraclePlayer:
    """Plays its side of the (canonical) equilibrium of the current matrix."""

    def __init__(self, side, cache):
        self.side = side
        self.cache = cache
        self.eps = math.nan

    def decide(self, A, x=None):
        ne = self.cache(A)
        return ne.x_star if self.side == "x" else ne.y_star

    def feed(self, g):
        pass

    def entropy(self):
        return math.nan


class BestResponsePlayer:
    """Column player that best-responds to the x-player's realized decision."""

    eps = math.nan

    def decide(self, A, x=None):
        return best_response_col(A, x)[1]

    def feed(self, g):
        pass

    def entropy(self):
        return math.nan


def make_player(spec: dict, side: str, k: int, T: int, c: float, cache: NashCache):
    algo = spec.get("algorithm")
    allowed = X_ALGORITHMS if side == "x" else Y_ALGORITHMS
    if algo not in allowed:
        raise ConfigError(f"{side}-player algorithm {algo!r} not in {allowed}")
    base = spec.get("base", HEDGE)
    if algo in ("two_layer", "single_base") and base not in KINDS:
        raise ConfigError(f"unknown base learner {base!r}")
    if algo == "two_layer":
        return TwoLayerPlayer(k, T, base, spec.get("c", c))
    if algo == "single_base":
        if "eta" not in spec:
            raise ConfigError("single_base needs 'eta'")
        return SingleBasePlayer(k, T, float(spec["eta"]), base)
    if algo == "fixed_strategy":
        s = np.asarray(spec["strategy"], dtype=float)
        if s.shape != (k,):
            raise DimensionError(f"fixed strategy has length {s.size}, {side}-player has {k} actions")
        return FixedPlayer(s)
    if algo == "nash_oracle":
        return NashOraclePlayer(side, cache)
    return BestResponsePlayer()


# --- config -----------------------------------------------------------------

@dataclass
class RunConfig:
    schedule: dict
    x_player: dict
    y_player: dict
    T: int = 10_000
    stride: int = 100
    out: str | None = None
    c: float = 0.5
    seed: int = 0
    plot: bool = True
    name: str = "run"
    etas: list | None = None
    workers: int = 1

    def __post_init__(self):
        if not isinstance(self.schedule, dict) or "kind" not in self.schedule:
            raise ConfigError("schedule must be an object with a 'kind'")
        for side, spec in (("x", self.x_player), ("y", self.y_player)):
            if not isinstance(spec, dict) or "algorithm" not in spec:
                raise ConfigError(f"{side}_player must be an object with an 'algorithm'")
        self.T = int(self.T)
        self.stride = int(self.stride)
        if self.T < 2:
            raise ConfigError(f"T must be >= 2, got {self.T}")
        if self.stride < 1:
            raise ConfigError(f"stride must be >= 1, got {self.stride}")

    @classmethod
    def from_dict(cls, d: dict, **overrides) -> "RunConfig":
        d = {**d, **{k: v for k, v in overrides.items() if v is not None}}
        known = set(cls.__dataclass_fields__)
        unknown = set(d) - known
        if unknown:
            raise ConfigError(f"unknown config fields: {sorted(unknown)}")
        try:
            return cls(**d)
        except TypeError as e:
            raise ConfigError(str(e)) from e

    @classmethod
    def load(cls, path, **overrides) -> "RunConfig":
        try:
            d = json.loads(Path(path).read_text())
        except (OSError, json.JSONDecodeError) as e:
            raise ConfigError(f"cannot read config {path}: {e}") from e
        if not isinstance(d, dict):
            raise ConfigError("config file must hold a JSON object")
        cfg = cls.from_dict(d, **overrides)
        cfg._base_dir = Path(path).resolve().parent
        return cfg

    def to_dict(self) -> dict:
        return asdict(self)


# --- trace ------------------------------------------------------------------

@dataclass
class RunTrace:
    rows: list = field(default_factory=list)
    label: str = ""
    info: dict = field(default_factory=dict)

    columns = COLUMNS

    def column(self, name: str) -> np.ndarray:
        i = COLUMNS.index(name)
        return np.array([r[i] for r in self.rows])

    @property
    def final(self) -> dict:
        return dict(zip(COLUMNS, self.rows[-1]))

    def to_csv(self, path) -> None:
        lines = [",".join(COLUMNS)]
        for r in self.rows:
            lines.append(",".join([str(r[0])] + [f"{v:.12g}" for v in r[1:]]))
        Path(path).write_text("\n".join(lines) + "\n")

    @classmethod
    def from_csv(cls, path) -> "RunTrace":
        lines = Path(path).read_text().splitlines()
        if tuple(lines[0].split(",")) != COLUMNS:
            raise ValueError(f"unexpected CSV header in {path}")
        rows = []
        for line in lines[1:]:
            parts = line.split(",")
            rows.append((int(parts[0]), *map(float, parts[1:])))
        return cls(rows, Path(path).stem)


def individual_regret(trace: RunTrace) -> np.ndarray:
    return np.maximum(trace.column("reg_x"), trace.column("reg_y"))


MEASURES = {
    "individual_regret": individual_regret,
    "dyn_ne_reg": lambda tr: tr.column("dyn_ne_reg"),
    "dual_gap": lambda tr: tr.column("dual_gap"),
}


# --- simulation -------------------------------------------------------------

def simulate(schedule: GameSchedule, x_spec: dict, y_spec: dict, stride: int = 100,
             c: float = 0.5, cache: NashCache | None = None, label: str = "") -> RunTrace:
    """Play ``schedule`` to its horizon: x decides, y decides, the matrix is
    revealed, both players are fed, metrics advance."""
    T = schedule.T
    m, n = schedule.shape
    cache = cache or NashCache()
    xp = make_player(x_spec, "x", m, T, c, cache)
    yp = make_player(y_spec, "y", n, T, c, cache)
    acc = MetricsAccumulator((m, n), schedule.average(), cache)
    trace = RunTrace(label=label)
    for t in range(1, T + 1):
        A = schedule.matrix_at(t)
        x = xp.decide(A)
        y = yp.decide(A, x)
        eps_x, eps_y = xp.eps, yp.eps
        a = A.entries
        xp.feed(a @ y)
        yp.feed(-(x @ a))
        acc.step(A, x, y)
        if t % stride == 0 or t == T:
            s = acc.snapshot()
            trace.rows.append((t, s.reg_x, s.reg_y, s.dyn_ne_reg, s.ne_reg, s.dual_gap,
                               s.p_t, s.v_t, s.w_t, eps_x, eps_y, xp.entropy(), yp.entropy()))
    trace.info = {"schedule": schedule.describe(), "ne_solves": cache.solves}
    return trace


def run(config: RunConfig) -> RunTrace:
    schedule = build_schedule(config.schedule, config.T, getattr(config, "_base_dir", None))
    trace = simulate(schedule, config.x_player, config.y_player, config.stride, config.c,
                     label=config.name)
    if config.out:
        out = Path(config.out)
        out.mkdir(parents=True, exist_ok=True)
        trace.to_csv(out / f"{config.name}.csv")
        (out / f"{config.name}.info.json").write_text(json.dumps(trace.info, indent=2, sort_keys=True) + "\n")
        if config.plot:
            from .plotting import plot_run
            plot_run(trace, out / f"{config.name}.svg")
    return trace


# --- sweeps -----------------------------------------------------------------

def default_etas(T: int, base: str = HEDGE, c: float = 0.5, k: int = 2) -> list[float]:
    """The two-layer algorithm's own step-size pool."""
    return [float(e) for e in StepSizePool.build(T, drvu_params_for(base, k, T), c).etas]


def _label(eta: float) -> str:
    return f"eta_{eta:.6g}"


def _sweep_job(args):
    schedule_spec, T, x_spec, y_spec, stride, c, label, base_dir = args
    schedule = build_schedule(schedule_spec, T, base_dir)
    return simulate(schedule, x_spec, y_spec, stride, c, label=label)


@dataclass
class SweepResult:
    traces: dict
    summary: dict


def summarize(traces: dict, reference: str = "two_layer") -> dict:
    """Per measure: the best single step size, its final value, the two-layer
    final value and their ratio; plus how each measure's winner fares elsewhere."""
    singles = {k: v for k, v in traces.items() if k != reference}
    out = {"measures": {}, "winners": {}}
    finals = {lab: {name: float(f(tr)[-1]) for name, f in MEASURES.items()} for lab, tr in traces.items()}
    for name in MEASURES:
        best = min(singles, key=lambda lab: (finals[lab][name], lab))
        bv, rv = finals[best][name], finals[reference][name]
        out["measures"][name] = {
            "best_single": best,
            "best_eta": singles[best].info.get("eta"),
            "best_value": bv,
            "two_layer_value": rv,
            "ratio": rv / bv if bv != 0 else (0.0 if rv == 0 else math.inf),
        }
    for name, entry in out["measures"].items():
        lab = entry["best_single"]
        out["winners"][name] = {
            other: (finals[lab][other] / finals[reference][other]
                    if finals[reference][other] != 0 else math.inf)
            for other in MEASURES if other != name
        }
    out["finals"] = finals
    return out


def sweep(config: RunConfig) -> SweepResult:
    """Self-play with every single step size in ``config.etas`` plus the
    two-layer algorithm, all on the same schedule."""
    base = config.x_player.get("base", HEDGE)
    schedule = build_schedule(config.schedule, config.T, getattr(config, "_base_dir", None))
    etas = config.etas or default_etas(config.T, base, config.c, schedule.shape[0])
    base_dir = getattr(config, "_base_dir", None)
    jobs = []
    for eta in etas:
        spec = {"algorithm": "single_base", "eta": float(eta), "base": base}
        jobs.append((config.schedule, config.T, spec, spec, config.stride, config.c, _label(eta), base_dir))
    two = {"algorithm": "two_layer", "base": base}
    jobs.append((config.schedule, config.T, two, two, config.stride, config.c, "two_layer", base_dir))

    if config.workers > 1:
        with ProcessPoolExecutor(config.workers) as pool:
            results = list(pool.map(_sweep_job, jobs))
    else:
        results = [_sweep_job(j) for j in jobs]
    traces = {}
    for job, tr in zip(jobs, results):
        if job[6] != "two_layer":
            tr.info["eta"] = job[2]["eta"]
        traces[tr.label] = tr
        log.info("finished %s", tr.label)
    summary = summarize(traces)
    summary["T"] = config.T
    summary["etas"] = [float(e) for e in etas]
    summary["schedule"] = schedule.describe()

    if config.out:
        out = Path(config.out)
        out.mkdir(parents=True, exist_ok=True)
        for lab, tr in traces.items():
            tr.to_csv(out / f"{lab}.csv")
        (out / "summary.json").write_text(json.dumps(summary, indent=2, sort_keys=True) + "\n")
        if config.plot:
            from .plotting import plot_sweep
            plot_sweep(traces, summary, out / "comparison.svg")
    return SweepResult(traces, summary)
