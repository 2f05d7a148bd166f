"""Line-chart figures for run traces and sweeps (matplotlib, written as SVG)."""
from __future__ import annotations

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402

from .harness import MEASURES  # noqa: E402

TITLES = {
    "individual_regret": "individual regret",
    "dyn_ne_reg": "dynamic NE-regret",
    "dual_gap": "duality gap",
}

# svg output must be reproducible byte for byte
plt.rcParams["svg.hashsalt"] = "tvgame"
plt.rcParams["svg.fonttype"] = "none"
_META = {"Date": None, "Creator": None}


def _axes(n=3, width=4.0, height=3.2):
    fig, axes = plt.subplots(1, n, figsize=(width * n, height))
    return fig, axes


def plot_run(trace, path):
    """Three panels: the three performance measures against t."""
    t = trace.column("t")
    fig, axes = _axes()
    for ax, (name, f) in zip(axes, MEASURES.items()):
        ax.plot(t, f(trace), color="tab:red", lw=1.4)
        ax.set_title(TITLES[name])
        ax.set_xlabel("t")
        ax.grid(alpha=0.3)
    fig.tight_layout()
    fig.savefig(path, metadata=_META)
    plt.close(fig)


def plot_sweep(traces, summary, path, reference="two_layer"):
    """Step-size comparison: on every panel, the two-layer curve against
    the single-step-size learner that wins each measure."""
    fig, axes = _axes()
    winners = {name: summary["measures"][name]["best_single"] for name in MEASURES}
    styles = ["--", ":", "-."]
    for ax, (name, f) in zip(axes, MEASURES.items()):
        ref = traces[reference]
        ax.plot(ref.column("t"), f(ref), color="tab:red", lw=1.6, label="two-layer")
        for style, (wname, lab) in zip(styles, winners.items()):
            tr = traces[lab]
            eta = tr.info.get("eta")
            ax.plot(tr.column("t"), f(tr), ls=style, lw=1.2,
                    label=f"best tuning ({TITLES[wname]}), eta={eta:.3g}")
        ax.set_title(TITLES[name])
        ax.set_xlabel("t")
        ax.grid(alpha=0.3)
    axes[0].legend(fontsize=7, loc="upper left")
    fig.tight_layout()
    fig.savefig(path, metadata=_META)
    plt.close(fig)
