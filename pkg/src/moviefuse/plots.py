"""Figure rendering for the evaluation reports."""

from __future__ import annotations

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt

# keep output byte-stable across runs
_SAVEFIG = dict(dpi=100, metadata={"Software": None})


def sweep_figure(rows, path) -> None:
    """Average hit counts at Top-5/Top-10 against the sentiment weight."""
    omegas = [r.omega2 for r in rows]
    fig, ax = plt.subplots(figsize=(6, 4))
    ax.plot(omegas, [r.hit5 for r in rows], "o-", label="Top-5")
    ax.plot(omegas, [r.hit10 for r in rows], "s-", label="Top-10")
    ax.set_xlabel("sentiment similarity weight $\\omega_2$")
    ax.set_ylabel("average hits")
    ax.set_title("Top-N hits vs. fusion weight")
    ax.grid(True, alpha=0.3)
    ax.legend()
    fig.tight_layout()
    fig.savefig(path, **_SAVEFIG)
    plt.close(fig)


def comparison_figure(baselines: dict[str, tuple[float, float]], path) -> None:
    """Grouped bars of average Top-5/Top-10 hits per model."""
    names = list(baselines)
    top5 = [baselines[n][0] for n in names]
    top10 = [baselines[n][1] for n in names]
    x = range(len(names))
    width = 0.35
    fig, ax = plt.subplots(figsize=(6, 4))
    ax.bar([i - width / 2 for i in x], top5, width, label="Top-5")
    ax.bar([i + width / 2 for i in x], top10, width, label="Top-10")
    ax.set_xticks(list(x))
    ax.set_xticklabels(names)
    ax.set_ylabel("average hits")
    ax.set_title("Model comparison")
    ax.legend()
    fig.tight_layout()
    fig.savefig(path, **_SAVEFIG)
    plt.close(fig)
