"""Figures written next to the CSV output of ``bench-nf`` and ``attack-sweep``."""

from __future__ import annotations

import math

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402

STYLE = {
    "font.size": 9,
    "axes.labelsize": 9,
    "legend.fontsize": 8,
    "xtick.labelsize": 8,
    "ytick.labelsize": 8,
    "axes.spines.top": False,
    "axes.spines.right": False,
    "savefig.dpi": 150,
}


def _figure(ncols=1):
    with plt.rc_context(STYLE):
        fig, axes = plt.subplots(1, ncols, figsize=(3.4 * ncols, 2.8), squeeze=False)
    return fig, axes[0]


def _save(fig, path):
    with plt.rc_context(STYLE):
        fig.tight_layout()
        fig.savefig(path)
    plt.close(fig)


def plot_bench(rows: list[dict], path: str) -> None:
    n = [r["length"] for r in rows]
    c = [r["letter_visits"] / (r["length"] * math.log2(r["length"])) for r in rows]
    secs = [r["nanoseconds"] / 1e9 for r in rows]
    fig, (ax1, ax2) = _figure(2)
    ax1.semilogx(n, c, "o-", base=2, color="k")
    ax1.set_xlabel("word length n")
    ax1.set_ylabel(r"$V(n) / (n \log_2 n)$")
    ax1.set_ylim(bottom=0)
    ax2.loglog(n, secs, "s-", base=2, color="tab:blue", label="measured")
    ref = [secs[0] * (x * math.log2(x)) / (n[0] * math.log2(n[0])) for x in n]
    ax2.loglog(n, ref, "--", base=2, color="0.5", label=r"$\propto n \log n$")
    ax2.set_xlabel("word length n")
    ax2.set_ylabel("seconds")
    ax2.legend(frameon=False)
    _save(fig, path)


def plot_sweep(summary: list[dict], path: str) -> None:
    labels = [f"s={r['s']}\nM={r['M']}" for r in summary]
    x = range(len(summary))
    fig, (ax1, ax2) = _figure(2)
    ax1.bar(x, [r["success_rate"] for r in summary], color="0.3")
    ax1.set_xticks(list(x), labels)
    ax1.set_ylim(0, 1.05)
    ax1.set_ylabel("attack success rate")
    ax2.bar(x, [r["growth_exponent"] for r in summary], color="tab:red")
    ax2.set_xticks(list(x), labels)
    ax2.set_ylabel("frontier growth exponent")
    _save(fig, path)
