"""Figure rendering for the CLI report path.

Each renderer takes the already-computed records and writes one PNG next to
the delimited output; nothing here feeds back into the data files.
"""

from __future__ import annotations

from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np

__all__ = [
    "render_wave",
    "render_table",
    "render_spectrum",
    "render_diagnostics",
    "render_sweep",
]


def _finish(fig, path: Path) -> Path:
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
    return path


def render_wave(x, phi, dphi, title: str, path: Path) -> Path:
    fig, ax = plt.subplots(figsize=(6.0, 3.6))
    ax.plot(x, phi, label="phi")
    ax.plot(x, dphi, label="phi'", linestyle="--")
    ax.set_xlabel("x")
    ax.set_title(title)
    ax.legend(frameon=False)
    ax.grid(alpha=0.3)
    return _finish(fig, path)


def render_table(rows: list[dict], path: Path) -> Path:
    ok = [r for r in rows if "theta" in r]
    fig, (ax1, ax2) = plt.subplots(1, 2, figsize=(8.0, 3.4))
    ps = [r["p"] for r in ok]
    ax1.plot(ps, [r["theta"] for r in ok], "o-")
    ax1.set_xlabel("p")
    ax1.set_ylabel("theta")
    ax1.grid(alpha=0.3)
    ax2.plot(ps, [r["L0"] for r in ok], "s-", color="tab:orange")
    ax2.set_xlabel("p")
    ax2.set_ylabel("period")
    ax2.grid(alpha=0.3)
    return _finish(fig, path)


def render_spectrum(report: dict, path: Path) -> Path:
    fig, ax = plt.subplots(figsize=(6.0, 3.6))
    groups = [
        ("hill_re", report["hill_re"]["eigenvalues"]),
        ("hill_im", report["hill_im"]["eigenvalues"]),
        ("block_re", report["block_re_eigenvalues"]),
        ("block_im", report["block_im_eigenvalues"]),
    ]
    for i, (label, vals) in enumerate(groups):
        ax.plot(np.full(len(vals), i), vals, "_", markersize=18, label=label)
    ax.axhline(0.0, color="k", linewidth=0.6)
    ax.set_xticks(range(len(groups)), [g[0] for g in groups])
    ax.set_ylabel("eigenvalue")
    ax.grid(alpha=0.3, axis="y")
    return _finish(fig, path)


def render_diagnostics(series: list[dict], path: Path) -> Path:
    t = [d["t"] for d in series]
    fig, (ax1, ax2) = plt.subplots(2, 1, figsize=(6.4, 5.0), sharex=True)
    e0, f0 = series[0]["energy"], series[0]["momentum"]
    ax1.plot(t, [d["energy"] - e0 for d in series], label="energy drift")
    ax1.plot(t, [d["momentum"] - f0 for d in series], label="momentum drift")
    ax1.legend(frameon=False)
    ax1.grid(alpha=0.3)
    ax2.plot(t, [d["rho"] for d in series], color="tab:red")
    ax2.set_ylabel("orbital distance")
    ax2.set_xlabel("t")
    ax2.grid(alpha=0.3)
    return _finish(fig, path)


def render_sweep(records: list[dict], path: Path) -> Path:
    fig, ax = plt.subplots(figsize=(6.4, 3.8))
    cs = [r["c"] for r in records]
    ax.plot(cs, [r["d2"] for r in records], "o-", label="d''(c)")
    ax.axhline(0.0, color="k", linewidth=0.6)
    colors = {"Stable": "tab:green", "UnstableEven": "tab:red", "OutsideTheory": "tab:gray"}
    for r in records:
        ax.axvspan(r["c"] - 1e-3, r["c"] + 1e-3, color=colors[r["verdict"]], alpha=0.4)
    ax.set_xlabel("c")
    ax.set_ylabel("d''")
    ax.legend(frameon=False)
    ax.grid(alpha=0.3)
    return _finish(fig, path)
