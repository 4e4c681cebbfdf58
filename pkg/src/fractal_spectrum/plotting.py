"""Optional figures for CLI reports.

matplotlib is imported lazily and only here, so the numerical core runs
without it.  Install the ``plot`` extra to enable ``--figure``.
"""

from __future__ import annotations

import numpy as np


def _pyplot():
    try:
        import matplotlib
    except ImportError as exc:
        raise RuntimeError("figures need matplotlib (pip install 'artifact[plot]')") from exc
    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    return plt


def _save(fig, path) -> None:
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    fig.clf()
    import matplotlib.pyplot as plt

    plt.close(fig)


def density_figure(density, path, title: str = "Fejer density") -> None:
    plt = _pyplot()
    fig, ax = plt.subplots(figsize=(7, 3.5))
    ax.plot(density.theta, density.values, lw=1.0)
    ax.axhline(0.0, color="0.6", lw=0.5)
    ax.set_xlabel("theta")
    ax.set_ylabel(f"f_N (N={density.N})")
    ax.set_title(title)
    _save(fig, path)


def rn_figure(estimate, path) -> None:
    plt = _pyplot()
    fig, ax = plt.subplots(figsize=(7, 3.5))
    ax.plot(estimate.theta, estimate.ratio, lw=1.0)
    ax.set_xlabel("theta")
    ax.set_ylabel("density ratio")
    ax.set_title(f"Radon-Nikodym estimate (floor {estimate.floor:.2e})")
    _save(fig, path)


def umatrix_figure(um, path) -> None:
    plt = _pyplot()
    fig, ax = plt.subplots(figsize=(5, 5))
    im = ax.imshow(np.abs(um.matrix), cmap="viridis", aspect="auto")
    fig.colorbar(im, ax=ax, label="|<e_xi, U e_gamma>|")
    ax.set_xlabel(f"gamma (depth {um.column_depth})")
    ax.set_ylabel(f"xi (depth {um.depth})")
    _save(fig, path)


def cylinder_figure(report, path) -> None:
    plt = _pyplot()
    depth = report.depth
    fig, axes = plt.subplots(depth + 1, 1, figsize=(7, 1.2 * (depth + 1)), squeeze=False)
    for length in range(depth + 1):
        ax = axes[length, 0]
        words = [w for w in report.masses if len(w) == length]
        ax.bar(range(len(words)), [report.masses[w] for w in words], width=1.0)
        ax.set_ylabel(f"len {length}", fontsize=8)
        ax.set_xticks([])
    axes[0, 0].set_title("cylinder masses by prefix length")
    _save(fig, path)
