"""Figure rendering for CLI reports.

Each helper writes a single PNG next to the delimited output.  Imported
only when figure output is requested, so library use never touches a
plotting backend.
"""

from __future__ import annotations

import numpy as np
import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402

FIGSIZE = (4.8, 3.6)
DPI = 150


def _finish(fig, path):
    fig.tight_layout()
    fig.savefig(path, dpi=DPI)
    plt.close(fig)
    return str(path)


def spectrum_figure(eigvals, path, title="iteration matrix spectrum"):
    """Eigenvalues of the iteration matrix against the unit circle."""
    eigvals = np.asarray(eigvals, dtype=complex)
    fig, ax = plt.subplots(figsize=FIGSIZE)
    theta = np.linspace(0, 2 * np.pi, 256)
    ax.plot(np.cos(theta), np.sin(theta), "k--", lw=0.8, label="unit circle")
    ax.scatter(eigvals.real, eigvals.imag, s=18, color="tab:blue", zorder=3)
    lim = max(1.15, 1.1 * np.max(np.abs(eigvals), initial=0.0))
    ax.set_xlim(-lim, lim)
    ax.set_ylim(-lim, lim)
    ax.set_aspect("equal")
    ax.set_xlabel("Re")
    ax.set_ylabel("Im")
    ax.set_title(title)
    ax.legend(loc="upper right", fontsize=8)
    return _finish(fig, path)


def residual_figure(history, rho, path, title="residual history"):
    """Semilog residual trace with the geometric reference slope."""
    history = np.asarray(history, dtype=float)
    fig, ax = plt.subplots(figsize=FIGSIZE)
    ax.semilogy(np.arange(history.size), np.maximum(history, 1e-300), "-o", ms=2.5)
    if 0.0 < rho < 1.0 and history.size > 1 and history[0] > 0:
        ref = history[0] * rho ** np.arange(history.size)
        ax.semilogy(np.arange(history.size), ref, "k--", lw=0.8,
                    label=f"rho^k slope (rho={rho:.3g})")
        ax.legend(fontsize=8)
    ax.set_xlabel("iteration")
    ax.set_ylabel("residual norm")
    ax.set_title(title)
    return _finish(fig, path)


def rho_scatter_figure(rho_left, rho_right, ok, path, title="ensemble sweep"):
    """Per-instance rho pairs; violations of the predicted relation in red."""
    rho_left = np.asarray(rho_left, dtype=float)
    rho_right = np.asarray(rho_right, dtype=float)
    ok = np.asarray(ok, dtype=bool)
    fig, ax = plt.subplots(figsize=FIGSIZE)
    span = max(1.0, rho_left.max(initial=0.0), rho_right.max(initial=0.0)) * 1.05
    ax.plot([0, span], [0, span], "k--", lw=0.8)
    ax.scatter(rho_left[ok], rho_right[ok], s=14, color="tab:blue", label="holds")
    if (~ok).any():
        ax.scatter(rho_left[~ok], rho_right[~ok], s=18, color="tab:red",
                   label="violated")
    ax.set_xlabel("rho (left)")
    ax.set_ylabel("rho (right)")
    ax.set_title(title)
    ax.legend(fontsize=8)
    return _finish(fig, path)


def rho_bar_figure(rho_a, rho_b, path, title="splitting comparison"):
    fig, ax = plt.subplots(figsize=FIGSIZE)
    ax.bar(["a", "b"], [rho_a, rho_b], color=["tab:blue", "tab:orange"], width=0.5)
    ax.axhline(1.0, color="k", ls="--", lw=0.8)
    ax.set_ylabel("spectral radius")
    ax.set_title(title)
    return _finish(fig, path)
