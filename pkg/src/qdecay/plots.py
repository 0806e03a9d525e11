"""Figure rendering for scenario reports.

Each simulate run drops PNG figures next to the CSVs: populations,
coherences, the memory kernel and the time-local rates.  Figures are a
reading aid only; every curve is recomputable from the delimited output.
"""

from __future__ import annotations

import os

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt

__all__ = ["render_figures"]

_FIGSIZE = (7.5, 4.5)


def _style(ax, xlabel, ylabel, title):
    ax.set_xlabel(xlabel)
    ax.set_ylabel(ylabel)
    ax.set_title(title)
    ax.grid(True, alpha=0.3)
    ax.legend(loc="best", fontsize=8)


def render_figures(out_dir, trajectories=None, kernel=None, rates=None):
    """Render whatever artifacts exist; returns the list of files written."""
    fig_dir = os.path.join(out_dir, "figures")
    os.makedirs(fig_dir, exist_ok=True)
    written = []

    if trajectories:
        fig, ax = plt.subplots(figsize=_FIGSIZE)
        for name in sorted(trajectories):
            traj = trajectories[name]
            ax.plot(traj.grid.times, traj.rho11, label=name, linewidth=1.0)
        ax.axhline(0.0, color="black", linewidth=0.6)
        _style(ax, "t", "rho11", "excited-state population")
        path = os.path.join(fig_dir, "population.png")
        fig.savefig(path, dpi=150, bbox_inches="tight")
        plt.close(fig)
        written.append(path)

        fig, ax = plt.subplots(figsize=_FIGSIZE)
        for name in sorted(trajectories):
            traj = trajectories[name]
            ax.plot(traj.grid.times, abs(traj.rho10), label=name, linewidth=1.0)
        _style(ax, "t", "|rho10|", "coherence magnitude")
        path = os.path.join(fig_dir, "coherence.png")
        fig.savefig(path, dpi=150, bbox_inches="tight")
        plt.close(fig)
        written.append(path)

    if kernel is not None:
        fig, ax = plt.subplots(figsize=_FIGSIZE)
        t = kernel.grid.times
        ax.plot(t, kernel.k1.values, label="k1", linewidth=1.0)
        ax.plot(t, kernel.k2.values, label="k2", linewidth=1.0)
        ax.plot(t, kernel.epsilon.values, label="epsilon", linewidth=1.0)
        _style(ax, "tau", "kernel", f"memory kernel ({kernel.provenance})")
        path = os.path.join(fig_dir, "kernel.png")
        fig.savefig(path, dpi=150, bbox_inches="tight")
        plt.close(fig)
        written.append(path)

    if rates is not None:
        gamma, shift, order_columns = rates
        fig, axes = plt.subplots(1, 2, figsize=(11.0, 4.2))
        t = gamma.grid.times
        axes[0].plot(t, gamma.values, label="exact", linewidth=1.2)
        axes[1].plot(t, shift.values, label="exact", linewidth=1.2)
        for order, gam, shf in order_columns:
            axes[0].plot(t, gam.values, label=f"order {order}", linewidth=1.0)
            axes[1].plot(t, shf.values, label=f"order {order}", linewidth=1.0)
        _style(axes[0], "t", "gamma", "decay rate")
        _style(axes[1], "t", "S", "frequency shift")
        fig.tight_layout()
        path = os.path.join(fig_dir, "tcl_rates.png")
        fig.savefig(path, dpi=150, bbox_inches="tight")
        plt.close(fig)
        written.append(path)

    return written
