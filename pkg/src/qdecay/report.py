"""Delimited output and the cross-method comparison report.

All files are plain text with LF line endings and full double precision
(shortest round-tripping decimal).  Reruns of the same scenario produce
byte-identical files; every figure in the report can be recomputed from the
CSVs alone.
"""

from __future__ import annotations

import json
import os

import numpy as np

from .core import TimeGrid, Trajectory

__all__ = [
    "write_trajectory_csv",
    "write_kernel_csv",
    "write_rates_csv",
    "pairwise_deviations",
    "write_report",
]


def _fmt(x: float) -> str:
    return repr(float(x))


def write_trajectory_csv(path: str, traj: Trajectory):
    lines = ["t,rho11,rho00,re_rho10,im_rho10"]
    t = traj.grid.times
    for i in range(len(traj)):
        r11 = traj.rho11[i]
        lines.append(
            f"{_fmt(t[i])},{_fmt(r11)},{_fmt(1.0 - r11)},"
            f"{_fmt(traj.rho10[i].real)},{_fmt(traj.rho10[i].imag)}"
        )
    _write_lines(path, lines)


def write_kernel_csv(path: str, kernel):
    lines = ["t,epsilon,k1,k2"]
    t = kernel.grid.times
    eps, k1, k2 = kernel.epsilon.values, kernel.k1.values, kernel.k2.values
    for i in range(kernel.grid.n_points):
        lines.append(f"{_fmt(t[i])},{_fmt(eps[i])},{_fmt(k1[i])},{_fmt(k2[i])}")
    _write_lines(path, lines)


def write_rates_csv(path: str, grid: TimeGrid, gamma, shift, order_columns):
    """order_columns: sequence of (order, gamma_signal, shift_signal)."""
    header = "t,gamma,S"
    for order, _, _ in order_columns:
        header += f",gamma{order},S{order}"
    lines = [header]
    t = grid.times
    for i in range(grid.n_points):
        row = f"{_fmt(t[i])},{_fmt(gamma.values[i])},{_fmt(shift.values[i])}"
        for _, gam, shf in order_columns:
            row += f",{_fmt(gam.values[i])},{_fmt(shf.values[i])}"
        lines.append(row)
    _write_lines(path, lines)


def _write_lines(path: str, lines):
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write("\n".join(lines) + "\n")


def pairwise_deviations(trajectories: dict) -> dict:
    """Max absolute deviation per density-matrix entry for every method pair.

    Rows where either trajectory is NaN (past a generator breakdown) are
    excluded; the count of compared rows is reported alongside.
    """
    out = {}
    names = sorted(trajectories)
    for i, a in enumerate(names):
        for b in names[i + 1 :]:
            ta, tb = trajectories[a], trajectories[b]
            mask = ta.finite_mask() & tb.finite_mask()
            entry = {"n_compared": int(np.sum(mask))}
            if entry["n_compared"] == 0:
                entry.update(rho11=None, rho00=None, re_rho10=None, im_rho10=None,
                             overall=None)
            else:
                d11 = float(np.max(np.abs(ta.rho11[mask] - tb.rho11[mask])))
                dre = float(np.max(np.abs(ta.rho10[mask].real - tb.rho10[mask].real)))
                dim = float(np.max(np.abs(ta.rho10[mask].imag - tb.rho10[mask].imag)))
                entry.update(
                    rho11=d11,
                    rho00=d11,  # populations mirror each other through the trace
                    re_rho10=dre,
                    im_rho10=dim,
                    overall=max(d11, dre, dim),
                )
            out[f"{a}|{b}"] = entry
    return out


def write_report(path: str, payload: dict):
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        json.dump(_plain(payload), fh, indent=2, sort_keys=True)
        fh.write("\n")


def _plain(obj):
    """Recursively convert numpy scalars so json can serialize them."""
    if isinstance(obj, dict):
        return {k: _plain(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_plain(v) for v in obj]
    if isinstance(obj, (np.floating, np.integer)):
        return obj.item()
    return obj


def ensure_dir(path: str):
    os.makedirs(path, exist_ok=True)
