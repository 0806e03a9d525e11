"""Brute-force reference dynamics: one excitation shared with discrete modes.

In the single-excitation sector the joint state is

    |psi(t)> = c0 |0, vac> + c1(t) |1, vac> + sum_k ck(t) |0, 1_k>,

and the interaction-picture amplitudes obey the linear system

    c1' = -i sum_k g_k exp(+i (omega0 - omega_k) t) ck,
    ck' = -i conj(g_k) exp(-i (omega0 - omega_k) t) c1,

with c0 constant.  Integrating this system directly, with no reference to
correlation functions or master equations, provides an independent check of
the reduced dynamics: c1(t)/c1(0) must converge to the decay amplitude as
the mode sampling refines.

The integrator is fixed-step classical Runge-Kutta; the step must resolve
the fastest detuning (h * max|omega0 - omega_k| <= 0.1).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .core import ComplexSignal, TimeGrid
from .reservoir import ModeSet

__all__ = ["OneExcitationState", "evolve_one_excitation"]

MAX_PHASE_PER_STEP = 0.1


@dataclass(frozen=True)
class OneExcitationState:
    """Amplitudes of the joint emitter-reservoir state in the one-excitation sector."""

    c0: complex
    c1: complex
    ck: np.ndarray

    def norm(self) -> float:
        return float(
            abs(self.c0) ** 2 + abs(self.c1) ** 2 + np.sum(np.abs(self.ck) ** 2)
        )

    def excitation_weight(self) -> float:
        return float(abs(self.c1) ** 2 + np.sum(np.abs(self.ck) ** 2))


def evolve_one_excitation(
    modes: ModeSet,
    c1_0: complex,
    grid: TimeGrid,
    monitor=None,
):
    """Integrate the mode equations; returns (c1 signal, final state).

    ``monitor(i, c1, ck)`` is invoked at every grid point when given, so
    conservation laws can be checked step by step without storing the full
    mode trajectory.
    """
    c1_0 = complex(c1_0)
    if abs(c1_0) > 1.0 + 1e-12:
        raise ValueError(f"|c1(0)| must not exceed 1, got {abs(c1_0)}")
    det = modes.detunings
    if det.size and grid.h * float(np.max(np.abs(det))) > MAX_PHASE_PER_STEP:
        raise ValueError(
            f"step {grid.h} does not resolve the largest detuning "
            f"{float(np.max(np.abs(det)))}: need h * max|detuning| <= {MAX_PHASE_PER_STEP}"
        )

    g = modes.couplings
    g_conj = np.conj(g)
    c0 = complex(np.sqrt(max(0.0, 1.0 - abs(c1_0) ** 2)))
    c1 = c1_0
    ck = np.zeros(modes.n_modes, dtype=complex)
    h = grid.h

    out = np.empty(grid.n_points, dtype=complex)
    out[0] = c1
    if monitor is not None:
        monitor(0, c1, ck)

    def rhs(t, a1, ak):
        phase = np.exp((1j * t) * det)
        d1 = -1j * np.dot(g * phase, ak)
        dk = (-1j * a1) * g_conj * np.conj(phase)
        return d1, dk

    for i in range(1, grid.n_points):
        t = (i - 1) * h
        k1a, k1b = rhs(t, c1, ck)
        k2a, k2b = rhs(t + 0.5 * h, c1 + 0.5 * h * k1a, ck + 0.5 * h * k1b)
        k3a, k3b = rhs(t + 0.5 * h, c1 + 0.5 * h * k2a, ck + 0.5 * h * k2b)
        k4a, k4b = rhs(t + h, c1 + h * k3a, ck + h * k3b)
        c1 = c1 + (h / 6.0) * (k1a + 2.0 * k2a + 2.0 * k3a + k4a)
        ck = ck + (h / 6.0) * (k1b + 2.0 * k2b + 2.0 * k3b + k4b)
        out[i] = c1
        if monitor is not None:
            monitor(i, c1, ck)

    final = OneExcitationState(c0, complex(c1), ck)
    return ComplexSignal(grid, out), final
