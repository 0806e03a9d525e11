"""Time-convolutionless description of the decay.

The exact time-local generator has decay rate and frequency shift

    gamma(t) = -2 Re[g'(t)/g(t)],      s(t) = -2 Im[g'(t)/g(t)],

well defined until the amplitude g crosses zero, where the generator
diverges and ceases to exist.  This module extracts those coefficients
from a solved amplitude, detects the breakdown point, builds the
perturbative (second and fourth order) rates directly from the reservoir
correlation, expands the amplitude itself in powers of the coupling, and
propagates states under any set of time-local coefficients.

All fourth-order integrals reduce, by exchanging the order of integration,
to cumulative trapezoid sums and one discrete convolution, so their cost
is O(N^2) overall instead of O(N^2) per output point.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .core import (
    ComplexSignal,
    QubitState,
    RealSignal,
    TimeGrid,
    Trajectory,
    cumtrapz,
    require_same_grid,
)
from .reservoir import CorrelationFunction
from .volterra import conv_trapz

__all__ = [
    "TCLCoefficients",
    "ExpansionTerms",
    "tcl_coefficients",
    "expand_amplitude",
    "tcl_rates_perturbative",
    "tcl_propagate",
]

DEFAULT_BREAKDOWN_THRESHOLD = 1e-8


@dataclass(frozen=True)
class TCLCoefficients:
    """Decay rate gamma(t) and shift s(t); NaN at and past ``breakdown_index``."""

    gamma: RealSignal
    shift: RealSignal
    breakdown_index: int | None = None

    @property
    def grid(self) -> TimeGrid:
        return self.gamma.grid

    @property
    def breakdown_time(self) -> float | None:
        if self.breakdown_index is None:
            return None
        return float(self.grid.times[self.breakdown_index])


@dataclass(frozen=True)
class ExpansionTerms:
    """Coupling expansion of the amplitude and, optionally, of the rates.

    ``g_terms[m]`` holds the order-2m amplitude term, starting with the
    constant g^(0) = 1; ``rate_terms`` pairs (gamma, shift) contributions at
    the same orders when filled in.
    """

    order: int
    g_terms: tuple
    rate_terms: tuple = ()

    def partial_sum(self, order: int | None = None) -> ComplexSignal:
        """Sum of amplitude terms up to the given (even) order."""
        order = self.order if order is None else order
        n_terms = order // 2 + 1
        if order % 2 or not 1 <= n_terms <= len(self.g_terms):
            raise ValueError(f"no expansion terms for order {order}")
        grid = self.g_terms[0].grid
        total = np.zeros(grid.n_points, dtype=complex)
        for term in self.g_terms[:n_terms]:
            total = total + term.values
        return ComplexSignal(grid, total)


def tcl_coefficients(
    g: ComplexSignal,
    gdot: ComplexSignal,
    breakdown_threshold: float = DEFAULT_BREAKDOWN_THRESHOLD,
) -> TCLCoefficients:
    """Exact time-local coefficients from the amplitude and its derivative.

    Breakdown is flagged at the first sample where |g| drops below the
    threshold, or where the amplitude swings by more than 90 degrees in a
    single step: a zero crossing between grid points leaves every sampled
    |g| finite, but flips the sign of g, and the generator does not exist
    beyond the crossing.
    """
    grid = require_same_grid(g.grid, gdot.grid)
    gv = g.values
    if abs(gv[0] - 1.0) > 1e-9:
        raise ValueError(f"amplitude must start at 1, got {gv[0]}")

    breakdown = None
    below = np.abs(gv) < breakdown_threshold
    flipped = np.empty(len(gv), dtype=bool)
    flipped[0] = False
    flipped[1:] = (gv[:-1] * np.conj(gv[1:])).real < 0.0
    hit = np.flatnonzero(below | flipped)
    if hit.size:
        breakdown = int(hit[0])

    with np.errstate(divide="ignore", invalid="ignore"):
        ratio = gdot.values / gv
    gamma = -2.0 * ratio.real
    shift = -2.0 * ratio.imag
    if breakdown is not None:
        gamma[breakdown:] = np.nan
        shift[breakdown:] = np.nan
    return TCLCoefficients(
        RealSignal(grid, gamma), RealSignal(grid, shift), breakdown
    )


def expand_amplitude(
    cf: CorrelationFunction, grid: TimeGrid, max_order: int
) -> ExpansionTerms:
    """Amplitude terms g^(0) = 1, g^(2), g^(4), ... up to max_order.

    Each order solves g^(2n)(t) = -int_0^t dt1 int_0^t1 dt2 f(t1-t2) g^(2n-2)(t2)
    with the previous term as input: one trapezoidal convolution for the inner
    integral, one cumulative trapezoid for the outer one.
    """
    if max_order < 2 or max_order % 2:
        raise ValueError(f"expansion order must be even and >= 2, got {max_order}")
    f = cf.sample(grid).values
    h = grid.h
    current = np.ones(grid.n_points, dtype=complex)
    terms = [ComplexSignal(grid, current)]
    for _ in range(max_order // 2):
        inner = conv_trapz(f, current, h)
        current = -cumtrapz(inner, h)
        terms.append(ComplexSignal(grid, current))
    return ExpansionTerms(max_order, tuple(terms))


def tcl_rates_perturbative(cf: CorrelationFunction, grid: TimeGrid, order: int):
    """Single-order rate contributions (gamma^(order), shift^(order)).

    Order 2 is twice the cumulative integral of f.  Order 4 is the triple
    integral of the two f-products over the ordered simplex; exchanging the
    integration order collapses it to

        2 * [ 2 F Phi1 - (f * Phi1) - int f Phi1 - int F^2 ],

    with F the cumulative integral of f, Phi1 the cumulative integral of F,
    and * the convolution on [0, t].  Returned signals are the real and
    imaginary parts.
    """
    if order not in (2, 4):
        raise ValueError(f"perturbative rates are implemented at orders 2 and 4, got {order}")
    f = cf.sample(grid).values
    h = grid.h
    big_f = cumtrapz(f, h)
    if order == 2:
        combo = 2.0 * big_f
    else:
        phi1 = cumtrapz(big_f, h)
        combo = 2.0 * (
            2.0 * big_f * phi1
            - conv_trapz(f, phi1, h)
            - cumtrapz(f * phi1, h)
            - cumtrapz(big_f**2, h)
        )
    return RealSignal(grid, combo.real), RealSignal(grid, combo.imag)


def tcl_propagate(
    coeffs: TCLCoefficients, rho0: QubitState, grid: TimeGrid
) -> Trajectory:
    """Propagate under time-local coefficients.

    The generator is diagonal in this representation, so the solution is the
    exponential of cumulative integrals:

        rho11(t) = rho11(0) exp(-int gamma),
        rho10(t) = rho10(0) exp(-(int gamma + i int s) / 2).

    Past a breakdown the coefficients are NaN and the states follow suit;
    the trajectory carries the breakdown index along.
    """
    require_same_grid(coeffs.grid, grid)
    h = grid.h
    big_gamma = cumtrapz(coeffs.gamma.values, h)
    big_shift = cumtrapz(coeffs.shift.values, h)
    rho11 = rho0.rho11 * np.exp(-big_gamma)
    rho10 = rho0.rho10 * np.exp(-0.5 * (big_gamma + 1j * big_shift))
    return Trajectory(grid, rho11, rho10, breakdown_index=coeffs.breakdown_index)
