"""Reservoir correlation functions.

The two-point correlation f(tau) of the reservoir, taken at the emitter
frequency, fixes the entire reduced dynamics.  Three representations are
supported:

* an exponential (Lorentzian spectral density) correlation
  ``f(tau) = gamma0 * lam / 2 * exp(-lam |tau|)``,
* a finite set of discrete modes,
  ``f(tau) = sum_k |g_k|^2 exp(i (omega0 - omega_k) tau)``,
* a tabulated correlation on its own grid, extended to negative times by
  Hermitian symmetry ``f(-tau) = conj(f(tau))``.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .core import ComplexSignal, MarkovParams, TimeGrid

__all__ = [
    "LorentzianParams",
    "ModeSet",
    "CorrelationFunction",
    "LorentzianCorrelation",
    "DiscreteModeCorrelation",
    "TabulatedCorrelation",
    "eval_correlation",
    "sample_lorentzian_modes",
    "born_markov_params",
]


@dataclass(frozen=True)
class LorentzianParams:
    """Coupling strength gamma0 and spectral width lam of the Lorentzian reservoir.

    The derived quantities delta, delta_prime and delta_hat are kept complex;
    they turn imaginary in the strong-coupling regime.
    """

    gamma0: float
    lam: float = 1.0

    def __post_init__(self):
        if not np.isfinite(self.gamma0) or self.gamma0 < 0.0:
            raise ValueError(f"gamma0 must be finite and >= 0, got {self.gamma0}")
        if not np.isfinite(self.lam) or self.lam <= 0.0:
            raise ValueError(f"lam must be finite and > 0, got {self.lam}")

    @property
    def delta(self) -> complex:
        return complex(np.sqrt(complex(1.0 - 2.0 * self.gamma0 / self.lam)))

    @property
    def delta_prime(self) -> complex:
        return complex(np.sqrt(complex(1.0 - 4.0 * self.gamma0 / self.lam)))

    @property
    def delta_hat(self) -> complex:
        return complex(np.sqrt(complex(2.0 * self.gamma0 / self.lam - 1.0)))


@dataclass(frozen=True)
class ModeSet:
    """Discrete reservoir modes: couplings g_k and frequencies omega_k.

    An empty mode set represents the decoupled reservoir, f = 0.
    """

    omega0: float
    couplings: np.ndarray
    frequencies: np.ndarray

    def __post_init__(self):
        couplings = np.atleast_1d(np.array(self.couplings, dtype=complex))
        frequencies = np.atleast_1d(np.array(self.frequencies, dtype=float))
        if couplings.shape != frequencies.shape or couplings.ndim != 1:
            raise ValueError("couplings and frequencies must be matching 1d sequences")
        if not (np.all(np.isfinite(couplings)) and np.all(np.isfinite(frequencies))):
            raise ValueError("mode couplings and frequencies must be finite")
        object.__setattr__(self, "couplings", couplings)
        object.__setattr__(self, "frequencies", frequencies)

    @classmethod
    def from_pairs(cls, omega0: float, pairs) -> "ModeSet":
        gs = [complex(g) for g, _ in pairs]
        ws = [float(w) for _, w in pairs]
        return cls(omega0, np.array(gs, dtype=complex), np.array(ws, dtype=float))

    @property
    def n_modes(self) -> int:
        return self.couplings.size

    @property
    def detunings(self) -> np.ndarray:
        return self.omega0 - self.frequencies

    def total_coupling_power(self) -> float:
        return float(np.sum(np.abs(self.couplings) ** 2))


class CorrelationFunction:
    """Base class; concrete variants implement ``evaluate`` for array input."""

    def evaluate(self, tau: np.ndarray) -> np.ndarray:
        raise NotImplementedError

    def __call__(self, tau):
        tau = np.asarray(tau, dtype=float)
        if tau.ndim == 0:
            return complex(self.evaluate(tau.reshape(1))[0])
        return self.evaluate(tau)

    def sample(self, grid: TimeGrid) -> ComplexSignal:
        return ComplexSignal(grid, self.evaluate(grid.times))


def eval_correlation(cf: CorrelationFunction, tau: float) -> complex:
    return complex(cf(tau))


@dataclass(frozen=True)
class LorentzianCorrelation(CorrelationFunction):
    params: LorentzianParams

    def evaluate(self, tau):
        p = self.params
        return (0.5 * p.gamma0 * p.lam) * np.exp(-p.lam * np.abs(tau)) + 0.0j


@dataclass(frozen=True)
class DiscreteModeCorrelation(CorrelationFunction):
    modes: ModeSet

    def evaluate(self, tau):
        if self.modes.n_modes == 0:
            return np.zeros(np.shape(tau), dtype=complex)
        weights = np.abs(self.modes.couplings) ** 2
        phases = np.exp(1j * np.multiply.outer(tau, self.modes.detunings))
        return phases @ weights


@dataclass(frozen=True)
class TabulatedCorrelation(CorrelationFunction):
    """Correlation given by samples on [0, T]; linear interpolation in between.

    Negative arguments use the Hermitian extension.  Arguments outside the
    tabulated range raise, they are never extrapolated.
    """

    table: ComplexSignal

    def evaluate(self, tau):
        tau = np.asarray(tau, dtype=float)
        mag = np.abs(tau)
        t_max = self.table.grid.t_end
        if np.any(mag > t_max * (1.0 + 1e-12)):
            worst = float(np.max(mag))
            raise ValueError(
                f"correlation queried at |tau|={worst}, beyond tabulated range {t_max}"
            )
        times = self.table.grid.times
        vals = self.table.values
        out = np.interp(mag, times, vals.real) + 1j * np.interp(mag, times, vals.imag)
        return np.where(tau < 0.0, np.conj(out), out)

    def require_resolves(self, grid: TimeGrid):
        """The tabulation must be at least as fine as the solver grid."""
        if self.table.grid.h > grid.h * (1.0 + 1e-12):
            raise ValueError(
                f"tabulated correlation step {self.table.grid.h} is coarser than "
                f"solver step {grid.h}"
            )


def sample_lorentzian_modes(
    params: LorentzianParams,
    omega0: float,
    n_modes: int,
    cutoff_width: float,
) -> ModeSet:
    """Discretize the Lorentzian spectral density into n_modes equispaced modes.

    Modes sit uniformly on [omega0 - W*lam, omega0 + W*lam] and carry weights
    |g_k|^2 = J(omega_k) * dw, with the density
    J(omega) = gamma0 lam^2 / (2 pi) / ((omega0 - omega)^2 + lam^2).
    No endpoint halving: the sum converges to (gamma0 lam / pi) * arctan(W).
    """
    if n_modes < 2:
        raise ValueError(f"need at least 2 modes, got {n_modes}")
    if not np.isfinite(cutoff_width) or cutoff_width <= 0.0:
        raise ValueError(f"cutoff_width must be positive, got {cutoff_width}")
    half = cutoff_width * params.lam
    freqs = np.linspace(omega0 - half, omega0 + half, n_modes)
    dw = freqs[1] - freqs[0]
    density = (params.gamma0 * params.lam**2 / (2.0 * np.pi)) / (
        (omega0 - freqs) ** 2 + params.lam**2
    )
    couplings = np.sqrt(density * dw).astype(complex)
    return ModeSet(omega0, couplings, freqs)


def born_markov_params(cf: CorrelationFunction, grid: TimeGrid) -> MarkovParams:
    """Semigroup parameters from the correlation: gamma_m = 2 * integral of Re f,
    s_m = 2 * integral of Im f, both by trapezoid quadrature over the grid."""
    f = cf.sample(grid).values
    gamma_m = 2.0 * float(np.trapezoid(f.real, dx=grid.h))
    s_m = 2.0 * float(np.trapezoid(f.imag, dx=grid.h))
    return MarkovParams(gamma_m, s_m)
