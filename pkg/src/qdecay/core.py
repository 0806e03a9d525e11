"""Domain values shared by every solver module.

Time grids, sampled signals, qubit states, trajectories, the exact
dynamical map of the decay model together with its Choi matrix, and the
Markovian semigroup baseline.

The reduced state of the two-level system is stored as the excited-state
population ``rho11`` and the coherence ``rho10 = <1|rho|0>``; the basis
ordering is (excited, ground).  The dynamical map of the model is fully
determined by one complex amplitude ``g``:

    rho11(t) = |g|^2 rho11(0),     rho10(t) = g rho10(0),

with the ground-state population following from trace preservation.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property

import numpy as np

from .errors import GridMismatchError

__all__ = [
    "TimeGrid",
    "RealSignal",
    "ComplexSignal",
    "QubitState",
    "Trajectory",
    "MarkovParams",
    "apply_map",
    "choi_matrix",
    "min_choi_eigenvalue",
    "min_choi_eigenvalues",
    "markov_propagate",
    "cumtrapz",
]


@dataclass(frozen=True)
class TimeGrid:
    """Uniform grid t_i = i*h for i = 0 .. n."""

    h: float
    n: int

    def __post_init__(self):
        if not np.isfinite(self.h) or self.h <= 0.0:
            raise ValueError(f"grid step must be positive and finite, got {self.h}")
        if int(self.n) != self.n or self.n < 1:
            raise ValueError(f"grid needs at least one step, got n={self.n}")

    @cached_property
    def times(self) -> np.ndarray:
        return np.arange(self.n + 1) * self.h

    @property
    def t_end(self) -> float:
        return self.n * self.h

    @property
    def n_points(self) -> int:
        return self.n + 1


def _as_samples(grid: TimeGrid, values, dtype) -> np.ndarray:
    arr = np.array(values, dtype=dtype)
    if arr.ndim != 1 or arr.size != grid.n_points:
        raise ValueError(
            f"expected {grid.n_points} samples on the grid, got shape {arr.shape}"
        )
    return arr


@dataclass(frozen=True)
class RealSignal:
    """Real samples on a TimeGrid.  Values are treated as immutable."""

    grid: TimeGrid
    values: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "values", _as_samples(self.grid, self.values, float))


@dataclass(frozen=True)
class ComplexSignal:
    """Complex samples on a TimeGrid.  Values are treated as immutable."""

    grid: TimeGrid
    values: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "values", _as_samples(self.grid, self.values, complex))

    @property
    def real(self) -> RealSignal:
        return RealSignal(self.grid, self.values.real.copy())

    @property
    def imag(self) -> RealSignal:
        return RealSignal(self.grid, self.values.imag.copy())


def require_same_grid(*grids: TimeGrid) -> TimeGrid:
    first = grids[0]
    for g in grids[1:]:
        if g != first:
            raise GridMismatchError(f"time grids differ: {first} vs {g}")
    return first


def cumtrapz(values: np.ndarray, h: float) -> np.ndarray:
    """Cumulative trapezoidal integral with a leading zero, same length as input."""
    out = np.empty(len(values), dtype=np.result_type(values, float))
    out[0] = 0.0
    np.cumsum((values[1:] + values[:-1]) * (0.5 * h), out=out[1:])
    return out


@dataclass(frozen=True)
class QubitState:
    """Two-level reduced state (rho11, rho10).  Positivity is checkable, not enforced."""

    rho11: float
    rho10: complex

    @property
    def rho00(self) -> float:
        return 1.0 - self.rho11

    @property
    def rho01(self) -> complex:
        return np.conj(self.rho10)

    def min_eigenvalue(self) -> float:
        # closed form for a Hermitian unit-trace 2x2 matrix
        r = np.hypot(2.0 * self.rho11 - 1.0, 2.0 * abs(self.rho10))
        return 0.5 * (1.0 - r)

    def is_positive(self, tol: float = 0.0) -> bool:
        return self.min_eigenvalue() >= -tol

    def matrix(self) -> np.ndarray:
        return np.array(
            [[self.rho11, self.rho10], [np.conj(self.rho10), self.rho00]],
            dtype=complex,
        )


@dataclass(frozen=True)
class Trajectory:
    """Reduced state on every grid point.

    Rows at or past ``breakdown_index`` (when set) hold NaN; they mark the
    region where a time-local generator ceased to exist.
    """

    grid: TimeGrid
    rho11: np.ndarray
    rho10: np.ndarray
    breakdown_index: int | None = None

    def __post_init__(self):
        object.__setattr__(self, "rho11", _as_samples(self.grid, self.rho11, float))
        object.__setattr__(self, "rho10", _as_samples(self.grid, self.rho10, complex))

    def __len__(self) -> int:
        return self.grid.n_points

    def state(self, i: int) -> QubitState:
        return QubitState(float(self.rho11[i]), complex(self.rho10[i]))

    @property
    def rho00(self) -> np.ndarray:
        return 1.0 - self.rho11

    def finite_mask(self) -> np.ndarray:
        return np.isfinite(self.rho11) & np.isfinite(self.rho10)


def apply_map(g: complex, rho0: QubitState) -> QubitState:
    """Apply the dynamical map with amplitude g to an initial state."""
    return QubitState(abs(g) ** 2 * rho0.rho11, g * rho0.rho10)


def _map_on_matrix(g: complex, m: np.ndarray) -> np.ndarray:
    """Linear extension of the map to arbitrary 2x2 inputs (basis |1>, |0>)."""
    a = abs(g) ** 2
    out = np.zeros((2, 2), dtype=complex)
    out[0, 0] = a * m[0, 0]
    out[0, 1] = g * m[0, 1]
    out[1, 0] = np.conj(g) * m[1, 0]
    out[1, 1] = m[1, 1] + (1.0 - a) * m[0, 0]
    return out


def choi_matrix(g: complex) -> np.ndarray:
    """Unnormalized Choi matrix sum_ij Phi(|i><j|) (x) |i><j|, trace 2."""
    choi = np.zeros((4, 4), dtype=complex)
    for i in range(2):
        for j in range(2):
            unit = np.zeros((2, 2), dtype=complex)
            unit[i, j] = 1.0
            choi += np.kron(_map_on_matrix(g, unit), unit)
    return choi


def min_choi_eigenvalue(g: complex) -> float:
    """Smallest eigenvalue of the Choi matrix; >= 0 exactly when the map is CP."""
    return float(np.linalg.eigvalsh(choi_matrix(g))[0])


def min_choi_eigenvalues(gs: np.ndarray) -> np.ndarray:
    """Vectorized smallest Choi eigenvalue for an array of amplitudes."""
    gs = np.asarray(gs, dtype=complex)
    stack = np.zeros(gs.shape + (4, 4), dtype=complex)
    a = np.abs(gs) ** 2
    stack[..., 0, 0] = a
    stack[..., 0, 3] = gs
    stack[..., 3, 0] = np.conj(gs)
    stack[..., 2, 2] = 1.0 - a
    stack[..., 3, 3] = 1.0
    return np.linalg.eigvalsh(stack)[..., 0]


@dataclass(frozen=True)
class MarkovParams:
    """Asymptotic decay rate and Lamb-type shift of the semigroup baseline."""

    gamma_m: float
    s_m: float = 0.0

    def __post_init__(self):
        if not np.isfinite(self.gamma_m) or self.gamma_m < 0.0:
            raise ValueError(f"gamma_m must be finite and >= 0, got {self.gamma_m}")
        if not np.isfinite(self.s_m):
            raise ValueError(f"s_m must be finite, got {self.s_m}")


def markov_propagate(params: MarkovParams, rho0: QubitState, grid: TimeGrid) -> Trajectory:
    """Closed-form semigroup evolution: exponential population decay and
    exponentially damped, rotating coherence."""
    t = grid.times
    rho11 = rho0.rho11 * np.exp(-params.gamma_m * t)
    rho10 = rho0.rho10 * np.exp(-(0.5 * params.gamma_m + 0.5j * params.s_m) * t)
    return Trajectory(grid, rho11, rho10)
