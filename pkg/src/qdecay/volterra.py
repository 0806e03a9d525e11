"""Volterra machinery for convolution dynamics on a uniform grid.

Everything here discretizes integrals with the trapezoidal rule, which keeps
the whole pipeline second order in the step size:

* ``propagate_scalar_volterra`` integrates x'(t) = -int_0^t k(t-s) x(s) ds.
  The time step is the trapezoidal (Crank-Nicolson style) rule, the memory
  integral is trapezoidal product integration.  The diagonal quadrature
  weight multiplies the newest unknown linearly, so the implicit step is
  solved in closed form; cost is O(N^2) overall.
* ``solve_amplitude`` specializes the propagator to the decay amplitude,
  whose kernel is the reservoir correlation function, and also returns the
  evaluated right-hand side as the derivative (no finite differencing).
* ``deconvolve_first_kind`` inverts the convolution: given x and x' it
  recovers the kernel from the lower-triangular system row by row.  The
  value k(0) cannot be seen by the quadrature at all, so it is anchored
  analytically by the caller or from a one-sided second difference.
"""

from __future__ import annotations

import warnings

import numpy as np

from .core import ComplexSignal, RealSignal, TimeGrid, require_same_grid
from .errors import ConditioningWarning, NumericsError
from .reservoir import CorrelationFunction

__all__ = [
    "propagate_scalar_volterra",
    "solve_amplitude",
    "deconvolve_first_kind",
    "conv_trapz",
]


def conv_trapz(a: np.ndarray, b: np.ndarray, h: float) -> np.ndarray:
    """Trapezoidal convolution c_n = int_0^{t_n} a(t_n - s) b(s) ds on the grid."""
    if len(a) != len(b):
        raise ValueError("convolution inputs must share a grid")
    full = np.convolve(a, b)[: len(a)]
    return h * (full - 0.5 * a * b[0] - 0.5 * a[0] * b)


def _propagate(kernel_values: np.ndarray, x0, grid: TimeGrid, method: str | None):
    """Shared trapezoidal stepper.  Returns (x, xdot) arrays."""
    n = grid.n
    h = grid.h
    dtype = np.result_type(kernel_values.dtype, type(x0), float)
    k = np.ascontiguousarray(kernel_values, dtype=dtype)
    if not np.all(np.isfinite(k)):
        bad = int(np.flatnonzero(~np.isfinite(k))[0])
        raise NumericsError(
            f"kernel sample is not finite at time index {bad}",
            time_index=bad,
            method=method,
        )

    x = np.zeros(n + 1, dtype=dtype)
    w = np.zeros(n + 1, dtype=dtype)  # evaluated right-hand sides
    x[0] = x0
    w[0] = 0.0

    krev = k[::-1].copy()  # krev[i] = k_{n-i}, keeps the per-step dot contiguous
    denom = 1.0 + 0.25 * h * h * k[0]
    # overflow is detected explicitly below, so numpy's own warnings are noise
    with np.errstate(over="ignore", invalid="ignore", divide="ignore"):
        for m in range(1, n + 1):
            # partial memory sum: h * [ sum_{j=0}^{m-1} k_{m-j} x_j - k_m x_0 / 2 ]
            s = np.dot(krev[n - m : n], x[:m])
            p = h * (s - 0.5 * k[m] * x[0])
            xm = (x[m - 1] + 0.5 * h * (w[m - 1] - p)) / denom
            x[m] = xm
            w[m] = -p - 0.5 * h * k[0] * xm
            if not np.isfinite(xm):
                raise NumericsError(
                    f"propagation overflowed at time index {m}",
                    time_index=m,
                    method=method,
                )
    return x, w


def propagate_scalar_volterra(kernel, x0, grid: TimeGrid, method: str | None = None):
    """Solve x' = -int_0^t k(t-s) x(s) ds with x(0) = x0 on the grid.

    ``kernel`` is a RealSignal or ComplexSignal of kernel samples k(t_i).
    Returns a signal of matching (promoted) dtype.
    """
    require_same_grid(kernel.grid, grid)
    x, _ = _propagate(kernel.values, x0, grid, method)
    if np.iscomplexobj(x):
        return ComplexSignal(grid, x)
    return RealSignal(grid, x)


def solve_amplitude(cf: CorrelationFunction, grid: TimeGrid):
    """Decay amplitude g(t) with g(0) = 1 and its derivative.

    g obeys g'(t) = -int_0^t f(t-s) g(s) ds with the reservoir correlation f.
    The returned derivative is the evaluated right-hand side at each step.
    """
    f = cf.sample(grid).values
    x, w = _propagate(f, 1.0 + 0.0j, grid, method="exact")
    return ComplexSignal(grid, x), ComplexSignal(grid, w)


def deconvolve_first_kind(
    z,
    zdot,
    grid: TimeGrid,
    k_at_zero=None,
):
    """Recover the kernel k from z' = -int_0^t k(t-s) z(s) ds.

    Requires z(0) = 1 and z'(0) = 0.  Row n of the trapezoidal discretization
    determines k(t_n) from earlier values; the diagonal coefficient is the
    constant z(0) h / 2, so the solve never divides by a decaying z.

    k(0) multiplies only the zero-length integral and is invisible to the
    quadrature; pass its analytic value via ``k_at_zero`` (for the exact
    kernel of the decay model that is -z''(0) = 2 Re f(0)) or leave None to
    fall back on a one-sided second difference of z.

    Real inputs recover a RealSignal, complex inputs a ComplexSignal.
    """
    require_same_grid(z.grid, zdot.grid, grid)
    zv = z.values
    dv = zdot.values
    n = grid.n
    h = grid.h
    if abs(zv[0] - 1.0) > 1e-9:
        raise ValueError(f"deconvolution requires z(0) = 1, got {zv[0]}")
    if abs(dv[0]) > 1e-9:
        raise ValueError(f"deconvolution requires z'(0) = 0, got {dv[0]}")

    if k_at_zero is None:
        if n < 3:
            raise ValueError("need at least 3 steps to difference k(0) from z")
        # one-sided O(h^2) second difference of z at t=0; k(0) = -z''(0)
        k0 = -(2.0 * zv[0] - 5.0 * zv[1] + 4.0 * zv[2] - zv[3]) / (h * h)
    else:
        k0 = k_at_zero

    # persistent near-zero data flattens the sub-diagonals and loses the kernel
    tiny = np.abs(zv) < 1e-9
    if np.any(tiny):
        run = _longest_run(tiny)
        if run >= max(5, n // 200):
            warnings.warn(
                f"z stays below 1e-9 for {run} consecutive samples; "
                "the recovered kernel is ill conditioned there",
                ConditioningWarning,
                stacklevel=2,
            )

    dtype = np.result_type(zv.dtype, dv.dtype, np.asarray(k0).dtype)
    k = np.zeros(n + 1, dtype=dtype)
    k[0] = k0
    zrev = zv[::-1].copy()
    inv_diag = 2.0 / zv[0]
    for m in range(1, n + 1):
        # sum_{j=1}^{m-1} k_{m-j} z_j, empty for m = 1
        s = np.dot(k[1:m], zrev[n - m + 1 : n])
        k[m] = (-dv[m] / h - s - 0.5 * k[0] * zv[m]) * inv_diag
    cls = ComplexSignal if np.iscomplexobj(k) else RealSignal
    return cls(grid, k)


def _longest_run(mask: np.ndarray) -> int:
    best = cur = 0
    for flag in mask:
        cur = cur + 1 if flag else 0
        if cur > best:
            best = cur
    return best
