import numpy as np
import pytest

import oracles
from qdecay.core import ComplexSignal, RealSignal, TimeGrid
from qdecay.errors import ConditioningWarning, NumericsError
from qdecay.reservoir import LorentzianCorrelation, LorentzianParams
from qdecay.volterra import (
    conv_trapz,
    deconvolve_first_kind,
    propagate_scalar_volterra,
    solve_amplitude,
)


def conv_reference(a, b, h):
    """O(N^2) trapezoid convolution, written as the literal sum."""
    n = len(a)
    out = np.zeros(n, dtype=np.result_type(a, b))
    for m in range(1, n):
        s = 0.0
        for j in range(m + 1):
            w = 0.5 if j in (0, m) else 1.0
            s += w * a[m - j] * b[j]
        out[m] = h * s
    return out


def test_conv_trapz_matches_literal_sum():
    rng = np.random.default_rng(0)
    a = rng.normal(size=40) + 1j * rng.normal(size=40)
    b = rng.normal(size=40)
    got = conv_trapz(a, b, 0.1)
    np.testing.assert_allclose(got, conv_reference(a, b, 0.1), atol=1e-13)


def test_conv_trapz_first_point_is_zero():
    a = np.array([3.0, 1.0])
    assert conv_trapz(a, a, 0.5)[0] == 0.0


class TestPropagate:
    def test_zero_kernel_keeps_initial_value(self):
        grid = TimeGrid(0.01, 100)
        k = RealSignal(grid, np.zeros(101))
        x = propagate_scalar_volterra(k, 1.0, grid)
        np.testing.assert_allclose(x.values, 1.0)

    def test_constant_kernel_gives_cosine(self):
        # k = g^2 turns the equation into x'' = -g^2 x with x'(0) = 0
        g = 1.3
        grid = TimeGrid(1e-3, 5000)
        k = RealSignal(grid, np.full(5001, g * g))
        x = propagate_scalar_volterra(k, 1.0, grid)
        assert np.max(np.abs(x.values - np.cos(g * grid.times))) < 2e-5

    def test_matches_solve_amplitude(self, solve):
        cf, grid, g_sig, _ = solve(0.2)
        k = cf.sample(grid)
        x = propagate_scalar_volterra(k, 1.0 + 0j, grid)
        np.testing.assert_allclose(x.values, g_sig.values, atol=1e-12)

    def test_nonfinite_kernel_raises_with_index(self):
        grid = TimeGrid(0.1, 10)
        vals = np.ones(11)
        vals[7] = np.nan
        with pytest.raises(NumericsError) as err:
            propagate_scalar_volterra(RealSignal(grid, vals), 1.0, grid)
        assert err.value.time_index == 7

    def test_overflow_raises(self):
        grid = TimeGrid(1e-3, 500)
        k = RealSignal(grid, np.full(501, -1e7))
        with pytest.raises(NumericsError, match="overflow"):
            propagate_scalar_volterra(k, 1.0, grid)


class TestSolveAmplitude:
    def test_zero_correlation(self):
        grid = TimeGrid(0.01, 200)
        cf = LorentzianCorrelation(LorentzianParams(0.0, 1.0))
        g, gdot = solve_amplitude(cf, grid)
        np.testing.assert_allclose(g.values, 1.0)
        np.testing.assert_allclose(gdot.values, 0.0)

    @pytest.mark.parametrize("gamma0", [0.2, 1.0, 5.0])
    def test_matches_closed_form(self, solve, gamma0):
        _, grid, g, _ = solve(gamma0)
        want = oracles.amplitude(grid.times, gamma0)
        assert np.max(np.abs(g.values - want)) < 1e-5

    def test_weak_coupling_spot_value(self, solve):
        _, grid, g, _ = solve(0.2)
        assert g.values[1000].real == pytest.approx(
            oracles.amplitude(1.0, 0.2), abs=1e-7
        )
        assert abs(oracles.amplitude(1.0, 0.2) - 0.96345) < 1e-4

    def test_strong_coupling_zero_crossing(self, solve):
        _, grid, g, _ = solve(1.0)
        # e^(-pi/2) at t=pi itself; the nearest grid sample via the closed form
        assert oracles.amplitude(np.pi, 1.0) == pytest.approx(np.exp(-np.pi / 2))
        assert g.values[3142].real == pytest.approx(
            oracles.amplitude(3.142, 1.0), abs=1e-6
        )
        t_star = oracles.first_zero_time(1.0)
        crossing = grid.times[np.argmax(g.values.real < 0)]
        assert abs(crossing - t_star) < 2e-3

    def test_derivative_matches_closed_form(self, solve):
        _, grid, _, gdot = solve(1.0)
        want = oracles.amplitude_derivative(grid.times, 1.0)
        assert np.max(np.abs(gdot.values - want)) < 1e-5

    def test_second_order_accuracy(self):
        cf = LorentzianCorrelation(LorentzianParams(1.0, 1.0))
        errs = {}
        for h in (4e-3, 2e-3):
            grid = TimeGrid(h, round(5.0 / h))
            g, _ = solve_amplitude(cf, grid)
            errs[h] = np.max(np.abs(g.values - oracles.amplitude(grid.times, 1.0)))
        assert 3.5 < errs[4e-3] / errs[2e-3] < 4.5


class TestDeconvolve:
    def test_frozen_dynamics_gives_zero_kernel(self):
        grid = TimeGrid(0.01, 300)
        z = RealSignal(grid, np.ones(301))
        zdot = RealSignal(grid, np.zeros(301))
        k = deconvolve_first_kind(z, zdot, grid)
        np.testing.assert_allclose(k.values, 0.0, atol=1e-10)

    def test_cosine_squared_kernel(self):
        # z = cos^2(gt) has zhat = (u^2+2g^2)/(u(u^2+4g^2)), whose kernel
        # inverts to k1(tau) = 2 g^2 cos(sqrt(2) g tau)
        g = 1.0
        grid = TimeGrid(1e-3, 3000)
        t = grid.times
        z = RealSignal(grid, np.cos(g * t) ** 2)
        zdot = RealSignal(grid, -g * np.sin(2 * g * t))
        k = deconvolve_first_kind(z, zdot, grid)
        want = 2 * g * g * np.cos(np.sqrt(2) * g * t)
        assert np.max(np.abs(k.values - want)) < 1e-4

    @pytest.mark.parametrize("gamma0", [0.2, 1.0])
    def test_population_kernel_matches_closed_form(self, solve, gamma0):
        _, grid, g_sig, gdot_sig = solve(gamma0)
        gv = g_sig.values
        z = RealSignal(grid, (gv * np.conj(gv)).real)
        zdot = RealSignal(grid, 2 * (gdot_sig.values * np.conj(gv)).real)
        k = deconvolve_first_kind(z, zdot, grid, k_at_zero=gamma0)
        want = oracles.kernel_k1(grid.times, gamma0)
        assert np.max(np.abs(k.values - want)) < 1e-3

    def test_kernel_spot_values_weak_coupling(self, solve):
        _, grid, g_sig, gdot_sig = solve(0.2)
        gv = g_sig.values
        z = RealSignal(grid, (gv * np.conj(gv)).real)
        zdot = RealSignal(grid, 2 * (gdot_sig.values * np.conj(gv)).real)
        k = deconvolve_first_kind(z, zdot, grid, k_at_zero=0.2)
        assert k.values[0] == pytest.approx(0.2)
        assert k.values[1000] == pytest.approx(oracles.kernel_k1(1.0, 0.2), abs=1e-6)

    def test_round_trip_with_propagation(self):
        # extract a kernel from a solved trajectory, then re-propagate with it
        cf = LorentzianCorrelation(LorentzianParams(0.5, 1.0))
        grid = TimeGrid(1e-3, 4000)
        g, gdot = solve_amplitude(cf, grid)
        k = deconvolve_first_kind(
            ComplexSignal(grid, g.values),
            ComplexSignal(grid, gdot.values),
            grid,
            k_at_zero=cf(0.0),
        )
        x = propagate_scalar_volterra(k, 1.0 + 0j, grid)
        assert np.max(np.abs(x.values - g.values)) < 1e-6

    def test_initial_value_validated(self):
        grid = TimeGrid(0.01, 10)
        z = RealSignal(grid, np.full(11, 0.9))
        zdot = RealSignal(grid, np.zeros(11))
        with pytest.raises(ValueError):
            deconvolve_first_kind(z, zdot, grid)

    def test_warns_when_signal_sits_at_zero(self):
        grid = TimeGrid(0.01, 100)
        t = grid.times
        z = RealSignal(grid, np.exp(-100 * t * t))
        zdot = RealSignal(grid, -200 * t * np.exp(-100 * t * t))
        with pytest.warns(ConditioningWarning):
            deconvolve_first_kind(z, zdot, grid)
