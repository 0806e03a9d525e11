"""Independent reference values for the Lorentzian reservoir.

Everything here is evaluated from closed-form expressions or literal
nested quadrature, never through the package's own reduction steps, so
agreement is meaningful.
"""

import numpy as np


def _phi(t, lam):
    return 0.5 * lam * np.asarray(t, dtype=float)


def _cosh_plus_sinh_over(x, d):
    """cosh(d*x) + sinh(d*x)/d for complex d, series-safe near d=0."""
    d = complex(d)
    x = np.asarray(x, dtype=float)
    if abs(d) < 1e-8:
        return np.cosh(d * x).real + x * (1.0 + (d * x) ** 2 / 6.0).real
    return (np.cosh(d * x) + np.sinh(d * x) / d).real


def amplitude(t, gamma0, lam=1.0):
    """Closed-form G(t): exp(-lam t/2) [cosh(phi d) + sinh(phi d)/d]."""
    d = np.sqrt(complex(1.0 - 2.0 * gamma0 / lam))
    return np.exp(-_phi(t, lam)) * _cosh_plus_sinh_over(_phi(t, lam), d)


def amplitude_derivative(t, gamma0, lam=1.0):
    """Closed-form dG/dt = -(gamma0/d) exp(-lam t/2) sinh(phi d)."""
    d = np.sqrt(complex(1.0 - 2.0 * gamma0 / lam))
    phi = _phi(t, lam)
    if abs(d) < 1e-8:
        sinh_over = (phi * (1.0 + (d * phi) ** 2 / 6.0)).real
    else:
        sinh_over = (np.sinh(d * phi) / d).real
    return -gamma0 * np.exp(-phi) * sinh_over


def decay_rate(t, gamma0, lam=1.0):
    """Exact time-local rate 2 g0 sinh(phi d) / (d cosh(phi d) + sinh(phi d))."""
    d = np.sqrt(complex(1.0 - 2.0 * gamma0 / lam))
    phi = _phi(t, lam)
    num = 2.0 * gamma0 * np.sinh(d * phi)
    den = d * np.cosh(d * phi) + np.sinh(d * phi)
    return (num / den).real


def first_zero_time(gamma0, lam=1.0):
    """First zero of G for gamma0 > lam/2."""
    d_hat = np.sqrt(2.0 * gamma0 / lam - 1.0)
    return (2.0 / (lam * d_hat)) * (np.pi - np.arctan(d_hat))


def kernel_k1(tau, gamma0, lam=1.0):
    """Closed-form exact k1: g0 lam exp(-3 lam tau/2) [cosh + sinh/d']."""
    dp = np.sqrt(complex(1.0 - 4.0 * gamma0 / lam))
    return gamma0 * lam * np.exp(-3.0 * _phi(tau, lam)) * _cosh_plus_sinh_over(
        _phi(tau, lam), dp
    )


def rate_order2(t, gamma0, lam=1.0):
    return gamma0 * (1.0 - np.exp(-lam * np.asarray(t, dtype=float)))


def rate_order4(t, gamma0, lam=1.0):
    """Next perturbative rate term, (g0^2/2lam)[1 - e^(-2 lam t) - 2 lam t e^(-lam t)]."""
    t = np.asarray(t, dtype=float)
    e = np.exp(-lam * t)
    return (gamma0**2 / (2.0 * lam)) * (1.0 - e**2 - 2.0 * lam * t * e)


def kernel_k1_order4(tau, gamma0, lam=1.0):
    """Next perturbative kernel term, g0^2 [e^(-lam tau)(1 - lam tau) - e^(-2 lam tau)]."""
    tau = np.asarray(tau, dtype=float)
    e = np.exp(-lam * tau)
    return gamma0**2 * (e * (1.0 - lam * tau) - e**2)


def amplitude_order2(t, gamma0, lam=1.0):
    """Leading correction to G: -(g0/2)[t - (1 - e^(-lam t))/lam]."""
    t = np.asarray(t, dtype=float)
    return -(gamma0 / 2.0) * (t - (1.0 - np.exp(-lam * t)) / lam)


def population_order2_kernel(t, gamma0, lam=1.0):
    """Population under the truncated second-order memory kernel.

    The population channel then obeys the same equation as G with the
    kernel weight doubled, so this is the G closed form at 2*gamma0.
    """
    return amplitude(t, 2.0 * gamma0, lam)


def rate4_nested(cf, t, m=240):
    """gamma^(4)(t) + i S^(4)(t) by literal nested trapezoid quadrature.

    Integrand f(t-t2) f(t1-t3) + f(t-t3) f(t1-t2) over the ordered simplex
    0 <= t3 <= t2 <= t1 <= t.  O(m^2) memory, O(m^2) flops via cumulative
    inner sums; quadrature error O(1/m^2).
    """
    s = np.linspace(0.0, t, m + 1)
    h = s[1] - s[0] if m > 0 else 0.0
    ft_minus = cf(t - s)                     # f(t - s_j)
    pair = cf(s[:, None] - s[None, :])       # f(s_i - s_k)

    def ctz(a, axis):
        a1 = np.moveaxis(a, axis, -1)
        out = np.zeros_like(a1)
        out[..., 1:] = np.cumsum(0.5 * h * (a1[..., 1:] + a1[..., :-1]), axis=-1)
        return np.moveaxis(out, -1, axis)

    # inner t3 integral of f(t-t2) f(t1-t3) + f(t-t3) f(t1-t2), up to t3=t2
    cum_pair = ctz(pair, axis=1)             # int_0^{s_j} f(s_i - u) du
    cum_ft = ctz(ft_minus[None, :], axis=1)[0]
    inner = ft_minus[None, :] * cum_pair + pair * cum_ft[None, :]
    # middle t2 integral up to t2 = t1 picks the diagonal
    middle = np.diagonal(ctz(inner, axis=1))
    return 2.0 * np.trapezoid(middle, dx=h)


def kernel4_nested(cf, tau, m=400):
    """k1^(4)(tau) by literal nested trapezoid of its double integral."""
    s = np.linspace(0.0, tau, m + 1)
    h = s[1] - s[0] if m > 0 else 0.0
    # inner t3 integral of f(tau-t3) f(-t2) + f(tau) f(t3-t2), t3 in [0, t2]
    inner = np.empty(m + 1, dtype=complex)
    f_tau = complex(cf(tau))
    for j, t2 in enumerate(s):
        t3 = s[: j + 1]
        vals = cf(tau - t3) * cf(-t2) + f_tau * cf(t3 - t2)
        inner[j] = np.trapezoid(vals, dx=h) if j else 0.0
    return -2.0 * np.trapezoid(inner, dx=h).real
