"""Command-line interface.

Subcommands:

* ``simulate``   run the configured methods, write one CSV per method plus
                 kernel/rates CSVs where applicable, report.json and figures
* ``kernel``     write the memory-kernel triple as kernel.csv
* ``tcl-rates``  write exact and perturbative time-local rates as tcl_rates.csv
* ``verify``     run the invariant checks and report pass/fail
* ``compare``    run at least two methods and write report.json only

Exit codes: 0 success, 1 failed verification checks, 2 invalid configuration,
3 numerical failure (the offending method and time index are reported).
"""

from __future__ import annotations

import argparse
import os
import sys
from functools import cached_property

import numpy as np

from .config import (
    METHODS,
    PRESETS,
    ConfigError,
    ScenarioConfig,
    load_config,
    preset_config,
)
from .core import (
    QubitState,
    Trajectory,
    apply_map,
    markov_propagate,
    min_choi_eigenvalues,
)
from .errors import NumericsError
from .nz import (
    check_identity_double_integral,
    nz_kernel_exact,
    nz_kernel_lorentzian,
    nz_kernel_perturbative,
    nz_propagate,
    ansatz_propagate,
)
from .core import MarkovParams, RealSignal
from .oracle import evolve_one_excitation
from .report import (
    ensure_dir,
    pairwise_deviations,
    write_kernel_csv,
    write_rates_csv,
    write_report,
    write_trajectory_csv,
)
from .reservoir import (
    DiscreteModeCorrelation,
    LorentzianCorrelation,
    born_markov_params,
    sample_lorentzian_modes,
)
from .tcl import TCLCoefficients, tcl_coefficients, tcl_propagate, tcl_rates_perturbative
from .volterra import solve_amplitude

_KERNEL_PRIORITY = ("nz-exact", "nz-analytic", "nz-order4", "nz-order2")


class ScenarioRun:
    """Shared lazily-computed artifacts of one scenario."""

    def __init__(self, cfg: ScenarioConfig):
        self.cfg = cfg
        self.grid = cfg.grid
        self.cf = cfg.correlation

    @cached_property
    def amplitude(self):
        return solve_amplitude(self.cf, self.grid)

    @cached_property
    def exact_coeffs(self) -> TCLCoefficients:
        g, gdot = self.amplitude
        return tcl_coefficients(g, gdot, self.cfg.breakdown_threshold)

    @cached_property
    def markov_params(self) -> MarkovParams:
        if self.cfg.markov_override is not None:
            return MarkovParams(*self.cfg.markov_override)
        return born_markov_params(self.cf, self.grid)

    def kernel(self, provenance: str):
        if provenance == "exact":
            g, gdot = self.amplitude
            return nz_kernel_exact(self.cf, g, self.grid, gdot=gdot)
        if provenance == "analytic":
            return nz_kernel_lorentzian(self.cf.params, self.grid)
        if provenance == "order2":
            return nz_kernel_perturbative(self.cf, self.grid, 2)
        if provenance == "order4":
            return nz_kernel_perturbative(self.cf, self.grid, 4)
        raise ValueError(provenance)

    @cached_property
    def oracle_modes(self):
        if isinstance(self.cf, DiscreteModeCorrelation):
            return self.cf.modes
        return sample_lorentzian_modes(
            self.cf.params, 0.0, self.cfg.oracle_n_modes, self.cfg.oracle_cutoff_width
        )

    def perturbative_coeffs(self, order: int) -> TCLCoefficients:
        gamma2, shift2 = tcl_rates_perturbative(self.cf, self.grid, 2)
        if order == 2:
            return TCLCoefficients(gamma2, shift2)
        gamma4, shift4 = tcl_rates_perturbative(self.cf, self.grid, 4)
        return TCLCoefficients(
            RealSignal(self.grid, gamma2.values + gamma4.values),
            RealSignal(self.grid, shift2.values + shift4.values),
        )

    def trajectory(self, method: str) -> Trajectory:
        rho0 = self.cfg.initial_state
        if method == "exact":
            g, _ = self.amplitude
            return _map_trajectory(g.values, rho0, self.grid)
        if method == "tcl-exact":
            return tcl_propagate(self.exact_coeffs, rho0, self.grid)
        if method == "tcl-order2":
            return tcl_propagate(self.perturbative_coeffs(2), rho0, self.grid)
        if method == "tcl-order4":
            return tcl_propagate(self.perturbative_coeffs(4), rho0, self.grid)
        if method == "nz-exact":
            return nz_propagate(self.kernel("exact"), rho0, self.grid)
        if method == "nz-analytic":
            return nz_propagate(self.kernel("analytic"), rho0, self.grid)
        if method == "nz-order2":
            return nz_propagate(self.kernel("order2"), rho0, self.grid)
        if method == "nz-order4":
            return nz_propagate(self.kernel("order4"), rho0, self.grid)
        if method == "markov":
            return markov_propagate(self.markov_params, rho0, self.grid)
        if method == "ansatz":
            f = self.cf.sample(self.grid)
            h_kernel = RealSignal(self.grid, 2.0 * f.values.real)
            return ansatz_propagate(self.markov_params, h_kernel, rho0, self.grid)
        if method == "oracle":
            c1, _ = evolve_one_excitation(self.oracle_modes, 1.0 + 0.0j, self.grid)
            return _map_trajectory(c1.values, rho0, self.grid)
        raise ValueError(f"unknown method {method!r}")


def _map_trajectory(g_values: np.ndarray, rho0: QubitState, grid) -> Trajectory:
    rho11 = np.abs(g_values) ** 2 * rho0.rho11
    rho10 = g_values * rho0.rho10
    return Trajectory(grid, rho11, rho10)


def _compute_trajectories(run: ScenarioRun):
    out = {}
    for method in run.cfg.methods:
        try:
            out[method] = run.trajectory(method)
        except NumericsError as exc:
            if exc.method is None:
                exc.method = method
            raise
    return out


def _requested_kernel(run: ScenarioRun):
    """The kernel backing kernel.csv: most informative requested variant."""
    for name in _KERNEL_PRIORITY:
        if name in run.cfg.methods:
            return run.kernel(name.removeprefix("nz-"))
    return None


def _requested_rates(run: ScenarioRun, default_orders=False):
    """(gamma, shift, order_columns) for tcl_rates.csv, or None."""
    methods = run.cfg.methods
    wants_tcl = any(m.startswith("tcl-") for m in methods)
    if not wants_tcl and not default_orders:
        return None
    orders = [o for o in (2, 4) if f"tcl-order{o}" in methods]
    if default_orders and not orders:
        orders = [2, 4]
    coeffs = run.exact_coeffs
    columns = []
    for order in orders:
        gam, shf = tcl_rates_perturbative(run.cf, run.grid, order)
        columns.append((order, gam, shf))
    return coeffs.gamma, coeffs.shift, columns


def _build_report(run: ScenarioRun, trajectories, kernel):
    g, _ = run.amplitude
    report = {
        "grid": {"h": run.grid.h, "t_end": run.grid.t_end, "n_points": run.grid.n_points},
        "correlation": type(run.cf).__name__,
        "methods": sorted(trajectories),
        "initial_state": {
            "rho11": run.cfg.initial_state.rho11,
            "re_rho10": run.cfg.initial_state.rho10.real,
            "im_rho10": run.cfg.initial_state.rho10.imag,
        },
        "deviations": pairwise_deviations(trajectories),
        "min_rho11": {
            name: float(np.nanmin(traj.rho11)) for name, traj in trajectories.items()
        },
        "breakdown_time": None,
        "min_choi_eigenvalue_exact": float(np.min(min_choi_eigenvalues(g.values))),
        "identity_residuals": {
            "double_integral_rearrangement": check_identity_double_integral(
                run.cf, run.grid
            ),
        },
    }
    if "tcl-exact" in trajectories:
        report["breakdown_time"] = run.exact_coeffs.breakdown_time
    if kernel is not None:
        sum_res, eps_res = kernel.constraint_residuals(run.cf)
        report["identity_residuals"]["kernel_sum_constraint"] = sum_res
        report["identity_residuals"]["epsilon_constraint"] = eps_res
    return report


def cmd_simulate(cfg: ScenarioConfig, plots: bool) -> int:
    run = ScenarioRun(cfg)
    trajectories = _compute_trajectories(run)
    ensure_dir(cfg.out_dir)
    for method, traj in trajectories.items():
        write_trajectory_csv(os.path.join(cfg.out_dir, f"{method}.csv"), traj)
    kernel = _requested_kernel(run)
    if kernel is not None:
        write_kernel_csv(os.path.join(cfg.out_dir, "kernel.csv"), kernel)
    rates = _requested_rates(run)
    if rates is not None:
        write_rates_csv(os.path.join(cfg.out_dir, "tcl_rates.csv"), run.grid, *rates)
    report = _build_report(run, trajectories, kernel)
    write_report(os.path.join(cfg.out_dir, "report.json"), report)
    if plots:
        from .plots import render_figures

        render_figures(cfg.out_dir, trajectories, kernel, rates)
    if report["breakdown_time"] is not None:
        print(f"time-local generator breaks down at t = {report['breakdown_time']}")
    print(f"wrote {len(trajectories)} trajectories to {cfg.out_dir}")
    return 0


def cmd_kernel(cfg: ScenarioConfig, plots: bool) -> int:
    run = ScenarioRun(cfg)
    kernel = _requested_kernel(run)
    if kernel is None:
        kernel = run.kernel("exact")
    ensure_dir(cfg.out_dir)
    write_kernel_csv(os.path.join(cfg.out_dir, "kernel.csv"), kernel)
    if plots:
        from .plots import render_figures

        render_figures(cfg.out_dir, kernel=kernel)
    print(f"wrote {kernel.provenance} kernel to {os.path.join(cfg.out_dir, 'kernel.csv')}")
    return 0


def cmd_tcl_rates(cfg: ScenarioConfig, plots: bool) -> int:
    run = ScenarioRun(cfg)
    rates = _requested_rates(run, default_orders=True)
    ensure_dir(cfg.out_dir)
    write_rates_csv(os.path.join(cfg.out_dir, "tcl_rates.csv"), run.grid, *rates)
    if plots:
        from .plots import render_figures

        render_figures(cfg.out_dir, rates=rates)
    breakdown = run.exact_coeffs.breakdown_time
    if breakdown is not None:
        print(f"time-local generator breaks down at t = {breakdown}")
    print(f"wrote rates to {os.path.join(cfg.out_dir, 'tcl_rates.csv')}")
    return 0


def cmd_compare(cfg: ScenarioConfig) -> int:
    if len(cfg.methods) < 2:
        raise ConfigError("compare needs at least two methods")
    run = ScenarioRun(cfg)
    trajectories = _compute_trajectories(run)
    kernel = _requested_kernel(run)
    report = _build_report(run, trajectories, kernel)
    ensure_dir(cfg.out_dir)
    write_report(os.path.join(cfg.out_dir, "report.json"), report)
    print(f"wrote comparison of {len(trajectories)} methods to "
          f"{os.path.join(cfg.out_dir, 'report.json')}")
    return 0


def cmd_verify(cfg: ScenarioConfig) -> int:
    run = ScenarioRun(cfg)
    grid, cf = run.grid, run.cf
    checks = []

    # hermitian symmetry f(-tau) = conj(f(tau)) on the grid
    tau = grid.times
    forward = cf(tau)
    backward = cf(-tau)
    scale = max(1.0, float(np.max(np.abs(forward))))
    herm = float(np.max(np.abs(backward - np.conj(forward))))
    checks.append(("hermitian-symmetry", herm, 1e-14 * scale))

    g, gdot = run.amplitude
    contraction = float(np.max(np.abs(g.values))) - 1.0
    checks.append(("amplitude-contraction", contraction, 1e-10))

    kernel = run.kernel("exact")
    sum_res, eps_res = kernel.constraint_residuals(cf)
    checks.append(("kernel-sum-constraint", sum_res, 1e-12))
    checks.append(("kernel-epsilon-constraint", eps_res, 1e-12))

    # quadrature error of the identity residual scales with the squared
    # magnitude of the double integrals, roughly (max|f| * t_end)^2
    residual = check_identity_double_integral(cf, grid)
    id_scale = max(1.0, (scale * grid.t_end) ** 2)
    checks.append(("double-integral-identity", residual, max(1e-12, grid.h**2 * id_scale)))

    min_eig = float(np.min(min_choi_eigenvalues(g.values)))
    checks.append(("choi-positivity", -min_eig, 1e-12))

    failed = []
    for name, value, tol in checks:
        ok = value <= tol
        print(f"{'PASS' if ok else 'FAIL'} {name}: residual {value + 0.0:.6e} "
              f"(tolerance {tol:.1e})")
        if not ok:
            failed.append(name)
    if failed:
        print(f"{len(failed)} check(s) failed: {', '.join(failed)}")
        return 1
    print(f"all {len(checks)} checks passed")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="qdecay",
        description="Exact and approximate reduced dynamics of a decaying two-level emitter.",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    for name, help_text in (
        ("simulate", "run methods and write trajectories, kernel, rates, report, figures"),
        ("kernel", "write the memory-kernel triple (t, epsilon, k1, k2)"),
        ("tcl-rates", "write exact and perturbative time-local rates"),
        ("verify", "run invariant checks against the configured scenario"),
        ("compare", "run at least two methods and write report.json only"),
    ):
        p = sub.add_parser(name, help=help_text)
        src = p.add_mutually_exclusive_group(required=True)
        src.add_argument("--config", help="path to a scenario JSON file")
        src.add_argument("--preset", choices=PRESETS, help="built-in scenario")
        p.add_argument("--h", type=float, default=None, help="grid step override")
        p.add_argument("--t-end", type=float, default=None, help="grid length override")
        p.add_argument("--out", default=None, help="output directory override")
        if name in ("simulate", "kernel", "tcl-rates"):
            p.add_argument("--no-plots", action="store_true", help="skip figure rendering")
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if args.preset is not None:
            cfg = preset_config(args.preset, h=args.h, t_end=args.t_end, out_dir=args.out)
        else:
            cfg = load_config(args.config, h=args.h, t_end=args.t_end, out_dir=args.out)
        plots = not getattr(args, "no_plots", True)
        if args.command == "simulate":
            return cmd_simulate(cfg, plots)
        if args.command == "kernel":
            return cmd_kernel(cfg, plots)
        if args.command == "tcl-rates":
            return cmd_tcl_rates(cfg, plots)
        if args.command == "verify":
            return cmd_verify(cfg)
        if args.command == "compare":
            return cmd_compare(cfg)
        raise AssertionError(args.command)
    except ConfigError as exc:
        print(f"invalid config: {exc}", file=sys.stderr)
        return 2
    except NumericsError as exc:
        where = f" in method '{exc.method}'" if exc.method else ""
        print(f"numerical failure{where}: {exc}", file=sys.stderr)
        return 3


def entry():
    sys.exit(main())
