"""Scenario configuration: JSON schema, validation, and built-in presets.

A scenario pins down one reservoir, one grid, one initial state and the set
of methods to run.  Parsing is strict: unknown keys, malformed values and
physically inconsistent states are rejected with the config line they come
from whenever that line can be located.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

import numpy as np

from .core import ComplexSignal, QubitState, TimeGrid
from .reservoir import (
    CorrelationFunction,
    DiscreteModeCorrelation,
    LorentzianCorrelation,
    LorentzianParams,
    ModeSet,
    TabulatedCorrelation,
)

__all__ = ["ConfigError", "ScenarioConfig", "load_config", "preset_config", "PRESETS"]

METHODS = (
    "exact",
    "tcl-exact",
    "tcl-order2",
    "tcl-order4",
    "nz-exact",
    "nz-analytic",
    "nz-order2",
    "nz-order4",
    "markov",
    "ansatz",
    "oracle",
)

PRESETS = ("lorentzian-weak", "lorentzian-strong", "lorentzian-verystrong")

_PRESET_GAMMA0 = {
    "lorentzian-weak": 0.2,
    "lorentzian-strong": 1.0,
    "lorentzian-verystrong": 5.0,
}


class ConfigError(ValueError):
    """Invalid scenario configuration; carries a 1-based line number when known."""

    def __init__(self, message, line=None):
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
        self.line = line


@dataclass(frozen=True)
class ScenarioConfig:
    grid: TimeGrid
    correlation: CorrelationFunction
    initial_state: QubitState
    methods: tuple
    oracle_n_modes: int = 2001
    oracle_cutoff_width: float = 20.0
    markov_override: tuple | None = None  # (gamma_m, s_m)
    breakdown_threshold: float = 1e-8
    out_dir: str = "results"

    def is_lorentzian(self) -> bool:
        return isinstance(self.correlation, LorentzianCorrelation)


def _line_of(raw_text: str | None, key: str) -> int | None:
    """Best-effort 1-based line of a key's first occurrence in the raw config."""
    if raw_text is None:
        return None
    needle = f'"{key}"'
    for i, line in enumerate(raw_text.splitlines(), start=1):
        if needle in line:
            return i
    return None


class _Validator:
    def __init__(self, raw_text: str | None):
        self.raw_text = raw_text

    def fail(self, key: str, message: str):
        raise ConfigError(message, line=_line_of(self.raw_text, key))

    def number(self, section: dict, key: str, *, default=None, minimum=None,
               maximum=None, strict_min=False, finite=True):
        if key not in section:
            if default is None:
                self.fail(key, f"missing required key '{key}'")
            return default
        value = section[key]
        if isinstance(value, bool) or not isinstance(value, (int, float)):
            self.fail(key, f"'{key}' must be a number, got {value!r}")
        value = float(value)
        if finite and not np.isfinite(value):
            self.fail(key, f"'{key}' must be finite, got {value}")
        if minimum is not None:
            if strict_min and value <= minimum:
                self.fail(key, f"'{key}' must be > {minimum}, got {value}")
            if not strict_min and value < minimum:
                self.fail(key, f"'{key}' must be >= {minimum}, got {value}")
        if maximum is not None and value > maximum:
            self.fail(key, f"'{key}' must be <= {maximum}, got {value}")
        return value

    def section(self, data: dict, key: str, required=True) -> dict | None:
        if key not in data:
            if required:
                self.fail(key, f"missing required section '{key}'")
            return None
        if not isinstance(data[key], dict):
            self.fail(key, f"section '{key}' must be an object")
        return data[key]


def _build_correlation(v: _Validator, section: dict, grid: TimeGrid):
    kind = section.get("type")
    if kind == "lorentzian":
        gamma0 = v.number(section, "gamma0", minimum=0.0)
        lam = v.number(section, "lambda", default=1.0, minimum=0.0, strict_min=True)
        return LorentzianCorrelation(LorentzianParams(gamma0, lam))
    if kind == "modes":
        omega0 = v.number(section, "omega0", default=0.0)
        raw = section.get("modes")
        if not isinstance(raw, list):
            v.fail("modes", "'modes' must be a list of [re_g, im_g, omega] triples")
        pairs = []
        for entry in raw:
            if (
                not isinstance(entry, list)
                or len(entry) != 3
                or any(isinstance(x, bool) or not isinstance(x, (int, float)) for x in entry)
                or not all(np.isfinite(float(x)) for x in entry)
            ):
                v.fail("modes", f"malformed mode entry {entry!r}")
            pairs.append((complex(entry[0], entry[1]), float(entry[2])))
        return DiscreteModeCorrelation(ModeSet.from_pairs(omega0, pairs))
    if kind == "tabulated":
        h = v.number(section, "h", minimum=0.0, strict_min=True)
        raw = section.get("values")
        if not isinstance(raw, list) or len(raw) < 2:
            v.fail("values", "'values' must be a list of at least two [re, im] pairs")
        vals = []
        for entry in raw:
            if (
                not isinstance(entry, list)
                or len(entry) != 2
                or any(isinstance(x, bool) or not isinstance(x, (int, float)) for x in entry)
            ):
                v.fail("values", f"malformed correlation sample {entry!r}")
            if not all(np.isfinite(float(x)) for x in entry):
                v.fail("values", f"correlation samples must be finite, got {entry!r}")
            vals.append(complex(entry[0], entry[1]))
        table_grid = TimeGrid(h, len(vals) - 1)
        table = TabulatedCorrelation(ComplexSignal(table_grid, np.array(vals)))
        if table_grid.t_end < grid.t_end * (1.0 - 1e-12):
            v.fail(
                "values",
                f"tabulated correlation covers [0, {table_grid.t_end}] but the "
                f"grid runs to {grid.t_end}",
            )
        table.require_resolves(grid)
        return table
    v.fail("type", f"unknown correlation type {kind!r}")


def _parse(data: dict, raw_text: str | None) -> ScenarioConfig:
    if not isinstance(data, dict):
        raise ConfigError("top-level config must be a JSON object")
    v = _Validator(raw_text)

    known = {
        "grid", "correlation", "initial_state", "methods", "oracle",
        "markov", "tolerances", "out_dir",
    }
    for key in data:
        if key not in known:
            v.fail(key, f"unknown config key '{key}'")

    grid_sec = v.section(data, "grid")
    h = v.number(grid_sec, "h", minimum=0.0, strict_min=True)
    t_end = v.number(grid_sec, "t_end", minimum=0.0, strict_min=True)
    n = round(t_end / h)
    if n < 1:
        v.fail("t_end", f"grid must contain at least one step, got t_end={t_end}, h={h}")
    grid = TimeGrid(h, n)

    corr_sec = v.section(data, "correlation")
    correlation = _build_correlation(v, corr_sec, grid)

    state_sec = v.section(data, "initial_state")
    rho11 = v.number(state_sec, "rho11", minimum=0.0, maximum=1.0)
    re10 = v.number(state_sec, "re_rho10", default=0.0)
    im10 = v.number(state_sec, "im_rho10", default=0.0)
    rho10 = complex(re10, im10)
    if abs(rho10) ** 2 > rho11 * (1.0 - rho11) + 1e-12:
        v.fail(
            "initial_state",
            f"initial state is not positive: |rho10|^2 = {abs(rho10)**2} exceeds "
            f"rho11 * rho00 = {rho11 * (1.0 - rho11)}",
        )
    state = QubitState(rho11, rho10)

    methods = data.get("methods")
    if not isinstance(methods, list) or not methods:
        v.fail("methods", "'methods' must be a non-empty list")
    for m in methods:
        if m not in METHODS:
            v.fail("methods", f"unknown method {m!r}; choose from {', '.join(METHODS)}")
    if len(set(methods)) != len(methods):
        v.fail("methods", "duplicate entries in 'methods'")
    if "nz-analytic" in methods and not isinstance(correlation, LorentzianCorrelation):
        v.fail("methods", "method 'nz-analytic' requires a lorentzian correlation")
    if "oracle" in methods and isinstance(correlation, TabulatedCorrelation):
        v.fail("methods", "method 'oracle' needs a lorentzian or discrete-mode reservoir")

    oracle_sec = v.section(data, "oracle", required=False) or {}
    n_modes = v.number(oracle_sec, "n_modes", default=2001.0, minimum=2.0)
    if int(n_modes) != n_modes:
        v.fail("n_modes", f"'n_modes' must be an integer, got {n_modes}")
    cutoff = v.number(oracle_sec, "cutoff_width", default=20.0, minimum=0.0, strict_min=True)

    markov_sec = v.section(data, "markov", required=False)
    markov_override = None
    if markov_sec is not None:
        gm = v.number(markov_sec, "gamma_m", minimum=0.0)
        sm = v.number(markov_sec, "s_m", default=0.0)
        markov_override = (gm, sm)

    tol_sec = v.section(data, "tolerances", required=False) or {}
    threshold = v.number(tol_sec, "breakdown_threshold", default=1e-8, minimum=0.0,
                         strict_min=True)

    out_dir = data.get("out_dir", "results")
    if not isinstance(out_dir, str) or not out_dir:
        v.fail("out_dir", "'out_dir' must be a non-empty string")

    return ScenarioConfig(
        grid=grid,
        correlation=correlation,
        initial_state=state,
        methods=tuple(methods),
        oracle_n_modes=int(n_modes),
        oracle_cutoff_width=cutoff,
        markov_override=markov_override,
        breakdown_threshold=threshold,
        out_dir=out_dir,
    )


def load_config(path: str, *, h: float | None = None, t_end: float | None = None,
                out_dir: str | None = None) -> ScenarioConfig:
    """Load and validate a scenario file, applying any command-line overrides."""
    try:
        with open(path, "r", encoding="utf-8") as fh:
            raw_text = fh.read()
    except OSError as exc:
        raise ConfigError(f"cannot read config file {path}: {exc}") from exc
    try:
        data = json.loads(raw_text)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"malformed JSON: {exc.msg}", line=exc.lineno) from exc
    data = _apply_overrides(data, h=h, t_end=t_end, out_dir=out_dir)
    return _parse(data, raw_text)


def preset_config(name: str, *, h: float | None = None, t_end: float | None = None,
                  out_dir: str | None = None) -> ScenarioConfig:
    """Built-in Lorentzian scenarios: weak (0.2), strong (1) and very strong (5)
    coupling in units of the spectral width."""
    if name not in _PRESET_GAMMA0:
        raise ConfigError(f"unknown preset {name!r}; choose from {', '.join(PRESETS)}")
    data = {
        "grid": {"h": 1e-3, "t_end": 10.0},
        "correlation": {"type": "lorentzian", "gamma0": _PRESET_GAMMA0[name], "lambda": 1.0},
        "initial_state": {"rho11": 0.5, "re_rho10": 0.5, "im_rho10": 0.0},
        "methods": [
            "exact", "tcl-exact", "tcl-order2", "tcl-order4",
            "nz-exact", "nz-analytic", "nz-order2", "nz-order4",
            "markov", "ansatz",
        ],
        "oracle": {"n_modes": 2001, "cutoff_width": 20.0},
        "out_dir": f"results-{name}",
    }
    data = _apply_overrides(data, h=h, t_end=t_end, out_dir=out_dir)
    return _parse(data, None)


def _apply_overrides(data, *, h, t_end, out_dir):
    if not isinstance(data, dict):
        raise ConfigError("top-level config must be a JSON object")
    if h is not None or t_end is not None:
        grid = dict(data.get("grid") or {})
        if h is not None:
            grid["h"] = h
        if t_end is not None:
            grid["t_end"] = t_end
        data = {**data, "grid": grid}
    if out_dir is not None:
        data = {**data, "out_dir": out_dir}
    return data
