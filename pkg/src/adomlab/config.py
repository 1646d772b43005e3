"""Run configuration: a sectioned ``key = value`` file (INI syntax).

Every key has a default, so an empty file describes the stock experiment:
the ``eq3`` model with ``a = 5, b = 10`` and a sech-shaped initial profile.
The profile parameters are placeholders chosen for this tool; they are
not taken from any published run.
"""

from __future__ import annotations

import configparser
import math
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .adm import ModelParams
from .field import ComplexField, GridError, GridSpec, make_grid
from .reference import (
    IntegratorConfig,
    SolitonSpec,
    constant_phase,
    field_from_samples,
    linear_phase,
    parse_snapshots,
    soliton_eval,
    tabulated_phase,
)

DEFAULTS: dict[str, dict[str, str]] = {
    "model": {
        "preset": "eq3",
        "a": "5",
        "b": "10",
        "alpha_re": "0",
        "alpha_im": "-5",
        "beta_re": "10",
        "beta_im": "0",
    },
    "grid": {"x0": "-128", "length": "256", "n": "256"},
    "initial": {
        "profile": "sech_profile",
        # constant
        "value_re": "1",
        "value_im": "0",
        # plane_wave
        "amplitude": "1",
        "kappa": "0",
        # sech_profile: sqrt(gamma + eta*sech(lambda*(x - center))) * exp(-i*k*x)
        "gamma": "0.5",
        "eta": "0.5",
        "lambda": "0.25",
        "k": "0",
        "center": "0",
        # file
        "path": "",
    },
    "soliton": {
        "gamma": "1",
        "eta": "0",
        "lambda": "1",
        "nu": "0",
        "omega": "0",
        "k": "0",
        "sign": "1",
        "B": "0",
        "theta": "constant 0",
        "t": "0",
        "dt_fd": "1e-5",
    },
    "series": {"order": "12"},
    "integrator": {"dt": "auto", "t_end": "2", "store_every": "1", "c_stab": "0.2"},
    "analysis": {"times": "0.1, 0.3, 0.5", "orders": "auto", "tail_window": "4"},
    "oracle": {"orders": "1, 2, 3, 4", "dt_fd": "1e-3", "substeps": "4"},
}

PROFILES = ("constant", "plane_wave", "sech_profile", "soliton", "file")
PRESETS = ("eq1", "eq3", "custom")


class ConfigError(ValueError):
    """Invalid configuration; the message names the offending ``section.key``."""


@dataclass
class RunConfig:
    """Resolved configuration plus the objects built from it."""

    raw: dict[str, dict[str, str]]
    source: Path | None = None

    # -- typed access --------------------------------------------------------

    def get(self, section: str, key: str) -> str:
        return self.raw[section][key]

    def real(self, section: str, key: str, *, positive=False, nonneg=False) -> float:
        text = self.get(section, key)
        try:
            v = float(text)
        except ValueError:
            raise ConfigError(f"{section}.{key}: expected a number, got {text!r}") from None
        if not math.isfinite(v):
            raise ConfigError(f"{section}.{key}: must be finite")
        if positive and v <= 0:
            raise ConfigError(f"{section}.{key}: must be positive, got {v}")
        if nonneg and v < 0:
            raise ConfigError(f"{section}.{key}: must be nonnegative, got {v}")
        return v

    def integer(self, section: str, key: str, minimum: int | None = None) -> int:
        text = self.get(section, key)
        try:
            v = int(text)
        except ValueError:
            raise ConfigError(f"{section}.{key}: expected an integer, got {text!r}") from None
        if minimum is not None and v < minimum:
            raise ConfigError(f"{section}.{key}: must be at least {minimum}, got {v}")
        return v

    def reals(self, section: str, key: str) -> list[float]:
        text = self.get(section, key)
        try:
            return [float(p) for p in text.replace(",", " ").split()]
        except ValueError:
            raise ConfigError(f"{section}.{key}: expected numbers, got {text!r}") from None

    def integers(self, section: str, key: str) -> list[int]:
        text = self.get(section, key)
        try:
            return [int(p) for p in text.replace(",", " ").split()]
        except ValueError:
            raise ConfigError(f"{section}.{key}: expected integers, got {text!r}") from None

    # -- domain objects ------------------------------------------------------

    def params(self) -> ModelParams:
        preset = self.get("model", "preset")
        if preset not in PRESETS:
            raise ConfigError(f"model.preset: expected one of {PRESETS}, got {preset!r}")
        if preset == "custom":
            alpha = complex(self.real("model", "alpha_re"), self.real("model", "alpha_im"))
            beta = complex(self.real("model", "beta_re"), self.real("model", "beta_im"))
            if alpha == 0:
                raise ConfigError("model.alpha_re/alpha_im: alpha must be nonzero")
            return ModelParams(alpha, beta)
        a, b = self.real("model", "a"), self.real("model", "b")
        if a == 0:
            raise ConfigError("model.a: must be nonzero")
        return ModelParams.from_eq1(a, b) if preset == "eq1" else ModelParams.from_eq3(a, b)

    def grid(self) -> GridSpec:
        try:
            return make_grid(
                self.real("grid", "x0"), self.real("grid", "length"), self.integer("grid", "n")
            )
        except GridError as exc:
            raise ConfigError(f"grid: {exc}") from None

    def order(self) -> int:
        return self.integer("series", "order", minimum=0)

    def soliton(self) -> SolitonSpec:
        sec = "soliton"
        sign = self.integer(sec, "sign")
        if sign not in (1, -1):
            raise ConfigError(f"soliton.sign: must be +1 or -1, got {sign}")
        return SolitonSpec(
            gamma=self.real(sec, "gamma"),
            eta=self.real(sec, "eta"),
            lam=self.real(sec, "lambda"),
            nu=self.real(sec, "nu"),
            omega=self.real(sec, "omega"),
            k=self.real(sec, "k"),
            sign=sign,
            theta=self._theta(),
            B=self.real(sec, "B"),
        )

    def _theta(self):
        spec = self.get("soliton", "theta").split()
        kind, args = (spec[0], spec[1:]) if spec else ("", [])
        try:
            if kind == "constant" and len(args) == 1:
                return constant_phase(float(args[0]))
            if kind == "linear" and len(args) == 2:
                return linear_phase(float(args[0]), float(args[1]))
            if kind == "table" and len(args) == 1:
                path = self._path(args[0])
                data = np.loadtxt(path, comments="#", ndmin=2)
                return tabulated_phase(data[:, 0], data[:, 1])
        except (OSError, ValueError) as exc:
            raise ConfigError(f"soliton.theta: {exc}") from None
        raise ConfigError(
            "soliton.theta: expected 'constant c', 'linear c0 c1' or 'table <path>', "
            f"got {self.get('soliton', 'theta')!r}"
        )

    def _path(self, text: str) -> Path:
        p = Path(text)
        if not p.is_absolute() and self.source is not None:
            p = self.source.parent / p
        return p

    def initial_field(self) -> ComplexField:
        """Initial condition on :meth:`grid`.

        Raises :class:`~adomlab.reference.DomainError` when a soliton
        profile has a negative square-root argument.
        """
        grid = self.grid()
        sec = "initial"
        profile = self.get(sec, "profile")
        if profile not in PROFILES:
            raise ConfigError(f"initial.profile: expected one of {PROFILES}, got {profile!r}")
        if profile == "constant":
            c = complex(self.real(sec, "value_re"), self.real(sec, "value_im"))
            return ComplexField.constant(grid, c)
        if profile == "plane_wave":
            amp, kappa = self.real(sec, "amplitude"), self.real(sec, "kappa")
            if not grid.admits_wavenumber(kappa):
                raise ConfigError(f"initial.kappa: {kappa} is not commensurate with the grid")
            return ComplexField.from_function(grid, lambda x: amp * np.exp(1j * kappa * x))
        if profile == "sech_profile":
            gamma, eta = self.real(sec, "gamma"), self.real(sec, "eta")
            lam, k = self.real(sec, "lambda"), self.real(sec, "k")
            xc = self.real(sec, "center")
            if not grid.admits_wavenumber(k):
                raise ConfigError(f"initial.k: {k} is not commensurate with the grid")
            return ComplexField.from_function(grid, lambda x: sech_profile(x, gamma, eta, lam, k, xc))
        if profile == "soliton":
            try:
                return soliton_eval(self.soliton(), grid, 0.0)
            except ValueError as exc:
                if type(exc) is ValueError:
                    raise ConfigError(f"soliton: {exc}") from None
                raise
        path = self.get(sec, "path")
        if not path:
            raise ConfigError("initial.path: required for profile 'file'")
        try:
            blocks = parse_snapshots(self._path(path).read_text())
            t, x, u = blocks[0]
            f = field_from_samples(x, u)
        except (OSError, ValueError, IndexError, GridError) as exc:
            raise ConfigError(f"initial.path: {exc}") from None
        if f.grid.n != grid.n or not np.allclose(
            [f.grid.x0, f.grid.length], [grid.x0, grid.length], rtol=1e-12, atol=1e-12
        ):
            raise ConfigError("initial.path: samples do not match the [grid] section")
        return ComplexField(grid, f.values)

    def integrator(self, params: ModelParams | None = None) -> IntegratorConfig:
        sec = "integrator"
        params = params or self.params()
        c_stab = self.real(sec, "c_stab", positive=True)
        bound = c_stab * self.grid().h ** 2 / abs(params.alpha)
        dt = bound if self.get(sec, "dt") == "auto" else self.real(sec, "dt", positive=True)
        try:
            cfg = IntegratorConfig(
                dt=dt,
                t_end=self.real(sec, "t_end", nonneg=True),
                store_every=self.integer(sec, "store_every", minimum=1),
                c_stab=c_stab,
            )
            cfg.check_stability(self.grid(), params)
        except ValueError as exc:
            raise ConfigError(f"integrator: {exc}") from None
        return cfg

    def times(self) -> list[float]:
        ts = self.reals("analysis", "times")
        if any(t < 0 for t in ts):
            raise ConfigError("analysis.times: must be nonnegative")
        return ts

    def orders(self) -> list[int]:
        if self.get("analysis", "orders") == "auto":
            return [self.order()]
        out = self.integers("analysis", "orders")
        N = self.order()
        if any(not 0 <= o <= N for o in out):
            raise ConfigError(f"analysis.orders: each order must lie in [0, {N}]")
        return out

    # -- provenance ----------------------------------------------------------

    def header(self, command: str) -> str:
        lines = [f"# adomlab {command}"]
        for section in DEFAULTS:
            lines.append(f"# [{section}]")
            for key in DEFAULTS[section]:
                lines.append(f"#   {key} = {self.raw[section][key]}")
        return "\n".join(lines) + "\n"


def sech_profile(x, gamma, eta, lam, k=0.0, center=0.0):
    """``sqrt(gamma + eta*sech(lam*(x - center))) * exp(-i*k*x)``."""
    rho = gamma + eta / np.cosh(lam * (np.asarray(x) - center))
    if np.any(rho < 0):
        raise ConfigError("initial: gamma + eta*sech(...) must be nonnegative")
    return np.sqrt(rho) * np.exp(-1j * k * np.asarray(x))


def parse_config(text: str, source: Path | None = None) -> RunConfig:
    parser = configparser.ConfigParser(inline_comment_prefixes=(";", "#"), interpolation=None)
    parser.optionxform = str
    try:
        parser.read_string(text)
    except configparser.Error as exc:
        raise ConfigError(f"config syntax: {exc}") from None
    raw = {sec: dict(vals) for sec, vals in DEFAULTS.items()}
    for section in parser.sections():
        if section not in DEFAULTS:
            raise ConfigError(f"[{section}]: unknown section")
        for key, value in parser.items(section):
            if key not in DEFAULTS[section]:
                raise ConfigError(f"{section}.{key}: unknown key")
            raw[section][key] = value.strip()
    return RunConfig(raw, source)


def load_config(path: str | Path) -> RunConfig:
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from None
    return parse_config(text, path)
