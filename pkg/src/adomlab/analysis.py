"""Error tables against the reference integrator, root-test radius estimates,
and the small-t validity check."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .adm import ModelParams, TaylorSeries, evaluate
from .field import ComplexField, RealField, l2_norm, sup_norm
from .reference import BlowUpError, IntegratorConfig, integrate_to

ERROR_HEADER = "t,order,sup_err,l2_err,err_abs_u,err_abs_u2"

#: Relative error regarded as "the partial sum is still valid".
VALID_REL_ERR = 1e-2
#: Error growth factor between R/4 and 2R regarded as divergence.
DIVERGENCE_FACTOR = 10.0


def _fmt(v: float) -> str:
    return f"{v:.16e}"


@dataclass(frozen=True)
class ErrorRow:
    t: float
    order: int
    sup_err: float
    l2_err: float
    err_abs_u: float
    err_abs_u2: float

    def csv(self) -> str:
        vals = [self.sup_err, self.l2_err, self.err_abs_u, self.err_abs_u2]
        return ",".join([_fmt(self.t), str(self.order)] + [_fmt(v) for v in vals])


def compare_fields(approx: ComplexField, ref: ComplexField, t: float, order: int) -> ErrorRow:
    diff = approx - ref
    a, r = np.abs(approx.values), np.abs(ref.values)
    return ErrorRow(
        t=t,
        order=order,
        sup_err=sup_norm(diff),
        l2_err=l2_norm(diff),
        err_abs_u=float(np.max(np.abs(a - r))),
        err_abs_u2=float(np.max(np.abs(a**2 - r**2))),
    )


def _lookup(oracle: Sequence[tuple[float, ComplexField]], t: float) -> ComplexField:
    for ts, u in oracle:
        if abs(ts - t) <= 1e-12 * max(1.0, abs(t)):
            return u
    raise KeyError(f"reference has no snapshot at t = {t!r}")


def error_table(
    s: TaylorSeries,
    oracle: Sequence[tuple[float, ComplexField]],
    orders: Sequence[int],
    times: Sequence[float] | None = None,
) -> list[ErrorRow]:
    """One row per ``(t, order)``; ``times`` defaults to every snapshot time."""
    if times is None:
        times = [t for t, _ in oracle]
    rows = []
    for t in times:
        ref = _lookup(oracle, t)
        for N in orders:
            rows.append(compare_fields(evaluate(s, t, N), ref, float(t), int(N)))
    return rows


def format_error_table(rows: Sequence[ErrorRow]) -> str:
    return "\n".join([ERROR_HEADER] + [r.csv() for r in rows]) + "\n"


@dataclass(frozen=True)
class RadiusReport:
    per_point: RealField
    global_R: float
    tail_window: int

    def csv(self) -> str:
        lines = ["x,R"]
        for x, r in zip(self.per_point.grid.x, self.per_point.values):
            lines.append(f"{_fmt(x)},{_fmt(r)}")
        lines.append(f"# global_R={_fmt(self.global_R)}")
        return "\n".join(lines) + "\n"


def radius_estimate(s: TaylorSeries, tail_window: int = 4) -> RadiusReport:
    """Per-point Cauchy root test over the last ``tail_window`` coefficients."""
    if tail_window < 3:
        raise ValueError(f"tail_window must be at least 3, got {tail_window}")
    if s.order < tail_window:
        raise ValueError(f"series of order {s.order} is too short for tail_window={tail_window}")
    js = range(s.order - tail_window + 1, s.order + 1)
    roots = np.stack([np.abs(s[j].values) ** (1.0 / j) for j in js])
    tiny = np.stack([np.abs(s[j].values) <= 1e-300 for j in js]).all(axis=0)
    with np.errstate(divide="ignore"):
        R = np.where(tiny, np.inf, 1.0 / roots.max(axis=0))
    return RadiusReport(RealField(s.grid, R, check=False), float(R.min()), tail_window)


@dataclass(frozen=True)
class DivergenceVerdict:
    R: float
    t_inside: float
    t_outside: float
    err_inside: float
    err_outside: float | None
    scale: float
    clause_a: bool
    clause_b: bool | None
    note: str = ""
    reference_blew_up: bool = False

    @property
    def passed(self) -> bool:
        """Clause (a) holds and clause (b) holds or the reference diverged first."""
        return self.clause_a and self.clause_b is not False

    def text(self) -> str:
        def f(v):
            return "nan" if v is None else _fmt(v)

        def verdict(c):
            return "skipped" if c is None else ("pass" if c else "fail")

        return "\n".join([
            f"global_R={f(self.R)}",
            f"t_inside={f(self.t_inside)}",
            f"t_outside={f(self.t_outside)}",
            f"sup_norm_u0={f(self.scale)}",
            f"err_inside={f(self.err_inside)}",
            f"err_outside={f(self.err_outside)}",
            f"clause_a={verdict(self.clause_a)}",
            f"clause_b={verdict(self.clause_b)}",
            f"note={self.note}",
            f"verdict={'pass' if self.passed else 'fail'}",
        ]) + "\n"


def divergence_report(
    s: TaylorSeries, params: ModelParams, R: RadiusReport, cfg: IntegratorConfig
) -> DivergenceVerdict:
    """Check that the full partial sum is accurate at ``R/4`` and has
    degraded by at least :data:`DIVERGENCE_FACTOR` at ``2R``.

    ``cfg.dt`` caps the reference step and ``cfg.t_end`` is the horizon; if
    ``2R`` lies beyond it or the reference blows up first, clause (b) is
    skipped and the reason recorded.
    """
    u0 = s[0]
    scale = sup_norm(u0)
    Rg = R.global_R
    if not math.isfinite(Rg):
        return DivergenceVerdict(Rg, math.inf, math.inf, 0.0, None, scale, True, None,
                                 "series terminates; no finite radius")
    t_in, t_out = Rg / 4.0, 2.0 * Rg
    want = [t_in] + ([t_out] if t_out <= cfg.t_end else [])
    note = "" if len(want) == 2 else "2R beyond integration horizon"
    blew_up = False
    try:
        ref = dict(integrate_to(u0, params, want, dt_max=cfg.dt, c_stab=cfg.c_stab))
    except BlowUpError as exc:
        ref = dict(integrate_to(u0, params, [t_in], dt_max=cfg.dt, c_stab=cfg.c_stab))
        want = [t_in]
        note = f"reference unavailable: blow-up at t={exc.t:.6g}"
        blew_up = True
    err_in = sup_norm(evaluate(s, t_in) - ref[t_in])
    clause_a = err_in <= VALID_REL_ERR * scale
    err_out = clause_b = None
    if len(want) == 2:
        with np.errstate(over="ignore", invalid="ignore"):
            err_out = sup_norm(evaluate(s, t_out) - ref[t_out])
        clause_b = bool(err_out >= DIVERGENCE_FACTOR * err_in) if math.isfinite(err_out) else True
    return DivergenceVerdict(
        Rg, t_in, t_out, err_in, err_out, scale, bool(clause_a), clause_b, note, blew_up
    )
