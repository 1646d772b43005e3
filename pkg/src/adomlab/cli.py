"""Command-line front end.

Usage::

    adomlab <subcommand> --config <path> [--out <dir>]

Exit codes: 0 success, 2 configuration/validation error, 3 numerical
blow-up, 4 square-root domain violation in a soliton profile.
"""

from __future__ import annotations

import argparse
import logging
import sys
from pathlib import Path

from .adm import SeriesOverflowError, build_series
from .analysis import divergence_report, error_table, format_error_table, radius_estimate
from .config import ConfigError, RunConfig, load_config
from .field import rel_sup_diff, sup_norm
from .iadm import iadm_build, recombine
from .reference import (
    RESIDUAL_TOL,
    BlowUpError,
    DomainError,
    integrate_to,
    residual,
    taylor_oracle,
)

log = logging.getLogger("adomlab")

EXIT_OK, EXIT_CONFIG, EXIT_BLOWUP, EXIT_DOMAIN = 0, 2, 3, 4
IADM_TOL = 1e-12


def _fmt(v: float) -> str:
    return f"{v:.16e}"


def _write(out: Path, name: str, cfg: RunConfig, command: str, body: str) -> Path:
    out.mkdir(parents=True, exist_ok=True)
    path = out / name
    path.write_text(cfg.header(command) + body)
    log.info("wrote %s", path)
    return path


def cmd_expand(cfg: RunConfig, out: Path) -> int:
    params, u0, N = cfg.params(), cfg.initial_field(), cfg.order()
    s = build_series(u0, params, N)
    cols = ["x"] + [f"{p}(v{j})" for j in range(N + 1) for p in ("re", "im")]
    lines = ["# " + " ".join(cols)]
    coeffs = s.as_array()
    for m, x in enumerate(u0.grid.x):
        row = [x]
        for j in range(N + 1):
            row += [coeffs[j, m].real, coeffs[j, m].imag]
        lines.append(" ".join(_fmt(v) for v in row))
    _write(out, "series.txt", cfg, "expand", "\n".join(lines) + "\n")
    return EXIT_OK


def cmd_compare(cfg: RunConfig, out: Path) -> int:
    params, u0 = cfg.params(), cfg.initial_field()
    integ = cfg.integrator(params)
    times = cfg.times()
    if max(times, default=0.0) > integ.t_end:
        raise ConfigError("analysis.times: beyond integrator.t_end")
    s = build_series(u0, params, cfg.order())
    ref = integrate_to(u0, params, times, dt_max=integ.dt, c_stab=integ.c_stab)
    rows = error_table(s, ref, cfg.orders(), times)
    _write(out, "errors.csv", cfg, "compare", format_error_table(rows))
    return EXIT_OK


def cmd_iadm_check(cfg: RunConfig, out: Path) -> int:
    params, u0, N = cfg.params(), cfg.initial_field(), cfg.order()
    adm = build_series(u0, params, N)
    iadm = recombine(iadm_build(u0, params, N), params)
    devs = [rel_sup_diff(iadm[j], adm[j]) for j in range(N + 1)]
    worst = max(devs)
    lines = ["j,rel_dev"] + [f"{j},{_fmt(d)}" for j, d in enumerate(devs)]
    lines += [f"# max_deviation={_fmt(worst)}", f"# tolerance={_fmt(IADM_TOL)}",
              f"# verdict={'pass' if worst <= IADM_TOL else 'fail'}"]
    _write(out, "iadm_check.csv", cfg, "iadm-check", "\n".join(lines) + "\n")
    return EXIT_OK


def cmd_radius(cfg: RunConfig, out: Path) -> int:
    params, u0, N = cfg.params(), cfg.initial_field(), cfg.order()
    window = cfg.integer("analysis", "tail_window", minimum=3)
    if N < window + 2:
        raise ConfigError(f"series.order: must be at least tail_window + 2 = {window + 2}")
    integ = cfg.integrator(params)
    s = build_series(u0, params, N)
    report = radius_estimate(s, window)
    verdict = divergence_report(s, params, report, integ)
    _write(out, "radius.csv", cfg, "radius", report.csv())
    _write(out, "divergence.txt", cfg, "radius", verdict.text())
    return EXIT_OK


def cmd_oracle(cfg: RunConfig, out: Path) -> int:
    params, u0 = cfg.params(), cfg.initial_field()
    js = cfg.integers("oracle", "orders")
    if any(not 1 <= j <= 4 for j in js):
        raise ConfigError(f"oracle.orders: supported orders are 1..4, got {js}")
    dt_fd = cfg.real("oracle", "dt_fd", positive=True)
    substeps = cfg.integer("oracle", "substeps", minimum=1)
    s = build_series(u0, params, max(js, default=0))
    lines = ["j,rel_dev,abs_dev,sup_v"]
    for j in js:
        est = taylor_oracle(u0, params, j, dt_fd, substeps=substeps)
        lines.append(",".join([
            str(j), _fmt(rel_sup_diff(est, s[j])), _fmt(sup_norm(est - s[j])), _fmt(sup_norm(s[j]))
        ]))
    _write(out, "oracle.csv", cfg, "oracle", "\n".join(lines) + "\n")
    return EXIT_OK


def cmd_soliton_validate(cfg: RunConfig, out: Path) -> int:
    params, grid, spec = cfg.params(), cfg.grid(), cfg.soliton()
    t = cfg.real("soliton", "t")
    dt_fd = cfg.real("soliton", "dt_fd", positive=True)
    try:
        r = residual(spec, params, grid, t, dt_fd)
    except DomainError:
        raise
    except ValueError as exc:
        raise ConfigError(f"soliton: {exc}") from None
    valid = r <= RESIDUAL_TOL
    body = "\n".join([
        f"residual={_fmt(r)}",
        f"threshold={_fmt(RESIDUAL_TOL)}",
        f"verdict={'valid' if valid else 'invalid'}",
    ]) + "\n"
    _write(out, "residual.txt", cfg, "soliton-validate", body)
    return EXIT_OK


COMMANDS = {
    "expand": cmd_expand,
    "compare": cmd_compare,
    "iadm-check": cmd_iadm_check,
    "radius": cmd_radius,
    "oracle": cmd_oracle,
    "soliton-validate": cmd_soliton_validate,
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="adomlab", description="Adomian/Taylor series experiments for u_t = a u_xx + b |u|^2 u_x."
    )
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        p = sub.add_parser(name)
        p.add_argument("--config", required=True, type=Path)
        p.add_argument("--out", type=Path, default=Path("."))
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(
        level=logging.INFO if args.verbose else logging.WARNING, format="%(levelname)s: %(message)s"
    )
    try:
        cfg = load_config(args.config)
        return COMMANDS[args.command](cfg, args.out)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except DomainError as exc:
        print(f"domain error: {exc}", file=sys.stderr)
        return EXIT_DOMAIN
    except BlowUpError as exc:
        print(f"numerical blow-up: reference diverged at t = {exc.t:.6g}", file=sys.stderr)
        return EXIT_BLOWUP
    except SeriesOverflowError as exc:
        print(f"numerical blow-up: {exc}", file=sys.stderr)
        return EXIT_BLOWUP


if __name__ == "__main__":
    sys.exit(main())
