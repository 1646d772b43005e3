import numpy as np
import pytest

from adomlab.adm import ModelParams, TaylorSeries, build_series, evaluate
from adomlab.analysis import (
    ERROR_HEADER,
    compare_fields,
    divergence_report,
    error_table,
    format_error_table,
    radius_estimate,
)
from adomlab.field import ComplexField, make_grid, sup_norm
from adomlab.reference import IntegratorConfig, integrate_to

from _support import EQ3, sech_u0

GRID16 = make_grid(0, 2 * np.pi, 16)
LINEAR = ModelParams(-1j, 0)


def plane_wave(kappa=1, grid=GRID16):
    return ComplexField.from_function(grid, lambda x: np.exp(1j * kappa * x))


def geometric_series(c, N, grid=GRID16):
    w = ComplexField.from_function(grid, lambda x: (2 + np.cos(x)) / 3)
    return TaylorSeries(LINEAR, [c**j * w for j in range(N + 1)]), w


@pytest.fixture(scope="module")
def sech_series():
    return build_series(sech_u0(), EQ3, 12)


# -- error tables --------------------------------------------------------------


def test_error_table_zero_at_t0(sech_series):
    oracle = [(0.0, sech_series[0])]
    rows = error_table(sech_series, oracle, orders=[0, 4, 12])
    assert len(rows) == 3
    for r in rows:
        assert (r.sup_err, r.l2_err, r.err_abs_u, r.err_abs_u2) == (0, 0, 0, 0)


def test_error_table_plane_wave():
    s = build_series(plane_wave(), LINEAR, 10)
    oracle = integrate_to(plane_wave(), LINEAR, [0.1], dt_max=1e-3)
    (row,) = error_table(s, oracle, orders=[10])
    assert row.t == 0.1 and row.order == 10
    assert row.sup_err <= 1e-8
    # the modulus is conserved exactly by both sides
    assert row.err_abs_u <= 1e-12


def test_error_table_grows_with_time(sech_series):
    times = [0.1, 0.3, 0.5, 1.0, 2.0]
    oracle = integrate_to(sech_series[0], EQ3, times, dt_max=0.01)
    rows = error_table(sech_series, oracle, orders=[10])
    for col in ("sup_err", "l2_err", "err_abs_u", "err_abs_u2"):
        vals = [getattr(r, col) for r in rows]
        assert all(b > a for a, b in zip(vals, vals[1:])), col


def test_error_table_missing_time_raises(sech_series):
    with pytest.raises(KeyError):
        error_table(sech_series, [(0.0, sech_series[0])], orders=[1], times=[0.3])


def test_error_csv_format():
    g = make_grid(0, 1, 8)
    row = compare_fields(ComplexField.constant(g, 2), ComplexField.constant(g, 1), 0.5, 3)
    text = format_error_table([row])
    lines = text.splitlines()
    assert lines[0] == ERROR_HEADER
    assert lines[1] == ",".join(
        ["5.0000000000000000e-01", "3"] + ["1.0000000000000000e+00"] * 2 + ["1.0000000000000000e+00", "3.0000000000000000e+00"]
    )


# -- radius estimates --------------------------------------------------------------


def test_radius_constant_series_is_infinite():
    s = build_series(ComplexField.constant(GRID16, 1 + 1j), EQ3, 6)
    rep = radius_estimate(s)
    assert np.all(np.isinf(rep.per_point.values)) and rep.global_R == np.inf


@pytest.mark.parametrize("c", [0.5, 2 - 1j, -7.0])
def test_radius_recovers_geometric_series(c):
    s, _ = geometric_series(c, 12)
    rep = radius_estimate(s, tail_window=4)
    assert rep.global_R == pytest.approx(1 / abs(c), rel=0.05)


def test_radius_per_point_converges_with_order():
    c = 3.0
    s, _ = geometric_series(c, 60)
    R = radius_estimate(s).per_point.values
    np.testing.assert_allclose(R, 1 / c, rtol=0.05)


def test_radius_rejects_short_series_and_window():
    s, _ = geometric_series(2.0, 3)
    with pytest.raises(ValueError):
        radius_estimate(s, tail_window=4)
    with pytest.raises(ValueError):
        radius_estimate(s, tail_window=2)


def test_radius_scale_covariance(sech_series):
    R1 = radius_estimate(sech_series).global_R
    R2 = radius_estimate(build_series(sech_series[0], EQ3.scaled(2.0), 12)).global_R
    assert R2 == pytest.approx(R1 / 2, rel=0.05)


def test_radius_csv(sech_series):
    text = radius_estimate(sech_series).csv()
    lines = text.splitlines()
    assert lines[0] == "x,R"
    assert len(lines) == sech_series.grid.n + 2
    assert lines[-1].startswith("# global_R=")
    float(lines[-1].split("=")[1])


def test_geometric_partial_sums_blow_up_past_radius():
    c, N = 2 - 1j, 12
    s, w = geometric_series(c, N)
    t = 2 / abs(c)
    exact = w / (1 - c * t)
    err = sup_norm(evaluate(s, t) - exact)
    # S_N - 1/(1-ct) = (ct)^(N+1) / (ct - 1), with |ct| = 2
    assert err == pytest.approx(2 ** (N + 1) / abs(c * t - 1), rel=1e-10)


def test_error_shrinks_with_order_inside_radius(sech_series):
    R = radius_estimate(sech_series).global_R
    t = R / 4
    ref = integrate_to(sech_series[0], EQ3, [t], dt_max=0.01)[0][1]
    errs = [sup_norm(evaluate(sech_series, t, N) - ref) for N in range(4, 13)]
    assert all(b <= a for a, b in zip(errs, errs[1:]))


# -- divergence report --------------------------------------------------------------


def test_divergence_plane_wave_skips_outer_clause():
    s = build_series(plane_wave(), LINEAR, 10)
    rep = radius_estimate(s)
    v = divergence_report(s, LINEAR, rep, IntegratorConfig(dt=1e-3, t_end=2.0))
    assert v.clause_a and v.clause_b is None and v.err_outside is None
    assert "horizon" in v.note
    assert v.passed


def test_divergence_constant_series():
    s = build_series(ComplexField.constant(GRID16, 1.0), EQ3, 6)
    v = divergence_report(s, EQ3, radius_estimate(s), IntegratorConfig(dt=1e-3, t_end=2.0))
    assert v.R == np.inf and v.clause_b is None and v.passed


def test_divergence_sech_default(sech_series):
    rep = radius_estimate(sech_series)
    v = divergence_report(sech_series, EQ3, rep, IntegratorConfig(dt=0.01, t_end=2.0))
    assert v.clause_a and v.clause_b and v.passed
    assert v.t_inside == pytest.approx(rep.global_R / 4)
    text = v.text()
    assert "verdict=pass" in text and "clause_b=pass" in text
