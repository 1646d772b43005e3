import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from adomlab.field import (
    ComplexField,
    GridError,
    RealField,
    diff,
    l2_norm,
    make_grid,
    rel_sup_diff,
    sup_norm,
)


def test_grid_spacing():
    g = make_grid(-20, 40, 256)
    assert g.h == 0.15625
    assert g.x[0] == -20 and g.x[-1] == pytest.approx(20 - 0.15625)


def test_grid_admits_integer_wavenumbers():
    g = make_grid(0, 2 * np.pi, 64)
    assert all(g.admits_wavenumber(k) for k in range(-5, 6))
    assert not g.admits_wavenumber(0.5)


@pytest.mark.parametrize("args", [(0, 40, 100), (0, 40, 4), (0, 0, 64), (0, -1, 64)])
def test_grid_rejects_bad_arguments(args):
    with pytest.raises(GridError):
        make_grid(*args)


def test_grid_is_immutable():
    g = make_grid(0, 1, 8)
    with pytest.raises(ValueError):
        g.x[0] = 1.0


def test_field_rejects_nonfinite_and_wrong_length():
    g = make_grid(0, 1, 8)
    with pytest.raises(FloatingPointError):
        ComplexField(g, [np.nan] + [0] * 7)
    with pytest.raises(GridError):
        ComplexField(g, np.zeros(7))


def test_fields_on_different_grids_do_not_mix():
    f = ComplexField.constant(make_grid(0, 1, 8), 1)
    g = ComplexField.constant(make_grid(0, 2, 8), 1)
    with pytest.raises(GridError):
        f + g


@pytest.mark.parametrize("kappa", [1, 3, -7])
def test_diff_plane_wave_eigenfunction(kappa):
    g = make_grid(0, 2 * np.pi, 64)
    f = ComplexField.from_function(g, lambda x: np.exp(1j * kappa * x))
    expect = 1j * kappa * f
    assert sup_norm(diff(f, 1) - expect) <= 1e-12
    assert sup_norm(diff(f, 2) - (-(kappa**2)) * f) <= 1e-11


@pytest.mark.parametrize("order", [1, 2])
def test_diff_constant_is_zero(order):
    g = make_grid(-3, 6, 32)
    assert sup_norm(diff(ComplexField.constant(g, 2 - 1j), order)) <= 1e-14


def test_diff_rejects_order():
    g = make_grid(0, 1, 8)
    with pytest.raises(ValueError):
        diff(ComplexField.zeros(g), 3)


def _fd4_second(f):
    v, h = f.values, f.grid.h
    r = np.roll
    return (-r(v, -2) + 16 * r(v, -1) - 30 * v + 16 * r(v, 1) - r(v, 2)) / (12 * h * h)


def test_diff_second_order_matches_fourth_order_finite_differences():
    errs = []
    for n in (128, 256):
        g = make_grid(-20, 40, n)
        f = ComplexField.from_function(g, lambda x: 1 / np.cosh(x) * np.exp(0.5j * np.pi / 20 * x))
        errs.append(np.max(np.abs(diff(f, 2).values - _fd4_second(f))))
    # the discrepancy is the finite-difference truncation error, O(h^4)
    assert errs[1] < 5e-4
    assert 12 <= errs[0] / errs[1] <= 20


def test_real_field_derivative_stays_real():
    g = make_grid(0, 2 * np.pi, 32)
    f = RealField(g, np.sin(g.x) + np.cos(3 * g.x))
    d = diff(f, 1)
    assert isinstance(d, RealField)
    assert sup_norm(d - RealField(g, np.cos(g.x) - 3 * np.sin(3 * g.x))) <= 1e-12
    assert sup_norm(diff(f, 2).to_complex() - diff(f.to_complex(), 2)) <= 1e-12


def test_norms():
    g = make_grid(0, 2 * np.pi, 64)
    c = ComplexField.constant(g, 3 - 4j)
    assert sup_norm(c) == 5.0
    z = ComplexField.zeros(g)
    assert sup_norm(z) == 0.0 and l2_norm(z) == 0.0
    w = ComplexField.from_function(g, lambda x: np.exp(2j * x))
    assert l2_norm(w) == pytest.approx(np.sqrt(2 * np.pi), rel=1e-14)


coef = st.complex_numbers(max_magnitude=10, allow_nan=False, allow_infinity=False)


def _smooth(g, seed):
    rng = np.random.default_rng(seed)
    vals = sum(
        (rng.normal() + 1j * rng.normal()) * np.exp(1j * m * g.x) / (1 + m * m) for m in range(-6, 7)
    )
    return ComplexField(g, vals)


@settings(max_examples=40, deadline=None)
@given(a=coef, b=coef, seed=st.integers(0, 2**16))
def test_diff_is_linear(a, b, seed):
    g = make_grid(0, 2 * np.pi, 64)
    f, h = _smooth(g, seed), _smooth(g, seed + 1)
    for order in (1, 2):
        lhs = diff(a * f + b * h, order)
        rhs = a * diff(f, order) + b * diff(h, order)
        scale = max(sup_norm(rhs), abs(a) * sup_norm(diff(f, order)), abs(b) * sup_norm(diff(h, order)))
        assert sup_norm(lhs - rhs) <= 1e-12 * max(scale, 1e-300)


@settings(max_examples=20, deadline=None)
@given(seed=st.integers(0, 2**16))
def test_first_derivative_twice_equals_second(seed):
    g = make_grid(0, 2 * np.pi, 64)
    f = _smooth(g, seed)
    assert rel_sup_diff(diff(diff(f, 1), 1), diff(f, 2)) <= 1e-10


@settings(max_examples=40, deadline=None)
@given(c=coef, seed=st.integers(0, 2**16))
def test_norms_absolutely_homogeneous(c, seed):
    g = make_grid(0, 2 * np.pi, 64)
    f = _smooth(g, seed)
    assert sup_norm(c * f) == pytest.approx(abs(c) * sup_norm(f), rel=1e-14, abs=1e-300)
    assert l2_norm(c * f) == pytest.approx(abs(c) * l2_norm(f), rel=1e-14, abs=1e-300)
