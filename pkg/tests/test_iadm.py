import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from adomlab.adm import ModelParams, build_series, evaluate
from adomlab.field import ComplexField, GridError, RealField, diff, make_grid, sup_norm
from adomlab.iadm import RealSeriesPair, iadm_build, recombine, split_real_system

from _support import A, B, EQ3, random_smooth_field, sech_u0

TWO_PI = make_grid(0, 2 * np.pi, 32)


def max_rel_dev(s1, s2):
    worst = 0.0
    for c1, c2 in zip(s1.coeffs, s2.coeffs):
        scale = sup_norm(c2)
        d = sup_norm(c1 - c2)
        worst = max(worst, d / scale if scale > 0 else d)
    return worst


def test_split_table_eq3_preset():
    t = split_real_system(EQ3)
    # u1_t = a u2_xx + b rho u1_x ; u2_t = -a u1_xx + b rho u2_x
    np.testing.assert_array_equal(t.dispersion, [[0, A], [-A, 0]])
    np.testing.assert_array_equal(t.nonlinear, [[B, 0], [0, B]])


def test_split_table_real_alpha_decouples():
    t = split_real_system(ModelParams(0.3, 0))
    np.testing.assert_array_equal(t.dispersion, [[0.3, 0], [0, 0.3]])
    assert not np.any(t.nonlinear)


def test_split_table_imaginary_coefficients_cross_couple():
    t = split_real_system(ModelParams(1j, 1j))
    for m in (t.dispersion, t.nonlinear):
        assert m[0, 1] != 0 and m[1, 0] != 0


def test_constant_initial_data_has_no_corrections():
    pair = iadm_build(ComplexField.constant(TWO_PI, 0.4 - 1.2j), EQ3, 6)
    for f1, f2 in zip(pair.series1[1:], pair.series2[1:]):
        assert sup_norm(f1) == 0.0 and sup_norm(f2) == 0.0


def test_first_order_for_real_data_eq3():
    u0 = RealField(TWO_PI, 1 + 0.3 * np.cos(TWO_PI.x) + 0.1 * np.sin(2 * TWO_PI.x))
    pair = iadm_build(u0.to_complex(), EQ3, 1)
    expect1 = B * u0 * u0 * diff(u0, 1)
    expect2 = -A * diff(u0, 2)
    assert sup_norm(pair.series1[1] - expect1) <= 1e-12 * sup_norm(expect1)
    assert sup_norm(pair.series2[1] - expect2) <= 1e-12 * sup_norm(expect2)


def test_sech_profile_matches_adm():
    u0 = sech_u0()
    assert max_rel_dev(recombine(iadm_build(u0, EQ3, 8), EQ3), build_series(u0, EQ3, 8)) <= 1e-12


@settings(max_examples=15, deadline=None)
@given(
    seed=st.integers(0, 2**16),
    alpha=st.complex_numbers(min_magnitude=0.1, max_magnitude=2),
    beta=st.complex_numbers(max_magnitude=2),
)
def test_equivalence_with_adm_for_random_data(seed, alpha, beta):
    params = ModelParams(alpha, beta)
    u0 = random_smooth_field(TWO_PI, np.random.default_rng(seed))
    adm = build_series(u0, params, 8)
    iadm = recombine(iadm_build(u0, params, 8), params)
    assert max_rel_dev(iadm, adm) <= 1e-12


def test_realness_closure():
    u0 = RealField(TWO_PI, 1 + 0.5 * np.cos(TWO_PI.x)).to_complex()
    pair = iadm_build(u0, ModelParams(0.5, 0.7), 6)
    assert all(sup_norm(f) == 0.0 for f in pair.series2)
    assert sup_norm(pair.series1[3]) > 0


def test_recombine_zero_and_real_pairs():
    z = RealField(TWO_PI, np.zeros(TWO_PI.n))
    s = recombine(RealSeriesPair([z, z], [z, z]))
    assert all(sup_norm(c) == 0.0 for c in s.coeffs)
    one = RealField(TWO_PI, np.cos(TWO_PI.x))
    s = recombine(RealSeriesPair([one, one], [z, z]))
    assert all(not np.any(c.values.imag) for c in s.coeffs)


def test_recombined_evaluation_is_linear():
    pair = iadm_build(random_smooth_field(TWO_PI, np.random.default_rng(3)), EQ3, 5)
    t = 0.013
    lhs = evaluate(recombine(pair), t)
    rhs = pair.evaluate1(t) + 1j * pair.evaluate2(t)
    assert sup_norm(lhs - rhs) <= 1e-14 * sup_norm(rhs)


def test_pair_validation():
    f = RealField(TWO_PI, np.ones(TWO_PI.n))
    with pytest.raises(ValueError):
        RealSeriesPair([f, f], [f])
    with pytest.raises(GridError):
        RealSeriesPair([f], [RealField(make_grid(0, 1, 32), np.ones(32))])
    with pytest.raises(ValueError):
        iadm_build(f.to_complex(), EQ3, -1)
