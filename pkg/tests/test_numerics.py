"""Kernel tests: differentiation, root finding, log-space tail arithmetic."""

import math

import mpmath as mp
import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from weibtail import numerics
from weibtail.errors import (
    BracketMissError,
    EvalFailureError,
    OutsideTailRegionError,
    StencilFailureError,
)
from weibtail.numerics import (
    Bracket,
    DiffConfig,
    derivative,
    grow_bracket,
    log_cdf_power,
    log_neg_log_cdf_derivs,
    log_neg_log_cdf_from_H,
    log_neg_log_cdf_margin,
    solve_increasing,
)


# ---------------------------------------------------------------- derivative

def test_derivative_square_order1_exact():
    est = derivative(lambda x: x * x, 3.0, 1)
    assert est.value == pytest.approx(6.0, rel=1e-12)
    assert est.error < 1e-9


def test_derivative_exp_order2():
    est = derivative(math.exp, 0.0, 2)
    assert est.value == pytest.approx(1.0, rel=1e-8)


def test_derivative_sqrt_order1():
    est = derivative(math.sqrt, 100.0, 1)
    assert est.value == pytest.approx(0.05, rel=1e-9)


@pytest.mark.parametrize("order", [1, 2, 3, 4])
def test_polynomial_exactness(order):
    # central stencils of order n are exact on polynomials of degree n+1,
    # so only rounding remains; a large step keeps the h^-order rounding
    # amplification away from the 1e-10 target (truncation is zero here)
    cfg = DiffConfig(base_step_scale=0.5)
    rng = np.random.default_rng(1234 + order)
    checked = 0
    while checked < 50:
        coeffs = rng.uniform(-2.0, 2.0, size=order + 2)
        x0 = rng.uniform(-2.0, 2.0)
        poly = np.polynomial.Polynomial(coeffs)
        expected = poly.deriv(order)(x0)
        if abs(expected) < 1.0:
            continue  # relative comparison is meaningless near a zero
        got = derivative(lambda t: float(poly(t)), x0, order, cfg).value
        assert got == pytest.approx(expected, rel=1e-10)
        checked += 1


def test_derivative_known_higher_orders():
    assert derivative(math.sin, 0.3, 3).value == pytest.approx(-math.cos(0.3), rel=1e-6)
    assert derivative(math.sin, 0.3, 4).value == pytest.approx(math.sin(0.3), rel=1e-5)


def test_stencil_failure():
    with pytest.raises(StencilFailureError):
        derivative(lambda x: math.sqrt(x), 0.0, 1)  # negative side of stencil
    with pytest.raises(StencilFailureError):
        derivative(lambda x: math.nan, 1.0, 1)


def test_low_confidence_flag():
    est = derivative(math.exp, 1.0, 2, tol=1e-30)
    assert est.low_confidence
    est2 = derivative(math.exp, 1.0, 2, tol=1e-3)
    assert not est2.low_confidence


def test_order_validation():
    with pytest.raises(ValueError):
        derivative(math.exp, 0.0, 5)
    with pytest.raises(ValueError):
        derivative(math.exp, 0.0, 3, DiffConfig(max_order=2))


def test_diff_config_validation():
    with pytest.raises(ValueError):
        DiffConfig(base_step_scale=-1.0)
    with pytest.raises(ValueError):
        DiffConfig(richardson_levels=0)
    with pytest.raises(ValueError):
        DiffConfig(max_order=5)


# ----------------------------------------------------------- solve_increasing

def test_solve_sqrt():
    root = solve_increasing(math.sqrt, 5.0, Bracket(0.0, 100.0), rel_tol=1e-13)
    assert root == pytest.approx(25.0, rel=1e-12)


def test_solve_identity():
    root = solve_increasing(lambda x: x, 0.0, Bracket(-1.0, 1.0), rel_tol=1e-14)
    assert abs(root) < 1e-13


def _bisect_oracle(f, target, lo, hi, iters=200):
    # plain bisection, independent of the secant-accelerated implementation
    for _ in range(iters):
        mid = 0.5 * (lo + hi)
        if f(mid) < target:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def test_solve_x_plus_log_x():
    f = lambda x: x + math.log(x)
    # value frozen from a 50-digit solve of x + log x = 10; the in-test
    # bisection oracle reproduces it independently of the implementation
    frozen = 7.929420095019697
    oracle = _bisect_oracle(f, 10.0, 1.0, 20.0)
    assert oracle == pytest.approx(frozen, rel=1e-14)
    root = solve_increasing(f, 10.0, Bracket(1.0, 20.0), rel_tol=1e-14)
    assert root == pytest.approx(frozen, rel=1e-12)


def test_solve_many_random_monotone_functions():
    rng = np.random.default_rng(20240817)
    for _ in range(1000):
        a, b, c = rng.uniform(0.0, 3.0, size=3)
        a += 0.01  # keep strictly increasing
        d = rng.uniform(-5.0, 5.0)
        f = lambda x, a=a, b=b, c=c, d=d: a * x + b * x**3 + c * math.log1p(x) + d
        u = rng.uniform(0.0, 10.0)
        target = f(u)
        root = solve_increasing(f, target, Bracket(0.0, 10.0), rel_tol=1e-12)
        assert abs(f(root) - target) <= 1e-12 * max(1.0, abs(target))


def test_solve_bracket_miss():
    with pytest.raises(BracketMissError):
        solve_increasing(lambda x: x, 5.0, Bracket(0.0, 1.0))


def test_solve_eval_failure():
    with pytest.raises(EvalFailureError):
        solve_increasing(lambda x: math.nan, 0.5, Bracket(0.0, 1.0))


def test_solve_with_infinite_endpoint():
    # f(hi) = inf only constrains the sign; the solve still converges
    f = lambda x: math.inf if x > 5.0 else x
    root = solve_increasing(f, 2.0, Bracket(0.0, 10.0), rel_tol=1e-12)
    assert root == pytest.approx(2.0, rel=1e-10)


def test_grow_bracket():
    br = grow_bracket(lambda x: x**3, 1e9, 1.0, 2.0)
    assert br.lo < 1000.0 <= br.hi
    with pytest.raises(BracketMissError):
        grow_bracket(lambda x: x, -5.0, 0.0, 2.0, lo_min=0.0)


@given(st.floats(min_value=-3.0, max_value=3.0), st.floats(min_value=0.1, max_value=2.0))
@settings(max_examples=100, deadline=None)
def test_solve_recovers_target_hypothesis(shift, slope):
    f = lambda x: slope * x + shift
    target = f(1.2345)
    root = solve_increasing(f, target, Bracket(-10.0, 10.0), rel_tol=1e-13)
    assert abs(f(root) - target) <= 1e-13 * max(1.0, abs(target))


# ------------------------------------------------------ log-space tail maths

def test_lnlcdf_median_case():
    # H = log 2 puts F at 1/2, so -log(-log F) = -log(log 2)
    got = log_neg_log_cdf_from_H(math.log(2.0))
    assert got == pytest.approx(0.3665129205816643, rel=1e-14)


def test_lnlcdf_large_h_margin():
    # at H = 50 the gap to H is ~e^-50/2, far below one ulp of 50.0
    assert log_neg_log_cdf_from_H(50.0) == 50.0
    margin = log_neg_log_cdf_margin(50.0)
    assert 0.0 < margin < 1e-20


def test_lnlcdf_h2_against_high_precision():
    # frozen from 50-digit evaluation of -log(-log(1 - e^-2))
    frozen = 1.9281741606084144
    got = log_neg_log_cdf_from_H(2.0)
    assert got == pytest.approx(frozen, rel=1e-13)
    mp.mp.dps = 40
    oracle = float(-mp.log(-mp.log(1 - mp.e**-2)))
    assert got == pytest.approx(oracle, rel=1e-13)


def test_lnlcdf_rejects_nonpositive():
    with pytest.raises(OutsideTailRegionError):
        log_neg_log_cdf_from_H(0.0)
    with pytest.raises(OutsideTailRegionError):
        log_neg_log_cdf_from_H(-1.0)


def test_lnlcdf_no_overflow_up_to_700():
    for h in (100.0, 400.0, 700.0):
        v = log_neg_log_cdf_from_H(h)
        assert math.isfinite(v) and v == h  # margin below double resolution
        assert log_neg_log_cdf_margin(h) > 0.0


@pytest.mark.parametrize("h", [1e-6, 0.01, 0.5, 1.0, 3.0, 6.9, 7.1, 20.0, 50.0, 300.0])
def test_lnlcdf_below_h_with_margin_bound(h):
    margin = log_neg_log_cdf_margin(h)
    assert margin > 0.0
    if h >= 1.0:
        # the float subtraction may differ from the margin by up to an ulp of h
        assert h - log_neg_log_cdf_from_H(h) == pytest.approx(margin, abs=2.0 * math.ulp(h))
        assert margin < 2.0 * math.exp(-h)


@given(st.floats(min_value=1e-3, max_value=650.0))
@settings(max_examples=200, deadline=None)
def test_lnlcdf_margin_positive_hypothesis(h):
    assert log_neg_log_cdf_margin(h) > 0.0


@pytest.mark.parametrize("u", [0.05, 0.3, 1.0, 3.0, 5.0, 6.9, 7.1, 10.0, 20.0, 40.0])
def test_lnlcdf_derivs_against_mpmath(u):
    mp.mp.dps = 50
    T = lambda z: -mp.log(-mp.log(1 - mp.e**-z))
    exact = [mp.diff(T, mp.mpf(u), n) for n in (1, 2, 3, 4)]
    got = log_neg_log_cdf_derivs(u)
    for g, e in zip(got, exact):
        assert float(abs((mp.mpf(g) - e) / e)) < 3e-10


def test_lnlcdf_derivs_limits():
    g1, g2, g3, g4 = log_neg_log_cdf_derivs(600.0)
    assert g1 == 1.0
    assert g2 == pytest.approx(-0.5 * math.exp(-600.0), rel=1e-10)
    assert g3 > 0.0 > g4


# ---------------------------------------------------------------- F^n in logs

def test_log_cdf_power_block_level():
    # log(-log F) = -log n means -log F = 1/n, the defining maxima level
    assert log_cdf_power(-12.0, 12.0) == pytest.approx(-1.0, rel=1e-15)
    assert math.exp(log_cdf_power(-12.0, 12.0)) == pytest.approx(math.exp(-1.0), rel=1e-14)


def test_log_cdf_power_n_equals_one():
    for v in (-3.0, 0.0, 2.5):
        assert log_cdf_power(v, 0.0) == pytest.approx(-math.exp(v), rel=1e-15)


def test_log_cdf_power_exponent_arithmetic():
    got = log_cdf_power(-100.0 + math.log(2.0), 100.0)
    assert got == pytest.approx(-2.0, rel=1e-12)
    assert math.exp(got) == pytest.approx(0.1353352832366127, rel=1e-12)


def test_log_cdf_power_saturation():
    assert log_cdf_power(10.0, 1000.0) == -math.inf
    assert log_cdf_power(-math.inf, 50.0) == 0.0
    assert math.exp(log_cdf_power(-2000.0, 50.0)) == 1.0


def test_log_cdf_power_round_trip():
    rng = np.random.default_rng(7)
    for _ in range(100):
        f_val = rng.uniform(0.05, 0.95)
        v = math.log(-math.log(f_val))
        assert math.exp(log_cdf_power(v, 0.0)) == pytest.approx(f_val, rel=1e-15)


def test_log_cdf_power_rejects_nan():
    with pytest.raises(EvalFailureError):
        log_cdf_power(math.nan, 1.0)
