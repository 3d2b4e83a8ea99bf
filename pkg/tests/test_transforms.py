import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy import integrate, special

from mkonhauser.polys import Params, bivariate_MK
from mkonhauser.scalar import DomainError, PoleError
from mkonhauser.transforms import (
    FracCase,
    LaplaceCase,
    check_frac_derivative_shift,
    check_frac_integral_shift,
    check_frac_roundtrip,
    frac_derivative_apply,
    frac_integral_apply,
    laplace_1d_closed,
    laplace_1d_M_form,
    laplace_1d_quadrature,
    laplace_1d_termwise,
    laplace_2d_bessel,
    laplace_2d_closed,
    laplace_2d_termwise,
    laplace_cases,
    rl_derivative_monomial,
    rl_integral_monomial,
)

CASES = laplace_cases(20, seed=20240611)


def rel(a, b):
    return abs(a - b) / abs(b)


@pytest.mark.parametrize("case", CASES, ids=lambda c: f"k{c.params.k}u{c.params.upsilon}")
def test_laplace_forms_agree(case):
    y = 0.7
    closed = laplace_1d_closed(case, y)
    assert rel(laplace_1d_termwise(case, y), closed) <= 1e-10
    assert rel(laplace_1d_M_form(case, y), closed) <= 1e-12
    c2 = laplace_2d_closed(case)
    assert rel(laplace_2d_termwise(case), c2) <= 1e-10
    assert rel(laplace_2d_bessel(case), c2) <= 1e-12


def test_laplace_cases_admissible_and_seeded():
    assert len(CASES) == 20
    again = laplace_cases(20, seed=20240611)
    assert [(c.params, c.a, c.w, c.b, c.w2) for c in CASES] == [(c.params, c.a, c.w, c.b, c.w2) for c in again]
    for c in CASES:
        assert c.params.is_finite_orthogonal()
        c.check_1d()
        c.check_2d()


@pytest.mark.parametrize("k,u", [(0, 1), (2, 2), (3, 3)])
def test_laplace_1d_literal_integral(k, u):
    # convergent regime p + q < 1: the literal transform exists and matches the closed form
    case = LaplaceCase(Params(0.5, 0.2, u, k), a=1.3, w=0.6)
    y = 0.4
    closed = laplace_1d_closed(case, y)
    assert rel(laplace_1d_quadrature(case, y), closed) <= 1e-12
    mk = bivariate_MK(case.params)
    t, w = special.roots_genlaguerre(40, -0.7)
    want = 1.3 ** -0.3 * np.dot(w, mk(y, 0.6 * t / 1.3))
    assert rel(closed, want) <= 1e-12


def test_laplace_2d_literal_integral():
    p, q, u, k = 0.5, 0.2, 2, 2
    case = LaplaceCase(Params(p, q, u, k), a=1.1, w=0.4, b=1.7, w2=0.5)
    mk = bivariate_MK(case.params)
    ty, wy = special.roots_genlaguerre(60, q)
    tz, wz = special.roots_genlaguerre(60, -p - q)
    vals = mk(0.4 * ty[:, None] / 1.1, 0.5 * tz[None, :] / 1.7)
    want = (wy @ vals @ wz) / (1.1 ** (q + 1) * 1.7 ** (1 - p - q))
    assert rel(laplace_2d_closed(case), want) <= 1e-11


def test_laplace_guards():
    with pytest.raises(DomainError):
        LaplaceCase(Params(8.0, 0.4, 1, 1), a=0.0)
    with pytest.raises(DomainError):
        laplace_1d_closed(LaplaceCase(Params(8.0, 0.4, 2, 1), a=1.0, w=1.5), 0.3)
    with pytest.raises(PoleError):
        laplace_2d_closed(LaplaceCase(Params(8.0, 0.4, 2, 1), a=1.0, w=0.5, b=1.0, w2=-1.0))
    with pytest.raises(DomainError):
        laplace_1d_quadrature(LaplaceCase(Params(8.0, 0.4, 1, 1), a=1.0, w=0.5), 0.3)


@pytest.mark.parametrize("beta,sigma,a,x", [(0.4, 0.5, 0.0, 1.3), (-0.7, 0.3, 0.2, 2.0), (2.0, 1.7, -1.0, 0.5)])
def test_rl_integral_quadrature(beta, sigma, a, x):
    # QUADPACK's algebraic-endpoint rule carries (t-a)^beta (x-t)^(sigma-1) exactly
    val, _ = integrate.quad(lambda t: 1.0, a, x, weight="alg", wvar=(beta, sigma - 1), epsabs=0, epsrel=1e-13)
    assert rl_integral_monomial(beta, sigma, a, x) == pytest.approx(val / math.gamma(sigma), rel=1e-11)


def test_rl_integral_guards():
    with pytest.raises(DomainError):
        rl_integral_monomial(-1.5, 0.5, 0.0, 1.0)
    assert rl_integral_monomial(-1.5, 0.7, 0.0, 2.0, continued=True) == pytest.approx(
        math.gamma(-0.5) / math.gamma(0.2) * 2.0 ** -0.8, rel=1e-14)
    # 1/Gamma(beta + sigma + 1) vanishes exactly at the pole
    assert rl_integral_monomial(-1.5, 0.5, 0.0, 1.0, continued=True) == 0.0
    with pytest.raises(PoleError):
        rl_integral_monomial(-2.0, 0.5, 0.0, 1.0, continued=True)
    with pytest.raises(DomainError):
        rl_integral_monomial(0.5, 0.0, 0.0, 1.0)
    with pytest.raises(DomainError):
        rl_derivative_monomial(0.5, 0.5, 1.0, 1.0)


@settings(max_examples=50, deadline=None)
@given(st.floats(-0.9, 4.0), st.floats(0.05, 3.0), st.floats(0.1, 3.0))
def test_rl_semigroup_and_inverse(beta, sigma, x):
    # I^s then D^s returns the monomial; integer order reproduces d/dx
    i = rl_integral_monomial(beta, sigma, 0.0, x) / x ** (beta + sigma)
    d = rl_derivative_monomial(beta + sigma, sigma, 0.0, x)
    assert i * d == pytest.approx(x ** beta, rel=1e-11)
    # beta - 1 + 1 rounds, so allow an absolute floor on the scale of x^(beta-1)
    assert rl_derivative_monomial(beta, 1.0, 0.0, x) == pytest.approx(
        beta * x ** (beta - 1), rel=1e-12, abs=1e-15 * x ** (beta - 1))


def rl_double(params, mu, lam, x, zpt):
    """Nested RL integrals of y^q z^(-p-q) MK(y, z) by scipy Gauss-Jacobi rules.

    On [0, x] the kernel (x-t)^(mu-1) t^q is a Jacobi weight and MK is a polynomial,
    so the rules are exact up to rounding.
    """
    mk = bivariate_MK(params)
    p, q = params.p, params.q
    ty, wy = special.roots_jacobi(30, mu - 1, q)
    tz, wz = special.roots_jacobi(30, lam - 1, -p - q)
    ys, zs = 0.5 * x * (1 + ty), 0.5 * zpt * (1 + tz)
    vals = mk(ys[:, None], zs[None, :])
    jac = (0.5 * x) ** (mu + q) * (0.5 * zpt) ** (lam - p - q)
    return jac * (wy @ vals @ wz) / (math.gamma(mu) * math.gamma(lam))


@pytest.mark.parametrize("k", [0, 1, 2])
def test_frac_integral_termwise_is_the_integral(k):
    params = Params(0.5, 0.2, 2, k)
    case = FracCase(params, 0.5, 0.3)
    want = rl_double(params, 0.5, 0.3, 0.8, 1.1)
    assert frac_integral_apply(case, 0.8, 1.1) == pytest.approx(want, rel=1e-12)


@pytest.mark.parametrize("mu,lam", [(0.5, 0.3), (0.3, 0.2)])
def test_frac_shift_k0(mu, lam):
    case = FracCase(Params(7.0, 0.4, 2, 0), mu, lam)
    assert check_frac_integral_shift(case, 0.8, 1.1).passed
    assert check_frac_derivative_shift(case, 0.8, 1.1).passed


def test_frac_shift_k1_misses_target():
    # the Pochhammer (k+1-p)_l is not moved by the operators, so the shifted-parameter target differs
    case = FracCase(Params(7.0, 0.4, 2, 1), 0.5, 0.3)
    rep = check_frac_integral_shift(case, 0.8, 1.1)
    assert not rep.passed and rep.rel_err > 1e-2


@pytest.mark.parametrize("k", [0, 1, 2, 3])
@pytest.mark.parametrize("mu,lam", [(0.5, 0.3), (0.3, 0.2), (1.4, 0.9)])
def test_frac_roundtrip(k, mu, lam):
    assert check_frac_roundtrip(FracCase(Params(7.0, 0.4, 2, k), mu, lam), 0.8, 1.1).passed


def test_frac_derivative_is_termwise():
    case = FracCase(Params(7.0, 0.4, 1, 2), 0.5, 0.5, a=0.1, b=0.2, w1=0.7, w2=1.3)
    v = frac_derivative_apply(case, 0.9, 1.4)
    assert np.isfinite(v)
    with pytest.raises(DomainError):
        FracCase(Params(7.0, 0.4, 1, 2), 0.0, 0.5)
