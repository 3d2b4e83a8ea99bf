import math

import mpmath as mp
import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from mkonhauser import _fallback, kernels
from mkonhauser.scalar import (
    DomainError,
    PoleError,
    beta_complex,
    bessel_poly,
    compensated_sum,
    gamma_complex,
    gamma_real,
    gauss_multiplication_sides,
    hyp2f1_terminating,
    log_gamma_signed,
    pochhammer,
    pochhammer_signed,
    rgamma,
)

finite = dict(allow_nan=False, allow_infinity=False)


@pytest.mark.parametrize("z", [0.3 + 0.1j, -0.7 + 0.2j, -2.5 + 0.0j, 0.2 - 1.5j, 5 + 3j,
                               -0.8 - 0.8j, 0.5 + 20j, -7.3 + 0.4j, 1e-3 + 0j])
def test_cgamma_matches_mpmath(z):
    want = complex(mp.gamma(z))
    got = gamma_complex(z)
    assert abs(got - want) <= 1e-12 * abs(want)


@settings(max_examples=200, deadline=None)
@given(st.floats(-8, 8, **finite), st.floats(-8, 8, **finite))
def test_cgamma_recurrence(x, y):
    z = complex(x, y)
    if abs(z) < 1e-3 or (abs(y) < 1e-3 and abs(x - round(x)) < 1e-3 and x < 0.5):
        return
    g = gamma_complex(z)
    assert abs(gamma_complex(z + 1) - z * g) <= 1e-11 * abs(z * g)


def test_backends_agree():
    rng = np.random.default_rng(3)
    z = rng.uniform(-6, 6, 300) + 1j * rng.uniform(-10, 10, 300)
    nat, fb = kernels.cgamma(z), _fallback.cgamma(z)
    assert np.max(np.abs(nat - fb) / np.abs(fb)) < 1e-13
    c = rng.normal(size=(4, 4))
    ys, zs = rng.uniform(0, 2, 7), rng.uniform(0, 2, 5)
    np.testing.assert_allclose(kernels.bipoly_grid(c, 2, ys, zs), _fallback.bipoly_grid(c, 2, ys, zs),
                               rtol=1e-14, atol=1e-14)


def test_bipoly_grid_is_y_major():
    c = np.array([[1.0, 2.0], [3.0, 0.0]])
    ys, zs = np.array([0.5, 2.0]), np.array([1.0, 3.0, 0.0])
    g = kernels.bipoly_grid(c, 3, ys, zs)
    want = [[1 + 2 * z ** 3 + 3 * y for z in zs] for y in ys]
    np.testing.assert_allclose(g, want)


def test_gamma_real_poles():
    with pytest.raises(PoleError):
        gamma_real(-3.0)
    with pytest.raises(PoleError):
        gamma_complex(0j)
    assert rgamma(-3.0) == 0.0
    assert rgamma(0.0) == 0.0


@pytest.mark.parametrize("x", [-0.5, -1.5, -2.5, -3.7, 0.2, 7.5, 171.5])
def test_log_gamma_signed(x):
    v = log_gamma_signed(x)
    want = mp.gamma(x)
    assert v.sign == (1 if want > 0 else -1)
    assert abs(v.log_abs - float(mp.log(abs(want)))) < 1e-12 * max(1, abs(v.log_abs))


def test_rgamma_matches_mpmath():
    for x in (-4.5, -0.3, 0.3, 2.0, 40.2):
        assert rgamma(x) == pytest.approx(float(mp.rgamma(x)), rel=1e-13)


def test_pochhammer():
    assert pochhammer(-3.0, 5) == 0.0
    assert pochhammer(0.5, 3) == pytest.approx(0.5 * 1.5 * 2.5)
    assert pochhammer_signed(-3.0, 5).value == 0.0
    assert pochhammer_signed(-2.5, 3).value == pytest.approx(float(mp.rf(-2.5, 3)))
    with pytest.raises(DomainError):
        pochhammer(1.0, -1)


@given(st.integers(0, 8), st.floats(-5, 5, **finite), st.floats(0.1, 6, **finite), st.floats(-2, 2, **finite))
def test_hyp2f1_terminating(k, b, c, x):
    want = float(mp.hyp2f1(-k, b, c, x))
    got = hyp2f1_terminating(k, b, c, x)
    scale = sum(abs(float(mp.rf(-k, m) * mp.rf(b, m) / mp.rf(c, m) / mp.factorial(m))) * abs(x) ** m
                for m in range(k + 1))
    assert abs(got - want) <= 1e-13 * max(scale, 1)


def test_beta_complex():
    a, b = 0.3 + 0.4j, 1.2 - 0.1j
    assert abs(beta_complex(a, b) - complex(mp.beta(a, b))) < 1e-13
    with pytest.raises(DomainError):
        beta_complex(-0.1, 1.0)


@pytest.mark.parametrize("k,a,b,z", [(0, 1.5, 1, 0.7), (3, 2.5, 1, 0.4), (4, -1.3, 2, -0.9)])
def test_bessel_poly(k, a, b, z):
    want = float(mp.hyp2f0(-k, k + a - 1, -z / b))
    assert bessel_poly(k, a, b, z) == pytest.approx(want, rel=1e-13)


@given(st.floats(-0.9, 5, **finite), st.integers(1, 4), st.integers(0, 6))
def test_gauss_multiplication(c, u, r):
    lhs, rhs = gauss_multiplication_sides(c, u, r)
    assert lhs == pytest.approx(rhs, rel=1e-12, abs=1e-300)


def test_compensated_sum():
    assert compensated_sum([1e16, 1.0, -1e16]) == 1.0
    assert math.isclose(compensated_sum([0.1] * 10), 1.0)
