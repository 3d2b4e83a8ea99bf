import math

import mpmath as mp
import numpy as np
import pytest

from mkonhauser.fourier import (
    G,
    FourierParams,
    Psi1,
    Upsilon1,
    Upsilon2,
    check_fourier_closed,
    fourier_closed,
    fourier_direct,
    fourier_norm,
    gamma_decay_bound,
    parseval_consistency,
    truncation_box,
    verify_fourier_biorthogonality,
    weight_rho,
)
from mkonhauser.scalar import DomainError, PoleError

COUPLED = FourierParams(0.2, 0.1, 0.2, 0.1, upsilon=2)
# left/right data with beta = -1 so the transform integrals converge at k, r <= 1
PAIR0 = dict(p=0.2, q=0.1, a=1.4, b=-0.8)
PAIR1 = dict(p=1.2, q=-0.8, a=1.5, b=-1.0)


def left(pair, k, u=2):
    return FourierParams(pair["p"], pair["q"], 0.2, 0.1, u, pair["a"], pair["b"], k=k)


def right(pair, r, u=2):
    return FourierParams(0.2, 0.1, pair["p"], pair["q"], u, gamma=pair["a"], delta=pair["b"], r=r)


@pytest.mark.parametrize("xi1,xi2", [(0.0, 0.0), (0.5, -0.3), (-1.2, 0.8)])
def test_G_matches_mpmath(xi1, xi2):
    p, q = 0.3, 0.15
    c = 0.5 - p - q - 1j * xi2
    want = 2 ** c * mp.beta(p + 1j * xi1, q - 1j * xi1) * mp.gamma(c)
    assert abs(G(p, q, xi1, xi2) - complex(want)) <= 1e-13 * abs(complex(want))


def test_G_broadcasts():
    xi = np.array([0.0, 0.4, 1.0])
    vals = G(0.3, 0.15, xi, 0.2)
    assert vals.shape == (3,)
    assert vals[1] == pytest.approx(G(0.3, 0.15, 0.4, 0.2), rel=1e-15)


def test_G_is_the_k0_transform():
    # at k = 0 the transform of the bare envelope is G times 1/Gamma(1 - a - b)
    fp = left(PAIR0, 0)
    xi1, xi2 = 0.5, 0.5
    closed = fourier_closed("left", fp, xi1, xi2)
    want = G(fp.p1, fp.q1, xi1, xi2) / float(mp.gamma(1 - fp.alpha - fp.beta))
    assert closed == pytest.approx(want, rel=1e-14)


@pytest.mark.parametrize("side,pair,n", [("left", PAIR0, 0), ("left", PAIR1, 1), ("right", PAIR0, 0),
                                         ("right", PAIR1, 1)])
def test_closed_matches_direct(side, pair, n):
    fp = left(pair, n) if side == "left" else right(pair, n)
    rep = check_fourier_closed(side, fp, 0.5, 0.5)
    assert rep.passed, rep.summary_line()
    assert rep.rel_err <= 1e-6


def test_right_pole_at_order_zero():
    # Gamma(r + delta + 1) has a pole when delta = -1 and r = 0
    with pytest.raises(PoleError):
        fourier_closed("right", right(PAIR1, 0), 0.5, 0.5)


def test_direct_diverges_outside_regime():
    with pytest.raises(DomainError):
        truncation_box("left", FourierParams(0.2, 0.1, 0.2, 0.1, 2, 1.4, 0.2, k=1))
    with pytest.raises(ValueError):
        fourier_direct("middle", COUPLED, 0.0, 0.0)


def test_regime_violations():
    assert COUPLED.regime_violations(0) == []
    assert "p1+p2 > 2k required" in COUPLED.regime_violations(1)
    bad = FourierParams(0.4, 0.3, 0.2, -0.1)
    assert set(bad.regime_violations()) == {"p1, q1, p2, q2 > 0 required", "p1+q1 < 1/2 required"}
    with pytest.raises(DomainError):
        verify_fourier_biorthogonality(1, 1, COUPLED)


def test_coupled_defaults():
    assert (COUPLED.alpha, COUPLED.beta) == pytest.approx((1.4, -0.8))
    assert (COUPLED.gamma, COUPLED.delta) == pytest.approx((1.4, -0.8))


def test_norm_k0_closed_form():
    p1, q1, p2, q2 = 0.2, 0.1, 0.3, 0.05
    fp = FourierParams(p1, q1, p2, q2)
    want = (4 * math.pi ** 2 * math.gamma(p1 + q1) * math.gamma(p2 + q2) * math.gamma(p1 + p2 + 1)
            / (math.gamma(q1 + q2) * math.gamma(p1 + p2 + q1 + q2) * (p1 + p2)))
    assert fourier_norm(0, fp) == pytest.approx(want, rel=1e-14)


def test_upsilon_k0_constants():
    fp = COUPLED
    a, b = fp.p1 + fp.p2 + 1, fp.q1 + fp.q2 - 1
    want = 2 ** (0.5 - fp.p1 - fp.q1) / (math.gamma(b + 1) * math.gamma(1 - a - b))
    assert Upsilon1(0, fp, 0.3, -0.2) == pytest.approx(want, rel=1e-14)
    assert Upsilon2(0, fp, 0.3, -0.2) == pytest.approx(2 ** (0.5 - fp.p2 - fp.q2) / math.gamma(b + 1), rel=1e-14)


def test_psi1_k1_expansion():
    # three terms: (l, s) = (0, 0), (1, 0), (0, 1)
    p, q, a, b, u, x1, x2 = 0.2, 0.1, 1.4, -0.8, 2, 0.7, -0.4
    c = 0.5 - p - q - 1j * x2
    want = (mp.rgamma(b + 1) * mp.rgamma(1 - a - b)
            - (2 - a) * mp.rgamma(b + 2) * mp.rgamma(1 - a - b) * (q - 1j * x1) / (1 - p - 1j * x1)
            - 2 ** u * mp.rgamma(b + 1) * mp.rgamma(u + 1 - a - b) * mp.rf(c, u))
    assert abs(Psi1(1, p, q, a, b, u, x1, x2) - complex(want)) <= 1e-14 * abs(complex(want))


def test_weight_and_decay_bound():
    for t in (2.0, 5.0, 9.0):
        assert abs(complex(mp.gamma(0.3 + 1j * t))) <= gamma_decay_bound(0.3, t)
    w = weight_rho(0.2, 0.1, 0.2, 0.1, 0.4, -0.3)
    want = (mp.gamma(0.2 + 0.4j) * mp.gamma(0.2 - 0.4j) * mp.gamma(0.1 - 0.4j) * mp.gamma(0.1 + 0.4j)
            * mp.gamma(0.2 + 0.3j) * mp.gamma(0.2 - 0.3j))
    assert abs(w - complex(want)) <= 1e-13 * abs(complex(want))


def test_biorth_diagonal():
    rep = verify_fourier_biorthogonality(0, 0, COUPLED)
    assert rep.passed, rep.summary_line()


def test_parseval_k0():
    rep = parseval_consistency(0, 0, COUPLED)
    assert rep.passed, rep.summary_line()
