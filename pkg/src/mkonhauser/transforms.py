"""Laplace transforms and Riemann-Liouville operators on the M-Konhauser family.

Transforms of ``z^{-p-q} _K M(y, wz)`` are formally divergent at z = 0 once
p + q >= 1; the termwise forms below continue each monomial moment through
Gamma, which is how the closed forms arise.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .polys import Params, bivariate_MK, finite_M
from .quadrature import build_rule
from .report import VerificationReport
from .scalar import (
    DomainError,
    PoleError,
    bessel_poly_coeffs,
    gamma_real,
    hyp2f0_coeffs,
    hyp2f1_terminating,
    log_gamma_signed,
    pochhammer,
    rgamma,
)


@dataclass(frozen=True)
class LaplaceCase:
    """1D uses ``(a, w)``; 2D uses ``(a, b)`` with scales ``w1 = w`` and ``w2``."""

    params: Params
    a: float
    w: float = 0.0
    b: float = 1.0
    w2: float = 0.0

    def __post_init__(self):
        if not self.a > 0 or not self.b > 0:
            raise DomainError("Laplace variables must be positive")

    def check_1d(self) -> None:
        u = self.params.upsilon
        if not abs(self.w ** u / self.a ** u) < 1:
            raise DomainError("|w^u / a^u| < 1 required")

    def check_2d(self) -> None:
        u = self.params.upsilon
        if self.b ** u == self.w2 ** u:
            raise PoleError("b^u = w2^u is a singularity of the 2D transform")
        if not abs(self.w2 ** u / self.b ** u) < 1:
            raise DomainError("|w2^u / b^u| < 1 required")


# --- 1D ----------------------------------------------------------------------

def laplace_1d_closed(case: LaplaceCase, y: float) -> float:
    case.check_1d()
    k, p, q, u = case.params.k, case.params.p, case.params.q, case.params.upsilon
    a, w = case.a, case.w
    d = w ** u - a ** u
    return (pochhammer(q + 1, k) * a ** (p + q - 1) * (d / a ** u) ** k
            * hyp2f1_terminating(k, k + 1 - p, q + 1, y * a ** u / d))


def laplace_1d_termwise(case: LaplaceCase, y: float) -> float:
    """Sum of MK terms times the continued moments ``Gamma(us-p-q+1) / a^{us-p-q+1}``."""
    mk = bivariate_MK(case.params)
    u, a = case.params.upsilon, case.a
    e0 = -case.params.p - case.params.q
    terms = []
    for l in range(mk.coeffs.shape[0]):
        for s in range(mk.coeffs.shape[1]):
            c = mk.coeffs[l, s]
            if c == 0:
                continue
            e = u * s + e0
            mom = log_gamma_signed(e + 1).value / a ** (e + 1)
            terms.append(c * y ** l * case.w ** (u * s) * mom)
    return math.fsum(terms)


def laplace_1d_M_form(case: LaplaceCase, y: float) -> float:
    case.check_1d()
    k, p, q, u = case.params.k, case.params.p, case.params.q, case.params.upsilon
    a, w = case.a, case.w
    d = a ** u - w ** u
    return a ** (p + q - 1) * (d / a ** u) ** k * finite_M(k, p, q)(y * a ** u / d)


def laplace_1d_quadrature(case: LaplaceCase, y: float, order: int = 80) -> float:
    """Literal Gauss-Laguerre integral; only meaningful for p + q < 1."""
    p, q = case.params.p, case.params.q
    if not p + q < 1:
        raise DomainError("literal z-integral diverges for p + q >= 1")
    rule = build_rule("laguerre", order, -p - q)
    mk = bivariate_MK(case.params)
    return case.a ** (p + q - 1) * rule.integrate(lambda t: mk(y, case.w * t / case.a))


# --- 2D ----------------------------------------------------------------------

def _prefactor_2d(case: LaplaceCase) -> tuple[float, float]:
    case.check_2d()
    k, p, q, u = case.params.k, case.params.p, case.params.q, case.params.upsilon
    a, b = case.a, case.b
    d = case.w2 ** u - b ** u
    pre = gamma_real(k + q + 1) / (a ** (q + 1) * b ** (1 - p - q)) * (d / b ** u) ** k
    return pre, d


def laplace_2d_closed(case: LaplaceCase) -> float:
    pre, d = _prefactor_2d(case)
    k, p, u = case.params.k, case.params.p, case.params.upsilon
    x = case.w * case.b ** u / (case.a * d)
    coeffs = hyp2f0_coeffs(k, k + 1 - p)
    return pre * math.fsum(c * x ** m for m, c in enumerate(coeffs))


def laplace_2d_bessel(case: LaplaceCase) -> float:
    pre, d = _prefactor_2d(case)
    k, p, u = case.params.k, case.params.p, case.params.upsilon
    x = case.w * case.b ** u / (case.a * -d)
    coeffs = bessel_poly_coeffs(k, 2 - p, 1.0)
    return pre * math.fsum(c * x ** m for m, c in enumerate(coeffs))


def laplace_2d_termwise(case: LaplaceCase) -> float:
    """``w1 = case.w``, ``w2 = case.w2``; continued z-moments as in 1D."""
    case.check_2d()
    mk = bivariate_MK(case.params)
    p, q, u = case.params.p, case.params.q, case.params.upsilon
    a, b = case.a, case.b
    terms = []
    for l in range(mk.coeffs.shape[0]):
        ymom = gamma_real(q + l + 1) / a ** (q + l + 1)
        for s in range(mk.coeffs.shape[1]):
            c = mk.coeffs[l, s]
            if c == 0:
                continue
            e = u * s - p - q
            zmom = log_gamma_signed(e + 1).value / b ** (e + 1)
            terms.append(c * case.w ** l * case.w2 ** (u * s) * ymom * zmom)
    return math.fsum(terms)


# --- Riemann-Liouville --------------------------------------------------------

def rl_integral_monomial(beta: float, sigma: float, a: float, x: float,
                         continued: bool = False) -> float:
    """``I^sigma_{a+}`` applied to ``(t-a)^beta``, evaluated at x.

    With ``continued`` the Gamma ratio is used for beta <= -1 as well, where the
    defining integral diverges.
    """
    if not sigma > 0:
        raise DomainError("order sigma > 0 required")
    if not x > a:
        raise DomainError("x > a required")
    if not beta > -1 and not continued:
        raise DomainError("beta > -1 required for a convergent fractional integral")
    if _pole(beta + 1):
        raise PoleError(f"Gamma pole at {beta + 1!r}")
    return gamma_real(beta + 1) * rgamma(beta + sigma + 1) * (x - a) ** (beta + sigma)


def rl_derivative_monomial(beta: float, sigma: float, a: float, x: float) -> float:
    """``D^sigma_{a+}`` applied to ``(t-a)^beta``; zero where ``1/Gamma(beta-sigma+1)`` vanishes."""
    if not sigma > 0:
        raise DomainError("order sigma > 0 required")
    if not x > a:
        raise DomainError("x > a required")
    if _pole(beta + 1):
        raise PoleError(f"Gamma pole at {beta + 1!r}")
    return gamma_real(beta + 1) * rgamma(beta - sigma + 1) * (x - a) ** (beta - sigma)


def _pole(x: float) -> bool:
    return x <= 0 and float(x).is_integer()


@dataclass(frozen=True)
class FracCase:
    params: Params
    mu: float
    lam: float
    a: float = 0.0
    b: float = 0.0
    w1: float = 1.0
    w2: float = 1.0

    def __post_init__(self):
        if not (self.mu > 0 and self.lam > 0):
            raise DomainError("fractional orders must be positive")


def _shifted_terms(case: FracCase):
    """``(y-a)^q (z-b)^{-p-q} _K M(w1(y-a), w2(z-b))`` as (coef, y-exponent, z-exponent)."""
    mk = bivariate_MK(case.params)
    p, q, u = case.params.p, case.params.q, case.params.upsilon
    for l in range(mk.coeffs.shape[0]):
        for s in range(mk.coeffs.shape[1]):
            c = mk.coeffs[l, s]
            if c:
                yield c * case.w1 ** l * case.w2 ** (u * s), q + l, u * s - p - q


def frac_integral_apply(case: FracCase, x: float, zpt: float) -> float:
    """Termwise ``I^lam_z I^mu_y`` of the shifted product, continued through Gamma."""
    return math.fsum(
        c * rl_integral_monomial(ey, case.mu, case.a, x, continued=True)
        * rl_integral_monomial(ez, case.lam, case.b, zpt, continued=True)
        for c, ey, ez in _shifted_terms(case))


def frac_derivative_apply(case: FracCase, x: float, zpt: float) -> float:
    return math.fsum(
        c * rl_derivative_monomial(ey, case.mu, case.a, x)
        * rl_derivative_monomial(ez, case.lam, case.b, zpt)
        for c, ey, ez in _shifted_terms(case))


def _shifted_product(params: Params, case: FracCase, x: float, zpt: float) -> float:
    dy, dz = x - case.a, zpt - case.b
    mk = bivariate_MK(params)
    return dy ** params.q * dz ** (-params.p - params.q) * float(mk(case.w1 * dy, case.w2 * dz))


def frac_integral_target(case: FracCase, x: float, zpt: float) -> float:
    P = case.params
    shifted = Params(P.p - case.mu - case.lam, P.q + case.mu, P.upsilon, P.k)
    ratio = log_gamma_signed(P.k + P.q + 1) / log_gamma_signed(P.k + P.q + case.mu + 1)
    return ratio.value * _shifted_product(shifted, case, x, zpt)


def frac_derivative_target(case: FracCase, x: float, zpt: float) -> float:
    P = case.params
    shifted = Params(P.p + case.mu + case.lam, P.q - case.mu, P.upsilon, P.k)
    ratio = log_gamma_signed(P.k + P.q + 1).value * rgamma(P.k + P.q - case.mu + 1)
    return ratio * _shifted_product(shifted, case, x, zpt)


def _frac_report(suite: str, case: FracCase, x: float, zpt: float, lhs: float, rhs: float,
                 tol: float) -> VerificationReport:
    P = case.params
    cid = (f"{suite}:p={P.p!r};q={P.q!r};u={P.upsilon};k={P.k};mu={case.mu!r};lam={case.lam!r};"
           f"y={x!r};z={zpt!r}")
    params = {"k": P.k, "p": P.p, "q": P.q, "upsilon": P.upsilon, "mu": case.mu, "lam": case.lam,
              "a": case.a, "b": case.b, "w1": case.w1, "w2": case.w2, "y": x, "z": zpt}
    return VerificationReport.compare(suite, cid, params, lhs, rhs, tol, mode="termwise")


def check_frac_integral_shift(case: FracCase, x: float, zpt: float, tol: float = 1e-10) -> VerificationReport:
    lhs = frac_integral_apply(case, x, zpt)
    rhs = frac_integral_target(case, x, zpt)
    return _frac_report("frac-integral", case, x, zpt, lhs, rhs, tol)


def check_frac_derivative_shift(case: FracCase, x: float, zpt: float, tol: float = 1e-10) -> VerificationReport:
    lhs = frac_derivative_apply(case, x, zpt)
    rhs = frac_derivative_target(case, x, zpt)
    return _frac_report("frac-derivative", case, x, zpt, lhs, rhs, tol)


def check_frac_roundtrip(case: FracCase, x: float, zpt: float, tol: float = 1e-9) -> VerificationReport:
    """``D^lam_z D^mu_y I^lam_z I^mu_y`` returns the original shifted product."""
    terms = []
    for c, ey, ez in _shifted_terms(case):
        iy = rl_integral_monomial(ey, case.mu, case.a, x, continued=True) / (x - case.a) ** (ey + case.mu)
        iz = rl_integral_monomial(ez, case.lam, case.b, zpt, continued=True) / (zpt - case.b) ** (ez + case.lam)
        terms.append(c * iy * iz
                     * rl_derivative_monomial(ey + case.mu, case.mu, case.a, x)
                     * rl_derivative_monomial(ez + case.lam, case.lam, case.b, zpt))
    lhs = math.fsum(terms)
    rhs = _shifted_product(case.params, case, x, zpt)
    return _frac_report("frac-roundtrip", case, x, zpt, lhs, rhs, tol)


def laplace_cases(n: int, seed: int = 0, k_max: int = 5) -> list[LaplaceCase]:
    """Random admissible cases for the closed-form comparisons."""
    rng = np.random.default_rng(seed)
    out = []
    while len(out) < n:
        u = int(rng.integers(1, 4))
        k = int(rng.integers(0, k_max + 1))
        p = float(rng.uniform(2 * k + 1.5, 2 * k + 6))
        q = float(rng.uniform(-0.9, 2.0))
        if (1 - p - q) % 1 == 0:
            continue
        a = float(rng.uniform(0.5, 2.5))
        b = float(rng.uniform(0.5, 2.5))
        w = float(rng.uniform(0.0, 0.9)) * a
        w2 = float(rng.uniform(0.0, 0.9)) * b
        out.append(LaplaceCase(Params(p, q, u, k), a, w, b, w2))
    return out


__all__ = [
    "LaplaceCase", "FracCase", "laplace_1d_closed", "laplace_1d_termwise", "laplace_1d_M_form",
    "laplace_1d_quadrature", "laplace_2d_closed", "laplace_2d_bessel", "laplace_2d_termwise",
    "rl_integral_monomial", "rl_derivative_monomial", "frac_integral_apply",
    "frac_derivative_apply", "frac_integral_target", "frac_derivative_target",
    "check_frac_integral_shift", "check_frac_derivative_shift", "check_frac_roundtrip",
    "laplace_cases",
]
