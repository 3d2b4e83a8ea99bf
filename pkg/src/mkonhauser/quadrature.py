"""Gaussian rules and the (bi)orthogonality checks built on them.

Rules come from the symmetric tridiagonal Jacobi matrix of each weight's
orthogonal family (Golub-Welsch). Eigenvalues are polished by Newton steps on
the three-term recurrence, and weights are taken from the Christoffel sum of
orthonormal polynomials, which keeps small tail weights relatively accurate.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Callable

import numpy as np

from .polys import (
    Params,
    UniPoly,
    bivariate_MK,
    companion_Mcal,
    finite_M,
    konhauser_Y,
    konhauser_Z,
)
from .report import VerificationReport
from .scalar import DomainError, PoleError, gamma_real, log_gamma_signed

DEFAULT_ORDER = 80
MAX_ORDER = 640
STABLE_RTOL = 1e-11


@dataclass(frozen=True, eq=False)
class QuadRule:
    nodes: np.ndarray
    weights: np.ndarray
    kind: str
    order: int
    alpha: float = 0.0
    beta: float = 0.0

    def integrate(self, f: Callable) -> float:
        return float(np.dot(self.weights, f(self.nodes)))

    @property
    def exactness_degree(self) -> int:
        return 2 * self.order - 1


def _recurrence(kind: str, n: int, alpha: float, beta: float):
    """Monic recurrence coefficients (a_0..a_{n-1}, b_0..b_{n-1}) and mu_0."""
    j = np.arange(n, dtype=float)
    if kind == "legendre":
        a = np.zeros(n)
        b = j ** 2 / (4 * j ** 2 - 1)
        mu0 = 2.0
    elif kind == "laguerre":
        a = 2 * j + alpha + 1
        b = j * (j + alpha)
        mu0 = gamma_real(alpha + 1)
    elif kind == "jacobi":
        ab = alpha + beta
        a = np.empty(n)
        b = np.zeros(n)
        a[0] = (beta - alpha) / (ab + 2)
        for i in range(1, n):
            s = 2 * i + ab
            a[i] = (beta ** 2 - alpha ** 2) / (s * (s + 2))
            if i == 1:
                b[i] = 4 * (1 + alpha) * (1 + beta) / ((2 + ab) ** 2 * (3 + ab))
            else:
                b[i] = 4 * i * (i + alpha) * (i + beta) * (i + ab) / (s ** 2 * (s + 1) * (s - 1))
        mu0 = math.exp((ab + 1) * math.log(2) + math.lgamma(alpha + 1) + math.lgamma(beta + 1)
                       - math.lgamma(ab + 2))
    else:
        raise DomainError(f"unknown rule kind {kind!r}")
    return a, b, mu0


def _orthonormal_tail(x, a, b, mu0):
    """Christoffel sum sum_j p_j(x)^2 (as log) plus p_n and p_n' ratio for Newton."""
    n = len(a)
    sb = np.sqrt(b)
    p_prev = np.zeros_like(x)
    p = np.full_like(x, 1.0 / math.sqrt(mu0))
    dp_prev = np.zeros_like(x)
    dp = np.zeros_like(x)
    log_scale = np.zeros_like(x)
    total = p ** 2
    for i in range(n):
        nb = sb[i + 1] if i + 1 < n else math.sqrt(_next_b(a, b, i + 1))
        p_next = ((x - a[i]) * p - sb[i] * p_prev) / nb
        dp_next = (p + (x - a[i]) * dp - sb[i] * dp_prev) / nb
        p_prev, p, dp_prev, dp = p, p_next, dp, dp_next
        if i + 1 < n:
            total = total + p ** 2
        big = np.abs(p) > 1e100
        if big.any():
            f = np.where(big, 1.0 / np.maximum(np.abs(p), 1.0), 1.0)
            p, p_prev, dp, dp_prev = p * f, p_prev * f, dp * f, dp_prev * f
            total = total * f ** 2
            log_scale = log_scale - 2 * np.log(f)
    return np.log(total) + log_scale, p / dp


def _next_b(a, b, n):
    # b_n is only needed as a positive normaliser for p_n; the root set is unaffected
    return b[n - 1] if n - 1 > 0 else 1.0


@lru_cache(maxsize=None)
@lru_cache(maxsize=256)
def build_rule(kind: str, order: int, alpha: float = 0.0, beta: float = 0.0) -> QuadRule:
    """Gauss rule of ``order`` nodes for ``kind`` in {legendre, laguerre, jacobi}.

    ``laguerre`` uses weight ``t**alpha exp(-t)`` on (0, inf); ``jacobi`` uses
    ``(1-t)**alpha (1+t)**beta`` on (-1, 1). Rules are cached and read-only.
    """
    if order < 1:
        raise DomainError("order must be >= 1")
    if kind in ("laguerre", "jacobi") and not alpha > -1:
        raise DomainError("exponent alpha > -1 required")
    if kind == "jacobi" and not beta > -1:
        raise DomainError("exponent beta > -1 required")
    a, b, mu0 = _recurrence(kind, order, alpha, beta)
    jm = np.diag(a) + np.diag(np.sqrt(b[1:]), 1) + np.diag(np.sqrt(b[1:]), -1)
    x = np.linalg.eigvalsh(jm)
    for _ in range(3):
        _, step = _orthonormal_tail(x, a, b, mu0)
        x = x - step
    log_s, _ = _orthonormal_tail(x, a, b, mu0)
    w = np.exp(-log_s)
    if kind == "legendre":
        # enforce exact symmetry
        x = 0.5 * (x - x[::-1])
        w = 0.5 * (w + w[::-1])
    x.setflags(write=False)
    w.setflags(write=False)
    return QuadRule(x, w, kind, order, alpha, beta)


def integrate_until_stable(fn: Callable[[int], float], order: int = DEFAULT_ORDER,
                           rtol: float = STABLE_RTOL, max_order: int = MAX_ORDER,
                           atol: float = 0.0) -> tuple[float, int]:
    """Evaluate ``fn(order)`` with doubling orders until two results agree.

    ``atol`` lets values that should vanish settle against a known scale.
    """
    prev = fn(order)
    while order < max_order:
        order *= 2
        cur = fn(order)
        if abs(cur - prev) <= max(rtol * abs(cur), atol, 1e-300):
            return cur, order
        prev = cur
    return prev, order


def integrate_M_weight(f: Callable, p: float, q: float, degree: int, order: int = DEFAULT_ORDER) -> float:
    """``int_0^inf y^q (1+y)^{-(p+q)} f(y) dy`` for a polynomial f of given degree.

    The map ``y = t/(1-t)`` turns the integrand into ``t^q (1-t)^{p-2-d} P(t)``
    with P a polynomial, integrated exactly by a Gauss-Jacobi rule.
    """
    if not q > -1:
        raise DomainError("M-weight integral diverges at 0 (q > -1 required)")
    expo = p - 2 - degree
    if not expo > -1:
        raise DomainError(f"M-weight integral diverges at infinity (p > {degree + 1} required)")
    order = max(order, degree // 2 + 1)
    rule = build_rule("jacobi", order, expo, q)
    t = 0.5 * (1 + rule.nodes)
    y = t / (1 - t)
    vals = np.asarray(f(y), dtype=float) * (1 - t) ** degree
    return float(np.dot(rule.weights, vals)) * 2.0 ** (-(expo + q + 1))


def gamma_moment_functional(poly: UniPoly, a: float) -> float:
    """``sum_j c_j Gamma(a + stride*j + 1)``: termwise ``int_0^inf e^{-z} z^a poly(z) dz``.

    Defined by analytic continuation when some exponents are <= -1.
    """
    if (poly.shift, poly.scale) != (0.0, 1.0):
        raise ValueError("gamma_moment_functional needs an unmapped polynomial")
    terms = []
    for j, c in enumerate(poly.coeffs):
        if c == 0:
            continue
        terms.append(c * log_gamma_signed(a + poly.stride * j + 1).value)
    return math.fsum(terms)


def _params_dict(**kw) -> dict:
    return {k: (float(v) if isinstance(v, float) else v) for k, v in kw.items()}


def verify_konhauser_biorthogonality(k: int, r: int, c: float, upsilon: int,
                                     order: int = DEFAULT_ORDER, tol: float = 1e-9) -> VerificationReport:
    if not c > -1:
        raise DomainError("c > -1 required")
    zk = konhauser_Z(k, c, upsilon)
    yr = konhauser_Y(r, c, upsilon)
    prod = zk * yr

    def run(n):
        rule = build_rule("laguerre", max(n, prod.degree // 2 + 1), c)
        return rule.integrate(prod)

    lhs, used = integrate_until_stable(run, order)
    norm = log_gamma_signed(upsilon * k + c + 1).value / math.factorial(k)
    rhs = norm if k == r else 0.0
    scale = None
    if k != r:
        # cancellation in the monomial basis scales with the larger norm of the pair
        scale = max(log_gamma_signed(upsilon * n + c + 1).value / math.factorial(n) for n in (k, r))
    return VerificationReport.compare(
        "konhauser", f"konhauser:u={upsilon};c={c!r};k={k};r={r}",
        _params_dict(k=k, r=r, c=c, upsilon=upsilon), lhs, rhs, tol,
        mode="gauss-laguerre", scale=scale, extra={"order": used})


def m_norm(k: int, p: float, q: float) -> float:
    return (math.factorial(k) * gamma_real(p - k) * gamma_real(q + k + 1)
            / ((p - 2 * k - 1) * gamma_real(p + q - k)))


def verify_M_orthogonality(k: int, r: int, p: float, q: float,
                           order: int = DEFAULT_ORDER, tol: float = 1e-10) -> VerificationReport:
    if not (q > -1 and p > 2 * max(k, r) + 1):
        raise DomainError("q > -1 and p > 2max(k,r)+1 required")
    mk, mr = finite_M(k, p, q), finite_M(r, p, q)
    deg = k + r

    def run(n):
        return integrate_M_weight(lambda y: mk(y) * mr(y), p, q, deg, n)

    norms = max(abs(m_norm(k, p, q)), abs(m_norm(r, p, q)))
    lhs, used = integrate_until_stable(run, order, atol=STABLE_RTOL * norms)
    rhs = m_norm(k, p, q) if k == r else 0.0
    scale = None if k == r else norms
    return VerificationReport.compare(
        "m-orth", f"m-orth:p={p!r};q={q!r};k={k};r={r}",
        _params_dict(k=k, r=r, p=p, q=q), lhs, rhs, tol,
        mode="gauss-jacobi", scale=scale, extra={"order": used})


def mk_regimes(params: Params, r: int) -> dict:
    """Which readings of the MK cross-integral exist for ``(k, r)``."""
    base = params.q > -1 and params.p > 2 * max(params.k, r) + 1
    return {"hybrid": base, "fully-numeric": base and params.p + params.q < 1}


def mk_cross_integral(params: Params, r: int, mode: str = "hybrid",
                      order: int = DEFAULT_ORDER) -> tuple[float, int]:
    """``int int rho _K M_k _K Mcal_r`` split per power of y.

    ``_K M_k = sum_l y^l A_l(z)``; the y-part of each l is integrated by
    Gauss-Jacobi against ``y^l M_r(y)`` and the z-part of ``A_l * tail_r`` by the
    Gamma moment functional (hybrid) or Gauss-Laguerre (fully-numeric).
    """
    regimes = mk_regimes(params, r)
    if not regimes[mode]:
        raise DomainError(f"mode {mode!r} infeasible for p={params.p}, q={params.q}, k={params.k}, r={r}"
                          + ("; z-weight z^(-p-q) not integrable at 0 (p+q < 1 needed)"
                             if mode == "fully-numeric" else "; q > -1 and p > 2max(k,r)+1 needed"))
    mk = bivariate_MK(params)
    comp = companion_Mcal(Params(params.p, params.q, params.upsilon, r))
    a = -params.p - params.q
    used = order

    def z_integral(poly: UniPoly, n: int) -> float:
        if mode == "hybrid":
            return gamma_moment_functional(poly, a)
        rule = build_rule("laguerre", max(n, poly.degree // 2 + 1), a)
        return rule.integrate(poly)

    def run(n):
        terms = []
        for l in range(params.k + 1):
            zpoly = mk.z_poly(l) * comp.tail
            zi = z_integral(zpoly, n)
            if zi == 0:
                continue
            yi = integrate_M_weight(lambda y, l=l: y ** l * comp.base(y), params.p, params.q, l + r, n)
            terms.append(yi * zi)
        return math.fsum(terms)

    val, used = integrate_until_stable(run, order)
    return val, used


def verify_MK_biorthogonality(k: int, r: int, params: Params, order: int = DEFAULT_ORDER,
                              mode: str = "hybrid", tol: float = 1e-9) -> VerificationReport:
    pk = params.with_k(k)
    lhs, used = mk_cross_integral(pk, r, mode, order)
    rhs = m_norm(k, params.p, params.q) if k == r else 0.0
    scale = None if k == r else max(abs(m_norm(k, params.p, params.q)), abs(m_norm(r, params.p, params.q)))
    return VerificationReport.compare(
        "mk-biorth",
        f"mk-biorth:{mode};p={params.p!r};q={params.q!r};u={params.upsilon};k={k};r={r}",
        _params_dict(k=k, r=r, p=params.p, q=params.q, upsilon=params.upsilon),
        lhs, rhs, tol, mode=mode, scale=scale, extra={"order": used})


__all__ = [
    "QuadRule", "build_rule", "integrate_until_stable", "integrate_M_weight",
    "gamma_moment_functional", "verify_konhauser_biorthogonality", "verify_M_orthogonality",
    "verify_MK_biorthogonality", "mk_cross_integral", "mk_regimes", "m_norm",
    "DomainError", "PoleError",
]
