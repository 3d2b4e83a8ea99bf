"""Fourier transforms of the Konhauser-type pair and the finite biorthogonal
functions they induce through Parseval's identity.

The transformed functions are

    d(y, z) = (1+e^y)^{-(p1+q1)} exp(q1 y + (1/2-p1-q1) z - e^z/2) _K M_k^{(alpha,beta)}(e^y, e^z)
    f(y, z) = (1+e^y)^{-(p2+q2)} exp(q2 y + (1/2-p2-q2) z - e^z/2) _K Mcal_r^{(gamma,delta)}(e^y, e^z)

with the transform ``int int exp(-i(xi1 y + xi2 z)) d(y, z) dy dz``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, replace
from functools import lru_cache

import numpy as np

from . import kernels
from .polys import Params, UniPoly, bivariate_MK, companion_Mcal
from .quadrature import build_rule
from .report import VerificationReport
from .scalar import DomainError, PoleError, gamma_real, log_gamma_signed, pochhammer, rgamma

TRUNC_LOG = 28.0  # truncate where the envelope drops below e^-28
GL_PANEL_NODES = 8


@dataclass(frozen=True)
class FourierParams:
    """Left data ``(p1, q1, alpha, beta, k)`` and right data ``(p2, q2, gamma, delta, r)``.

    ``alpha..delta`` default to the coupled values ``alpha = gamma = p1+p2+1`` and
    ``beta = delta = q1+q2-1``.
    """

    p1: float
    q1: float
    p2: float
    q2: float
    upsilon: int = 1
    alpha: float | None = None
    beta: float | None = None
    gamma: float | None = None
    delta: float | None = None
    k: int = 0
    r: int = 0

    def __post_init__(self):
        a = self.p1 + self.p2 + 1
        b = self.q1 + self.q2 - 1
        for name, default in (("alpha", a), ("beta", b), ("gamma", a), ("delta", b)):
            if getattr(self, name) is None:
                object.__setattr__(self, name, default)
        Params(1.0, 0.0, self.upsilon, self.k)
        Params(1.0, 0.0, self.upsilon, self.r)

    @property
    def params_left(self) -> Params:
        return Params(self.alpha, self.beta, self.upsilon, self.k)

    @property
    def params_right(self) -> Params:
        return Params(self.gamma, self.delta, self.upsilon, self.r)

    def with_orders(self, k: int, r: int) -> "FourierParams":
        return replace(self, k=k, r=r)

    def regime_violations(self, k: int | None = None) -> list[str]:
        out = []
        if not min(self.p1, self.q1, self.p2, self.q2) > 0:
            out.append("p1, q1, p2, q2 > 0 required")
        if not self.p1 + self.q1 < 0.5:
            out.append("p1+q1 < 1/2 required")
        if not self.p2 + self.q2 < 0.5:
            out.append("p2+q2 < 1/2 required")
        if k is not None and not self.p1 + self.p2 > 2 * k:
            out.append("p1+p2 > 2k required")
        return out


def _c(x) -> np.ndarray:
    return np.asarray(x, dtype=complex)


def _cgamma(z) -> np.ndarray:
    z = np.atleast_1d(_c(z))
    pole = (z.imag == 0) & (z.real <= 0) & (z.real == np.round(z.real))
    if pole.any():
        raise PoleError(f"Gamma has a pole at {z[pole][0]!r}")
    return kernels.cgamma(z.ravel()).reshape(z.shape)


def _poch(a, n: int) -> np.ndarray:
    out = np.ones_like(_c(a))
    for i in range(n):
        out = out * (a + i)
    return out


def _shape_out(val, *args):
    return val if np.ndim(np.broadcast(*args)) else complex(np.asarray(val).ravel()[0])


def G(p: float, q: float, xi1, xi2):
    """``2^{1/2-p-q-i xi2} B(p+i xi1, q-i xi1) Gamma(1/2-p-q-i xi2)``."""
    x1, x2 = np.broadcast_arrays(_c(xi1), _c(xi2))
    a, b = p + 1j * x1, q - 1j * x1
    beta = _cgamma(a) * _cgamma(b) / _cgamma(a + b)
    c = 0.5 - p - q - 1j * x2
    val = 2.0 ** c * beta * _cgamma(c)
    return _shape_out(val, xi1, xi2)


G1 = G
G2 = G


def Psi1(k: int, p1: float, q1: float, alpha: float, beta: float, upsilon: int, xi1, xi2):
    x1, x2 = np.broadcast_arrays(_c(xi1), _c(xi2))
    a1 = q1 - 1j * x1
    d1 = 1 - p1 - 1j * x1
    a2 = 0.5 - p1 - q1 - 1j * x2
    out = np.zeros(x1.shape, dtype=complex)
    for l in range(k + 1):
        den = _poch(d1, l)
        if np.any(den == 0):
            raise PoleError("(1-p1-i xi1)_l vanishes")
        ypart = _poch(a1, l) / den
        for s in range(k + 1 - l):
            coef = (pochhammer(-k, l + s) * pochhammer(k + 1 - alpha, l) * 2.0 ** (upsilon * s)
                    * rgamma(l + beta + 1) * rgamma(upsilon * s - alpha - beta + 1)
                    / (math.factorial(l) * math.factorial(s)))
            if coef:
                out += coef * ypart * _poch(a2, upsilon * s)
    return _shape_out(out, xi1, xi2)


def _psi2_z_coeffs(r: int, gamma: float, delta: float, upsilon: int) -> list[float]:
    """Real coefficient of ``2^l (a)_l`` in the (j, l, m) triple sum, indexed by l."""
    out = [0.0] * (r + 1)
    for j in range(r + 1):
        for l in range(j + 1):
            for m in range(l + 1):
                out[l] += ((-1) ** m * 2.0 ** l * pochhammer((m - gamma - delta + 1) / upsilon, j)
                           / (math.factorial(j) * math.factorial(m) * math.factorial(l - m)))
    return out


def Psi2(r: int, p2: float, q2: float, gamma: float, delta: float, upsilon: int, xi1, xi2):
    x1, x2 = np.broadcast_arrays(_c(xi1), _c(xi2))
    a1 = q2 - 1j * x1
    d1 = 1 - p2 - 1j * x1
    ysum = np.zeros(x1.shape, dtype=complex)
    for s in range(r + 1):
        den = _poch(d1, s)
        if np.any(den == 0):
            raise PoleError("(1-p2-i xi1)_s vanishes")
        coef = (pochhammer(-r, s) * pochhammer(r + 1 - gamma, s) * rgamma(s + delta + 1)
                / math.factorial(s))
        if coef:
            ysum += coef * _poch(a1, s) / den
    a2 = 0.5 - p2 - q2 - 1j * x2
    zsum = np.zeros(x2.shape, dtype=complex)
    for l, c in enumerate(_psi2_z_coeffs(r, gamma, delta, upsilon)):
        if c:
            zsum += c * _poch(a2, l)
    return _shape_out(ysum * zsum, xi1, xi2)


def fourier_closed(side: str, fp: FourierParams, xi1, xi2):
    """``(-1)^k Gamma(k+beta+1) G Psi`` for the left (d) or right (f) function."""
    if side == "left":
        k = fp.k
        pre = (-1) ** k * gamma_real(k + fp.beta + 1)
        return pre * G(fp.p1, fp.q1, xi1, xi2) * Psi1(k, fp.p1, fp.q1, fp.alpha, fp.beta, fp.upsilon, xi1, xi2)
    if side == "right":
        r = fp.r
        pre = (-1) ** r * gamma_real(r + fp.delta + 1)
        return pre * G(fp.p2, fp.q2, xi1, xi2) * Psi2(r, fp.p2, fp.q2, fp.gamma, fp.delta, fp.upsilon, xi1, xi2)
    raise ValueError(f"side must be 'left' or 'right', not {side!r}")


# --- direct quadrature of the transforms ----------------------------------------

@lru_cache(maxsize=None)
def _gl_unit(n: int):
    rule = build_rule("legendre", n)
    return rule.nodes, rule.weights


def composite_gl(lo: float, hi: float, width: float, n: int = GL_PANEL_NODES):
    panels = max(1, math.ceil((hi - lo) / width))
    edges = np.linspace(lo, hi, panels + 1)
    t, w = _gl_unit(n)
    half = 0.5 * np.diff(edges)
    mid = 0.5 * (edges[1:] + edges[:-1])
    nodes = (mid[:, None] + half[:, None] * t[None, :]).ravel()
    weights = (half[:, None] * w[None, :]).ravel()
    return nodes, weights


def _side_data(side: str, fp: FourierParams):
    """(p, q, y-polynomial rows, z-polynomials) with the integrand ``sum_l e^{l y} A_l(e^z)``."""
    if side == "left":
        mk = bivariate_MK(fp.params_left)
        rows = [(l, mk.z_poly(l)) for l in range(mk.coeffs.shape[0]) if np.any(mk.coeffs[l])]
        return fp.p1, fp.q1, rows
    if side == "right":
        comp = companion_Mcal(fp.params_right)
        rows = [(l, UniPoly(comp.tail.coeffs * c, comp.tail.stride))
                for l, c in enumerate(comp.base.coeffs) if c]
        return fp.p2, fp.q2, rows
    raise ValueError(f"side must be 'left' or 'right', not {side!r}")


def truncation_box(side: str, fp: FourierParams, trunc_log: float = TRUNC_LOG):
    """Integration box from the envelope's exponential decay rates."""
    p, q, rows = _side_data(side, fp)
    if not rows:
        return (-1.0, 1.0), (-1.0, 1.0)
    lmin = min(l for l, _ in rows)
    lmax = max(l for l, _ in rows)
    zmin_pow = min(int(np.flatnonzero(a.coeffs)[0]) * a.stride for _, a in rows)
    lower_y, upper_y = q + lmin, p - lmax
    lower_z = 0.5 - p - q + zmin_pow
    if min(lower_y, upper_y, lower_z) <= 0:
        raise DomainError(
            f"transform integral diverges (decay rates y-: {lower_y:.3g}, y+: {upper_y:.3g}, z-: {lower_z:.3g})")
    # e^{-e^z/2} beats any power once e^z/2 > trunc_log + a margin for the polynomial
    zdeg = max(a.degree for _, a in rows)
    upper_z = math.log(2 * (trunc_log + zdeg * 5 + 10))
    return (-trunc_log / lower_y, trunc_log / upper_y), (-trunc_log / lower_z, upper_z)


def fourier_direct(side: str, fp: FourierParams, xi1: float, xi2: float,
                   width: float | None = None, trunc_log: float = TRUNC_LOG, chunk: int = 2048) -> complex:
    """Tensor-grid Gauss-Legendre value of the transform at ``(xi1, xi2)``."""
    p, q, rows = _side_data(side, fp)
    (ylo, yhi), (zlo, zhi) = truncation_box(side, fp, trunc_log)
    if width is None:
        width = min(0.5, math.pi / (4 * max(abs(xi1), abs(xi2), 1e-12)))
    ys, wy = composite_gl(ylo, yhi, width)
    zs, wz = composite_gl(zlo, zhi, min(width, 0.25))
    # z-side factor: envelope times the polynomial rows, shape (rows, nz)
    ez = np.exp(zs)
    zenv = np.exp((0.5 - p - q) * zs - 0.5 * ez)
    zrows = np.array([a(ez) * zenv for _, a in rows])
    lpow = np.array([l for l, _ in rows], dtype=float)
    total = 0.0 + 0.0j
    for start in range(0, len(ys), chunk):
        y = ys[start:start + chunk]
        yenv = np.exp(q * y - (p + q) * np.logaddexp(0.0, y))
        # grid of the integrand: sum_l e^{l y} yenv(y) * zrows[l](z)
        yrows = np.exp(np.outer(y, lpow)) * yenv[:, None]
        grid = yrows @ zrows
        total += (wy[start:start + chunk] * np.exp(-1j * xi1 * y)) @ grid @ (wz * np.exp(-1j * xi2 * zs))
    return complex(total)


# --- biorthogonal functions on the Fourier side --------------------------------

def Upsilon1(k: int, fp: FourierParams, y, z):
    return 2.0 ** (0.5 - fp.p1 - fp.q1) * Psi1(
        k, fp.p1, fp.q1, fp.p1 + fp.p2 + 1, fp.q1 + fp.q2 - 1, fp.upsilon, -1j * _c(y), -1j * _c(z))


def Upsilon2(r: int, fp: FourierParams, y, z):
    return 2.0 ** (0.5 - fp.p2 - fp.q2) * Psi2(
        r, fp.p2, fp.q2, fp.p2 + fp.p1 + 1, fp.q2 + fp.q1 - 1, fp.upsilon, -1j * _c(y), -1j * _c(z))


def weight_rho(p1: float, q1: float, p2: float, q2: float, y, z):
    y, z = np.broadcast_arrays(_c(y), _c(z))
    val = (_cgamma(p1 + 1j * y) * _cgamma(p2 - 1j * y) * _cgamma(q1 - 1j * y) * _cgamma(q2 + 1j * y)
           * _cgamma(0.5 - p1 - q1 - 1j * z) * _cgamma(0.5 - p2 - q2 + 1j * z))
    return val if val.ndim else complex(val)


def gamma_decay_bound(sigma: float, t: float, C: float = 3.0) -> float:
    """``C exp(-pi|t|/2 + |sigma| |log|t||)``, an envelope for ``|Gamma(sigma + i t)|``."""
    return C * math.exp(-math.pi * abs(t) / 2 + abs(sigma) * abs(math.log(abs(t))))


def fourier_norm(k: int, fp: FourierParams) -> float:
    p12, q12 = fp.p1 + fp.p2, fp.q1 + fp.q2
    lg = (log_gamma_signed(fp.p1 + fp.q1) * log_gamma_signed(fp.p2 + fp.q2)
          * log_gamma_signed(p12 + 1 - k) / log_gamma_signed(k + q12) / log_gamma_signed(p12 + q12 - k))
    return 4 * math.pi ** 2 * math.factorial(k) * lg.value / (p12 - 2 * k)


def graded_gl(L: float, near: float, width: float, n: int = GL_PANEL_NODES):
    """Gauss-Legendre on [-L, L] with panels refined toward 0.

    ``near`` is the distance of the closest integrand singularity to the real
    axis at the origin; each panel is at most half as wide as its distance to it.
    """
    edges = [0.0]
    while edges[-1] < L:
        a = edges[-1]
        edges.append(min(L, a + min(width, 0.5 * math.hypot(a, near))))
    e = np.array(edges)
    full = np.concatenate((-e[:0:-1], e))
    t, w = _gl_unit(n)
    half = 0.5 * np.diff(full)
    mid = 0.5 * (full[1:] + full[:-1])
    return (mid[:, None] + half[:, None] * t).ravel(), (half[:, None] * w).ravel()


def _square_integral(fn, L: float, width: float, near_y: float, near_z: float, chunk: int = 512) -> complex:
    """``int_{-L}^{L} int_{-L}^{L} fn(y, z)`` on a graded Gauss-Legendre tensor grid."""
    ys, wy = graded_gl(L, near_y, width)
    zs, wz = graded_gl(L, near_z, width)
    total = 0.0 + 0.0j
    for start in range(0, len(ys), chunk):
        vals = fn(ys[start:start + chunk, None], zs[None, :])
        total += wy[start:start + chunk] @ vals @ wz
    return complex(total)


def _pole_distances(fp: FourierParams) -> tuple[float, float]:
    near_y = min(abs(fp.p1), abs(fp.q1), abs(fp.p2), abs(fp.q2),
                 abs(1 - fp.p1), abs(1 - fp.p2))
    near_z = min(abs(0.5 - fp.p1 - fp.q1), abs(0.5 - fp.p2 - fp.q2))
    return max(near_y, 1e-3), max(near_z, 1e-3)


def fourier_biortho_integral(k: int, r: int, fp: FourierParams, L: float = 30.0, width: float = 0.5) -> complex:
    def integrand(y, z):
        return (weight_rho(fp.p1, fp.q1, fp.p2, fp.q2, y, z)
                * Upsilon1(k, fp, 1j * y, 1j * z) * Upsilon2(r, fp, -1j * y, -1j * z))
    return _square_integral(integrand, L, width, *_pole_distances(fp))


def verify_fourier_biorthogonality(k: int, r: int, fp: FourierParams, L: float = 30.0,
                                   width: float = 0.5, tol: float | None = None) -> VerificationReport:
    bad = fp.regime_violations(min(k, r))
    if bad:
        raise DomainError("; ".join(bad))
    lhs = fourier_biortho_integral(k, r, fp, L, width)
    scale = None
    if k == r:
        rhs = fourier_norm(k, fp)
        tol = 1e-5 if tol is None else tol
    else:
        rhs = 0.0
        scale = abs(fourier_norm(min(k, r), fp))
        tol = 1e-6 if tol is None else tol
    return VerificationReport.compare(
        "fourier-biorth",
        f"fourier-biorth:p1={fp.p1!r};q1={fp.q1!r};p2={fp.p2!r};q2={fp.q2!r};u={fp.upsilon};k={k};r={r}",
        {"k": k, "r": r, "p1": fp.p1, "q1": fp.q1, "p2": fp.p2, "q2": fp.q2, "upsilon": fp.upsilon},
        lhs, rhs, tol, mode="gamma-weight", scale=scale, extra={"L": L, "width": width})


def check_fourier_closed(side: str, fp: FourierParams, xi1: float, xi2: float,
                         tol: float = 1e-6) -> VerificationReport:
    lhs = fourier_direct(side, fp, xi1, xi2)
    rhs = fourier_closed(side, fp, xi1, xi2)
    order = fp.k if side == "left" else fp.r
    pars = (fp.p1, fp.q1, fp.alpha, fp.beta) if side == "left" else (fp.p2, fp.q2, fp.gamma, fp.delta)
    cid = (f"fourier-closed:{side};p={pars[0]!r};q={pars[1]!r};a={pars[2]!r};b={pars[3]!r};"
           f"u={fp.upsilon};n={order};xi1={xi1!r};xi2={xi2!r}")
    rep = VerificationReport.compare(
        "fourier-closed", cid,
        {"side": side, "n": order, "p": pars[0], "q": pars[1], "a": pars[2], "b": pars[3],
         "upsilon": fp.upsilon, "xi1": xi1, "xi2": xi2},
        lhs, rhs, tol, mode="direct-2d")
    # relative criterion: the transform magnitude sets the scale
    passed = rep.abs_err <= tol * abs(rhs)
    return replace(rep, passed=passed, tol=tol)


# --- Parseval -------------------------------------------------------------------

def _strip_low(coeffs: np.ndarray) -> tuple[int, np.ndarray]:
    nz = np.flatnonzero(coeffs)
    if not nz.size:
        return 0, np.zeros(1)
    return int(nz[0]), coeffs[nz[0]:]


def parseval_lhs(fp: FourierParams, order: int = 120) -> float:
    """``int int u^{q1+q2-1} (1+u)^{-S} e^{-t} t^{-S} _K M_k _K Mcal_r du dt``, S = p1+q1+p2+q2.

    Each power of u is peeled off the polynomial before mapping, so the
    Gauss-Jacobi rule sees the true endpoint exponents.
    """
    S = fp.p1 + fp.q1 + fp.p2 + fp.q2
    qy = fp.q1 + fp.q2 - 1
    mk = bivariate_MK(fp.params_left)
    comp = companion_Mcal(fp.params_right)
    zrule = build_rule("laguerre", order, -S)
    terms = []
    for l in range(mk.coeffs.shape[0]):
        zpoly = mk.z_poly(l) * comp.tail
        zi = zrule.integrate(zpoly)
        if zi == 0:
            continue
        ycoef = np.concatenate((np.zeros(l), comp.base.coeffs))
        m0, rest = _strip_low(ycoef)
        qq = qy + m0
        deg = len(rest) - 1
        alpha_j = S - qq - 2 - deg
        if not (qq > -1 and alpha_j > -1):
            raise DomainError("u-integral of the Parseval left side diverges")
        rule = build_rule("jacobi", order, alpha_j, qq)
        t = 0.5 * (1 + rule.nodes)
        u = t / (1 - t)
        vals = UniPoly(rest)(u) * (1 - t) ** deg
        yi = float(np.dot(rule.weights, vals)) * 2.0 ** (-(alpha_j + qq + 1))
        terms.append(yi * zi)
    return math.fsum(terms)


def parseval_rhs(fp: FourierParams, L: float = 30.0, width: float = 0.5) -> complex:
    def integrand(x1, x2):
        return fourier_closed("left", fp, x1, x2) * np.conj(fourier_closed("right", fp, x1, x2))
    return _square_integral(integrand, L, width, *_pole_distances(fp)) / (4 * math.pi ** 2)


def parseval_consistency(k: int, r: int, fp: FourierParams, L: float = 30.0,
                         order: int = 120, tol: float = 1e-5) -> VerificationReport:
    fp = fp.with_orders(k, r)
    lhs = parseval_lhs(fp, order)
    rhs = parseval_rhs(fp, L)
    rep = VerificationReport.compare(
        "parseval",
        f"parseval:p1={fp.p1!r};q1={fp.q1!r};a={fp.alpha!r};b={fp.beta!r};p2={fp.p2!r};q2={fp.q2!r};"
        f"c={fp.gamma!r};d={fp.delta!r};u={fp.upsilon};k={k};r={r}",
        {"k": k, "r": r, "p1": fp.p1, "q1": fp.q1, "p2": fp.p2, "q2": fp.q2, "alpha": fp.alpha,
         "beta": fp.beta, "gamma": fp.gamma, "delta": fp.delta, "upsilon": fp.upsilon},
        lhs, rhs, tol, mode="two-sided")
    return replace(rep, passed=rep.abs_err <= tol * max(abs(lhs), abs(rhs)))


__all__ = [
    "FourierParams", "G", "G1", "G2", "Psi1", "Psi2", "fourier_closed", "fourier_direct",
    "truncation_box", "composite_gl", "Upsilon1", "Upsilon2", "weight_rho", "gamma_decay_bound",
    "fourier_norm", "fourier_biortho_integral", "verify_fourier_biorthogonality",
    "check_fourier_closed", "parseval_lhs", "parseval_rhs", "parseval_consistency",
]
