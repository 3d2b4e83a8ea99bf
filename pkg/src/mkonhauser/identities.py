"""Structural identities of the M-Konhauser family.

Each identity is reduced to a pointwise value comparison or to exact
coefficient arithmetic on polynomials.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from itertools import combinations
from typing import Sequence

import numpy as np

from .polys import (
    K_MAX,
    Params,
    UniPoly,
    _LogPochTable,
    bivariate_JK,
    bivariate_MK,
    diagonal_sweep,
    finite_M,
    konhauser_Y_sum,
    mittag_leffler_E,
)
from .report import VerificationReport
from .scalar import (
    PoleError,
    bessel_poly_coeffs,
    delta_params,
    gamma_real,
    hyp2f0_coeffs,
    pochhammer,
    rgamma,
)


# --- double hypergeometric series ---------------------------------------------

@dataclass(frozen=True)
class SDSeriesSpec:
    """Double series ``sum_{l,m} prod(a)_{th*l+ph*m} / (prod(b)_{th*l} prod(d)_{ph*m}) X^l T^m / (l! m!)``.

    ``numer`` holds ``(a, theta, phi)``; ``denom_l`` and ``denom_m`` hold
    ``(b, theta)`` acting on their own index only.
    """

    numer: tuple = ()
    denom_l: tuple = ()
    denom_m: tuple = ()
    X: float = 0.0
    T: float = 0.0

    def __post_init__(self):
        for entry in self.numer:
            if len(entry) != 3 or entry[1] < 0 or entry[2] < 0:
                raise ValueError(f"numerator entry {entry!r} must be (a, theta>=0, phi>=0)")
        for entry in (*self.denom_l, *self.denom_m):
            if len(entry) != 2 or entry[1] < 0:
                raise ValueError(f"denominator entry {entry!r} must be (b, theta>=0)")

    def terminating_order(self) -> int | None:
        """Total order past which every term vanishes, if a numerator forces it."""
        for a, th, ph in self.numer:
            if a <= 0 and float(a).is_integer() and th >= 1 and ph >= 1:
                return int(-a) // min(th, ph)
        return None


def sd_series_eval(spec: SDSeriesSpec, tol: float = 1e-16) -> float:
    numer = [(_LogPochTable(a), th, ph) for a, th, ph in spec.numer]
    den_l = [(_LogPochTable(b), th) for b, th in spec.denom_l]
    den_m = [(_LogPochTable(b), th) for b, th in spec.denom_m]

    def term(l: int, m: int) -> float:
        val = 1.0
        for tab, th, ph in numer:
            v = tab[th * l + ph * m]
            if v.sign == 0:
                return 0.0
            val *= v.value
        for tab, th in den_l:
            v = tab[th * l]
            if v.sign == 0:
                raise PoleError(f"denominator ({tab.a})_{th * l} vanishes")
            val /= v.value
        for tab, th in den_m:
            v = tab[th * m]
            if v.sign == 0:
                raise PoleError(f"denominator ({tab.a})_{th * m} vanishes")
            val /= v.value
        if val == 0.0:
            return 0.0
        return val * spec.X ** l * spec.T ** m / (math.factorial(l) * math.factorial(m))

    value, _ = diagonal_sweep(term, rel_tol=tol, terminating_order=spec.terminating_order())
    return value


# --- alternative evaluation paths ---------------------------------------------

def kdf_terminating(k: int, p: float, q: float, upsilon: int, y: float, z: float) -> float:
    """Kampé de Fériet form of ``_K M`` with the Delta-parameter product."""
    deltas = delta_params(upsilon, 1 - p - q)
    w = (z / upsilon) ** upsilon
    terms = []
    for l in range(k + 1):
        for m in range(k + 1 - l):
            den = pochhammer(q + 1, l) * math.factorial(l) * math.factorial(m)
            for d in deltas:
                den *= pochhammer(float(d), m)
            if den == 0:
                raise PoleError("vanishing Pochhammer denominator in Kampe de Feriet series")
            num = pochhammer(-k, l + m) * pochhammer(k - p + 1, l)
            terms.append(num * (-y) ** l * w ** m / den)
    return (-1) ** k * pochhammer(q + 1, k) * rgamma(1 - p - q) * math.fsum(terms)


def _iterated_integral(coef: float, expo: float, times: int) -> tuple[float, float]:
    """``D^{-times} x^expo`` as (coef, expo), each step dividing by the new exponent."""
    for _ in range(times):
        expo += 1
        if expo == 0:
            raise PoleError("antiderivative of x^-1 in operator calculus")
        coef /= expo
    return coef, expo


def operational_rep_eval(params: Params, y: float, z: float, form: str = "2f0") -> float:
    """Operator-calculus evaluation on the seed ``y^q z^{-p-q} / (Gamma(q+1) Gamma(1-p-q))``.

    ``form`` picks the coefficients of the operator series: ``2f0`` from the
    terminating 2F0 or ``bessel`` from the Bessel polynomial ``Y_k(x; 2-p, 1)``.
    """
    k, p, q, u = params.k, params.p, params.q, params.upsilon
    if form == "2f0":
        # 2F0(-k, k+1-p; -; -x)
        lcoef = [c * (-1) ** l for l, c in enumerate(hyp2f0_coeffs(k, k + 1 - p))]
    elif form == "bessel":
        lcoef = bessel_poly_coeffs(k, 2 - p, 1.0)
    else:
        raise ValueError(f"unknown form {form!r}")
    seed = 1.0 / gamma_real(q + 1) * rgamma(1 - p - q)
    terms = []
    for l, cl in enumerate(lcoef):
        if cl == 0:
            continue
        cy, ey = _iterated_integral(cl * seed, q, l)
        n = k - l
        for s in range(n + 1):
            cz, ez = _iterated_integral(math.comb(n, s) * (-1) ** s, -p - q, u * s)
            terms.append(cy * cz * y ** ey * z ** ez)
    pre = (-1) ** k * gamma_real(k + q + 1) * y ** (-q) * z ** (p + q)
    return pre * math.fsum(terms)


def mk_via_jk_transition(params: Params, y, z):
    """``(-1)^k k! _K P^{(q, -p-q)}(2y+1, z)``."""
    k = params.k
    jk = bivariate_JK(k, params.q, -params.p - params.q, params.upsilon)
    return (-1) ** k * math.factorial(k) * jk(2 * np.asarray(y, dtype=float) + 1, z)


def _rel(a: float, b: float) -> float:
    return abs(a - b) / max(abs(a), abs(b), 1e-300)


def four_way_agreement(params: Params, ys: Sequence[float], zs: Sequence[float],
                       tol: float = 1e-10) -> VerificationReport:
    """Direct, Kampé de Fériet, operational and Jacobi-transition values on a grid."""
    mk = bivariate_MK(params)
    worst = 0.0
    worst_pair = ""
    worst_point = None
    for y in ys:
        for z in zs:
            vals = {
                "direct": float(mk(y, z)),
                "kdf": kdf_terminating(params.k, params.p, params.q, params.upsilon, y, z),
                "operational": operational_rep_eval(params, y, z),
                "jk-transition": float(mk_via_jk_transition(params, y, z)),
            }
            for a, b in combinations(sorted(vals), 2):
                r = _rel(vals[a], vals[b])
                if r > worst or worst_point is None:
                    worst, worst_pair, worst_point = r, f"{a}/{b}", (y, z, vals[a], vals[b])
    y, z, lhs, rhs = worst_point
    rep = VerificationReport.compare(
        "four-way", f"four-way:p={params.p!r};q={params.q!r};u={params.upsilon};k={params.k}",
        {"k": params.k, "p": params.p, "q": params.q, "upsilon": params.upsilon},
        lhs, rhs, tol, mode="pointwise", notes=f"worst pair {worst_pair} at y={y!r}, z={z!r}",
        extra={"max_rel_err": worst, "points": len(ys) * len(zs)})
    return VerificationReport(rep.suite, rep.case_id, rep.params, rep.lhs, rep.rhs, rep.abs_err,
                              worst, tol, rep.mode, worst <= tol, rep.notes, rep.extra)


# --- Mittag-Leffler relation --------------------------------------------------

def check_ML_relation(params: Params, y: float, z: float, tol: float = 1e-11) -> VerificationReport:
    k, p, q, u = params.k, params.p, params.q, params.upsilon
    lhs = float(bivariate_MK(params)(y, z))
    rhs = (-1) ** k * gamma_real(k + q + 1) * mittag_leffler_E(-k, k + 1 - p, q + 1, 1 - p - q, u, -y, z)
    return VerificationReport.compare(
        "ml-relation", f"ml-relation:p={p!r};q={q!r};u={u};k={k};y={y!r};z={z!r}",
        {"k": k, "p": p, "q": q, "upsilon": u, "y": y, "z": z}, lhs, rhs, tol, mode="pointwise")


# --- generating function ------------------------------------------------------

def generating_function_terms(params: Params, y: float, z: float, w: float, N: int) -> list[float]:
    """Terms ``k = 0..N`` of the generating-function lhs."""
    p, q = params.p, params.q
    terms = []
    for k in range(N + 1):
        c = (-1) ** k * pochhammer(1 - p, k) / (pochhammer(q + 1, k) * math.factorial(k))
        terms.append(c * float(bivariate_MK(params.with_k(k))(y, z)) * w ** k if c else 0.0)
    return terms


def generating_function_lhs(params: Params, y: float, z: float, w: float, N: int) -> float:
    return math.fsum(generating_function_terms(params, y, z, w, N))


def generating_function_rhs(params: Params, y: float, z: float, w: float, tol: float = 1e-16) -> float:
    p, q, u = params.p, params.q, params.upsilon
    spec = SDSeriesSpec(
        numer=((1 - p, 2, 1),),
        denom_l=((q + 1, 1),),
        denom_m=((1 - p - q, u),),
        X=w * y / (w - 1) ** 2,
        T=w * z ** u / (w - 1),
    )
    return (1 - w) ** (p - 1) * rgamma(1 - p - q) * sd_series_eval(spec, tol)


def check_generating_function(params: Params, y: float, z: float, w: float, N: int = 25,
                              tol: float = 1e-8, tail_orders: Sequence[int] = (8, 15, 25)) -> VerificationReport:
    if abs(w) >= 1:
        raise ValueError("|w| < 1 required")
    if max(N, *tail_orders) >= K_MAX:
        raise ValueError(f"partial sums beyond N = {K_MAX - 1} are not supported")
    rhs = generating_function_rhs(params, y, z, w)
    terms = generating_function_terms(params, y, z, w, K_MAX)
    lhs = math.fsum(terms[: N + 1])
    # tail summed directly from the omitted terms, free of the lhs-rhs rounding floor
    tails = {f"tail_N{n}": abs(math.fsum(terms[n + 1:])) for n in tail_orders}
    return VerificationReport.compare(
        "genfun", f"genfun:p={params.p!r};q={params.q!r};u={params.upsilon};y={y!r};z={z!r};w={w!r};N={N}",
        {"p": params.p, "q": params.q, "upsilon": params.upsilon, "y": y, "z": z, "w": w, "N": N},
        lhs, rhs, tol, mode="partial-sum", extra=tails)


# --- differential operators ---------------------------------------------------

def _deriv(c: np.ndarray) -> np.ndarray:
    if len(c) == 1:
        return np.zeros(1)
    return c[1:] * np.arange(1, len(c))


def _mulz(c: np.ndarray) -> np.ndarray:
    return np.concatenate(([0.0], c))


def _add(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    out = np.zeros(max(len(a), len(b)))
    out[: len(a)] += a
    out[: len(b)] += b
    return out


@dataclass(frozen=True)
class DiffOp:
    """Linear combination of words in the primitives ``D`` (d/dz) and ``Z`` (times z).

    A word is applied right to left, like operator composition.
    """

    terms: tuple = field(default_factory=tuple)  # ((scalar, word), ...)

    @staticmethod
    def identity() -> "DiffOp":
        return DiffOp(((1.0, ""),))

    @staticmethod
    def D() -> "DiffOp":
        return DiffOp(((1.0, "D"),))

    @staticmethod
    def Z() -> "DiffOp":
        return DiffOp(((1.0, "Z"),))

    @staticmethod
    def shift(n: int) -> "DiffOp":
        """``(D - 1)**n`` expanded binomially."""
        return DiffOp(tuple((math.comb(n, j) * (-1.0) ** (n - j), "D" * j) for j in range(n + 1)))

    def __add__(self, other: "DiffOp") -> "DiffOp":
        return DiffOp(self.terms + other.terms)

    def __neg__(self) -> "DiffOp":
        return DiffOp(tuple((-c, w) for c, w in self.terms))

    def __sub__(self, other: "DiffOp") -> "DiffOp":
        return self + (-other)

    def __rmul__(self, scalar: float) -> "DiffOp":
        return DiffOp(tuple((scalar * c, w) for c, w in self.terms))

    def __matmul__(self, other: "DiffOp") -> "DiffOp":
        return DiffOp(tuple((a * b, wa + wb) for a, wa in self.terms for b, wb in other.terms))


def apply_diffop(op: DiffOp, poly: UniPoly) -> UniPoly:
    if (poly.shift, poly.scale) != (0.0, 1.0):
        raise ValueError("apply_diffop needs an unmapped polynomial")
    base = poly.dense()
    out = np.zeros(1)
    for scalar, word in op.terms:
        c = base
        for prim in reversed(word):
            c = _deriv(c) if prim == "D" else _mulz(c)
        out = _add(out, scalar * c)
    return UniPoly(out, 1)


def pde_operator(upsilon: int) -> DiffOp:
    """``(D-1)^u (zD - z - u) - z (D-1)^{u+1}``."""
    D, Z, I = DiffOp.D(), DiffOp.Z(), DiffOp.identity()
    inner = Z @ D - Z - float(upsilon) * I
    return DiffOp.shift(upsilon) @ inner - Z @ DiffOp.shift(upsilon + 1)


def konhauser_operator_sides(upsilon: int) -> tuple[DiffOp, DiffOp]:
    """Both sides of ``(D-1)^u z (D-1) Y = (z (D-1)^{u+1} + u (D-1)^u) Y``."""
    Z = DiffOp.Z()
    lhs = DiffOp.shift(upsilon) @ Z @ DiffOp.shift(1)
    rhs = Z @ DiffOp.shift(upsilon + 1) + float(upsilon) * DiffOp.shift(upsilon)
    return lhs, rhs


def check_pde(params: Params, tol: float = 1e-12) -> VerificationReport:
    k, p, q, u = params.k, params.p, params.q, params.upsilon
    tail = konhauser_Y_sum(k, -p - q, u)
    res = apply_diffop(pde_operator(u), tail)
    scale = float(np.max(np.abs(tail.coeffs)))
    resid = float(np.max(np.abs(res.coeffs)))
    return VerificationReport.compare(
        "pde", f"pde:p={p!r};q={q!r};u={u};k={k}",
        {"k": k, "p": p, "q": q, "upsilon": u}, resid, 0.0, tol, mode="coefficient",
        scale=scale, extra={"residual_coeffs": len(res.coeffs)})


def univariate_genfun_lhs(p: float, q: float, y: float, w: float, N: int) -> float:
    """``z = 0, upsilon = 1`` reduction of the generating-function lhs built from ``M_k``."""
    terms = []
    for k in range(N + 1):
        c = (-1) ** k * pochhammer(1 - p, k) / (pochhammer(q + 1, k) * math.factorial(k))
        if c:
            terms.append(c * finite_M(k, p, q)(y) * rgamma(1 - p - q) * w ** k)
    return math.fsum(terms)


__all__ = [
    "SDSeriesSpec", "sd_series_eval", "kdf_terminating", "operational_rep_eval",
    "mk_via_jk_transition", "four_way_agreement", "check_ML_relation",
    "generating_function_lhs", "generating_function_rhs", "check_generating_function",
    "DiffOp", "apply_diffop", "pde_operator", "konhauser_operator_sides", "check_pde",
    "univariate_genfun_lhs",
]
