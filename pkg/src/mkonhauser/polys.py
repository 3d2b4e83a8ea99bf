"""Polynomial families: Konhauser Z/Y, finite M, Jacobi, the bivariate
M-Konhauser and Jacobi-Konhauser pairs, and the bivariate Mittag-Leffler
function.

Every bivariate polynomial is a :class:`StridedBiPoly`, a coefficient table
``c[l, s]`` multiplying ``x**l * z**(upsilon*s)`` with ``x = shift + scale*y``.
Companion polynomials stay factored as ``base(y) * tail(z)``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Iterator

import numpy as np

from . import kernels
from .scalar import (
    ONE,
    DomainError,
    PoleError,
    SignedLogValue,
    log_gamma_signed,
    pochhammer,
    pochhammer_signed,
    rgamma_signed,
)

K_MAX = 30


@dataclass(frozen=True)
class Params:
    """Parameter bundle ``(p, q, upsilon, k)`` of the M-Konhauser family."""

    p: float
    q: float
    upsilon: int = 1
    k: int = 0

    def __post_init__(self):
        if int(self.upsilon) != self.upsilon or self.upsilon < 1:
            raise DomainError("upsilon must be a positive integer")
        if int(self.k) != self.k or self.k < 0:
            raise DomainError("k must be a nonnegative integer")
        if self.k > K_MAX:
            raise DomainError(f"k <= {K_MAX} required")

    def with_k(self, k: int) -> "Params":
        return Params(self.p, self.q, self.upsilon, k)

    def violations(self, finite_orthogonal: bool = True) -> list[str]:
        """Human-readable list of violated constraints (empty when admissible)."""
        out = []
        if finite_orthogonal:
            if not self.q > -1:
                out.append("q > -1 required")
            if not self.p > 2 * self.k + 1:
                out.append("p > 2k+1 required")
        return out

    def is_finite_orthogonal(self) -> bool:
        return not self.violations(True)

    def validate(self, finite_orthogonal: bool = True) -> "Params":
        bad = self.violations(finite_orthogonal)
        if bad:
            raise DomainError("; ".join(bad))
        return self


@dataclass(frozen=True, eq=False)
class UniPoly:
    """``sum_j coeffs[j] * x**(stride*j)`` with ``x = shift + scale*t``."""

    coeffs: np.ndarray
    stride: int = 1
    shift: float = 0.0
    scale: float = 1.0

    def __post_init__(self):
        object.__setattr__(self, "coeffs", np.atleast_1d(np.asarray(self.coeffs, dtype=float)))

    @property
    def degree(self) -> int:
        nz = np.flatnonzero(self.coeffs)
        return int(self.stride * nz[-1]) if nz.size else 0

    def __call__(self, t):
        x = self.shift + self.scale * np.asarray(t, dtype=float)
        w = x ** self.stride
        acc = np.zeros_like(w)
        for c in self.coeffs[::-1]:
            acc = acc * w + c
        return acc if acc.ndim else float(acc)

    def dense(self) -> np.ndarray:
        """Ascending coefficients in x with stride 1."""
        out = np.zeros(self.stride * (len(self.coeffs) - 1) + 1)
        out[:: self.stride] = self.coeffs
        return out

    def _same_map(self, other: "UniPoly") -> None:
        if (self.shift, self.scale) != (other.shift, other.scale):
            raise ValueError("polynomials use different argument maps")

    def __mul__(self, other: "UniPoly") -> "UniPoly":
        self._same_map(other)
        return UniPoly(np.convolve(self.dense(), other.dense()), 1, self.shift, self.scale)

    def __add__(self, other: "UniPoly") -> "UniPoly":
        self._same_map(other)
        a, b = self.dense(), other.dense()
        n = max(len(a), len(b))
        out = np.zeros(n)
        out[: len(a)] += a
        out[: len(b)] += b
        return UniPoly(out, 1, self.shift, self.scale)


@dataclass(frozen=True, eq=False)
class StridedBiPoly:
    """``sum c[l, s] x**l z**(upsilon*s)`` with ``x = shift + scale*y``."""

    coeffs: np.ndarray
    upsilon: int
    k: int
    shift: float = 0.0
    scale: float = 1.0

    def __call__(self, y, z):
        x = self.shift + self.scale * np.asarray(y, dtype=float)
        w = np.asarray(z, dtype=float) ** self.upsilon
        x, w = np.broadcast_arrays(x, w)
        out = np.zeros(x.shape)
        for l in range(self.coeffs.shape[0] - 1, -1, -1):
            row = np.zeros(x.shape)
            for s in range(self.coeffs.shape[1] - 1, -1, -1):
                row = row * w + self.coeffs[l, s]
            out = out * x + row
        return out if out.ndim else float(out)

    def grid(self, ys, zs) -> np.ndarray:
        """Values on the outer product grid ``ys x zs`` (y-major)."""
        xs = self.shift + self.scale * np.asarray(ys, dtype=float)
        return kernels.bipoly_grid(self.coeffs, self.upsilon, xs, np.asarray(zs, dtype=float))

    def z_poly(self, l: int) -> UniPoly:
        """Coefficient of ``x**l`` as a polynomial in z (stride upsilon)."""
        return UniPoly(self.coeffs[l].copy(), self.upsilon)

    @property
    def degree_y(self) -> int:
        rows = np.flatnonzero(np.any(self.coeffs != 0, axis=1))
        return int(rows[-1]) if rows.size else 0

    @property
    def degree_z(self) -> int:
        cols = np.flatnonzero(np.any(self.coeffs != 0, axis=0))
        return int(self.upsilon * cols[-1]) if cols.size else 0


@dataclass(frozen=True, eq=False)
class CompanionPoly:
    """Factored companion ``base(y) * tail(z)``."""

    base: UniPoly
    tail: UniPoly

    def __call__(self, y, z):
        return self.base(y) * self.tail(z)


def _signed(*factors: SignedLogValue) -> float:
    out = ONE
    for f in factors:
        out = out * f
    return out.value


def _sign(n: int) -> SignedLogValue:
    return SignedLogValue(0.0, -1 if n % 2 else 1)


def _log_fact(n: int) -> SignedLogValue:
    return SignedLogValue(math.lgamma(n + 1), 1)


def konhauser_Z(k: int, c: float, upsilon: int) -> UniPoly:
    """Konhauser ``Z_k^{(c)}(x; upsilon)``, a polynomial in ``x**upsilon``."""
    lead = log_gamma_signed(upsilon * k + c + 1) / _log_fact(k)
    coeffs = [
        _signed(lead, _sign(j), SignedLogValue.from_float(math.comb(k, j)),
                rgamma_signed(upsilon * j + c + 1))
        for j in range(k + 1)
    ]
    return UniPoly(np.array(coeffs), upsilon)


def konhauser_Y(k: int, c: float, upsilon: int) -> UniPoly:
    """Konhauser ``Y_k^{(c)}(x; upsilon)``, degree k in x."""
    coeffs = []
    for i in range(k + 1):
        inner = math.fsum(
            (-1) ** j * math.comb(i, j) * pochhammer((1 + c + j) / upsilon, k)
            for j in range(i + 1)
        )
        coeffs.append(inner / (math.factorial(k) * math.factorial(i)))
    return UniPoly(np.array(coeffs), 1)


def konhauser_Y_sum(k: int, c: float, upsilon: int) -> UniPoly:
    """Partial sum ``sum_{j<=k} Y_j^{(c)}``."""
    out = konhauser_Y(0, c, upsilon)
    for j in range(1, k + 1):
        out = out + konhauser_Y(j, c, upsilon)
    return out


def laguerre(k: int, c: float) -> UniPoly:
    """Generalized Laguerre ``L_k^{(c)}`` from its explicit sum."""
    coeffs = [
        (-1) ** m * _signed(pochhammer_signed(c + m + 1, k - m)) / (math.factorial(k - m) * math.factorial(m))
        for m in range(k + 1)
    ]
    return UniPoly(np.array(coeffs), 1)


def finite_M(k: int, p: float, q: float) -> UniPoly:
    """Finite orthogonal polynomial ``M_k^{(p,q)}(y)``.

    Uses ``(-y)**m`` in the sum, the form consistent with
    ``M_k^{(p,q)}(y) = (-1)^k k! P_k^{(q,-p-q)}(2y+1)``.
    """
    lead = _sign(k) * log_gamma_signed(k + q + 1)
    coeffs = [
        _signed(lead, pochhammer_signed(-k, m), pochhammer_signed(k + 1 - p, m), _sign(m),
                _log_fact(m).inverse(), rgamma_signed(m + q + 1))
        for m in range(k + 1)
    ]
    return UniPoly(np.array(coeffs), 1)


def bivariate_JK(k: int, p: float, q: float, upsilon: int) -> StridedBiPoly:
    """Bivariate Jacobi-Konhauser ``_K P_{k;upsilon}^{(p,q)}(y, z)``.

    Stored in powers of ``x = (1 - y)/2``.
    """
    lead = log_gamma_signed(k + p + 1) / _log_fact(k)
    c = np.zeros((k + 1, k + 1))
    for l in range(k + 1):
        for s in range(k + 1 - l):
            c[l, s] = _signed(
                lead, pochhammer_signed(-k, l + s), pochhammer_signed(k + p + q + 1, l),
                rgamma_signed(l + p + 1), rgamma_signed(upsilon * s + q + 1),
                _log_fact(l).inverse(), _log_fact(s).inverse())
    return StridedBiPoly(c, upsilon, k, shift=0.5, scale=-0.5)


def jacobi_P(k: int, p: float, q: float) -> UniPoly:
    """Classical Jacobi ``P_k^{(p,q)}(y)``: the ``_K P`` table at z=0 times Gamma(q+1)."""
    jk = bivariate_JK(k, p, q, 1)
    gq = log_gamma_signed(q + 1).value
    return UniPoly(jk.coeffs[:, 0] * gq, 1, shift=0.5, scale=-0.5)


def bivariate_MK(params: Params) -> StridedBiPoly:
    """Finite bivariate M-Konhauser ``_K M_{k;upsilon}^{(p,q)}(y, z)``."""
    k, p, q, u = params.k, params.p, params.q, params.upsilon
    lead = _sign(k) * log_gamma_signed(k + q + 1)
    c = np.zeros((k + 1, k + 1))
    for l in range(k + 1):
        for s in range(k + 1 - l):
            c[l, s] = _signed(
                lead, pochhammer_signed(-k, l + s), pochhammer_signed(k + 1 - p, l), _sign(l),
                rgamma_signed(l + q + 1), rgamma_signed(u * s - p - q + 1),
                _log_fact(l).inverse(), _log_fact(s).inverse())
    return StridedBiPoly(c, u, k)


def companion_Mcal(params: Params) -> CompanionPoly:
    """Companion ``M_k^{(p,q)}(y) * sum_{j<=k} Y_j^{(-p-q)}(z; upsilon)``."""
    k, p, q, u = params.k, params.p, params.q, params.upsilon
    return CompanionPoly(finite_M(k, p, q), konhauser_Y_sum(k, -p - q, u))


def companion_JK_Q(k: int, p: float, q: float, upsilon: int) -> CompanionPoly:
    """Companion ``P_k^{(p,q)}(y) * sum_{j<=k} Y_j^{(q)}(z; upsilon)``."""
    return CompanionPoly(jacobi_P(k, p, q), konhauser_Y_sum(k, q, upsilon))


def mk_via_konhauser_Z(params: Params, y: float, z: float) -> float:
    """``_K M`` assembled from ``Z_{k-l}^{(-p-q)}`` (single sum over l)."""
    k, p, q, u = params.k, params.p, params.q, params.upsilon
    lead = _sign(k) * _log_fact(k) * log_gamma_signed(k + q + 1)
    terms = []
    for l in range(k + 1):
        coef = _signed(lead, _sign(l), pochhammer_signed(k + 1 - p, l), _log_fact(l).inverse(),
                       rgamma_signed(l + q + 1), rgamma_signed(u * (k - l) - p - q + 1))
        if coef:
            terms.append(coef * (-y) ** l * konhauser_Z(k - l, -p - q, u)(z))
    return math.fsum(terms)


# --- bivariate Mittag-Leffler -------------------------------------------------

@dataclass
class _LogPochTable:
    """Growing table of signed-log Pochhammer values ``(a)_n``."""

    a: float
    logs: list = field(default_factory=lambda: [0.0])
    signs: list = field(default_factory=lambda: [1])

    def __getitem__(self, n: int) -> SignedLogValue:
        while len(self.logs) <= n:
            m = len(self.logs) - 1
            f = self.a + m
            if f == 0 or self.signs[-1] == 0:
                self.logs.append(-math.inf)
                self.signs.append(0)
            else:
                self.logs.append(self.logs[-1] + math.log(abs(f)))
                self.signs.append(self.signs[-1] * (-1 if f < 0 else 1))
        return SignedLogValue(self.logs[n], self.signs[n])


class NonConvergenceError(RuntimeError):
    """A truncated series hit its term cap without meeting the tail criterion."""


def diagonal_sweep(term, *, rel_tol: float = 1e-16, quiet_diagonals: int = 5,
                   max_diagonals: int = 10_000, terminating_order: int | None = None) -> tuple[float, int]:
    """Sum ``term(l, m)`` over diagonals ``l + m = n``.

    Stops after ``quiet_diagonals`` consecutive diagonals whose absolute sum
    is below ``rel_tol * |partial|``; when ``terminating_order`` is given the
    sum is taken exactly over ``l + m <= terminating_order``.
    Returns ``(value, diagonals_used)``.
    """
    parts: list[float] = []
    quiet = 0
    last_abs = math.inf
    limit = max_diagonals if terminating_order is None else terminating_order + 1
    for n in range(limit):
        diag = [term(l, n - l) for l in range(n + 1)]
        parts.extend(diag)
        if terminating_order is not None:
            continue
        dabs = math.fsum(abs(t) for t in diag)
        partial = math.fsum(parts)
        if dabs <= rel_tol * abs(partial) or (dabs == 0 and partial == 0):
            quiet += 1
            if quiet >= quiet_diagonals:
                return partial, n + 1
        else:
            quiet = 0
        last_abs = dabs
    if terminating_order is not None:
        return math.fsum(parts), limit
    raise NonConvergenceError(f"double series not converged after {limit} diagonals "
                              f"(last diagonal magnitude {last_abs:.3e})")


def mittag_leffler_E(gamma1: float, gamma2: float, p: float, q: float, upsilon: int,
                     y: float, z: float, tol: float = 1e-16) -> float:
    """Bivariate Jacobi-Konhauser Mittag-Leffler ``E_{p,q,upsilon}^{(gamma1;gamma2)}(y, z)``.

    Exact finite sum when ``gamma1`` is a nonpositive integer.
    """
    g1, g2 = _LogPochTable(gamma1), _LogPochTable(gamma2)
    w = z ** upsilon

    def term(l: int, m: int) -> float:
        mag = _signed(g1[l + m], g2[l], rgamma_signed(p + l), rgamma_signed(q + upsilon * m),
                      _log_fact(l).inverse(), _log_fact(m).inverse())
        return mag * y ** l * w ** m if mag else 0.0

    terminating = None
    if gamma1 <= 0 and float(gamma1).is_integer():
        terminating = int(-gamma1)
    value, _ = diagonal_sweep(term, rel_tol=tol, terminating_order=terminating)
    return value


def iter_triangle(k: int) -> Iterator[tuple[int, int]]:
    for l in range(k + 1):
        for s in range(k + 1 - l):
            yield l, s


__all__ = [
    "K_MAX", "Params", "UniPoly", "StridedBiPoly", "CompanionPoly", "PoleError",
    "konhauser_Z", "konhauser_Y", "konhauser_Y_sum", "laguerre", "finite_M",
    "jacobi_P", "bivariate_MK", "bivariate_JK", "companion_Mcal", "companion_JK_Q",
    "mk_via_konhauser_Z", "mittag_leffler_E", "diagonal_sweep", "NonConvergenceError",
    "iter_triangle",
]
