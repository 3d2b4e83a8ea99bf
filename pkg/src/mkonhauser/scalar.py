"""Scalar special-function substrate.

Real and complex Gamma, Pochhammer symbols, terminating hypergeometric sums
and compensated summation. Complex scalars are plain Python ``complex``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from . import kernels


class PoleError(ValueError):
    """A Gamma function (or Pochhammer denominator) hit a pole."""


class DomainError(ValueError):
    """Arguments outside the domain of a definition."""


def _is_nonpositive_integer(x: float) -> bool:
    return x <= 0 and float(x).is_integer()


@dataclass(frozen=True)
class SignedLogValue:
    """A real number stored as ``sign * exp(log_abs)``."""

    log_abs: float
    sign: int

    @classmethod
    def from_float(cls, x: float) -> "SignedLogValue":
        if x == 0:
            return cls(-math.inf, 0)
        return cls(math.log(abs(x)), 1 if x > 0 else -1)

    @property
    def value(self) -> float:
        if self.sign == 0:
            return 0.0
        return self.sign * math.exp(self.log_abs)

    def __mul__(self, other: "SignedLogValue") -> "SignedLogValue":
        if self.sign == 0 or other.sign == 0:
            return ZERO
        return SignedLogValue(self.log_abs + other.log_abs, self.sign * other.sign)

    def __truediv__(self, other: "SignedLogValue") -> "SignedLogValue":
        if other.sign == 0:
            raise ZeroDivisionError("division by a zero SignedLogValue")
        if self.sign == 0:
            return ZERO
        return SignedLogValue(self.log_abs - other.log_abs, self.sign * other.sign)

    def inverse(self) -> "SignedLogValue":
        return ONE / self


ZERO = SignedLogValue(-math.inf, 0)
ONE = SignedLogValue(0.0, 1)


def gamma_real(x: float) -> float:
    if _is_nonpositive_integer(x):
        raise PoleError(f"Gamma has a pole at {x!r}")
    try:
        return math.gamma(x)
    except OverflowError:
        return log_gamma_signed(x).value


def log_gamma_signed(x: float) -> SignedLogValue:
    """``Gamma(x)`` as a :class:`SignedLogValue` (sign tracked for x < 0)."""
    if _is_nonpositive_integer(x):
        raise PoleError(f"Gamma has a pole at {x!r}")
    if x > 0:
        return SignedLogValue(math.lgamma(x), 1)
    # Gamma alternates sign between consecutive negative integers
    sign = 1 if math.floor(x) % 2 == 0 else -1
    return SignedLogValue(math.lgamma(x), sign)


def rgamma_signed(x: float) -> SignedLogValue:
    """Reciprocal Gamma as a signed log; exactly zero at the poles."""
    if _is_nonpositive_integer(x):
        return ZERO
    return log_gamma_signed(x).inverse()


def rgamma(x: float) -> float:
    """Entire reciprocal Gamma, ``1/Gamma(x)``, zero at nonpositive integers."""
    return rgamma_signed(x).value


def gamma_complex(z: complex) -> complex:
    z = complex(z)
    if z.imag == 0 and _is_nonpositive_integer(z.real):
        raise PoleError(f"Gamma has a pole at {z!r}")
    return complex(kernels.cgamma(np.array([z]))[0])


def beta_complex(a: complex, b: complex) -> complex:
    """Euler Beta ``Gamma(a)Gamma(b)/Gamma(a+b)`` for Re a, Re b > 0."""
    a, b = complex(a), complex(b)
    if a.real <= 0 or b.real <= 0:
        raise DomainError("beta_complex requires Re(a) > 0 and Re(b) > 0")
    lg = kernels.clgamma(np.array([a, b, a + b]))
    return complex(np.exp(lg[0] + lg[1] - lg[2]))


def pochhammer(x: float, n: int) -> float:
    """Rising factorial by iterated product (exact zero at terminating factors)."""
    if n < 0:
        raise DomainError("pochhammer needs n >= 0")
    out = 1.0
    for i in range(n):
        out *= x + i
    return out


def pochhammer_complex(x: complex, n: int) -> complex:
    if n < 0:
        raise DomainError("pochhammer needs n >= 0")
    out = 1.0 + 0.0j
    for i in range(n):
        out *= x + i
    return out


def pochhammer_signed(x: float, n: int) -> SignedLogValue:
    if n < 0:
        raise DomainError("pochhammer needs n >= 0")
    log_abs, sign = 0.0, 1
    for i in range(n):
        f = x + i
        if f == 0:
            return ZERO
        log_abs += math.log(abs(f))
        if f < 0:
            sign = -sign
    return SignedLogValue(log_abs, sign)


def compensated_sum(terms: Iterable[float]) -> float:
    return math.fsum(terms)


def compensated_sum_complex(terms: Iterable[complex]) -> complex:
    terms = [complex(t) for t in terms]
    return complex(math.fsum(t.real for t in terms), math.fsum(t.imag for t in terms))


def hyp2f1_terminating(k: int, b: float, c: float, x: float) -> float:
    """``2F1(-k, b; c; x)`` as its finite sum of ``k+1`` terms."""
    terms = []
    term = 1.0
    for m in range(k + 1):
        if m > 0:
            denom = (c + m - 1) * m
            if denom == 0:
                raise PoleError(f"2F1 denominator (c)_m vanishes at m={m}")
            term *= (-k + m - 1) * (b + m - 1) * x / denom
        terms.append(term)
    return compensated_sum(terms)


def hyp2f0_coeffs(k: int, a: float) -> list[float]:
    """Coefficients of x^m, m=0..k, in the terminating ``2F0(-k, a; -; x)``."""
    out = []
    coef = 1.0
    for m in range(k + 1):
        if m > 0:
            coef *= (-k + m - 1) * (a + m - 1) / m
        out.append(coef)
    return out


def bessel_poly_coeffs(k: int, a: float, b: float) -> list[float]:
    """Coefficients of z^m in ``Y_k(z; a, b) = 2F0(-k, k+a-1; -; -z/b)``."""
    if b == 0:
        raise DomainError("Bessel polynomial needs b != 0")
    base = hyp2f0_coeffs(k, k + a - 1)
    return [c * (-1.0 / b) ** m for m, c in enumerate(base)]


def bessel_poly(k: int, a: float, b: float, z: float) -> float:
    coeffs = bessel_poly_coeffs(k, a, b)
    return compensated_sum(c * z ** m for m, c in enumerate(coeffs))


def delta_params(upsilon: int, sigma: float) -> np.ndarray:
    """The ``upsilon`` parameters sigma/u, (sigma+1)/u, ..., (sigma+u-1)/u."""
    if upsilon < 1:
        raise DomainError("upsilon must be a positive integer")
    return (sigma + np.arange(upsilon)) / upsilon


def gauss_multiplication_sides(c: float, upsilon: int, r: int) -> tuple[float, float]:
    """Both sides of (1+c)_{u r} = u^{u r} prod_j ((c+1+j)/u)_r."""
    lhs = pochhammer(1 + c, upsilon * r)
    rhs = float(upsilon) ** (upsilon * r)
    for d in delta_params(upsilon, c + 1):
        rhs *= pochhammer(float(d), r)
    return lhs, rhs


def signed_product(factors: Sequence[SignedLogValue]) -> float:
    out = ONE
    for f in factors:
        out = out * f
    return out.value
