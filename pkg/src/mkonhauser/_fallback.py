"""Pure numpy versions of the hot kernels.

Mirrors ``_native.pyx`` exactly; selected by :mod:`mkonhauser.kernels` when
the compiled extension is unavailable or ``MKONHAUSER_PURE=1``.
"""
import numpy as np

LANCZOS_G = 7.0
LANCZOS_COEFFS = np.array([
    0.99999999999980993,
    676.5203681218851,
    -1259.1392167224028,
    771.32342877765313,
    -176.61502916214059,
    12.507343278686905,
    -0.13857109526572012,
    9.9843695780195716e-6,
    1.5056327351493116e-7,
])
HALF_LOG_2PI = 0.5 * np.log(2.0 * np.pi)
LOG_PI = np.log(np.pi)


def _lanczos_log(z):
    # valid for Re z >= 0.5
    z = z - 1.0
    x = np.full(z.shape, LANCZOS_COEFFS[0], dtype=complex)
    for i in range(1, len(LANCZOS_COEFFS)):
        x = x + LANCZOS_COEFFS[i] / (z + i)
    t = z + LANCZOS_G + 0.5
    return HALF_LOG_2PI + (z + 0.5) * np.log(t) - t + np.log(x)


def _log_sin_pi(z):
    # log sin(pi z) = -i pi z + log(1 - e^{2 i pi z}) - log(-2i), stable for Im z >= 0
    out = np.empty(z.shape, dtype=complex)
    upper = z.imag >= 0
    zu = np.where(upper, z, np.conj(z))
    val = -1j * np.pi * zu + np.log(1.0 - np.exp(2j * np.pi * zu)) - np.log(-2j)
    out[:] = np.where(upper, val, np.conj(val))
    return out


def clgamma(z):
    """log Gamma on a complex array (branch irrelevant after exp)."""
    z = np.asarray(z, dtype=complex)
    out = np.empty(z.shape, dtype=complex)
    right = z.real >= 0.5
    if right.any():
        out[right] = _lanczos_log(z[right])
    left = ~right
    if left.any():
        zl = z[left]
        out[left] = LOG_PI - _log_sin_pi(zl) - _lanczos_log(1.0 - zl)
    return out


def cgamma(z):
    z = np.asarray(z, dtype=complex)
    pole = (z.imag == 0) & (z.real <= 0) & (z.real == np.round(z.real))
    if pole.any():
        raise ValueError("gamma pole at nonpositive integer")
    return np.exp(clgamma(z))


def bipoly_grid(coeffs, upsilon, ys, zs):
    """Evaluate sum c[l,s] y^l z^(upsilon*s) on the outer grid ys x zs.

    Nested Horner: inner in w = z**upsilon over s, outer in y over l.
    """
    coeffs = np.asarray(coeffs, dtype=float)
    ys = np.asarray(ys, dtype=float)
    w = np.asarray(zs, dtype=float) ** upsilon
    nl, ns = coeffs.shape
    # rows[l] is the z-polynomial for power y^l, evaluated on w
    rows = np.zeros((nl, w.size))
    for l in range(nl):
        acc = np.zeros(w.size)
        for s in range(ns - 1, -1, -1):
            acc = acc * w + coeffs[l, s]
        rows[l] = acc
    out = np.zeros((ys.size, w.size))
    for l in range(nl - 1, -1, -1):
        out = out * ys[:, None] + rows[l][None, :]
    return out
