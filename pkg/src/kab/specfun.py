"""Self-contained special functions: complex digamma, the dispersion
functions kappa(k) and g(k), the shifted kinetic function G and its inverse,
conical Legendre functions, Bessel J0 and the beta-type phase integral.

Everything here is a pure function of its arguments; no state is shared.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from scipy import integrate
from scipy.optimize import brentq

__all__ = [
    "CONSTANTS",
    "Constants",
    "digamma",
    "lipatov_kappa",
    "g_dispersion",
    "big_g",
    "big_g_inverse",
    "conical_legendre",
    "hyp2f1_conical",
    "bessel_j0",
    "phase_integral",
]


@dataclass(frozen=True)
class Constants:
    euler_gamma: float = 0.5772156649015329
    zeta3: float = 1.2020569031595943
    zeta5: float = 1.0369277551433699
    log2: float = 0.6931471805599453


CONSTANTS = Constants()

# Bernoulli numbers B_2 .. B_14 for the Stirling tail of psi.
_BERNOULLI = (
    1.0 / 6.0,
    -1.0 / 30.0,
    1.0 / 42.0,
    -1.0 / 30.0,
    5.0 / 66.0,
    -691.0 / 2730.0,
    7.0 / 6.0,
)

_SHIFT_RE = 10.0


@lru_cache(maxsize=16)
def _gauss_nodes(n: int) -> tuple[np.ndarray, np.ndarray]:
    return np.polynomial.legendre.leggauss(n)


def _check_finite(*vals: float) -> None:
    for v in vals:
        if not math.isfinite(v):
            raise ValueError(f"non-finite argument: {v!r}")


def digamma(z: complex | np.ndarray) -> complex | np.ndarray:
    """psi(z) = d log Gamma / dz for complex z, accurate to >= 12 digits.

    Recurrence-shifts to Re z >= 10 and applies the asymptotic series with
    Bernoulli coefficients through B_14.  Raises on non-positive integers
    (poles) and on NaN input.
    """
    scalar = np.isscalar(z)
    zz = np.atleast_1d(np.asarray(z, dtype=complex)).copy()
    if np.any(np.isnan(zz)):
        raise ValueError("digamma: NaN argument")
    pole = (zz.imag == 0) & (zz.real <= 0) & (zz.real == np.round(zz.real))
    if np.any(pole):
        raise ValueError("digamma: argument is a non-positive integer (pole)")
    acc = np.zeros_like(zz)
    while True:
        m = zz.real < _SHIFT_RE
        if not np.any(m):
            break
        acc[m] -= 1.0 / zz[m]
        zz[m] += 1.0
    res = np.log(zz) - 0.5 / zz
    inv2 = 1.0 / (zz * zz)
    t = inv2.copy()
    for i, b in enumerate(_BERNOULLI, start=1):
        res -= b / (2 * i) * t
        t *= inv2
    res += acc
    return complex(res[0]) if scalar else res


def lipatov_kappa(k: float | np.ndarray) -> float | np.ndarray:
    """Dispersion kappa(k) = psi(1/2 + ik) + psi(1/2 - ik) - 2 psi(1).

    Real and even in k; kappa(0) = -4 log 2.
    """
    scalar = np.isscalar(k)
    ka = np.atleast_1d(np.asarray(k, dtype=float))
    _check_finite(*ka.ravel())
    val = 2.0 * np.real(digamma(0.5 + 1j * ka)) + 2.0 * CONSTANTS.euler_gamma
    return float(val[0]) if scalar else val


def g_dispersion(k: float | np.ndarray) -> float | np.ndarray:
    """g(k) = psi((1+ik)/2) + psi((1-ik)/2) - 2 psi(1) + 2 log 2.

    Satisfies g(k) = kappa(k/2) + 2 log 2 and g(0) = -2 log 2.
    """
    scalar = np.isscalar(k)
    ka = np.atleast_1d(np.asarray(k, dtype=float))
    _check_finite(*ka.ravel())
    val = (
        2.0 * np.real(digamma(0.5 * (1.0 + 1j * ka)))
        + 2.0 * CONSTANTS.euler_gamma
        + 2.0 * CONSTANTS.log2
    )
    return float(val[0]) if scalar else val


def big_g(p: float | np.ndarray) -> float | np.ndarray:
    """Shifted kinetic function G(p) = g(p) + 2 psi(1) = 2 Re psi((1+ip)/2) + 2 log 2.

    Behaves like G(0) + (7/2) zeta(3) p^2 near zero and log p^2 at infinity.
    """
    scalar = np.isscalar(p)
    pa = np.atleast_1d(np.asarray(p, dtype=float))
    _check_finite(*pa.ravel())
    val = 2.0 * np.real(digamma(0.5 * (1.0 + 1j * pa))) + 2.0 * CONSTANTS.log2
    return float(val[0]) if scalar else val


#: minimum of G, attained at p = 0: G(0) = -2 log 2 - 2 gamma_E
BIG_G_MIN = -2.0 * CONSTANTS.log2 - 2.0 * CONSTANTS.euler_gamma


def big_g_inverse(y: float) -> float:
    """Return p >= 0 with G(p) = y, to 1e-10.

    Root-finding is a safeguarded bracketing iteration on [0, exp(y/2) + 1];
    G is smooth, even, and strictly increasing for p >= 0.  Raises for
    y < G(0).
    """
    _check_finite(y)
    if y < BIG_G_MIN - 1e-12:
        raise ValueError(f"big_g_inverse: y={y} below the minimum G(0)={BIG_G_MIN}")
    if y <= BIG_G_MIN:
        return 0.0
    hi = math.exp(min(y, 60.0) / 2.0) + 1.0
    while big_g(hi) < y:
        hi *= 2.0
    return brentq(lambda p: big_g(p) - y, 0.0, hi, xtol=1e-13, rtol=8.9e-16)


def big_g_inverse_leading(y: float) -> float:
    """Leading large-argument approximation exp(y/2) of the inverse of G."""
    _check_finite(y)
    return math.exp(y / 2.0)


def conical_legendre(k: float, t: float) -> float:
    """Conical Legendre function P_{-1/2 + ik}(t) for t >= 1, real k.

    Uses the Laplace-type integral: the average over theta in [0, pi] of
    (t + sqrt(t^2-1) cos theta)^(-1/2+ik), evaluated with Gauss-Legendre
    rules whose size is doubled until two successive results agree.
    """
    _check_finite(k, t)
    if t < 1.0:
        raise ValueError(f"conical_legendre: t={t} < 1 outside the domain")
    if t == 1.0:
        return 1.0
    s = math.sqrt(t * t - 1.0)
    x, w = _gauss_nodes(100)
    prev = None
    panels = 2
    while panels <= 512:
        edges = np.linspace(0.0, math.pi, panels + 1)
        mid = 0.5 * (edges[1:] + edges[:-1])
        half = 0.5 * (edges[1] - edges[0])
        theta = (mid[:, None] + half * x[None, :]).ravel()
        wt = np.broadcast_to(half * w[None, :] / math.pi, (panels, x.size)).ravel()
        lg = np.log(t + s * np.cos(theta))
        val = float(np.sum(wt * np.exp(-0.5 * lg) * np.cos(k * lg)))
        if prev is not None and abs(val - prev) <= 1e-13 * max(1.0, abs(val)):
            return val
        prev = val
        panels *= 2
    return prev


def hyp2f1_conical(k: float, z: float) -> complex:
    """F(1/2 + ik, 1/2 + ik; 1; z) for 0 <= z < 1.

    Power series for z <= 0.75; closer to the unit argument the series is
    only conditionally useful, so the value is routed through the conical
    Legendre function via x^(-1/2-ik) P_{-1/2+ik}(2/x - 1) with x = 1 - z.
    """
    _check_finite(k, z)
    if z < 0.0 or z >= 1.0:
        raise ValueError(f"hyp2f1_conical: z={z} outside [0, 1)")
    if z == 0.0:
        return 1.0 + 0.0j
    if z <= 0.75:
        a = 0.5 + 1j * k
        total = 1.0 + 0.0j
        term = 1.0 + 0.0j
        small = 0
        for j in range(0, 100000):
            term *= (a + j) * (a + j) / ((j + 1.0) * (j + 1.0)) * z
            total += term
            if abs(term) < 1e-16 * abs(total):
                small += 1
                if small >= 3:
                    break
            else:
                small = 0
        return total
    x = 1.0 - z
    p = conical_legendre(k, 2.0 / x - 1.0)
    return p * np.exp((-0.5 - 1j * k) * math.log(x))


_J0_SERIES_CUT = 16.0


def bessel_j0(z: float) -> float:
    """Bessel function J0(z) to >= 12 digits.

    Power series in extended precision for |z| <= 16, Hankel asymptotic
    expansion (truncated at its smallest term) beyond.
    """
    _check_finite(z)
    z = abs(float(z))
    if z <= _J0_SERIES_CUT:
        q = -np.longdouble(z) * np.longdouble(z) / 4.0
        term = np.longdouble(1.0)
        total = np.longdouble(1.0)
        for m in range(1, 200):
            term *= q / (np.longdouble(m) * np.longdouble(m))
            total += term
            if abs(term) < 1e-22 * max(np.longdouble(1.0), abs(total)):
                break
        return float(total)
    # Hankel expansion of H0^(1): sqrt(2/(pi z)) e^{i(z - pi/4)} sum_k (-i)^k a_k / z^k
    # with a_k = ((2k-1)!!)^2 / (8^k k!)
    a = 1.0
    total = complex(1.0)
    term_prev = 1.0
    for kk in range(1, 30):
        a *= (2 * kk - 1.0) ** 2 / (8.0 * kk)
        mag = a / z**kk
        if mag > term_prev:
            break  # past the optimal truncation point
        total += (-1j) ** kk * mag
        term_prev = mag
    phase = complex(math.cos(z - math.pi / 4.0), math.sin(z - math.pi / 4.0))
    return math.sqrt(2.0 / (math.pi * z)) * (phase * total).real


def phase_integral(u: float, alpha: float, beta: float, kappa_prime: float) -> float:
    """The WKB phase: integral of exp((kappa' - V)/2) from -infinity to u,
    with V(u) = -alpha log(1 + tanh u) - beta log(1 - tanh u).

    After s = tanh(u') the integrand is the beta-type weight
    (1+s)^(alpha/2-1) (1-s)^(beta/2-1); the quadrature handles the endpoint
    weights explicitly.  u may be +-inf; the full-line value equals
    exp(kappa'/2) 2^((alpha+beta)/2 - 1) B(alpha/2, beta/2).
    """
    _check_finite(alpha, beta, kappa_prime)
    if alpha <= 0.0:
        raise ValueError("phase_integral: divergent at -infinity for alpha <= 0")
    if beta <= 0.0:
        raise ValueError("phase_integral: beta must be positive")
    if math.isnan(u):
        raise ValueError("phase_integral: u is NaN")
    if u == -math.inf:
        return 0.0
    s = 1.0 if u == math.inf else math.tanh(u)
    a = 0.5 * alpha
    b = 0.5 * beta
    if s <= -1.0:  # tanh underflow for very negative u
        return 0.0
    if s >= 1.0:
        val, _ = integrate.quad(
            lambda t: 1.0, -1.0, 1.0, weight="alg", wvar=(a - 1.0, b - 1.0)
        )
    else:
        val, _ = integrate.quad(
            lambda t: (1.0 - t) ** (b - 1.0),
            -1.0,
            s,
            weight="alg",
            wvar=(a - 1.0, 0.0),
        )
    return math.exp(0.5 * kappa_prime) * val
