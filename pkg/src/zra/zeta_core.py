"""Riemann-Siegel theta, Hardy's Z(t) and Z'(t) on the critical line.

Z is evaluated by the Riemann-Siegel formula (main sum plus up to four
correction terms) above ``EvalConfig.euler_maclaurin_cutoff`` and by an
Euler-Maclaurin evaluation of zeta(1/2 + it) below it.  All evaluators accept
either a float or a numpy array of ordinates.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Literal, Union

import numpy as np
from numpy.polynomial import polynomial as P

from .errors import AccuracyError, DomainError, NonFiniteError

ArrayLike = Union[float, np.ndarray]

LN_PI = math.log(math.pi)
HALF_LN_2PI = 0.5 * math.log(2.0 * math.pi)
EPS = np.finfo(float).eps


@dataclass(frozen=True)
class EvalConfig:
    rs_correction_terms: int = 4
    euler_maclaurin_cutoff: float = 60.0
    derivative_step_scale: float = 20.0
    target_abs_tol: float = 1e-6

    def __post_init__(self):
        if not 0 <= self.rs_correction_terms <= 4:
            raise ValueError("rs_correction_terms must lie in [0, 4]")
        if not self.euler_maclaurin_cutoff > 0:
            raise ValueError("euler_maclaurin_cutoff must be positive")
        if not self.target_abs_tol > 0:
            raise ValueError("target_abs_tol must be positive")
        if not self.derivative_step_scale > 0:
            raise ValueError("derivative_step_scale must be positive")


DEFAULT_CONFIG = EvalConfig()


@dataclass(frozen=True)
class ThetaValue:
    t: float
    value: float
    mode: Literal["exact", "asymptotic"]
    abs_err_bound: float


@dataclass(frozen=True)
class Derivative:
    """A numerical derivative with its estimated absolute error."""

    t: float
    value: float
    err: float


# --------------------------------------------------------------------------
# Bernoulli numbers and log-gamma

@lru_cache(maxsize=None)
def bernoulli(n: int) -> Fraction:
    """Bernoulli number B_n (B_1 = -1/2 convention)."""
    a = [Fraction(0)] * (n + 1)
    for m in range(n + 1):
        a[m] = Fraction(1, m + 1)
        for j in range(m, 0, -1):
            a[j - 1] = j * (a[j - 1] - a[j])
    return a[0] if n != 1 else Fraction(-1, 2)


STIRLING_TERMS = 10
_STIRLING_COEFS = tuple(
    float(bernoulli(2 * k)) / (2 * k * (2 * k - 1)) for k in range(1, STIRLING_TERMS + 1)
)
_STIRLING_NEXT = abs(float(bernoulli(2 * STIRLING_TERMS + 2))) / (
    (2 * STIRLING_TERMS + 2) * (2 * STIRLING_TERMS + 1)
)


def _stirling_remainder_bound(w: complex) -> float:
    # |R_K(w)| <= |B_{2K+2}| / ((2K+2)(2K+1)|w|^{2K+1}) * sec(arg w / 2)^{2K+2}
    sec = 1.0 / math.cos(cmath.phase(w) / 2.0)
    return _STIRLING_NEXT * sec ** (2 * STIRLING_TERMS + 2) / abs(w) ** (2 * STIRLING_TERMS + 1)


def _im_loggamma_quarter(t: np.ndarray, shift: int) -> np.ndarray:
    """Im log Gamma(1/4 + i t/2), shifted ``shift`` steps up before Stirling."""
    half_t = 0.5 * t
    w = (0.25 + shift) + 1j * half_t
    inv = 1.0 / w
    inv2 = inv * inv
    series = np.zeros_like(w)
    power = inv
    for c in _STIRLING_COEFS:
        series = series + c * power
        power = power * inv2
    lg = (w - 0.5) * np.log(w) - w + HALF_LN_2PI + series
    im = lg.imag
    for k in range(shift):
        im = im - np.arctan2(half_t, 0.25 + k)
    return im


def theta_exact(t: float, cfg: EvalConfig = DEFAULT_CONFIG) -> ThetaValue:
    """theta(t) = -(t/2) ln pi + Im log Gamma(1/4 + it/2) with a certified bound."""
    if not t >= 0:
        raise DomainError(f"theta_exact needs t >= 0, got {t}")
    shift = 0
    while True:
        bound = _stirling_remainder_bound(complex(0.25 + shift, 0.5 * t))
        if bound <= 0.25 * cfg.target_abs_tol:
            break
        shift += 1
        if shift > 64:
            raise NonFiniteError(f"Stirling remainder cannot reach {cfg.target_abs_tol} at t={t}")
    im = float(_im_loggamma_quarter(np.asarray([float(t)]), shift)[0])
    value = im - 0.5 * t * LN_PI
    rounding = 16 * EPS * (abs(im) + 0.5 * t * LN_PI + shift)
    err = bound + rounding
    if err > cfg.target_abs_tol:
        raise NonFiniteError(f"theta error bound {err:.3g} exceeds {cfg.target_abs_tol} at t={t}")
    return ThetaValue(float(t), value, "exact", err)


def theta_asymptotic(t: float) -> ThetaValue:
    """Three-term expansion (t/2) ln(t/2pi) - t/2 - pi/8."""
    if not t > 0:
        raise DomainError(f"theta_asymptotic needs t > 0, got {t}")
    value = 0.5 * t * math.log(t / (2 * math.pi)) - 0.5 * t - math.pi / 8
    # leading dropped term is 1/(48 t) + 7/(5760 t^3) + ...; the sum is < 1/(40 t) for t >= 1
    bound = 1.0 / (40.0 * t) if t >= 1 else math.inf
    return ThetaValue(float(t), value, "asymptotic", bound)


_THETA_SHIFT = 8


def theta(t: ArrayLike) -> ArrayLike:
    """Vectorised theta(t); Stirling after a fixed upward shift of 8."""
    arr = np.asarray(t, dtype=float)
    out = _im_loggamma_quarter(arr, _THETA_SHIFT) - 0.5 * arr * LN_PI
    return out if arr.ndim else float(out)


# --------------------------------------------------------------------------
# Riemann-Siegel correction terms
#
# C_k(p) are combinations of derivatives of
#   Psi(p) = cos(2 pi (p^2 - p - 1/16)) / cos(2 pi p),
# expanded here as Taylor polynomials in z = p - 1/2.

_PSI_DEGREE = 60
_PSI_FFT_POINTS = 256
_PSI_RADIUS = 1.0


def _psi_of_z(z: np.ndarray) -> np.ndarray:
    return -np.cos(2 * np.pi * z * z - 5 * np.pi / 8) / np.cos(2 * np.pi * z)


def _psi_taylor() -> np.ndarray:
    # Cauchy integral on |z| = 1 via FFT; Psi is entire so the contour is free
    m = _PSI_FFT_POINTS
    nodes = _PSI_RADIUS * np.exp(2j * np.pi * np.arange(m) / m)
    coefs = np.fft.fft(_psi_of_z(nodes)) / m
    coefs = coefs[: _PSI_DEGREE + 1].real / _PSI_RADIUS ** np.arange(_PSI_DEGREE + 1)
    coefs[1::2] = 0.0  # Psi is even in z
    return coefs


def _rs_correction_polys() -> tuple[np.ndarray, ...]:
    psi = _psi_taylor()

    def d(order: int) -> np.ndarray:
        return P.polyder(psi, order)

    def comb(*pairs: tuple[float, int]) -> np.ndarray:
        out = np.zeros(1)
        for coef, order in pairs:
            out = P.polyadd(out, coef * d(order))
        return out

    pi2, pi4, pi6, pi8 = math.pi ** 2, math.pi ** 4, math.pi ** 6, math.pi ** 8
    return (
        psi,
        comb((-1.0 / (96 * pi2), 3)),
        comb((1.0 / (64 * pi2), 2), (1.0 / (18432 * pi4), 6)),
        comb((-1.0 / (64 * pi2), 1), (-1.0 / (3840 * pi4), 5), (-1.0 / (5308416 * pi6), 9)),
        comb(
            (1.0 / (128 * pi2), 0),
            (19.0 / (24576 * pi4), 4),
            (11.0 / (5898240 * pi6), 8),
            (1.0 / (2038431744 * pi8), 12),
        ),
    )


_RS_POLYS = _rs_correction_polys()

# |Z_RS - Z| <= c_K * tau^{-(2K+3)/4} + rounding, tau = t/(2 pi); constants
# calibrated against a 30-digit reference over t in [25, 1000], padded by 2x.
RS_ERROR_CONSTANTS = (0.062, 0.011, 9.3e-4, 9.5e-4, 1.6e-4)
RS_ROUNDING_PER_UNIT_T = 2e-14


def rs_error_bound(t: ArrayLike, terms: int) -> ArrayLike:
    t = np.asarray(t, dtype=float)
    tau = t / (2 * math.pi)
    return RS_ERROR_CONSTANTS[terms] * tau ** (-(2 * terms + 3) / 4.0) + RS_ROUNDING_PER_UNIT_T * t


def _z_riemann_siegel(t: np.ndarray, terms: int) -> np.ndarray:
    tau = t / (2 * math.pi)
    a = np.sqrt(tau)
    n_max = np.floor(a)
    p = a - n_max
    th = theta(t)
    total = np.zeros_like(t)
    top = int(n_max.max()) if t.size else 0
    for n in range(1, top + 1):
        active = n <= n_max
        term = np.cos(th - t * math.log(n)) / math.sqrt(n)
        total += np.where(active, term, 0.0)
    total *= 2.0
    z = p - 0.5
    inv_sqrt_tau = 1.0 / a
    corr = np.zeros_like(t)
    scale = np.ones_like(t)
    for k in range(terms + 1):
        corr += P.polyval(z, _RS_POLYS[k]) * scale
        scale = scale * inv_sqrt_tau
    sign = np.where(n_max.astype(np.int64) % 2 == 1, 1.0, -1.0)  # (-1)^(N-1)
    return total + sign * tau ** -0.25 * corr


# --------------------------------------------------------------------------
# Euler-Maclaurin zeta(1/2 + it) for small t

_EM_N = 30
_EM_TERMS = 14
_EM_COEFS = tuple(float(bernoulli(2 * k)) / math.factorial(2 * k) for k in range(1, _EM_TERMS + 2))


def _zeta_em(t: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """zeta(1/2 + it) and an error bound from the first omitted term."""
    s = 0.5 + 1j * t
    n = _EM_N
    total = np.zeros_like(s)
    for k in range(1, n):
        total += np.exp(-s * math.log(k))
    n_s = np.exp(-s * math.log(n))
    total += n * n_s / (s - 1) + 0.5 * n_s
    rising = s  # s (s+1) ... (s+2k-2)
    power = n_s / n  # N^{-s-2k+1}
    for k in range(1, _EM_TERMS + 1):
        total += _EM_COEFS[k - 1] * rising * power
        rising = rising * (s + 2 * k - 1) * (s + 2 * k)
        power = power / (n * n)
    nxt = np.abs(_EM_COEFS[_EM_TERMS] * rising * power)
    sigma_shift = 0.5 + 2 * _EM_TERMS + 1
    err = nxt * np.abs(s + 2 * _EM_TERMS + 1) / sigma_shift
    return total, err


def _z_euler_maclaurin(t: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    zeta, err = _zeta_em(t)
    th = theta(t)
    z = (np.exp(1j * th) * zeta).real
    return z, err + 64 * EPS * np.abs(zeta)


# --------------------------------------------------------------------------
# Public evaluators

def _evaluate(flat: np.ndarray, low: np.ndarray, cfg: EvalConfig) -> tuple[np.ndarray, np.ndarray]:
    out = np.empty_like(flat)
    err = np.empty_like(flat)
    if low.any():
        out[low], err[low] = _z_euler_maclaurin(flat[low])
    high = ~low
    if high.any():
        th = flat[high]
        out[high] = _z_riemann_siegel(th, cfg.rs_correction_terms)
        err[high] = rs_error_bound(th, cfg.rs_correction_terms)
    return out, err


def hardy_Z_with_error(t: ArrayLike, cfg: EvalConfig = DEFAULT_CONFIG) -> tuple[ArrayLike, ArrayLike]:
    """Z(t) and an absolute error estimate, without enforcing the tolerance."""
    arr = np.asarray(t, dtype=float)
    flat = np.atleast_1d(arr).ravel()
    if np.any(flat < 0) or not np.all(np.isfinite(flat)):
        raise DomainError("hardy_Z needs finite t >= 0")
    out, err = _evaluate(flat, flat < cfg.euler_maclaurin_cutoff, cfg)
    if arr.ndim == 0:
        return float(out[0]), float(err[0])
    return out.reshape(arr.shape), err.reshape(arr.shape)


def _check(err: np.ndarray, cfg: EvalConfig) -> None:
    worst = float(np.max(err)) if np.size(err) else 0.0
    if worst > cfg.target_abs_tol:
        raise AccuracyError(
            f"error estimate {worst:.3g} exceeds target {cfg.target_abs_tol:g} "
            f"with {cfg.rs_correction_terms} Riemann-Siegel corrections"
        )


def hardy_Z(t: ArrayLike, cfg: EvalConfig = DEFAULT_CONFIG) -> ArrayLike:
    """Hardy's Z(t) = exp(i theta(t)) zeta(1/2 + it), real on the real axis."""
    value, err = hardy_Z_with_error(t, cfg)
    _check(err, cfg)
    return value


def riemann_siegel_Z(t: ArrayLike, terms: int = 4) -> ArrayLike:
    """Riemann-Siegel evaluation regardless of height (no tolerance check)."""
    arr = np.asarray(t, dtype=float)
    out = _z_riemann_siegel(np.atleast_1d(arr).ravel(), terms)
    return out.reshape(arr.shape) if arr.ndim else float(out[0])


def euler_maclaurin_Z(t: ArrayLike) -> ArrayLike:
    """Euler-Maclaurin evaluation regardless of height (accurate for t < ~60)."""
    arr = np.asarray(t, dtype=float)
    out, _ = _z_euler_maclaurin(np.atleast_1d(arr).ravel())
    return out.reshape(arr.shape) if arr.ndim else float(out[0])


def derivative_step(t: ArrayLike, cfg: EvalConfig = DEFAULT_CONFIG) -> ArrayLike:
    return cfg.derivative_step_scale * np.sqrt(np.maximum(1.0, np.abs(t))) * EPS ** (1.0 / 3.0)


def _richardson(t: np.ndarray, h: np.ndarray, cfg: EvalConfig) -> tuple[np.ndarray, np.ndarray]:
    # the whole stencil uses the method selected at its centre, so the small
    # jump between the two methods never enters a difference quotient
    low = t < cfg.euler_maclaurin_cutoff

    def z(x):
        value, err = _evaluate(x, low, cfg)
        _check(err, cfg)
        return value

    def central(step):
        return (z(t + step) - z(t - step)) / (2 * step)

    d1, d2, d4 = central(h), central(h / 2), central(h / 4)
    r1 = (4 * d2 - d1) / 3
    r2 = (4 * d4 - d2) / 3
    return r2, np.abs(r2 - r1)


def hardy_Z_prime_array(t: np.ndarray, cfg: EvalConfig = DEFAULT_CONFIG) -> np.ndarray:
    """Vectorised Z'(t) at the default step; no step adaptation."""
    t = np.asarray(t, dtype=float)
    value, _ = _richardson(t, derivative_step(t, cfg), cfg)
    return value


def hardy_Z_prime(t: float, cfg: EvalConfig = DEFAULT_CONFIG) -> Derivative:
    """Z'(t) by Richardson-extrapolated central differences.

    The step starts at ``derivative_step(t)`` and is halved until two
    Richardson levels agree to within ``10 * target_abs_tol``.
    """
    if not t > 0:
        raise DomainError(f"hardy_Z_prime needs t > 0, got {t}")
    arr = np.asarray([float(t)])
    h = np.minimum(derivative_step(arr, cfg), 0.5 * arr)
    for _ in range(8):
        value, err = _richardson(arr, h, cfg)
        if err[0] <= 10 * cfg.target_abs_tol:
            cancellation = 64 * EPS * max(1.0, float(t)) / h[0]
            return Derivative(float(t), float(value[0]), float(err[0]) + cancellation)
        h = h / 2
    raise AccuracyError(f"Richardson levels for Z'({t}) did not stabilise")
