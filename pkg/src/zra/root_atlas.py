"""Zeros of Z(t), stationary points of Z between them, and gap statistics."""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field
from typing import Callable, Literal, Optional, Sequence

import numpy as np

from .errors import (
    DomainError,
    DoubleZeroSuspected,
    IncompleteTable,
    InsufficientZeros,
    MultipleCritical,
    NoCriticalFound,
    NoSignChange,
    NotConsecutive,
    StepTooCoarse,
    TolTooSmall,
)
from .zeta_core import DEFAULT_CONFIG, EPS, EvalConfig, hardy_Z, hardy_Z_prime_array, theta

DEFAULT_ZERO_TOL = 1e-9
DEFAULT_T0_TOL = 1e-9
DOUBLE_ZERO_SLOPE = 1e-6
CRITICAL_GRID = 48


@dataclass(frozen=True)
class Zero:
    index: int
    gamma: float
    tol: float
    multiplicity: int = 1

    def __post_init__(self):
        if not (self.gamma > 0 and self.tol > 0 and self.multiplicity >= 1):
            raise ValueError(f"malformed zero {self}")


@dataclass(frozen=True)
class CriticalPoint:
    t0: float
    gamma_lo: float
    gamma_hi: float
    tol: float
    z_value: float
    kind: Literal["max", "min"]
    diagnostics: tuple[str, ...] = ()

    @property
    def is_interior(self) -> bool:
        return self.gamma_lo + self.tol < self.t0 < self.gamma_hi - self.tol


@dataclass(frozen=True)
class GapRecord:
    t0: float
    Q: float
    m: float
    K: float
    littlewood_product: float


@dataclass(frozen=True)
class LittlewoodResult:
    max_product: float
    argmax_gamma: float
    table: tuple[tuple[float, float, float], ...]  # (gamma_lo, gamma_hi, product)


@dataclass(frozen=True)
class ZeroCount:
    t: float
    n: int
    smooth_estimate: float  # theta(t)/pi + 1


@dataclass(frozen=True)
class CountingConstants:
    t_lo: int
    t_hi: int
    a_global: float  # max N(t) / (t ln t)
    a_local: float  # max (N(t+1) - N(t)) / ln t
    max_smooth_discrepancy: float  # max |N(t) - theta(t)/pi - 1|


def gammas(zeros: Sequence[Zero]) -> np.ndarray:
    return np.fromiter((z.gamma for z in zeros), dtype=float, count=len(zeros))


def coverage_height(zeros: Sequence[Zero], height: Optional[float]) -> float:
    """Height up to which ``zeros`` is complete (last ordinate if undeclared)."""
    if height is not None:
        return float(height)
    return zeros[-1].gamma if len(zeros) else 0.0


def mean_zero_spacing(t: float) -> float:
    return 2 * math.pi / math.log(t / (2 * math.pi)) if t > 2 * math.pi * math.e else math.inf


def default_step(t_hi: float) -> float:
    """0.05 below height 1000, shrinking like 1/ln t above."""
    return 0.05 if t_hi <= 1000 else 0.05 * math.log(1000.0) / math.log(t_hi)


# --------------------------------------------------------------------------
# Bracketing and bisection

def scan_grid(t_lo: float, t_hi: float, step: float) -> np.ndarray:
    n = int(math.floor((t_hi - t_lo) / step + 1e-9))
    return t_lo + step * np.arange(n + 1)


def scan_sign_changes(
    t_lo: float,
    t_hi: float,
    step: float,
    f: Optional[Callable] = None,
    cfg: EvalConfig = DEFAULT_CONFIG,
) -> list[tuple[float, float]]:
    """All grid cells (a, a + step) on which ``f`` changes sign.

    ``f`` must accept a numpy array; it defaults to Z.  A grid value of
    exactly zero counts as positive, so a root landing on a grid point is
    reported once.
    """
    if not (0 < t_lo < t_hi and step > 0):
        raise DomainError("need 0 < t_lo < t_hi and step > 0")
    if 2 * step > mean_zero_spacing(t_hi):
        warnings.warn(
            f"step {step} exceeds half the mean zero spacing at t={t_hi:g}", StepTooCoarse, stacklevel=2
        )
    f = f or (lambda x: hardy_Z(x, cfg))
    grid = scan_grid(t_lo, t_hi, step)
    values = np.asarray(f(grid), dtype=float)
    positive = values >= 0
    idx = np.nonzero(positive[:-1] != positive[1:])[0]
    return [(float(grid[i]), float(grid[i + 1])) for i in idx]


def bisect_many(
    f: Callable[[np.ndarray], np.ndarray],
    lo: np.ndarray,
    hi: np.ndarray,
    tol: float,
    f_lo: Optional[np.ndarray] = None,
) -> np.ndarray:
    """Vectorised bisection; every bracket is shrunk below width 2*tol."""
    lo = np.array(lo, dtype=float)
    hi = np.array(hi, dtype=float)
    neg_lo = np.asarray(f(lo) if f_lo is None else f_lo) < 0
    width = float(np.max(hi - lo)) if lo.size else 0.0
    iterations = max(0, math.ceil(math.log2(width / tol))) if width > 0 else 0
    for _ in range(iterations):
        mid = 0.5 * (lo + hi)
        neg_mid = np.asarray(f(mid)) < 0
        same = neg_mid == neg_lo
        lo = np.where(same, mid, lo)
        hi = np.where(same, hi, mid)
    return 0.5 * (lo + hi)


def _check_tol(t: float, tol: float) -> None:
    if tol < 10 * EPS * max(1.0, abs(t)):
        raise TolTooSmall(f"tol {tol:g} below resolution at t={t:g}")


def refine_zero(
    bracket: tuple[float, float],
    tol: float = DEFAULT_ZERO_TOL,
    cfg: EvalConfig = DEFAULT_CONFIG,
    index: int = 1,
) -> Zero:
    a, b = bracket
    if not 0 < a < b:
        raise DomainError(f"bad bracket {bracket}")
    return refine_zeros([bracket], tol, cfg, first_index=index)[0]


def refine_zeros(
    brackets: Sequence[tuple[float, float]],
    tol: float = DEFAULT_ZERO_TOL,
    cfg: EvalConfig = DEFAULT_CONFIG,
    first_index: int = 1,
) -> list[Zero]:
    """Bisect many sign-change brackets of Z at once."""
    if not brackets:
        return []
    lo = np.array([b[0] for b in brackets], dtype=float)
    hi = np.array([b[1] for b in brackets], dtype=float)
    _check_tol(float(hi.max()), tol)
    z_lo, z_hi = hardy_Z(lo, cfg), hardy_Z(hi, cfg)
    bad = np.nonzero((z_lo >= 0) == (z_hi >= 0))[0]
    if bad.size:
        i = int(bad[0])
        raise NoSignChange(f"Z has the same sign at both ends of ({lo[i]}, {hi[i]})")
    roots = bisect_many(lambda x: hardy_Z(x, cfg), lo, hi, tol, f_lo=z_lo)
    slopes = np.abs(hardy_Z_prime_array(roots, cfg))
    for r in roots[slopes < DOUBLE_ZERO_SLOPE]:
        warnings.warn(f"|Z'| tiny at zero {r:.12g}", DoubleZeroSuspected, stacklevel=2)
    return [Zero(first_index + i, float(r), tol, 1) for i, r in enumerate(roots)]


def find_zeros(
    t_lo: float,
    t_hi: float,
    tol: float = DEFAULT_ZERO_TOL,
    step: Optional[float] = None,
    cfg: EvalConfig = DEFAULT_CONFIG,
    first_index: Optional[int] = None,
) -> list[Zero]:
    """Scan and refine all zeros in (t_lo, t_hi].

    When ``first_index`` is not given, zeros below ``t_lo`` are counted by a
    scan from height 10 (there are none below 14).
    """
    step = step or default_step(t_hi)
    if first_index is None:
        first_index = 1
        if t_lo > 14:
            first_index += len(scan_sign_changes(10.0, t_lo, min(step, default_step(t_lo)), cfg=cfg))
    brackets = scan_sign_changes(t_lo, t_hi, step, cfg=cfg)
    return refine_zeros(brackets, tol, cfg, first_index)


# --------------------------------------------------------------------------
# Stationary points

def _classify(z_value: float) -> Literal["max", "min"]:
    return "max" if z_value > 0 else "min"


def _critical_between(pairs: np.ndarray, tol: float, cfg: EvalConfig) -> list[CriticalPoint]:
    """Stationary points of Z inside each (gamma_lo, gamma_hi) row of ``pairs``."""
    n = len(pairs)
    if n == 0:
        return []
    glo, ghi = pairs[:, 0], pairs[:, 1]
    frac = (np.arange(1, CRITICAL_GRID + 1) / (CRITICAL_GRID + 1))[None, :]
    grid = glo[:, None] + (ghi - glo)[:, None] * frac
    zp = hardy_Z_prime_array(grid.ravel(), cfg).reshape(grid.shape)
    zv = hardy_Z(grid.ravel(), cfg).reshape(grid.shape)

    interior_sign = zv >= 0
    crossing = interior_sign != interior_sign[:, :1]
    for i in np.nonzero(crossing.any(axis=1))[0]:
        raise NotConsecutive(f"Z changes sign inside ({glo[i]}, {ghi[i]})")

    pos = zp >= 0
    changes = pos[:, :-1] != pos[:, 1:]
    lo_list, hi_list, owner, diag = [], [], [], [[] for _ in range(n)]
    for i in range(n):
        cells = np.nonzero(changes[i])[0]
        if cells.size == 0:
            raise NoCriticalFound(f"Z' keeps its sign on ({glo[i]}, {ghi[i]})")
        if cells.size > 1:
            msg = f"{cells.size} stationary points between {glo[i]:.9g} and {ghi[i]:.9g}"
            warnings.warn(msg, MultipleCritical, stacklevel=3)
            diag[i].append("MultipleCritical: " + msg)
            best = cells[np.argmax(np.abs(zv[i, cells]) + np.abs(zv[i, cells + 1]))]
        else:
            best = cells[0]
        lo_list.append(grid[i, best])
        hi_list.append(grid[i, best + 1])
        owner.append(i)

    lo_arr, hi_arr = np.array(lo_list), np.array(hi_list)
    _check_tol(float(hi_arr.max()), tol)
    roots = bisect_many(lambda x: hardy_Z_prime_array(x, cfg), lo_arr, hi_arr, tol)
    zvals = hardy_Z(roots, cfg)
    out = []
    for j, i in enumerate(owner):
        out.append(
            CriticalPoint(
                t0=float(roots[j]),
                gamma_lo=float(glo[i]),
                gamma_hi=float(ghi[i]),
                tol=tol,
                z_value=float(zvals[j]),
                kind=_classify(float(zvals[j])),
                diagnostics=tuple(diag[i]),
            )
        )
    return out


def locate_critical_point(
    z_lo: Zero, z_hi: Zero, tol: float = DEFAULT_T0_TOL, cfg: EvalConfig = DEFAULT_CONFIG
) -> CriticalPoint:
    """The stationary point of Z strictly between two consecutive zeros."""
    if not z_lo.gamma < z_hi.gamma:
        raise NotConsecutive(f"zeros out of order: {z_lo.gamma} >= {z_hi.gamma}")
    if z_hi.index - z_lo.index != 1:
        raise NotConsecutive(f"indices {z_lo.index} and {z_hi.index} are not adjacent")
    return _critical_between(np.array([[z_lo.gamma, z_hi.gamma]]), tol, cfg)[0]


def critical_points(
    zeros: Sequence[Zero],
    t_max: Optional[float] = None,
    tol: float = DEFAULT_T0_TOL,
    cfg: EvalConfig = DEFAULT_CONFIG,
) -> list[CriticalPoint]:
    """One stationary point per consecutive gap with gamma_hi <= t_max."""
    g = gammas(zeros)
    if t_max is not None:
        g = g[g <= t_max]
    if g.size < 2:
        return []
    if np.any(np.diff(g) <= 0):
        raise NotConsecutive("zero ordinates not strictly increasing")
    return _critical_between(np.column_stack([g[:-1], g[1:]]), tol, cfg)


# --------------------------------------------------------------------------
# Gap statistics and counting

def gap_metrics(cp: CriticalPoint) -> GapRecord:
    if cp.gamma_lo <= math.e:
        raise DomainError(f"ln ln gamma' undefined or nonpositive for gamma' = {cp.gamma_lo}")
    if not cp.gamma_lo < cp.t0 < cp.gamma_hi:
        raise DomainError("t0 must lie strictly between its neighbouring zeros")
    right, left = cp.gamma_hi - cp.t0, cp.t0 - cp.gamma_lo
    q, m = max(right, left), min(right, left)
    product = (cp.gamma_hi - cp.gamma_lo) * math.log(math.log(cp.gamma_lo))
    return GapRecord(cp.t0, q, m, q / m, product)


def littlewood_statistic(zeros: Sequence[Zero], lo: float, hi: float) -> LittlewoodResult:
    """Empirical constant in gamma'' - gamma' < A / ln ln gamma'."""
    if lo <= math.e:
        raise DomainError("lo must exceed e")
    g = gammas(zeros)
    g = g[(g >= lo) & (g <= hi)]
    if g.size < 2:
        raise InsufficientZeros(f"{g.size} zeros in [{lo}, {hi}]")
    products = np.diff(g) * np.log(np.log(g[:-1]))
    table = tuple((float(a), float(b), float(p)) for a, b, p in zip(g[:-1], g[1:], products))
    k = int(np.argmax(products))
    return LittlewoodResult(float(products[k]), float(g[k]), table)


def smooth_count(t: np.ndarray | float):
    """theta(t)/pi + 1, the smooth part of the zero-counting function."""
    return theta(t) / math.pi + 1.0


def completeness_discrepancy(zeros: Sequence[Zero], t: float, window: float = 10.0) -> float:
    """Mean of N(u) - theta(u)/pi - 1 over u in [t - window, t].

    The fluctuating remainder averages out over a window, so a value near an
    integer k != 0 means |k| zeros are missing (or spurious) below t.
    """
    g = gammas(zeros)
    lo = max(1.0, t - window)
    u = np.linspace(lo, t, 401)
    counts = np.searchsorted(g, u, side="right")
    return float(np.mean(counts - smooth_count(u)))


def count_zeros(
    zeros: Sequence[Zero],
    t: float,
    height: Optional[float] = None,
    check: bool = True,
) -> ZeroCount:
    """N(t) = #{gamma <= t} with a completeness alarm against theta(t)/pi + 1."""
    if t < 0:
        raise DomainError("t must be nonnegative")
    if check and t > coverage_height(zeros, height):
        raise IncompleteTable(f"zero list covers up to {coverage_height(zeros, height)}, asked {t}")
    g = gammas(zeros)
    n = int(np.searchsorted(g, t, side="right"))
    smooth = float(smooth_count(t)) if t > 0 else 0.0
    if check and t >= 20:
        d = completeness_discrepancy(zeros, t)
        if abs(d) >= 0.5:
            raise IncompleteTable(f"count near t={t} is off the smooth estimate by {d:.2f} on average")
    return ZeroCount(float(t), n, smooth)


def counting_constants(zeros: Sequence[Zero], t_lo: int, t_hi: int) -> CountingConstants:
    """Observed suprema of N(t)/(t ln t) and (N(t+1)-N(t))/ln t on integer t."""
    if t_hi <= t_lo or t_lo < 2:
        raise DomainError("need 2 <= t_lo < t_hi")
    g = gammas(zeros)
    t = np.arange(t_lo, t_hi + 1, dtype=float)
    n = np.searchsorted(g, t, side="right")
    n_next = np.searchsorted(g, t + 1, side="right")
    return CountingConstants(
        int(t_lo),
        int(t_hi),
        float(np.max(n / (t * np.log(t)))),
        float(np.max((n_next - n) / np.log(t))),
        float(np.max(np.abs(n - smooth_count(t)))),
    )
