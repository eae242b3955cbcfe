"""Truncated sums over zero ordinates and the formulas they are checked against.

All sums go through ``math.fsum`` (exactly rounded), so the result does not
depend on term order or chunking.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Literal, Optional, Sequence

import numpy as np

from .errors import DomainError, IncompleteTable, ZeroCollision
from .root_atlas import Zero, coverage_height, gammas

# Reporting constant for the tail bound A ln T / T; see empirical_tail_ratio.
A_CAL = 1.0
RIEMANN_CONSTANT = 0.5772156649015329 + 2.0 - math.log(4 * math.pi)


@dataclass(frozen=True)
class TruncatedSum:
    t0: float
    cutoff: float
    value: float
    term_count: int
    tail_bound: float
    nearest_gap: float


@dataclass(frozen=True)
class ResidualEntry:
    """One formula check: a computed value against its closed-form target."""

    name: str
    t0: float
    value: float
    target: float
    residual: float
    scaled_residual: float
    details: dict = field(default_factory=dict)


def cutoff_T(t0: float) -> float:
    """Truncation height t0 ln t0 ln ln t0."""
    if not t0 > math.e:
        raise DomainError(f"cutoff_T needs t0 > e, got {t0}")
    return t0 * math.log(t0) * math.log(math.log(t0))


def tail_bound_estimate(t0: float, cutoff: float, a: float = A_CAL) -> float:
    if not (t0 > 0 and cutoff > 0):
        raise DomainError("tail bound needs positive t0 and cutoff")
    return max(0.0, a * math.log(cutoff) / cutoff)


def _terms(t0: float, g: np.ndarray, mult: np.ndarray) -> np.ndarray:
    # (gamma - t0)(gamma + t0) keeps relative accuracy near t0
    return mult / ((g - t0) * (g + t0))


def _select(zeros: Sequence[Zero], upper: float):
    g = gammas(zeros)
    keep = g <= upper
    mult = np.fromiter((z.multiplicity for z in zeros), dtype=float, count=len(zeros))
    tol = np.fromiter((z.tol for z in zeros), dtype=float, count=len(zeros))
    return g[keep], mult[keep], tol[keep]


def truncated_inverse_square_sum(
    t0: float,
    zeros: Sequence[Zero],
    cutoff: float,
    *,
    t0_tol: float = 0.0,
    height: Optional[float] = None,
    check_coverage: bool = True,
) -> TruncatedSum:
    """Sum of n(gamma) / (gamma^2 - t0^2) over 0 < gamma <= t0 + cutoff."""
    if t0 < 0 or not cutoff > 0:
        raise DomainError("need t0 >= 0 and cutoff > 0")
    upper = t0 + cutoff
    if check_coverage and coverage_height(zeros, height) < upper:
        raise IncompleteTable(
            f"zeros cover up to {coverage_height(zeros, height):.6g}, sum needs {upper:.6g}"
        )
    g, mult, tol = _select(zeros, upper)
    nearest = 0.0
    if t0 > 0 and g.size:
        dist = np.abs(g - t0)
        k = int(np.argmin(dist))
        nearest = float(dist[k])
        if nearest <= max(tol[k], t0_tol):
            raise ZeroCollision(f"t0={t0} within tolerance of zero {g[k]}")
    value = math.fsum(_terms(t0, g, mult).tolist())
    tail = tail_bound_estimate(max(t0, math.e), cutoff) if cutoff > 1 else 0.0
    return TruncatedSum(float(t0), float(cutoff), value, int(g.size), tail, nearest)


def directly_summed_tail(t0: float, zeros: Sequence[Zero], lower: float, upper: float) -> tuple[float, int]:
    """Sum of 1/(gamma^2 - t0^2) over lower < gamma <= upper, and its term count."""
    g = gammas(zeros)
    g = g[(g > lower) & (g <= upper)]
    return math.fsum(_terms(t0, g, np.ones_like(g)).tolist()), int(g.size)


def empirical_tail_ratio(
    t0: float, zeros: Sequence[Zero], upper: float, height: Optional[float] = None
) -> dict:
    """Tail over (t0 + T, upper] compared with ln T / T at T = cutoff_T(t0)."""
    big_t = cutoff_T(t0)
    if coverage_height(zeros, height) < upper:
        raise IncompleteTable(f"tail check needs zeros up to {upper}")
    tail, count = directly_summed_tail(t0, zeros, t0 + big_t, upper)
    shape = math.log(big_t) / big_t
    return {
        "t0": t0,
        "T": big_t,
        "upper": upper,
        "tail": tail,
        "terms": count,
        "ln_T_over_T": shape,
        "ratio": tail / shape,
        "holds": tail <= A_CAL * shape,
    }


def verify_eighth_pi(
    t0: float, zeros: Sequence[Zero], *, t0_tol: float = 0.0, height: Optional[float] = None
) -> ResidualEntry:
    """Truncated sum at cutoff T(t0) against pi / (8 t0)."""
    big_t = cutoff_T(t0)
    s = truncated_inverse_square_sum(t0, zeros, big_t, t0_tol=t0_tol, height=height)
    target = math.pi / (8 * t0)
    residual = abs(s.value - target)
    return ResidualEntry(
        "eighth_pi",
        t0,
        s.value,
        target,
        residual,
        residual * t0 * math.log(math.log(t0)),
        {"cutoff": big_t, "term_count": s.term_count, "tail_bound": s.tail_bound, "nearest_gap": s.nearest_gap},
    )


def verify_quarter_pi(
    t0: float,
    zeros: Sequence[Zero],
    pairing: Literal["positive_only", "symmetric"] = "symmetric",
    *,
    t0_tol: float = 0.0,
    height: Optional[float] = None,
    check_coverage: bool = True,
) -> ResidualEntry:
    """Sum of t0 / (gamma^2 - t0^2) against pi/4 under both pairing conventions.

    ``positive_only`` sums over gamma > 0; ``symmetric`` also counts the
    conjugate zeros -gamma, doubling the sum.  Both are reported in
    ``details``; ``pairing`` picks which one fills value/residual.
    """
    if pairing not in ("positive_only", "symmetric"):
        raise ValueError(f"unknown pairing {pairing!r}")
    big_t = cutoff_T(t0)
    s = truncated_inverse_square_sum(
        t0, zeros, big_t, t0_tol=t0_tol, height=height, check_coverage=check_coverage
    ).value
    target = math.pi / 4
    positive = t0 * s
    symmetric = 2 * positive
    res = {"positive_only": abs(positive - target), "symmetric": abs(symmetric - target)}
    value = positive if pairing == "positive_only" else symmetric
    return ResidualEntry(
        "quarter_pi",
        t0,
        value,
        target,
        res[pairing],
        res[pairing] * t0,
        {
            "pairing": pairing,
            "positive_only": positive,
            "symmetric": symmetric,
            "residual_positive_only": res["positive_only"],
            "residual_symmetric": res["symmetric"],
            "matched": min(res, key=res.get),
        },
    )


def riemann_constant_sum(
    zeros: Sequence[Zero], height_cap: float, *, height: Optional[float] = None, check_coverage: bool = True
) -> ResidualEntry:
    """Sum of 1/(1/4 + gamma^2) over all zeros, against c + 2 - ln 4 pi.

    The positive ordinates up to ``height_cap`` are summed directly and the
    rest is estimated from the smooth density ln(u/2pi)/(2pi), whose integral
    against 1/u^2 from the cap upward is (ln(cap/2pi) + 1) / (2pi cap).
    Zeros come in conjugate pairs, so the full sum is twice the one-sided one;
    ``details`` keeps the one-sided figures.
    """
    if not height_cap > 2 * math.pi:
        raise DomainError("height_cap must exceed 2 pi")
    if check_coverage and len(zeros) and coverage_height(zeros, height) < height_cap:
        raise IncompleteTable(f"zeros cover up to {coverage_height(zeros, height)}, cap is {height_cap}")
    g = gammas(zeros)
    g = g[g <= height_cap]
    partial = math.fsum((1.0 / (0.25 + g * g)).tolist())
    tail = (math.log(height_cap / (2 * math.pi)) + 1) / (2 * math.pi * height_cap)
    total = 2 * (partial + tail)
    residual = abs(total - RIEMANN_CONSTANT)
    return ResidualEntry(
        "riemann_constant",
        0.0,
        total,
        RIEMANN_CONSTANT,
        residual,
        residual,
        {
            "partial": partial,
            "tail_estimate": tail,
            "one_sided_total": partial + tail,
            "height_cap": height_cap,
            "term_count": int(g.size),
        },
    )
