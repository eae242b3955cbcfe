"""The asymmetry bound Q/m < t0 ln^2 t0 ln_2 t0 ln_3 t0 and the diagnostics around it."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np

from . import spectral_sums as ss
from .errors import DomainError, IncompleteTable, InsufficientData, NotConsecutive
from .root_atlas import (
    CriticalPoint,
    GapRecord,
    Zero,
    counting_constants,
    coverage_height,
    gammas,
    gap_metrics,
    littlewood_statistic,
)

THEOREM_GATE = 16.0
EIGHTH_PI_THRESHOLD = 5.0


@dataclass(frozen=True)
class Decomposition:
    s_below: float  # gamma <= gamma', all terms negative
    s_at: float  # n(gamma'') / (gamma''^2 - t0^2)
    s_above: float  # gamma'' < gamma <= t0 + cutoff
    total: float
    s_below_strict: float  # gamma < gamma'

    @property
    def parts_sum(self) -> float:
        return math.fsum((self.s_below, self.s_at, self.s_above))

    @property
    def lower_bound_holds(self) -> bool:
        """total > sum over gamma < gamma' plus 1/(gamma''^2 - t0^2)."""
        return self.total > self.s_below_strict + self.s_at


@dataclass
class VerificationReport:
    t0: float
    K: float
    rhs_bound: float
    bound_holds: bool
    margin: float
    decomposition: Optional[Decomposition] = None
    residuals: dict = field(default_factory=dict)  # name -> (raw, scaled)
    empirical_constants: dict = field(default_factory=dict)


def asymmetry_rhs(t0: float) -> float:
    """t0 ln^2 t0 ln ln t0 ln ln ln t0."""
    if not t0 > math.exp(math.e):
        raise DomainError(f"ln_3 t0 must be positive; t0={t0} <= e^e")
    l1 = math.log(t0)
    l2 = math.log(l1)
    return t0 * l1 * l1 * l2 * math.log(l2)


def check_asymmetry_bound(gap: GapRecord) -> VerificationReport:
    rhs = asymmetry_rhs(gap.t0)
    return VerificationReport(gap.t0, gap.K, rhs, gap.K < rhs, rhs / gap.K)


def decompose_sum(
    cp: CriticalPoint,
    zeros: Sequence[Zero],
    cutoff: float,
    *,
    height: Optional[float] = None,
    check_coverage: bool = True,
) -> Decomposition:
    """Split the truncated sum at t0 into the parts below, at and above gamma''."""
    total = ss.truncated_inverse_square_sum(
        cp.t0, zeros, cutoff, t0_tol=cp.tol, height=height, check_coverage=check_coverage
    ).value
    g = gammas(zeros)
    upper = cp.t0 + cutoff
    mult = np.fromiter((z.multiplicity for z in zeros), dtype=float, count=len(zeros))
    split = int(np.searchsorted(g, cp.t0))
    if split >= len(g) or g[split] > upper:
        raise DomainError("no zero above t0 inside the cutoff")
    if (
        split == 0
        or abs(g[split] - cp.gamma_hi) > max(zeros[split].tol, cp.tol)
        or abs(g[split - 1] - cp.gamma_lo) > max(zeros[split - 1].tol, cp.tol)
    ):
        raise NotConsecutive("zero list neighbours of t0 differ from the critical point's")
    terms = mult / ((g - cp.t0) * (g + cp.t0))
    keep_above = (g > g[split]) & (g <= upper)
    below = terms[:split].tolist()
    return Decomposition(
        s_below=math.fsum(below),
        s_at=float(terms[split]),
        s_above=math.fsum(terms[keep_above].tolist()),
        total=total,
        s_below_strict=math.fsum(below[:-1]),
    )


def empirical_constants_report(
    zeros: Sequence[Zero],
    critical_points: Sequence[CriticalPoint],
    t_max: float,
    *,
    height: Optional[float] = None,
) -> dict[str, float]:
    """Observed desk-scale values of each unspecified constant A."""
    if len(zeros) < 10:
        raise InsufficientData(f"need at least 10 zeros, have {len(zeros)}")
    cover = min(coverage_height(zeros, height), t_max)
    counts = counting_constants(zeros, 20, int(math.floor(cover)) - 1)
    little = littlewood_statistic(zeros, 10.0, cover)
    ratios = []
    top = coverage_height(zeros, height)
    for cp in critical_points:
        if cp.t0 <= math.e or cp.t0 + ss.cutoff_T(cp.t0) >= top:
            continue
        ratios.append(ss.empirical_tail_ratio(cp.t0, zeros, top, height=top)["ratio"])
    if not ratios:
        raise InsufficientData("no critical point has coverage beyond t0 + T(t0)")
    return {
        "A_count_local": counts.a_local,
        "A_count_global": counts.a_global,
        "A_littlewood": little.max_product,
        "A_tail": float(max(ratios)),
    }


def windowed_trend(
    t: Sequence[float], values: Sequence[float], start: float, width: float, *, increasing: bool, factor: float = 2.0
) -> tuple[bool, list[tuple[float, float]]]:
    """Trend test on window extremes with a multiplicative tolerance.

    For an increasing trend the minimum of each window must be at least
    ``1/factor`` times the previous window's minimum; for a decreasing trend
    each window maximum must stay within ``factor`` times the previous one.
    """
    t = np.asarray(t, dtype=float)
    v = np.asarray(values, dtype=float)
    stats = []
    lo = start
    while lo < t.max(initial=start):
        sel = (t > lo) & (t <= lo + width)
        if sel.any():
            stats.append((lo, float(v[sel].min() if increasing else v[sel].max())))
        lo += width
    ok = True
    for (_, a), (_, b) in zip(stats, stats[1:]):
        ok &= b >= a / factor if increasing else b <= a * factor
    return bool(ok), stats


@dataclass
class FullReport:
    points: list[VerificationReport]
    checks: dict[str, Optional[bool]]  # None = not enough coverage to run
    globals: dict
    empirical_constants: dict

    @property
    def passed(self) -> bool:
        return all(v is not False for v in self.checks.values())


def verify_all(
    zeros: Sequence[Zero],
    critical_points: Sequence[CriticalPoint],
    *,
    height: Optional[float] = None,
) -> FullReport:
    """Run every formula check the data supports."""
    if len(zeros) < 2:
        raise InsufficientData("no zero data")
    top = coverage_height(zeros, height)
    checks: dict[str, Optional[bool]] = {}
    glob: dict = {}
    points = []
    for cp in critical_points:
        gap = gap_metrics(cp)
        if cp.t0 > math.exp(math.e):
            rep = check_asymmetry_bound(gap)
        else:
            rep = VerificationReport(cp.t0, gap.K, math.nan, False, math.nan)
        rep.empirical_constants["littlewood_product"] = gap.littlewood_product
        big_t = ss.cutoff_T(cp.t0)
        if cp.t0 + big_t <= top:
            e8 = ss.verify_eighth_pi(cp.t0, zeros, t0_tol=cp.tol, height=top)
            q4 = ss.verify_quarter_pi(cp.t0, zeros, t0_tol=cp.tol, height=top)
            rep.residuals["eighth_pi"] = (e8.residual, e8.scaled_residual)
            rep.residuals["quarter_pi_symmetric"] = (q4.details["residual_symmetric"], q4.details["residual_symmetric"] * cp.t0)
            rep.residuals["quarter_pi_positive_only"] = (
                q4.details["residual_positive_only"],
                q4.details["residual_positive_only"] * cp.t0,
            )
            rep.empirical_constants["quarter_pi_matched"] = q4.details["matched"]
            rep.decomposition = decompose_sum(cp, zeros, big_t, height=top)
        points.append(rep)

    checks["interlacing"] = all(cp.is_interior for cp in critical_points) if critical_points else None
    kinds = [cp.kind for cp in critical_points]
    checks["sign_alternation"] = all(a != b for a, b in zip(kinds, kinds[1:])) if len(kinds) > 1 else None
    gated = [p for p in points if p.t0 > THEOREM_GATE]
    checks["asymmetry_bound"] = all(p.bound_holds for p in gated) if gated else None
    late = [p for p in gated if p.t0 > 100]
    if len(late) > 1:
        ok, stats = windowed_trend([p.t0 for p in late], [p.margin for p in late], 100.0, 50.0, increasing=True)
        checks["margin_trend"] = ok
        glob["margin_window_minima"] = stats
    else:
        checks["margin_trend"] = None

    e8 = [p for p in points if "eighth_pi" in p.residuals and 50 <= p.t0 <= 500]
    checks["eighth_pi"] = all(p.residuals["eighth_pi"][1] <= EIGHTH_PI_THRESHOLD for p in e8) if e8 else None
    if e8:
        ok, stats = windowed_trend(
            [p.t0 for p in e8], [p.residuals["eighth_pi"][1] for p in e8], 50.0, 50.0, increasing=False
        )
        checks["eighth_pi_trend"] = ok
        glob["eighth_pi_window_maxima"] = stats
        matched = [p.empirical_constants["quarter_pi_matched"] for p in e8]
        glob["quarter_pi_matched"] = max(set(matched), key=matched.count)
    decs = [p.decomposition for p in points if p.decomposition is not None]
    checks["partition"] = (
        all(abs(d.parts_sum - d.total) <= 1e-12 * max(abs(d.total), 1e-300) for d in decs) if decs else None
    )

    if top >= 1000:
        rc = ss.riemann_constant_sum(zeros, 1000.0, height=top)
        glob["riemann_constant"] = {"value": rc.value, "target": rc.target, "residual": rc.residual}
        checks["riemann_constant"] = rc.residual <= 2e-4
        lw = littlewood_statistic(zeros, 10.0, 1000.0)
        glob["littlewood_max"] = lw.max_product
        checks["littlewood"] = abs(lw.max_product - 6.71) <= 0.05 and all(r[2] <= 8 for r in lw.table)
        cc = counting_constants(zeros, 20, 1000)
        glob["counting"] = {"a_global": cc.a_global, "a_local": cc.a_local}
        checks["counting"] = cc.a_global <= 1 and cc.a_local <= 2 and cc.max_smooth_discrepancy < 3
    else:
        checks["riemann_constant"] = checks["littlewood"] = checks["counting"] = None
    if top >= 5000:
        tails = [ss.empirical_tail_ratio(t0, zeros, 5000.0, height=top) for t0 in (30.0, 100.0, 300.0)]
        glob["tail_shapes"] = tails
        checks["tail_shape"] = all(t["holds"] for t in tails)
    else:
        checks["tail_shape"] = None

    try:
        consts = empirical_constants_report(zeros, critical_points, top, height=top)
    except (InsufficientData, IncompleteTable):
        consts = {}
    return FullReport(points, checks, glob, consts)
