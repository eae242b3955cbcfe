import math
import warnings

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from zra import root_atlas as ra
from zra import zeta_core as zc
from zra.errors import (
    DomainError,
    IncompleteTable,
    InsufficientZeros,
    MultipleCritical,
    NoSignChange,
    NotConsecutive,
    StepTooCoarse,
    TolTooSmall,
)


# -- scanning --------------------------------------------------------------

def test_scan_linear_function():
    assert ra.scan_sign_changes(10, 20, 1, f=lambda t: t - 15) == [(14.0, 15.0)]


def test_scan_first_two_zeros():
    brackets = ra.scan_sign_changes(10, 25, 0.05)
    assert len(brackets) == 2
    assert brackets[0][0] < 14.1347 < brackets[0][1]
    assert brackets[1][0] < 21.0220 < brackets[1][1]


def test_scan_between_first_two_zeros_is_empty():
    assert ra.scan_sign_changes(15, 20, 0.05) == []


def test_scan_rejects_bad_ranges():
    with pytest.raises(DomainError):
        ra.scan_sign_changes(20, 10, 0.05)
    with pytest.raises(DomainError):
        ra.scan_sign_changes(0, 10, 0.05)


def test_coarse_step_warns():
    with pytest.warns(StepTooCoarse):
        ra.scan_sign_changes(1000, 1010, 1.0)


@given(st.floats(min_value=11.0, max_value=19.0), st.sampled_from([0.1, 0.25, 1.0]))
def test_scan_brackets_contain_root_of_linear_function(root, step):
    brackets = ra.scan_sign_changes(10.0, 20.0, step, f=lambda t: t - root)
    assert len(brackets) == 1
    a, b = brackets[0]
    assert a < root <= b
    assert b - a == pytest.approx(step)


def test_default_step():
    assert ra.default_step(500) == 0.05
    assert ra.default_step(6200) < 0.05
    assert ra.default_step(6200) == pytest.approx(0.05 * math.log(1000) / math.log(6200))


# -- refinement ------------------------------------------------------------

def test_refine_first_zero(oracle_zeros):
    z = ra.refine_zero((14, 15), 1e-8)
    assert z.multiplicity == 1 and z.tol == 1e-8
    assert z.gamma == pytest.approx(14.13472514, abs=1e-8)
    assert z.gamma == pytest.approx(oracle_zeros[0], abs=1e-8)


def test_refine_second_zero(oracle_zeros):
    z = ra.refine_zero((20, 22), 1e-8, index=2)
    assert z.index == 2
    assert z.gamma == pytest.approx(21.02203964, abs=1e-8)


def test_refine_without_sign_change():
    with pytest.raises(NoSignChange):
        ra.refine_zero((15, 16))


def test_refine_tolerance_below_resolution():
    with pytest.raises(TolTooSmall):
        ra.refine_zero((14, 15), 1e-16)


def test_bisect_many_is_vectorised():
    roots = ra.bisect_many(lambda x: x * x - 2.0, np.array([1.0, -2.0]), np.array([2.0, -1.0]), 1e-12)
    assert roots == pytest.approx([math.sqrt(2), -math.sqrt(2)], abs=1e-12)


def test_find_zeros_indices_from_offset(zeros_1000):
    part = ra.find_zeros(100.0, 150.0)
    assert part[0].index == 30
    by_index = {z.index: z.gamma for z in zeros_1000}
    for z in part:
        assert z.gamma == pytest.approx(by_index[z.index], abs=2e-9)


def test_first_hundred_zeros_match_oracle(zeros_1000, oracle_zeros):
    got = np.array([z.gamma for z in zeros_1000[:100]])
    assert np.max(np.abs(got - oracle_zeros[:100])) <= 1e-6


def test_zeros_strictly_increasing(full_zeros):
    g = ra.gammas(full_zeros)
    assert np.all(np.diff(g) > 0)
    assert [z.index for z in full_zeros] == list(range(1, len(full_zeros) + 1))


# -- stationary points -----------------------------------------------------

def test_first_critical_point(reference):
    z1, z2 = ra.refine_zero((14, 15), 1e-10, index=1), ra.refine_zero((20, 22), 1e-10, index=2)
    cp = ra.locate_critical_point(z1, z2)
    ref = reference["critical_points"][0]
    assert cp.kind == "max"
    assert z1.gamma < cp.t0 < z2.gamma
    assert cp.t0 == pytest.approx(ref["t0"], abs=1e-8)
    assert cp.t0 - cp.gamma_lo == pytest.approx(3.7479, abs=1e-3)
    assert cp.gamma_hi - cp.t0 == pytest.approx(3.1395, abs=1e-3)
    assert cp.z_value == pytest.approx(ref["z"], abs=1e-6)


@pytest.mark.parametrize("k", range(7))
def test_critical_points_match_oracle(reference, full_zeros, critical_500, k):
    ref = reference["critical_points"][k]
    cp = critical_500[ref["gap"] - 1]
    assert cp.gamma_lo == pytest.approx(ref["gamma_lo"], abs=1e-7)
    assert cp.t0 == pytest.approx(ref["t0"], abs=1e-7)


def test_reversed_pair_is_rejected():
    z1, z2 = ra.Zero(1, 14.134725142, 1e-9), ra.Zero(2, 21.022039639, 1e-9)
    with pytest.raises(NotConsecutive):
        ra.locate_critical_point(z2, z1)


def test_non_adjacent_pair_is_rejected():
    z1, z3 = ra.Zero(1, 14.134725142, 1e-9), ra.Zero(3, 25.010857580, 1e-9)
    with pytest.raises(NotConsecutive):
        ra.locate_critical_point(z1, z3)
    with pytest.raises(NotConsecutive):
        ra.critical_points([z1, z3])


def test_multiple_stationary_points_are_flagged(monkeypatch):
    # a function with two interior extrema between consecutive roots 0.5 and 3.5 (shifted)
    f = lambda t: np.sin(np.pi * (t - 10.5) / 3) * (1.2 + np.cos(2 * np.pi * (t - 10.5)))
    monkeypatch.setattr(ra, "hardy_Z", lambda t, cfg=None: f(np.asarray(t)))
    monkeypatch.setattr(ra, "hardy_Z_prime_array", lambda t, cfg=None: (f(t + 1e-6) - f(t - 1e-6)) / 2e-6)
    with pytest.warns(MultipleCritical):
        (cp,) = ra._critical_between(np.array([[10.5, 13.5]]), 1e-9, zc.DEFAULT_CONFIG)
    assert cp.diagnostics and cp.diagnostics[0].startswith("MultipleCritical")
    assert 10.5 < cp.t0 < 13.5


def test_interlacing_up_to_500(full_zeros, critical_500):
    gaps = [(a, b) for a, b in zip(full_zeros, full_zeros[1:]) if b.gamma <= 500]
    assert len(critical_500) == len(gaps)
    for (a, b), cp in zip(gaps, critical_500):
        assert cp.gamma_lo == a.gamma and cp.gamma_hi == b.gamma
        assert a.gamma + cp.tol < cp.t0 < b.gamma - cp.tol
        assert not cp.diagnostics


def test_kinds_alternate(critical_500):
    kinds = [cp.kind for cp in critical_500]
    assert all(a != b for a, b in zip(kinds, kinds[1:]))


# -- gap metrics -----------------------------------------------------------

def test_gap_metrics_midpoint():
    cp = ra.CriticalPoint(20.0, 18.0, 22.0, 1e-9, 1.0, "max")
    g = ra.gap_metrics(cp)
    assert g.K == 1.0 and g.Q == g.m == 2.0


def test_gap_metrics_first_gap(critical_500):
    g = ra.gap_metrics(critical_500[0])
    assert g.Q == pytest.approx(3.7479, abs=1e-3)
    assert g.m == pytest.approx(3.1395, abs=1e-3)
    assert g.K == pytest.approx(1.1938, abs=1e-3)


def test_gap_metrics_domain():
    with pytest.raises(DomainError):
        ra.gap_metrics(ra.CriticalPoint(2.5, 2.0, 3.0, 1e-9, 1.0, "max"))


def test_partition_identity(critical_500):
    for cp in critical_500:
        g = ra.gap_metrics(cp)
        assert g.Q >= g.m > 0 and g.K >= 1
        assert abs(g.Q + g.m - (cp.gamma_hi - cp.gamma_lo)) <= 2 * cp.tol


# -- Littlewood and counting -----------------------------------------------

def test_littlewood_statistic(zeros_1000, oracle_zeros):
    res = ra.littlewood_statistic(zeros_1000, 10, 1000)
    assert res.max_product == pytest.approx(6.71, abs=0.05)
    assert res.argmax_gamma == pytest.approx(oracle_zeros[0], abs=1e-6)
    assert all(0 < row[2] <= 8 for row in res.table)
    late = ra.littlewood_statistic(zeros_1000, 500, 1000)
    assert late.max_product <= res.max_product
    # independent recomputation from the oracle table
    g = np.array(oracle_zeros)
    assert res.max_product == pytest.approx(np.max(np.diff(g) * np.log(np.log(g[:-1]))), abs=1e-6)


def test_littlewood_needs_two_zeros():
    with pytest.raises(InsufficientZeros):
        ra.littlewood_statistic([ra.Zero(1, 14.134725142, 1e-9)], 10, 20)
    with pytest.raises(DomainError):
        ra.littlewood_statistic([], 2, 20)


def test_count_zeros_examples(zeros_1000):
    assert ra.count_zeros(zeros_1000, 100, height=1000).n == 29
    assert ra.count_zeros(zeros_1000, 100, height=1000).smooth_estimate == pytest.approx(29.0, abs=0.01)
    assert ra.count_zeros(zeros_1000, 0, height=1000).n == 0
    assert ra.count_zeros(zeros_1000, 14.0, height=1000).n == 0
    assert ra.count_zeros(zeros_1000, 15.0, height=1000).n == 1
    assert ra.count_zeros([], 0.0).n == 0


def test_count_zeros_detects_gaps_in_table(zeros_1000):
    holed = zeros_1000[:300] + zeros_1000[301:]
    with pytest.raises(IncompleteTable):
        ra.count_zeros(holed, 900, height=1000)
    with pytest.raises(IncompleteTable):
        ra.count_zeros(zeros_1000, 1200, height=1000)


def test_counting_consistency_on_integer_grid(zeros_1000):
    g = ra.gammas(zeros_1000)
    t = np.arange(20, 1001, dtype=float)
    n = np.searchsorted(g, t, side="right")
    assert np.all(np.abs(n - ra.smooth_count(t)) < 3)


def test_counting_constants(zeros_1000):
    c = ra.counting_constants(zeros_1000, 20, 999)
    assert c.a_global <= 1
    assert c.a_global == pytest.approx(max(
        np.searchsorted(ra.gammas(zeros_1000), t, side="right") / (t * math.log(t)) for t in range(20, 1000)
    ))
    assert c.a_local <= 2
