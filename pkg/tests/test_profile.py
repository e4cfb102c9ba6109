"""Tests for the profile potential, branch classification and integration."""

from __future__ import annotations

import math

import numpy as np
import pytest
from hypothesis import assume, given, settings
from hypothesis import strategies as st
from scipy.optimize import brentq

from cmcforms.errors import DomainExit, InvalidInput, NumericalFailure
from cmcforms.moduli import SignCase, thresholds
from cmcforms.profile import (
    IntegrationOptions,
    ProfileParams,
    SolutionTag,
    classify,
    eval_f,
    eval_f_prime,
    find_positive_roots,
    integrate_profile,
    kappas,
    measure_period,
    period_quadrature,
    solution_catalog,
    stationary_offsets,
)

SIGN_REPS = {
    "hyp": (-1, 1, 1),
    "desitter": (1, -1, 1),
    "sphere": (1, 1, 1),
    "antidesitter": (-1, -1, 1),
    "euclidean": (0, 1, 1),
    "minkowski": (0, -1, 1),
}


def params(case: str, n: int, H: float, C: float) -> ProfileParams:
    a, b, d = SIGN_REPS[case]
    return ProfileParams(n=n, a=a, b=b, d=d, H=H, C=C)


param_draw = st.tuples(
    st.integers(min_value=3, max_value=6),
    st.sampled_from(sorted(SIGN_REPS)),
    st.floats(min_value=-3.0, max_value=3.0),
    st.floats(min_value=-4.0, max_value=4.0),
)


def test_params_validation():
    with pytest.raises(InvalidInput):
        ProfileParams(n=2, a=1, b=1, d=1, H=0.0, C=0.0)
    with pytest.raises(InvalidInput):
        ProfileParams(n=4, a=2, b=1, d=1, H=0.0, C=0.0)
    with pytest.raises(InvalidInput):
        ProfileParams(n=4, a=1, b=0, d=1, H=0.0, C=0.0)
    with pytest.raises(InvalidInput):
        ProfileParams(n=4, a=1, b=1, d=1, H=math.inf, C=0.0)


def test_integration_options_validation():
    with pytest.raises(InvalidInput):
        IntegrationOptions(step=0.0)
    with pytest.raises(InvalidInput):
        IntegrationOptions(tol=-1.0)


def test_eval_f_rejects_nonpositive():
    p = params("sphere", 4, 0.5, 3.5)
    with pytest.raises(InvalidInput):
        eval_f(p, 0.0)
    with pytest.raises(InvalidInput):
        eval_f_prime(p, np.array([1.0, -2.0]))


@given(param_draw, st.floats(min_value=0.3, max_value=5.0))
@settings(max_examples=80, deadline=None)
def test_eval_f_matches_direct_formula(drawn, v):
    n, case, H, C = drawn
    p = params(case, n, H, C)
    x = v ** (-n)
    direct = C - p.d * v * v * (p.a + p.b * (H + x) ** 2)
    assert eval_f(p, v) == pytest.approx(direct, rel=1e-13, abs=1e-13)


@given(param_draw, st.floats(min_value=0.3, max_value=5.0))
@settings(max_examples=80, deadline=None)
def test_eval_f_prime_matches_finite_difference(drawn, v):
    n, case, H, C = drawn
    p = params(case, n, H, C)
    h = 1.0e-4 * v
    stencil = np.array([v - 2 * h, v - h, v + h, v + 2 * h])
    fm2, fm1, fp1, fp2 = eval_f(p, stencil)
    fd = (fm2 - 8.0 * fm1 + 8.0 * fp1 - fp2) / (12.0 * h)
    exact = eval_f_prime(p, v)
    assert fd == pytest.approx(exact, abs=1e-6 * (1.0 + abs(exact)))


@given(param_draw, st.floats(min_value=0.3, max_value=5.0))
@settings(max_examples=80, deadline=None)
def test_potential_slope_equals_curvature_product(drawn, v):
    # The derivative of the potential is tied to the second fundamental
    # form through f'(v) = -2 v (ad + bd k1 k2); this is the identity the
    # integration kernel relies on.
    n, case, H, C = drawn
    p = params(case, n, H, C)
    k1, k2 = kappas(p, v)
    expected = -2.0 * v * (p.ad + p.bd * k1 * k2)
    assert eval_f_prime(p, v) == pytest.approx(expected, rel=1e-12, abs=1e-12)


@given(
    st.integers(min_value=3, max_value=9),
    st.sampled_from([-1, 0, 1]),
    st.floats(min_value=-3.0, max_value=3.0),
)
@settings(max_examples=120, deadline=None)
def test_stationary_offsets_against_polynomial_roots(n, ab, H):
    got = stationary_offsets(n, ab, H)
    coeffs = [n - 1.0, (n - 2.0) * H, -(H * H + ab)]
    rts = np.roots(coeffs)
    if np.iscomplexobj(rts) and np.max(np.abs(rts.imag)) > 1e-7 * (1 + abs(H)):
        assert got is None
        return
    rts = np.sort(rts.real)
    if got is None:
        # Only acceptable when the roots are (nearly) complex; near the seam
        # both branches agree to the snap width.
        assert abs(rts[1] - rts[0]) < 1e-5
        return
    x_hi, x_lo = got
    assert x_lo == pytest.approx(rts[0], rel=1e-9, abs=1e-9)
    assert x_hi == pytest.approx(rts[1], rel=1e-9, abs=1e-9)


def test_stationary_offsets_seam_snap():
    # Exactly at (and a few ulps around) the curvature where both offsets
    # merge, the quadratic discriminant rounds slightly negative; the snap
    # must still report the coincident offset pair.
    seam = -math.sqrt(3.0) / 2.0
    for H in (seam, seam * (1.0 + 1e-14), seam * (1.0 - 1e-14)):
        got = stationary_offsets(4, -1, H)
        assert got is not None
        x_lo, x_hi = got
        assert x_lo == pytest.approx(x_hi, abs=1e-6)
    assert stationary_offsets(4, -1, -0.7) is None


@given(param_draw)
@settings(max_examples=100, deadline=None)
def test_find_positive_roots_against_dense_scan(drawn):
    n, case, H, C = drawn
    assume(abs(C) >= 1e-6 or C == 0.0)
    p = params(case, n, H, C)
    roots = find_positive_roots(p)
    for v, mult in roots:
        assert v > 0.0 and mult >= 1
        assert abs(eval_f(p, v)) < 1e-7 * (1.0 + abs(C))

    grid = np.geomspace(1e-3, 80.0, 8000)
    vals = eval_f(p, grid)
    oracle = []
    for i in range(len(grid) - 1):
        if vals[i] == 0.0:
            continue
        if vals[i] * vals[i + 1] < 0.0:
            root = brentq(lambda v: eval_f(p, v), grid[i], grid[i + 1])
            if root < 50.0:
                oracle.append(root)
    odd = [v for v, m in roots if m % 2 == 1 and v < 50.0]
    if len(roots) >= 2 and min(
        b - a for (a, _), (b, _) in zip(roots, roots[1:])
    ) < 3e-2:
        return  # scan resolution cannot separate near-coincident roots
    assert len(odd) == len(oracle)
    for lib, ora in zip(sorted(odd), sorted(oracle)):
        assert lib == pytest.approx(ora, rel=1e-7, abs=1e-9)


def test_double_root_detected_on_contact_curve():
    thr = thresholds(SignCase.HYP, 4, -0.9)
    p = params("hyp", 4, -0.9, thr["r2"])
    roots = find_positive_roots(p)
    mults = {round(v, 6): m for v, m in roots}
    assert mults[round(thr["q2"], 6)] == 2
    assert any(m == 1 for m in mults.values())


def test_triple_root_at_coincident_contact():
    H = -math.sqrt(3.0) / 2.0
    thr = thresholds(SignCase.HYP, 4, H)
    assert thr["r1"] == pytest.approx(thr["r2"], abs=1e-9)
    p = params("hyp", 4, H, thr["r1"])
    roots = find_positive_roots(p)
    assert len(roots) == 1
    v, mult = roots[0]
    assert mult == 3
    assert v == pytest.approx(thr["q1"], rel=1e-7)
    tags = [e.tag for e in solution_catalog(p)]
    assert tags == [SolutionTag.Type2_UnboundedNoMin, SolutionTag.Equilibrium]


def test_catalog_periodic_plus_unbounded_coexist():
    p = params("hyp", 4, -0.9, -1.15)
    entries = solution_catalog(p)
    tags = [e.tag for e in entries]
    assert tags == [SolutionTag.Type1_Periodic, SolutionTag.Type3_UnboundedWithMin]
    lo, hi = entries[0].interval
    assert 0.0 < lo < hi < entries[1].interval[0]
    assert math.isinf(entries[1].interval[1])
    assert entries[0].root_multiplicities == (1, 1)
    assert entries[1].root_multiplicities == (1, 0)


def test_catalog_drops_interval_touching_zero():
    # Positive cell with lower end at 0: no complete solution lives there.
    p = params("desitter", 4, 0.0, 0.0)
    assert solution_catalog(p) == []


def test_classify_uses_hint_and_snaps():
    p = params("hyp", 4, -0.9, -1.15)
    assert classify(p, 1.2).tag is SolutionTag.Type1_Periodic
    assert classify(p, 2.5).tag is SolutionTag.Type3_UnboundedWithMin
    assert classify(p).tag is SolutionTag.Type1_Periodic
    with pytest.raises(InvalidInput):
        classify(p, -1.0)


def test_classify_prefers_equilibrium_at_multiple_root():
    thr = thresholds(SignCase.HYP, 4, -0.9)
    p = params("hyp", 4, -0.9, thr["r1"])
    at_root = classify(p, thr["q1"])
    assert at_root.tag is SolutionTag.Equilibrium
    nudged = classify(p, thr["q1"] * (1.0 + 1e-13))
    assert nudged.tag is SolutionTag.Equilibrium
    off_root = classify(p, thr["q1"] * 1.5)
    assert off_root.tag is not SolutionTag.Equilibrium


def test_classification_stable_under_tiny_energy_perturbation():
    base = params("hyp", 4, -0.9, -1.15)
    tags = [e.tag for e in solution_catalog(base)]
    for eps in (-1e-12, 1e-12):
        p = params("hyp", 4, -0.9, -1.15 + eps)
        assert [e.tag for e in solution_catalog(p)] == tags


def test_classify_reports_no_solution():
    thr = thresholds(SignCase.SPHERE, 4, 0.5)
    p = params("sphere", 4, 0.5, thr["r1"] - 1.0)
    assert solution_catalog(p) == []
    assert classify(p).tag is SolutionTag.NoPositiveSolution


def test_integrate_periodic_well_energy_and_transport():
    p = params("hyp", 4, -0.9, -1.15)
    sol = integrate_profile(p, 1.2, (-10.0, 10.0))
    assert sol.type.tag is SolutionTag.Type1_Periodic
    assert not sol.truncated
    assert sol.energy_drift < 1e-10
    lo, hi = sol.type.interval
    assert np.all(sol.g >= lo - 1e-9)
    assert np.all(sol.g <= hi + 1e-9)
    # Transport identity along the flow: (g k1)' = k2 g'.
    k1, k2 = kappas(p, sol.g)
    lhs = np.gradient(sol.g * k1, sol.t_grid)
    rhs = k2 * sol.g_prime
    interior = slice(2, -2)
    assert np.max(np.abs(lhs[interior] - rhs[interior])) < 1e-4


def test_integrate_requires_span_containing_zero():
    p = params("hyp", 4, -0.9, -1.15)
    with pytest.raises(InvalidInput):
        integrate_profile(p, 1.2, (1.0, 2.0))
    with pytest.raises(InvalidInput):
        integrate_profile(p, -0.5)


def test_integrate_raises_domain_exit_when_profile_hits_zero():
    p = params("desitter", 4, 0.0, 0.0)
    with pytest.raises(DomainExit):
        integrate_profile(p, 0.5, (-3.0, 1.0))


def test_integrate_truncates_on_growth():
    p = params("hyp", 4, 0.0, 0.0)
    sol = integrate_profile(p, 1.2, (-1.0, 16.0))
    assert sol.truncated
    assert sol.g.max() >= 1.0e6
    assert sol.t_grid[-1] < 16.0 - 1e-9
    assert sol.t_grid[0] == pytest.approx(-1.0)


def test_integrate_flags_energy_drift_with_coarse_step():
    p = params("sphere", 4, 0.5, 3.5)
    with pytest.raises(NumericalFailure):
        integrate_profile(p, 1.0, (-10.0, 10.0), IntegrationOptions(step=0.25))


def test_period_measurement_agrees_with_quadrature():
    p = params("hyp", 4, -0.9, -1.15)
    sol = integrate_profile(p, 1.2, (-10.0, 10.0))
    v1, v2 = sol.type.interval
    pq = period_quadrature(p, v1, v2)
    pm = measure_period(sol)
    assert pm == pytest.approx(pq, rel=1e-6)
    assert pq == pytest.approx(6.0091535897, rel=1e-8)


def test_period_quadrature_rejects_bad_interval():
    p = params("hyp", 4, -0.9, -1.15)
    with pytest.raises(InvalidInput):
        period_quadrature(p, 2.0, 1.0)
