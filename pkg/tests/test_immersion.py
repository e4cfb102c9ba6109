"""Tests for immersion assembly, curvature invariants and verification."""

from __future__ import annotations

import math

import numpy as np
import pytest

from cmcforms.errors import InvalidInput
from cmcforms.immersion import (
    ConstructionCase,
    VerificationReport,
    build_immersion,
    build_point,
    curvature_scalars,
    gauss_map,
    verify,
)
from cmcforms.metric_core import inner
from cmcforms.moduli import SignCase, params_for
from cmcforms.profile import integrate_profile, kappas


def test_construction_case_selection():
    assert ConstructionCase.for_params(
        params_for(SignCase.HYP, 4, -0.9, -1.15)
    ) is ConstructionCase.C_NONZERO_CURVED
    assert ConstructionCase.for_params(
        params_for(SignCase.HYP, 4, -1.0, 0.0)
    ) is ConstructionCase.C_ZERO_CURVED
    assert ConstructionCase.for_params(
        params_for(SignCase.EUCLIDEAN, 4, -1.0, 0.3)
    ) is ConstructionCase.C_NONZERO_FLAT
    assert ConstructionCase.for_params(
        params_for(SignCase.MINKOWSKI, 4, -0.5, 0.0)
    ) is ConstructionCase.C_ZERO_FLAT


def test_build_immersion_shapes_and_determinism():
    p = params_for(SignCase.HYP, 4, -0.9, -1.15)
    sol = integrate_profile(p, 1.2, (-2.0, 2.0))
    spec = build_immersion(p, 0, sol, count=6, seed=5)
    N = p.n + 2
    assert spec.metric.dim == N
    assert spec.s_points.shape == (6, N)
    assert spec.sample_basis.shape == (p.n, N)
    assert spec.case is ConstructionCase.C_NONZERO_CURVED
    again = build_immersion(p, 0, sol, count=6, seed=5)
    assert np.array_equal(spec.s_points, again.s_points)
    other = build_immersion(p, 0, sol, count=6, seed=6)
    assert not np.array_equal(spec.s_points, other.s_points)


def test_fiber_points_sit_on_their_level_set():
    p = params_for(SignCase.DESITTER, 4, -0.9, 1.14)
    sol = integrate_profile(p, 1.6, (-2.0, 2.0))
    spec = build_immersion(p, 1, sol, count=10, seed=2)
    target = float(p.d) * (1.0 if p.C > 0.0 else -1.0)
    for y in spec.s_points:
        assert inner(spec.metric, y, y) == pytest.approx(target, abs=1e-12)


def test_points_and_normals_satisfy_algebraic_constraints():
    p = params_for(SignCase.HYP, 4, -0.9, -1.15)
    sol = integrate_profile(p, 1.2, (-2.0, 2.0))
    spec = build_immersion(p, 0, sol, count=5, seed=1)
    for ti in (0, len(sol.t_grid) // 2, len(sol.t_grid) - 1):
        for y in spec.s_points:
            phi = build_point(spec, ti, y)
            nu = gauss_map(spec, ti, y)
            assert inner(spec.metric, phi, phi) == pytest.approx(p.a, abs=1e-9)
            assert inner(spec.metric, nu, nu) == pytest.approx(p.b, abs=1e-9)
            assert inner(spec.metric, nu, phi) == pytest.approx(0.0, abs=1e-9)


def test_curvature_scalars_identities():
    for case in (SignCase.HYP, SignCase.SPHERE, SignCase.MINKOWSKI):
        p = params_for(case, 5, -0.7, 0.4)
        for g in (0.6, 1.0, 1.7, 3.2):
            out = curvature_scalars(p, g)
            k1, k2 = kappas(p, g)
            n = p.n
            assert out["normA_sq"] == pytest.approx(
                (n - 1) * k1 * k1 + k2 * k2, rel=1e-12
            )
            assert out["normPhi"] ** 2 == pytest.approx(
                out["normA_sq"] - n * p.H * p.H, rel=1e-10, abs=1e-12
            )
            intrinsic = p.a + p.b * (n * n * p.H * p.H - out["normA_sq"]) / (
                n * (n - 1.0)
            )
            assert out["scalar_curv"] == pytest.approx(intrinsic, rel=1e-12, abs=1e-12)


def test_curvature_scalars_vectorized_and_validated():
    p = params_for(SignCase.SPHERE, 4, 0.5, 3.5)
    arr = np.array([0.8, 1.0, 1.3])
    out = curvature_scalars(p, arr)
    assert out["normA_sq"].shape == (3,)
    with pytest.raises(InvalidInput):
        curvature_scalars(p, -1.0)


@pytest.mark.parametrize(
    "case, k, H, C, g0",
    [
        (SignCase.HYP, 0, -0.9, -1.15, 1.2),
        (SignCase.HYP, 0, -1.0, 0.0, 1.2),
        (SignCase.EUCLIDEAN, 0, -1.0, 0.3, 1.05),
        (SignCase.MINKOWSKI, 1, -0.5, 0.0, 1.3),
    ],
)
def test_verification_confirms_constructions(case, k, H, C, g0):
    p = params_for(case, 4, H, C)
    sol = integrate_profile(p, g0, (-2.0, 2.0))
    spec = build_immersion(p, k, sol, count=6, seed=0)
    report = verify(spec)
    assert isinstance(report, VerificationReport)
    assert report.max_ambient_residual < 1e-7
    assert report.max_gauss_norm_residual < 1e-7
    assert report.max_tangency_residual < 1e-7
    assert report.kappa1_err < 1e-4
    assert report.kappa2_err < 1e-4
    assert report.mean_curvature_err < 1e-4
    assert report.mean_curvature_std < 1e-5
    assert report.fd_step == 1e-4


def test_verify_subsampling_controls_work():
    p = params_for(SignCase.SPHERE, 4, 0.5, 3.5)
    sol = integrate_profile(p, 1.0, (-1.0, 1.0))
    spec = build_immersion(p, 0, sol, count=4, seed=0)
    report = verify(spec, t_indices=[0, len(sol.t_grid) - 1], y_indices=[0, 2])
    assert report.max_ambient_residual < 1e-7
    assert report.mean_curvature_err < 1e-4


def test_verify_fd_step_scaling():
    # Quartic convergence of the Richardson stencil: a 10x larger step may
    # cost up to four orders, still far below the acceptance level.
    p = params_for(SignCase.HYP, 4, -0.9, -1.15)
    sol = integrate_profile(p, 1.2, (-1.0, 1.0))
    spec = build_immersion(p, 0, sol, count=4, seed=0)
    fine = verify(spec, fd_step=1e-4)
    coarse = verify(spec, fd_step=1e-3)
    assert coarse.fd_step == 1e-3
    assert coarse.kappa1_err < 1e-3
    assert fine.kappa1_err <= max(coarse.kappa1_err * 10.0, 1e-6)
