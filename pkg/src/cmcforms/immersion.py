"""Explicit immersions and their numerical verification.

A classified profile plus an integrated frame produce an explicit immersion
into the flat space carrying the space form, together with its Gauss map.
The fiber through each profile point is a quadric (or a flat piece when the
energy vanishes) in the directions orthogonal to the frame span, shifted
along the conserved vector.

verify() treats the produced maps as black boxes: all tangent vectors and
normal derivatives are obtained by Richardson-extrapolated finite
differences, in time by re-stepping the integrator kernel and across the
fiber along curves that stay exactly on the quadric.  The recovered shape
operator is compared against the predicted principal curvatures.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

import numpy as np

from ._backend import get_backend
from .errors import DegenerateSample, InvalidInput, NumericalFailure
from .frame import FrameTrajectory, integrate_frame
from .metric_core import (
    SignatureMetric,
    SignTriple,
    SpaceFormSpec,
    inner,
    orth_complement_basis,
    pick_frame,
    sample_quadric,
)
from .profile import G_TRUNCATION, ProfileParams, ProfileSolution, kappas

PROJECTION_EPS = 1.0e-12
GRAM_DET_EPS = 1.0e-10


class ConstructionCase(Enum):
    """Which of the four construction formulas applies."""

    C_ZERO_CURVED = "CzeroAnzero"
    C_ZERO_FLAT = "CzeroAzero"
    C_NONZERO_CURVED = "CnonzeroAnzero"
    C_NONZERO_FLAT = "CnonzeroAzero"

    @classmethod
    def for_params(cls, p: ProfileParams) -> "ConstructionCase":
        if p.C == 0.0:
            return cls.C_ZERO_CURVED if p.a != 0 else cls.C_ZERO_FLAT
        return cls.C_NONZERO_CURVED if p.a != 0 else cls.C_NONZERO_FLAT


@dataclass
class ImmersionSpec:
    """Everything needed to evaluate one constructed immersion.

    s_points holds fiber sample points as rows; sample_basis the orthogonal
    directions spanning the fiber (complement directions plus, for nonzero
    energy, the rescaled conserved vector).
    """

    params: ProfileParams
    case: ConstructionCase
    frame: FrameTrajectory
    s_points: np.ndarray
    space: SpaceFormSpec
    metric: SignatureMetric
    profile: ProfileSolution
    sample_basis: np.ndarray


@dataclass(frozen=True)
class VerificationReport:
    max_ambient_residual: float
    max_gauss_norm_residual: float
    max_tangency_residual: float
    kappa1_err: float
    kappa2_err: float
    mean_curvature_err: float
    fd_step: float
    mean_curvature_std: float


def build_immersion(
    p: ProfileParams,
    k: int,
    sol: ProfileSolution,
    count: int = 8,
    seed: int = 0,
    frame_tol: float = 1.0e-8,
) -> ImmersionSpec:
    """Assemble an immersion from a profile solution in the space form of
    signature index k.

    Picks the standard frame directions for the signs of p, integrates the
    frame along sol, builds the fiber sampling basis and draws count fiber
    points with the given seed.
    """
    space = SpaceFormSpec(p.n, k, p.a)
    metric = space.embedding_metric()
    units = pick_frame(space, SignTriple(p.a, p.b, p.d))
    u = np.vstack(units)
    traj = integrate_frame(p, sol, frame_vectors=u, tol=frame_tol)
    comp = orth_complement_basis(metric, units)
    case = ConstructionCase.for_params(p)
    if p.C != 0.0:
        e_last = traj.rho0 / math.sqrt(abs(p.C))
        basis = comp + [e_last]
        target = float(p.d) * (1.0 if p.C > 0.0 else -1.0)
        pts = sample_quadric(metric, basis, target, count, seed)
    else:
        basis = comp
        pts = sample_quadric(metric, basis, "flat", count, seed)
    return ImmersionSpec(
        params=p,
        case=case,
        frame=traj,
        s_points=np.vstack(pts),
        space=space,
        metric=metric,
        profile=sol,
        sample_basis=np.vstack(basis),
    )


def _ambient_parts(spec: ImmersionSpec, t_index: int):
    u = spec.frame.frame_vectors
    al = spec.frame.coeffs[t_index, 0, :] @ u
    be = spec.frame.coeffs[t_index, 2, :] @ u
    return al, be


def _phi_raw(spec: ImmersionSpec, g: float, al: np.ndarray, y: np.ndarray) -> np.ndarray:
    p = spec.params
    if p.C != 0.0:
        return (g / math.sqrt(abs(p.C))) * y + al + (g / p.C) * spec.frame.rho0
    yy = inner(spec.metric, y, y)
    return y + al + (p.d * yy / (2.0 * g)) * spec.frame.rho0


def _nu_raw(
    spec: ImmersionSpec, g: float, al: np.ndarray, be: np.ndarray, y: np.ndarray
) -> np.ndarray:
    p = spec.params
    k1, _ = kappas(p, g)
    if p.C != 0.0:
        return (-k1 * g / math.sqrt(abs(p.C))) * y + be - (k1 * g / p.C) * spec.frame.rho0
    phi = _phi_raw(spec, g, al, y)
    return k1 * al + be - k1 * phi


def build_point(spec: ImmersionSpec, t_index: int, y: np.ndarray) -> np.ndarray:
    """Immersion point at grid index t_index and fiber point y."""
    g = float(spec.profile.g[t_index])
    al, _ = _ambient_parts(spec, t_index)
    return _phi_raw(spec, g, al, np.asarray(y, dtype=float))


def gauss_map(spec: ImmersionSpec, t_index: int, y: np.ndarray) -> np.ndarray:
    """Unit normal at grid index t_index and fiber point y."""
    g = float(spec.profile.g[t_index])
    al, be = _ambient_parts(spec, t_index)
    return _nu_raw(spec, g, al, be, np.asarray(y, dtype=float))


def curvature_scalars(p: ProfileParams, g) -> dict[str, float]:
    """Pointwise curvature invariants at profile value g.

    normA_sq is the squared norm of the shape operator, normPhi the norm of
    its traceless part, scalar_curv the normalized scalar curvature of the
    induced metric.
    """
    arr = np.asarray(g, dtype=float)
    if np.any(arr <= 0.0):
        raise InvalidInput("profile values must be positive")
    n = p.n
    x = arr ** (-float(n))
    out = {
        "normA_sq": n * (n - 1) * x * x + n * p.H * p.H,
        "normPhi": math.sqrt(n * (n - 1.0)) * x,
        "scalar_curv": p.a + p.b * p.H * p.H - p.b * x * x,
    }
    if arr.ndim == 0:
        return {key: float(val) for key, val in out.items()}
    return out


def _state_at_offset(spec: ImmersionSpec, t_index: int, dt: float):
    kern = get_backend()
    p = spec.params
    g0 = float(spec.profile.g[t_index])
    p0 = float(spec.profile.g_prime[t_index])
    c0 = tuple(spec.frame.coeffs[t_index].reshape(-1))
    g_a, _, c_a, code = kern.run_combined(
        float(p.n), float(p.ad), float(p.bd), p.H, g0, p0, c0, dt, 1, G_TRUNCATION
    )
    if code != 0 or len(g_a) != 2:
        raise NumericalFailure(
            "cannot take a finite difference step of %g at t=%g"
            % (dt, float(spec.profile.t_grid[t_index]))
        )
    u = spec.frame.frame_vectors
    m = u.shape[0]
    row = c_a[1].reshape(3, m)
    return float(g_a[1]), row[0] @ u, row[2] @ u


def _fiber_directions(spec: ImmersionSpec, y: np.ndarray):
    """Orthonormal-ish tangent directions of the fiber at y.

    Quadric fibers project the sampling basis onto the complement of y and
    orthogonalize; flat fibers use the sampling basis itself.
    """
    p = spec.params
    metric = spec.metric
    wanted = p.n - 1
    if p.C == 0.0:
        return [np.array(row) for row in spec.sample_basis], [
            inner(metric, row, row) for row in spec.sample_basis
        ]
    eps_y = inner(metric, y, y)
    if abs(eps_y) < PROJECTION_EPS:
        raise DegenerateSample("fiber point is numerically null")
    dirs: list[np.ndarray] = []
    norms: list[float] = []
    for row in spec.sample_basis:
        w = row - (inner(metric, row, y) / eps_y) * y
        for e, q in zip(dirs, norms):
            w = w - (inner(metric, w, e) / q) * e
        q = inner(metric, w, w)
        if abs(q) < PROJECTION_EPS:
            continue
        w = w / math.sqrt(abs(q))
        dirs.append(w)
        norms.append(inner(metric, w, w))
        if len(dirs) == wanted:
            break
    if len(dirs) < wanted:
        raise DegenerateSample(
            "only %d of %d fiber directions at this sample" % (len(dirs), wanted)
        )
    return dirs, norms


def _fiber_curve(spec: ImmersionSpec, y, w, sigma: float, s: float) -> np.ndarray:
    p = spec.params
    if p.C == 0.0:
        return y + s * w
    eps_y = float(p.d) * (1.0 if p.C > 0.0 else -1.0)
    return (y + s * w) / math.sqrt(1.0 + eps_y * sigma * s * s)


def _richardson(f, h: float) -> np.ndarray:
    d1 = (f(h) - f(-h)) / (2.0 * h)
    d2 = (f(0.5 * h) - f(-0.5 * h)) / h
    return (4.0 * d2 - d1) / 3.0


def verify(
    spec: ImmersionSpec,
    fd_step: float = 1.0e-4,
    t_indices=None,
    y_indices=None,
) -> VerificationReport:
    """Check the constructed immersion by finite differences.

    For every sampled (t, y) pair the report accumulates the worst residual
    of the ambient constraint, of the unit normal condition, and of the
    orthogonality between the normal and all numerically obtained tangent
    directions, together with the worst principal curvature and mean
    curvature recovery errors.
    """
    p = spec.params
    metric = spec.metric
    n = p.n
    if t_indices is None:
        total = len(spec.profile.t_grid)
        picks = min(total, 7)
        t_indices = sorted({int(i) for i in np.linspace(0, total - 1, picks)})
    if y_indices is None:
        y_indices = range(len(spec.s_points))

    max_amb = 0.0
    max_gauss = 0.0
    max_tang = 0.0
    k1_err = 0.0
    k2_err = 0.0
    h_vals: list[float] = []

    for ti in t_indices:
        g = float(spec.profile.g[ti])
        al, be = _ambient_parts(spec, ti)
        k1, k2 = kappas(p, g)
        states = {dt: _state_at_offset(spec, ti, dt) for dt in
                  (fd_step, -fd_step, 0.5 * fd_step, -0.5 * fd_step)}

        for yi in y_indices:
            y = spec.s_points[yi]
            phi0 = _phi_raw(spec, g, al, y)
            nu0 = _nu_raw(spec, g, al, be, y)

            if p.a != 0:
                max_amb = max(max_amb, abs(inner(metric, phi0, phi0) - p.a))
            max_gauss = max(max_gauss, abs(inner(metric, nu0, nu0) - p.b))

            def phi_t(dt: float) -> np.ndarray:
                gs, als, _ = states[dt]
                return _phi_raw(spec, gs, als, y)

            def nu_t(dt: float) -> np.ndarray:
                gs, als, bes = states[dt]
                return _nu_raw(spec, gs, als, bes, y)

            tangents = [_richardson(phi_t, fd_step)]
            dnus = [_richardson(nu_t, fd_step)]

            dirs, norms = _fiber_directions(spec, y)
            for w, sigma in zip(dirs, norms):
                def phi_s(s: float, w=w, sigma=sigma) -> np.ndarray:
                    return _phi_raw(spec, g, al, _fiber_curve(spec, y, w, sigma, s))

                def nu_s(s: float, w=w, sigma=sigma) -> np.ndarray:
                    return _nu_raw(spec, g, al, be, _fiber_curve(spec, y, w, sigma, s))

                tangents.append(_richardson(phi_s, fd_step))
                dnus.append(_richardson(nu_s, fd_step))

            for tv in tangents:
                max_tang = max(max_tang, abs(inner(metric, nu0, tv)))
            if p.a != 0:
                max_tang = max(max_tang, abs(inner(metric, nu0, phi0)))

            gram = np.array(
                [[inner(metric, ta, tb) for tb in tangents] for ta in tangents]
            )
            if abs(np.linalg.det(gram)) < GRAM_DET_EPS:
                raise DegenerateSample("tangent Gram matrix is nearly singular")
            bmat = np.array(
                [[-inner(metric, dn, tv) for tv in tangents] for dn in dnus]
            )
            shape_op = np.linalg.solve(gram, bmat.T)
            eigs = sorted(np.linalg.eigvals(shape_op), key=lambda z: z.real)
            k2_err = max(k2_err, abs(eigs[0] - k2))
            for ev in eigs[1:]:
                k1_err = max(k1_err, abs(ev - k1))
            h_vals.append(float(np.real(np.trace(shape_op))) / n)

    h_arr = np.array(h_vals)
    return VerificationReport(
        max_ambient_residual=max_amb,
        max_gauss_norm_residual=max_gauss,
        max_tangency_residual=max_tang,
        kappa1_err=float(k1_err),
        kappa2_err=float(k2_err),
        mean_curvature_err=float(np.max(np.abs(h_arr - p.H))) if h_arr.size else 0.0,
        fd_step=fd_step,
        mean_curvature_std=float(np.std(h_arr)) if h_arr.size else 0.0,
    )
