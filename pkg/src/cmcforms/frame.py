"""Moving-frame coefficients along an integrated profile.

The ambient position and normal of the constructed hypersurfaces are built
from two vector-valued functions, a position part and a normal part, whose
motion stays inside a fixed span of at most three ambient directions: one
carrying the ambient curvature sign a (absent in flat ambients), one the
normal sign b, and one the profile sign d.  Expressed in coefficients over
that span, every component obeys the same linear system driven by the
profile, so the coefficients integrate on the profile grid with the exact
same stepping kernel.

The combination rho(t) built from the profile and the frame parts is a
constant vector; its value at t = 0 and the drift of the coefficient Gram
matrix are the conserved quantities exposed here.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ._backend import get_backend
from .errors import InvalidInput, NumericalFailure
from .profile import G_TRUNCATION, ProfileParams, ProfileSolution, kappas


@dataclass
class FrameTrajectory:
    """Frame coefficients on the profile grid.

    coeffs has shape (T, 3, m); axis 1 indexes the position part, its
    derivative, and the normal part, each as m coefficients over the span.
    m is 3 for curved ambients and 2 for flat ones, where the position part
    starts at zero and the span drops the curvature direction.  rho0 is the
    conserved vector in ambient coordinates.
    """

    t_grid: np.ndarray
    coeffs: np.ndarray
    rho0: np.ndarray
    gram_drift: float
    frame_vectors: np.ndarray


def _span_size(p: ProfileParams) -> int:
    return 3 if p.a != 0 else 2


def _initial_coeffs(p: ProfileParams) -> tuple[float, ...]:
    if p.a != 0:
        return (1.0, 0.0, 0.0, 0.0, 0.0, 1.0, 0.0, 1.0, 0.0)
    return (0.0, 0.0, 0.0, 1.0, 1.0, 0.0)


def _coeff_weights(p: ProfileParams) -> np.ndarray:
    if p.a != 0:
        return np.array([float(p.a), float(p.b), float(p.d)])
    return np.array([float(p.b), float(p.d)])


def _zero_index(t_grid: np.ndarray) -> int:
    i0 = int(np.argmin(np.abs(t_grid)))
    if t_grid[i0] != 0.0:
        raise InvalidInput("profile grid does not contain t = 0")
    return i0


def _grid_step(t_grid: np.ndarray, i0: int) -> float:
    if i0 + 1 < len(t_grid):
        return float(t_grid[i0 + 1])
    if i0 > 0:
        return -float(t_grid[i0 - 1])
    raise InvalidInput("profile grid has a single point; nothing to integrate")


def rho0_coeffs(p: ProfileParams, g0: float, g_prime0: float) -> np.ndarray:
    """Coefficients of the conserved vector at t = 0 over the frame span."""
    k1, _ = kappas(p, g0)
    if p.a != 0:
        return np.array([-p.d * p.a * g0, p.bd * g0 * k1, -g_prime0])
    return np.array([p.bd * g0 * k1, -g_prime0])


def rho0(
    p: ProfileParams, g0: float, g_prime0: float, frame_vectors: np.ndarray
) -> np.ndarray:
    """Conserved vector at t = 0 in ambient coordinates."""
    u = np.asarray(frame_vectors, dtype=float)
    rc = rho0_coeffs(p, float(g0), float(g_prime0))
    if u.ndim != 2 or u.shape[0] != rc.shape[0]:
        raise InvalidInput(
            "frame_vectors must have one row per span direction (%d)" % rc.shape[0]
        )
    return rc @ u


def rho_t(
    traj: FrameTrajectory, p: ProfileParams, sol: ProfileSolution, t_index: int
) -> np.ndarray:
    """Conserved vector recomputed at one grid index, in ambient coordinates.

    Up to integration error this equals traj.rho0 at every index.
    """
    if not 0 <= t_index < len(sol.t_grid):
        raise InvalidInput("t_index out of range")
    g = float(sol.g[t_index])
    gp = float(sol.g_prime[t_index])
    k1, _ = kappas(p, g)
    alpha = traj.coeffs[t_index, 0, :]
    alpha_p = traj.coeffs[t_index, 1, :]
    beta = traj.coeffs[t_index, 2, :]
    rc = -gp * alpha_p + p.bd * g * k1 * beta - p.d * p.a * g * alpha
    return rc @ traj.frame_vectors


def integrate_frame(
    p: ProfileParams,
    sol: ProfileSolution,
    frame_vectors: np.ndarray | None = None,
    tol: float = 1.0e-8,
) -> FrameTrajectory:
    """Integrate the frame coefficients along an existing profile solution.

    The profile is re-run from its t = 0 state with the coefficients riding
    in the same kernel state, which reproduces sol.g bit for bit; any
    discrepancy raises NumericalFailure, as does a coefficient Gram drift
    above tol.  frame_vectors defaults to the identity, in which case
    ambient coordinates are coefficients over the span itself.
    """
    m = _span_size(p)
    if frame_vectors is None:
        u = np.eye(m)
    else:
        u = np.asarray(frame_vectors, dtype=float)
        if u.ndim != 2 or u.shape[0] != m:
            raise InvalidInput("frame_vectors must have shape (%d, N)" % m)

    i0 = _zero_index(sol.t_grid)
    step = _grid_step(sol.t_grid, i0)
    g0 = float(sol.g[i0])
    p0 = float(sol.g_prime[i0])
    c0 = _initial_coeffs(p)
    n_fwd = len(sol.t_grid) - 1 - i0
    n_bwd = i0

    kern = get_backend()
    nexp = float(p.n)
    ad = float(p.ad)
    bd = float(p.bd)
    g_f, _, c_f, _ = kern.run_combined(
        nexp, ad, bd, p.H, g0, p0, c0, step, n_fwd, G_TRUNCATION
    )
    g_b, _, c_b, _ = kern.run_combined(
        nexp, ad, bd, p.H, g0, p0, c0, -step, n_bwd, G_TRUNCATION
    )
    if len(g_f) - 1 != n_fwd or len(g_b) - 1 != n_bwd:
        raise NumericalFailure("frame re-integration stopped short of the profile span")
    kb = len(g_b) - 1
    g_all = np.concatenate((g_b[kb:0:-1], g_f))
    if not np.array_equal(g_all, sol.g):
        raise NumericalFailure("frame re-integration diverged from the stored profile")

    c_all = np.concatenate((c_b[kb:0:-1], c_f))
    coeffs = c_all.reshape(len(g_all), 3, m)

    if p.a != 0:
        trio = coeffs[:, (0, 2, 1), :]
        target = np.diag([float(p.a), float(p.b), float(p.d)])
    else:
        trio = coeffs[:, (2, 1), :]
        target = np.diag([float(p.b), float(p.d)])
    w = _coeff_weights(p)
    gram = np.einsum("tik,k,tjk->tij", trio, w, trio)
    gram_drift = float(np.max(np.abs(gram - target)))
    if gram_drift > tol:
        raise NumericalFailure(
            "frame Gram matrix drifted by %.3e, beyond tolerance %.3e"
            % (gram_drift, tol)
        )

    return FrameTrajectory(
        t_grid=sol.t_grid,
        coeffs=coeffs,
        rho0=rho0(p, g0, p0, u),
        gram_drift=gram_drift,
        frame_vectors=u,
    )
