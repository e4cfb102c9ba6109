"""Profile curves of rotation-invariant constant mean curvature hypersurfaces.

The radius profile g(t) of such a hypersurface obeys an autonomous second
order equation with first integral g'(t)**2 = f(g(t)).  The potential f is
determined by the dimension n, the ambient curvature sign a, two unit signs
b and d fixed by the causal characters of the normal and of the profile
direction, the mean curvature H, and an energy constant C.

This module evaluates the potential and its derivative, locates stationary
points and positive roots, classifies the maximal solution branches, and
integrates the profile equation with a fixed-step fourth order scheme.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

import numpy as np
from scipy.integrate import quad
from scipy.optimize import brentq

from ._backend import get_backend
from .errors import DomainExit, InvalidInput, NumericalFailure

G_TRUNCATION = 1.0e6
MULTIPLE_ROOT_TOL = 1.0e-9
COINCIDENT_TOL = 1.0e-9
BRANCH_SNAP_TOL = 1.0e-9
DISCRIMINANT_SNAP_TOL = 1.0e-12
_MARCH_LIMIT = 600
_CLAMP = 1.0e300


@dataclass(frozen=True)
class ProfileParams:
    """Data fixing one profile equation.

    n is the hypersurface dimension, a in {-1, 0, 1} the ambient curvature
    sign, b and d in {-1, 1} the signs of the squared lengths of the unit
    normal and of the profile direction, H the mean curvature and C the
    energy constant of the first integral.
    """

    n: int
    a: int
    b: int
    d: int
    H: float
    C: float

    def __post_init__(self) -> None:
        if not isinstance(self.n, int) or self.n < 3:
            raise InvalidInput("dimension n must be an integer >= 3 (n >= 3 required)")
        if self.a not in (-1, 0, 1):
            raise InvalidInput("curvature sign a must be -1, 0 or 1")
        if self.b not in (-1, 1) or self.d not in (-1, 1):
            raise InvalidInput("signs b and d must be -1 or 1")
        if not (math.isfinite(self.H) and math.isfinite(self.C)):
            raise InvalidInput("H and C must be finite")

    @property
    def ad(self) -> int:
        return self.a * self.d

    @property
    def bd(self) -> int:
        return self.b * self.d

    @property
    def ab(self) -> int:
        return self.a * self.b


class SolutionTag(str, Enum):
    Type1_Periodic = "Type1_Periodic"
    Type2_UnboundedNoMin = "Type2_UnboundedNoMin"
    Type3_UnboundedWithMin = "Type3_UnboundedWithMin"
    Type4_BoundedWithMin = "Type4_BoundedWithMin"
    Type5_BoundedWithMax = "Type5_BoundedWithMax"
    Equilibrium = "Equilibrium"
    NoPositiveSolution = "NoPositiveSolution"

    @property
    def short(self) -> str:
        return self.value.split("_")[0]


@dataclass(frozen=True)
class SolutionType:
    """One maximal solution branch.

    interval is the closure of the range of the profile; math.inf marks an
    unbounded end.  root_multiplicities gives the multiplicity of the
    potential root at each end, 0 when the end is not a root.  Equilibrium
    entries carry a degenerate interval (v0, v0).
    """

    tag: SolutionTag
    interval: tuple[float, float]
    root_multiplicities: tuple[int, int]


_NO_SOLUTION = SolutionType(SolutionTag.NoPositiveSolution, (0.0, 0.0), (0, 0))


@dataclass
class ProfileSolution:
    """Numerically integrated profile on a uniform time grid."""

    params: ProfileParams
    t_grid: np.ndarray
    g: np.ndarray
    g_prime: np.ndarray
    type: SolutionType
    energy_drift: float
    truncated: bool = False


@dataclass(frozen=True)
class IntegrationOptions:
    step: float = 1.0e-3
    tol: float = 1.0e-8

    def __post_init__(self) -> None:
        if not (self.step > 0.0 and math.isfinite(self.step)):
            raise InvalidInput("step must be a positive finite number")
        if not (self.tol > 0.0):
            raise InvalidInput("tol must be positive")


def eval_f(p: ProfileParams, v):
    """Potential of the first integral, elementwise over v > 0."""
    arr = np.asarray(v, dtype=float)
    if np.any(arr <= 0.0) or not np.all(np.isfinite(arr)):
        raise InvalidInput("profile values must be positive and finite")
    with np.errstate(over="ignore", invalid="ignore"):
        x = arr ** (-float(p.n))
        w = p.ad * arr * arr + p.bd * arr * arr * (p.H + x) ** 2
        out = p.C - w
    return out if arr.ndim else float(out)


def eval_f_prime(p: ProfileParams, v):
    """Derivative of the potential, elementwise over v > 0."""
    arr = np.asarray(v, dtype=float)
    if np.any(arr <= 0.0) or not np.all(np.isfinite(arr)):
        raise InvalidInput("profile values must be positive and finite")
    n = p.n
    with np.errstate(over="ignore", invalid="ignore"):
        x = arr ** (-float(n))
        q = (n - 1) * x * x + (n - 2) * p.H * x - (p.H * p.H + p.ab)
        out = 2.0 * p.bd * arr * q
    return out if arr.ndim else float(out)


def kappas(p: ProfileParams, g):
    """Principal curvatures (repeated one first) at profile value g."""
    arr = np.asarray(g, dtype=float)
    if np.any(arr <= 0.0):
        raise InvalidInput("profile values must be positive")
    x = arr ** (-float(p.n))
    k1 = p.H + x
    k2 = p.H - (p.n - 1) * x
    if arr.ndim:
        return k1, k2
    return float(k1), float(k2)


def stationary_offsets(n: int, ab: int, H: float):
    """Roots of the quadratic locating the stationary points of the
    potential, in the offset variable x = kappa1 - H = v**(-n).

    Returns (x_hi, x_lo) with x_hi >= x_lo, or None when there are no real
    roots.  Only positive offsets correspond to stationary profile values.
    """
    A = float(n - 1)
    B = float(n - 2) * H
    Cq = -(H * H + float(ab))
    disc = B * B - 4.0 * A * Cq
    if disc < 0.0:
        # Rounding can push the discriminant a few ulps below zero right at
        # the curvature where the two offsets merge; snap that seam to the
        # coincident root instead of reporting no stationary point.
        if disc >= -DISCRIMINANT_SNAP_TOL * (B * B + 4.0 * A * abs(Cq) + 1.0):
            disc = 0.0
        else:
            return None
    s = math.sqrt(disc)
    q = -0.5 * (B + math.copysign(s, B))
    if q == 0.0:
        return (0.0, 0.0)
    xa = q / A
    xb = Cq / q
    return (xa, xb) if xa >= xb else (xb, xa)


def _stationary_sites(p: ProfileParams):
    """Positive stationary points of f as (v, order) pairs, ascending in v.

    order is 2 for an ordinary stationary point and 3 when the two offset
    roots coincide, in which case the potential has a saddle-shaped flat
    spot there.
    """
    offs = stationary_offsets(p.n, p.ab, p.H)
    if offs is None:
        return []
    x_hi, x_lo = offs
    sites = []
    # Coincidence is judged on the scale of the offsets themselves; for tiny
    # H in the flat cases both offsets shrink like H and must stay distinct.
    if abs(x_hi - x_lo) <= COINCIDENT_TOL * (abs(x_hi) + abs(x_lo)):
        x_mid = 0.5 * (x_hi + x_lo)
        if x_mid > 0.0:
            sites.append((x_mid ** (-1.0 / p.n), 3))
    else:
        for x in (x_hi, x_lo):
            if x > 0.0:
                sites.append((x ** (-1.0 / p.n), 2))
    sites.sort()
    return sites


def critical_points(p: ProfileParams) -> list[float]:
    """Positive stationary points of the potential, ascending."""
    return [v for v, _ in _stationary_sites(p)]


def _sign_near_zero(p: ProfileParams) -> int:
    return -p.bd


def _sign_at_infinity(p: ProfileParams) -> int:
    lead = p.ad + p.bd * p.H * p.H
    if lead != 0.0:
        return -1 if lead > 0.0 else 1
    if p.a != 0:
        if p.C != 0.0:
            return 1 if p.C > 0.0 else -1
        return -p.bd if p.H > 0.0 else p.bd
    if p.C != 0.0:
        return 1 if p.C > 0.0 else -1
    return -p.bd


def _f_clamped(p: ProfileParams, v: float) -> float:
    val = eval_f(p, v)
    if val > _CLAMP:
        return _CLAMP
    if val < -_CLAMP:
        return -_CLAMP
    return val


def _bracketed_root(scalar, lo: float, hi: float) -> float:
    """Root of scalar on [lo, hi] given opposite end signs.

    The bracket can span hundreds of decades when a stationary site sits at
    an extreme profile value, which starves brentq's bisection fallback.
    The potential is monotone between consecutive stationary points, so the
    bracket is first shrunk geometrically in log space.
    """
    flo = scalar(lo)
    if flo == 0.0:
        return lo
    if scalar(hi) == 0.0:
        return hi
    neg_lo = flo < 0.0
    for _ in range(60):
        if hi <= 2.0 * lo:
            break
        vm = math.sqrt(lo) * math.sqrt(hi)
        fm = scalar(vm)
        if fm == 0.0:
            return vm
        if (fm < 0.0) == neg_lo:
            lo = vm
        else:
            hi = vm
    return float(brentq(scalar, lo, hi, xtol=1e-15, rtol=1e-14))


def _march_bracket(p, start: float, direction: int, want_sign: int, snap: float):
    """Walk geometrically from start (down if direction < 0, up otherwise)
    until the potential shows the wanted sign with magnitude above snap.
    Returns the reached point, or None if the sign never appears."""
    factor = 0.5 if direction < 0 else 2.0
    v = start
    for _ in range(_MARCH_LIMIT):
        v = v * factor
        val = _f_clamped(p, v)
        if abs(val) >= snap and (val > 0.0) == (want_sign > 0):
            return v
    return None


def find_positive_roots(p: ProfileParams) -> list[tuple[float, int]]:
    """Positive roots of the potential with multiplicities, ascending.

    A stationary point whose potential value lies within a relative snap
    tolerance of zero is reported as a root of multiplicity 2, or 3 when
    the two stationary offsets coincide.  Remaining roots are simple and
    bracketed between consecutive stationary points or by geometric
    marching on the outer cells.
    """
    snap = MULTIPLE_ROOT_TOL * (1.0 + abs(p.C))
    nodes = [(v, order, eval_f(p, v)) for v, order in _stationary_sites(p)]
    # Just off the curvature where the two contact values merge, the energy
    # level can sit within the snap width of both stationary values at once.
    # Collapse such a pair into a single degenerate root; the merged order 3
    # keeps the sign change that the two far-field signs force.
    merged: list[tuple[float, int, float]] = []
    i = 0
    while i < len(nodes):
        v, order, fv = nodes[i]
        if (
            i + 1 < len(nodes)
            and abs(fv) < snap
            and abs(nodes[i + 1][2]) < snap
            and nodes[i + 1][0] - v <= 0.05 * (v + nodes[i + 1][0])
        ):
            v2, _, fv2 = nodes[i + 1]
            merged.append((v if abs(fv) <= abs(fv2) else v2, 3, 0.0))
            i += 2
        else:
            merged.append((v, order, fv))
            i += 1

    sites = [(v, order) for v, order, _ in merged]
    roots: list[tuple[float, int]] = []
    node_signs: list[int] = []
    for v, order, fv in merged:
        if abs(fv) < snap:
            roots.append((v, order))
            node_signs.append(0)
        else:
            node_signs.append(1 if fv > 0.0 else -1)

    def scalar(v: float) -> float:
        return _f_clamped(p, v)

    sign_zero = _sign_near_zero(p)
    sign_inf = _sign_at_infinity(p)

    if not sites:
        if sign_zero * sign_inf < 0:
            lo = _march_bracket(p, 1.0, -1, sign_zero, snap)
            hi = _march_bracket(p, 1.0, +1, sign_inf, snap)
            if lo is not None and hi is not None:
                roots.append((_bracketed_root(scalar, lo, hi), 1))
        return sorted(roots)

    first_v = sites[0][0]
    if node_signs[0] != 0 and node_signs[0] * sign_zero < 0:
        lo = _march_bracket(p, first_v, -1, sign_zero, snap)
        if lo is not None:
            roots.append((_bracketed_root(scalar, lo, first_v), 1))

    for i in range(len(sites) - 1):
        sa, sb = node_signs[i], node_signs[i + 1]
        if sa != 0 and sb != 0 and sa * sb < 0:
            va, vb = sites[i][0], sites[i + 1][0]
            roots.append((_bracketed_root(scalar, va, vb), 1))

    last_v = sites[-1][0]
    if node_signs[-1] != 0 and node_signs[-1] * sign_inf < 0:
        hi = _march_bracket(p, last_v, +1, sign_inf, snap)
        if hi is not None:
            roots.append((_bracketed_root(scalar, last_v, hi), 1))

    return sorted(roots)


def solution_catalog(p: ProfileParams) -> list[SolutionType]:
    """All maximal solution branches of the profile equation.

    Positivity intervals of the potential whose lower end sits at 0 admit
    no solution defined on the whole line and are dropped.  Interval
    branches come first, ascending in their lower end, followed by one
    Equilibrium entry per multiple root, ascending.
    """
    roots = find_positive_roots(p)
    sgn = _sign_near_zero(p)
    gaps = []
    prev_v, prev_m = 0.0, 0
    for rv, rm in roots:
        gaps.append((prev_v, prev_m, rv, rm, sgn))
        if rm % 2 == 1:
            sgn = -sgn
        prev_v, prev_m = rv, rm
    gaps.append((prev_v, prev_m, math.inf, 0, sgn))

    entries: list[SolutionType] = []
    for lo, mlo, hi, mhi, s in gaps:
        if s <= 0 or mlo == 0:
            continue
        if math.isinf(hi):
            tag = SolutionTag.Type3_UnboundedWithMin if mlo == 1 else SolutionTag.Type2_UnboundedNoMin
        elif mlo == 1 and mhi == 1:
            tag = SolutionTag.Type1_Periodic
        elif mlo == 1:
            tag = SolutionTag.Type4_BoundedWithMin
        else:
            tag = SolutionTag.Type5_BoundedWithMax
        entries.append(SolutionType(tag, (lo, hi), (mlo, mhi)))
    for rv, rm in roots:
        if rm >= 2:
            entries.append(SolutionType(SolutionTag.Equilibrium, (rv, rv), (rm, rm)))
    return entries


def classify(p: ProfileParams, branch_hint: float | None = None) -> SolutionType:
    """Solution branch type for the given parameters.

    With branch_hint set, returns the branch whose profile range contains
    the hint, preferring an Equilibrium when the hint sits at a multiple
    root.  Without a hint the first catalog entry is returned.
    """
    entries = solution_catalog(p)
    if not entries:
        return _NO_SOLUTION
    if branch_hint is None:
        return entries[0]
    g0 = float(branch_hint)
    if not (g0 > 0.0 and math.isfinite(g0)):
        raise InvalidInput("branch_hint must be a positive finite number")
    tol = BRANCH_SNAP_TOL * (1.0 + abs(g0))
    for e in entries:
        if e.tag is SolutionTag.Equilibrium and abs(g0 - e.interval[0]) <= tol:
            return e
    for e in entries:
        if e.tag is SolutionTag.Equilibrium:
            continue
        lo, hi = e.interval
        if lo - tol <= g0 <= hi + tol:
            return e
    return _NO_SOLUTION


def integrate_profile(
    p: ProfileParams,
    g0: float,
    t_span: tuple[float, float] = (-10.0, 10.0),
    opts: IntegrationOptions | None = None,
) -> ProfileSolution:
    """Integrate the profile equation from g(0) = g0 over t_span.

    The initial slope is the nonnegative branch g'(0) = sqrt(max(f(g0), 0)).
    Both halves of the span use the same fixed step; the run truncates once
    g exceeds G_TRUNCATION, raises DomainExit if g reaches 0, and raises
    NumericalFailure if the state degenerates or the first integral drifts
    beyond the relative tolerance.
    """
    if opts is None:
        opts = IntegrationOptions()
    t0, t1 = float(t_span[0]), float(t_span[1])
    if not (t0 <= 0.0 <= t1):
        raise InvalidInput("t_span must contain 0")
    g0 = float(g0)
    if not (g0 > 0.0 and math.isfinite(g0)):
        raise InvalidInput("g0 must be a positive finite number")

    fg0 = eval_f(p, g0)
    p0 = math.sqrt(fg0) if fg0 > 0.0 else 0.0
    kern = get_backend()
    n_fwd = int(round(t1 / opts.step))
    n_bwd = int(round(-t0 / opts.step))
    nexp = float(p.n)
    ad = float(p.ad)
    bd = float(p.bd)

    g_f, p_f, _, code_f = kern.run_combined(
        nexp, ad, bd, p.H, g0, p0, (), opts.step, n_fwd, G_TRUNCATION
    )
    g_b, p_b, _, code_b = kern.run_combined(
        nexp, ad, bd, p.H, g0, p0, (), -opts.step, n_bwd, G_TRUNCATION
    )
    for code, label in ((code_b, "backward"), (code_f, "forward")):
        if code == 2:
            raise DomainExit("profile reached 0 on the %s half of the span" % label)
        if code == 3:
            raise NumericalFailure("non-finite state on the %s half of the span" % label)
    truncated = code_f == 1 or code_b == 1

    kb = len(g_b) - 1
    kf = len(g_f) - 1
    t_grid = opts.step * np.arange(-kb, kf + 1)
    g = np.concatenate((g_b[kb:0:-1], g_f))
    gp = np.concatenate((p_b[kb:0:-1], p_f))

    fvals = eval_f(p, g)
    residual = gp * gp - fvals
    r0 = p0 * p0 - fg0
    dev = np.abs(residual - r0)
    energy_drift = float(np.max(dev)) if dev.size else 0.0
    rel = dev / (1.0 + np.abs(fvals) + gp * gp)
    if float(np.max(rel)) > opts.tol:
        raise NumericalFailure(
            "first integral drifted beyond tolerance (relative drift %.3e)"
            % float(np.max(rel))
        )

    return ProfileSolution(
        params=p,
        t_grid=t_grid,
        g=g,
        g_prime=gp,
        type=classify(p, branch_hint=g0),
        energy_drift=energy_drift,
        truncated=truncated,
    )


def period_quadrature(p: ProfileParams, v1: float, v2: float) -> float:
    """Period of a periodic branch oscillating between simple roots v1 < v2.

    Uses the half-angle substitution that removes the square root
    singularities at both ends, with the derivative of the potential
    supplying the end values of the regularized integrand.
    """
    if not (0.0 < v1 < v2):
        raise InvalidInput("need 0 < v1 < v2")
    mid = 0.5 * (v1 + v2)
    half = 0.5 * (v2 - v1)
    width = v2 - v1
    h_left = eval_f_prime(p, v1) / width
    h_right = -eval_f_prime(p, v2) / width
    if h_left <= 0.0 or h_right <= 0.0:
        raise NumericalFailure("potential roots are not simple turning points")
    floor = 1.0e-12 * half * half

    def integrand(u: float) -> float:
        v = mid + half * math.sin(u)
        den = (v - v1) * (v2 - v)
        if den <= floor:
            h = h_left if v < mid else h_right
        else:
            h = eval_f(p, v) / den
        if h <= 0.0:
            raise NumericalFailure("potential is not positive between the roots")
        return 1.0 / math.sqrt(h)

    val, _ = quad(integrand, -0.5 * math.pi, 0.5 * math.pi, limit=200)
    return 2.0 * val


def measure_period(sol: ProfileSolution) -> float:
    """Mean spacing of the profile maxima of an integrated periodic run.

    Each interior maximum of g on the grid is refined by a parabola through
    its three samples; at least two maxima must lie inside the span.
    """
    g = sol.g
    t = sol.t_grid
    peaks = []
    for i in range(1, len(g) - 1):
        if g[i] >= g[i - 1] and g[i] > g[i + 1]:
            denom = g[i - 1] - 2.0 * g[i] + g[i + 1]
            if denom != 0.0:
                shift = 0.5 * (g[i - 1] - g[i + 1]) / denom
                peaks.append(t[i] + shift * (t[i + 1] - t[i]))
            else:
                peaks.append(t[i])
    if len(peaks) < 2:
        raise NumericalFailure("need at least two profile maxima to measure a period")
    return float(np.mean(np.diff(peaks)))
