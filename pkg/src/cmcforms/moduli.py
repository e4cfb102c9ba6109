"""Admissibility of the energy constant across the six sign cases.

Each combination of ambient curvature sign and causal characters of the
normal and profile directions gives one sign case.  For fixed dimension and
mean curvature the admissible energies form intervals bounded by contact
thresholds r1 and r2, the potential values at the stationary radii q1 and
q2.  This module computes those thresholds, classifies a given (H, C)
point, evaluates the closed-form bounds on the traceless shape operator
norm, and sweeps rectangles of the (H, C) plane.
"""

from __future__ import annotations

import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from enum import Enum
from typing import Sequence

import numpy as np

from .errors import DomainError, InvalidInput
from .metric_core import SignTriple
from .profile import (
    DISCRIMINANT_SNAP_TOL,
    MULTIPLE_ROOT_TOL,
    ProfileParams,
    SolutionTag,
    SolutionType,
    solution_catalog,
    stationary_offsets,
)

H_THRESHOLD_TOL = 1.0e-9


class SignCase(Enum):
    """The six sign cases, named after their standard ambient models."""

    HYP = "hyp"
    DESITTER = "desitter"
    SPHERE = "sphere"
    ANTIDESITTER = "antidesitter"
    EUCLIDEAN = "euclidean"
    MINKOWSKI = "minkowski"

    @classmethod
    def from_name(cls, name: str) -> "SignCase":
        try:
            return cls(name.strip().lower())
        except ValueError:
            raise InvalidInput(
                "unknown sign case %r; choose from %s"
                % (name, ", ".join(c.value for c in cls))
            ) from None

    @classmethod
    def from_signs(cls, a: int, b: int, d: int) -> "SignCase":
        ad = a * d
        bd = b * d
        for case in cls:
            if case.ad == ad and case.bd == bd:
                return case
        raise InvalidInput(f"no sign case matches a={a}, b={b}, d={d}")

    @property
    def signs(self) -> SignTriple:
        return _CASE_SIGNS[self]

    @property
    def ambient_index(self) -> int:
        """Index k of the standard ambient space form for this case."""
        return _CASE_INDEX[self]

    @property
    def ad(self) -> int:
        s = self.signs
        return s.a * s.d

    @property
    def bd(self) -> int:
        s = self.signs
        return s.b * s.d

    @property
    def ab(self) -> int:
        s = self.signs
        return s.a * s.b


_CASE_SIGNS = {
    SignCase.HYP: SignTriple(-1, 1, 1),
    SignCase.DESITTER: SignTriple(1, -1, 1),
    SignCase.SPHERE: SignTriple(1, 1, 1),
    SignCase.ANTIDESITTER: SignTriple(-1, -1, 1),
    SignCase.EUCLIDEAN: SignTriple(0, 1, 1),
    SignCase.MINKOWSKI: SignTriple(0, -1, 1),
}

_CASE_INDEX = {
    SignCase.HYP: 0,
    SignCase.DESITTER: 1,
    SignCase.SPHERE: 0,
    SignCase.ANTIDESITTER: 1,
    SignCase.EUCLIDEAN: 0,
    SignCase.MINKOWSKI: 1,
}


@dataclass(frozen=True)
class AdmissibilityReport:
    admissible: bool
    types: list[SolutionType]
    boundary: str
    notes: str


@dataclass
class SweepResult:
    case: SignCase
    n: int
    h_values: np.ndarray
    c_values: np.ndarray
    admissible: np.ndarray
    types: list[list[str]]
    boundary: list[list[str]]
    curves: dict[str, np.ndarray]


def params_for(case: SignCase, n: int, H: float, C: float) -> ProfileParams:
    """Profile parameters of the standard representative of the case."""
    s = case.signs
    return ProfileParams(n=n, a=s.a, b=s.b, d=s.d, H=float(H), C=float(C))


def thresholds(
    case: SignCase, n: int, H: float, require: str | Sequence[str] | None = None
) -> dict[str, float]:
    """Stationary radii q1, q2 and contact energies r1, r2 at (case, n, H).

    Keys are present only where defined: q<i> needs a strictly positive
    stationary offset, r<i> a nonnegative one.  With require set, a missing
    required key raises DomainError.
    """
    if n < 3:
        raise InvalidInput("dimension n must be an integer >= 3 (n >= 3 required)")
    H = float(H)
    out: dict[str, float] = {}
    offs = stationary_offsets(n, case.ab, H)
    if offs is not None:
        x1, x2 = offs
        for key_q, key_r, x in (("q1", "r1", x1), ("q2", "r2", x2)):
            if x > 0.0:
                out[key_q] = x ** (-1.0 / n)
            if x >= 0.0:
                out[key_r] = case.bd * n * x ** ((n - 2.0) / n) * (x + H) + 0.0
    if require is not None:
        wanted = (require,) if isinstance(require, str) else tuple(require)
        for key in wanted:
            if key not in out:
                raise DomainError(
                    "threshold %s is not defined for case %s at n=%d, H=%g"
                    % (key, case.value, n, H)
                )
    return out


def phi_bounds(case: SignCase, n: int, H: float) -> dict[str, float]:
    """Closed-form levels of the traceless shape operator norm.

    For curved ambients these are the values b1 and b2 attained at the
    stationary radii, computed from the explicit radicals; a key is
    present only when the level is nonnegative.  Flat ambients have the
    single level b3.  Raises DomainError when the mean curvature admits no
    stationary radius at all.
    """
    if n < 3:
        raise InvalidInput("dimension n must be an integer >= 3 (n >= 3 required)")
    nn = float(n)
    H = float(H)
    if case.ad == 0:
        if H < 0.0:
            b3 = -math.sqrt(nn * (nn - 1.0)) * H
        else:
            b3 = math.sqrt(nn / (nn - 1.0)) * H
        return {"b3": b3 + 0.0}
    disc = nn * nn * H * H + 4.0 * case.ab * (nn - 1.0)
    if disc < 0.0:
        # Same seam snap as stationary_offsets: a few ulps below zero at the
        # curvature where the two levels merge counts as the merge itself.
        if disc >= -DISCRIMINANT_SNAP_TOL * (nn * nn * H * H + 4.0 * (nn - 1.0) + 1.0):
            disc = 0.0
        else:
            raise DomainError(
                "no stationary radius for case %s at n=%d, H=%g" % (case.value, n, H)
            )
    sq = math.sqrt(disc)
    out: dict[str, float] = {}
    b1 = math.sqrt(nn) * (sq - H * (nn - 2.0)) / (2.0 * math.sqrt(nn - 1.0))
    b2 = -nn * (sq + H * (nn - 2.0)) / (2.0 * math.sqrt(nn * (nn - 1.0)))
    if b1 >= 0.0:
        out["b1"] = b1 + 0.0
    if b2 >= 0.0:
        out["b2"] = b2 + 0.0
    return out


def _transition_curvatures(case: SignCase, n: int) -> tuple[float, ...]:
    if case.ad == 0:
        return (0.0,)
    if case.ab == -1:
        return (-1.0, -2.0 * math.sqrt(n - 1.0) / n, 1.0)
    return ()


def admissible(case: SignCase, n: int, H: float, C: float) -> AdmissibilityReport:
    """Classify the energy C at (case, n, H).

    admissible is True when at least one non-equilibrium solution branch
    exists.  boundary reports whether (H, C) sits on a contact threshold,
    at a transition mean curvature, or in the interior.
    """
    H = float(H)
    C = float(C)
    p = params_for(case, n, H, C)
    types = solution_catalog(p)
    is_adm = any(t.tag is not SolutionTag.Equilibrium for t in types)

    th = thresholds(case, n, H)
    tol_c = MULTIPLE_ROOT_TOL * (1.0 + abs(C))
    tol_h = H_THRESHOLD_TOL * (1.0 + abs(H))
    if "r1" in th and abs(C - th["r1"]) <= tol_c:
        boundary = "C=r1"
        notes = "energy at the first contact threshold; the stationary radius is an equilibrium"
    elif "r2" in th and abs(C - th["r2"]) <= tol_c:
        boundary = "C=r2"
        notes = "energy at the second contact threshold; the stationary radius is an equilibrium"
    elif any(abs(H - h) <= tol_h for h in _transition_curvatures(case, n)):
        boundary = "H-threshold"
        notes = "mean curvature at a transition between admissibility regimes"
    else:
        boundary = "interior"
        if is_adm:
            notes = "interior point of the admissible region"
        else:
            notes = "no solution branch defined on the whole line"
    return AdmissibilityReport(
        admissible=is_adm, types=types, boundary=boundary, notes=notes
    )


def _thread_count(n_rows: int) -> int:
    raw = os.environ.get("CMC_MODULI_THREADS", "")
    try:
        cap = int(raw) if raw else 0
    except ValueError:
        raise InvalidInput("CMC_MODULI_THREADS must be an integer") from None
    if cap < 0:
        raise InvalidInput("CMC_MODULI_THREADS must be nonnegative")
    if cap == 0:
        cap = min(4, os.cpu_count() or 1)
    return max(1, min(cap, n_rows))


def sweep(
    case: SignCase,
    n: int,
    h_values: Sequence[float],
    c_values: Sequence[float],
) -> SweepResult:
    """Classify every point of the (H, C) grid and tabulate the threshold
    curves along the H axis.  Rows are processed in a thread pool capped by
    the CMC_MODULI_THREADS environment variable."""
    h_arr = np.asarray(list(h_values), dtype=float)
    c_arr = np.asarray(list(c_values), dtype=float)
    if h_arr.ndim != 1 or c_arr.ndim != 1 or h_arr.size == 0 or c_arr.size == 0:
        raise InvalidInput("h_values and c_values must be nonempty 1-d sequences")

    curve_keys = ("q1", "q2", "r1", "r2")
    adm = np.zeros((h_arr.size, c_arr.size), dtype=bool)
    type_rows: list[list[str]] = [[] for _ in range(h_arr.size)]
    boundary_rows: list[list[str]] = [[] for _ in range(h_arr.size)]
    curves = {key: np.full(h_arr.size, np.nan) for key in curve_keys}

    def fill_row(i: int) -> None:
        H = float(h_arr[i])
        th = thresholds(case, n, H)
        for key in curve_keys:
            if key in th:
                curves[key][i] = th[key]
        for j in range(c_arr.size):
            rep = admissible(case, n, H, float(c_arr[j]))
            adm[i, j] = rep.admissible
            type_rows[i].append("+".join(t.tag.short for t in rep.types))
            boundary_rows[i].append(rep.boundary)

    with ThreadPoolExecutor(max_workers=_thread_count(h_arr.size)) as pool:
        list(pool.map(fill_row, range(h_arr.size)))

    return SweepResult(
        case=case,
        n=n,
        h_values=h_arr,
        c_values=c_arr,
        admissible=adm,
        types=type_rows,
        boundary=boundary_rows,
        curves=curves,
    )
