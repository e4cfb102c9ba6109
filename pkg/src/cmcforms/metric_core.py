"""Signature metrics, ambient-space bookkeeping and sampling of the slice factor.

The ambient spaces are the flat space R^{n+1} (curvature zero) and the level
sets <x,x> = a inside a flat space of one dimension more (curvature a = +1 or
-1).  All inner products put the minus signs on the first k coordinates.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DegenerateComplement, InvalidInput, SignatureUnavailable

GRAM_SCHMIDT_EPS = 1e-12


@dataclass(frozen=True)
class SignatureMetric:
    """Flat inner product of signature (k, dim - k).

    Attributes:
        dim: dimension of the underlying real vector space.
        neg_count: number of minus signs; they occupy the first coordinates.
    """

    dim: int
    neg_count: int

    def __post_init__(self):
        if self.dim < 1:
            raise InvalidInput(f"dim must be positive, got {self.dim}")
        if not 0 <= self.neg_count < self.dim:
            raise InvalidInput(
                f"neg_count must lie in [0, dim), got {self.neg_count} for dim {self.dim}"
            )

    def signs(self) -> np.ndarray:
        """Diagonal of the metric as a +-1 float array."""
        s = np.ones(self.dim)
        s[: self.neg_count] = -1.0
        return s

    def basis_vector(self, i: int) -> np.ndarray:
        e = np.zeros(self.dim)
        e[i] = 1.0
        return e


def inner(metric: SignatureMetric, u, v) -> float:
    """Signature inner product -sum_{i<k} u_i v_i + sum_{i>=k} u_i v_i.

    Exactly symmetric in (u, v): the sign weights are +-1, so swapping the
    arguments only commutes IEEE multiplications.
    """
    u = np.asarray(u, dtype=float)
    v = np.asarray(v, dtype=float)
    if u.shape != (metric.dim,) or v.shape != (metric.dim,):
        raise InvalidInput(
            f"expected vectors of length {metric.dim}, got {u.shape} and {v.shape}"
        )
    return float(np.sum(metric.signs() * u * v))


@dataclass(frozen=True)
class SpaceFormSpec:
    """Ambient space of constant curvature a containing the hypersurfaces.

    Attributes:
        n: hypersurface dimension (the ambient space has dimension n + 1).
        k: index parameter of the ambient metric.
        a: sectional curvature, one of -1, 0, +1.
    """

    n: int
    k: int
    a: int

    def __post_init__(self):
        if self.n < 3:
            raise InvalidInput(f"n must be at least 3, got {self.n}")
        if self.k < 0:
            raise InvalidInput(f"k must be nonnegative, got {self.k}")
        if self.a not in (-1, 0, 1):
            raise InvalidInput(f"a must be -1, 0 or +1, got {self.a}")
        if self.metric_index >= self.ambient_dim:
            raise InvalidInput(
                f"index {self.metric_index} does not fit embedding dimension {self.ambient_dim}"
            )

    @property
    def ambient_dim(self) -> int:
        """Dimension of the flat embedding space (n+2 if curved, n+1 if flat)."""
        return self.n + 2 if self.a != 0 else self.n + 1

    @property
    def metric_index(self) -> int:
        """Number of minus signs of the embedding metric."""
        return self.k + 1 if self.a == -1 else self.k

    def embedding_metric(self) -> SignatureMetric:
        return SignatureMetric(self.ambient_dim, self.metric_index)


@dataclass(frozen=True)
class SignTriple:
    """Signs (a, b, d): ambient curvature, Gauss-map norm, profile-direction norm."""

    a: int
    b: int
    d: int

    def __post_init__(self):
        if self.a not in (-1, 0, 1):
            raise InvalidInput(f"a must be -1, 0 or +1, got {self.a}")
        if self.b not in (-1, 1):
            raise InvalidInput(f"b must be -1 or +1, got {self.b}")
        if self.d not in (-1, 1):
            raise InvalidInput(f"d must be -1 or +1, got {self.d}")


def pick_frame(spec: SpaceFormSpec, signs: SignTriple):
    """Deterministically select orthogonal unit vectors with norms (a, b, d).

    Takes the lowest-index standard basis vector of each required sign, in the
    order u1 (squared norm a, only when a is nonzero), u2 (norm b), u3 (norm d).
    Returns (u1, u2, u3) or, for a = 0, (u2, u3).

    Raises:
        SignatureUnavailable: the metric has too few directions of some sign.
        InvalidInput: signs.a disagrees with spec.a.
    """
    if signs.a != spec.a:
        raise InvalidInput(f"signs.a={signs.a} does not match spec.a={spec.a}")
    metric = spec.embedding_metric()
    diag = metric.signs()
    used = np.zeros(metric.dim, dtype=bool)

    def take(target: int) -> np.ndarray:
        for i in range(metric.dim):
            if not used[i] and int(diag[i]) == target:
                used[i] = True
                return metric.basis_vector(i)
        raise SignatureUnavailable(
            f"no unused basis direction of squared norm {target} in signature "
            f"({metric.neg_count}, {metric.dim - metric.neg_count})"
        )

    wanted = [signs.b, signs.d] if spec.a == 0 else [signs.a, signs.b, signs.d]
    return tuple(take(t) for t in wanted)


def orth_complement_basis(metric: SignatureMetric, frame) -> list[np.ndarray]:
    """Orthogonal basis of the subspace orthogonal to every frame vector.

    Gram-Schmidt over the standard basis with sign-aware normalization; a
    candidate whose residual squared norm is below GRAM_SCHMIDT_EPS is skipped.
    Returned vectors satisfy |<E_i, E_i>| = 1.

    Raises:
        InvalidInput: a frame vector is (numerically) null, or the frame is
            not mutually orthogonal.
        DegenerateComplement: the scan cannot produce dim - len(frame) vectors.
    """
    frame = [np.asarray(f, dtype=float) for f in frame]
    norms = []
    for f in frame:
        q = inner(metric, f, f)
        if abs(q) < GRAM_SCHMIDT_EPS:
            raise InvalidInput("frame vector is numerically null")
        norms.append(q)
    for i in range(len(frame)):
        for j in range(i + 1, len(frame)):
            if abs(inner(metric, frame[i], frame[j])) > 1e-10:
                raise InvalidInput("frame vectors are not mutually orthogonal")

    wanted = metric.dim - len(frame)
    basis: list[np.ndarray] = []
    basis_norms: list[float] = []
    for i in range(metric.dim):
        if len(basis) == wanted:
            break
        r = metric.basis_vector(i)
        for f, q in zip(frame, norms):
            r = r - (inner(metric, r, f) / q) * f
        for e, q in zip(basis, basis_norms):
            r = r - (inner(metric, r, e) / q) * e
        rq = inner(metric, r, r)
        if abs(rq) < GRAM_SCHMIDT_EPS:
            continue
        e = r / np.sqrt(abs(rq))
        basis.append(e)
        basis_norms.append(inner(metric, e, e))
    if len(basis) < wanted:
        raise DegenerateComplement(
            f"found only {len(basis)} of {wanted} complement directions"
        )
    return basis


def sample_quadric(
    metric: SignatureMetric,
    basis,
    target,
    count: int,
    seed: int,
    box: float = 2.0,
) -> list[np.ndarray]:
    """Sample points y in span(basis), either on <y,y> = target or in a flat box.

    Quadric mode (target a number): coefficients are drawn from a seeded PRNG
    and rescaled onto the level set; when the drawn sign does not match, the
    last coefficient of a suitable sign is solved for instead.
    Flat mode (target="flat"): coefficients drawn uniformly from [-box, box].

    Raises:
        SignatureUnavailable: the target sign is unreachable on span(basis).
    """
    basis = [np.asarray(e, dtype=float) for e in basis]
    if not basis:
        raise InvalidInput("basis must be nonempty")
    eps = [inner(metric, e, e) for e in basis]
    rng = np.random.default_rng(seed)
    points = []

    if isinstance(target, str):
        if target != "flat":
            raise InvalidInput(f"unknown sampling mode {target!r}")
        for _ in range(count):
            c = rng.uniform(-box, box, size=len(basis))
            points.append(sum(ci * ei for ci, ei in zip(c, basis)))
        return points

    target = float(target)
    pos_ok = any(e > 0 for e in eps)
    neg_ok = any(e < 0 for e in eps)
    if target > 0 and not pos_ok:
        raise SignatureUnavailable("no positive-norm direction in span(basis)")
    if target < 0 and not neg_ok:
        raise SignatureUnavailable("no negative-norm direction in span(basis)")
    if target == 0.0 and not (pos_ok and neg_ok):
        raise SignatureUnavailable("definite span contains no nonzero null vectors")

    for _ in range(count):
        c = rng.uniform(-1.0, 1.0, size=len(basis))
        q = float(sum(e * ci * ci for e, ci in zip(eps, c)))
        if target != 0.0 and q * target > 0:
            c = c * np.sqrt(target / q)
        else:
            # Drawn sign unusable; solve for one coefficient whose sign
            # sector can absorb the gap (always exists, see need >= 0 scan).
            for i in reversed(range(len(basis))):
                rest = q - eps[i] * c[i] * c[i]
                need = (target - rest) / eps[i]
                if need >= 0:
                    c[i] = np.sqrt(need) * (1.0 if c[i] >= 0 else -1.0)
                    break
            else:
                raise SignatureUnavailable("could not place a coefficient on the target level")
        points.append(sum(ci * ei for ci, ei in zip(c, basis)))
    return points
