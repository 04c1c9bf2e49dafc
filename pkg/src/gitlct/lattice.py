"""Exponent vectors, normalized one-parameter subgroups and their pairings.

Everything here is integer arithmetic. A monomial ``x0^d0 ... xn^dn`` is a
plain tuple ``(d0, ..., dn)``; a diagonal one-parameter subgroup
``diag(s^a0, ..., s^an)`` is a :class:`NormalizedOPS` with weights sorted
non-increasingly and summing to zero.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import gcd
from typing import Iterable, Sequence, Tuple

ExponentVector = Tuple[int, ...]


class DimensionMismatch(ValueError):
    pass


def exponent_vector(exps: Iterable[int], degree: int | None = None) -> ExponentVector:
    """Validate and freeze an exponent list."""
    vec = tuple(int(e) for e in exps)
    if not vec:
        raise ValueError("empty exponent vector")
    if any(e < 0 for e in vec):
        raise ValueError(f"negative exponent in {vec}")
    if degree is not None and sum(vec) != degree:
        raise ValueError(f"exponents {vec} do not sum to degree {degree}")
    return vec


def _primitive(values: Sequence[int]) -> tuple[int, ...]:
    g = 0
    for v in values:
        g = gcd(g, v)
    if g == 0:
        raise ValueError("zero vector has no primitive representative")
    return tuple(v // g for v in values)


@dataclass(frozen=True, order=True)
class NormalizedOPS:
    """Weights ``a_0 >= ... >= a_n`` with ``sum(a) == 0``, primitive, nontrivial."""

    weights: tuple[int, ...]

    def __post_init__(self):
        w = tuple(int(a) for a in self.weights)
        object.__setattr__(self, "weights", w)
        if len(w) < 2:
            raise ValueError("need at least two weights")
        if sum(w) != 0:
            raise ValueError(f"weights {w} do not sum to zero")
        if not any(w):
            raise ValueError("trivial one-parameter subgroup")
        if any(w[i] < w[i + 1] for i in range(len(w) - 1)):
            raise ValueError(f"weights {w} are not non-increasing")
        if _primitive(w) != w:
            raise ValueError(f"weights {w} are not primitive")

    @property
    def n(self) -> int:
        return len(self.weights) - 1

    @property
    def last(self) -> int:
        return self.weights[-1]

    def __iter__(self):
        return iter(self.weights)

    def __str__(self):
        return "(" + ",".join(str(a) for a in self.weights) + ")"


@dataclass(frozen=True)
class Permutation:
    """``image[i]`` is the sorted position of original coordinate ``i``."""

    image: tuple[int, ...]

    def __post_init__(self):
        if sorted(self.image) != list(range(len(self.image))):
            raise ValueError(f"{self.image} is not a permutation")

    @classmethod
    def identity(cls, size: int) -> Permutation:
        return cls(tuple(range(size)))

    def is_identity(self) -> bool:
        return all(i == j for i, j in enumerate(self.image))

    def apply(self, values: Sequence) -> tuple:
        """Move ``values[i]`` to position ``image[i]``."""
        out = [None] * len(values)
        for i, j in enumerate(self.image):
            out[j] = values[i]
        return tuple(out)

    def inverse(self) -> Permutation:
        inv = [0] * len(self.image)
        for i, j in enumerate(self.image):
            inv[j] = i
        return Permutation(tuple(inv))


def make_normalized_ops(raw: Sequence[int]) -> tuple[NormalizedOPS, Permutation]:
    """Sort ``raw`` descending, divide by the gcd, and record the reordering.

    Ties keep their original relative order, so an already sorted input maps
    through the identity.
    """
    raw = [int(a) for a in raw]
    if sum(raw) != 0:
        raise ValueError(f"weights {raw} do not sum to zero")
    if not any(raw):
        raise ValueError("trivial one-parameter subgroup")
    order = sorted(range(len(raw)), key=lambda i: -raw[i])
    image = [0] * len(raw)
    for pos, i in enumerate(order):
        image[i] = pos
    weights = _primitive([raw[i] for i in order])
    return NormalizedOPS(weights), Permutation(tuple(image))


def primitive_ray(values: Sequence[int]) -> NormalizedOPS | None:
    """Return the ray as a NormalizedOPS if it already lies in the normalized cone."""
    try:
        return NormalizedOPS(_primitive(values))
    except ValueError:
        return None


def _check(I: ExponentVector, lam: NormalizedOPS) -> None:
    if len(I) != len(lam.weights):
        raise DimensionMismatch(
            f"exponent vector of length {len(I)} vs weights of length {len(lam.weights)}"
        )


def pairing(I: ExponentVector, lam: NormalizedOPS) -> int:
    _check(I, lam)
    return sum(d * a for d, a in zip(I, lam.weights))


def affine_weight_monomial(I: ExponentVector, lam: NormalizedOPS) -> int:
    """``sum_{j<n} d_j (a_j - a_n)``; always nonnegative on the normalized cone."""
    _check(I, lam)
    an = lam.last
    return sum(d * (a - an) for d, a in zip(I[:-1], lam.weights[:-1]))


def lambda_factor(lam: NormalizedOPS) -> int:
    """``sum_{k<n} a_k - n a_n``, which equals ``-(n+1) a_n`` for normalized weights."""
    w = lam.weights
    return sum(w[:-1]) - lam.n * w[-1]


def cone_extreme_rays(n: int) -> list[NormalizedOPS]:
    """Extreme rays of ``{a_0 >= ... >= a_n, sum a = 0}``.

    The j-th ray has j leading entries ``n+1-j`` followed by ``n+1-j``
    entries ``-j`` (then made primitive).
    """
    rays = []
    for j in range(1, n + 1):
        rays.append(NormalizedOPS(_primitive([n + 1 - j] * j + [-j] * (n + 1 - j))))
    return rays
