"""Newton-polyhedron log canonical thresholds and lct-based stability criteria.

The oracle computes ``c = min{s : s(1, ..., 1) in Newton(g)}`` exactly from
the facets of the Newton polyhedron and returns ``min(1, 1/c)``. That value
is the local lct when the germ is Newton nondegenerate and an upper bound
otherwise; nondegeneracy is never verified here.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping, Sequence

from .forms import (
    HypersurfaceForm,
    ProjectivePoint,
    TuplePoint,
    apply_transform,
    as_fraction,
    is_base_point,
    transform_to_last_coordinate,
)
from .lattice import NormalizedOPS, lambda_factor
from .linalg import integer_kernel_vector
from .opssearch import TorusStatus, TupleStability, candidate_lambdas
from .weights import Mode, omega_hypersurface, omega_tuple


class PointNotOnHypersurface(ValueError):
    pass


class BoundUndefined(ValueError):
    pass


class OutsideRegime(ValueError):
    pass


@dataclass(frozen=True)
class LocalGerm:
    """A polynomial germ at the origin of affine n-space, no constant term."""

    terms: Mapping[tuple[int, ...], Fraction]

    def __post_init__(self):
        clean = {tuple(int(x) for x in e): as_fraction(c) for e, c in self.terms.items()}
        clean = {e: c for e, c in sorted(clean.items(), reverse=True) if c}
        if not clean:
            raise ValueError("germ has no terms")
        dims = {len(e) for e in clean}
        if len(dims) != 1:
            raise ValueError("exponent vectors of different lengths")
        if any(x < 0 for e in clean for x in e):
            raise ValueError("negative exponent in germ")
        if any(not any(e) for e in clean):
            raise ValueError("germ has a constant term, it does not vanish at the origin")
        object.__setattr__(self, "terms", clean)

    @property
    def n(self) -> int:
        return len(next(iter(self.terms)))

    @property
    def support(self) -> tuple[tuple[int, ...], ...]:
        return tuple(self.terms)

    @classmethod
    def monomial(cls, *exps: int) -> LocalGerm:
        return cls({tuple(exps): 1})

    @classmethod
    def parse(cls, text: str, n: int) -> LocalGerm:
        """Parse in variables ``x0..x{n-1}``; the text need not be homogeneous."""
        from .forms import _parse_poly

        poly = _parse_poly(text, n - 1)
        return cls(poly)


def localize(f: HypersurfaceForm, p: ProjectivePoint) -> LocalGerm:
    """Germ of ``f`` at ``p`` in the affine chart of the last coordinate after moving ``p`` there."""
    if p.n != f.n:
        raise ValueError("point and form live in different spaces")
    if f.evaluate(p.coords) != 0:
        raise PointNotOnHypersurface(f"{f} does not vanish at {p}")
    g = apply_transform(f, transform_to_last_coordinate(p))
    terms: dict[tuple[int, ...], Fraction] = {}
    for exps, c in g.items():
        key = exps[:-1]
        terms[key] = terms.get(key, Fraction(0)) + c
    return LocalGerm(terms)


@dataclass(frozen=True, order=True)
class Facet:
    """``<normal, x> >= offset`` with a primitive nonnegative integer normal."""

    normal: tuple[int, ...]
    offset: int


@dataclass(frozen=True)
class NewtonPolyhedron:
    generators: tuple[tuple[int, ...], ...]
    facets: tuple[Facet, ...]

    def contains(self, point: Sequence) -> bool:
        return all(sum(w * Fraction(x) for w, x in zip(f.normal, point)) >= f.offset
                   for f in self.facets)


def newton_polyhedron(g: LocalGerm) -> NewtonPolyhedron:
    """Facets of ``conv(Supp g) + R_{>=0}^n`` by exact enumeration.

    Every facet is spanned by some generating exponents together with some
    coordinate directions; each such choice with a one-dimensional solution
    space is tried and kept if it supports the whole region.
    """
    n = g.n
    pts = g.support
    facets = set()
    for j in range(1, n + 1):
        for combo in itertools.combinations(pts, j):
            for dirs in itertools.combinations(range(n), n - j):
                rows = [list(p) + [-1] for p in combo]
                rows += [[1 if c == i else 0 for c in range(n)] + [0] for i in dirs]
                vec = integer_kernel_vector(rows)
                if vec is None:
                    continue
                w, b = vec[:n], vec[n]
                if all(x <= 0 for x in w):
                    w, b = tuple(-x for x in w), -b
                if any(x < 0 for x in w) or not any(w):
                    continue
                if all(sum(a * x for a, x in zip(w, p)) >= b for p in pts):
                    facets.add(Facet(tuple(int(x) for x in w), int(b)))
    return NewtonPolyhedron(pts, tuple(sorted(facets, key=lambda f: (f.normal, f.offset))))


@dataclass(frozen=True)
class LctValue:
    value: Fraction
    newton_c: Fraction  # min s with s(1,...,1) in the Newton polyhedron
    binding_facet: Facet
    nondegenerate_assumed: bool = True

    def __post_init__(self):
        if not 0 < self.value <= 1:
            raise ValueError("lct must lie in (0, 1]")


def lct_newton(g: LocalGerm) -> LctValue:
    poly = newton_polyhedron(g)
    # Ties prefer a strictly positive normal (a genuine weighted blow-up of the origin).
    c, _, facet = max(
        (Fraction(f.offset, sum(f.normal)), all(f.normal), f)
        for f in poly.facets if f.offset > 0
    )
    return LctValue(min(Fraction(1), 1 / c), c, facet)


def local_lct(f: HypersurfaceForm, p: ProjectivePoint) -> LctValue:
    return lct_newton(localize(f, p))


def global_lct(f: HypersurfaceForm, points: Sequence[ProjectivePoint]) -> Fraction:
    """Minimum of the local values over ``points``, and 1 for the smooth locus."""
    return min([Fraction(1)] + [local_lct(f, p).value for p in points])


def weighted_multiplicity(g: LocalGerm, weights: Sequence[int]) -> int:
    return min(sum(w * e for w, e in zip(weights, exps)) for exps in g.support)


def weighted_blowup_discrepancy(g: LocalGerm, weights: Sequence[int], c) -> Fraction:
    """Log discrepancy ``sum w - 1 - c * mult_w(g)`` of the weighted blow-up divisor.

    The pair ``(A^n, c g)`` is not log canonical along the divisor when this
    is below ``-1``. Zero weights are allowed (toric divisors over coordinate
    subspaces) as long as one weight is positive.
    """
    if len(weights) != g.n or any(w < 0 for w in weights) or not any(weights):
        raise ValueError("weights must be nonnegative and not all zero, one per variable")
    return sum(weights) - 1 - as_fraction(c) * weighted_multiplicity(g, weights)


# --- stability criteria ---------------------------------------------------------

def _require_last_coordinate(p: ProjectivePoint) -> None:
    if any(p.coords[:-1]) or p.coords[-1] == 0:
        raise ValueError("move the base point to (0:...:0:1) first")


def tuple_lct_bound(T: TuplePoint, p: ProjectivePoint, lam: NormalizedOPS,
                    mode: Mode = Mode.EXACT) -> Fraction:
    """``Lambda(lam) / omega(T, lam)`` at the base point ``p = (0:...:0:1)``."""
    if T.k < 2:
        raise ValueError("the bound needs k > 1")
    _require_last_coordinate(p)
    if not is_base_point(T, p):
        raise PointNotOnHypersurface(f"{p} is not a base point")
    omega = omega_tuple(T, lam, mode)
    if omega == 0:
        raise BoundUndefined(f"omega(T, {lam}) = 0")
    return Fraction(lambda_factor(lam), omega)


def swept_lct_bounds(T: TuplePoint, p: ProjectivePoint, mode: Mode = Mode.EXACT):
    """``(ray, bound)`` for every candidate ray where the bound is defined."""
    out = []
    for lam in candidate_lambdas(T, mode=mode):
        try:
            out.append((lam, tuple_lct_bound(T, p, lam, mode)))
        except BoundUndefined:
            continue
    return out


def existential_lct_bound(T: TuplePoint, p: ProjectivePoint, mode: Mode = Mode.EXACT):
    """The smallest swept bound and its ray.

    Some subgroup's bound lies below every member's local lct exactly when
    this smallest bound does.
    """
    swept = swept_lct_bounds(T, p, mode)
    if not swept:
        raise BoundUndefined("omega vanishes on every candidate ray")
    return min(swept, key=lambda item: (item[1], item[0].weights))


@dataclass(frozen=True)
class NecessaryReport:
    threshold: Fraction  # (n+1)/(kd)
    member_lcts: dict
    rules_out_stable: bool  # some member lct <= threshold
    rules_out_semistable: bool  # some member lct < threshold
    claimed: str | None
    violations: tuple

    @property
    def consistent(self) -> bool:
        return not self.violations


def necessary_condition_check(T: TuplePoint, p: ProjectivePoint,
                              member_lcts: Mapping[str, Fraction],
                              claimed=None) -> NecessaryReport:
    """Compare member lcts at a base point with ``(n+1)/(kd)``.

    A stable tuple needs every value strictly above the threshold, a
    semistable one needs them at or above it. ``claimed`` may be a
    :class:`TupleStability` or :class:`TorusStatus`; violations of the claim
    are listed, and the two ``rules_out`` flags are reported regardless.
    """
    if T.k < 2:
        raise ValueError("the criterion needs k > 1")
    if not is_base_point(T, p):
        raise PointNotOnHypersurface(f"{p} is not a base point")
    thr = Fraction(T.n + 1, T.k * T.d)
    lcts = {name: as_fraction(v) for name, v in member_lcts.items()}
    out_stable = any(v <= thr for v in lcts.values())
    out_semi = any(v < thr for v in lcts.values())
    need = None
    if claimed is not None:
        claimed = {TorusStatus.STABLE: "stable", TupleStability.STABLE: "stable",
                   TorusStatus.STRICTLY_SEMISTABLE: "semistable",
                   TupleStability.SEMISTABLE: "semistable"}.get(claimed, str(claimed))
        need = claimed
    violations = []
    for name, v in lcts.items():
        if (need == "stable" and v <= thr) or (need == "semistable" and v < thr):
            violations.append((name, v))
    return NecessaryReport(thr, lcts, out_stable, out_semi, need, tuple(violations))


@dataclass(frozen=True)
class CriterionResult:
    threshold: Fraction
    conclusion: TupleStability | None
    vacuous: bool = False  # threshold above 1, unreachable by reduced members


def _compare(value: Fraction, thr: Fraction) -> TupleStability | None:
    if value > thr:
        return TupleStability.STABLE
    if value == thr:
        return TupleStability.SEMISTABLE
    return None


def sufficient_semistable_via_lct(n: int, d: int, k: int, certified_min_lct) -> CriterionResult:
    """Min lct over all members ``>= (n+1)/d`` gives semistable, ``>`` gives stable."""
    thr = Fraction(n + 1, d)
    return CriterionResult(thr, _compare(as_fraction(certified_min_lct), thr), thr > 1)


def sufficient_vgit_via_lct(n: int, d: int, k: int, t: Sequence, certified_min_lct) -> CriterionResult:
    """Threshold ``k(n+1) / (kd - n sum t)``; raises :class:`OutsideRegime` when not positive."""
    total = sum((as_fraction(x) for x in t), Fraction(0))
    denom = k * d - n * total
    if denom <= 0:
        raise OutsideRegime(f"kd - n*sum(t) = {denom} is not positive")
    thr = Fraction(k * (n + 1)) / denom
    return CriterionResult(thr, _compare(as_fraction(certified_min_lct), thr), thr > 1)


@dataclass(frozen=True)
class KollarReport:
    ratio: Fraction  # omega / Lambda
    bound: Fraction  # 1/lct, or k/lct for tuples
    holds: bool


def kollar_bound_check(f: HypersurfaceForm, lam: NormalizedOPS, lct) -> KollarReport:
    """``omega(f, lam) / Lambda(lam) <= 1 / lct``."""
    ratio = Fraction(omega_hypersurface(f, lam), lambda_factor(lam))
    bound = 1 / as_fraction(lct)
    return KollarReport(ratio, bound, ratio <= bound)


def kollar_tuple_check(T: TuplePoint, lam: NormalizedOPS, worst_member_lct,
                       mode: Mode = Mode.EXACT) -> KollarReport:
    """``omega(T, lam) / Lambda(lam) <= k / lct`` for the least lct among members."""
    ratio = Fraction(omega_tuple(T, lam, mode), lambda_factor(lam))
    bound = T.k / as_fraction(worst_member_lct)
    return KollarReport(ratio, bound, ratio <= bound)

