"""Hilbert-Mumford values, affine weights and per-subgroup verdicts.

For a tuple ``T = (f_1, ..., f_k)`` and a normalized subgroup ``lam`` the
affine weight ``omega(T, lam)`` is the minimum of ``sum_i aff(I_i, lam)`` over
k distinct monomials. Two readings of "admissible k monomials" are offered:

``Mode.COMBINATORIAL``
    ``I_i`` in ``Supp(f_i)`` and pairwise distinct. Basis dependent; solved
    as a min-cost assignment.
``Mode.EXACT``
    ``{I_1, ..., I_k}`` has a nonvanishing Plucker minor. Basis independent;
    solved greedily on the column matroid (this is the default).

Combinatorial omega never exceeds exact omega, so a combinatorial
``DESTABILIZED`` verdict is also an exact one. Only exact
``COMPATIBLE_WITH_STABLE`` verdicts are conclusive.
"""

from __future__ import annotations

import enum
import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .forms import (
    HyperplaneForm,
    HypersurfaceForm,
    TuplePoint,
    as_fraction,
    member_coordinates,
)
from .lattice import (
    ExponentVector,
    NormalizedOPS,
    affine_weight_monomial,
    lambda_factor,
    pairing,
)
from .linalg import rref, solve_combination


class Mode(str, enum.Enum):
    EXACT = "exact"
    COMBINATORIAL = "combinatorial"


class Classification(str, enum.Enum):
    DESTABILIZED = "destabilized"  # omega > threshold
    EQUALITY = "equality"  # omega == threshold
    COMPATIBLE_WITH_STABLE = "compatible_with_stable"  # omega < threshold


class NoFeasibleAssignment(ValueError):
    pass


class MemberNotInSystem(ValueError):
    pass


class DecompositionFailed(RuntimeError):
    def __init__(self, message: str, details: dict | None = None):
        super().__init__(message)
        self.details = details or {}


def classify(omega, threshold) -> Classification:
    if omega > threshold:
        return Classification.DESTABILIZED
    if omega == threshold:
        return Classification.EQUALITY
    return Classification.COMPATIBLE_WITH_STABLE


@dataclass(frozen=True)
class LambdaVerdict:
    lam: NormalizedOPS
    omega: Fraction
    threshold: Fraction
    classification: Classification

    def __post_init__(self):
        if self.threshold <= 0:
            raise ValueError("threshold must be positive")
        if classify(self.omega, self.threshold) is not self.classification:
            raise ValueError("classification inconsistent with stored values")

    @property
    def margin(self) -> Fraction:
        return Fraction(self.omega) - self.threshold


# --- hypersurfaces ---------------------------------------------------------------

def mu_hypersurface(f: HypersurfaceForm, lam: NormalizedOPS) -> int:
    return -min(pairing(I, lam) for I in f.support)


def omega_hypersurface(f: HypersurfaceForm, lam: NormalizedOPS) -> int:
    return min(affine_weight_monomial(I, lam) for I in f.support)


def omega_hyperplane(h: HyperplaneForm, lam: NormalizedOPS) -> int:
    return omega_hypersurface(h.as_form(), lam)


def verdict_for_lambda_hypersurface(f: HypersurfaceForm, lam: NormalizedOPS) -> LambdaVerdict:
    omega = Fraction(omega_hypersurface(f, lam))
    threshold = Fraction(f.d, f.n + 1) * lambda_factor(lam)
    return LambdaVerdict(lam, omega, threshold, classify(omega, threshold))


# --- assignment ---------------------------------------------------------------

def min_cost_assignment(cost: Sequence[Sequence[int | None]]) -> tuple[int, list[int]]:
    """Minimum-cost assignment of every row to a distinct column.

    ``cost[i][j] is None`` forbids the edge. Rows must not outnumber columns.
    Shortest augmenting paths with potentials (Hungarian method), in exact
    integers. Returns ``(total, column_of_row)``.
    """
    rows = len(cost)
    cols = len(cost[0]) if rows else 0
    if rows > cols:
        raise NoFeasibleAssignment("more rows than columns")
    finite = [c for row in cost for c in row if c is not None]
    # Any assignment through a forbidden cell must cost more than every
    # feasible one, whatever the signs of the finite costs.
    big = 2 * rows * (max((abs(c) for c in finite), default=0) + 1) + 1
    a = [[big if c is None else c for c in row] for row in cost]

    # 1-based arrays following the classical formulation; column 0 is virtual.
    u = [0] * (rows + 1)
    v = [0] * (cols + 1)
    owner = [0] * (cols + 1)
    way = [0] * (cols + 1)
    for i in range(1, rows + 1):
        owner[0] = i
        j0 = 0
        minv = [None] * (cols + 1)
        used = [False] * (cols + 1)
        while True:
            used[j0] = True
            i0 = owner[j0]
            delta, j1 = None, 0
            for j in range(1, cols + 1):
                if not used[j]:
                    cur = a[i0 - 1][j - 1] - u[i0] - v[j]
                    if minv[j] is None or cur < minv[j]:
                        minv[j] = cur
                        way[j] = j0
                    if delta is None or minv[j] < delta:
                        delta, j1 = minv[j], j
            for j in range(cols + 1):
                if used[j]:
                    u[owner[j]] += delta
                    v[j] -= delta
                elif minv[j] is not None:
                    minv[j] -= delta
            j0 = j1
            if owner[j0] == 0:
                break
        while j0:
            j1 = way[j0]
            owner[j0] = owner[j1]
            j0 = j1
    assignment = [0] * rows
    for j in range(1, cols + 1):
        if owner[j]:
            assignment[owner[j] - 1] = j - 1
    if any(cost[i][assignment[i]] is None for i in range(rows)):
        raise NoFeasibleAssignment("no system of distinct representatives")
    return sum(cost[i][assignment[i]] for i in range(rows)), assignment


# --- tuples ---------------------------------------------------------------------

def lambda_order_key(lam: NormalizedOPS):
    """Total order on monomials: affine weight, then lexicographic."""
    return lambda I: (affine_weight_monomial(I, lam), I)


def exact_minimal_subset(T: TuplePoint, lam: NormalizedOPS) -> tuple[ExponentVector, ...]:
    """The k monomials of minimal weight with nonvanishing Plucker minor.

    Greedy over the column matroid: scanning columns by increasing weight,
    the echelon pivots form a minimum-weight basis.
    """
    cols = T.columns
    order = sorted(range(len(cols)), key=lambda i: lambda_order_key(lam)(cols[i]))
    _, pivots = rref(T.coefficient_matrix(), order)
    return tuple(cols[i] for i in pivots)


def combinatorial_minimal_tuple(T: TuplePoint, lam: NormalizedOPS) -> tuple[ExponentVector, ...]:
    cols = T.columns
    cost = [[affine_weight_monomial(I, lam) if I in set(g.support) else None for I in cols]
            for g in T.generators]
    _, assignment = min_cost_assignment(cost)
    return tuple(cols[j] for j in assignment)


def omega_tuple(T: TuplePoint, lam: NormalizedOPS, mode: Mode = Mode.EXACT) -> int:
    mode = Mode(mode)
    if mode is Mode.EXACT:
        chosen = exact_minimal_subset(T, lam)
    else:
        chosen = combinatorial_minimal_tuple(T, lam)
    return sum(affine_weight_monomial(I, lam) for I in chosen)


def tuple_threshold(T: TuplePoint, lam: NormalizedOPS) -> Fraction:
    return Fraction(T.k * T.d, T.n + 1) * lambda_factor(lam)


def verdict_for_lambda(T: TuplePoint, lam: NormalizedOPS, mode: Mode = Mode.EXACT) -> LambdaVerdict:
    omega = Fraction(omega_tuple(T, lam, mode))
    threshold = tuple_threshold(T, lam)
    return LambdaVerdict(lam, omega, threshold, classify(omega, threshold))


# --- VGIT -------------------------------------------------------------------------

@dataclass(frozen=True)
class VGITConfig:
    t: tuple[Fraction, ...]
    hyperplanes: tuple[HyperplaneForm, ...]

    def __post_init__(self):
        t = tuple(as_fraction(x) for x in self.t)
        hs = tuple(self.hyperplanes)
        object.__setattr__(self, "t", t)
        object.__setattr__(self, "hyperplanes", hs)
        if not hs:
            raise ValueError("need at least one hyperplane")
        if len(t) != len(hs):
            raise ValueError("one t value per hyperplane")
        if any(x <= 0 for x in t):
            raise ValueError("t values must be positive")
        for a, b in itertools.combinations(hs, 2):
            if a.proportional_to(b):
                raise ValueError("hyperplanes must be distinct")

    @property
    def m(self) -> int:
        return len(self.hyperplanes)

    @property
    def t_sum(self) -> Fraction:
        return sum(self.t, Fraction(0))

    def with_t(self, t: Sequence) -> VGITConfig:
        return VGITConfig(tuple(t), self.hyperplanes)


def hyperplane_term(cfg: VGITConfig, lam: NormalizedOPS) -> Fraction:
    return sum((ti * omega_hyperplane(h, lam) for ti, h in zip(cfg.t, cfg.hyperplanes)),
               Fraction(0))


def omega_vgit(T: TuplePoint, cfg: VGITConfig, lam: NormalizedOPS,
               mode: Mode = Mode.EXACT) -> Fraction:
    return omega_tuple(T, lam, mode) + hyperplane_term(cfg, lam)


def vgit_threshold(T: TuplePoint, cfg: VGITConfig, lam: NormalizedOPS) -> Fraction:
    return (T.k * T.d + cfg.t_sum) / (T.n + 1) * lambda_factor(lam)


def verdict_vgit_for_lambda(T: TuplePoint, cfg: VGITConfig, lam: NormalizedOPS,
                            mode: Mode = Mode.EXACT) -> LambdaVerdict:
    omega = omega_vgit(T, cfg, lam, mode)
    threshold = vgit_threshold(T, cfg, lam)
    return LambdaVerdict(lam, omega, threshold, classify(omega, threshold))


# --- decomposition ------------------------------------------------------------

@dataclass(frozen=True)
class Decomposition:
    """``omega(T) = omega(f) + sum omega(g_i)`` with its witnesses."""

    lam: NormalizedOPS
    mode: Mode
    f: HypersurfaceForm
    members: tuple[HypersurfaceForm, ...]
    member_coordinates: tuple[tuple[Fraction, ...], ...]
    leading_monomials: tuple[ExponentVector, ...]  # f first, then each g_i
    leading_generator: int | None  # a generator sharing f's minimal monomial
    omega_f: int
    omega_members: tuple[int, ...]
    omega_tuple: int

    @property
    def total(self) -> int:
        return self.omega_f + sum(self.omega_members)

    def vgit_sides(self, cfg: VGITConfig) -> tuple[Fraction, Fraction]:
        extra = hyperplane_term(cfg, self.lam)
        return self.omega_tuple + extra, self.total + extra


def decompose_omegas(T: TuplePoint, f: HypersurfaceForm, lam: NormalizedOPS,
                     mode: Mode = Mode.EXACT) -> Decomposition:
    """Find members ``g_1, ..., g_{k-1}`` completing ``f`` to an omega-sum.

    Each ``g_i`` is chosen with a minimal monomial (in the affine-weight
    order with lexicographic tie-break) that is not the minimal monomial of
    ``f`` or of any earlier ``g_j``, by echelon reduction of the generators
    along that order. The chosen leading monomials are then the greedy
    minimum-weight basis, so the identity holds for ``Mode.EXACT``. In
    ``Mode.COMBINATORIAL`` it holds iff both modes agree on ``T``; otherwise
    :class:`DecompositionFailed` is raised with the two values attached.
    """
    mode = Mode(mode)
    z = member_coordinates(T, f)
    if z is None:
        raise MemberNotInSystem(f"{f} is not a member of {T}")
    key = lambda_order_key(lam)
    cols = T.columns
    order = sorted(range(len(cols)), key=lambda i: key(cols[i]))
    matrix = T.coefficient_matrix()
    rows, pivots = rref(matrix, order)
    lead = min(f.support, key=key)
    r = next(i for i, p in enumerate(pivots) if cols[p] == lead)

    members, coords, leads = [], [], [lead]
    for i, (row, p) in enumerate(zip(rows, pivots)):
        if i == r:
            continue
        g = HypersurfaceForm(T.n, T.d, {c: x for c, x in zip(cols, row) if x})
        members.append(g)
        coords.append(tuple(solve_combination(matrix, row)))
        leads.append(cols[p])

    leading_generator = next(
        (i for i, g in enumerate(T.generators) if min(g.support, key=key) == lead), None)
    omega_f = omega_hypersurface(f, lam)
    omega_members = tuple(omega_hypersurface(g, lam) for g in members)
    target = omega_tuple(T, lam, mode)
    total = omega_f + sum(omega_members)
    if total != target:
        raise DecompositionFailed(
            f"omega({mode.value}) = {target} but the constructed members sum to {total}",
            {"lambda": lam.weights, "omega_tuple": target, "sum": total,
             "f": str(f), "members": [str(g) for g in members]},
        )
    return Decomposition(lam, mode, f, tuple(members), tuple(coords), tuple(leads),
                         leading_generator, omega_f, omega_members, target)
