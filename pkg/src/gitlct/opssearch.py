"""Candidate subgroups, torus verdicts, destabilizer search and VGIT walls.

On the normalized cone ``C = {a_0 >= ... >= a_n, sum a = 0}`` the difference
``omega(T, lam) - threshold(lam)`` equals ``min_S <sigma_S, lam>``, where
``sigma_S`` is the exponent sum of an admissible k-subset ``S``. It is a
minimum of linear forms, hence concave and piecewise linear, and its sign on
``C`` is decided on the rays of the refinement of ``C`` by the tie
hyperplanes ``<sigma_S - sigma_S', lam> = 0``. The hyperplane terms of the
VGIT weight are linear on ``C`` and add no further linearity breaks.
"""

from __future__ import annotations

import enum
import itertools
import random
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd
from typing import Callable, Iterable, Sequence

from .forms import (
    HyperplaneForm,
    ProjectivePoint,
    ProjectiveTransform,
    SingularTransform,
    TuplePoint,
    apply_transform,
    distinct_support_tuples,
    plucker_support,
    transform_to_last_coordinate,
)
from .lattice import NormalizedOPS, cone_extreme_rays, lambda_factor, primitive_ray
from .weights import (
    Classification,
    LambdaVerdict,
    Mode,
    VGITConfig,
    omega_hyperplane,
    omega_tuple,
    verdict_for_lambda,
    verdict_vgit_for_lambda,
)


def parallel_map(fn: Callable, items: Sequence, jobs: int = 1) -> list:
    """Order-preserving map; results never depend on ``jobs``."""
    if jobs <= 1 or len(items) <= 1:
        return [fn(x) for x in items]
    with ProcessPoolExecutor(max_workers=jobs) as pool:
        return list(pool.map(fn, items, chunksize=max(1, len(items) // (4 * jobs))))


# --- candidate rays -------------------------------------------------------------

def _int_det(m: list[list[int]]) -> int:
    """Fraction-free Bareiss elimination."""
    a = [row[:] for row in m]
    size = len(a)
    sign, prev = 1, 1
    for k in range(size - 1):
        if a[k][k] == 0:
            swap = next((r for r in range(k + 1, size) if a[r][k] != 0), None)
            if swap is None:
                return 0
            a[k], a[swap] = a[swap], a[k]
            sign = -sign
        for i in range(k + 1, size):
            for j in range(k + 1, size):
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // prev
        prev = a[k][k]
    return sign * a[-1][-1] if size else 1


def _kernel_ray(rows: list[list[int]]) -> tuple[int, ...] | None:
    """Generator of the kernel of an ``n x (n+1)`` integer matrix of full rank."""
    ncols = len(rows[0])
    comps = []
    for i in range(ncols):
        minor = [[r[j] for j in range(ncols) if j != i] for r in rows]
        comps.append((-1) ** i * _int_det(minor))
    g = 0
    for c in comps:
        g = gcd(g, c)
    if g == 0:
        return None
    return tuple(c // g for c in comps)


def _primitive_normal(v: Sequence[int]) -> tuple[int, ...] | None:
    g = 0
    for x in v:
        g = gcd(g, x)
    if g == 0:
        return None
    v = [x // g for x in v]
    lead = next(x for x in v if x)
    return tuple(-x for x in v) if lead < 0 else tuple(v)


def admissible_subsets(T: TuplePoint, mode: Mode = Mode.EXACT) -> list[tuple]:
    """k-subsets whose weight sums define omega in the given mode."""
    mode = Mode(mode)
    if mode is Mode.EXACT:
        return plucker_support(T).subsets
    seen = {}
    for combo in distinct_support_tuples(T):
        key = tuple(sorted(combo, reverse=True))
        seen.setdefault(key, None)
    return list(seen)


def subset_sums(T: TuplePoint, mode: Mode = Mode.EXACT) -> list[tuple[int, ...]]:
    sums = {tuple(map(sum, zip(*S))) for S in admissible_subsets(T, mode)}
    return sorted(sums, reverse=True)


def _dominates(u: Sequence[int], v: Sequence[int]) -> bool:
    """``<u, lam> >= <v, lam>`` on the whole normalized cone (u != v)."""
    acc = 0
    for x, y in zip(u[:-1], v[:-1]):
        acc += x - y
        if acc < 0:
            return False
    return True


def minimal_subset_sums(sums: Sequence[tuple[int, ...]]) -> list[tuple[int, ...]]:
    """Drop every sum that dominates another; the minimum over C is unchanged."""
    return [u for u in sums if not any(u != v and _dominates(u, v) for v in sums)]


@dataclass(frozen=True)
class CandidateSet:
    rays: tuple[NormalizedOPS, ...]
    provenance: dict = field(compare=False, default_factory=dict)

    def __iter__(self):
        return iter(self.rays)

    def __len__(self):
        return len(self.rays)

    def __contains__(self, lam):
        return lam in self.rays


def _cut_hyperplanes(T: TuplePoint, cfg: VGITConfig | None, mode: Mode, prune: bool):
    n = T.n
    cuts: dict[tuple[int, ...], str] = {}

    def add(normal, label):
        v = _primitive_normal(normal)
        if v is not None and len(set(v)) > 1:
            cuts.setdefault(v, label)

    for j in range(n):
        add([1 if i == j else -1 if i == j + 1 else 0 for i in range(n + 1)],
            f"facet a{j}=a{j + 1}")
    sums = subset_sums(T, mode)
    if prune:
        sums = minimal_subset_sums(sums)
    for u, v in itertools.combinations(sums, 2):
        add([x - y for x, y in zip(u, v)], f"tie {u}~{v}")
    if cfg is not None:
        for j in range(n + 1):
            add([1 if i == j else 0 for i in range(n + 1)], f"sign a{j}=0")
        for h in cfg.hyperplanes:
            for i, j in itertools.combinations(h.support, 2):
                add([1 if c == i else -1 if c == j else 0 for c in range(n + 1)],
                    f"hyperplane a{i}=a{j}")
    return cuts


def candidate_lambdas(T: TuplePoint, cfg: VGITConfig | None = None,
                      mode: Mode = Mode.EXACT, prune: bool = False) -> CandidateSet:
    """Primitive rays of the normalized cone refined by all tie hyperplanes.

    With ``prune=True`` subset sums that dominate another sum on the cone are
    discarded first; they never attain the minimum, so the verdicts read off
    the smaller ray set are the same.
    """
    n = T.n
    cuts = _cut_hyperplanes(T, cfg, Mode(mode), prune)
    ones = [1] * (n + 1)
    provenance: dict[NormalizedOPS, list[str]] = {}
    for lam in cone_extreme_rays(n):
        provenance.setdefault(lam, []).append("cone extreme ray")
    normals = list(cuts)
    for combo in itertools.combinations(range(len(normals)), n - 1):
        vec = _kernel_ray([ones] + [list(normals[i]) for i in combo])
        if vec is None:
            continue
        for cand in (vec, tuple(-x for x in vec)):
            lam = primitive_ray(cand)
            if lam is not None:
                labels = provenance.setdefault(lam, [])
                if len(labels) < 4:
                    labels.append(" & ".join(cuts[normals[i]] for i in combo))
    rays = tuple(sorted(provenance, key=lambda r: r.weights, reverse=True))
    return CandidateSet(rays, {r: tuple(provenance[r]) for r in rays})


# --- torus verdicts -------------------------------------------------------------

class TorusStatus(str, enum.Enum):
    STABLE = "torus_stable"
    STRICTLY_SEMISTABLE = "torus_strictly_semistable"
    UNSTABLE = "torus_unstable"


@dataclass(frozen=True)
class Certificate:
    lam: NormalizedOPS
    transform: ProjectiveTransform
    omega: Fraction
    threshold: Fraction
    mode: Mode
    classification: Classification
    label: str = "identity"

    def recheck(self, T: TuplePoint, cfg: VGITConfig | None = None) -> bool:
        """Re-evaluate the verdict on ``transform . T`` and compare."""
        TT = apply_transform(T, self.transform)
        if cfg is None:
            v = verdict_for_lambda(TT, self.lam, self.mode)
        else:
            v = verdict_vgit_for_lambda(TT, transform_config(cfg, self.transform),
                                        self.lam, self.mode)
        return (v.omega, v.threshold, v.classification) == (
            self.omega, self.threshold, self.classification)


@dataclass(frozen=True)
class TorusVerdict:
    status: TorusStatus
    witnesses: tuple[Certificate, ...]
    ray_verdicts: tuple[LambdaVerdict, ...]
    mode: Mode


def transform_config(cfg: VGITConfig, A: ProjectiveTransform) -> VGITConfig:
    return VGITConfig(cfg.t, tuple(apply_transform(h, A) for h in cfg.hyperplanes))


def aggregate(verdicts: Iterable[LambdaVerdict]) -> TorusStatus:
    classes = {v.classification for v in verdicts}
    if Classification.DESTABILIZED in classes:
        return TorusStatus.UNSTABLE
    if Classification.EQUALITY in classes:
        return TorusStatus.STRICTLY_SEMISTABLE
    return TorusStatus.STABLE


def torus_verdict(T: TuplePoint, cfg: VGITConfig | None = None, mode: Mode = Mode.EXACT,
                  candidates: CandidateSet | None = None,
                  transform: ProjectiveTransform | None = None,
                  label: str = "identity") -> TorusVerdict:
    """Verdict with respect to the diagonal torus and the normalized chamber.

    ``transform`` and ``label`` are recorded in the witnesses only; pass the
    already transformed tuple.
    """
    mode = Mode(mode)
    if candidates is None:
        candidates = candidate_lambdas(T, cfg, mode, prune=True)
    if cfg is None:
        verdicts = tuple(verdict_for_lambda(T, lam, mode) for lam in candidates)
    else:
        verdicts = tuple(verdict_vgit_for_lambda(T, cfg, lam, mode) for lam in candidates)
    status = aggregate(verdicts)
    wanted = {TorusStatus.UNSTABLE: Classification.DESTABILIZED,
              TorusStatus.STRICTLY_SEMISTABLE: Classification.EQUALITY}.get(status)
    A = transform or ProjectiveTransform.identity(T.n + 1)
    witnesses = tuple(
        Certificate(v.lam, A, v.omega, v.threshold, mode, v.classification, label)
        for v in verdicts if v.classification is wanted)
    return TorusVerdict(status, witnesses, verdicts, mode)


# --- member combinators ---------------------------------------------------------

class MemberStability(str, enum.Enum):
    STABLE = "stable"
    STRICTLY_SEMISTABLE = "strictly_semistable"
    UNSTABLE = "unstable"


class TupleStability(str, enum.Enum):
    STABLE = "stable"
    SEMISTABLE = "semistable"


def tuple_verdict_from_members(member_verdicts: Sequence) -> TupleStability | None:
    """Combine member verdicts covering every member of the linear system.

    All stable, or a single strictly semistable member with all others
    stable, gives a stable tuple; all semistable gives a semistable tuple.
    Any unstable member gives no conclusion.
    """
    verdicts = [MemberStability(v) for v in member_verdicts]
    if not verdicts:
        raise ValueError("need at least one member verdict")
    if MemberStability.UNSTABLE in verdicts:
        return None
    if verdicts.count(MemberStability.STRICTLY_SEMISTABLE) <= 1:
        return TupleStability.STABLE
    return TupleStability.SEMISTABLE


# --- destabilizer search --------------------------------------------------------

NO_DESTABILIZER = "no destabilizer found under searched transforms"
FOUND = "destabilizer found"
SKIPPED_SMOOTH = "search skipped: all members smooth"


@dataclass(frozen=True)
class SearchResult:
    certificate: Certificate | None
    status: str
    transforms_tried: int
    delegated: TupleStability | None = None


def random_transforms(size: int, count: int, seed: int, bound: int = 3):
    """``count`` seeded invertible integer matrices with entries in ``[-bound, bound]``."""
    rng = random.Random(seed)
    out = []
    while len(out) < count:
        matrix = [[rng.randint(-bound, bound) for _ in range(size)] for _ in range(size)]
        try:
            out.append(ProjectiveTransform(matrix))
        except SingularTransform:
            continue
    return out


def search_transforms(size: int, permutations: bool = True,
                      transforms: Sequence[ProjectiveTransform] = (),
                      random_count: int = 0, seed: int = 0,
                      base_points: Sequence[ProjectivePoint] = ()):
    """The labelled transform list searched, in a fixed order."""
    out = []
    if permutations:
        for perm in itertools.permutations(range(size)):
            out.append((f"permutation {perm}", ProjectiveTransform.from_permutation(perm)))
    for p in base_points:
        out.append((f"base point {p} to last coordinate", transform_to_last_coordinate(p)))
    for i, A in enumerate(transforms):
        out.append((f"user transform #{i}", A))
    for i, A in enumerate(random_transforms(size, random_count, seed)):
        out.append((f"random transform #{i} (seed {seed})", A))
    if not out:
        out.append(("identity", ProjectiveTransform.identity(size)))
    return out


def _verdict_under(args):
    T, cfg, mode, label, A = args
    TT = apply_transform(T, A)
    cc = transform_config(cfg, A) if cfg is not None else None
    return torus_verdict(TT, cc, mode, transform=A, label=label)


def destabilizer_search(T: TuplePoint, cfg: VGITConfig | None = None,
                        mode: Mode = Mode.EXACT, *, permutations: bool = True,
                        transforms: Sequence[ProjectiveTransform] = (),
                        random_count: int = 0, seed: int = 0,
                        base_points: Sequence[ProjectivePoint] = (),
                        smooth_members: bool = False, jobs: int = 1) -> SearchResult:
    """Look for a torus destabilizer of ``A . T`` over a list of transforms.

    One-sided: finding nothing is not a proof of semistability. When the
    caller asserts all members are smooth, the search is skipped and the
    verdict is delegated to :func:`tuple_verdict_from_members`.
    """
    if smooth_members:
        return SearchResult(None, SKIPPED_SMOOTH, 0,
                            tuple_verdict_from_members([MemberStability.STABLE]))
    mode = Mode(mode)
    todo = search_transforms(T.n + 1, permutations, transforms, random_count, seed, base_points)
    args = [(T, cfg, mode, label, A) for label, A in todo]
    if jobs <= 1:
        for i, a in enumerate(args):
            tv = _verdict_under(a)
            if tv.status is TorusStatus.UNSTABLE:
                return SearchResult(tv.witnesses[0], FOUND, i + 1)
        return SearchResult(None, NO_DESTABILIZER, len(args))
    for i, tv in enumerate(parallel_map(_verdict_under, args, jobs)):
        if tv.status is TorusStatus.UNSTABLE:
            return SearchResult(tv.witnesses[0], FOUND, i + 1)
    return SearchResult(None, NO_DESTABILIZER, len(args))


# --- VGIT walls -------------------------------------------------------------------

@dataclass(frozen=True)
class WallHyperplane:
    """``sum_i coeffs[i] * t_i == rhs`` in t-space."""

    coeffs: tuple[Fraction, ...]
    rhs: Fraction


def _wall_equation(T: TuplePoint, hyperplanes: Sequence[HyperplaneForm],
                   lam: NormalizedOPS, mode: Mode):
    """Coefficients ``c`` and right side ``r`` of the equality locus ``c . t = r``."""
    lf = lambda_factor(lam)
    coeffs = tuple(omega_hyperplane(h, lam) - Fraction(lf, T.n + 1) for h in hyperplanes)
    rhs = Fraction(T.k * T.d, T.n + 1) * lf - omega_tuple(T, lam, mode)
    return coeffs, rhs


def per_ray_walls(T: TuplePoint, hyperplanes: Sequence[HyperplaneForm],
                  candidates: CandidateSet | None = None, mode: Mode = Mode.EXACT):
    """``(ray, t)`` pairs where a single hyperplane's weight comparison flips."""
    if len(hyperplanes) != 1:
        raise ValueError("per-ray wall values need exactly one hyperplane")
    skeleton = VGITConfig((1,), tuple(hyperplanes))
    if candidates is None:
        candidates = candidate_lambdas(T, skeleton, mode)
    out = []
    for lam in candidates:
        (c,), r = _wall_equation(T, hyperplanes, lam, Mode(mode))
        if c != 0 and r / c > 0:
            out.append((lam, r / c))
    return out


def vgit_walls(T: TuplePoint, hyperplanes: Sequence[HyperplaneForm],
               candidates: CandidateSet | None = None, mode: Mode = Mode.EXACT):
    """Wall values of ``t`` (one hyperplane) or wall hyperplanes in t-space.

    Candidate rays whose equality equation does not involve ``t`` contribute
    no wall and are skipped.
    """
    hyperplanes = tuple(hyperplanes)
    skeleton = VGITConfig((1,) * len(hyperplanes), hyperplanes)
    if candidates is None:
        candidates = candidate_lambdas(T, skeleton, mode)
    if len(hyperplanes) == 1:
        return sorted({t for _, t in per_ray_walls(T, hyperplanes, candidates, mode)})
    walls = set()
    for lam in candidates:
        coeffs, rhs = _wall_equation(T, hyperplanes, lam, Mode(mode))
        if not any(coeffs):
            continue
        meets_positive = (
            (rhs > 0 and any(c > 0 for c in coeffs))
            or (rhs < 0 and any(c < 0 for c in coeffs))
            or (rhs == 0 and any(c > 0 for c in coeffs) and any(c < 0 for c in coeffs))
        )
        if not meets_positive:
            continue
        lead = next(c for c in coeffs if c)
        walls.add(WallHyperplane(tuple(c / lead for c in coeffs), rhs / lead))
    return sorted(walls, key=lambda w: (w.coeffs, w.rhs))


def corollary_regime_limit(T: TuplePoint) -> Fraction:
    """``kd/n``: beyond this total ``t`` the lct threshold's denominator is nonpositive."""
    return Fraction(T.k * T.d, T.n)


def vgit_scan(T: TuplePoint, hyperplanes: Sequence[HyperplaneForm], t_values: Sequence,
              mode: Mode = Mode.EXACT, jobs: int = 1):
    """Torus status at each ``t`` (one hyperplane), candidates shared across the grid."""
    hyperplanes = tuple(hyperplanes)
    skeleton = VGITConfig((1,) * len(hyperplanes), hyperplanes)
    cands = candidate_lambdas(T, skeleton, mode, prune=True)
    args = [(T, skeleton.with_t((t,)), Mode(mode), cands) for t in t_values]
    return parallel_map(_scan_point, args, jobs)


def _scan_point(args):
    T, cfg, mode, cands = args
    return cfg.t[0], torus_verdict(T, cfg, mode, candidates=cands).status
