import random
from fractions import Fraction
from types import SimpleNamespace

import pytest
from hypothesis import given
from hypothesis import strategies as st

from gitlct.forms import HyperplaneForm, ProjectiveTransform, apply_transform, tuple_of
from gitlct.lattice import NormalizedOPS
from gitlct.opssearch import (
    FOUND,
    NO_DESTABILIZER,
    SKIPPED_SMOOTH,
    Certificate,
    MemberStability,
    TorusStatus,
    TupleStability,
    WallHyperplane,
    candidate_lambdas,
    destabilizer_search,
    parallel_map,
    per_ray_walls,
    subset_sums,
    torus_verdict,
    tuple_verdict_from_members,
    vgit_scan,
    vgit_walls,
)
from gitlct.weights import Classification, Mode, VGITConfig, classify, omega_tuple, tuple_threshold
from helpers import boxed_torus_status, lp_torus_status, random_ops, random_tuple

R = NormalizedOPS
H2 = HyperplaneForm((0, 0, 1))


def test_candidates_contain_cone_rays():
    for T in [tuple_of("x0^3", n=2), tuple_of("x0*x1*x2 + x1^3", "x2^3", n=2)]:
        c = candidate_lambdas(T)
        assert R((1, 1, -2)) in c and R((2, -1, -1)) in c


def test_candidates_cusp_type_form():
    c = candidate_lambdas(tuple_of("x0^3 - x1^2*x2", n=2))
    assert set(c) == {R((1, 1, -2)), R((2, -1, -1))}


def test_candidates_tie_ray():
    c = candidate_lambdas(tuple_of("x0^3 + x1^3 + x2^3 + x0*x1*x2", n=2))
    assert R((1, 0, -1)) in c
    assert all(c.provenance[lam] for lam in c)


def test_torus_verdict_examples():
    assert torus_verdict(tuple_of("x0^3 + x1^3 + x2^3", n=2)).status is TorusStatus.STABLE
    tv = torus_verdict(tuple_of("x0*x1*x2", n=2))
    assert tv.status is TorusStatus.STRICTLY_SEMISTABLE
    assert all(v.classification is Classification.EQUALITY for v in tv.ray_verdicts)
    T = tuple_of("x0^3 + x0^2*x1", "x0^3 - x0^2*x1", n=2)
    tv = torus_verdict(T)
    assert tv.status is TorusStatus.UNSTABLE
    assert tv.witnesses and all(c.recheck(T) for c in tv.witnesses)


def test_certificate_recheck_detects_tampering():
    T = tuple_of("x0^3 + x0^2*x1", "x0^3 - x0^2*x1", n=2)
    c = torus_verdict(T).witnesses[0]
    bad = Certificate(c.lam, c.transform, c.omega + 1, c.threshold, c.mode, c.classification)
    assert not bad.recheck(T)


def test_cusp_destabilized_after_permutation():
    res = destabilizer_search(tuple_of("x1^2*x2 - x0^3", n=2))
    assert res.status == FOUND
    c = res.certificate
    assert c.lam == R((4, 1, -5))
    assert c.label == "permutation (1, 0, 2)"
    assert (c.omega, c.threshold) == (18, 15)
    T2 = apply_transform(tuple_of("x1^2*x2 - x0^3", n=2), c.transform)
    assert min(sum(a * b for a, b in zip(I, c.lam.weights)) for I in T2.generators[0].support) == 3


def test_nodal_cubic_not_destabilized():
    res = destabilizer_search(tuple_of("x0^3 + x1^3 + x0*x1*x2", n=2), random_count=100, seed=0)
    assert res.status == NO_DESTABILIZER and res.certificate is None
    assert res.transforms_tried == 6 + 100


def test_smooth_members_delegate():
    res = destabilizer_search(tuple_of("x0^3 + x1^3 + x2^3", n=2), smooth_members=True)
    assert res.status == SKIPPED_SMOOTH and res.delegated is TupleStability.STABLE


def test_member_combinator():
    S, SS, U = MemberStability.STABLE, MemberStability.STRICTLY_SEMISTABLE, MemberStability.UNSTABLE
    assert tuple_verdict_from_members([S, S]) is TupleStability.STABLE
    assert tuple_verdict_from_members([SS, S, S]) is TupleStability.STABLE
    assert tuple_verdict_from_members([SS, SS]) is TupleStability.SEMISTABLE
    assert tuple_verdict_from_members([S, U]) is None
    with pytest.raises(ValueError):
        tuple_verdict_from_members([])


def test_search_parallel_matches_serial():
    T = tuple_of("x1^2*x2 - x0^3", n=2)
    a = destabilizer_search(T, random_count=10, seed=3, jobs=1)
    b = destabilizer_search(T, random_count=10, seed=3, jobs=2)
    assert a == b
    assert parallel_map(abs, [-3, 2, -1], jobs=2) == [3, 2, 1]


def test_walls_example():
    T = tuple_of("x0^2*x1", n=2)
    flips = {lam.weights: t for lam, t in per_ray_walls(T, [H2])}
    assert flips == {(1, 0, -1): 2, (1, 1, -2): Fraction(3, 2), (2, -1, -1): 3}
    assert vgit_walls(T, [H2]) == [Fraction(3, 2), 2, 3]
    grid = [Fraction(i, 8) for i in range(1, 33)]
    for t, status in vgit_scan(T, [H2], grid):
        assert (status is TorusStatus.UNSTABLE) == (t < 3)


def test_no_walls_for_stable_tuple():
    T = tuple_of("x0^3 + x1^3 + x2^3", n=2)
    assert vgit_walls(T, [H2]) == []
    statuses = {s for _, s in vgit_scan(T, [H2], [Fraction(i, 4) for i in range(1, 17)])}
    assert len(statuses) == 1


def test_two_hyperplanes():
    with pytest.raises(ValueError):
        VGITConfig((1, 1), (H2, H2))
    T = tuple_of("x0^2*x1", n=2)
    H1 = HyperplaneForm((0, 1, 0))
    walls = vgit_walls(T, [H2, H1])
    assert walls and all(isinstance(w, WallHyperplane) for w in walls)
    pts = [(Fraction(i, 2), Fraction(j, 2)) for i in range(1, 9) for j in range(1, 9)]
    status = {}
    for p in pts:
        cfg = VGITConfig(p, (H2, H1))
        status[p] = torus_verdict(T, cfg).status
    # two grid points with different verdicts must be separated by a listed wall
    for p in pts:
        for q in pts:
            if status[p] != status[q]:
                side = lambda w, x: (sum(c * t for c, t in zip(w.coeffs, x)) > w.rhs) - (
                    sum(c * t for c, t in zip(w.coeffs, x)) < w.rhs)
                assert any(side(w, p) != side(w, q) or side(w, p) == 0 for w in walls)


seeds = st.integers(0, 10**6)


@given(seeds)
def test_verdicts_match_lp_oracle(seed):
    rng = random.Random(seed)
    n = rng.choice([1, 2, 3])
    T = random_tuple(rng, n, rng.randint(2, 3), rng.randint(1, 3 if n < 3 else 2), 4, pool=6)
    for mode in ("exact", "combinatorial"):
        assert torus_verdict(T, mode=Mode(mode)).status.value == lp_torus_status(T, mode)


@given(seeds)
def test_verdicts_match_wide_box_enumeration(seed):
    rng = random.Random(seed)
    n = rng.choice([2, 3])
    T = random_tuple(rng, n, 2 if n == 3 else 3, rng.randint(1, 2), 4, pool=6)
    bound = 2 * max(abs(x) for s in subset_sums(T) for x in s)
    assert torus_verdict(T).status.value == boxed_torus_status(T, bound)


@given(seeds)
def test_pruning_keeps_verdict(seed):
    rng = random.Random(seed)
    n = rng.choice([2, 3])
    T = random_tuple(rng, n, 3, rng.randint(1, 2), 5, pool=7)
    full = candidate_lambdas(T, prune=False)
    assert torus_verdict(T, candidates=full).status == torus_verdict(T).status


@given(seeds)
def test_scaling_invariance(seed):
    rng = random.Random(seed)
    n = rng.randint(1, 3)
    T = random_tuple(rng, n, 3, rng.randint(1, 2), 5)
    lam = random_ops(rng, n)
    c = rng.randint(2, 5)
    w = tuple(c * a for a in lam.weights)
    scaled = SimpleNamespace(weights=w, last=w[-1], n=lam.n)
    base = classify(omega_tuple(T, lam), tuple_threshold(T, lam))
    assert omega_tuple(T, scaled) == c * omega_tuple(T, lam)
    assert classify(omega_tuple(T, scaled), tuple_threshold(T, scaled)) is base


@given(seeds)
def test_permutation_coherence(seed):
    rng = random.Random(seed)
    n = rng.randint(1, 3)
    T = random_tuple(rng, n, 3, rng.randint(1, 2), 5)
    perm = list(range(n + 1))
    rng.shuffle(perm)
    A = ProjectiveTransform.from_permutation(perm)
    TA = apply_transform(T, A)
    lam = random_ops(rng, n)
    # x_i -> x_perm[i] moves exponent i to slot perm[i]
    pulled = [lam.weights[perm[i]] for i in range(n + 1)]
    lhs = min(sum(a * b for a, b in zip(s, lam.weights)) for s in subset_sums(TA))
    rhs = min(sum(a * b for a, b in zip(s, pulled)) for s in subset_sums(T))
    assert lhs == rhs


@given(seeds)
def test_monotone_walls_for_weightless_hyperplane(seed):
    rng = random.Random(seed)
    T = random_tuple(rng, 2, 3, rng.randint(1, 2), 4)
    walls = vgit_walls(T, [H2])
    grid = [Fraction(i, 4) for i in range(1, 41)]
    unstable = [t for t, s in vgit_scan(T, [H2], grid) if s is TorusStatus.UNSTABLE]
    # omega_H = 0 on the whole cone, so t only raises the threshold and the
    # unstable region is exactly (0, largest wall)
    top = max(walls, default=0)
    assert unstable == [t for t in grid if t < top]
