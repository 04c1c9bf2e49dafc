import random
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from scipy.optimize import linprog

from gitlct.forms import HyperplaneForm, HypersurfaceForm, ProjectivePoint, member, tuple_of
from gitlct.lattice import NormalizedOPS
from gitlct.lct import (
    BoundUndefined,
    LocalGerm,
    OutsideRegime,
    PointNotOnHypersurface,
    existential_lct_bound,
    global_lct,
    kollar_bound_check,
    kollar_tuple_check,
    lct_newton,
    local_lct,
    localize,
    necessary_condition_check,
    newton_polyhedron,
    sufficient_semistable_via_lct,
    sufficient_vgit_via_lct,
    swept_lct_bounds,
    tuple_lct_bound,
    weighted_blowup_discrepancy,
    weighted_multiplicity,
)
from gitlct.opssearch import TorusStatus, TupleStability, torus_verdict

E2 = ProjectivePoint((0, 0, 1))
L101 = NormalizedOPS((1, 0, -1))
L112 = NormalizedOPS((1, 1, -2))


def G(text, n=2):
    return LocalGerm.parse(text, n)


def F(text, n=2):
    return HypersurfaceForm.parse(text, n)


def test_localize_examples():
    assert localize(F("x1^2*x2 - x0^3"), E2) == LocalGerm({(0, 2): 1, (3, 0): -1})
    assert localize(F("x0^2*x1"), E2) == LocalGerm.monomial(2, 1)
    assert localize(F("x0", 2), E2) == LocalGerm.monomial(1, 0)
    with pytest.raises(PointNotOnHypersurface):
        localize(F("x2^3"), E2)


def test_localize_moves_point():
    # the cusp of x1^2 x0 - x2^3 sits at (1:0:0)
    v = local_lct(F("x1^2*x0 - x2^3"), ProjectivePoint((1, 0, 0)))
    assert v.value == Fraction(5, 6)


@pytest.mark.parametrize("text,expected", [
    ("x1^2 - x0^3", Fraction(5, 6)),
    ("x0^2 - x1^2", 1),
    ("x0", 1),
    ("x0^2*x1", Fraction(1, 2)),
    ("x0^5", Fraction(1, 5)),
    ("x0^3", Fraction(1, 3)),
    ("x0*x1*(x0 + x1)", Fraction(2, 3)),
    ("x0^3 + x1^3 + x0*x1", 1),
])
def test_lct_corpus(text, expected):
    assert lct_newton(G(text)).value == expected


def test_lct_binding_data():
    v = lct_newton(G("x0^2*x1"))
    assert v.newton_c == 2 and v.binding_facet.normal == (1, 0)
    v = lct_newton(G("x1^2 - x0^3"))
    assert v.newton_c == Fraction(6, 5)
    assert (v.binding_facet.normal, v.binding_facet.offset) == ((2, 3), 6)
    assert v.nondegenerate_assumed


def test_discrepancy_examples():
    # weights listed per variable (u, v) of v^2 - u^3: u has weight 2, v weight 3
    cusp = G("x1^2 - x0^3")
    assert weighted_multiplicity(cusp, (2, 3)) == 6
    assert weighted_blowup_discrepancy(cusp, (2, 3), Fraction(5, 6)) == -1
    assert weighted_blowup_discrepancy(G("x0", 1), (1,), 1) == -1
    assert weighted_blowup_discrepancy(G("x0^2*x1"), (1, 1), 1) == -2
    with pytest.raises(ValueError):
        weighted_blowup_discrepancy(cusp, (0, 0), 1)


def test_global_lct():
    f = F("x1^2*x2 - x0^3")
    assert global_lct(f, [E2]) == Fraction(5, 6)
    assert global_lct(F("x0^3 + x1^3 + x2^3"), []) == 1


def test_tuple_bound_examples():
    T = tuple_of("x0^2*x1", "x0*x1^2", n=2)
    assert tuple_lct_bound(T, E2, L101) == Fraction(1, 3)
    assert tuple_lct_bound(T, E2, L112) == Fraction(1, 3)
    assert local_lct(F("x0^2*x1"), E2).value == Fraction(1, 2)
    lam, bound = existential_lct_bound(T, E2)
    assert bound == Fraction(1, 3)


def test_tuple_bound_errors():
    with pytest.raises(ValueError):
        tuple_lct_bound(tuple_of("x0^2*x1", n=2), E2, L101)
    T = tuple_of("x0^2*x1", "x0*x1^2", n=2)
    with pytest.raises(ValueError):
        tuple_lct_bound(T, ProjectivePoint((1, 0, 0)), L101)
    with pytest.raises(PointNotOnHypersurface):
        tuple_lct_bound(tuple_of("x0^3", "x2^3", n=2), E2, L101)
    with pytest.raises(BoundUndefined):
        tuple_lct_bound(tuple_of("x1*x2^2", "x1^2*x2", n=2), E2, NormalizedOPS((2, -1, -1)))


def test_bound_can_exceed_one():
    # common factor x1: both members vanish along a line through the point
    T = tuple_of("x1*x2^2", "x1^2*x2", n=2)
    assert tuple_lct_bound(T, E2, NormalizedOPS((5, -2, -3))) == 3
    T3 = tuple_of("x0*x3^2", "x1*x3^2", n=3)
    assert tuple_lct_bound(T3, ProjectivePoint((0, 0, 0, 1)), NormalizedOPS((1, 1, 1, -3))) == Fraction(3, 2)


def test_common_factor_pencil_breaks_existential_bound():
    T = tuple_of("x1*x2^2", "x1^2*x2", n=2)
    _, bound = existential_lct_bound(T, E2)
    worst = local_lct(F("x1^2*x2"), E2).value
    assert (bound, worst) == (Fraction(2, 3), Fraction(1, 2))
    assert bound > worst


def test_necessary_condition():
    T = tuple_of("x0^2*x1", "x0*x1^2", n=2)
    rep = necessary_condition_check(T, E2, {"x0^2*x1": Fraction(1, 2)})
    assert rep.threshold == Fraction(1, 2)
    assert rep.rules_out_stable and not rep.rules_out_semistable
    assert torus_verdict(T).status is TorusStatus.UNSTABLE
    rep = necessary_condition_check(T, E2, {"g": Fraction(1, 2)}, TupleStability.STABLE)
    assert rep.violations == (("g", Fraction(1, 2)),) and not rep.consistent
    rep = necessary_condition_check(T, E2, {"g": 1}, TupleStability.SEMISTABLE)
    assert rep.consistent
    with pytest.raises(ValueError):
        necessary_condition_check(tuple_of("x0^3", n=2), E2, {})


def test_sufficient_semistable():
    r = sufficient_semistable_via_lct(2, 3, 2, 1)
    assert (r.threshold, r.conclusion) == (1, TupleStability.SEMISTABLE)
    r = sufficient_semistable_via_lct(2, 4, 1, Fraction(7, 8))
    assert (r.threshold, r.conclusion) == (Fraction(3, 4), TupleStability.STABLE)
    assert sufficient_semistable_via_lct(2, 4, 1, Fraction(1, 2)).conclusion is None
    assert sufficient_semistable_via_lct(2, 2, 1, 1).vacuous


def test_sufficient_vgit():
    r = sufficient_vgit_via_lct(2, 4, 1, [Fraction(1, 2)], 1)
    assert (r.threshold, r.conclusion) == (1, TupleStability.SEMISTABLE)
    r = sufficient_vgit_via_lct(2, 3, 2, [Fraction(1, 4)], 1)
    assert r.threshold == Fraction(12, 11) and r.vacuous and r.conclusion is None
    with pytest.raises(OutsideRegime):
        sufficient_vgit_via_lct(2, 3, 1, [Fraction(3, 2)], 1)


def test_kollar_examples():
    assert kollar_bound_check(F("x0^2*x1"), L101, Fraction(1, 2)).holds
    r = kollar_bound_check(F("x0*x1*x2"), L112, 1)
    assert r.ratio == r.bound == 1 and r.holds
    h = HyperplaneForm((1, 1, 0)).as_form()
    for lam in (L101, L112, NormalizedOPS((2, -1, -1))):
        assert kollar_bound_check(h, lam, 1).holds
    T = tuple_of("x1^3 + x2^3", "x0^3", n=2)
    assert kollar_tuple_check(T, L101, Fraction(1, 3)).holds


def lp_newton_c(pts):
    """min s with s(1,...,1) >= a convex combination of the points."""
    m, n = len(pts), len(pts[0])
    c = np.zeros(m + 1)
    c[-1] = 1
    A_ub = [[p[i] for p in pts] + [-1] for i in range(n)]
    res = linprog(c, A_ub=A_ub, b_ub=[0] * n, A_eq=[[1] * m + [0]], b_eq=[1],
                  bounds=[(0, None)] * m + [(None, None)], method="highs")
    return res.fun


@st.composite
def germs(draw):
    n = draw(st.integers(1, 3))
    exps = draw(st.lists(st.tuples(*[st.integers(0, 6)] * n).filter(any),
                         min_size=1, max_size=6, unique=True))
    return LocalGerm({e: 1 for e in exps})


@given(germs())
def test_newton_c_matches_lp(g):
    v = lct_newton(g)
    assert abs(float(v.newton_c) - lp_newton_c(g.support)) < 1e-9
    poly = newton_polyhedron(g)
    assert poly.contains([v.newton_c] * g.n)
    assert not poly.contains([v.newton_c - Fraction(1, 1000)] * g.n)
    for p in g.support:
        assert poly.contains(p)


@given(germs())
def test_discrepancy_consistent_with_oracle(g):
    v = lct_newton(g)
    w = v.binding_facet.normal
    a = weighted_blowup_discrepancy(g, w, v.value)
    assert a >= -1
    if v.newton_c >= 1:
        assert a == -1
        assert weighted_blowup_discrepancy(g, w, v.value + Fraction(1, 100)) < -1


def test_swept_bounds_sorted_by_ray():
    T = tuple_of("x0^2*x1", "x0*x1^2", n=2)
    swept = swept_lct_bounds(T, E2)
    assert swept and all(b > 0 for _, b in swept)
    assert min(b for _, b in swept) == Fraction(1, 3)


def test_member_grid_against_bound():
    T = tuple_of("x0^2*x1", "x0*x1^2", n=2)
    _, bound = existential_lct_bound(T, E2)
    rng = random.Random(0)
    for _ in range(10):
        z = (rng.randint(-3, 3), rng.randint(-3, 3))
        if any(z):
            assert local_lct(member(T, z), E2).value >= bound
