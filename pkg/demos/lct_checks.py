"""Newton polyhedron lct values and the base point criterion for a pencil."""

from fractions import Fraction

from gitlct import LocalGerm, ProjectivePoint, lct_newton, local_lct, member, tuple_of
from gitlct.lct import existential_lct_bound, necessary_condition_check, weighted_blowup_discrepancy

for text in ["u^2 - v^3", "u^2 - v^2", "u^2*v", "u^5"]:
    g = LocalGerm.parse(text.replace("u", "x0").replace("v", "x1"), n=2)
    v = lct_newton(g)
    print(f"lct({text}) = {v.value}  binding facet {v.binding_facet.normal}")

cusp = LocalGerm.parse("x0^2 - x1^3", n=2)
print("discrepancy of the (3,2) blowup of the cusp at c = 5/6:",
      weighted_blowup_discrepancy(cusp, (3, 2), Fraction(5, 6)))

T = tuple_of("x0^2*x1", "x0*x1^2", n=2)
p = ProjectivePoint((0, 0, 1))
lam, bound = existential_lct_bound(T, p)
print(f"\npencil {T.generators[0]}, {T.generators[1]} at {p}")
print(f"best bound {bound} at {lam.weights}")
lcts = {}
for z in [(1, 0), (0, 1), (1, 1), (1, -1), (2, 3)]:
    f = member(T, z)
    lcts[str(f)] = local_lct(f, p).value
    print(f"  lct_p({f}) = {lcts[str(f)]}")
rep = necessary_condition_check(T, p, lcts)
print(f"threshold {rep.threshold}: stable ruled out = {rep.rules_out_stable}")
