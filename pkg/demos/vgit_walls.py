"""Walls for the cubic x0^2 x1 paired with the line x2 = 0.

Stability now depends on the weight t given to the line.
"""

from fractions import Fraction

from gitlct import HyperplaneForm, tuple_of, vgit_scan, vgit_walls
from gitlct.opssearch import corollary_regime_limit, per_ray_walls

T = tuple_of("x0^2*x1", n=2)
H = [HyperplaneForm((0, 0, 1))]

for lam, t in per_ray_walls(T, H):
    print(f"ray {lam.weights}: comparison flips at t = {t}")
walls = vgit_walls(T, H)
print("walls:", ", ".join(map(str, walls)))
print("lct criterion applies while t <", corollary_regime_limit(T))

grid = [Fraction(i, 8) for i in range(1, 33)]
last = None
for t, status in vgit_scan(T, H, grid):
    if status != last:
        print(f"  from t = {t}: {status.value}")
        last = status
