"""Torus stability of a few classical plane cubics.

Run with ``python3 demos/plane_cubics.py``.
"""

from gitlct import destabilizer_search, torus_verdict, tuple_of
from gitlct.opssearch import candidate_lambdas

cubics = {
    "Fermat": "x0^3 + x1^3 + x2^3",
    "triangle": "x0*x1*x2",
    "cusp": "x1^2*x2 - x0^3",
    "node": "x0^3 + x1^3 + x0*x1*x2",
}

for name, text in cubics.items():
    T = tuple_of(text, n=2)
    rays = candidate_lambdas(T)
    tv = torus_verdict(T)
    print(f"{name:9s} {text:24s} {len(rays)} rays  identity frame: {tv.status.value}")

    # The identity frame can hide a destabilizer; permute coordinates and
    # throw in some random changes of frame.
    found = destabilizer_search(T, random_count=20, seed=1)
    if found.certificate:
        c = found.certificate
        print(f"          destabilized by {c.lam.weights} after {c.label}: "
              f"omega {c.omega} > threshold {c.threshold}")
    else:
        print(f"          {found.status} ({found.transforms_tried} frames)")
