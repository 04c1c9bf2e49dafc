"""Random instances and brute-force oracles shared by the test modules.

The oracles deliberately avoid the library's own linear algebra and search
code: determinants by cofactor expansion, weights straight from the
definitions, and exhaustive enumeration of small one-parameter subgroups.
"""

from __future__ import annotations

import functools
import itertools
import math
import random
from fractions import Fraction

import numpy as np

from gitlct.forms import DependentGenerators, HypersurfaceForm, TuplePoint
from gitlct.lattice import NormalizedOPS


def monomials(n: int, d: int):
    """All exponent vectors of degree d in n+1 variables."""
    out = []
    for c in itertools.combinations_with_replacement(range(n + 1), d):
        e = [0] * (n + 1)
        for i in c:
            e[i] += 1
        out.append(tuple(e))
    return sorted(set(out))


def random_form(rng: random.Random, n: int, d: int, max_support: int) -> HypersurfaceForm:
    mons = monomials(n, d)
    size = rng.randint(1, min(max_support, len(mons)))
    terms = {}
    for e in rng.sample(mons, size):
        c = rng.choice([-3, -2, -1, 1, 1, 2, 3])
        terms[e] = Fraction(c)
    return HypersurfaceForm(n, d, terms)


def random_tuple(rng: random.Random, n: int, d: int, k: int, max_support: int,
                 pool: int | None = None) -> TuplePoint:
    """k independent forms; supports drawn from a shared pool so they overlap."""
    mons = monomials(n, d)
    if pool is not None:
        mons = rng.sample(mons, min(len(mons), max(pool, k)))
    while True:
        gens = []
        for _ in range(k):
            size = rng.randint(1, min(max_support, len(mons)))
            terms = {e: Fraction(rng.choice([-2, -1, 1, 1, 2])) for e in rng.sample(mons, size)}
            gens.append(HypersurfaceForm(n, d, terms))
        try:
            return TuplePoint(gens)
        except DependentGenerators:
            continue


def random_ops(rng: random.Random, n: int, bound: int = 6) -> NormalizedOPS:
    while True:
        raw = [rng.randint(-bound, bound) for _ in range(n + 1)]
        s = sum(raw)
        raw[-1] -= s
        raw.sort(reverse=True)
        if any(raw):
            g = math.gcd(*raw)
            return NormalizedOPS(tuple(x // g for x in raw))


def cofactor_det(m) -> Fraction:
    """Determinant by Laplace expansion along the first row."""
    size = len(m)
    if size == 0:
        return Fraction(1)
    if size == 1:
        return Fraction(m[0][0])
    total = Fraction(0)
    for j in range(size):
        if m[0][j] == 0:
            continue
        minor = [row[:j] + row[j + 1:] for row in m[1:]]
        total += (-1) ** j * Fraction(m[0][j]) * cofactor_det(minor)
    return total


def aff(I, lam) -> int:
    a = lam.weights
    return sum(I[j] * (a[j] - a[-1]) for j in range(len(a) - 1))


def nonzero_minor_subsets(T: TuplePoint):
    """Sets of k monomials whose coefficient minor is nonzero."""
    cols = sorted({e for g in T.generators for e in g.support})
    out = []
    for S in itertools.combinations(cols, T.k):
        m = [[g.coefficient(e) for e in S] for g in T.generators]
        if cofactor_det(m) != 0:
            out.append(S)
    return out


def brute_omega_exact(T: TuplePoint, lam) -> int:
    return min(sum(aff(I, lam) for I in S) for S in nonzero_minor_subsets(T))


def brute_omega_combinatorial(T: TuplePoint, lam) -> int:
    best = None
    for combo in itertools.product(*(g.support for g in T.generators)):
        if len(set(combo)) < len(combo):
            continue
        v = sum(aff(I, lam) for I in combo)
        best = v if best is None else min(best, v)
    return best


@functools.lru_cache(maxsize=None)
def bounded_normalized_ops(n: int, bound: int) -> np.ndarray:
    """Every nontrivial normalized integer vector with entries in [-bound, bound].

    Scalar multiples are kept; they do not change any sign test.
    """
    rows = []
    for head in itertools.product(range(-bound, bound + 1), repeat=n):
        last = -sum(head)
        v = head + (last,)
        if abs(last) > bound or any(v[i] < v[i + 1] for i in range(n)) or not any(v):
            continue
        rows.append(v)
    return np.array(rows, dtype=np.int64)


def brute_torus_status(T: TuplePoint, mode: str = "exact") -> tuple[str, int]:
    """Status from max over bounded lambdas of min subset-sum pairing.

    omega - threshold equals the pairing of lambda with the exponent sum of
    the minimizing subset, so instability means that maximum is positive.
    The box is the one named in the acceptance criteria: entries bounded by
    the largest subset-sum coordinate. Returns the status and that bound.
    """
    bound = max(1, max(abs(x) for s in _subset_sums(T, mode) for x in s))
    return boxed_torus_status(T, bound, mode), bound


def _subset_sums(T: TuplePoint, mode: str):
    if mode == "exact":
        subsets = nonzero_minor_subsets(T)
    else:
        subsets = [c for c in itertools.product(*(g.support for g in T.generators))
                   if len(set(c)) == len(c)]
    return sorted({tuple(map(sum, zip(*S))) for S in subsets})


def boxed_torus_status(T: TuplePoint, bound: int, mode: str = "exact") -> str:
    sums = np.array(_subset_sums(T, mode), dtype=np.int64)
    best = int((sums @ bounded_normalized_ops(T.n, bound).T).min(axis=0).max())
    return ("torus_unstable" if best > 0 else
            "torus_strictly_semistable" if best == 0 else "torus_stable")


def lp_torus_status(T: TuplePoint, mode: str = "exact", tol: float = 1e-9) -> str:
    """Sign of max over the normalized cone (a_0 - a_n = 1) of min subset pairing, by LP."""
    from scipy.optimize import linprog

    sums = _subset_sums(T, mode)
    m = T.n + 1
    c = np.zeros(m + 1)
    c[-1] = -1.0  # maximize s
    A_ub, b_ub = [], []
    for sg in sums:
        A_ub.append([-x for x in sg] + [1])
        b_ub.append(0)
    for j in range(m - 1):
        row = [0] * (m + 1)
        row[j], row[j + 1] = -1, 1
        A_ub.append(row)
        b_ub.append(0)
    A_eq = [[1] * m + [0], [1] + [0] * (m - 2) + [-1, 0]]
    res = linprog(c, A_ub=A_ub, b_ub=b_ub, A_eq=A_eq, b_eq=[0, 1],
                  bounds=[(None, None)] * (m + 1), method="highs")
    s = -res.fun
    return ("torus_unstable" if s > tol else
            "torus_strictly_semistable" if s > -tol else "torus_stable")
