"""Small exact linear algebra over ``Fraction`` and ``int``."""

from __future__ import annotations

from fractions import Fraction
from math import gcd
from typing import Sequence


def det(matrix: Sequence[Sequence]) -> Fraction:
    """Determinant by fraction-exact Gaussian elimination."""
    m = [[Fraction(x) for x in row] for row in matrix]
    size = len(m)
    result = Fraction(1)
    for col in range(size):
        piv = next((r for r in range(col, size) if m[r][col] != 0), None)
        if piv is None:
            return Fraction(0)
        if piv != col:
            m[col], m[piv] = m[piv], m[col]
            result = -result
        p = m[col][col]
        result *= p
        for r in range(col + 1, size):
            f = m[r][col]
            if f:
                f /= p
                row_r, row_c = m[r], m[col]
                for c in range(col, size):
                    row_r[c] -= f * row_c[c]
    return result


def rref(rows: Sequence[Sequence], column_order: Sequence[int] | None = None):
    """Reduced row echelon form with pivots sought in ``column_order``.

    Returns ``(rows, pivots)`` where ``rows[i]`` has a 1 in column
    ``pivots[i]``, zeros in every other pivot column, and zeros in every
    column that precedes its pivot in ``column_order``. Zero rows are dropped.
    """
    m = [[Fraction(x) for x in row] for row in rows]
    if not m:
        return [], []
    ncols = len(m[0])
    order = list(column_order) if column_order is not None else list(range(ncols))
    pivots: list[int] = []
    r = 0
    for c in order:
        if r == len(m):
            break
        piv = next((i for i in range(r, len(m)) if m[i][c] != 0), None)
        if piv is None:
            continue
        m[r], m[piv] = m[piv], m[r]
        p = m[r][c]
        m[r] = [x / p for x in m[r]]
        for i in range(len(m)):
            if i != r and m[i][c] != 0:
                f = m[i][c]
                m[i] = [x - f * y for x, y in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
    return m[:r], pivots


def rank(rows: Sequence[Sequence]) -> int:
    return len(rref(rows)[1])


def solve_combination(rows: Sequence[Sequence], target: Sequence) -> list[Fraction] | None:
    """Find ``z`` with ``sum_i z_i rows[i] == target``, or None if no solution.

    ``rows`` must be linearly independent.
    """
    k = len(rows)
    # Augment each column as an equation: sum_i z_i rows[i][c] = target[c].
    eqs = [[Fraction(rows[i][c]) for i in range(k)] + [Fraction(target[c])]
           for c in range(len(target))]
    red, piv = rref(eqs)
    if k in piv:
        return None
    z = [Fraction(0)] * k
    for row, p in zip(red, piv):
        z[p] = row[k]
    if len(piv) < k:
        return None
    return z


def integer_kernel_vector(rows: Sequence[Sequence[int]]) -> tuple[int, ...] | None:
    """Primitive integer generator of a one-dimensional kernel, else None."""
    if not rows:
        return None
    ncols = len(rows[0])
    red, piv = rref(rows)
    if len(piv) != ncols - 1:
        return None
    free = next(c for c in range(ncols) if c not in piv)
    vec = [Fraction(0)] * ncols
    vec[free] = Fraction(1)
    for row, p in zip(red, piv):
        vec[p] = -row[free]
    lcm = 1
    for v in vec:
        lcm = lcm * v.denominator // gcd(lcm, v.denominator)
    ints = [int(v * lcm) for v in vec]
    g = 0
    for v in ints:
        g = gcd(g, v)
    return tuple(v // g for v in ints)
