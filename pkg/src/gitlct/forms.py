"""Degree-d forms, tuples of forms (Grassmannian points) and coordinate changes.

Coefficients are ``Fraction`` throughout. Forms are immutable; every
operation returns a new object. Monomials are iterated in descending
lexicographic order of their exponent tuples (``x0^d`` first), which fixes
all iteration orders downstream.
"""

from __future__ import annotations

import ast
import itertools
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from typing import Iterator, Mapping, Sequence, Union

from .lattice import ExponentVector, exponent_vector
from .linalg import det, integer_kernel_vector, rank, rref, solve_combination

Poly = dict  # ExponentVector -> Fraction, internal sparse representation


class EmptyForm(ValueError):
    pass


class DependentGenerators(ValueError):
    """Raised when the generators of a tuple are linearly dependent.

    ``relation`` holds integer coefficients ``c`` with ``sum c_i f_i == 0``.
    """

    def __init__(self, message: str, relation: tuple[int, ...] | None = None):
        super().__init__(message)
        self.relation = relation


class SingularTransform(ValueError):
    pass


def as_fraction(value) -> Fraction:
    if isinstance(value, float):
        raise TypeError("floating point coefficients are not accepted")
    return Fraction(value)


# --- sparse polynomial helpers -------------------------------------------------

def _clean(poly: Poly) -> Poly:
    return {e: c for e, c in poly.items() if c != 0}


def _add(p: Poly, q: Poly, scale=1) -> Poly:
    out = dict(p)
    for e, c in q.items():
        out[e] = out.get(e, 0) + scale * c
    return _clean(out)


def _mul(p: Poly, q: Poly) -> Poly:
    out: Poly = {}
    for e1, c1 in p.items():
        for e2, c2 in q.items():
            e = tuple(a + b for a, b in zip(e1, e2))
            out[e] = out.get(e, 0) + c1 * c2
    return _clean(out)


def _pow(p: Poly, k: int, nvars: int) -> Poly:
    out: Poly = {(0,) * nvars: Fraction(1)}
    for _ in range(k):
        out = _mul(out, p)
    return out


def _substitute_linear(poly: Poly, matrix: Sequence[Sequence[Fraction]]) -> Poly:
    """Return ``poly(Ax)``: variable ``x_i`` becomes ``sum_j A[i][j] x_j``."""
    nvars = len(matrix)
    images = []
    for i in range(nvars):
        images.append(_clean({
            tuple(1 if c == j else 0 for c in range(nvars)): Fraction(matrix[i][j])
            for j in range(nvars)
        }))
    cache: dict[tuple[int, int], Poly] = {}

    def power(i, k):
        if (i, k) not in cache:
            cache[(i, k)] = _pow(images[i], k, nvars)
        return cache[(i, k)]

    out: Poly = {}
    for exps, coeff in poly.items():
        term: Poly = {(0,) * nvars: coeff}
        for i, k in enumerate(exps):
            if k:
                term = _mul(term, power(i, k))
        out = _add(out, term)
    return out


# --- forms ---------------------------------------------------------------------

class HypersurfaceForm:
    """A nonzero homogeneous form of degree ``d`` in ``x_0, ..., x_n``."""

    __slots__ = ("n", "d", "_terms", "__dict__")

    def __init__(self, n: int, d: int, terms: Mapping[Sequence[int], object]):
        if n < 1 or d < 1:
            raise ValueError("need n >= 1 and d >= 1")
        clean: dict[ExponentVector, Fraction] = {}
        for exps, coeff in terms.items():
            vec = exponent_vector(exps, d)
            if len(vec) != n + 1:
                raise ValueError(f"exponent vector {vec} has wrong length for n={n}")
            c = as_fraction(coeff)
            if c:
                clean[vec] = clean.get(vec, Fraction(0)) + c
        clean = {e: c for e, c in sorted(clean.items(), reverse=True) if c != 0}
        if not clean:
            raise EmptyForm("form has no nonzero terms")
        self.n = n
        self.d = d
        self._terms = clean

    @classmethod
    def parse(cls, text: str, n: int) -> HypersurfaceForm:
        """Parse an expression such as ``"x1^2*x2 - x0^3"`` or ``"(x0+x1)^2"``."""
        poly = _parse_poly(text, n)
        degrees = {sum(e) for e in poly}
        if not degrees:
            raise EmptyForm(f"{text!r} has no nonzero terms")
        if len(degrees) != 1:
            raise ValueError(f"{text!r} is not homogeneous")
        return cls(n, degrees.pop(), poly)

    @property
    def terms(self) -> dict[ExponentVector, Fraction]:
        return dict(self._terms)

    def items(self):
        return self._terms.items()

    def coefficient(self, exps: Sequence[int]) -> Fraction:
        return self._terms.get(tuple(exps), Fraction(0))

    @cached_property
    def support(self) -> tuple[ExponentVector, ...]:
        return tuple(self._terms)

    def evaluate(self, point: Sequence) -> Fraction:
        total = Fraction(0)
        for exps, c in self._terms.items():
            v = c
            for x, k in zip(point, exps):
                if k:
                    v *= Fraction(x) ** k
            total += v
        return total

    def scale(self, c) -> HypersurfaceForm:
        return HypersurfaceForm(self.n, self.d, {e: v * as_fraction(c) for e, v in self.items()})

    def __add__(self, other: HypersurfaceForm) -> HypersurfaceForm:
        self._compatible(other)
        return HypersurfaceForm(self.n, self.d, _add(self._terms, other._terms))

    def __sub__(self, other: HypersurfaceForm) -> HypersurfaceForm:
        self._compatible(other)
        return HypersurfaceForm(self.n, self.d, _add(self._terms, other._terms, -1))

    def _compatible(self, other):
        if (self.n, self.d) != (other.n, other.d):
            raise ValueError("forms live in different spaces")

    def __eq__(self, other):
        return (isinstance(other, HypersurfaceForm) and self.n == other.n
                and self.d == other.d and self._terms == other._terms)

    def __hash__(self):
        return hash((self.n, self.d, tuple(self._terms.items())))

    def __str__(self):
        return format_poly(self._terms)

    def __repr__(self):
        return f"HypersurfaceForm(n={self.n}, d={self.d}, {self})"


def support(f: HypersurfaceForm) -> frozenset[ExponentVector]:
    return frozenset(f.support)


def format_poly(terms: Mapping[ExponentVector, Fraction]) -> str:
    pieces = []
    for exps, c in terms.items():
        mono = "*".join(
            f"x{i}" if k == 1 else f"x{i}^{k}" for i, k in enumerate(exps) if k
        )
        if not mono:
            body = str(abs(c))
        elif abs(c) == 1:
            body = mono
        else:
            body = f"{abs(c)}*{mono}"
        sign = "-" if c < 0 else "+"
        pieces.append((sign, body))
    if not pieces:
        return "0"
    out = ("-" if pieces[0][0] == "-" else "") + pieces[0][1]
    for sign, body in pieces[1:]:
        out += f" {sign} {body}"
    return out


def _parse_poly(text: str, n: int) -> Poly:
    nvars = n + 1
    tree = ast.parse(text.replace("^", "**"), mode="eval")

    def walk(node) -> Poly:
        if isinstance(node, ast.Expression):
            return walk(node.body)
        if isinstance(node, ast.Constant) and isinstance(node.value, int):
            return _clean({(0,) * nvars: Fraction(node.value)})
        if isinstance(node, ast.Name) and node.id.startswith("x") and node.id[1:].isdigit():
            i = int(node.id[1:])
            if i > n:
                raise ValueError(f"variable {node.id} out of range for n={n}")
            return {tuple(1 if j == i else 0 for j in range(nvars)): Fraction(1)}
        if isinstance(node, ast.UnaryOp) and isinstance(node.op, (ast.USub, ast.UAdd)):
            inner = walk(node.operand)
            return {e: -c for e, c in inner.items()} if isinstance(node.op, ast.USub) else inner
        if isinstance(node, ast.BinOp):
            left = walk(node.left)
            if isinstance(node.op, ast.Pow):
                if not (isinstance(node.right, ast.Constant) and isinstance(node.right.value, int)
                        and node.right.value >= 0):
                    raise ValueError("exponents must be nonnegative integer literals")
                return _pow(left, node.right.value, nvars)
            right = walk(node.right)
            if isinstance(node.op, ast.Add):
                return _add(left, right)
            if isinstance(node.op, ast.Sub):
                return _add(left, right, -1)
            if isinstance(node.op, ast.Mult):
                return _mul(left, right)
            if isinstance(node.op, ast.Div):
                if set(right) - {(0,) * nvars}:
                    raise ValueError("can only divide by constants")
                return {e: c / right[(0,) * nvars] for e, c in left.items()}
        raise ValueError(f"cannot parse {ast.unparse(node)!r}")

    return walk(tree)


@dataclass(frozen=True)
class HyperplaneForm:
    """``h(x) = sum_j h_j x_j`` with at least one nonzero coefficient."""

    coeffs: tuple[Fraction, ...]

    def __post_init__(self):
        c = tuple(as_fraction(v) for v in self.coeffs)
        object.__setattr__(self, "coeffs", c)
        if len(c) < 2:
            raise ValueError("hyperplane needs n+1 >= 2 coefficients")
        if not any(c):
            raise ValueError("hyperplane coefficients are all zero")

    @property
    def n(self) -> int:
        return len(self.coeffs) - 1

    @property
    def support(self) -> tuple[int, ...]:
        return tuple(j for j, c in enumerate(self.coeffs) if c)

    def as_form(self) -> HypersurfaceForm:
        return HypersurfaceForm(self.n, 1, {
            tuple(1 if i == j else 0 for i in range(self.n + 1)): c
            for j, c in enumerate(self.coeffs) if c
        })

    def proportional_to(self, other: HyperplaneForm) -> bool:
        return self.n == other.n and rank([self.coeffs, other.coeffs]) == 1


class TuplePoint:
    """k linearly independent degree-d forms; a point of Gr(k, W)."""

    def __init__(self, generators: Sequence[HypersurfaceForm]):
        gens = tuple(generators)
        if not gens:
            raise ValueError("a tuple needs at least one generator")
        n, d = gens[0].n, gens[0].d
        if any((g.n, g.d) != (n, d) for g in gens):
            raise ValueError("generators must share n and d")
        self.n, self.d, self.generators = n, d, gens
        matrix = self.coefficient_matrix()
        if rank(matrix) < len(gens):
            rel = integer_kernel_vector([list(col) for col in zip(*matrix)]) if len(gens) > 1 else None
            raise DependentGenerators(
                f"generators are linearly dependent (relation {rel})", rel)

    @property
    def k(self) -> int:
        return len(self.generators)

    @cached_property
    def columns(self) -> tuple[ExponentVector, ...]:
        """Union of generator supports, lexicographically descending (x0^d first)."""
        return tuple(sorted(set().union(*(g.support for g in self.generators)), reverse=True))

    def coefficient_matrix(self) -> list[list[Fraction]]:
        cols = self.columns
        return [[g.coefficient(c) for c in cols] for g in self.generators]

    def __eq__(self, other):
        return isinstance(other, TuplePoint) and self.generators == other.generators

    def __hash__(self):
        return hash(self.generators)

    def __repr__(self):
        return "TuplePoint(" + ", ".join(str(g) for g in self.generators) + ")"


def tuple_of(*texts: str, n: int) -> TuplePoint:
    """Convenience constructor: ``tuple_of("x0^3", "x1^3", n=2)``."""
    return TuplePoint([HypersurfaceForm.parse(t, n) for t in texts])


def member(T: TuplePoint, z: Sequence) -> HypersurfaceForm:
    """The member ``sum z_i f_i`` of the linear system."""
    if len(z) != T.k:
        raise ValueError(f"need {T.k} coordinates, got {len(z)}")
    zs = [as_fraction(v) for v in z]
    if not any(zs):
        raise ValueError("z must not be identically zero")
    acc: Poly = {}
    for zi, g in zip(zs, T.generators):
        if zi:
            acc = _add(acc, g._terms, zi)
    return HypersurfaceForm(T.n, T.d, acc)


def member_coordinates(T: TuplePoint, f: HypersurfaceForm) -> list[Fraction] | None:
    """Solve ``f = sum z_i f_i`` exactly; None if ``f`` is not in the span."""
    cols = sorted(set(T.columns) | set(f.support), reverse=True)
    rows = [[g.coefficient(c) for c in cols] for g in T.generators]
    return solve_combination(rows, [f.coefficient(c) for c in cols])


@dataclass(frozen=True)
class PluckerSupport:
    """Nonvanishing maximal minors of the coefficient matrix.

    ``minors`` maps each k-subset (a tuple of monomials in descending
    lexicographic order) to its exact minor, the rows taken in generator order and the
    columns in subset order.
    """

    minors: Mapping[tuple[ExponentVector, ...], Fraction]

    @property
    def subsets(self) -> list[tuple[ExponentVector, ...]]:
        return list(self.minors)

    def __len__(self):
        return len(self.minors)


def plucker_support(T: TuplePoint) -> PluckerSupport:
    cols = T.columns
    matrix = T.coefficient_matrix()
    minors = {}
    for idx in itertools.combinations(range(len(cols)), T.k):
        m = det([[row[i] for i in idx] for row in matrix])
        if m:
            minors[tuple(cols[i] for i in idx)] = m
    if not minors:
        raise DependentGenerators("all maximal minors vanish")
    return PluckerSupport(minors)


def distinct_support_tuples(T: TuplePoint) -> Iterator[tuple[ExponentVector, ...]]:
    """All ``(I_1, ..., I_k)`` with ``I_i`` in ``Supp(f_i)`` and pairwise distinct."""
    for combo in itertools.product(*(g.support for g in T.generators)):
        if len(set(combo)) == len(combo):
            yield combo


# --- transforms and points -----------------------------------------------------

class ProjectiveTransform:
    """An invertible ``(n+1) x (n+1)`` rational matrix acting by ``f(x) -> f(Ax)``."""

    __slots__ = ("matrix",)

    def __init__(self, matrix: Sequence[Sequence]):
        m = tuple(tuple(as_fraction(x) for x in row) for row in matrix)
        if not m or any(len(row) != len(m) for row in m):
            raise ValueError("transform must be a square matrix")
        if det(m) == 0:
            raise SingularTransform("transform matrix is singular")
        self.matrix = m

    @classmethod
    def identity(cls, size: int) -> ProjectiveTransform:
        return cls([[1 if i == j else 0 for j in range(size)] for i in range(size)])

    @classmethod
    def from_permutation(cls, perm: Sequence[int]) -> ProjectiveTransform:
        """The substitution ``x_i -> x_{perm[i]}``."""
        size = len(perm)
        return cls([[1 if j == perm[i] else 0 for j in range(size)] for i in range(size)])

    @property
    def size(self) -> int:
        return len(self.matrix)

    def is_identity(self) -> bool:
        return all(self.matrix[i][j] == (1 if i == j else 0)
                   for i in range(self.size) for j in range(self.size))

    def __matmul__(self, other: ProjectiveTransform) -> ProjectiveTransform:
        a, b = self.matrix, other.matrix
        size = self.size
        return ProjectiveTransform([[sum(a[i][k] * b[k][j] for k in range(size))
                                     for j in range(size)] for i in range(size)])

    def inverse(self) -> ProjectiveTransform:
        size = self.size
        aug = [list(row) + [1 if i == j else 0 for j in range(size)]
               for i, row in enumerate(self.matrix)]
        red, _ = rref(aug)
        return ProjectiveTransform([row[size:] for row in red])

    def image_of(self, point: Sequence) -> tuple[Fraction, ...]:
        return tuple(sum(a * Fraction(x) for a, x in zip(row, point)) for row in self.matrix)

    def as_lists(self) -> list[list[str]]:
        return [[str(x) for x in row] for row in self.matrix]

    def __eq__(self, other):
        return isinstance(other, ProjectiveTransform) and self.matrix == other.matrix

    def __hash__(self):
        return hash(self.matrix)

    def __repr__(self):
        return f"ProjectiveTransform({self.as_lists()})"


Transformable = Union[HypersurfaceForm, TuplePoint, HyperplaneForm]


def apply_transform(x: Transformable, A: ProjectiveTransform):
    if isinstance(x, HypersurfaceForm):
        if A.size != x.n + 1:
            raise ValueError("transform size does not match the form")
        return HypersurfaceForm(x.n, x.d, _substitute_linear(x._terms, A.matrix))
    if isinstance(x, TuplePoint):
        return TuplePoint([apply_transform(g, A) for g in x.generators])
    if isinstance(x, HyperplaneForm):
        if A.size != x.n + 1:
            raise ValueError("transform size does not match the hyperplane")
        return HyperplaneForm(tuple(
            sum(x.coeffs[i] * A.matrix[i][j] for i in range(A.size)) for j in range(A.size)))
    raise TypeError(f"cannot transform {type(x).__name__}")


@dataclass(frozen=True)
class ProjectivePoint:
    """Homogeneous coordinates, normalized so the first nonzero entry is 1."""

    coords: tuple[Fraction, ...]

    def __post_init__(self):
        c = tuple(as_fraction(v) for v in self.coords)
        lead = next((v for v in c if v), None)
        if lead is None:
            raise ValueError("projective point cannot be all zeros")
        object.__setattr__(self, "coords", tuple(v / lead for v in c))

    @property
    def n(self) -> int:
        return len(self.coords) - 1

    def __str__(self):
        return "(" + ":".join(str(v) for v in self.coords) + ")"


def is_base_point(T: TuplePoint, p: ProjectivePoint) -> bool:
    if p.n != T.n:
        raise ValueError("point and tuple live in different spaces")
    return all(g.evaluate(p.coords) == 0 for g in T.generators)


def transform_to_last_coordinate(p: ProjectivePoint) -> ProjectiveTransform:
    """A transform ``A`` with ``A (0:...:0:1) = p``.

    If ``p`` is the coordinate point ``e_j`` this is the transposition of
    ``x_j`` and ``x_n``; otherwise column ``j`` (the last nonzero coordinate of
    ``p``) is replaced by ``e_n`` and the last column by ``p``, which is
    triangular when ``p_n != 0``.
    """
    size = p.n + 1
    j = max(i for i, v in enumerate(p.coords) if v)
    cols = [[1 if r == c else 0 for r in range(size)] for c in range(size)]
    cols[j] = [1 if r == p.n else 0 for r in range(size)]
    cols[p.n] = list(p.coords)
    return ProjectiveTransform([[cols[c][r] for c in range(size)] for r in range(size)])


def move_point_to_last_coordinate(T: TuplePoint, p: ProjectivePoint):
    """Return ``(A.T, A)`` where ``A`` sends ``(0:...:0:1)`` to ``p``."""
    A = transform_to_last_coordinate(p)
    return apply_transform(T, A), A
