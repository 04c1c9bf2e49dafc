"""JSON input parsing and report serialization.

Input schema::

    {"n": 2, "degree": 3,
     "generators": [{"terms": [{"exp": [3, 0, 0], "coeff": "1"}, ...]}, ...],
     "hyperplanes": [{"coeffs": ["0", "0", "1"]}],      # optional
     "t": ["1/2"],                                      # optional
     "base_points": [["0", "0", "1"]]}                  # optional

Coefficients are exact rational strings ``"p"`` or ``"p/q"``; decimals are
rejected.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any

from .forms import (
    DependentGenerators,
    EmptyForm,
    HyperplaneForm,
    HypersurfaceForm,
    ProjectivePoint,
    TuplePoint,
)
from .lattice import NormalizedOPS
from .weights import VGITConfig

_RATIONAL = re.compile(r"^\s*-?\d+(\s*/\s*\d+)?\s*$")


class InputError(ValueError):
    """Invalid input; ``field`` locates the problem."""

    def __init__(self, field: str, message: str):
        super().__init__(f"{field}: {message}")
        self.field = field


def parse_rational(value: Any, where: str) -> Fraction:
    if isinstance(value, bool) or not isinstance(value, str) or not _RATIONAL.match(value):
        raise InputError(where, f"expected a rational string 'p' or 'p/q', got {value!r}")
    try:
        return Fraction(value.replace(" ", ""))
    except ZeroDivisionError:
        raise InputError(where, "zero denominator") from None


def fmt(q) -> str:
    return str(Fraction(q))


@dataclass
class Problem:
    """A validated input file."""

    tuple: TuplePoint
    hyperplanes: tuple[HyperplaneForm, ...] = ()
    t: tuple[Fraction, ...] = ()
    base_points: tuple[ProjectivePoint, ...] = ()
    raw: dict = field(default_factory=dict)

    @property
    def config(self) -> VGITConfig | None:
        if self.hyperplanes and self.t:
            return VGITConfig(self.t, self.hyperplanes)
        return None


def _int(value, where) -> int:
    if isinstance(value, bool) or not isinstance(value, int):
        raise InputError(where, f"expected an integer, got {value!r}")
    return value


def _list(value, where) -> list:
    if not isinstance(value, list):
        raise InputError(where, f"expected a list, got {type(value).__name__}")
    return value


def parse_problem(data: dict) -> Problem:
    if not isinstance(data, dict):
        raise InputError("$", "top level must be an object")
    allowed = {"n", "degree", "generators", "hyperplanes", "t", "base_points"}
    extra = set(data) - allowed
    if extra:
        raise InputError("$", f"unknown keys {sorted(extra)}")
    for key in ("n", "degree", "generators"):
        if key not in data:
            raise InputError(key, "missing")
    n = _int(data["n"], "n")
    d = _int(data["degree"], "degree")
    if n < 1 or d < 1:
        raise InputError("n/degree", "must be positive")

    gens = []
    for gi, gen in enumerate(_list(data["generators"], "generators")):
        where = f"generators[{gi}]"
        if not isinstance(gen, dict) or "terms" not in gen:
            raise InputError(where, "expected an object with 'terms'")
        terms: dict[tuple[int, ...], Fraction] = {}
        for ti, term in enumerate(_list(gen["terms"], f"{where}.terms")):
            tw = f"{where}.terms[{ti}]"
            if not isinstance(term, dict) or set(term) != {"exp", "coeff"}:
                raise InputError(tw, "expected {'exp': [...], 'coeff': 'p/q'}")
            exps = tuple(_int(e, f"{tw}.exp") for e in _list(term["exp"], f"{tw}.exp"))
            if len(exps) != n + 1:
                raise InputError(f"{tw}.exp", f"has {len(exps)} entries, expected n+1 = {n + 1}")
            if any(e < 0 for e in exps):
                raise InputError(f"{tw}.exp", "negative exponent")
            if sum(exps) != d:
                raise InputError(f"{tw}.exp", f"sums to {sum(exps)}, expected degree {d}")
            if exps in terms:
                raise InputError(f"{tw}.exp", f"duplicate monomial {list(exps)}")
            terms[exps] = parse_rational(term["coeff"], f"{tw}.coeff")
        try:
            gens.append(HypersurfaceForm(n, d, terms))
        except EmptyForm:
            raise InputError(where, "generator has no nonzero terms") from None
    if not gens:
        raise InputError("generators", "need at least one generator")
    try:
        T = TuplePoint(gens)
    except DependentGenerators as exc:
        raise InputError("generators", f"DependentGenerators: relation {exc.relation}") from None

    hyperplanes = []
    for hi, h in enumerate(_list(data.get("hyperplanes", []), "hyperplanes")):
        where = f"hyperplanes[{hi}]"
        if not isinstance(h, dict) or set(h) != {"coeffs"}:
            raise InputError(where, "expected {'coeffs': [...]}")
        cs = [parse_rational(c, f"{where}.coeffs[{j}]")
              for j, c in enumerate(_list(h["coeffs"], f"{where}.coeffs"))]
        if len(cs) != n + 1:
            raise InputError(f"{where}.coeffs", f"expected {n + 1} coefficients")
        try:
            hyperplanes.append(HyperplaneForm(tuple(cs)))
        except ValueError as exc:
            raise InputError(where, str(exc)) from None
    t = tuple(parse_rational(x, f"t[{i}]") for i, x in enumerate(_list(data.get("t", []), "t")))
    if t and len(t) != len(hyperplanes):
        raise InputError("t", "need one t value per hyperplane")
    if hyperplanes and t:
        try:
            VGITConfig(t, tuple(hyperplanes))
        except ValueError as exc:
            raise InputError("hyperplanes/t", str(exc)) from None

    points = []
    for pi, p in enumerate(_list(data.get("base_points", []), "base_points")):
        where = f"base_points[{pi}]"
        cs = [parse_rational(c, f"{where}[{j}]") for j, c in enumerate(_list(p, where))]
        if len(cs) != n + 1:
            raise InputError(where, f"expected {n + 1} coordinates")
        try:
            points.append(ProjectivePoint(tuple(cs)))
        except ValueError as exc:
            raise InputError(where, str(exc)) from None
    return Problem(T, tuple(hyperplanes), t, tuple(points), data)


def load_problem(path) -> Problem:
    with open(path, encoding="utf-8") as fh:
        text = fh.read()
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise InputError(f"line {exc.lineno} column {exc.colno}", exc.msg) from None
    return parse_problem(data)


def problem_to_json(p: Problem) -> dict:
    """Canonical echo of a problem (stable key order, rational strings)."""
    out: dict[str, Any] = {
        "n": p.tuple.n,
        "degree": p.tuple.d,
        "generators": [
            {"terms": [{"exp": list(e), "coeff": fmt(c)} for e, c in g.items()]}
            for g in p.tuple.generators
        ],
    }
    if p.hyperplanes:
        out["hyperplanes"] = [{"coeffs": [fmt(c) for c in h.coeffs]} for h in p.hyperplanes]
    if p.t:
        out["t"] = [fmt(x) for x in p.t]
    if p.base_points:
        out["base_points"] = [[fmt(c) for c in q.coords] for q in p.base_points]
    return out


def ops_json(lam: NormalizedOPS) -> list[str]:
    return [fmt(a) for a in lam.weights]


def dumps(report: dict) -> str:
    return json.dumps(report, indent=2, sort_keys=False) + "\n"
