"""Command line front end: ``gitlct analyze|vgit-scan|lct INPUT.json``.

Exit status is 0 when the analysis completes (whatever the verdict), 2 on
invalid input and 3 when an internal consistency check fails.
"""

from __future__ import annotations

import argparse
import sys
import time
from fractions import Fraction
from typing import Sequence

from .forms import member
from .io import InputError, Problem, dumps, fmt, load_problem, ops_json, parse_rational, problem_to_json
from .lct import (
    OutsideRegime,
    PointNotOnHypersurface,
    local_lct,
    necessary_condition_check,
    sufficient_vgit_via_lct,
)
from .opssearch import (
    Certificate,
    TorusStatus,
    corollary_regime_limit,
    destabilizer_search,
    per_ray_walls,
    torus_verdict,
    vgit_scan,
    vgit_walls,
)
from .weights import Mode


class InvariantViolation(RuntimeError):
    pass


def _certificate_json(c: Certificate) -> dict:
    return {
        "lambda": ops_json(c.lam),
        "omega": fmt(c.omega),
        "threshold": fmt(c.threshold),
        "classification": c.classification.value,
        "mode": c.mode.value,
        "transform": c.transform.as_lists(),
        "label": c.label,
    }


def _torus_json(tv) -> dict:
    return {
        "status": tv.status.value,
        "candidate_rays": len(tv.ray_verdicts),
        "witnesses": [_certificate_json(c) for c in tv.witnesses],
    }


def _thresholds(p: Problem) -> dict:
    T = p.tuple
    out = {
        "sufficient_(n+1)/d": fmt(Fraction(T.n + 1, T.d)),
        "necessary_(n+1)/(kd)": fmt(Fraction(T.n + 1, T.k * T.d)),
    }
    if p.t:
        try:
            res = sufficient_vgit_via_lct(T.n, T.d, T.k, p.t, 1)
            out["vgit_k(n+1)/(kd-n*sum_t)"] = fmt(res.threshold)
            out["vgit_threshold_vacuous"] = res.vacuous
        except OutsideRegime as exc:
            out["vgit_k(n+1)/(kd-n*sum_t)"] = f"outside regime: {exc}"
    return out


def _members_for_lct(p: Problem):
    T = p.tuple
    named = [(f"f{i + 1}", g) for i, g in enumerate(T.generators)]
    if T.k > 1:
        named.append(("f1+...+fk", member(T, [1] * T.k)))
    return named


def _lct_entry(name, f, q) -> dict:
    v = local_lct(f, q)
    return {"member": name, "form": str(f), "lct": fmt(v.value), "newton_c": fmt(v.newton_c),
            "nondegenerate_assumed": v.nondegenerate_assumed}


def cmd_analyze(p: Problem, mode: Mode = Mode.EXACT, seed: int = 0,
                random_count: int = 0, jobs: int = 1) -> dict:
    T, cfg = p.tuple, p.config
    report: dict = {
        "command": "analyze",
        "request": {"input": problem_to_json(p), "mode": Mode(mode).value, "seed": seed,
                    "random_transforms": random_count, "permutations": True,
                    "base_points_as_transforms": True},
        "tuple": {"n": T.n, "degree": T.d, "k": T.k,
                  "generators": [str(g) for g in T.generators]},
    }
    tv = torus_verdict(T, mode=mode)
    report["torus"] = _torus_json(tv)
    for c in tv.witnesses:
        if not c.recheck(T):
            raise InvariantViolation(f"certificate at {c.lam} does not recheck")

    search = destabilizer_search(T, mode=mode, random_count=random_count, seed=seed,
                                 base_points=p.base_points, jobs=jobs)
    report["search"] = {
        "status": search.status,
        "transforms_tried": search.transforms_tried,
        "certificate": _certificate_json(search.certificate) if search.certificate else None,
        "one_sided": True,
    }
    if search.certificate and not search.certificate.recheck(T):
        raise InvariantViolation("search certificate does not recheck")

    if p.hyperplanes:
        vg: dict = {}
        if cfg is not None:
            vtv = torus_verdict(T, cfg, mode)
            vg["t"] = [fmt(x) for x in cfg.t]
            vg["torus"] = _torus_json(vtv)
        limit = corollary_regime_limit(T)
        walls = vgit_walls(T, p.hyperplanes, mode=mode)
        if len(p.hyperplanes) == 1:
            vg["walls"] = [fmt(w) for w in walls]
            vg["walls_outside_corollary_regime"] = [fmt(w) for w in walls if w >= limit]
        else:
            vg["wall_hyperplanes"] = [
                {"coeffs": [fmt(c) for c in w.coeffs], "rhs": fmt(w.rhs)} for w in walls]
        vg["corollary_regime_limit_sum_t"] = fmt(limit)
        report["vgit"] = vg

    lct_part: dict = {"thresholds": _thresholds(p), "base_points": []}
    claimed = None if search.certificate else tv.status
    for q in p.base_points:
        entry: dict = {"point": [fmt(c) for c in q.coords]}
        try:
            entry["members"] = [_lct_entry(name, f, q) for name, f in _members_for_lct(p)]
        except PointNotOnHypersurface as exc:
            entry["error"] = f"PointNotOnHypersurface: {exc}"
            lct_part["base_points"].append(entry)
            continue
        if T.k > 1:
            nec = necessary_condition_check(
                T, q, {m["member"]: Fraction(m["lct"]) for m in entry["members"]},
                claimed if claimed is not TorusStatus.UNSTABLE else None)
            entry["necessary_condition"] = {
                "threshold": fmt(nec.threshold),
                "rules_out_stable": nec.rules_out_stable,
                "rules_out_semistable": nec.rules_out_semistable,
                "claimed": nec.claimed,
                "violations": [[name, fmt(v)] for name, v in nec.violations],
            }
        lct_part["base_points"].append(entry)
    report["lct"] = lct_part
    return report


def grid(t_range: tuple[Fraction, Fraction], step: Fraction) -> list[Fraction]:
    lo, hi = t_range
    if step <= 0 or hi < lo:
        raise InputError("--t-range/--t-grid", "need a positive step and lo <= hi")
    out, t = [], lo
    while t <= hi:
        if t > 0:
            out.append(t)
        t += step
    return out


def cmd_vgit_scan(p: Problem, t_range, step, mode: Mode = Mode.EXACT, jobs: int = 1) -> dict:
    T = p.tuple
    if len(p.hyperplanes) != 1:
        raise InputError("hyperplanes", "vgit-scan needs exactly one hyperplane")
    ts = grid(t_range, step)
    walls = vgit_walls(T, p.hyperplanes, mode=mode)
    table = vgit_scan(T, p.hyperplanes, ts, mode, jobs)
    # Between consecutive walls the status must not change.
    for (t1, s1), (t2, s2) in zip(table, table[1:]):
        if s1 != s2 and not any(t1 <= w <= t2 for w in walls):
            raise InvariantViolation(f"status changes between {t1} and {t2} without a wall")
    limit = corollary_regime_limit(T)
    return {
        "command": "vgit-scan",
        "request": {"input": problem_to_json(p), "mode": Mode(mode).value,
                    "t_range": [fmt(t_range[0]), fmt(t_range[1])], "t_grid": fmt(step)},
        "walls": [fmt(w) for w in walls],
        "per_ray_walls": [{"lambda": ops_json(lam), "t": fmt(t)}
                          for lam, t in per_ray_walls(T, p.hyperplanes, mode=mode)],
        "corollary_regime_limit_sum_t": fmt(limit),
        "table": [{"t": fmt(t), "status": s.value, "outside_corollary_regime": t >= limit}
                  for t, s in table],
        "constant_between_walls": True,
    }


def cmd_lct(p: Problem) -> dict:
    if not p.base_points:
        raise InputError("base_points", "the lct command needs at least one point")
    points = []
    for q in p.base_points:
        points.append({
            "point": [fmt(c) for c in q.coords],
            "members": [_lct_entry(f"f{i + 1}", g, q) for i, g in enumerate(p.tuple.generators)],
        })
    return {"command": "lct", "request": {"input": problem_to_json(p)},
            "thresholds": _thresholds(p), "points": points}


def render_summary(report: dict, indent: int = 0) -> str:
    """Plain-text rendering of a report; carries no information of its own."""
    lines = []
    pad = "  " * indent
    for key, value in report.items():
        if key == "request":
            continue
        if isinstance(value, dict):
            lines.append(f"{pad}{key}:")
            lines.append(render_summary(value, indent + 1))
        elif isinstance(value, list) and value and isinstance(value[0], dict):
            lines.append(f"{pad}{key}:")
            for item in value:
                lines.append(render_summary(item, indent + 1))
                lines.append(f"{pad}  --")
        else:
            lines.append(f"{pad}{key}: {value}")
    return "\n".join(line for line in lines if line)


def _t_range(text: str) -> tuple[Fraction, Fraction]:
    parts = text.split(":")
    if len(parts) != 2:
        raise InputError("--t-range", "expected a/b:c/d")
    return parse_rational(parts[0], "--t-range"), parse_rational(parts[1], "--t-range")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="gitlct", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)
    for name in ("analyze", "vgit-scan", "lct"):
        sp = sub.add_parser(name)
        sp.add_argument("input")
        sp.add_argument("--mode", choices=[m.value for m in Mode], default="exact")
        sp.add_argument("--seed", type=int, default=0)
        sp.add_argument("--random-transforms", type=int, default=0)
        sp.add_argument("--t-range", default="0:4")
        sp.add_argument("--t-grid", default="1/8")
        sp.add_argument("--jobs", type=int, default=1)
        sp.add_argument("--output")
        sp.add_argument("--format", choices=["json", "summary"], default="json")
        sp.add_argument("--timing", action="store_true",
                        help="add wall-clock timing (makes output non-reproducible)")
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    start = time.perf_counter()
    try:
        problem = load_problem(args.input)
        mode = Mode(args.mode)
        if args.command == "analyze":
            report = cmd_analyze(problem, mode, args.seed, args.random_transforms, args.jobs)
        elif args.command == "vgit-scan":
            report = cmd_vgit_scan(problem, _t_range(args.t_range),
                                   parse_rational(args.t_grid, "--t-grid"), mode, args.jobs)
        else:
            report = cmd_lct(problem)
    except (InputError, PointNotOnHypersurface, OutsideRegime) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except InvariantViolation as exc:
        print(f"internal invariant violated: {exc}", file=sys.stderr)
        return 3
    if args.timing:
        report["timing_seconds"] = round(time.perf_counter() - start, 3)
    text = dumps(report) if args.format == "json" else render_summary(report) + "\n"
    if args.output:
        with open(args.output, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return 0


if __name__ == "__main__":
    sys.exit(main())
