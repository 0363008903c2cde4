"""Command-line interface.

Commands: test, invariants, algebra, radical, gb.  Exit codes follow the
report contract: 0 = not isomorphic over any field of characteristic p,
10 = isomorphic over some finite field, 20 = inconclusive (budget),
64 = usage error, 65 = bad data, 66 = missing file.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path

from .errors import MipgeoError, ResourceBudgetExceeded, SchemaError
from .filtration import algebra_document, build_filtration, nilpotency_index
from .geotest import (
    ISOMORPHIC_SOME_FIELD,
    NOT_ISOMORPHIC,
    refined_geometric_test,
    report_document,
)
from .groebner import (
    GroebnerBudget,
    buchberger,
    ideal_document,
    least_power_in_ideal,
    load_ideal,
    radical_membership,
    verify_certificate,
)
from .groups import group_document, invariant_profile, load_group_path, split_by_invariant_profile
from .oracle import jennings_layer_dims
from .poly import parse_poly, render_poly

EXIT_NOT_ISOMORPHIC = 0
EXIT_ISOMORPHIC = 10
EXIT_INCONCLUSIVE = 20
EXIT_USAGE = 64
EXIT_DATA = 65
EXIT_IO = 66


def _resolve(path: str) -> Path:
    candidate = Path(path)
    if candidate.exists():
        return candidate
    root = os.environ.get("MIPGEO_DATA")
    if root:
        alt = Path(root) / path
        if alt.exists():
            return alt
    return candidate


def _load_group(path: str):
    resolved = _resolve(path)
    if not resolved.exists():
        print(f"error: no such file: {path}", file=sys.stderr)
        raise SystemExit(EXIT_IO)
    return load_group_path(resolved)


def _load_json(path: str) -> dict:
    resolved = _resolve(path)
    if not resolved.exists():
        print(f"error: no such file: {path}", file=sys.stderr)
        raise SystemExit(EXIT_IO)
    with open(resolved, "r", encoding="utf-8") as fh:
        try:
            return json.load(fh)
        except json.JSONDecodeError as exc:
            print(f"error: {path}: invalid JSON ({exc})", file=sys.stderr)
            raise SystemExit(EXIT_DATA)


def _emit(doc: dict, as_json: bool, text_lines):
    if as_json:
        print(json.dumps(doc, sort_keys=True, indent=2))
    else:
        for line in text_lines:
            print(line)


def _budget(args) -> GroebnerBudget:
    return GroebnerBudget(max_pairs=args.budget_pairs, max_terms=args.budget_terms)


def cmd_test(args) -> int:
    G = _load_group(args.group)
    H = _load_group(args.other)
    forced = _load_group(args.quotient) if args.quotient else None
    try:
        report = refined_geometric_test(
            G,
            H,
            args.p,
            mode=args.mode,
            budget=_budget(args),
            max_level=args.max_level,
            forced_quotient=forced,
            certificate=args.certificate,
        )
    except ResourceBudgetExceeded as exc:
        print(f"inconclusive: {exc}", file=sys.stderr)
        return EXIT_INCONCLUSIVE
    doc = report_document(report)
    doc["groups"] = [G.name, H.name]
    lines = [
        f"{G.name} vs {H.name} (p = {args.p}, mode = {report.mode})",
        f"verdict: {report.verdict}",
    ]
    if report.verdict == NOT_ISOMORPHIC:
        lines.append(
            f"witness: quotient {report.quotient_used} (order {report.quotient_order}), "
            f"level {report.level}; dim = {report.dim_lambda} -> {report.dim_gamma}; "
            f"minors in radical: {report.minors_in_radical}/{report.minors_total}"
        )
    _emit(doc, args.json, lines)
    return EXIT_NOT_ISOMORPHIC if report.verdict == NOT_ISOMORPHIC else EXIT_ISOMORPHIC


def cmd_invariants(args) -> int:
    groups = [_load_group(p) for p in args.groups]
    profiles = [invariant_profile(G, args.p) for G in groups]
    doc = {
        "p": args.p,
        "profiles": [
            {
                "name": G.name,
                "rank": pr.rank,
                "dim_hh1": pr.dim_hh1,
                "k_sequence": list(pr.k_sequence),
                "gl_order": pr.gl_order,
            }
            for G, pr in zip(groups, profiles)
        ],
    }
    lines = [
        f"{G.name}: rank {pr.rank}, dim HH1 {pr.dim_hh1}, "
        f"K {tuple(pr.k_sequence)}, G-L {pr.gl_order}"
        for G, pr in zip(groups, profiles)
    ]
    if len(groups) > 1:
        cells = split_by_invariant_profile(groups, args.p)
        doc["partition"] = [[G.name for G in cell] for cell in cells]
        lines.append("partition: " + " | ".join("{" + ", ".join(G.name for G in cell) + "}" for cell in cells))
    _emit(doc, args.json, lines)
    return 0


def cmd_algebra(args) -> int:
    G = _load_group(args.group)
    level = args.level if args.level is not None else nilpotency_index(G, args.p) - 1
    level = max(level, 1)
    algebra = build_filtration(G, args.p, level)
    doc = algebra_document(algebra)
    lines = [
        f"{algebra.source}: dim {algebra.dim}, layers {tuple(algebra.layer_sizes)}",
        "labels: " + ", ".join(algebra.basis_labels),
    ]
    if args.check:
        problems = _audit_algebra(G, algebra, args.p)
        doc["checks"] = {"passed": not problems, "problems": problems}
        lines.append("checks: " + ("ok" if not problems else "; ".join(problems)))
    _emit(doc, args.json, lines)
    return 0 if not (args.check and doc["checks"]["problems"]) else EXIT_DATA


def _audit_algebra(G, algebra, p) -> list[str]:
    problems = []
    dims = jennings_layer_dims(G, p)
    expect = tuple(dims[: len(algebra.layer_sizes)])
    if expect != tuple(algebra.layer_sizes):
        problems.append(f"layer sizes {algebra.layer_sizes} != Jennings {expect}")
    n = algebra.dim
    for i in range(n):
        for j in range(n):
            left_ij = algebra.multiply(algebra.basis_vector(i), algebra.basis_vector(j))
            for k in range(n):
                lhs = algebra.multiply(left_ij, algebra.basis_vector(k))
                rhs = algebra.multiply(
                    algebra.basis_vector(i),
                    algebra.multiply(algebra.basis_vector(j), algebra.basis_vector(k)),
                )
                if lhs != rhs:
                    problems.append(f"associativity fails at basis triple ({i},{j},{k})")
                    return problems
    return problems


def cmd_radical(args) -> int:
    ideal, names = load_ideal(_load_json(args.ideal))
    try:
        poly = parse_poly(args.poly, names, ideal.ring)
    except ValueError as exc:
        print(f"error: cannot parse polynomial: {exc}", file=sys.stderr)
        return EXIT_DATA
    budget = _budget(args)
    try:
        member = radical_membership(poly, ideal, budget)
        doc = {"polynomial": render_poly(poly, names), "radical_member": member}
        lines = [f"{render_poly(poly, names)}: " + ("in radical" if member else "not in radical")]
        if member and args.certificate:
            cert = least_power_in_ideal(poly, ideal, args.bound, budget, with_cofactors=True)
            if cert is None:
                doc["certificate"] = None
                lines.append(f"no exponent m <= {args.bound} found (bound too small)")
            else:
                if not verify_certificate(poly, cert, ideal):
                    raise MipgeoError("internal error: certificate failed re-verification")
                doc["certificate"] = {
                    "exponent": cert.exponent,
                    "cofactors": [render_poly(c, names) for c in cert.cofactors],
                }
                lines.append(f"least exponent m = {cert.exponent} (cofactors re-verified)")
    except ResourceBudgetExceeded as exc:
        print(f"inconclusive: {exc}", file=sys.stderr)
        return EXIT_INCONCLUSIVE
    _emit(doc, args.json, lines)
    return 0


def cmd_gb(args) -> int:
    ideal, names = load_ideal(_load_json(args.ideal))
    try:
        gb = buchberger(ideal, _budget(args))
    except ResourceBudgetExceeded as exc:
        print(f"inconclusive: {exc}", file=sys.stderr)
        return EXIT_INCONCLUSIVE
    doc = ideal_document(ideal, names)
    doc["groebner_basis"] = [render_poly(g, names) for g in gb.elements]
    lines = ["reduced Groebner basis:"] + [f"  {render_poly(g, names)}" for g in gb.elements]
    _emit(doc, args.json, lines)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="mipgeo",
        description="Geometric non-isomorphism tests for modular group algebras",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--p", type=int, default=2, help="prime characteristic (default 2)")
        p.add_argument("--json", action="store_true", help="emit a JSON report")
        p.add_argument("--budget-pairs", type=int, default=500_000)
        p.add_argument("--budget-terms", type=int, default=5_000_000)

    t = sub.add_parser("test", help="run the refined geometric test on two groups")
    t.add_argument("group")
    t.add_argument("other")
    t.add_argument("--mode", choices=["presentation", "structure"], default="presentation")
    t.add_argument("--max-level", type=int, default=None)
    t.add_argument("--quotient", default=None, help="force a specific quotient fixture")
    t.add_argument("--certificate", action="store_true")
    common(t)
    t.set_defaults(func=cmd_test)

    i = sub.add_parser("invariants", help="print invariant profiles and their partition")
    i.add_argument("groups", nargs="+")
    common(i)
    i.set_defaults(func=cmd_invariants)

    a = sub.add_parser("algebra", help="dump a truncated augmentation-ideal algebra")
    a.add_argument("group")
    a.add_argument("--level", type=int, default=None)
    a.add_argument("--check", action="store_true", help="run associativity and layer audits")
    common(a)
    a.set_defaults(func=cmd_algebra)

    r = sub.add_parser("radical", help="radical membership for a polynomial in an ideal dump")
    r.add_argument("ideal")
    r.add_argument("--poly", required=True)
    r.add_argument("--certificate", action="store_true")
    r.add_argument("--bound", type=int, default=8, help="least-power search bound")
    common(r)
    r.set_defaults(func=cmd_radical)

    g = sub.add_parser("gb", help="print the reduced Groebner basis of an ideal dump")
    g.add_argument("ideal")
    common(g)
    g.set_defaults(func=cmd_gb)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code not in (0, None) else 0
    try:
        return args.func(args)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else EXIT_USAGE
    except (SchemaError, MipgeoError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DATA
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
