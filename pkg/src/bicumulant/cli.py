"""Command-line front end: ``bicumulant enumerate|expand|verify|model``.

Exit codes: 0 success, 1 a law failed, 2 usage error, 3 size cap exceeded.
Results go to stdout (JSON when ``--format json``); diagnostics to stderr.
"""

from __future__ import annotations

import argparse
import json
import sys
from typing import Iterator, Sequence

from . import cumulants as C
from .expr import Expr, Shape, render
from .forests import (
    INFINITY,
    ReducedForest,
    enumerate_colourings,
    enumerate_reduced_forests,
    enumerate_reduced_trees,
    forest_notation,
    forest_predicate,
    forest_to_json,
    w_of_forest,
)
from .model import MODEL_LAWS, degree_diagnostic, model_check, random_assignment
from .partitions import (
    format_partition,
    is_mixing_partition,
    is_strongly_mixing,
    partition_to_json,
    set_partitions,
    sweep_shapes,
)
from .sequences import enumerate_sequences
from .verify import (
    ALIASES,
    DEFAULT_CAP,
    EXPR_LAWS,
    SHAPE_LAWS,
    CapExceeded,
    LawReport,
    expand_law_names,
    verify,
    verify_paths,
)

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_CAP = 0, 1, 2, 3

KINDS = ("partitions", "forests", "trees", "colourings", "sequences")
FILTERS = ("all", "mixing", "strongly-mixing")
EXPAND_LAWS = ("main", "ls-analogue", "dual-main", "dual-analogue")


class UsageError(Exception):
    pass


def _shape_arg(text: str) -> Shape:
    try:
        return Shape.parse(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def _emit_json(obj) -> None:
    sys.stdout.write(json.dumps(obj, indent=2) + "\n")


def _w_json(w):
    return None if w == INFINITY else w


def _check_cap(shape: Shape, cap: int) -> None:
    if shape.total > cap:
        raise CapExceeded(shape, cap)


# -- enumerate ---------------------------------------------------------------


def _partition_filter(kind: str):
    if kind == "all":
        return lambda nu, shape: True
    if kind == "mixing":
        return is_mixing_partition
    return is_strongly_mixing


def _enumerate_items(kind: str, shape: Shape, filt: str) -> Iterator[tuple[str, object]]:
    """(text line, JSON value) for each item."""
    if kind == "partitions":
        keep = _partition_filter(filt)
        for nu in set_partitions(shape.slots()):
            if keep(nu, shape):
                yield format_partition(nu), partition_to_json(nu)
    elif kind in ("forests", "trees"):
        keep = forest_predicate(filt)
        if kind == "forests":
            source = enumerate_reduced_forests(shape.slots())
        else:
            source = (ReducedForest((t,)) for t in enumerate_reduced_trees(shape.slots()))
        for f in source:
            if keep(f, shape):
                w = w_of_forest(f, shape)
                text = f"{forest_notation(f)}    w={'inf' if w == INFINITY else w}"
                yield text, {"forest": forest_to_json(f), "w": _w_json(w)}
    elif kind == "colourings":
        keep = forest_predicate(filt)
        for f in enumerate_reduced_forests(shape.slots()):
            if not keep(f, shape):
                continue
            for c in enumerate_colourings(f, shape):
                cols = " ".join(f"{''.join(map(str, a))}:{v}" for a, v in c.colours)
                text = f"{forest_notation(f)}    r={c.length}    {cols}"
                yield text, {
                    "forest": forest_to_json(f),
                    "colouring": c.to_json(),
                    "length": c.length,
                }
    elif kind == "sequences":
        keep = _partition_filter(filt)
        for w in enumerate_sequences(shape, require_mixing_start=False):
            if keep(w.levels[0], shape):
                yield f"{w}    r={w.length}", {"levels": w.to_json(), "length": w.length}
    else:
        raise UsageError(f"unknown kind {kind!r}")


def cmd_enumerate(args) -> int:
    _check_cap(args.shape, args.cap)
    items = list(_enumerate_items(args.kind, args.shape, args.filter))
    if args.format == "json":
        _emit_json(
            {
                "kind": args.kind,
                "shape": list(args.shape.sizes),
                "filter": args.filter,
                "count": len(items),
                "items": [j for _, j in items],
            }
        )
    else:
        for text, _ in items:
            print(text)
        print(f"count: {len(items)}")
    return EXIT_OK


# -- expand ------------------------------------------------------------------


def _signed_forests(law: str, shape: Shape) -> tuple[list, bool]:
    strongly = law in ("ls-analogue", "dual-analogue")
    dual = law.startswith("dual")
    return C.signed_forests(shape, strongly=strongly), dual


def _signed_join(parts: list[tuple[int, str]]) -> str:
    if not parts:
        return "0"
    out = []
    for k, (sign, body) in enumerate(parts):
        if k == 0:
            out.append(("-" if sign < 0 else "") + body)
        else:
            out.append(("- " if sign < 0 else "+ ") + body)
    return " ".join(out)


def cmd_expand(args) -> int:
    shape = args.shape
    _check_cap(shape, args.cap)
    if args.law not in EXPAND_LAWS:
        raise UsageError(f"expand supports the laws {', '.join(EXPAND_LAWS)}")
    forests, dual = _signed_forests(args.law, shape)
    expanded = Expr.combine((s, C.kappa_of_forest(f, dual)) for s, f in forests)
    if args.format == "latex":
        print(_signed_join([(s, forest_notation(f, "latex", dual)) for s, f in forests]))
    elif args.format == "json":
        _emit_json(
            {
                "law": args.law,
                "shape": list(shape.sizes),
                "forests": [
                    {
                        "sign": s,
                        "w": w_of_forest(f, shape),
                        "notation": forest_notation(f, "text", dual),
                        "forest": forest_to_json(f),
                    }
                    for s, f in forests
                ],
                "expanded": render(expanded),
                "terms": len(expanded),
            }
        )
    else:
        print(render(expanded))
    return EXIT_OK


# -- verify ------------------------------------------------------------------


def _shapes(args) -> list[Shape]:
    if args.shape is not None and args.max_size is not None:
        raise UsageError("give either --shape or --max-size, not both")
    if args.shape is not None:
        return [args.shape]
    if args.max_size is not None:
        if args.max_size < 1:
            raise UsageError("--max-size must be positive")
        return sweep_shapes(args.max_size)
    raise UsageError("--shape or --max-size is required")


def _law_list(name: str) -> tuple[str, ...]:
    if name == "all":
        return SHAPE_LAWS
    try:
        return expand_law_names(name)
    except ValueError as exc:
        raise UsageError(str(exc)) from None


def _report_line(r: LawReport) -> str:
    status = "PASS" if r.equal else "FAIL"
    where = "-" if r.shape is None else str(r.shape)
    bits = [status, r.law, where]
    if r.lhs is not None:
        bits.append(f"lhs_terms={r.lhs_terms} rhs_terms={r.rhs_terms}")
    for k, v in r.detail.items():
        bits.append(f"{k}={v}")
    if r.mismatch:
        bits.append(f"first mismatch {r.mismatch['term']}: {r.mismatch['lhs']} vs {r.mismatch['rhs']}")
    return " ".join(bits)


def cmd_verify(args) -> int:
    if args.law == "path-fg":
        if args.arity is None or args.max_coord is None:
            raise UsageError("path-fg needs --arity and --max-coord")
        try:
            reports = [verify_paths(args.arity, args.max_coord)]
        except ValueError as exc:
            raise UsageError(str(exc)) from None
    else:
        laws = _law_list(args.law)
        shapes = _shapes(args)
        for s in shapes:
            _check_cap(s, args.cap)
        reports = [verify(law, s, args.cap) for s in shapes for law in laws]
    if args.format == "json":
        _emit_json([r.to_json(args.timing) for r in reports])
    else:
        for r in reports:
            print(_report_line(r))
    failed = [r for r in reports if not r.equal]
    for r in failed:
        print(f"law violated: {_report_line(r)}", file=sys.stderr)
    print(f"{len(reports) - len(failed)}/{len(reports)} checks hold", file=sys.stderr)
    return EXIT_FAIL if failed else EXIT_OK


# -- model -------------------------------------------------------------------


def cmd_model(args) -> int:
    if args.law == "all":
        laws = MODEL_LAWS
    else:
        laws = _law_list(args.law)
        bad = [law for law in laws if law not in EXPR_LAWS]
        if bad:
            raise UsageError(f"{bad[0]!r} has no symbolic sides to evaluate")
    shapes = _shapes(args)
    for s in shapes:
        _check_cap(s, args.cap)
    if args.trials < 1:
        raise UsageError("--trials must be positive")
    reports = [
        model_check(law, s, args.seed, args.trials, corrupt=args.corrupt)
        for s in shapes
        for law in laws
    ]
    if args.format == "json":
        payload = [r.to_json() for r in reports]
        if args.degrees:
            import random

            for s, entry in zip([s for s in shapes for _ in laws], payload):
                assignment = random_assignment(s.slots(), random.Random(args.seed))
                entry["degrees"] = degree_diagnostic(s, assignment)
        _emit_json(payload)
    else:
        for r in reports:
            status = "PASS" if r.equal else "FAIL"
            print(f"{status} {r.law} {r.shape} seed={r.seed} trials={r.trials}")
    failed = [r for r in reports if not r.equal]
    for r in failed:
        print(
            f"model mismatch: {r.law} {r.shape} trial {r.failure['trial']} "
            f"assignment {json.dumps(r.failure['assignment'])}",
            file=sys.stderr,
        )
    return EXIT_FAIL if failed else EXIT_OK


# -- parser ------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="bicumulant",
        description="Cumulants between two commutative products: enumerate, expand, verify.",
    )
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp, fmt_choices, fmt_default):
        sp.add_argument("--format", choices=fmt_choices, default=fmt_default)
        sp.add_argument(
            "--unsafe-cap",
            dest="cap",
            type=int,
            default=DEFAULT_CAP,
            metavar="N",
            help=f"largest total number of slots accepted (default {DEFAULT_CAP})",
        )

    e = sub.add_parser("enumerate", help="list partitions, forests, trees, colourings or sequences")
    e.add_argument("kind", choices=KINDS)
    e.add_argument("--shape", type=_shape_arg, required=True, help="group sizes, e.g. 2,1")
    e.add_argument("--filter", choices=FILTERS, default="all")
    common(e, ("text", "json"), "text")
    e.set_defaults(func=cmd_enumerate)

    x = sub.add_parser("expand", help="signed forest expansion of a shape")
    x.add_argument("--shape", type=_shape_arg, required=True)
    x.add_argument("--law", default="main", choices=EXPAND_LAWS)
    common(x, ("text", "latex", "json"), "text")
    x.set_defaults(func=cmd_expand)

    law_names = ("all",) + SHAPE_LAWS + ("path-fg",) + tuple(ALIASES)
    v = sub.add_parser("verify", help="check identities exactly")
    v.add_argument("--law", required=True, choices=law_names)
    v.add_argument("--shape", type=_shape_arg)
    v.add_argument("--max-size", type=int, help="sweep every shape with at most N slots")
    v.add_argument("--arity", type=int)
    v.add_argument("--max-coord", type=int)
    v.add_argument("--timing", action="store_true", help="include elapsed milliseconds")
    common(v, ("text", "json"), "json")
    v.set_defaults(func=cmd_verify)

    m = sub.add_parser("model", help="evaluate a law in the falling-factorial polynomial model")
    m.add_argument("--law", required=True, choices=("all",) + tuple(EXPR_LAWS) + tuple(ALIASES))
    m.add_argument("--shape", type=_shape_arg)
    m.add_argument("--max-size", type=int)
    m.add_argument("--seed", type=int, default=0)
    m.add_argument("--trials", type=int, default=20)
    m.add_argument("--degrees", action="store_true", help="add the degree diagnostic (json only)")
    m.add_argument("--corrupt", action="store_true", help=argparse.SUPPRESS)
    common(m, ("text", "json"), "json")
    m.set_defaults(func=cmd_model)
    return p


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except UsageError as exc:
        parser.print_usage(sys.stderr)
        print(f"bicumulant: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except CapExceeded as exc:
        print(f"bicumulant: refused: {exc}", file=sys.stderr)
        return EXIT_CAP


if __name__ == "__main__":
    sys.exit(main())
