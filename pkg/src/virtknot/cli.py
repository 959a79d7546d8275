"""Command-line front end (``vk``).

Exit status: 0 on success, 1 on a domain error (reported as JSON on stderr),
2 on a usage error.  All JSON output uses sorted keys and compact separators
so identical inputs give byte-identical output.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path
from typing import Any, Sequence

from . import FORMAT_VERSION, __version__
from .corpus import RunConfig, bundled_corpus, corpus_run, load_corpus, rows_to_json, rows_to_tsv
from .errors import VirtKnotError
from .gauss import canonicalize, classical_parity, parse, read_codes, serialize
from .groups import DEFAULT_MAX_ORDER, bundled_groups, load_groups
from .invariants import DEFAULT_BRACKET_LIMIT, DEFAULT_FOX, invariant_report
from .moves import R3_MODES, Equivalent, apply, enumerate_moves, search_equivalence
from .movesite import move_graph_space
from .site import (
    SiteCaps,
    category_of_elements,
    continuity_check,
    enumerate_points,
    filtering_check,
    global_invariants,
    is_topology,
    load_site,
    opens_site,
    pi0,
    plus_construction,
    sheaf_check,
    sheafify,
)
from .surface import build_ribbon, to_dot

__all__ = ["main", "run", "build_parser"]


def _dumps(data: Any) -> str:
    return json.dumps(data, sort_keys=True, separators=(",", ":"))


def _moduli(text: str) -> tuple[int, ...]:
    """Parse ``3``, ``2,3,5`` or a range ``2..9``."""
    try:
        if ".." in text:
            lo, hi = text.split("..", 1)
            values = tuple(range(int(lo), int(hi) + 1))
        else:
            values = tuple(int(x) for x in text.split(",") if x)
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad modulus list {text!r}") from None
    if not values or any(v < 2 for v in values):
        raise argparse.ArgumentTypeError("moduli must be integers >= 2")
    return values


def _positive(text: str) -> int:
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"{text!r} is not an integer") from None
    if value <= 0:
        raise argparse.ArgumentTypeError("value must be positive")
    return value


def _caps(args: argparse.Namespace) -> SiteCaps:
    return SiteCaps(args.max_objects, args.max_arrows, args.max_elements)


# --- verbs ---------------------------------------------------------------------

def cmd_parse(args: argparse.Namespace) -> int:
    code = parse(args.code)
    canon = canonicalize(code)
    out = {
        "input": serialize(code),
        "canonical": serialize(canon),
        "crossings": code.n,
        "writhe": code.writhe(),
        "parity": {str(c): classical_parity(code, c).value for c in code.crossings()},
    }
    print(_dumps(out))
    return 0


def cmd_moves(args: argparse.Namespace) -> int:
    code = parse(args.code)
    if args.action == "list":
        limit = args.max_crossings if args.max_crossings is not None else code.n + 2
        for move, result in enumerate_moves(code, limit, args.r3):
            print(f"{move}\t{serialize(result)}")
    else:
        if args.move is None:
            raise VirtKnotError("moves apply needs a move")
        print(serialize(apply(code, args.move)))
    return 0


def cmd_equiv(args: argparse.Namespace) -> int:
    a, b = parse(args.code_a), parse(args.code_b)
    result = search_equivalence(a, b, args.max_crossings, args.max_states, args.r3)
    if isinstance(result, Equivalent):
        out = {"result": "Equivalent", "length": len(result.path),
               "path": result.path.to_records(), "states": result.states}
    else:
        out = {"result": "NotFoundWithinBounds", "states": result.states,
               "exhausted": result.exhausted}
    print(_dumps(out))
    return 0


def cmd_surface(args: argparse.Namespace) -> int:
    code = parse(args.code)
    if args.dot:
        sys.stdout.write(to_dot(code))
        return 0
    s = build_ribbon(code)
    print(_dumps({"code": serialize(code), "euler_characteristic": s.euler_characteristic,
                  "boundary_curves": s.boundary_curves, "genus": s.genus}))
    return 0


def cmd_invariants(args: argparse.Namespace) -> int:
    code = parse(args.code)
    groups = load_groups(args.groups, args.max_group_order) if args.groups else bundled_groups()
    report = invariant_report(code, groups, fox=args.fox, bracket=True, bracket_limit=args.bracket_limit)
    data = report.to_dict()
    if not args.bracket:
        data.pop("bracket", None)
    print(_dumps(data))
    return 0


def cmd_corpus(args: argparse.Namespace) -> int:
    config = RunConfig(bracket_limit=args.bracket_limit, group_list_path=args.groups,
                       output_format=args.format, fox=args.fox, workers=args.workers)
    corpus = bundled_corpus() if args.path == "-bundled" else load_corpus(args.path)
    rows = corpus_run(corpus, config)
    text = rows_to_tsv(rows) if args.format == "tsv" else rows_to_json(rows) + "\n"
    if args.output:
        Path(args.output).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)
    if args.figures:
        from .report import write_figures

        for path in write_figures(rows, args.figures):
            print(f"wrote {path}", file=sys.stderr)
    return 0


def _result_dict(result: Any) -> dict:
    out = {"result": str(result)}
    for name in ("axiom", "witness", "object", "sieve", "family", "reason", "condition", "element"):
        if hasattr(result, name):
            value = getattr(result, name)
            out[name] = list(value) if isinstance(value, tuple) else value
    return out


def cmd_site(args: argparse.Namespace) -> int:
    caps = _caps(args)
    if args.action == "invariants":
        return _site_invariants(args, caps)
    if args.path is None:
        raise VirtKnotError(f"site {args.action} needs a site file")
    doc = load_site(args.path, caps)
    cat, coverage = doc.site.category, doc.site.coverage
    if args.action == "check-topology":
        result = is_topology(cat, coverage)
        print(str(result) if not hasattr(result, "axiom") else _dumps(_result_dict(result)))
        return 0
    if args.action in ("sheaf-check", "sheafify"):
        if doc.presheaf is None:
            raise VirtKnotError("the site file has no presheaf")
        if args.action == "sheaf-check":
            result = sheaf_check(cat, coverage, doc.presheaf)
            print(str(result) if not hasattr(result, "reason") else _dumps(_result_dict(result)))
        else:
            _require_topology(cat, coverage)
            sheaf = plus_construction(cat, coverage, doc.presheaf) if args.once \
                else sheafify(cat, coverage, doc.presheaf)
            print(_dumps(sheaf.to_dict()))
        return 0
    if args.action == "pi0":
        target = category_of_elements(cat, doc.functor) if doc.functor is not None else cat
        print(_dumps({"components": [list(c) for c in pi0(target)]}))
        return 0
    if args.action == "points":
        _require_topology(cat, coverage)
        if args.check_functor:
            if doc.functor is None:
                raise VirtKnotError("the site file has no functor")
            print(_dumps({"filtering": _result_dict(filtering_check(cat, doc.functor)),
                          "continuity": _result_dict(continuity_check(cat, coverage, doc.functor))}))
            return 0
        points = enumerate_points(cat, coverage, args.max_size)
        print(_dumps({"max_size": args.max_size, "count": len(points),
                      "points": [p.to_dict()["sets"] for p in points]}))
        return 0
    raise VirtKnotError(f"unknown site action {args.action!r}")  # pragma: no cover


def _require_topology(cat, coverage) -> None:
    result = is_topology(cat, coverage)
    if hasattr(result, "axiom"):
        raise VirtKnotError(f"coverage is not a Grothendieck topology ({result.axiom} fails)")


def _site_invariants(args: argparse.Namespace, caps: SiteCaps) -> int:
    values = [str(i) for i in range(args.group_size)]
    if args.path is not None:
        doc = load_site(args.path, caps)
        site = doc.site
        extra: dict = {}
    else:
        codes = [parse(c) for c in args.codes]
        if args.codes_file:
            codes += read_codes(Path(args.codes_file).read_text(encoding="utf-8").splitlines())
        if not codes:
            raise VirtKnotError("site invariants needs a site file, --code or --codes-file")
        space = move_graph_space(codes, args.max_crossings, args.max_states, args.r3, caps.max_objects)
        site = opens_site(space)
        extra = {"classes": [sorted(c) for c in space.components()]}
    _require_topology(site.category, site.coverage)
    sections = global_invariants(site.category, site.coverage, values)
    out = {"group_size": args.group_size, "count": len(sections), **extra}
    if args.list:
        out["invariants"] = sections
    print(_dumps(out))
    return 0


# --- parser --------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="vk", description="Virtual knot calculus on signed Gauss codes.")
    parser.add_argument("--version", action="version",
                        version=f"vk {__version__} (format {FORMAT_VERSION})")
    sub = parser.add_subparsers(dest="verb", required=True)

    p = sub.add_parser("parse", help="validate a code and print its canonical form")
    p.add_argument("code")
    p.set_defaults(func=cmd_parse)

    p = sub.add_parser("moves", help="list or apply Reidemeister moves")
    p.add_argument("action", choices=("list", "apply"))
    p.add_argument("code")
    p.add_argument("move", nargs="?")
    p.add_argument("--max-crossings", type=_positive, default=None,
                   help="crossing bound for insertions (default: n + 2)")
    p.add_argument("--r3", choices=R3_MODES, default="cyclic")
    p.set_defaults(func=cmd_moves)

    p = sub.add_parser("equiv", help="search for a move path between two codes")
    p.add_argument("code_a")
    p.add_argument("code_b")
    p.add_argument("--max-crossings", type=_positive, default=6)
    p.add_argument("--max-states", type=_positive, default=100_000)
    p.add_argument("--r3", choices=R3_MODES, default="cyclic")
    p.set_defaults(func=cmd_equiv)

    p = sub.add_parser("surface", help="ribbon surface of the abstract diagram")
    p.add_argument("code")
    p.add_argument("--dot", action="store_true", help="emit the ribbon graph as DOT")
    p.set_defaults(func=cmd_surface)

    def invariant_options(p: argparse.ArgumentParser) -> None:
        p.add_argument("--groups", help="JSON file of group multiplication tables")
        p.add_argument("--max-group-order", type=_positive, default=DEFAULT_MAX_ORDER)
        p.add_argument("--fox", type=_moduli, default=DEFAULT_FOX, help="moduli, e.g. 3, 2,5 or 2..9")
        p.add_argument("--bracket-limit", type=_positive, default=DEFAULT_BRACKET_LIMIT)

    p = sub.add_parser("invariants", help="invariant report as JSON")
    p.add_argument("code")
    invariant_options(p)
    p.add_argument("--bracket", action="store_true", help="include the raw Kauffman bracket")
    p.set_defaults(func=cmd_invariants)

    p = sub.add_parser("corpus", help="run the invariant report over a corpus file")
    p.add_argument("path", nargs="?", default="-bundled",
                   help="corpus file (default: the bundled corpus)")
    invariant_options(p)
    p.add_argument("--format", choices=("tsv", "json"), default="tsv")
    p.add_argument("--output", "-o", help="write the table here instead of stdout")
    p.add_argument("--figures", metavar="DIR", help="also render PNG figures into DIR")
    p.add_argument("--workers", type=_positive, default=1)
    p.set_defaults(func=cmd_corpus)

    p = sub.add_parser("site", help="finite-site checks")
    p.add_argument("action", choices=("check-topology", "sheaf-check", "sheafify", "points",
                                      "pi0", "invariants"))
    p.add_argument("path", nargs="?", help="site JSON file")
    p.add_argument("--max-objects", type=_positive, default=SiteCaps.max_objects)
    p.add_argument("--max-arrows", type=_positive, default=SiteCaps.max_arrows)
    p.add_argument("--max-elements", type=_positive, default=SiteCaps.max_elements)
    p.add_argument("--once", action="store_true", help="sheafify: apply the plus construction once")
    p.add_argument("--max-size", type=_positive, default=1,
                   help="points: largest element set searched")
    p.add_argument("--check-functor", action="store_true",
                   help="points: check the file's functor instead of enumerating")
    p.add_argument("--group-size", type=_positive, default=2, help="invariants: size of G")
    p.add_argument("--list", action="store_true", help="invariants: list every section")
    p.add_argument("--code", dest="codes", action="append", default=[],
                   help="invariants: a code of the move-graph site (repeatable)")
    p.add_argument("--codes-file", help="invariants: file of codes, one per line")
    p.add_argument("--max-crossings", type=_positive, default=6)
    p.add_argument("--max-states", type=_positive, default=100_000)
    p.add_argument("--r3", choices=R3_MODES, default="cyclic")
    p.set_defaults(func=cmd_site)
    return parser


def run(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (VirtKnotError, OSError, KeyError, ValueError) as exc:
        name = type(exc).__name__
        message = str(exc.args[0]) if isinstance(exc, KeyError) and exc.args else str(exc)
        print(_dumps({"error": name, "message": message}), file=sys.stderr)
        return 1


def main(argv: Sequence[str] | None = None) -> int:
    try:
        return run(argv)
    except SystemExit as exc:  # argparse usage errors and --version
        return int(exc.code or 0)


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
