"""Command-line interface.

Exit codes: 0 success, 1 negative answer (counterexample, or x<y),
2 usage/parse/schema error, 3 empty choice or no satisfactory element,
4 resource guard tripped.
"""
from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path
from typing import List, Optional

from . import bench
from .dsl import ParseError, display_procedure, parse_filter, parse_preference_spec, parse_procedure, spec_to_doc
from .engine import apply_procedure
from .formats import load_catalog, procedure_to_doc
from .general import derive_general_spec, general_length, normalize_general, synthesize_any
from .heuristics import satisfice_after_procedure
from .model import (
    EmptyChoice,
    NoSatisfactoryElement,
    NotSimple,
    ResourceLimit,
    SchemaError,
    bind_procedure,
    bind_spec,
)
from .normalizer import check_equivalence, length, normalize
from .preference import pref_compare

EXIT_OK, EXIT_NEGATIVE, EXIT_USAGE, EXIT_EMPTY, EXIT_RESOURCE = 0, 1, 2, 3, 4


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(EXIT_USAGE)


def _read(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    return Path(path).read_text(encoding="utf-8")


def _procedure(path: str, catalog=None):
    p = parse_procedure(_read(path))
    return bind_procedure(p, catalog.schema) if catalog is not None else p


def _spec(path: str, catalog=None):
    spec = parse_preference_spec(_read(path))
    return bind_spec(spec, catalog.schema) if catalog is not None else spec


def _id_list(text: Optional[str], catalog):
    if text is None:
        return catalog.ids
    return catalog.check_list(x.strip() for x in text.split(",") if x.strip())


def _tree(doc, indent=0) -> List[str]:
    pad = "  " * indent
    if isinstance(doc, dict):
        lines = []
        for k, v in doc.items():
            if isinstance(v, (dict, list)):
                lines.append(f"{pad}{k}:")
                lines.extend(_tree(v, indent + 1))
            else:
                lines.append(f"{pad}{k}: {v}")
        return lines
    lines = []
    for v in doc:
        lines.extend(_tree(v, indent) if isinstance(v, (dict, list)) else [f"{pad}- {v}"])
    return lines


def cmd_parse(args) -> int:
    p = parse_procedure(_read(args.file))
    if args.json:
        print(json.dumps({"text": display_procedure(p), "ast": procedure_to_doc(p)}, indent=2))
    else:
        print(display_procedure(p))
        print("\n".join(_tree(procedure_to_doc(p))))
    return EXIT_OK


def cmd_normalize(args) -> int:
    catalog = load_catalog(args.catalog) if args.catalog else None
    p = _procedure(args.file, catalog)
    if p.is_simple:
        nf = normalize(p)
        print(display_procedure(nf.to_procedure()))
        for attr in nf.empty_attributes:
            print(f"empty-interval: {attr}")
        print(f"length={length(nf)}")
    else:
        gnf = normalize_general(p)
        print(display_procedure(gnf.to_procedure()))
        print(f"length={general_length(gnf)} (clauses + sorts)")
    return EXIT_OK


def cmd_eval(args) -> int:
    catalog = load_catalog(args.catalog)
    p = _procedure(args.file, catalog)
    for item in apply_procedure(p, _id_list(args.list, catalog), catalog):
        print(item)
    return EXIT_OK


def cmd_prefer(args) -> int:
    catalog = load_catalog(args.catalog)
    spec = _spec(args.spec, catalog)
    catalog.check_list([args.x, args.y])
    verdict = pref_compare(spec, args.x, args.y, catalog)
    print(verdict.value)
    return EXIT_NEGATIVE if verdict.value == "x<y" else EXIT_OK


def cmd_derive(args) -> int:
    catalog = load_catalog(args.catalog) if args.catalog else None
    p = _procedure(args.file, catalog)
    print(json.dumps(spec_to_doc(derive_general_spec(p)), indent=2))
    return EXIT_OK


def cmd_synth(args) -> int:
    print(display_procedure(synthesize_any(_spec(args.spec))))
    return EXIT_OK


def cmd_check(args) -> int:
    universe = load_catalog(args.universe)
    p1 = _procedure(args.p1, universe)
    p2 = _procedure(args.p2, universe)
    attrs = [a.strip() for a in args.attrs.split(",")] if args.attrs else None
    result = check_equivalence(p1, p2, universe, attrs, max_len=args.max_len)
    if result.equivalent:
        print("equivalent")
        return EXIT_OK
    print("counterexample: [" + ", ".join(result.counterexample) + "]")
    return EXIT_NEGATIVE


def cmd_satisfice(args) -> int:
    catalog = load_catalog(args.catalog)
    p = _procedure(args.file, catalog)
    missing = parse_filter(args.missing)
    print(satisfice_after_procedure(p, missing, _id_list(args.list, catalog), catalog))
    return EXIT_OK


def cmd_bench(args) -> int:
    rows = bench.run_bench(args.attrs, args.items, args.trials, args.seed)
    text = bench.rows_to_csv(rows)
    if args.out:
        Path(args.out).write_text(text, encoding="utf-8", newline="")
    else:
        sys.stdout.write(text)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="filtersort", description="Filter/sort decision procedures.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    sp = sub.add_parser("parse", help="pretty-print a procedure and dump its AST")
    sp.add_argument("file")
    sp.add_argument("--json", action="store_true")
    sp.set_defaults(func=cmd_parse)

    sp = sub.add_parser("normalize", help="print the normal form and its length")
    sp.add_argument("file")
    sp.add_argument("--catalog", help="needed when filters use ordinal labels")
    sp.set_defaults(func=cmd_normalize)

    sp = sub.add_parser("eval", help="run a procedure over a catalog")
    sp.add_argument("file")
    sp.add_argument("--catalog", required=True)
    sp.add_argument("--list", help="comma-separated ids (default: catalog order)")
    sp.set_defaults(func=cmd_eval)

    sp = sub.add_parser("prefer", help="compare two items under a spec")
    sp.add_argument("spec")
    sp.add_argument("--catalog", required=True)
    sp.add_argument("--x", required=True)
    sp.add_argument("--y", required=True)
    sp.set_defaults(func=cmd_prefer)

    sp = sub.add_parser("derive", help="preference spec of a procedure")
    sp.add_argument("file")
    sp.add_argument("--catalog")
    sp.set_defaults(func=cmd_derive)

    sp = sub.add_parser("synth", help="procedure realizing a preference spec")
    sp.add_argument("spec")
    sp.set_defaults(func=cmd_synth)

    sp = sub.add_parser("check", help="exhaustive equivalence check on a small universe")
    sp.add_argument("p1")
    sp.add_argument("p2")
    sp.add_argument("--universe", required=True)
    sp.add_argument("--max-len", type=int, default=4)
    sp.add_argument("--attrs", help="comma-separated attribute set (default: all)")
    sp.set_defaults(func=cmd_check)

    sp = sub.add_parser("satisfice", help="run a procedure, then satisfice on a missing predicate")
    sp.add_argument("file")
    sp.add_argument("--missing", required=True)
    sp.add_argument("--catalog", required=True)
    sp.add_argument("--list")
    sp.set_defaults(func=cmd_satisfice)

    sp = sub.add_parser("bench", help="seeded step-count benchmark, CSV output")
    sp.add_argument("--attrs", type=int, required=True)
    sp.add_argument("--items", type=int, required=True)
    sp.add_argument("--trials", type=int, default=10)
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--out")
    sp.set_defaults(func=cmd_bench)
    return parser


def main(argv: Optional[List[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except ParseError as exc:
        print(f"parse error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (SchemaError, NotSimple, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (EmptyChoice, NoSatisfactoryElement) as exc:
        print(f"no choice: {exc}", file=sys.stderr)
        return EXIT_EMPTY
    except ResourceLimit as exc:
        print(f"resource limit: {exc}", file=sys.stderr)
        return EXIT_RESOURCE


if __name__ == "__main__":
    raise SystemExit(main())
