"""Command line entry point."""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .axioms import NormalizeBudget, axiom_report_json, axiom_report_text, normalize
from .bisim import are_equal, bisimilar
from .commform import check_comm, comm_report_json, comm_report_text, formats_spec
from .errors import BudgetExceeded, ParseError, SosError, StateCapExceeded
from .parser import parse_spec, parse_term
from .simulator import step, steps_to_json
from .terms import render_label, render_term
from .tss import render_spec
from .validator import check_all, violations_to_json

EXIT_OK = 0
EXIT_FALSE = 1
EXIT_USAGE = 2
EXIT_BUDGET = 3


def _load_spec(path: str):
    text = Path(path).read_text(encoding="utf-8")
    return parse_spec(text)


def _emit(data) -> None:
    print(json.dumps(data, indent=2))


def cmd_validate(args) -> int:
    spec = _load_spec(args.spec)
    violations = check_all(spec)
    if args.json:
        _emit(violations_to_json(violations))
    elif not violations:
        print("no violations")
    else:
        for v in violations:
            print(v)
    return EXIT_OK if not violations else EXIT_FALSE


def cmd_simulate(args) -> int:
    spec = _load_spec(args.spec)
    term = parse_term(args.term, spec)
    steps = step(spec, term)
    if args.json:
        _emit(steps_to_json(steps))
        return EXIT_OK
    print("Possible steps:")
    for s in steps:
        print(f" < {render_label(s.label)} # {render_term(s.target)} >")
    return EXIT_OK


def cmd_bisim(args) -> int:
    spec = _load_spec(args.spec)
    p = parse_term(args.term1, spec)
    q = parse_term(args.term2, spec)
    ok, witness = bisimilar(spec, p, q, args.state_cap)
    if args.json:
        _emit({"bisimilar": ok, "witness": witness.to_json() if witness else None})
    elif ok:
        print("true")
        assert witness is not None
        for pair in witness.pairs:
            print(f" < {render_term(pair[0])} ; {render_term(pair[1])} >")
    else:
        print("false")
    return EXIT_OK if ok else EXIT_FALSE


def cmd_eq(args) -> int:
    spec = _load_spec(args.spec)
    ok, witness = are_equal(spec, args.const1, args.const2, args.state_cap)
    if args.json:
        _emit({"bisimilar": ok, "witness": witness.to_json() if witness else None})
    elif ok:
        assert witness is not None
        print(f"< true ; {witness} >")
    else:
        print("< false >")
    return EXIT_OK if ok else EXIT_FALSE


def cmd_normalize(args) -> int:
    spec = _load_spec(args.spec)
    term = parse_term(args.term, spec)
    budget = NormalizeBudget(max_rewrites=args.budget) if args.budget else None
    result = normalize(spec, term, budget)
    if args.json:
        _emit({"term": render_term(result)})
    else:
        print(render_term(result))
    return EXIT_OK


def cmd_axioms(args) -> int:
    spec = _load_spec(args.spec)
    if args.json:
        _emit(axiom_report_json(spec))
    else:
        print(axiom_report_text(spec), end="")
    return EXIT_OK


def cmd_comm(args) -> int:
    spec = _load_spec(args.spec)
    report = check_comm(spec)
    if args.emit_formats:
        derived = formats_spec(spec, report)
        Path(args.emit_formats).write_text(render_spec(derived), encoding="utf-8")
    if args.json:
        _emit(comm_report_json(report))
    else:
        print(comm_report_text(spec, report), end="")
    return EXIT_OK if not report.failed else EXIT_FALSE


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="sosforge",
        description="Workbench for rule-based language specifications",
    )
    sub = ap.add_subparsers(dest="command", required=True)

    def add(name, fn, help_text):
        p = sub.add_parser(name, help=help_text)
        p.add_argument("spec", help="specification file (.sos)")
        p.add_argument("--json", action="store_true", help="machine-readable output")
        p.set_defaults(fn=fn)
        return p

    add("validate", cmd_validate, "check rule and definition well-formedness")

    p = add("simulate", cmd_simulate, "list the one-step transitions of a term")
    p.add_argument("term")

    p = add("bisim", cmd_bisim, "decide strong bisimilarity of two terms")
    p.add_argument("term1")
    p.add_argument("term2")
    p.add_argument("--state-cap", type=int, default=None, metavar="N")

    p = add("eq", cmd_eq, "decide bisimilarity of two defined constants")
    p.add_argument("const1")
    p.add_argument("const2")
    p.add_argument("--state-cap", type=int, default=None, metavar="N")

    p = add("normalize", cmd_normalize, "rewrite a term to its normal form")
    p.add_argument("term")
    p.add_argument("--budget", type=int, default=None, metavar="N",
                   help="rewrite budget (default 10000)")

    add("axioms", cmd_axioms, "print the equation schema instance")

    p = add("comm", cmd_comm, "check binary operators for commutativity")
    p.add_argument("--emit-formats", metavar="PATH", default=None,
                   help="write the spec with proved attributes to PATH")

    return ap


def main(argv: list[str] | None = None) -> int:
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as e:
        return EXIT_USAGE if e.code not in (0, None) else EXIT_OK
    try:
        return args.fn(args)
    except (StateCapExceeded, BudgetExceeded) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_BUDGET
    except ParseError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_USAGE
    except SosError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_USAGE
    except FileNotFoundError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
