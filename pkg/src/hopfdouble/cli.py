"""Command-line front end.

Subcommands
-----------
validate-algebra   run the Hopf-axiom suite on an algebra
check IDENTITY     verify one named double/smash identity
invariant          evaluate an invariant of an uncolored diagram
colored-invariant  evaluate the colored invariant of a colored diagram
verify-jj          compare the embedded universal and doubled invariants
moves              run the move-pair invariance suite
complex            build a cell complex from a diagram and print stats

Exit codes: 0 success, 1 mathematical failure (a witness is printed),
2 input error (bad files, unknown names, invalid options).

Output is deterministic: identical configuration and seed produce
byte-identical output.  ``--output json`` mirrors the text fields
one-for-one.  The environment variable HOPFDOUBLE_THREADS caps worker
parallelism (this implementation evaluates sequentially, which is
within any cap).
"""

from __future__ import annotations

import argparse
import json
import os
import random
import sys

from .cells import ComplexError, build_C, build_O, complex_stats
from .diagram import DOWN, UP, Diagram, DiagramError
from .doubles import Doubles, IDENTITY_CHECKS, IdentityFailure, check_identity
from .exactlin import Field
from .hopf import BUILTINS, HopfAxiomError, HopfPresentation, builtin
from .invariant import (InvariantValue, colored_J, doubled_J, framing_doubled_J,
                        normalized_doubled_J, universal_J, verify_jj)
from .moves import enumerate_move_pairs, pachner_pair, random_colored_braid

EXIT_OK = 0
EXIT_MATH = 1
EXIT_INPUT = 2


class InputError(Exception):
    """Unusable input: missing file, malformed JSON, unknown name."""


# ----------------------------------------------------------------------
# input resolution
# ----------------------------------------------------------------------

def _parse_field(text: str) -> Field:
    if text in ("Q", "q", "0"):
        return Field(0)
    try:
        p = int(text)
    except ValueError:
        raise InputError(f"bad field {text!r}: use Q or a prime") from None
    try:
        return Field(p)
    except ValueError as e:
        raise InputError(str(e)) from None


def _load_algebra(spec: str, field_text: str) -> HopfPresentation:
    if spec.startswith("builtin:"):
        name = spec[len("builtin:"):]
        if name not in BUILTINS:
            raise InputError(f"unknown builtin algebra {name!r}; choices: "
                             f"{sorted(BUILTINS)}")
        return builtin(name, _parse_field(field_text))
    try:
        with open(spec) as fh:
            obj = json.load(fh)
    except OSError as e:
        raise InputError(f"cannot read algebra file: {e}") from None
    except json.JSONDecodeError as e:
        raise InputError(f"malformed algebra JSON: {e}") from None
    try:
        return HopfPresentation.from_json(obj, name=os.path.basename(spec))
    except (KeyError, TypeError, ValueError, IndexError) as e:
        raise InputError(f"bad algebra description: {e}") from None


def _load_diagram(path: str) -> Diagram:
    try:
        with open(path) as fh:
            obj = json.load(fh)
    except OSError as e:
        raise InputError(f"cannot read diagram file: {e}") from None
    except json.JSONDecodeError as e:
        raise InputError(f"malformed diagram JSON: {e}") from None
    try:
        return Diagram.from_json(obj)
    except (DiagramError, KeyError, TypeError, ValueError) as e:
        raise InputError(f"bad diagram description: {e}") from None


def _thread_cap() -> int:
    raw = os.environ.get("HOPFDOUBLE_THREADS", "")
    try:
        return max(1, int(raw))
    except ValueError:
        return 1


# ----------------------------------------------------------------------
# report rendering (one data structure, two serializations)
# ----------------------------------------------------------------------

def _emit(report: dict, output: str, out=None) -> None:
    out = out or sys.stdout
    if output == "json":
        out.write(json.dumps(report, indent=2, sort_keys=True))
        out.write("\n")
        return
    _emit_text(report, out, prefix="")


def _emit_text(node, out, prefix: str) -> None:
    if isinstance(node, dict):
        for key in sorted(node):
            val = node[key]
            if isinstance(val, (dict, list)):
                out.write(f"{prefix}{key}:\n")
                _emit_text(val, out, prefix + "  ")
            else:
                out.write(f"{prefix}{key}: {val}\n")
    elif isinstance(node, list):
        for val in node:
            if isinstance(val, (dict, list)):
                out.write(f"{prefix}-\n")
                _emit_text(val, out, prefix + "  ")
            else:
                out.write(f"{prefix}- {val}\n")
    else:
        out.write(f"{prefix}{node}\n")


def _value_report(value: InvariantValue, theta_split: bool) -> dict:
    """Serialize an invariant value: raw tensor entries and, for values
    with closed slots, the quotient (cyclic-class) representatives."""
    def entries(tensor):
        rows = []
        for idx, v in tensor.sorted_items():
            if theta_split:
                split = []
                for s, p in enumerate(idx):
                    base = value.slot_ops[s].base.dim
                    deg, i = divmod(p, base)
                    split.append({"theta_degree": deg, "basis": i})
                rows.append({"slots": split, "coeff": str(v)})
            else:
                rows.append({"slots": list(idx), "coeff": str(v)})
        return rows

    report = {
        "slots": [ops.name for ops in value.slot_ops],
        "closed": list(value.closed),
        "entries": entries(value.tensor),
    }
    if any(value.closed):
        report["quotient_entries"] = entries(value.canonical_tensor())
    return report


# ----------------------------------------------------------------------
# subcommands
# ----------------------------------------------------------------------

def _cmd_validate_algebra(args) -> tuple[int, dict]:
    A = _load_algebra(args.algebra, args.field)
    report = {"command": "validate-algebra", "algebra": A.name,
              "field": "Q" if A.field.p == 0 else f"F{A.field.p}",
              "dimension": A.dim}
    try:
        A.validate()
    except HopfAxiomError as e:
        report.update(result="fail", witness=str(e))
        return EXIT_MATH, report
    report["result"] = "pass"
    return EXIT_OK, report


def _cmd_check(args) -> tuple[int, dict]:
    if args.identity not in IDENTITY_CHECKS:
        raise InputError(f"unknown identity {args.identity!r}; choices: "
                         f"{sorted(IDENTITY_CHECKS)}")
    A = _load_algebra(args.algebra, args.field)
    report = {"command": "check", "identity": args.identity,
              "algebra": A.name}
    try:
        dd = Doubles(A)
        check_identity(dd, args.identity)
    except (HopfAxiomError, IdentityFailure) as e:
        report.update(result="fail", witness=str(e))
        return EXIT_MATH, report
    report["result"] = "pass"
    return EXIT_OK, report


_MODES = {
    "J": (universal_J, True),
    "Jprime": (doubled_J, True),
    "Jpp": (normalized_doubled_J, True),
    "J0": (framing_doubled_J, True),
}


def _cmd_invariant(args) -> tuple[int, dict]:
    A = _load_algebra(args.algebra, args.field)
    diagram = _load_diagram(args.diagram)
    if diagram.colored:
        raise InputError("this subcommand takes uncolored diagrams; "
                         "use colored-invariant for colored ones")
    fn, theta_split = _MODES[args.mode]
    dd = Doubles(A)
    value = fn(diagram, dd)
    report = {"command": "invariant", "mode": args.mode, "algebra": A.name,
              "diagram": args.diagram,
              "value": _value_report(value, theta_split)}
    return EXIT_OK, report


def _cmd_colored_invariant(args) -> tuple[int, dict]:
    A = _load_algebra(args.algebra, args.field)
    diagram = _load_diagram(args.diagram)
    if not diagram.colored:
        raise InputError("this subcommand takes colored diagrams; "
                         "use invariant for uncolored ones")
    dd = Doubles(A)
    value = colored_J(diagram, dd)
    report = {"command": "colored-invariant", "algebra": A.name,
              "diagram": args.diagram,
              "value": _value_report(value, theta_split=False)}
    return EXIT_OK, report


def _cmd_verify_jj(args) -> tuple[int, dict]:
    A = _load_algebra(args.algebra, args.field)
    diagram = _load_diagram(args.diagram)
    if diagram.colored:
        raise InputError("verify-jj takes uncolored diagrams")
    dd = Doubles(A)
    ok, witness = verify_jj(diagram, dd)
    report = {"command": "verify-jj", "algebra": A.name,
              "diagram": args.diagram,
              "result": "pass" if ok else "fail"}
    if not ok:
        report["witness"] = witness
        return EXIT_MATH, report
    return EXIT_OK, report


def _move_suite_seeds(seed: int):
    rng = random.Random(seed)
    seeds = [random_colored_braid(rng, 3, 2) for _ in range(2)]
    seeds.append(pachner_pair(((DOWN, False), (DOWN, False), (UP, True)))[0])
    return seeds


def _cmd_moves(args) -> tuple[int, dict]:
    if not args.suite:
        raise InputError("moves requires --suite")
    A = _load_algebra(args.algebra, args.field)
    dd = Doubles(A)
    exceptions = A.antipode_order_two()
    pairs = enumerate_move_pairs(_move_suite_seeds(args.seed), args.depth,
                                 seed=args.seed,
                                 include_exceptions=exceptions)
    if args.max_pairs:
        pairs = pairs[:args.max_pairs]
    checks = []
    failures = 0
    for before, after, move, tag in pairs:
        equal = colored_J(before, dd) == colored_J(after, dd)
        checks.append({"move": move, "tag": tag,
                       "result": "pass" if equal else "fail"})
        if not equal:
            failures += 1
    report = {"command": "moves", "algebra": A.name, "seed": args.seed,
              "pairs_checked": len(checks), "failures": failures,
              "include_exception_moves": exceptions, "checks": checks}
    if failures:
        return EXIT_MATH, report
    return EXIT_OK, report


def _cmd_complex(args) -> tuple[int, dict]:
    diagram = _load_diagram(args.diagram)
    try:
        if args.octahedral:
            cx = build_O(diagram)
        else:
            if not diagram.colored:
                raise InputError("the plain cell complex takes colored "
                                 "diagrams; pass --octahedral for tangles")
            cx = build_C(diagram)
    except (ComplexError, DiagramError) as e:
        raise InputError(str(e)) from None
    report = {"command": "complex", "diagram": args.diagram,
              "octahedral": bool(args.octahedral),
              "stats": complex_stats(cx)}
    return EXIT_OK, report


# ----------------------------------------------------------------------
# argument parsing and dispatch
# ----------------------------------------------------------------------

def _add_common(sub, algebra=True, diagram=False):
    if algebra:
        sub.add_argument("--algebra", required=True,
                         help="builtin:NAME or a JSON algebra file")
        sub.add_argument("--field", default="Q",
                         help="Q (default) or a prime p (builtins only)")
    if diagram:
        sub.add_argument("--diagram", required=True,
                         help="JSON diagram file")
    sub.add_argument("--output", choices=("text", "json"), default="text")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="hopfdouble",
        description="Exact quantum invariants of framed tangles from "
                    "doubles of finite-dimensional Hopf algebras.")
    subs = parser.add_subparsers(dest="command", required=True)

    s = subs.add_parser("validate-algebra", help="run the Hopf-axiom suite")
    _add_common(s)
    s.set_defaults(fn=_cmd_validate_algebra)

    s = subs.add_parser("check", help="verify one named identity")
    s.add_argument("identity", help="|".join(sorted(IDENTITY_CHECKS)))
    _add_common(s)
    s.set_defaults(fn=_cmd_check)

    s = subs.add_parser("invariant", help="evaluate an uncolored invariant")
    _add_common(s, diagram=True)
    s.add_argument("--mode", choices=sorted(_MODES), default="J")
    s.set_defaults(fn=_cmd_invariant)

    s = subs.add_parser("colored-invariant",
                        help="evaluate the colored invariant")
    _add_common(s, diagram=True)
    s.set_defaults(fn=_cmd_colored_invariant)

    s = subs.add_parser("verify-jj",
                        help="compare embedded universal vs doubled values")
    _add_common(s, diagram=True)
    s.set_defaults(fn=_cmd_verify_jj)

    s = subs.add_parser("moves", help="move-pair invariance suite")
    _add_common(s)
    s.add_argument("--suite", action="store_true",
                   help="run the generated move-pair suite")
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--depth", type=int, default=1)
    s.add_argument("--max-pairs", type=int, default=20)
    s.set_defaults(fn=_cmd_moves)

    s = subs.add_parser("complex", help="cell complex statistics")
    s.add_argument("--diagram", required=True, help="JSON diagram file")
    s.add_argument("--octahedral", action="store_true",
                   help="build the pole-completed complex of a tangle")
    s.add_argument("--stats", action="store_true",
                   help="print counts (default and only report)")
    s.add_argument("--output", choices=("text", "json"), default="text")
    s.set_defaults(fn=_cmd_complex)

    return parser


def run(argv=None, out=None) -> int:
    out = out or sys.stdout
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return EXIT_INPUT if e.code else EXIT_OK
    _thread_cap()  # parse the env cap up front so bad values never interfere
    try:
        code, report = args.fn(args)
    except InputError as e:
        sys.stderr.write(f"error: {e}\n")
        return EXIT_INPUT
    _emit(report, args.output, out)
    return code


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
