"""Command-line front end.

Exit status: 0 when the answer is consistent/true/entailed/equivalent, 1 when
it is inconsistent/false/not entailed/not equivalent, 2 on usage or input
errors.
"""

from __future__ import annotations

import argparse
import sys
from fractions import Fraction
from pathlib import Path
from typing import Optional, Sequence

from . import cluster_tree as ct
from .fo_decide import FreeVariableMismatch, NonClosedFormula, decide, free_vars, quantifier_depth
from .inference import entails, equivalent
from .omspace import format_point
from .oracle import MAX_SYMBOLS, euclid_check, oracle_consistent
from .parsing import ParseError, parse_constraint, parse_constraints, parse_formula
from .solver import num_labels, solve, solve_fast, solve_mixed

TRUE, FALSE, ERROR = 0, 1, 2


class UsageError(Exception):
    pass


def _load(path: str, err):
    try:
        text = Path(path).read_text()
    except OSError as e:
        raise UsageError(f"cannot read {path}: {e.strerror}") from None
    try:
        doc = parse_constraints(text)
    except ParseError as e:
        raise UsageError(f"{path}: {e}") from None
    for w in doc.warnings:
        print(f"{path}: warning: {w}", file=err)
    cs = doc.constraint_set()
    if not cs.symbols:
        raise UsageError(f"{path}: no symbols")
    return cs


def _solve(cs, naive: bool):
    if cs.weak or cs.order:
        return solve_mixed(cs)
    return solve(cs) if naive else solve_fast(cs)


def _approx(x: Fraction) -> str:
    return f"{float(x):.12g}"


def _euclid_lines(valuation, approx: bool) -> list:
    lines = []
    for s in sorted(valuation):
        coords = ", ".join(str(c) for c in valuation[s])
        line = f"{s}: ({coords})"
        if approx:
            line += "  approx (" + ", ".join(_approx(c) for c in valuation[s]) + ")"
        lines.append(line)
    return lines


def _fraction(text: str) -> Fraction:
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"not a rational number: {text!r}") from None


def cmd_solve(args, out, err) -> int:
    cs = _load(args.file, err)
    if args.finite_B is not None and (cs.weak or cs.order):
        raise UsageError("--finite-B applies to strict comparisons only")
    if args.finite_B is not None and not args.finite_B > cs.n:
        raise UsageError(f"--finite-B needs B > n = {cs.n}")
    tree = _solve(cs, args.naive)
    if args.oracle:
        if cs.n > MAX_SYMBOLS:
            print(f"oracle: skipped ({cs.n} symbols, limit {MAX_SYMBOLS})", file=err)
        else:
            agrees = oracle_consistent(cs) == (tree is not None)
            print(f"oracle: {'agrees' if agrees else 'DISAGREES'}", file=err)
            if not agrees:
                return ERROR
    if tree is None:
        print("inconsistent", file=out)
        return FALSE
    if args.format == "json":
        print(ct.to_json(tree), file=out)
    elif args.format == "dot":
        print(ct.to_dot(tree), file=out)
    else:
        print(ct.format_tree(tree), file=out)
    if args.finite_B is not None:
        val = ct.instantiate_euclidean(tree, args.finite_B, args.dim)
        if not euclid_check(val, cs, args.finite_B):
            print("error: Euclidean witness failed its check", file=err)
            return ERROR
        print(f"# Euclidean witness, B = {args.finite_B}, dim = {args.dim}", file=out)
        for line in _euclid_lines(val, args.approx):
            print(line, file=out)
    return TRUE


def cmd_labels(args, out, err) -> int:
    cs = _load(args.file, err)
    if cs.weak or cs.order:
        raise UsageError("labels applies to strict comparisons only")
    k = num_labels(cs)
    if k is None:
        print("inconsistent", file=out)
        return FALSE
    if args.max_scales is None:
        print(k, file=out)
        return TRUE
    ok = k <= args.max_scales
    verdict = "satisfiable" if ok else "unsatisfiable"
    print(f"{verdict} with {args.max_scales} scale(s); needs {k}", file=out)
    return TRUE if ok else FALSE


def cmd_entail(args, out, err) -> int:
    cs = _load(args.file, err)
    try:
        query = parse_constraint(args.query)
    except ParseError as e:
        raise UsageError(f"--query: {e}") from None
    ok = entails(cs, (), query)
    print("entailed" if ok else "not entailed", file=out)
    return TRUE if ok else FALSE


def cmd_equiv(args, out, err) -> int:
    ok = equivalent(_load(args.file1, err), _load(args.file2, err))
    print("equivalent" if ok else "not equivalent", file=out)
    return TRUE if ok else FALSE


def cmd_decide(args, out, err) -> int:
    try:
        f = parse_formula(args.formula)
    except ParseError as e:
        raise UsageError(f"formula: {e}") from None
    depth = quantifier_depth(f)
    if depth > args.max_depth:
        raise UsageError(f"quantifier depth {depth} exceeds --max-depth {args.max_depth}")
    tree = None
    if args.tree:
        try:
            tree = ct.from_json(Path(args.tree).read_text())
        except (OSError, ValueError, KeyError) as e:
            raise UsageError(f"cannot load tree {args.tree}: {e}") from None
        bad = ct.validate(tree)
        if bad:
            raise UsageError(f"{args.tree}: invalid tree: {bad[0]}")
    elif free_vars(f):
        raise UsageError(f"free variables {', '.join(sorted(free_vars(f)))} need --tree")
    try:
        ok = decide(tree, f)
    except (FreeVariableMismatch, NonClosedFormula) as e:
        raise UsageError(str(e)) from None
    print("true" if ok else "false", file=out)
    return TRUE if ok else FALSE


def cmd_instantiate(args, out, err) -> int:
    cs = _load(args.file, err)
    tree = _solve(cs, naive=False)
    if tree is None:
        print("inconsistent", file=out)
        return FALSE
    if args.euclidean is not None:
        if cs.order:
            raise UsageError("--euclidean does not support order constraints")
        B, dim = args.euclidean
        try:
            B, dim = Fraction(B), int(dim)
        except ValueError:
            raise UsageError("--euclidean takes a rational B and an integer DIM") from None
        if B <= 1 or dim < 1:
            raise UsageError("--euclidean needs B > 1 and DIM >= 1")
        for line in _euclid_lines(ct.instantiate_euclidean(tree, B, dim), args.approx):
            print(line, file=out)
        return TRUE
    val = ct.instantiate_ordered(tree) if cs.order else ct.instantiate(tree)
    for s in sorted(val):
        print(f"{s}: {format_point(val[s])}", file=out)
    return TRUE


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="omdist",
        description="Order-of-magnitude distance constraints: consistency, witnesses, inference.",
    )
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("solve", help="decide consistency and print a cluster tree")
    s.add_argument("file")
    s.add_argument("--format", choices=("text", "json", "dot"), default="text")
    s.add_argument("--naive", action="store_true", help="use the reference solver")
    s.add_argument("--finite-B", type=_fraction, metavar="B", help="also print a Euclidean witness at ratio B")
    s.add_argument("--dim", type=int, default=1, help="dimension for --finite-B (default 1)")
    s.add_argument("--approx", action="store_true", help="add decimal renderings of coordinates")
    s.add_argument("--oracle", action="store_true", help="cross-check against brute force")
    s.set_defaults(run=cmd_solve)

    s = sub.add_parser("labels", help="fewest distinct non-zero orders of magnitude")
    s.add_argument("file")
    s.add_argument("--max-scales", type=int, metavar="K")
    s.set_defaults(run=cmd_labels)

    s = sub.add_parser("entail", help="does the file entail a query constraint")
    s.add_argument("file")
    s.add_argument("--query", required=True, help="e.g. 'closer(a,b ; c,d)'")
    s.set_defaults(run=cmd_entail)

    s = sub.add_parser("equiv", help="are two constraint files equivalent")
    s.add_argument("file1")
    s.add_argument("file2")
    s.set_defaults(run=cmd_equiv)

    s = sub.add_parser("decide", help="decide a first-order formula")
    s.add_argument("formula")
    s.add_argument("--tree", help="JSON cluster tree whose leaves are the free variables")
    s.add_argument("--max-depth", type=int, default=6, help="quantifier depth limit (default 6)")
    s.set_defaults(run=cmd_decide)

    s = sub.add_parser("instantiate", help="print a concrete valuation")
    s.add_argument("file")
    g = s.add_mutually_exclusive_group()
    g.add_argument("--euclidean", nargs=2, metavar=("B", "DIM"))
    g.add_argument("--symbolic", action="store_true", help="polynomial points (default)")
    s.add_argument("--approx", action="store_true")
    s.set_defaults(run=cmd_instantiate)
    return p


def run(argv: Optional[Sequence[str]] = None, out=None, err=None) -> int:
    out = sys.stdout if out is None else out
    err = sys.stderr if err is None else err
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return ERROR if e.code else TRUE
    try:
        return args.run(args, out, err)
    except UsageError as e:
        print(f"error: {e}", file=err)
        return ERROR


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
