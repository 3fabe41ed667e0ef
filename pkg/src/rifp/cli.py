"""Command-line front end.

    rifp parse C               canonical form, or diagnostics (exit 2)
    rifp eval C -m p=1,q=0     true | false
    rifp valid C               exit 0 if valid, else 1 and a counterexample
    rifp prove C [-o FILE]     proof (exit 0) or counterexample (exit 1)
    rifp check FILE            exit 0 iff the proof is accepted

C may be given inline or read from a file with ``-f``.  Machine-readable
results go to stdout; commentary goes to stderr and is suppressed by
``--porcelain``.  Exit code 2 means a usage or parse error, 3 an exceeded
enumeration cap.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path
from typing import Optional, Sequence

from .errors import CapExceeded, CirquentError, ProofSyntaxError
from .proof import check_proof, parse_proof, render_proof
from .semantics import (DEFAULT_MAX_ATOMS, DEFAULT_MAX_CLUSTERS, format_interpretation,
                        parse_interpretation, true_under, valid)
from .synthesis import prove
from .syntax import parse, render, validate

EXIT_OK, EXIT_NO, EXIT_USAGE, EXIT_CAP = 0, 1, 2, 3


class _Usage(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise _Usage(message)


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--porcelain", action="store_true", help="no commentary on stderr")
    common.add_argument("--max-atoms", type=int, default=DEFAULT_MAX_ATOMS, metavar="N")
    common.add_argument("--max-clusters", type=int, default=DEFAULT_MAX_CLUSTERS, metavar="N")

    source = _Parser(add_help=False)
    source.add_argument("cirquent", nargs="?", help="cirquent text")
    source.add_argument("-f", "--file", help="read the cirquent from FILE")

    parser = _Parser(prog="rifp", description="Cirquents with clustering and ranking.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)
    sub.add_parser("parse", parents=[common, source], help="print the canonical form")
    ev = sub.add_parser("eval", parents=[common, source], help="truth under an interpretation")
    ev.add_argument("-m", "--model", required=True, help="interpretation, e.g. p=1,q=0")
    sub.add_parser("valid", parents=[common, source], help="validity with counterexample")
    pr = sub.add_parser("prove", parents=[common, source], help="synthesize a proof")
    pr.add_argument("-o", "--output", help="write the proof to OUTPUT")
    pr.add_argument("--trace", action="store_true", help="log each rewrite to stderr")
    ch = sub.add_parser("check", parents=[common], help="check a proof file")
    ch.add_argument("proof", help="proof file")
    return parser


def _read_cirquent(args):
    if (args.cirquent is None) == (args.file is None):
        raise _Usage("give the cirquent either inline or with -f, not both")
    text = args.cirquent if args.file is None else Path(args.file).read_text(encoding="utf-8")
    c = parse(text.strip())
    report = validate(c)
    if not report.ok:
        lines = [f"{v.kind}: {v.detail}" for v in report.violations]
        raise CirquentError("ill-formed cirquent\n" + "\n".join(lines), kind="ill-formed")
    return c


def run(argv: Sequence[str], out=None, err=None) -> int:
    out = sys.stdout if out is None else out
    err = sys.stderr if err is None else err
    try:
        args = build_parser().parse_args(list(argv))
    except _Usage as exc:
        print(f"usage error: {exc}", file=err)
        return EXIT_USAGE

    def say(msg: str) -> None:
        if not args.porcelain:
            print(msg, file=err)

    caps = dict(max_atoms=args.max_atoms, max_clusters=args.max_clusters)
    try:
        if args.command == "check":
            return _check(args, out, err, say)
        c = _read_cirquent(args)
        if args.command == "parse":
            print(render(c), file=out)
            return EXIT_OK
        if args.command == "eval":
            star = parse_interpretation(args.model)
            print("true" if true_under(c, star, max_clusters=args.max_clusters) else "false", file=out)
            return EXIT_OK
        if args.command == "valid":
            verdict = valid(c, **caps)
            if verdict.valid:
                print("valid", file=out)
                return EXIT_OK
            say("invalid; falsified by:")
            print(format_interpretation(verdict.counterexample), file=out)
            return EXIT_NO
        log = (lambda line: print(line, file=err)) if args.trace else None
        result = prove(c, log=log, **caps)
        if result.proof is None:
            say("no proof exists; falsified by:")
            print(format_interpretation(result.counterexample), file=out)
            return EXIT_NO
        text = render_proof(result.proof)
        if args.output:
            Path(args.output).write_text(text, encoding="utf-8")
            say(f"wrote {len(result.proof)}-step proof to {args.output}")
        else:
            out.write(text)
        return EXIT_OK
    except CapExceeded as exc:
        print(f"{exc.kind}: {exc}", file=err)
        return EXIT_CAP
    except OSError as exc:
        print(f"error: {exc}", file=err)
        return EXIT_USAGE
    except _Usage as exc:
        print(f"usage error: {exc}", file=err)
        return EXIT_USAGE
    except CirquentError as exc:
        print(f"{exc.kind}: {exc}", file=err)
        return EXIT_USAGE


def _check(args, out, err, say) -> int:
    try:
        pf = parse_proof(Path(args.proof).read_text(encoding="utf-8"))
    except ProofSyntaxError as exc:
        print(f"syntax-error: {exc}", file=err)
        return EXIT_USAGE
    verdict = check_proof(pf)
    if verdict.accepted:
        say(f"{len(pf)} steps checked")
        print("accepted", file=out)
        return EXIT_OK
    print(f"rejected step {verdict.step}: {verdict.reason}", file=out)
    return EXIT_NO


def main(argv: Optional[Sequence[str]] = None) -> int:
    return run(sys.argv[1:] if argv is None else argv)


if __name__ == "__main__":
    sys.exit(main())
