"""Command-line entry point: ``odlin solve|reduce|hist|oracle|verify``.

Results go to standard output as JSON. Exit codes: 0 solvable or valid,
1 unsolvable or invalid, 2 unknown, 3 usage error, 4 input error.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from . import jsonio
from .histogram import RATIONAL, decompose, is_histogram, profile, smear
from .linalg import InputError
from .reductions import column_alphabet, instance_to_vas, vas_to_instance
from .solvers import DOMAINS, SOLVABLE, UNSOLVABLE, oracle_pproduct, solve, verify_witness

EXIT_OK, EXIT_NO, EXIT_UNKNOWN, EXIT_USAGE, EXIT_INPUT = 0, 1, 2, 3, 4


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _read(path: str):
    try:
        text = Path(path).read_text()
    except OSError as e:
        raise InputError(f"cannot read {path}: {e.strerror}") from e
    return jsonio.loads(text)


def _write(path: str | None, doc: dict, out) -> None:
    text = jsonio.dumps(doc)
    if path is None:
        print(text, file=out)
    else:
        Path(path).write_text(text + "\n")


def _status_code(status: str) -> int:
    return {SOLVABLE: EXIT_OK, UNSOLVABLE: EXIT_NO}.get(status, EXIT_UNKNOWN)


def _csv(text: str) -> list:
    return [jsonio.parse_rat(v.strip()) for v in text.split(",")]


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="odlin", description="Exchange-product solvers for data vectors.")
    sub = p.add_subparsers(dest="verb", required=True, parser_class=_Parser)

    s = sub.add_parser("solve", help="decide an instance over N, Z, Q or Qplus")
    s.add_argument("--domain", required=True, choices=DOMAINS)
    s.add_argument("--input", required=True)
    s.add_argument("--col-bound", type=int, default=8)
    s.add_argument("--entry-bound", type=int, default=8)

    r = sub.add_parser("reduce", help="translate between VAS and instances")
    rsub = r.add_subparsers(dest="direction", required=True, parser_class=_Parser)
    fv = rsub.add_parser("from-vas")
    fv.add_argument("--input", required=True)
    fv.add_argument("--output")
    tv = rsub.add_parser("to-vas")
    tv.add_argument("--input", required=True)
    tv.add_argument("--output")
    tv.add_argument("--alphabet-bound", type=int, default=2)

    h = sub.add_parser("hist", help="histogram tools")
    h.add_argument("action", choices=("validate", "decompose", "profile", "smear"))
    h.add_argument("--input", required=True)
    h.add_argument("--col", type=int)
    h.add_argument("--left")
    h.add_argument("--right")

    o = sub.add_parser("oracle", help="brute-force placement search")
    o.add_argument("--domain", required=True, choices=DOMAINS)
    o.add_argument("--input", required=True)
    o.add_argument("--m-bound", type=int, default=4)
    o.add_argument("--slot-bound", type=int, default=6)

    v = sub.add_parser("verify", help="check a witness by summation")
    v.add_argument("--input", required=True)
    v.add_argument("--witness", required=True)
    v.add_argument("--domain", choices=DOMAINS)
    return p


def _solve(args, out) -> int:
    inst = jsonio.matrix_instance_from_json(_read(args.input))
    if min(args.col_bound, args.entry_bound) < 0:
        raise UsageError("bounds must be nonnegative")
    kw = {"col_bound": args.col_bound, "entry_bound": args.entry_bound} if args.domain == "N" else {}
    verdict = solve(inst, args.domain, **kw)
    _write(None, jsonio.verdict_json(verdict), out)
    return _status_code(verdict.status)


def _reduce(args, out) -> int:
    doc = _read(args.input)
    if args.direction == "from-vas":
        tr = vas_to_instance(jsonio.vas_from_json(doc))
        _write(args.output, jsonio.instance_json(tr.instance), out)
    else:
        if args.alphabet_bound < 0:
            raise UsageError("alphabet bound must be nonnegative")
        inst = jsonio.matrix_instance_from_json(doc)
        hv = instance_to_vas(inst, column_alphabet(inst, args.alphabet_bound))
        _write(args.output, jsonio.vas_json(hv.vas), out)
    return EXIT_OK


def _hist(args, out) -> int:
    m = jsonio.matrix_from_json(_read(args.input))
    if args.action == "validate":
        check = is_histogram(m, RATIONAL)
        doc = {"histogram": check.ok, "degree": None if check.degree is None else jsonio.rat(check.degree)}
        if not check.ok:
            doc["reason"] = check.reason
            doc["where"] = None if check.where is None else list(check.where)
        _write(None, doc, out)
        return EXIT_OK if check.ok else EXIT_NO
    if args.action == "decompose":
        parts = decompose(m)
        _write(None, {"maps": [list(s.f) for s in parts],
                      "simple": [jsonio.matrix_json(s.matrix) for s in parts]}, out)
        return EXIT_OK
    if args.action == "profile":
        _write(None, {"profile": jsonio.matrix_json(profile(m))}, out)
        return EXIT_OK
    if args.col is None or args.left is None or args.right is None:
        raise UsageError("smear needs --col, --left and --right")
    if not 0 <= args.col < (len(m[0]) if m else 0):
        raise UsageError(f"--col {args.col} is outside the matrix")
    _write(None, {"matrix": jsonio.matrix_json(smear(m, args.col, _csv(args.left), _csv(args.right)))}, out)
    return EXIT_OK


def _oracle(args, out) -> int:
    inst = jsonio.matrix_instance_from_json(_read(args.input))
    verdict = oracle_pproduct(inst, args.domain, args.m_bound, args.slot_bound)
    _write(None, jsonio.verdict_json(verdict), out)
    return _status_code(verdict.status)


def _verify(args, out) -> int:
    inst = jsonio.matrix_instance_from_json(_read(args.input))
    wdoc = _read(args.witness)
    terms, slots = jsonio.witness_from_json(wdoc)
    domain = args.domain or wdoc.get("domain") or "Q"
    if domain not in DOMAINS:
        raise InputError(f"unknown domain {domain!r}")
    ok, report = verify_witness(inst, terms, slots, domain)
    _write(None, {"valid": ok, "report": report, "domain": domain}, out)
    return EXIT_OK if ok else EXIT_NO


def run(argv: list[str] | None = None, out=None, err=None) -> int:
    out = sys.stdout if out is None else out
    err = sys.stderr if err is None else err
    try:
        args = build_parser().parse_args(argv)
        handler = {"solve": _solve, "reduce": _reduce, "hist": _hist, "oracle": _oracle, "verify": _verify}
        return handler[args.verb](args, out)
    except UsageError as e:
        print(f"usage error: {e}", file=err)
        return EXIT_USAGE
    except InputError as e:
        print(f"input error: {e}", file=err)
        return EXIT_INPUT


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
