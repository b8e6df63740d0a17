"""Command-line front end.

Exit codes: 0 success, 2 bad input, 3 a mathematical cross-check failed.
"""

from __future__ import annotations

import argparse
import json
import sys

from .branch import BranchParametrization, MalformedInput, ValidationError, characteristic_sequence, from_json_obj
from .corpus import corpus_documents
from .invariants import ORACLES, HistogramMismatch, KStarUndefined, OracleDisagreement, full_report
from .membership import DEFAULT_SEED, BoundTooSmall, WitnessUnexpectedlyStrong, classify, value_semigroup
from .polynomial import ParseError, parse_polynomial
from .series import PrecisionError
from .verify import verify_branch
from .weierstrass import build_weierstrass

EXIT_OK = 0
EXIT_INPUT = 2
EXIT_CHECK = 3


class CheckFailed(Exception):
    def __init__(self, law: str, message: str):
        super().__init__(message)
        self.law = law


def dump_json(obj) -> str:
    return json.dumps(obj, sort_keys=True, indent=2) + "\n"


def _read_curve_doc(path: str | None) -> dict:
    if path in (None, "-"):
        text = sys.stdin.read()
    else:
        try:
            with open(path) as fh:
                text = fh.read()
        except OSError as exc:
            raise MalformedInput(f"cannot read {path}: {exc.strerror}") from None
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise MalformedInput(f"invalid JSON: {exc}") from None
    if not isinstance(doc, dict):
        raise MalformedInput("curve file must hold a JSON object")
    return doc


def _load_curve(path: str | None) -> BranchParametrization:
    return from_json_obj(_read_curve_doc(path))


def _parse_oracles(text: str) -> tuple[str, ...]:
    names = [s.strip() for s in text.split(",") if s.strip()]
    if names == ["all"]:
        return ORACLES
    bad = [n for n in names if n not in ORACLES]
    if bad or not names:
        raise argparse.ArgumentTypeError(f"unknown oracle(s) {bad}; choose from all, {', '.join(ORACLES)}")
    return tuple(names)


def cmd_invariants(args) -> tuple[dict, str]:
    b = _load_curve(args.curve)
    cs = characteristic_sequence(b)
    report = full_report(b, oracles=args.oracles)
    obj = {"curve": b.to_json_obj(), "characteristic": cs.to_json_obj(), "invariants": report.to_json_obj()}
    lines = [
        f"curve           {b}",
        f"characteristic  beta = {list(cs.beta)}, e = {list(cs.e)}",
        f"ord_pw          {report.ord_pw}   ({', '.join(f'{k}={v}' for k, v in report.oracle_values.items())})",
        f"milnor mu       {report.mu}",
        f"Q               {report.Q}",
        f"kappa           {report.kappa}",
        f"bs              {report.bs}",
    ]
    return obj, "\n".join(lines)


def cmd_semigroup(args) -> tuple[dict, str]:
    b = _load_curve(args.curve)
    semigroup = value_semigroup(b)
    mu = full_report(b).mu
    if semigroup.conductor != mu:
        raise CheckFailed("conductor == mu", f"conductor {semigroup.conductor} != mu {mu}")
    obj = {"curve": b.to_json_obj(), "semigroup": semigroup.to_json_obj(), "mu": mu}
    text = "\n".join([
        f"generators  {semigroup}",
        f"conductor   {semigroup.conductor}  (= mu)",
        f"gaps        {list(semigroup.gaps)}",
    ])
    return obj, text


def cmd_member(args) -> tuple[dict, str]:
    b = _load_curve(args.curve)
    num, den = parse_polynomial(args.num), parse_polynomial(args.den)
    result = classify(num, den, b, truncation=args.trunc_override)
    obj = {"curve": b.to_json_obj(), "num": num.format(), "den": den.format(), **result.to_json_obj()}
    text = "\n".join([
        f"psi             ({num.format()}) / ({den.format()})",
        f"classification  {result.classification.value}",
        f"ord num         {result.ord_num}",
        f"ord den         {result.ord_den}",
        f"ord quotient    {result.ord_quotient}",
    ])
    return obj, text


def cmd_weierstrass(args) -> tuple[dict, str]:
    b = _load_curve(args.curve)
    P = build_weierstrass(b)
    obj = {"curve": b.to_json_obj(), "P": P.format(), "weierstrass": P.to_json_obj()}
    return obj, P.format()


def cmd_verify(args) -> tuple[dict, str]:
    if args.corpus:
        docs = corpus_documents()
    else:
        docs = [_read_curve_doc(args.curve)]
    runs = []
    for doc in docs:
        b = from_json_obj(doc)
        runs.append(verify_branch(b, doc.get("expected"), seed=args.seed))
    obj = {"passed": all(r.passed for r in runs), "seed": args.seed, "curves": [r.to_json_obj() for r in runs]}
    lines = []
    for run in runs:
        status = "PASS" if run.passed else f"FAIL ({run.first_failure.law})"
        lines.append(f"{status:<6} {run.name}")
        for r in run.results:
            if not r.passed:
                lines.append(f"       {r.law}: {r.detail}")
    failed = [r for r in runs if not r.passed]
    lines.append(f"{len(runs) - len(failed)}/{len(runs)} curves pass")
    if failed:
        first = failed[0].first_failure
        obj["error"] = first.law
        lines.append(f"first failing law: {first.law} ({failed[0].name})")
        return obj, "\n".join(lines), EXIT_CHECK
    return obj, "\n".join(lines)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="planebranch",
        description="Singularity invariants and Briancon-Skoda numbers of plane curve branches.",
    )
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", help="emit a JSON report")

    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("invariants", parents=[common], help="characteristic sequence and invariants")
    p.add_argument("curve", nargs="?", help="curve JSON file ('-' or omitted: stdin)")
    p.add_argument("--oracles", type=_parse_oracles, default=ORACLES,
                   help="comma list of closed,kstar,product,weierstrass or 'all' (default)")
    p.set_defaults(func=cmd_invariants)

    p = sub.add_parser("semigroup", parents=[common], help="value semigroup, gaps, conductor")
    p.add_argument("curve", nargs="?")
    p.set_defaults(func=cmd_semigroup)

    p = sub.add_parser("member", parents=[common], help="classify psi = num/den on the curve")
    p.add_argument("curve", help="curve JSON file or '-'")
    p.add_argument("num", help="numerator polynomial in z, w")
    p.add_argument("den", help="denominator polynomial in z, w")
    p.add_argument("--trunc-override", type=int, default=None,
                   help="initial truncation of the pulled-back quotient")
    p.set_defaults(func=cmd_member)

    p = sub.add_parser("weierstrass", parents=[common], help="print the Weierstrass polynomial P(z, w)")
    p.add_argument("curve", nargs="?")
    p.set_defaults(func=cmd_weierstrass)

    p = sub.add_parser("verify", parents=[common], help="run the cross-check suite")
    p.add_argument("curve", nargs="?")
    p.add_argument("--corpus", action="store_true", help="verify the built-in corpus")
    p.add_argument("--seed", type=int, default=DEFAULT_SEED, help="sampling seed for the inclusion law")
    p.set_defaults(func=cmd_verify)
    return parser


def _emit_error(args, obj: dict, code: int) -> int:
    if getattr(args, "json", False):
        sys.stdout.write(dump_json(obj))
    else:
        sys.stderr.write(f"error: {obj.get('error')}: {obj.get('message')}\n")
    return code


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        obj, text, *code = args.func(args)
    except ValidationError as exc:
        return _emit_error(args, exc.to_dict(), EXIT_INPUT)
    except ParseError as exc:
        return _emit_error(args, {"error": "ParseError", "message": str(exc)}, EXIT_INPUT)
    except ZeroDivisionError as exc:
        return _emit_error(args, {"error": "ZeroDivision", "message": str(exc)}, EXIT_INPUT)
    except CheckFailed as exc:
        return _emit_error(args, {"error": exc.law, "message": str(exc)}, EXIT_CHECK)
    except OracleDisagreement as exc:
        return _emit_error(args, {"error": exc.law, "message": str(exc),
                                  "values": {k: str(v) for k, v in exc.values.items()}}, EXIT_CHECK)
    except (HistogramMismatch, KStarUndefined, WitnessUnexpectedlyStrong, BoundTooSmall, PrecisionError) as exc:
        return _emit_error(args, {"error": type(exc).__name__, "message": str(exc)}, EXIT_CHECK)
    if args.json:
        sys.stdout.write(dump_json(obj))
    else:
        print(text)
    return code[0] if code else EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
