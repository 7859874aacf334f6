"""Command-line front end.

Exit status: 0 on success or a verified claim, 1 when a verification fails,
2 on usage or input errors.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys

from .core import DimensionError, Semigroup, nabla
from .families import (
    MCNUGGET,
    SECTION4,
    SECTION5,
    FixedBound,
    ShiftedFamily,
    detect_eventual_period,
    sweep,
    sweep_to_csv,
    sweep_to_json,
)
from .presentation import NotInKernelError, analyze, default_bound, presentation_defects
from .verifiers import (
    VerificationReport,
    verify_lemma_4_3,
    verify_lemma_4_4,
    verify_lemma_4_5,
    verify_lemma_5_1,
    verify_theorem_2_4,
    verify_theorem_3_2,
    verify_theorem_3_3,
    verify_theorem_4_2,
    verify_theorem_5_2,
)

SEMIGROUPS = {
    "mcnugget": Semigroup.numerical(6, 9, 20),
    "raising-canes": Semigroup(((3, 2), (4, 3), (6, 3))),
}
FAMILIES = {"mcnugget": MCNUGGET, "section4": SECTION4, "section5": SECTION5}
CLAIMS = (
    "lemma-4.3",
    "lemma-4.4",
    "lemma-4.5",
    "theorem-4.2",
    "lemma-5.1",
    "theorem-5.2",
    "theorem-3.2",
    "theorem-3.3",
    "theorem-2.4",
)


class UsageError(Exception):
    pass


def _load(text: str):
    """Inline JSON, or a path to a JSON file."""
    text = text.strip()
    try:
        return json.loads(text)
    except json.JSONDecodeError:
        if text[:1] in "{[":
            raise
    if os.path.exists(text):
        with open(text) as fh:
            return json.load(fh)
    raise UsageError(f"not JSON and not a readable file: {text!r}")


def _semigroup(args) -> Semigroup:
    if args.semigroup is None:
        raise UsageError("--semigroup is required")
    if args.semigroup in SEMIGROUPS:
        return SEMIGROUPS[args.semigroup]
    return Semigroup.from_json(_load(args.semigroup))


def _family(value: str | None, default: ShiftedFamily | None = None) -> ShiftedFamily:
    if value is None:
        if default is None:
            raise UsageError("--family is required")
        return default
    if value in FAMILIES:
        return FAMILIES[value]
    return ShiftedFamily.from_json(_load(value))


def _range(text: str) -> range:
    try:
        lo, hi = text.split("..")
        lo, hi = int(lo), int(hi)
    except ValueError:
        raise UsageError(f"--range must look like A..B, got {text!r}") from None
    if hi < lo:
        raise UsageError(f"empty range {text!r}")
    return range(lo, hi + 1)


def _emit(args, text: str) -> None:
    if not text.endswith("\n"):
        text += "\n"
    sys.stdout.write(text)
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text)


def _dump(obj) -> str:
    return json.dumps(obj)


def cmd_factorize(args) -> int:
    S = _semigroup(args)
    if args.element is None:
        raise UsageError("--element is required")
    v = _load(args.element)
    if not isinstance(v, list):
        v = [v]
    part = nabla(S, v)
    _emit(args, _dump({
        "element": list(part.element),
        "fiber": [list(z) for z in part.fiber],
        "components": part.to_json(),
        "component_count": part.component_count,
        "is_betti": part.component_count >= 2,
    }))
    return 0


def cmd_betti(args) -> int:
    report, _ = analyze(_semigroup(args), args.bound)
    if args.format == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["element", "components"])
        for v, c in report.elements:
            w.writerow([" ".join(map(str, v)), c])
        _emit(args, buf.getvalue())
    else:
        _emit(args, _dump(report.to_json()))
    return 0


def cmd_minpres(args) -> int:
    _, pres = analyze(_semigroup(args), args.bound)
    if args.format == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["left", "right"])
        for a, b in pres.relations:
            w.writerow([" ".join(map(str, a)), " ".join(map(str, b))])
        _emit(args, buf.getvalue())
    else:
        _emit(args, _dump(pres.to_json()))
    return 0


def cmd_verify_presentation(args) -> int:
    S = _semigroup(args)
    if args.presentation is None:
        raise UsageError("--presentation is required")
    data = _load(args.presentation)
    if isinstance(data, dict):
        data = data["relations"]
    rels = [(r["left"], r["right"]) if isinstance(r, dict) else tuple(r) for r in data]
    bound = args.bound if args.bound is not None else default_bound(S)
    defects = presentation_defects(S, rels, bound)
    _emit(args, _dump({
        "verified": not defects,
        "bound": bound,
        "unconnected_fibers": [list(v) for v in defects],
    }))
    return 0 if not defects else 1


def cmd_sweep(args) -> int:
    F = _family(args.family)
    if args.range is None:
        raise UsageError("--range is required")
    policy = FixedBound(args.bound) if args.bound is not None else None
    records = sweep(F, _range(args.range), policy, workers=args.workers)
    if args.format == "csv":
        _emit(args, sweep_to_csv(records))
    else:
        sizes = [r.presentation_size for r in records]
        period = detect_eventual_period(sizes)
        _emit(args, _dump({
            "family": F.to_json(),
            "records": sweep_to_json(records),
            "eventual_period": None if period is None else {"preperiod": period[0], "period": period[1]},
        }))
    return 0


def _section4_k(args) -> int:
    if args.k is not None:
        return args.k
    if args.n is not None:
        if args.n % 6 != 1:
            raise UsageError(f"lemma-4.x and theorem-4.2 need n = 6k + 1, got n = {args.n}")
        return (args.n - 1) // 6
    return 5


def _pair(F: ShiftedFamily):
    if F.dim != 2 or F.k != 3 or any(F.offsets[0]):
        raise UsageError("theorems 3.2/3.3 need a family with offsets [[0,0], r1, r2]")
    return F.offsets[1], F.offsets[2]


def _combine(claim: str, reports: list[VerificationReport]) -> VerificationReport:
    hyp = all(r.hypothesis_met for r in reports)
    passed = all(r.passed for r in reports) if hyp else None
    return VerificationReport(
        claim,
        hyp,
        passed,
        {"cases": [r.to_json() for r in reports]},
        max((r.bound for r in reports if r.bound is not None), default=None),
    )


def cmd_verify(args) -> int:
    claim = args.claim
    if claim == "lemma-4.3":
        report = verify_lemma_4_3(_section4_k(args))
    elif claim == "lemma-4.4":
        report = verify_lemma_4_4(_section4_k(args))
    elif claim == "lemma-4.5":
        k = _section4_k(args)
        if args.i is not None:
            report = verify_lemma_4_5(k, args.i)
        else:
            report = _combine(claim, [verify_lemma_4_5(k, i) for i in range(k + 1)])
    elif claim == "theorem-4.2":
        report = verify_theorem_4_2(_section4_k(args), bound=args.bound)
    elif claim == "lemma-5.1":
        report = verify_lemma_5_1(args.n if args.n is not None else 4)
    elif claim == "theorem-5.2":
        report = verify_theorem_5_2(args.n if args.n is not None else 4, args.bound)
    elif claim == "theorem-3.2":
        F = _family(args.family, ShiftedFamily(((0, 0), (1, 3), (2, 1))))
        report = verify_theorem_3_2(*_pair(F), args.n if args.n is not None else 3)
    elif claim == "theorem-3.3":
        F = _family(args.family, ShiftedFamily(((0, 0), (3, 2), (5, 3))))
        report = verify_theorem_3_3(*_pair(F), args.n if args.n is not None else 3)
    else:
        F = _family(args.family, ShiftedFamily.numerical(0, 1, 3))
        if F.dim != 1:
            raise UsageError("theorem-2.4 needs a numerical family")
        offsets = [r[0] for r in F.offsets]
        n = args.n if args.n is not None else (offsets[-1] - offsets[0]) ** 2 + 1
        report = verify_theorem_2_4(offsets, n)
    _emit(args, _dump(report.to_json()))
    return 1 if report.passed is False else 0


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--semigroup", help="JSON, JSON file, or a registered name")
    common.add_argument("--family", help="JSON, JSON file, or a registered name")
    common.add_argument("--element", help="JSON list of coordinates (or a bare integer)")
    common.add_argument("--presentation", help="JSON list of {left, right} relations")
    common.add_argument("--n", type=int)
    common.add_argument("--k", type=int)
    common.add_argument("--i", type=int)
    common.add_argument("--range", help="inclusive range of n, A..B")
    common.add_argument("--bound", type=_positive, help="grading bound for searches")
    common.add_argument("--format", choices=("json", "csv"), default="json")
    common.add_argument("--out", help="also write the report to this path")
    common.add_argument("--workers", type=int, default=1)

    parser = argparse.ArgumentParser(prog="shiftpres", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)
    sub.add_parser("factorize", parents=[common]).set_defaults(func=cmd_factorize)
    sub.add_parser("betti", parents=[common]).set_defaults(func=cmd_betti)
    sub.add_parser("minpres", parents=[common]).set_defaults(func=cmd_minpres)
    sub.add_parser("verify-presentation", parents=[common]).set_defaults(func=cmd_verify_presentation)
    sub.add_parser("sweep", parents=[common]).set_defaults(func=cmd_sweep)
    p = sub.add_parser("verify", parents=[common])
    p.add_argument("claim", choices=CLAIMS)
    p.set_defaults(func=cmd_verify)
    return parser


def _positive(text: str) -> int:
    value = int(text)
    if value <= 0:
        raise argparse.ArgumentTypeError("bound must be a positive integer")
    return value


def run(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (UsageError, DimensionError, NotInKernelError, ValueError, KeyError,
            OverflowError, json.JSONDecodeError) as exc:
        print(f"shiftpres: error: {exc}", file=sys.stderr)
        return 2


def main() -> None:
    sys.exit(run())
