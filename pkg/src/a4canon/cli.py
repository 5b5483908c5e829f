"""Command-line interface.

Exit codes: 0 success, 1 verification or positivity failure, 2 usage
error, 3 resource guard (height cap).
"""

from __future__ import annotations

import argparse
import json
import sys
from typing import Sequence

from . import checker, quadform
from .cases import CaseFileError, DIAGRAM_SYMMETRY, coverage_stats, instantiate, load_bundled, load_cases, locate
from .engine.pbw import PINNED, height_cap, lattice_verdict
from .engine.words import DividedWord, HeightCapExceeded
from .laurent import ONE, check_identity_i, check_identity_ii

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_GUARD = 0, 1, 2, 3


class UsageError(Exception):
    pass


def parse_point(text: str) -> tuple[int, ...]:
    try:
        A = tuple(int(x) for x in text.split(","))
    except ValueError:
        raise UsageError(f"point must be 10 comma-separated integers: {text!r}") from None
    if len(A) != 10 or any(a < 0 for a in A):
        raise UsageError(f"point must be 10 nonnegative integers: {text!r}")
    return A


def _emit(args, record: dict, text: str) -> None:
    if args.format == "json":
        print(json.dumps(record, sort_keys=True))
    else:
        print(text)


def _table(args):
    if args.cases:
        try:
            return load_cases(args.cases)
        except OSError as exc:
            raise UsageError(f"cannot read case file: {exc}") from None
    return load_bundled()


def cmd_identities(args) -> int:
    failures = []
    count = 0
    for m in range(args.m_max + 1):
        for k in range(m + 1):
            for d in range(args.delta_max + 1):
                if args.kind == "i":
                    count += 1
                    if not check_identity_i(m, k, d):
                        failures.append({"m": m, "k": k, "delta": d})
                else:
                    for n in range(args.n_max + 1):
                        count += 1
                        if not check_identity_ii(m, k, n, d):
                            failures.append({"m": m, "k": k, "n": n, "delta": d})
    for f in failures:
        _emit(args, {"identity": args.kind, "failure": f}, f"FAIL identity ({args.kind}) at {f}")
    ok = not failures
    _emit(
        args,
        {"identity": args.kind, "checked": count, "failures": len(failures), "ok": ok},
        f"identity ({args.kind}): {count} instances, {len(failures)} failures",
    )
    return EXIT_OK if ok else EXIT_FAIL


def cmd_verify(args) -> int:
    t = _table(args)
    if args.point is not None:
        if not args.case:
            raise UsageError("--point requires --case")
        c = _get_case(t, args.case)
        r = checker.verify_case_at(c, parse_point(args.point), engine=args.engine)
        _emit(args, r.as_dict(), r.text())
        return EXIT_OK if r.status != "fail" else EXIT_FAIL
    if args.all:
        specs = list(t)
    elif args.case:
        specs = [_get_case(t, args.case)]
    else:
        raise UsageError("give --case ID or --all")
    jobs = args.jobs if args.jobs is not None else checker.default_jobs()
    summary = checker.verify_all(
        specs,
        samples=args.samples,
        max_entry=args.max_entry,
        max_height=args.max_height,
        symmetry=DIAGRAM_SYMMETRY if args.symmetry else None,
        engine=args.engine,
        jobs=jobs,
    )
    if args.format == "json":
        for r in summary.reports:
            print(json.dumps(r.as_dict(), sort_keys=True))
        print(json.dumps({"summary": summary.as_dict()["totals"]}, sort_keys=True))
    else:
        print(summary.text())
    return EXIT_FAIL if summary.failures else EXIT_OK


def _get_case(t, case_id):
    try:
        return t.get(case_id)
    except KeyError:
        raise UsageError(f"unknown case id {case_id!r}") from None


def cmd_locate(args) -> int:
    t = _table(args)
    A = parse_point(args.point)
    ids = locate(t, A)
    _emit(args, {"point": list(A), "cases": ids}, "\n".join(ids) if ids else "(no region)")
    return EXIT_OK


def cmd_expand(args) -> int:
    if args.word is not None:
        try:
            dw = DividedWord.parse(args.word)
        except ValueError as exc:
            raise UsageError(str(exc)) from None
        pv = checker.expand_terms([(ONE, dw)], PINNED, args.engine)
        _emit(args, {"word": str(dw), "expansion": _pv_dict(pv)}, str(pv))
        return EXIT_OK
    if not (args.case and args.point):
        raise UsageError("give --word, or --case together with --point")
    c = _get_case(_table(args), args.case)
    A = parse_point(args.point)
    try:
        terms = instantiate(c, A)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    pv = checker.expand_terms(terms, PINNED, args.engine)
    verdict = lattice_verdict(pv, A)
    _emit(
        args,
        {"case": c.id, "point": list(A), "expansion": _pv_dict(pv), "congruence": verdict.as_dict()},
        f"{pv}\ncongruent to E^A: {verdict.congruent_to_target}",
    )
    return EXIT_OK


def _pv_dict(pv) -> list[dict]:
    return [{"index": list(B), "coefficient": str(c)} for B, c in pv.items()]


def cmd_quadform(args) -> int:
    forms = quadform.builtin_forms()
    if args.builtin:
        if args.builtin not in forms:
            raise UsageError(f"unknown builtin {args.builtin!r}; choose from {', '.join(forms)}")
        q = forms[args.builtin]
        name = args.builtin
    elif args.file:
        try:
            q = quadform.load_form(args.file)
        except (OSError, quadform.FormFileError) as exc:
            raise UsageError(str(exc)) from None
        name = args.file
    else:
        raise UsageError("give --builtin NAME or --file PATH")
    if isinstance(q, quadform.ParametricLinearForm):
        if not args.case:
            lines = [f"{lab}: {f}" for lab, f in q.coefficients]
            _emit(args, {"form": name, "coefficients": {lab: str(f) for lab, f in q.coefficients}}, "\n".join(lines))
            return EXIT_OK
        c = _get_case(_table(args), args.case)
        rep = quadform.region_implies_L_nonneg(q, c.region, args.max_entry)
        text = f"{name} on region {c.id} (entries <= {args.max_entry}): {'nonnegative' if rep.holds else 'NEGATIVE'}"
        for A, lab, v in rep.counterexamples:
            text += f"\n  A=({','.join(map(str, A))}) {lab} coefficient {v}"
        _emit(args, {"form": name, "case": c.id, **rep.as_dict()}, text)
        return EXIT_OK if rep.holds else EXIT_FAIL
    jobs = args.jobs if args.jobs is not None else checker.default_jobs()
    v = quadform.weakly_positive(q, args.bound, jobs)
    if v.weakly_positive:
        text = f"{name}: weakly positive (no nonzero x in [0,{args.bound}]^{q.n} with q(x) <= 0)"
    else:
        text = f"{name}: not weakly positive; witness ({','.join(map(str, v.witness))}) value {v.witness_value}"
    text += f"\n{name}: {'nonnegative' if v.nonnegative else 'takes negative values'} within the bound"
    _emit(args, {"form": name, **v.as_dict()}, text)
    return EXIT_OK if v.weakly_positive else EXIT_FAIL


def cmd_coverage(args) -> int:
    rep = coverage_stats(_table(args), args.max_entry)
    text = (
        f"points {rep.points} (a4=0, entries <= {rep.max_entry})\n"
        f"uncovered {rep.uncovered}\ncovered once {rep.covered_once}\n"
        f"covered more than once {rep.covered_multiple}\n"
        f"interior overlaps {len(rep.interior_overlaps)}"
    )
    for a, b, p in rep.interior_overlaps:
        text += f"\n  {a} / {b} at ({','.join(map(str, p))})"
    _emit(args, rep.as_dict(), text)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("text", "json"), default="text")
    common.add_argument("--cases", help="case file (default: bundled table)")
    common.add_argument("--jobs", type=int, default=None, help="worker processes (default: available CPUs)")
    p = argparse.ArgumentParser(prog="a4canon", description="Canonical-basis elements of U+ in type A4")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("identities", parents=[common], help="check the Gaussian binomial identities on a grid")
    s.add_argument("--kind", choices=("i", "ii"), required=True)
    s.add_argument("--m-max", type=int, default=8)
    s.add_argument("--n-max", type=int, default=4)
    s.add_argument("--delta-max", type=int, default=5)
    s.set_defaults(func=cmd_identities)

    s = sub.add_parser("verify", parents=[common], help="verify case-table entries")
    s.add_argument("--case")
    s.add_argument("--all", action="store_true")
    s.add_argument("--point")
    s.add_argument("--samples", type=int, default=checker.DEFAULT_SAMPLES)
    s.add_argument("--max-entry", type=int, default=checker.DEFAULT_MAX_ENTRY)
    s.add_argument("--max-height", type=int, default=checker.DEFAULT_MAX_HEIGHT)
    s.add_argument("--symmetry", action="store_true", help="also verify the diagram-symmetry images")
    s.add_argument("--engine", choices=("straighten", "words"), default="straighten")
    s.set_defaults(func=cmd_verify)

    s = sub.add_parser("locate", parents=[common], help="list cases whose region contains a point")
    s.add_argument("--point", required=True)
    s.set_defaults(func=cmd_locate)

    s = sub.add_parser("expand", parents=[common], help="PBW expansion of a divided word or an instantiated case")
    s.add_argument("--word")
    s.add_argument("--case")
    s.add_argument("--point")
    s.add_argument("--engine", choices=("straighten", "words"), default="straighten")
    s.set_defaults(func=cmd_expand)

    s = sub.add_parser("quadform", parents=[common], help="weak positivity of a form, or L-form sign on a region")
    s.add_argument("--builtin")
    s.add_argument("--file")
    s.add_argument("--bound", type=int, default=6)
    s.add_argument("--case", help="for L-forms: region to check coefficients on")
    s.add_argument("--max-entry", type=int, default=2)
    s.set_defaults(func=cmd_quadform)

    s = sub.add_parser("coverage", parents=[common], help="region coverage statistics with a4 = 0")
    s.add_argument("--max-entry", type=int, default=2)
    s.set_defaults(func=cmd_coverage)
    return p


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.func(args)
    except (UsageError, CaseFileError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except HeightCapExceeded as exc:
        print(f"error: {exc} (set A4CANON_HEIGHT_CAP to raise the cap, currently {height_cap()})", file=sys.stderr)
        return EXIT_GUARD


if __name__ == "__main__":
    sys.exit(main())
