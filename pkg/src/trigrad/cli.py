"""Command-line surface: polynomial calculator, database browser, solvers,
and the end-to-end verifier.

Exit codes: 0 success, 1 stage mismatch, 2 ambiguity, 64 usage error,
65 bad input data.
"""

from __future__ import annotations

import argparse
import json
import sys
from typing import Optional

from .db import db_load, format_record
from .errors import StageMismatch, TrigradError
from .families import FamilyPoincare, format_family, format_poly, parse_poly
from .grading import fmt_monomial
from .les import BUILTIN_SPECS, enumerate_candidates, psi_filter, solve_corner
from .poly import Poincare, format_signed
from .ss import (
    CancellationWitness,
    DifferentialFamily,
    collapse_feasible,
    differential_vanishes,
)
from .strings import StringModule
from .pipeline import verify_paper

EX_USAGE = 64
EX_DATA = 65


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        sys.exit(EX_USAGE)


def _read_poly(inline: Optional[str], path: Optional[str]) -> FamilyPoincare:
    if inline is not None and path is not None:
        raise TrigradError("give the polynomial inline or as a file, not both")
    if path is not None:
        with open(path, "r", encoding="utf-8") as fh:
            inline = fh.read()
    if inline is None:
        raise TrigradError("no polynomial given")
    return parse_poly(inline)


def _emit(args, payload: dict, text: str):
    if getattr(args, "json", False):
        print(json.dumps(payload, indent=2, sort_keys=True))
    else:
        print(text)


def cmd_calc(args) -> int:
    fam = _read_poly(args.poly, args.file)
    if args.mul:
        fam = fam * parse_poly(args.mul)
    if args.add:
        fam = fam + parse_poly(args.add)
    if args.psi:
        fam = fam.psi_dual()
    if args.at is not None:
        out = format_poly(fam.evaluate(args.at))
    else:
        out = format_family(fam)
    _emit(args, {"result": out}, out)
    return 0


def cmd_euler(args) -> int:
    if args.name:
        rec = db_load(args.db).get(args.name)
        value = rec.value
        if not isinstance(value, FamilyPoincare):
            out = format_signed(value)
            _emit(args, {"result": out}, out)
            return 0
        p = rec.poincare(args.at)
    else:
        fam = _read_poly(args.poly, args.file)
        p = fam.evaluate(args.at) if args.at is not None else fam.plain_part
    out = format_signed(p.euler_specialize())
    _emit(args, {"result": out}, out)
    return 0


def cmd_sl(args) -> int:
    fam = _read_poly(args.poly, args.file)
    p = fam.evaluate(args.n) if fam.has_brackets else fam.plain_part
    out = format_poly(p.sl_specialize(args.n))
    _emit(args, {"result": out}, out)
    return 0


def cmd_db(args) -> int:
    db = db_load(args.db, override=args.override)
    if args.name:
        rec = db.get(args.name)
        if args.json:
            payload = {
                "name": rec.name,
                "kind": rec.kind,
                "provenance": rec.provenance,
                "value": format_poly(rec.value)
                if isinstance(rec.value, FamilyPoincare)
                else format_signed(rec.value),
            }
            print(json.dumps(payload, indent=2, sort_keys=True))
        else:
            print(format_record(rec), end="")
    else:
        _emit(args, {"names": db.names()}, "\n".join(db.names()))
    return 0


def cmd_les_solve(args) -> int:
    spec = BUILTIN_SPECS[args.spec]
    db = db_load(args.db)

    def load(source):
        if source in db.names():
            return db.get(source).string_module()
        return StringModule.from_family(_read_poly(None, source))

    mod_b, mod_c = load(args.middle), load(args.positive)
    sol = solve_corner(spec, mod_b, mod_c)
    if args.psi:
        sol, _ = psi_filter(sol)
    lines = ["guaranteed:", "  " + format_family(sol.guaranteed), "ambiguous pairs:"]
    groups = []
    for g in sol.groups:
        lines.append(
            f"  {fmt_monomial(g.source_lift)} / {fmt_monomial(g.target_lift)}"
            f"  (capacity {g.capacity})"
        )
        groups.append(
            {
                "source_lift": fmt_monomial(g.source_lift),
                "target_lift": fmt_monomial(g.target_lift),
                "capacity": g.capacity,
            }
        )
    _emit(
        args,
        {"guaranteed": format_family(sol.guaranteed), "pairs": groups},
        "\n".join(lines),
    )
    return 0


def cmd_ss_check(args) -> int:
    if args.family == "d(-1)":
        fam = DifferentialFamily.d_minus_one()
    else:
        if args.n is None:
            raise TrigradError("--N is required for the d(N) family")
        fam = DifferentialFamily.d_n(args.n)
    e1 = _read_poly(args.input, None)
    e1p = e1.evaluate(args.n) if e1.has_brackets else e1.plain_part
    if args.vanishes is not None:
        ok = differential_vanishes(e1p, fam, args.vanishes)
        _emit(args, {"vanishes": ok}, f"d_{args.vanishes} vanishes: {ok}")
        return 0
    target = _read_poly(args.target, None)
    witness = collapse_feasible(
        e1p, target.plain_part, fam, max_pages=args.max_pages
    )
    if witness is None:
        _emit(args, {"feasible": False}, "infeasible")
        return 1
    lines = ["feasible"]
    pages = {}
    for k, c in witness.pages:
        lines.append(f"  page {k}: cancel {format_poly(c)}")
        pages[str(k)] = format_poly(c)
    _emit(args, {"feasible": True, "pages": pages}, "\n".join(lines))
    return 0


def cmd_verify(args) -> int:
    db = db_load(args.db, override=args.override)
    try:
        report = verify_paper(args.knot, db=db, strict=args.strict)
    except StageMismatch as exc:
        print(str(exc), file=sys.stderr)
        return 1
    text = report.to_json() if args.json else report.to_text()
    if args.report:
        with open(args.report, "w", encoding="utf-8") as fh:
            fh.write(text + "\n")
    print(text)
    if report.status == "fail":
        return 1
    if report.status == "ambiguous":
        return 2
    return 0


def build_parser() -> argparse.ArgumentParser:
    top = _Parser(prog="trigrad", description=__doc__)
    sub = top.add_subparsers(dest="command", required=True)

    def add_common(p):
        p.add_argument("--json", action="store_true", help="machine-readable output")

    p = sub.add_parser("calc", help="evaluate polynomial expressions")
    p.add_argument("poly", nargs="?", help="inline polynomial")
    p.add_argument("--file", help="read the polynomial from a file")
    p.add_argument("--psi", action="store_true", help="apply the degree involution")
    p.add_argument("--mul", help="multiply by this polynomial")
    p.add_argument("--add", help="add this polynomial")
    p.add_argument("--at", type=int, help="evaluate brackets at this N")
    add_common(p)
    p.set_defaults(func=cmd_calc)

    p = sub.add_parser("euler", help="Euler specialization t -> -1")
    p.add_argument("poly", nargs="?")
    p.add_argument("--file")
    p.add_argument("--name", help="database record instead of a polynomial")
    p.add_argument("--db", help="extra record file")
    p.add_argument("--at", type=int, help="evaluate brackets at this N first")
    add_common(p)
    p.set_defaults(func=cmd_euler)

    p = sub.add_parser("sl", help="sl(N) specialization of the gradings")
    p.add_argument("poly", nargs="?")
    p.add_argument("--file")
    p.add_argument("--n", "--N", dest="n", type=int, required=True)
    add_common(p)
    p.set_defaults(func=cmd_sl)

    p = sub.add_parser("db", help="inspect the homology database")
    p.add_argument("name", nargs="?")
    p.add_argument("--db", help="extra record file")
    p.add_argument("--override", action="store_true",
                   help="allow shadowing embedded records")
    add_common(p)
    p.set_defaults(func=cmd_db)

    p = sub.add_parser("les-solve", help="corner-solve a long exact sequence")
    p.add_argument("spec", choices=sorted(BUILTIN_SPECS))
    p.add_argument("middle", help="record name or file: known middle node")
    p.add_argument("positive", help="record name or file: known third node")
    p.add_argument("--db")
    p.add_argument("--psi", action="store_true", help="apply the symmetry filter")
    add_common(p)
    p.set_defaults(func=cmd_les_solve)

    p = sub.add_parser("ss-check", help="spectral sequence feasibility")
    p.add_argument("--family", choices=["d(N)", "d(-1)"], default="d(N)")
    p.add_argument("--N", dest="n", type=int)
    p.add_argument("--max-pages", type=int)
    p.add_argument("--input", required=True, help="first-page polynomial")
    p.add_argument("--target", help="target polynomial")
    p.add_argument("--vanishes", type=int, metavar="K",
                   help="only test whether the page-K differential vanishes")
    add_common(p)
    p.set_defaults(func=cmd_ss_check)

    p = sub.add_parser("verify-paper", help="replay the full computation")
    p.add_argument("--knot", choices=["kt", "conway", "both"], default="both")
    p.add_argument("--db", help="extra record file")
    p.add_argument("--override", action="store_true")
    p.add_argument("--report", help="also write the report to this file")
    p.add_argument("--strict", action="store_true",
                   help="raise on the first mismatching stage")
    add_common(p)
    p.set_defaults(func=cmd_verify)

    return top


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except TrigradError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EX_DATA
    except FileNotFoundError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EX_DATA
    except KeyError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EX_DATA


if __name__ == "__main__":
    sys.exit(main())
