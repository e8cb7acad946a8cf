"""Command-line interface.

stdout carries machine-readable records only (JSON lines or CSV); messages go
to stderr.  Exit codes: 0 ok, 1 verification failure, 2 domain error,
3 budget exhausted, 4 cache corruption.
"""

from __future__ import annotations

import argparse
import csv
import json
import logging
import os
import sys
from fractions import Fraction

from .errors import CacheCorruptError, DomainError, ResourceLimitError
from .forms import class_number
from .intarith import frakD_failure, is_in_frakD, is_prime
from .multiplicity import CongruenceGroup, Family, M_breakdown, M_table, index
from .pell import as_fraction, log_epsilon, nth_solution
from .table import DiscriminantTable, build_table, default_path

log = logging.getLogger("selberg_arith")

EXIT_OK, EXIT_VERIFY, EXIT_DOMAIN, EXIT_BUDGET, EXIT_CACHE = 0, 1, 2, 3, 4
_INT64 = 1 << 63


def _cell(v):
    if isinstance(v, bool) or v is None:
        return v
    if isinstance(v, int):
        return v if -_INT64 < v < _INT64 else str(v)
    if isinstance(v, Fraction):
        return str(v)
    if isinstance(v, float):
        return float(f"{v:.15g}")
    if isinstance(v, (list, tuple)):
        return [_cell(x) for x in v]
    if isinstance(v, dict):
        return {str(k): _cell(x) for k, x in v.items()}
    return str(v)


class Emitter:
    def __init__(self, fmt: str, out=None):
        self.fmt = fmt
        self.out = out or sys.stdout
        self.writer = None

    def emit(self, record: dict) -> None:
        rec = {k: _cell(v) for k, v in record.items()}
        if self.fmt == "json":
            self.out.write(json.dumps(rec, sort_keys=False) + "\n")
            return
        row = {k: json.dumps(v) if isinstance(v, (list, dict)) else v for k, v in rec.items()}
        if self.writer is None:
            self.writer = csv.DictWriter(self.out, fieldnames=list(row), lineterminator="\n")
            self.writer.writeheader()
        self.writer.writerow(row)


def _group(name: str, level: int | None) -> CongruenceGroup:
    if name.strip().lower() in ("sl2", "sl2z", "sl2(z)"):
        return CongruenceGroup.sl2()
    if level is None:
        raise DomainError("--level is required for congruence subgroups")
    return CongruenceGroup(Family.parse(name), level)


def _table_for(args) -> DiscriminantTable | None:
    if args.cache or os.environ.get("SELBERG_CACHE"):
        return DiscriminantTable.load(args.cache or default_path())
    return None


def _close(tab: DiscriminantTable | None) -> None:
    if tab is not None and tab.dirty:
        tab.save()


def _require_D(D: int) -> None:
    if not is_in_frakD(D):
        raise DomainError(f"D={D} is not a discriminant: {frakD_failure(D)}")


# ---------------------------------------------------------------- commands

def cmd_pell(args, em: Emitter) -> int:
    _require_D(args.D)
    js = [args.j] if args.j else range(1, args.count + 1)
    for j in js:
        s = nth_solution(args.D, j)
        em.emit({"D": args.D, "j": j, "t": s.t, "u": s.u, "log_eps": log_epsilon(s)})
    return EXIT_OK


def cmd_classnum(args, em: Emitter) -> int:
    if args.range:
        a, b = args.range
        Ds = [D for D in range(a, b + 1) if is_in_frakD(D)]
    elif args.D is not None:
        _require_D(args.D)
        Ds = [args.D]
    else:
        raise DomainError("give D or --range A B")
    tab = _table_for(args)
    hs = tab.class_numbers(Ds) if tab else {D: class_number(D) for D in Ds}
    for D in Ds:
        em.emit({"D": D, "h": hs[D]})
    _close(tab)
    return EXIT_OK


def cmd_mult(args, em: Emitter) -> int:
    g = _group(args.group, args.level)
    val, local = M_breakdown(g, args.t, args.u)
    factors = {(f"{k[0]}:{'+' if k[1] > 0 else '-'}" if isinstance(k, tuple) else str(k)): v
               for k, v in local.items()}
    em.emit({"group": g.name, "t": args.t, "u": args.u, "D": (args.t**2 - 4) // args.u**2,
             "M": val, "index": index(g), "local_factors": factors,
             "tabulated_M": M_table(g, args.t, args.u)})
    return EXIT_OK


def cmd_count(args, em: Emitter) -> int:
    from .zeta import pi, pi_hat
    g = _group(args.group, args.level)
    x = as_fraction(args.x)
    if x <= 4:
        raise DomainError("x must exceed 4")
    tab = _table_for(args)
    rec = {"group": g.name, "x": x, "pi_hat": pi_hat(g, x, tab), "pi": pi(g, x, tab)}
    if args.window is not None:
        y = as_fraction(args.window)
        if not 0 < y <= x:
            raise DomainError("window needs 0 < y <= x")
        sl2 = CongruenceGroup.sl2()
        rec["window"] = pi(g, x + y, tab) - rec["pi"]
        rec["window_hat"] = pi_hat(g, x + y, tab) - rec["pi_hat"]
        rec["window_hat_bound"] = index(g) * (pi_hat(sl2, x + y, tab) - pi_hat(sl2, x, tab))
    em.emit(rec)
    _close(tab)
    return EXIT_OK


def cmd_classsum(args, em: Emitter) -> int:
    from .zeta import DiscriminantFilter, class_sum, estimate_Cp
    p = args.p
    if p < 3 or not is_prime(p):
        raise DomainError(f"p={p} must be an odd prime")
    x = as_fraction(args.x)
    tab = _table_for(args)
    if args.set == "plain":
        flt, weights = DiscriminantFilter("p_divides_D", p), "plain"
    else:
        flt, weights = DiscriminantFilter(f"set{args.set}", p), "j_weighted"
    rec = {"p": p, "x": x, "set": args.set, "sum": class_sum(flt, x, weights, tab)}
    if args.estimate_c:
        e = estimate_Cp(p, x, tab)
        rec.update({"ratio": e.ratio, "bracket_low": e.bracket[0], "bracket_high": e.bracket[1],
                    "predicted": e.predicted, "predicted_float": float(e.predicted)})
    em.emit(rec)
    _close(tab)
    return EXIT_OK


def cmd_verify(args, em: Emitter) -> int:
    from .verify import BudgetExceeded, run_suite
    failed = False
    try:
        for res, counts in run_suite(args.suite, args.budget):
            em.emit({"suite": res.suite, "check": res.name, "cases": res.cases,
                     "failures": res.failures, "passed": res.passed, "counts": counts,
                     "examples": res.examples, "notes": res.notes})
            print(res.summary() + ("" if counts else " (informational)"), file=sys.stderr)
            failed |= counts and not res.passed
    except BudgetExceeded as exc:
        print(f"verify: {exc}", file=sys.stderr)
        return EXIT_BUDGET
    return EXIT_VERIFY if failed else EXIT_OK


def cmd_table(args, em: Emitter) -> int:
    path = args.cache or default_path()
    if args.build:
        if args.cutoff is None:
            raise DomainError("--build needs --cutoff")
        tab = build_table(args.cutoff, path)
    else:
        tab = DiscriminantTable.load(path)
    em.emit({"path": str(path), "records": len(tab), "cutoff": tab.cutoff,
             "sha256": tab.checksum(), "rebuilt_from_corrupt": tab.was_corrupt})
    return EXIT_CACHE if tab.was_corrupt else EXIT_OK


# ------------------------------------------------------------------ parser

def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="selberg-arith",
                                 description="Arithmetic data for Selberg zeta functions of congruence subgroups.")
    ap.add_argument("--format", choices=("json", "csv"), default="json")
    ap.add_argument("--cache", help="discriminant table path (default: $SELBERG_CACHE or the user data dir)")
    ap.add_argument("-v", "--verbose", action="store_true")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("pell", help="solutions of t^2 - D u^2 = 4")
    p.add_argument("D", type=int)
    p.add_argument("--j", type=int)
    p.add_argument("--count", type=int, default=1, help="emit j = 1..count")
    p.set_defaults(func=cmd_pell)

    p = sub.add_parser("classnum", help="narrow class numbers")
    p.add_argument("D", type=int, nargs="?")
    p.add_argument("--range", type=int, nargs=2, metavar=("A", "B"))
    p.set_defaults(func=cmd_classnum)

    p = sub.add_parser("mult", help="multiplicity factor M for a (t, u) class")
    p.add_argument("--group", required=True, help="sl2, γ0|gamma0, γ1|gamma1, γfull|gamma")
    p.add_argument("--level", type=int)
    p.add_argument("--t", type=int, required=True)
    p.add_argument("--u", type=int, required=True)
    p.set_defaults(func=cmd_mult)

    p = sub.add_parser("count", help="geodesic counting functions")
    p.add_argument("--group", required=True)
    p.add_argument("--level", type=int)
    p.add_argument("--x", required=True)
    p.add_argument("--window")
    p.set_defaults(func=cmd_count)

    p = sub.add_parser("classsum", help="class-number sums over p-divisible discriminants")
    p.add_argument("--p", type=int, required=True)
    p.add_argument("--x", required=True)
    p.add_argument("--set", choices=("plain", "1", "2"), default="plain")
    p.add_argument("--estimate-c", action="store_true")
    p.set_defaults(func=cmd_classsum)

    p = sub.add_parser("verify", help="run invariant sweeps")
    p.add_argument("--suite", choices=("pell", "forms", "mult", "zeta", "all"), default="all")
    p.add_argument("--budget", type=float, help="seconds")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("table", help="manage the discriminant table cache")
    grp = p.add_mutually_exclusive_group(required=True)
    grp.add_argument("--build", action="store_true")
    grp.add_argument("--info", action="store_true")
    p.add_argument("--cutoff", help="norm bound x: store every D with eps(D)^2 < x")
    p.set_defaults(func=cmd_table)
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        stream=sys.stderr, format="%(levelname)s %(message)s")
    em = Emitter(args.format)
    try:
        return args.func(args, em)
    except DomainError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DOMAIN
    except CacheCorruptError as exc:
        print(f"cache error: {exc}", file=sys.stderr)
        return EXIT_CACHE
    except ResourceLimitError as exc:
        print(f"resource limit: {exc}", file=sys.stderr)
        return EXIT_BUDGET


if __name__ == "__main__":
    sys.exit(main())
