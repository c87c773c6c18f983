"""Command-line entry point.

JSON is the stable output format; CSV follows RFC 4180 and text is meant
for people. Exit codes: 0 when every requested check passes, 1 when any
check fails or a computation does not converge, 2 on usage errors.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
import warnings
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .cayley import RecenterError
from .constants import table
from .heis import GroupPoint
from .integrate import QuadratureError, fs_quotient
from .integrate.measures import eta_volume
from .symcalc import ParseError, eval_expr, parse
from .symcalc.space import ps_P_power

FORMATS = ("json", "csv", "text")


class UsageError(ValueError):
    pass


@dataclass(frozen=True)
class CliConfig:
    command: str
    n: int = 1
    samples: int = 1 << 20
    seed: int = 42
    format: str = "json"
    expr: str | None = None
    tolerances: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.n < 1:
            raise UsageError("--n must be >= 1")
        if self.samples < 1:
            raise UsageError("--samples must be >= 1")
        if not -(1 << 63) <= self.seed < (1 << 64):
            raise UsageError("--seed must fit in 64 bits")
        if self.format not in FORMATS:
            raise UsageError(f"--format must be one of {', '.join(FORMATS)}")


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="qcfs", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def common(sp, numeric=False):
        sp.add_argument("--n", type=int, default=1)
        sp.add_argument("--format", choices=FORMATS, default="json")
        if numeric:
            sp.add_argument("--samples", type=int, default=1 << 20)
            sp.add_argument("--seed", type=int, default=42)

    c = sub.add_parser("constants", help="print the table of closed-form constants")
    common(c)
    c.add_argument("--adjudicated", choices=("A", "B"), default=None,
                   help="fill the adjudication flag of the table")

    v = sub.add_parser("verify", help="run exact or numeric checks")
    vsub = v.add_subparsers(dest="mode", required=True, parser_class=_Parser)
    ve = vsub.add_parser("exact")
    common(ve)
    ve.add_argument("--check", default="all")
    ve.add_argument("--timing", action="store_true", help="add the elapsed field (not reproducible)")
    vn = vsub.add_parser("numeric")
    common(vn, numeric=True)
    vn.add_argument("--check", default="all")
    vn.add_argument("--timing", action="store_true", help="add the elapsed field (not reproducible)")

    q = sub.add_parser("quotient", help="Folland-Stein quotient of a function on the group")
    common(q, numeric=True)
    g = q.add_mutually_exclusive_group(required=True)
    g.add_argument("--extremal", action="store_true")
    g.add_argument("--expr")
    q.add_argument("--measure", choices=("lebesgue", "theta"), default="lebesgue")
    q.add_argument("--rtol", type=float, default=1e-10)

    r = sub.add_parser("recenter", help="find psi_{r,P} moving a density's centre of mass to 0")
    common(r, numeric=True)
    r.add_argument("--density", required=True,
                   help="uniform | bump[:KAPPA] | extremal[:c1,...,c(4n+3)] (translated extremal)")
    r.add_argument("--tol", type=float, default=1e-6)
    return p


# ---- output ----------------------------------------------------------------

def _csv(rows: list, columns: list) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\r\n")
    w.writerow(columns)
    for row in rows:
        w.writerow(["" if row.get(c) is None else _cell(row.get(c)) for c in columns])
    return buf.getvalue()


def _cell(v):
    if isinstance(v, float):
        return repr(v)
    if isinstance(v, (list, tuple)):
        return " ".join(_cell(x) for x in v)
    return v


def _text(rows: list) -> str:
    lines = []
    for row in rows:
        lines.append("  ".join(f"{k}={_cell(v) if v is not None else '-'}" for k, v in row.items()))
    return "\n".join(lines) + "\n"


def render(rows, fmt: str, columns: list | None = None) -> str:
    if fmt == "json":
        return json.dumps(rows, indent=2) + "\n"
    rows_list = rows if isinstance(rows, list) else [rows]
    if fmt == "csv":
        return _csv(rows_list, columns or list(rows_list[0].keys()))
    return _text(rows_list)


# ---- commands --------------------------------------------------------------

def cmd_constants(args) -> tuple:
    t = table(args.n)
    if args.adjudicated:
        t = t.with_adjudication(args.adjudicated)
    d = t.to_dict()
    if args.format == "json":
        return render(d, "json"), 0
    exact = d.pop("exact")
    rows = [{"name": k, "value": v, "exact": exact.get(k)} for k, v in d.items()]
    if args.format == "csv":
        return render(rows, "csv", ["name", "value", "exact"]), 0
    return "".join(f"{r['name']:>14}  {_cell(r['value'])}" + (f"  [{r['exact']}]" if r["exact"] else "") + "\n"
                   for r in rows), 0


def _reports_out(reports, args) -> tuple:
    rows = [r.to_dict(timing=args.timing) for r in reports]
    code = 0 if all(r.passed for r in reports) else 1
    if args.format == "text":
        lines = []
        for r in reports:
            ctl = "".join(f" [control {name}: {'caught' if ok else 'NOT caught'}]" for name, ok in r.controls)
            lines.append(f"{r.status:>14}  {r.check_id} n={r.n} residual={r.residual!r} "
                         f"tolerance={r.tolerance!r}{ctl}" + (f"  {r.note}" if r.note else ""))
        return "\n".join(lines) + "\n", code
    columns = ["check-id", "n", "status", "lhs", "rhs", "residual", "tolerance", "samples", "seed"]
    if args.timing:
        columns.append("elapsed")
    return render(rows, args.format, columns), code


def cmd_verify(args) -> tuple:
    from .verify import EXACT_CHECKS, NUMERIC_CHECKS, run_exact, run_numeric

    if args.mode == "exact":
        if args.check != "all" and args.check not in EXACT_CHECKS:
            raise UsageError(f"unknown exact check {args.check!r}; choose from {', '.join(EXACT_CHECKS)}")
        reports = run_exact(args.n, args.check)
    else:
        if args.check != "all" and args.check not in NUMERIC_CHECKS:
            raise UsageError(f"unknown numeric check {args.check!r}; choose from {', '.join(NUMERIC_CHECKS)}")
        reports = run_numeric(args.n, args.samples, args.seed, args.check)
    return _reports_out(reports, args)


def cmd_quotient(args) -> tuple:
    if args.extremal:
        F = ps_P_power(args.n, -(args.n + 1))
        label = "extremal"
    else:
        try:
            F = eval_expr(parse(args.expr, args.n), args.n)
        except ParseError as err:
            raise UsageError(f"cannot parse --expr: {err}") from None
        label = args.expr
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always")
        rep = fs_quotient(F, args.measure, args.n, rtol=args.rtol, samples=args.samples, seed=args.seed)
    for w in caught:
        print(f"warning: {w.message}", file=sys.stderr)
    if not math.isfinite(rep.value):
        raise ArithmeticError("the quotient is not finite")
    row = {"function": label, "measure": args.measure, "n": args.n, **rep.to_dict()}
    return render(row, args.format), 0


def _density(text: str, n: int, seed: int):
    from .verify import bump_density, extremal_density, random_group_point, uniform_density

    name, _, arg = text.partition(":")
    name = name.strip()
    if name == "uniform" and not arg:
        return uniform_density(n)
    if name == "bump":
        try:
            kappa = float(arg) if arg else 2.0
        except ValueError:
            raise UsageError(f"bad bump concentration {arg!r}") from None
        if not kappa > 0:
            raise UsageError("bump concentration must be positive")
        return bump_density(n, kappa)
    if name == "extremal":
        if not arg:
            return extremal_density(random_group_point(n, seed, scale=20), n)
        try:
            coords = [Fraction(c.strip()) for c in arg.split(",")]
            h = GroupPoint.from_flat(coords, n)
        except (ValueError, ZeroDivisionError) as err:
            raise UsageError(f"bad translation {arg!r}: {err}") from None
        return extremal_density(h, n)
    raise UsageError(f"unknown density {text!r}; use uniform, bump[:KAPPA] or extremal[:coords]")


def cmd_recenter(args) -> tuple:
    from .verify import recenter_and_revalidate

    if not args.tol > 0:
        raise UsageError("--tol must be positive")
    v = _density(args.density, args.n, args.seed)
    try:
        res, again, size = recenter_and_revalidate(v, args.n, args.samples, args.seed, args.tol)
    except RecenterError as err:
        row = {"density": args.density, "n": args.n, "status": "fail", "residual": err.best_residual,
               "tolerance": args.tol, "samples": None, "seed": args.seed}
        return render(row, args.format), 1
    ok = res.residual <= args.tol and again <= 10 * args.tol
    row = {
        "density": args.density,
        "n": args.n,
        "status": "pass" if ok else "fail",
        "r": res.map.r,
        "center": [float(x) for x in np.asarray(res.map.center)],
        "residual": res.residual,
        "revalidated": again,
        "tolerance": args.tol,
        "mass-volume": eta_volume(args.n),
        "evaluations": res.evaluations,
        "samples": size,
        "seed": args.seed,
    }
    return render(row, args.format), 0 if ok else 1


COMMANDS = {"constants": cmd_constants, "verify": cmd_verify, "quotient": cmd_quotient, "recenter": cmd_recenter}


def run(argv=None, out=None, err=None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    try:
        args = build_parser().parse_args(argv)
        CliConfig(args.command, args.n, getattr(args, "samples", 1 << 20), getattr(args, "seed", 42), args.format,
                  getattr(args, "expr", None), {"tol": getattr(args, "tol", None)})
        text, code = COMMANDS[args.command](args)
    except UsageError as e:
        print(f"qcfs: usage error: {e}", file=err)
        return 2
    except (QuadratureError, ArithmeticError, ValueError) as e:
        print(f"qcfs: error: {e}", file=err)
        return 1
    out.write(text)
    return code


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
