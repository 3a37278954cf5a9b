"""``weyl-lab`` command line: one subcommand per operation family."""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from fractions import Fraction
from typing import Sequence

from weyl_lab.config import CliConfig, DomainError, PrecisionError, default_digits, default_threads
from weyl_lab.counting import (count_direct_series, count_lattice_series, error_series,
                               fit_error_series, radial_decomposition)
from weyl_lab.exact import format_fraction, format_sci
from weyl_lab.lowrank import (ExponentPair, exponent_pair_calc, r3_average_fit, sandwich_violations,
                              so2_count, so3_count, sonin_sum, t_split)
from weyl_lab.modular import mean_square_stat, partial_sum_stat, theta_coeffs
from weyl_lab.polynomials import PolySyntaxError, format_poly, harmonic_decompose, parse_poly
from weyl_lab.shells import (average_compare, average_error_points, equidist_error, jump_check,
                             r4_extremal_ratio, rep_table, shell_table)
from weyl_lab.envelope import envelope_fit
from weyl_lab.weights import enumerate_spectrum, parse_group


class UsageError(Exception):
    pass


def _group(text: str):
    try:
        return parse_group(text)
    except DomainError as e:
        raise argparse.ArgumentTypeError(str(e)) from None


def _fraction(text: str) -> Fraction:
    try:
        return Fraction(text.strip())
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"not a rational number: {text!r}") from None


def _diag(text: str) -> tuple[int, ...]:
    try:
        a = tuple(int(s) for s in text.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad --diag {text!r}") from None
    if not a or any(v <= 0 for v in a):
        raise argparse.ArgumentTypeError("--diag entries must be positive integers")
    return a


def _num(x, digits: int) -> str:
    if isinstance(x, int):
        return str(x)
    if isinstance(x, Fraction):
        return format_fraction(x)
    if isinstance(x, float):
        return repr(x)
    return format_sci(x, digits)


def _emit(rows: list[dict], cfg: CliConfig, extra: dict | None = None) -> str:
    rows = [{k: _num(v, cfg.digits) if not isinstance(v, str) else v for k, v in r.items()}
            for r in rows]
    if cfg.format == "json":
        doc = {"rows": rows}
        if extra:
            doc.update(extra)
        return json.dumps(doc, indent=2) + "\n"
    buf = io.StringIO()
    if rows:
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(list(rows[0]))
        for r in rows:
            w.writerow(list(r.values()))
    return buf.getvalue()


def _poly(args, n: int):
    if args.poly is None:
        raise UsageError("--poly is required")
    return parse_poly(args.poly, n)


def _need(args, *names):
    for name in names:
        if getattr(args, name) is None:
            raise UsageError(f"--{name.replace('_', '-')} is required")


# ---------------------------------------------------------------------------
# subcommands; each returns (text, exit code)


def cmd_spectrum(args, cfg):
    _need(args, "group", "lambda_max")
    sp = enumerate_spectrum(args.group, args.lambda_max)
    return _emit([{"lambda": e, "mult": m} for e, m in sp.entries], cfg), 0


def _lams(args) -> list[int]:
    if args.lambda_ is not None:
        return [args.lambda_]
    _need(args, "lambda_max")
    return list(range(0, args.lambda_max + 1, args.step))


def cmd_count(args, cfg):
    _need(args, "group")
    lams = _lams(args)
    rows, code = [], 0
    direct = count_direct_series(args.group, lams) if args.method in ("direct", "both") else None
    lattice = (count_lattice_series(args.group, lams, cfg.threads)
               if args.method in ("lattice", "both") else None)
    for i, lam in enumerate(lams):
        r = {"lambda": lam}
        if direct is not None:
            r["direct"] = direct[i]
        if lattice is not None:
            r["lattice"] = lattice[i]
        if direct is not None and lattice is not None and direct[i] != lattice[i]:
            code = 1
        rows.append(r)
    return _emit(rows, cfg), code


def cmd_shells(args, cfg):
    _need(args, "n", "k_max")
    if args.poly is None:
        t = rep_table(args.n, args.k_max, args.parity)
    else:
        t = shell_table(args.n, args.k_max, _poly(args, args.n), args.parity, args.diag)
    return _emit([{"k": k, "value": v} for k, v in enumerate(t.values)], cfg), 0


def cmd_theta(args, cfg):
    _need(args, "n", "k_max")
    c = theta_coeffs(args.n, _poly(args, args.n), args.k_max)
    ms = mean_square_stat(c, cfg.digits)
    ps = dict(partial_sum_stat(c, cfg.digits).rows) if args.k_max >= 4 else {}
    rows = [{"K": K, "mean_square": v, "partial_sum": ps.get(K, "")} for K, v in ms.rows]
    return _emit(rows, cfg, {"weight": str(c.weight), "degenerate": c.degenerate}), 0


def cmd_harmonic(args, cfg):
    _need(args, "n")
    dec = harmonic_decompose(_poly(args, args.n))
    return _emit([{"l": l, "component": format_poly(H)} for l, H in dec.components], cfg), 0


def cmd_weyl_error(args, cfg):
    _need(args, "group", "lambda_max")
    es = error_series(args.group, args.lambda_max, args.step, cfg.digits, cfg.threads)
    fit = fit_error_series(es)
    rows = [{"slope": fit.slope, "intercept": fit.intercept, "residual": fit.residual,
             "windows": len(fit.windows), "target": Fraction(args.group.d, 2) - 1}]
    extra = {"series": [{"lambda": str(l), "count": str(c), "smooth": format_sci(s, cfg.digits),
                         "error": format_sci(e, cfg.digits)} for l, c, s, e in es.rows]}
    return _emit(rows, cfg, extra if cfg.format == "json" else None), 0


def cmd_radial_check(args, cfg):
    _need(args, "group", "k_max")
    fails = radial_decomposition(args.group).check(args.k_max, cfg.threads)
    rows = [{"r2_max": args.k_max, "failures": len(fails),
             "first_failure": fails[0] if fails else ""}]
    return _emit(rows, cfg), 1 if fails else 0


def cmd_average(args, cfg):
    _need(args, "n", "r_max")
    if args.fit:
        fit = envelope_fit(average_error_points(args.n, args.r_max, args.parity, cfg.digits))
        return _emit([{"n": args.n, "parity": args.parity, "slope": fit.slope,
                       "windows": len(fit.windows)}], cfg), 0
    rows = [{"R": R, "count": c, "main": m, "error": e}
            for R, c, m, e in average_compare(args.n, args.r_max, args.parity, cfg.digits)]
    return _emit(rows, cfg), 0


def cmd_equidist(args, cfg):
    _need(args, "n", "k")
    v = equidist_error(args.n, args.k, _poly(args, args.n), cfg.digits)
    return _emit([{"n": args.n, "k": args.k, "error": v}], cfg), 0


def cmd_jumps(args, cfg):
    _need(args, "n", "k_max")
    r = jump_check(args.n, args.k_min, args.k_max, args.parity, cfg.digits)
    rows = [{"n": r.n, "parity": r.parity, "minimum": r.minimum, "argmin": r.argmin,
             "empty_classes": len(r.empty_classes)}]
    return _emit(rows, cfg), 0


def cmd_r4_extremal(args, cfg):
    _need(args, "primes")
    rows = []
    for j in range(3, args.primes + 1):
        e = r4_extremal_ratio(j, cfg.digits)
        rows.append({"j": j, "k": e.k, "r4": e.r4, "ratio": e.ratio, "reference": e.reference})
    return _emit(rows, cfg), 0


def cmd_so_low(args, cfg):
    _need(args, "group")
    g = args.group
    if g.N not in (2, 3):
        raise DomainError("so-low handles SO2 and SO3 only")
    f = so2_count if g.N == 2 else so3_count
    return _emit([{"lambda": lam, "count": f(lam)} for lam in _lams(args)], cfg), 0


def cmd_sonin(args, cfg):
    _need(args, "a", "b")
    r = sonin_sum(_poly(args, 1), args.a, args.b)
    return _emit([{"lhs": r.lhs, "rhs": r.rhs, "holds": str(r.holds).lower()}], cfg), 0 if r.holds else 1


def cmd_t_split(args, cfg):
    rows = []
    for lam in _lams(args):
        s = t_split(lam, cfg.digits, N=count_lattice_series(parse_group("SO4"), [lam], cfg.threads)[0])
        rows.append({"lambda": lam, "T1": s.T1, "T2": s.T2, "T3": s.T3, "N": s.N,
                     "defect": s.defect, "T3_over_R4": s.t3_over_r4})
    return _emit(rows, cfg), 0


def cmd_psi(args, cfg):
    _need(args, "M")
    v = sandwich_violations(args.M, args.grid)
    return _emit([v], cfg), 0


def cmd_exponent_pair(args, cfg):
    _need(args, "alpha", "beta")
    r = exponent_pair_calc(ExponentPair(args.alpha, args.beta))
    if cfg.format == "csv":
        return str(r) + "\n", 0
    return _emit([{"M_exponent": r.M_exponent, "T2_exponent": r.T2_exponent,
                   "weyl_deficit": r.weyl_deficit, "degenerate": str(r.degenerate).lower()}], cfg), 0


def cmd_r3_fit(args, cfg):
    _need(args, "r_max")
    f = r3_average_fit(args.r_max, args.parity, cfg.digits)
    rows = [{"parity": f.parity, "R_max": f.R_max, "slope": f.slope,
             "bound": Fraction(3, 2), "comparison": f.comparison}]
    return _emit(rows, cfg), 0


COMMANDS = {
    "spectrum": cmd_spectrum,
    "count": cmd_count,
    "shells": cmd_shells,
    "theta": cmd_theta,
    "harmonic": cmd_harmonic,
    "weyl-error": cmd_weyl_error,
    "radial-check": cmd_radial_check,
    "average": cmd_average,
    "equidist": cmd_equidist,
    "jumps": cmd_jumps,
    "r4-extremal": cmd_r4_extremal,
    "so-low": cmd_so_low,
    "sonin": cmd_sonin,
    "t-split": cmd_t_split,
    "psi": cmd_psi,
    "exponent-pair": cmd_exponent_pair,
    "r3-fit": cmd_r3_fit,
}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--group", type=_group)
    common.add_argument("--lambda", dest="lambda_", type=int)
    common.add_argument("--lambda-max", type=int)
    common.add_argument("--step", type=int, default=1)
    common.add_argument("--n", type=int)
    common.add_argument("--k", type=int)
    common.add_argument("--k-min", type=int, default=1)
    common.add_argument("--k-max", type=int)
    common.add_argument("--r-max", type=int)
    common.add_argument("--parity", choices=("all", "odd"), default="all")
    common.add_argument("--poly")
    common.add_argument("--diag", type=_diag)
    common.add_argument("--alpha", type=_fraction)
    common.add_argument("--beta", type=_fraction)
    common.add_argument("--a", type=_fraction)
    common.add_argument("--b", type=_fraction)
    common.add_argument("--M", type=int)
    common.add_argument("--grid", type=int, default=10**5)
    common.add_argument("--primes", type=int)
    common.add_argument("--fit", action="store_true")
    common.add_argument("--method", choices=("direct", "lattice", "both"), default="lattice")
    common.add_argument("--digits", type=int)
    common.add_argument("--threads", type=int)
    common.add_argument("--format", choices=("csv", "json"), default="csv")
    common.add_argument("--out")
    p = argparse.ArgumentParser(prog="weyl-lab", description=__doc__)
    sub = p.add_subparsers(dest="command", metavar="COMMAND")
    sub.required = True
    for name in COMMANDS:
        sub.add_parser(name, parents=[common])
    return p


def run(argv: Sequence[str] | None = None, stdout=None, stderr=None) -> int:
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return int(e.code or 0)
    try:
        cfg = CliConfig(digits=args.digits if args.digits is not None else default_digits(),
                        threads=args.threads if args.threads is not None else default_threads(),
                        format=args.format, out=args.out)
    except (DomainError, ValueError) as e:
        print(f"weyl-lab: {e}", file=stderr)
        return 2
    if args.step < 1:
        print("weyl-lab: --step must be >= 1", file=stderr)
        return 2
    try:
        text, code = COMMANDS[args.command](args, cfg)
    except (UsageError, PolySyntaxError) as e:
        print(f"weyl-lab {args.command}: {e}", file=stderr)
        return 2
    except (DomainError, PrecisionError, ZeroDivisionError) as e:
        print(f"weyl-lab {args.command}: {e}", file=stderr)
        return 1
    if cfg.out:
        with open(cfg.out, "w", newline="\n") as fh:
            fh.write(text)
    else:
        stdout.write(text)
    return code


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
