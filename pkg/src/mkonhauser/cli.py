"""Command-line entry point: ``eval``, ``table`` and ``verify``."""
from __future__ import annotations

import argparse
import sys

import numpy as np

from . import __version__, suites
from .kernels import BACKEND
from .polys import (
    Params,
    bivariate_JK,
    bivariate_MK,
    companion_JK_Q,
    companion_Mcal,
    finite_M,
    jacobi_P,
    konhauser_Y,
    konhauser_Z,
    mittag_leffler_E,
)
from .report import to_csv, to_jsonl
from .scalar import DomainError, PoleError

FAMILIES = ("z", "y", "m", "jacobi", "mk", "mcal", "jk", "jkq", "mittag-leffler")
BIVARIATE = {"mk", "mcal", "jk", "jkq", "mittag-leffler"}


class UsageError(Exception):
    pass


def _need(args, *names):
    missing = [f"--{n.replace('_', '-')}" for n in names if getattr(args, n) is None]
    if missing:
        raise UsageError(f"family {args.family} needs {', '.join(missing)}")


def make_evaluator(args):
    """Validate the family parameters and return ``f(y, z) -> float``."""
    fam = args.family
    if fam == "mittag-leffler":
        _need(args, "gamma1", "gamma2", "p", "q")
        g1, g2, p, q, u = args.gamma1, args.gamma2, args.p, args.q, args.upsilon
        return lambda y, z: mittag_leffler_E(g1, g2, p, q, u, y, z)
    _need(args, "k")
    if args.k < 0:
        raise UsageError("k >= 0 required")
    if fam in ("z", "y"):
        _need(args, "c")
        if not args.c > -1:
            raise UsageError("c > -1 required")
        poly = (konhauser_Z if fam == "z" else konhauser_Y)(args.k, args.c, args.upsilon)
        return lambda y, z: float(poly(y))
    _need(args, "p", "q")
    if fam in ("m", "mk", "mcal"):
        params = Params(args.p, args.q, args.upsilon, args.k)
        bad = params.violations()
        if bad:
            raise UsageError("; ".join(bad))
        if fam == "m":
            poly = finite_M(args.k, args.p, args.q)
            return lambda y, z: float(poly(y))
        bi = bivariate_MK(params) if fam == "mk" else companion_Mcal(params)
        return lambda y, z: float(bi(y, z))
    if not (args.p > -1 and args.q > -1):
        raise UsageError("p > -1 and q > -1 required")
    if fam == "jacobi":
        poly = jacobi_P(args.k, args.p, args.q)
        return lambda y, z: float(poly(y))
    bi = (bivariate_JK if fam == "jk" else companion_JK_Q)(args.k, args.p, args.q, args.upsilon)
    return lambda y, z: float(bi(y, z))


def fmt(v: float) -> str:
    return f"{v:.15g}"


def cmd_eval(args) -> int:
    f = make_evaluator(args)
    if args.y is None or (args.family in BIVARIATE and args.z is None):
        raise UsageError("--y and --z required" if args.family in BIVARIATE else "--y required")
    print(fmt(f(args.y, args.z if args.z is not None else 0.0)))
    return 0


def _axis(spec: str | None, count: int) -> np.ndarray:
    if count < 0:
        raise UsageError("grid counts must be >= 0")
    if spec is None:
        return np.zeros(count)
    try:
        lo, hi = (float(s) for s in spec.split(":"))
    except ValueError:
        raise UsageError(f"range {spec!r} must look like START:STOP") from None
    return np.linspace(lo, hi, count)


def cmd_table(args) -> int:
    f = make_evaluator(args)
    ys = _axis(args.y_range, args.y_count)
    zs = _axis(args.z_range, args.z_count)
    rows = ["y,z,value"]
    for y in ys:
        for z in zs:
            rows.append(f"{fmt(y)},{fmt(z)},{fmt(f(float(y), float(z)))}")
    _write(args.out, "\n".join(rows) + "\n")
    return 0


def _write(path: str | None, text: str) -> None:
    if path in (None, "-"):
        sys.stdout.write(text)
    else:
        with open(path, "w", newline="") as fh:
            fh.write(text)


def cmd_verify(args) -> int:
    tokens = suites.parse_filter(args.filter)
    try:
        cfg = suites.Config.load(args.config)
        cases = suites.collect_cases(args.suite, cfg, tokens)
    except (OSError, suites.ConfigError) as exc:
        raise UsageError(f"cannot read config: {exc}") from None
    if not cases:
        raise UsageError(f"filter {args.filter!r} selects no cases")
    show = args.progress or args.suite in ("fourier", "all")

    def progress(i, n, rep):
        if show:
            print(f"[{i}/{n}] {rep.summary_line()}", file=sys.stderr, flush=True)

    reports = suites.run_cases(cases, max(1, args.threads), progress)
    if args.tol is not None:
        reports = [r.with_tol(args.tol) for r in reports]
    if args.format == "jsonl":
        header = {"tool": "mkonhauser", "version": __version__, "suite": args.suite,
                  "filter": args.filter, "tol_override": args.tol, "cases": len(reports),
                  "config_version": cfg.entries.get("version")}
        text = to_jsonl(reports, header)
    else:
        text = to_csv(reports)
    _write(args.out, text)
    failed = [r for r in reports if not r.passed]
    print(f"{args.suite}: {len(reports)} cases, {len(reports) - len(failed)} passed, "
          f"{len(failed)} failed (backend {BACKEND})", file=sys.stderr)
    for r in failed:
        print(f"  {r.summary_line()}", file=sys.stderr)
    return 1 if failed else 0


def _family_args(p: argparse.ArgumentParser) -> None:
    p.add_argument("--family", required=True, type=str.lower, choices=FAMILIES,
                   help="polynomial family (case-insensitive)")
    p.add_argument("--k", type=int, help="degree")
    p.add_argument("--c", type=float, help="Konhauser parameter")
    p.add_argument("--p", type=float)
    p.add_argument("--q", type=float)
    p.add_argument("--upsilon", type=int, default=1, help="stride of z (default 1)")
    p.add_argument("--gamma1", type=float, help="Mittag-Leffler gamma1")
    p.add_argument("--gamma2", type=float, help="Mittag-Leffler gamma2")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="mkonhauser",
                                     description="Evaluate M-Konhauser families and run verification suites.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    pe = sub.add_parser("eval", help="evaluate one family at a point")
    _family_args(pe)
    pe.add_argument("--y", type=float)
    pe.add_argument("--z", type=float)
    pe.set_defaults(func=cmd_eval)

    pt = sub.add_parser("table", help="CSV table over a y-by-z grid")
    _family_args(pt)
    pt.add_argument("--y-range", dest="y_range", help="START:STOP")
    pt.add_argument("--y-count", dest="y_count", type=int, default=1)
    pt.add_argument("--z-range", dest="z_range", help="START:STOP (default z = 0)")
    pt.add_argument("--z-count", dest="z_count", type=int, default=1)
    pt.add_argument("--out", help="output path (default stdout)")
    pt.set_defaults(func=cmd_table)

    pv = sub.add_parser("verify", help="run verification suites")
    pv.add_argument("--suite", required=True, choices=suites.SUITES + ("all",))
    pv.add_argument("--filter", help="comma-separated case-id tokens, e.g. k=r=0,fully-numeric")
    pv.add_argument("--out", help="report path (default stdout)")
    pv.add_argument("--format", choices=("jsonl", "csv"), default="jsonl")
    pv.add_argument("--tol", type=float, help="override every tolerance")
    pv.add_argument("--threads", type=int, default=1)
    pv.add_argument("--config", help="alternative suites.conf")
    pv.add_argument("--progress", action="store_true", help="per-case progress on stderr")
    pv.set_defaults(func=cmd_verify)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (UsageError, DomainError, PoleError) as exc:
        print(f"mkonhauser {args.command}: error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
