"""Canonical verification suites driven by ``suites.conf``."""
from __future__ import annotations

import math
import re
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from pathlib import Path
from typing import Callable, Iterable

from . import fourier, identities, quadrature, transforms
from .polys import Params, bivariate_MK
from .quadrature import build_rule
from .report import VerificationReport

CONFIG_PATH = Path(__file__).with_name("suites.conf")
SUITES = ("konhauser", "m-orth", "mk-biorth", "relations", "genfun", "pde", "laplace",
          "fractional", "fourier")


class ConfigError(ValueError):
    pass


class Config:
    """Flat ``key = value`` file; ``#`` starts a comment."""

    def __init__(self, entries: dict[str, str]):
        self.entries = entries

    @classmethod
    def load(cls, path: str | Path | None = None) -> "Config":
        text = Path(path or CONFIG_PATH).read_text()
        entries = {}
        for n, raw in enumerate(text.splitlines(), 1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise ConfigError(f"line {n}: expected key = value")
            key, val = (s.strip() for s in line.split("=", 1))
            entries[key] = val
        return cls(entries)

    def raw(self, key: str) -> str:
        try:
            return self.entries[key]
        except KeyError:
            raise ConfigError(f"missing config key {key!r}") from None

    def _parse(self, key: str, conv):
        try:
            return conv(self.raw(key))
        except ValueError as exc:
            raise ConfigError(f"bad value for {key!r}: {exc}") from None

    def floats(self, key: str) -> list[float]:
        return self._parse(key, lambda v: [float(x) for x in v.split(",")])

    def ints(self, key: str) -> list[int]:
        return self._parse(key, lambda v: [int(x) for x in v.split(",")])

    def float(self, key: str) -> float:
        return self._parse(key, float)

    def int(self, key: str) -> int:
        return self._parse(key, int)

    def tuples(self, key: str) -> list[tuple[float, ...]]:
        return self._parse(key, lambda v: [tuple(float(x) for x in item.split(":")) for item in v.split(",")])


@dataclass(frozen=True)
class Case:
    """A deferred check; ``case_id`` matches the id of the report ``run`` returns."""

    case_id: str
    run: Callable[[], VerificationReport]


# --- filters --------------------------------------------------------------------

def _components(case_id: str) -> set[str]:
    return set(re.split(r"[:;]", case_id))


def parse_filter(text: str | None) -> list[str]:
    """``"k=r=0,fully-numeric"`` -> ``["k=0", "r=0", "fully-numeric"]``."""
    if not text:
        return []
    out = []
    for tok in (t.strip() for t in text.split(",")):
        if not tok:
            continue
        parts = tok.split("=")
        if len(parts) > 2:
            out.extend(f"{name}={parts[-1]}" for name in parts[:-1])
        else:
            out.append(tok)
    return out


def matches(case_id: str, tokens: list[str]) -> bool:
    comps = _components(case_id)
    return all(t in comps for t in tokens)


# --- suite builders ---------------------------------------------------------------

def _konhauser(cfg: Config) -> Iterable[Case]:
    kmax = cfg.int("konhauser.kmax")
    for u in cfg.ints("konhauser.upsilon"):
        for c in cfg.floats("konhauser.c"):
            for k in range(kmax + 1):
                for r in range(kmax + 1):
                    yield Case(f"konhauser:u={u};c={c!r};k={k};r={r}",
                               lambda k=k, r=r, c=c, u=u: quadrature.verify_konhauser_biorthogonality(k, r, c, u))


def _m_orth(cfg: Config) -> Iterable[Case]:
    kmax = cfg.int("m-orth.kmax")
    for p in cfg.floats("m-orth.p"):
        for q in cfg.floats("m-orth.q"):
            for k in range(kmax + 1):
                for r in range(kmax + 1):
                    yield Case(f"m-orth:p={p!r};q={q!r};k={k};r={r}",
                               lambda k=k, r=r, p=p, q=q: quadrature.verify_M_orthogonality(k, r, p, q))


def _mk_agreement(params: Params) -> VerificationReport:
    num, _ = quadrature.mk_cross_integral(params, 0, "fully-numeric")
    hyb, _ = quadrature.mk_cross_integral(params, 0, "hybrid")
    return VerificationReport.compare(
        "mk-biorth", f"mk-biorth:agreement;p={params.p!r};q={params.q!r};u={params.upsilon};k=0;r=0",
        {"k": 0, "r": 0, "p": params.p, "q": params.q, "upsilon": params.upsilon},
        num, hyb, 1e-8, mode="agreement", notes="fully-numeric vs hybrid")


def _mk_biorth(cfg: Config) -> Iterable[Case]:
    kmax = cfg.int("mk-biorth.kmax")
    for p in cfg.floats("mk-biorth.p"):
        for q in cfg.floats("mk-biorth.q"):
            for u in cfg.ints("mk-biorth.upsilon"):
                params = Params(p, q, u)
                for k in range(kmax + 1):
                    for r in range(kmax + 1):
                        yield Case(f"mk-biorth:hybrid;p={p!r};q={q!r};u={u};k={k};r={r}",
                                   lambda k=k, r=r, params=params: quadrature.verify_MK_biorthogonality(k, r, params))
    p, q, u = cfg.floats("mk-biorth.numeric")
    params = Params(p, q, int(u))
    for mode in ("fully-numeric", "hybrid"):
        yield Case(f"mk-biorth:{mode};p={p!r};q={q!r};u={int(u)};k=0;r=0",
                   lambda mode=mode: quadrature.verify_MK_biorthogonality(0, 0, params, mode=mode))
    yield Case(f"mk-biorth:agreement;p={p!r};q={q!r};u={int(u)};k=0;r=0", lambda: _mk_agreement(params))


def _relations(cfg: Config) -> Iterable[Case]:
    p, q = cfg.float("relations.p"), cfg.float("relations.q")
    grid = cfg.floats("relations.grid")
    for u in cfg.ints("relations.upsilon"):
        for k in range(cfg.int("relations.kmax") + 1):
            params = Params(p, q, u, k)
            yield Case(f"four-way:p={p!r};q={q!r};u={u};k={k}",
                       lambda params=params: identities.four_way_agreement(params, grid, grid))
            for y, z in zip(grid, reversed(grid)):
                yield Case(f"ml-relation:p={p!r};q={q!r};u={u};k={k};y={y!r};z={z!r}",
                           lambda params=params, y=y, z=z: identities.check_ML_relation(params, y, z))


def _tail_report(params: Params, y: float, z: float, w: float, N: int, orders: list[int]) -> VerificationReport:
    rep = identities.check_generating_function(params, y, z, w, N, tail_orders=orders)
    tails = [rep.extra[f"tail_N{n}"] for n in orders]
    bad = sum(1 for a, b in zip(tails, tails[1:]) if a > 0 and not b < a)
    return VerificationReport.compare(
        "genfun-tail", f"genfun-tail:p={params.p!r};q={params.q!r};u={params.upsilon};y={y!r};z={z!r};w={w!r}",
        {"p": params.p, "q": params.q, "upsilon": params.upsilon, "y": y, "z": z, "w": w},
        bad, 0, 0.0, mode="monotone", notes="lhs counts non-decreasing tail steps", extra=rep.extra)


def _genfun(cfg: Config) -> Iterable[Case]:
    orders = cfg.ints("genfun.tail")
    for p, q, u, y, z, w, N in cfg.tuples("genfun.cases"):
        params, N = Params(p, q, int(u)), int(N)
        yield Case(f"genfun:p={p!r};q={q!r};u={int(u)};y={y!r};z={z!r};w={w!r};N={N}",
                   lambda params=params, y=y, z=z, w=w, N=N:
                   identities.check_generating_function(params, y, z, w, N, tail_orders=orders))
        yield Case(f"genfun-tail:p={p!r};q={q!r};u={int(u)};y={y!r};z={z!r};w={w!r}",
                   lambda params=params, y=y, z=z, w=w, N=N: _tail_report(params, y, z, w, N, orders))


def _pde(cfg: Config) -> Iterable[Case]:
    for p, q in cfg.tuples("pde.params"):
        for u in range(1, cfg.int("pde.umax") + 1):
            for k in range(cfg.int("pde.kmax") + 1):
                params = Params(p, q, u, k)
                yield Case(f"pde:p={p!r};q={q!r};u={u};k={k}", lambda params=params: identities.check_pde(params))


def _laplace_report(kind: str, i: int, case: transforms.LaplaceCase, lhs: float, rhs: float,
                    tol: float, y: float | None = None) -> VerificationReport:
    P = case.params
    params = {"k": P.k, "p": P.p, "q": P.q, "upsilon": P.upsilon, "a": case.a, "w": case.w}
    if kind.startswith("laplace-2d"):
        params.update(b=case.b, w2=case.w2)
    else:
        params["y"] = y
    return VerificationReport.compare(kind.split(":")[0], f"{kind};i={i:02d}", params, lhs, rhs, tol,
                                      mode=kind.split(":")[1])


def _laplace(cfg: Config) -> Iterable[Case]:
    y = cfg.float("laplace.y")
    cases = transforms.laplace_cases(cfg.int("laplace.count"), seed=cfg.int("laplace.seed"))
    checks = (
        ("laplace-1d:termwise", 1e-10, lambda c: (transforms.laplace_1d_closed(c, y), transforms.laplace_1d_termwise(c, y))),
        ("laplace-1d:m-form", 1e-12, lambda c: (transforms.laplace_1d_closed(c, y), transforms.laplace_1d_M_form(c, y))),
        ("laplace-2d:termwise", 1e-10, lambda c: (transforms.laplace_2d_closed(c), transforms.laplace_2d_termwise(c))),
        ("laplace-2d:bessel", 1e-12, lambda c: (transforms.laplace_2d_closed(c), transforms.laplace_2d_bessel(c))),
    )
    for i, case in enumerate(cases):
        for kind, tol, fn in checks:
            yield Case(f"{kind};i={i:02d}",
                       lambda kind=kind, tol=tol, fn=fn, case=case, i=i:
                       _laplace_report(kind, i, case, *fn(case), tol, y))


def _richardson_mixed(f: Callable[[float, float], float], y: float, z: float, h: float) -> float:
    """Mixed partial by central differences, two Richardson steps."""
    def d(h):
        return (f(y + h, z + h) - f(y + h, z - h) - f(y - h, z + h) + f(y - h, z - h)) / (4 * h * h)
    d1, d2, d3 = d(h), d(h / 2), d(h / 4)
    e1, e2 = (4 * d2 - d1) / 3, (4 * d3 - d2) / 3
    return (16 * e2 - e1) / 15


def _integer_oracle(kind: str, params: Params, y: float, z: float) -> VerificationReport:
    """First-order operators against ordinary calculus on the unshifted product."""
    case = transforms.FracCase(params, 1.0, 1.0)
    p, q = params.p, params.q

    def f(s, t):
        return s ** q * t ** (-p - q) * float(bivariate_MK(params)(s, t))

    if kind == "integral":
        lhs = transforms.frac_integral_apply(case, y, z)
        # Gauss-Jacobi absorbs the endpoint powers s^q and t^(-p-q)
        ry, rz = build_rule("jacobi", 40, 0.0, q), build_rule("jacobi", 40, 0.0, -p - q)
        sy, sz = 0.5 * y * (1 + ry.nodes), 0.5 * z * (1 + rz.nodes)
        mk = bivariate_MK(params)
        inner = [[float(mk(a, b)) for b in sz] for a in sy]
        rhs = (0.5 * y) ** (q + 1) * (0.5 * z) ** (1 - p - q) * math.fsum(
            ry.weights[i] * rz.weights[j] * inner[i][j] for i in range(len(sy)) for j in range(len(sz)))
        tol = 1e-12
    else:
        lhs = transforms.frac_derivative_apply(case, y, z)
        rhs = _richardson_mixed(f, y, z, 0.05)
        tol = 1e-8
    return VerificationReport.compare(
        f"frac-{kind}-oracle",
        f"frac-{kind}-oracle:p={p!r};q={q!r};u={params.upsilon};k={params.k};y={y!r};z={z!r}",
        {"k": params.k, "p": p, "q": q, "upsilon": params.upsilon, "y": y, "z": z},
        lhs, rhs, tol, mode="integer-order")


def _fractional(cfg: Config) -> Iterable[Case]:
    p, q, u = cfg.float("fractional.p"), cfg.float("fractional.q"), cfg.int("fractional.upsilon")
    y, z = cfg.tuples("fractional.point")[0]
    op, oq = cfg.tuples("fractional.oracle")[0]
    checks = (("frac-integral", transforms.check_frac_integral_shift),
              ("frac-derivative", transforms.check_frac_derivative_shift),
              ("frac-roundtrip", transforms.check_frac_roundtrip))
    for k in range(cfg.int("fractional.kmax") + 1):
        params = Params(p, q, u, k)
        for mu, lam in cfg.tuples("fractional.orders"):
            case = transforms.FracCase(params, mu, lam)
            for name, fn in checks:
                yield Case(f"{name}:p={p!r};q={q!r};u={u};k={k};mu={mu!r};lam={lam!r};y={y!r};z={z!r}",
                           lambda fn=fn, case=case: fn(case, y, z))
        oparams = Params(op, oq, u, k)
        for kind in ("integral", "derivative"):
            yield Case(f"frac-{kind}-oracle:p={op!r};q={oq!r};u={u};k={k};y={y!r};z={z!r}",
                       lambda kind=kind, oparams=oparams: _integer_oracle(kind, oparams, y, z))


def fourier_pair(pair: tuple[float, ...], upsilon: int, n: int) -> fourier.FourierParams:
    """Both sides carry the same ``(p, q, a, b)`` data and order ``n``."""
    p, q, a, b = pair
    return fourier.FourierParams(p, q, p, q, upsilon, a, b, a, b, k=n, r=n)


def _fourier(cfg: Config) -> Iterable[Case]:
    u = cfg.int("fourier.upsilon")
    pairs = {0: cfg.tuples("fourier.pair0")[0], 1: cfg.tuples("fourier.pair1")[0]}
    for side in ("left", "right"):
        for n, (p, q, a, b) in pairs.items():
            fp = fourier_pair((p, q, a, b), u, n)
            for x1, x2 in cfg.tuples("fourier.freqs"):
                yield Case(f"fourier-closed:{side};p={p!r};q={q!r};a={a!r};b={b!r};u={u};n={n};"
                           f"xi1={x1!r};xi2={x2!r}",
                           lambda side=side, fp=fp, x1=x1, x2=x2: fourier.check_fourier_closed(side, fp, x1, x2))
    p1, q1, p2, q2 = cfg.tuples("fourier.coupled")[0]
    fp = fourier.FourierParams(p1, q1, p2, q2, u)
    for k, r in cfg.tuples("fourier.biorth"):
        k, r = int(k), int(r)
        yield Case(f"fourier-biorth:p1={p1!r};q1={q1!r};p2={p2!r};q2={q2!r};u={u};k={k};r={r}",
                   lambda k=k, r=r: fourier.verify_fourier_biorthogonality(k, r, fp))
    (lp, lq, la, lb), (rp, rq, ra, rb) = pairs[0], pairs[1]
    parseval = {(0, 0): fp,
                (1, 1): fourier_pair(pairs[1], u, 1),
                (0, 1): fourier.FourierParams(lp, lq, rp, rq, u, la, lb, ra, rb)}
    for (k, r), pf in parseval.items():
        yield Case(f"parseval:p1={pf.p1!r};q1={pf.q1!r};a={pf.alpha!r};b={pf.beta!r};p2={pf.p2!r};"
                   f"q2={pf.q2!r};c={pf.gamma!r};d={pf.delta!r};u={u};k={k};r={r}",
                   lambda k=k, r=r, pf=pf: fourier.parseval_consistency(k, r, pf))


BUILDERS = {
    "konhauser": _konhauser, "m-orth": _m_orth, "mk-biorth": _mk_biorth, "relations": _relations,
    "genfun": _genfun, "pde": _pde, "laplace": _laplace, "fractional": _fractional, "fourier": _fourier,
}


def collect_cases(suite: str, cfg: Config | None = None, filter_tokens: list[str] | None = None) -> list[Case]:
    cfg = cfg or Config.load()
    names = SUITES if suite == "all" else (suite,)
    if any(n not in BUILDERS for n in names):
        raise KeyError(f"unknown suite {suite!r}")
    cases = [c for n in names for c in BUILDERS[n](cfg)]
    if filter_tokens:
        cases = [c for c in cases if matches(c.case_id, filter_tokens)]
    return cases


def run_cases(cases: list[Case], threads: int = 1,
              progress: Callable[[int, int, VerificationReport], None] | None = None) -> list[VerificationReport]:
    """Run every case and return the reports sorted by case_id."""
    out = []
    if threads <= 1:
        results = (c.run() for c in cases)
        for i, rep in enumerate(results, 1):
            out.append(rep)
            if progress:
                progress(i, len(cases), rep)
    else:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            for i, rep in enumerate(pool.map(lambda c: c.run(), cases), 1):
                out.append(rep)
                if progress:
                    progress(i, len(cases), rep)
    return sorted(out, key=lambda r: r.case_id)


def run_suite(suite: str, cfg: Config | None = None, filter_text: str | None = None,
              threads: int = 1, progress=None) -> list[VerificationReport]:
    return run_cases(collect_cases(suite, cfg, parse_filter(filter_text)), threads, progress)


__all__ = ["Config", "ConfigError", "Case", "SUITES", "collect_cases", "run_cases", "run_suite",
           "parse_filter", "matches", "fourier_pair"]
