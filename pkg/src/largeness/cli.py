"""Command-line driver: JSON representation specs in, JSON reports out.

Exit codes: 0 when every requested check is consistent, 1 when some
consistency check fails, 2 on parse errors or exhausted resource limits.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, replace
from fractions import Fraction
from math import comb
from typing import Sequence

import jsonschema
import numpy as np
import sympy
from sympy.parsing.sympy_parser import parse_expr

from .algebra import PRIMES, Poly
from .errors import LargenessError, ModulusError, PrimeDisagreementError, ResourceLimitError, SpecError
from .kempfness import FlowConfig, kempf_ness_flow, membership_check, rank_sample
from .koszul import KoszulLimits, euler_checks, koszul_certificate, one_large_consistency
from .moment import moment_components
from .oracle import OracleVerdict, oracle_verdict
from .repspec import RepSpec, realize
from .torus import largeness_verdict

__all__ = ["SCHEMA", "RunConfig", "ParsedSpec", "parse_spec", "parse_witness", "run", "main"]

EXIT_OK, EXIT_INCONSISTENT, EXIT_FAILURE = 0, 1, 2
COMMANDS = ("analyze", "koszul", "flow", "verify")

_INT_ROW = {"type": "array", "items": {"type": "integer"}, "minItems": 1}

SCHEMA = {
    "type": "object",
    "required": ["group", "rep"],
    "additionalProperties": False,
    "properties": {
        "group": {
            "type": "object",
            "required": ["type"],
            "additionalProperties": False,
            "properties": {
                "type": {"enum": ["torus", "sl2", "classical"]},
                "rank": {"type": "integer", "minimum": 1},
                "family": {"enum": ["gl", "sl", "so", "sp"]},
                "n": {"type": "integer", "minimum": 1},
            },
        },
        "rep": {
            "type": "object",
            "additionalProperties": False,
            "properties": {
                "weights": {"type": "array", "items": _INT_ROW, "minItems": 1},
                "binary_forms": {
                    "type": "array", "items": {"type": "integer", "minimum": 0}, "minItems": 1,
                },
                "p": {"type": "integer", "minimum": 0},
                "q": {"type": "integer", "minimum": 0},
            },
        },
        "witness": {"type": "string"},
    },
    "allOf": [
        {
            "if": {"properties": {"group": {"properties": {"type": {"const": kind}}}}},
            "then": {
                "properties": {
                    "group": {"required": ["type", *g_req], "propertyNames": {"enum": ["type", *g_req]}},
                    "rep": {"required": r_req, "propertyNames": {"enum": r_allowed}},
                }
            },
        }
        for kind, g_req, r_req, r_allowed in (
            ("torus", ["rank"], ["weights"], ["weights"]),
            ("sl2", [], ["binary_forms"], ["binary_forms"]),
            ("classical", ["family", "n"], ["p"], ["p", "q"]),
        )
    ],
}

_VALIDATOR = jsonschema.Draft202012Validator(SCHEMA)


@dataclass(frozen=True)
class ParsedSpec:
    spec: RepSpec
    witness: str | None
    document: dict


def _path(err: jsonschema.ValidationError) -> tuple:
    return tuple(str(x) for x in err.absolute_path)


def parse_spec(text: str) -> ParsedSpec:
    """Validate a JSON document and build the :class:`RepSpec`.

    Raises :class:`SpecError` carrying the offending field path.
    """
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise SpecError(f"invalid JSON: {exc.msg} at line {exc.lineno} column {exc.colno}") from None
    errors = sorted(_VALIDATOR.iter_errors(doc), key=lambda e: (len(e.absolute_path), e.message), reverse=True)
    if errors:
        err = errors[0]
        raise SpecError(err.message, _path(err))
    group, rep = doc["group"], doc["rep"]
    kind = group["type"]
    if kind == "torus":
        weights = tuple(tuple(r) for r in rep["weights"])
        if len(weights) != group["rank"]:
            raise SpecError(f"rank {group['rank']} but {len(weights)} weight rows", ("group", "rank"))
        spec = RepSpec("torus", weights=weights)
    elif kind == "sl2":
        spec = RepSpec("sl2", degrees=tuple(rep["binary_forms"]))
    else:
        spec = RepSpec(group["family"], n=group["n"], p=rep["p"], q=rep.get("q", 0))
        if spec.p + spec.q == 0:
            raise SpecError("need at least one copy of the module", ("rep", "p"))
    return ParsedSpec(spec, doc.get("witness"), doc)


def parse_witness(text: str, n: int) -> Poly:
    """A polynomial in ``x1..xn`` (optionally ``y1..yn``) with rational coefficients."""
    names = [f"x{i + 1}" for i in range(n)] + [f"y{i + 1}" for i in range(n)]
    syms = sympy.symbols(names)
    table = dict(zip(names, syms))
    try:
        expr = parse_expr(text, local_dict=table, evaluate=True)
    except Exception as exc:  # sympy raises a variety of parser errors
        raise SpecError(f"cannot parse witness: {exc}", ("witness",)) from None
    extra = expr.free_symbols - set(syms)
    if extra:
        raise SpecError(f"unknown symbols in witness: {sorted(map(str, extra))}", ("witness",))
    try:
        poly = sympy.Poly(expr, *syms)
    except sympy.PolynomialError:
        raise SpecError("witness is not a polynomial", ("witness",)) from None
    terms = {}
    for mono, c in poly.terms():
        if not c.is_Rational:
            raise SpecError("witness coefficients must be rational", ("witness",))
        terms[tuple(mono)] = Fraction(int(c.p), int(c.q))
    uses_y = any(any(m[n:]) for m in terms)
    p = Poly(terms, 2 * n, 0)
    return p if uses_y else p.restrict(list(range(n)))


@dataclass(frozen=True)
class RunConfig:
    primes: tuple[int, ...] = PRIMES
    degree_bound: int | None = None
    max_subsets: int = 1 << 20
    max_minors: int = 5000
    tol: float = 1e-10
    seed: int = 0
    starts: int = 3
    witness: str | None = None
    timing: bool = False
    trace: str | None = None

    def to_dict(self) -> dict:
        return {
            "primes": list(self.primes),
            "degree_bound": self.degree_bound,
            "max_subsets": self.max_subsets,
            "max_minors": self.max_minors,
            "tol": self.tol,
            "seed": self.seed,
            "starts": self.starts,
        }


@dataclass
class _Report:
    command: str
    parsed: ParsedSpec
    config: RunConfig
    sections: dict = field(default_factory=dict)
    verdicts: list = field(default_factory=list)
    contradictions: list = field(default_factory=list)
    failures: list = field(default_factory=list)
    timing: dict = field(default_factory=dict)

    def verdict(self, claim: str, value, provenance: str, source: str) -> None:
        self.verdicts.append({"claim": claim, "value": value, "provenance": provenance, "source": source})

    def exit_code(self) -> int:
        if self.contradictions:
            return EXIT_INCONSISTENT
        return EXIT_FAILURE if self.failures else EXIT_OK

    def to_dict(self) -> dict:
        out = {
            "command": self.command,
            "spec": self.parsed.document,
            "description": self.parsed.spec.describe(),
            "config": self.config.to_dict(),
            "results": self.sections,
            "verdicts": self.verdicts,
            "consistency": {
                "consistent": not self.contradictions,
                "contradictions": self.contradictions,
                "failures": self.failures,
            },
            "exit_code": self.exit_code(),
        }
        if self.config.timing:
            out["timing"] = self.timing
        return out


def _semisimple(spec: RepSpec) -> bool:
    if spec.group == "sl2" or spec.group in ("sl", "sp"):
        return True
    return spec.group == "so" and spec.n >= 3


def _limits(cfg: RunConfig) -> KoszulLimits:
    return KoszulLimits(max_minors=cfg.max_minors)


def _oracle(rep: _Report) -> OracleVerdict:
    ov = oracle_verdict(rep.parsed.spec)
    rep.sections["oracle"] = ov.to_dict()
    if ov.applicable:
        rep.verdict("one_large", ov.one_large, "oracle", ov.source)
    return ov


def _analyze(rep: _Report) -> None:
    spec, cfg = rep.parsed.spec, rep.config
    ov = _oracle(rep)
    if spec.group != "torus":
        return
    lr = largeness_verdict(spec.weights, max_subsets=cfg.max_subsets)
    rep.sections["torus"] = lr.to_dict()
    rep.verdict("one_large", lr.one_large, "combinatorial", "torus:fpig+modularity")
    rep.verdict("stable", lr.stable, "combinatorial", "torus:exact-lp")
    rep.verdict("max_modular", lr.max_modular, "combinatorial", "torus:strata")
    if ov.applicable and ov.one_large != lr.one_large:
        rep.contradictions.append(
            f"stability ({ov.one_large}) disagrees with FPIG + 1-modular ({lr.one_large})"
        )


def _default_degree_bound(n: int, k: int, max_slice: int) -> int:
    """Largest d <= 2k + 4 whose Koszul slices all fit under ``max_slice``."""
    def fits(d):
        return all(
            comb(k, i) * comb(2 * n + d - 2 * i - 1, d - 2 * i) <= max_slice
            for i in range(min(k, d // 2) + 1)
        )
    d = 2 * k + 4
    while d > 0 and not fits(d):
        d -= 1
    return d


def _koszul(rep: _Report) -> None:
    spec, cfg = rep.parsed.spec, rep.config
    action = realize(spec)
    witness = rep.parsed.witness if cfg.witness is None else cfg.witness
    w = parse_witness(witness, action.dim_v) if witness else None
    d_max = cfg.degree_bound
    if d_max is None:
        limits = _limits(cfg)
        d_max = _default_degree_bound(action.dim_v, action.dim_g, limits.max_slice)
        if d_max < 2 * action.dim_g + 4:
            rep.sections["koszul_degree_bound"] = f"default lowered to {d_max} to respect the slice cap"
    cert = koszul_certificate(action, d_max, w, cfg.primes, _limits(cfg), seed=cfg.seed)
    rep.sections["koszul"] = cert.to_dict()
    rep.verdict("complete_intersection", cert.is_complete_intersection, "symbolic", "groebner:dimension")
    if cert.fd is not None:
        rep.verdict("fd_max", cert.fd.max_d, "symbolic", "groebner:minor-ideals")
    else:
        rep.failures.append("(F_d) not computed within the minor cap")
    if cert.homology_table is None:
        rep.failures.append("Koszul homology not computed within the slice caps")
    elif cert.is_complete_intersection and not cert.homology_vanishes():
        rep.contradictions.append("complete intersection with nonzero higher Koszul homology")
    if cert.component_evidence is not None:
        rep.verdict("reducible", cert.component_evidence.reducible, "symbolic", "groebner:saturation")
    if cert.homology_table is not None:
        m = moment_components(action)
        d_top = max((d for _, d, _ in cert.homology_table), default=0)
        checks = euler_checks(m, range(d_top + 1), cfg.primes[0], _limits(cfg))
        rep.sections["euler"] = [{"degree": c["degree"], "ok": c["ok"]} for c in checks]
        bad = [c["degree"] for c in checks if not c["ok"]]
        if bad:
            rep.contradictions.append(f"Euler characteristic identity fails in degrees {bad}")


def _flow(rep: _Report) -> None:
    spec, cfg = rep.parsed.spec, rep.config
    action = realize(spec)
    fc = FlowConfig(tol=cfg.tol, trace=cfg.trace is not None)
    rng = np.random.default_rng(cfg.seed)
    mi = moment_components(action)
    runs, results = [], []
    for s in range(cfg.starts):
        n = action.dim_v
        v0 = rng.standard_normal(n) + 1j * rng.standard_normal(n)
        res = kempf_ness_flow(action, v0, fc)
        results.append(res)
        entry = res.summary()
        if res.converged:
            entry["rank"] = rank_sample(action, res.vector)
            entry["membership"] = membership_check(action, res.vector, mi)
            if entry["membership"] > 10 * cfg.tol:
                rep.contradictions.append(f"start {s}: converged but |mu| = {entry['membership']:.3e}")
        runs.append(entry)
    rep.sections["flow"] = {"k": action.dim_g, "runs": runs}
    ranks = [r["rank"] for r in runs if "rank" in r]
    rep.verdict("max_rank_on_kempf_ness_set", max(ranks) if ranks else None, "numeric", "kempf-ness flow")
    if cfg.trace:
        with open(cfg.trace, "w", newline="") as fh:
            fh.write("start,iteration,norm_squared,rho_norm\n")
            for s, res in enumerate(results):
                for it, f, r in res.trace:
                    fh.write(f"{s},{it},{f!r},{r!r}\n")


def _verify(rep: _Report) -> None:
    spec, cfg = rep.parsed.spec, rep.config
    _analyze(rep)
    _koszul(rep)
    action = realize(spec)
    ov = oracle_verdict(spec)
    kz = rep.sections["koszul"]
    if spec.group == "torus":
        lr = rep.sections["torus"]
        regular = kz["is_complete_intersection"]
        zero_modular = lr["max_modular"] is not None
        if regular != zero_modular:
            rep.contradictions.append(
                f"regular sequence ({regular}) disagrees with 0-modularity ({zero_modular})"
            )
        fd = kz["fd"]
        if fd is not None and lr["locally_free"] and fd["max_d"] != lr["max_modular"]:
            rep.contradictions.append(
                f"largest d with (F_d) is {fd['max_d']} but max modularity is {lr['max_modular']}"
            )
    if ov.applicable:
        cons = one_large_consistency(
            action, bool(ov.one_large), _semisimple(spec), cfg.primes, _limits(cfg), seed=cfg.seed,
        )
        rep.sections["one_large_consistency"] = cons.to_dict()
        rep.contradictions.extend(cons.contradictions)
    _flow(rep)


_DISPATCH = {"analyze": _analyze, "koszul": _koszul, "flow": _flow, "verify": _verify}


def run(command: str, parsed: ParsedSpec, config: RunConfig = RunConfig()) -> tuple[dict, int]:
    """Execute one command; return the report and its exit code."""
    if command not in _DISPATCH:
        raise ValueError(f"unknown command {command!r}")
    rep = _Report(command, parsed, config)
    t0 = time.perf_counter()
    try:
        _DISPATCH[command](rep)
    except PrimeDisagreementError as exc:
        rep.contradictions.append(f"primes disagree: {exc}")
    except (ResourceLimitError, ModulusError) as exc:
        rep.failures.append(f"{type(exc).__name__}: {exc}")
    except SpecError as exc:
        rep.failures.append(f"SpecError: {exc}")
    rep.timing["seconds"] = round(time.perf_counter() - t0, 3)
    return rep.to_dict(), rep.exit_code()


def _load(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    with open(path) as fh:
        return fh.read()


def _one(job: tuple[str, str, str, RunConfig]) -> tuple[dict, int]:
    command, source, text, cfg = job
    try:
        parsed = parse_spec(text)
    except SpecError as exc:
        return {"command": command, "input": source, "error": str(exc), "exit_code": EXIT_FAILURE}, EXIT_FAILURE
    return run(command, parsed, cfg)


def _check_prime(p: int) -> int:
    if p < 3 or p >= 2 ** 31 or not sympy.isprime(p):
        raise ModulusError(f"{p} is not an odd prime below 2^31")
    return p


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="largeness", description="Largeness verdicts and certificates.")
    ap.add_argument("command", choices=COMMANDS)
    ap.add_argument("specs", nargs="+", help="JSON spec files, '-' for stdin")
    ap.add_argument("--prime", type=int, default=PRIMES[0])
    ap.add_argument("--second-prime", type=int, default=PRIMES[1])
    ap.add_argument("--degree-bound", type=int, default=None, help="max internal degree (default 2k+4)")
    ap.add_argument("--max-subsets", type=int, default=1 << 20)
    ap.add_argument("--max-minors", type=int, default=5000)
    ap.add_argument("--tol", type=float, default=1e-10)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--starts", type=int, default=3, help="random starts for flow")
    ap.add_argument("--witness", default=None, help="polynomial for the saturation test")
    ap.add_argument("--trace", default=None, help="CSV file for flow traces")
    ap.add_argument("--timing", action="store_true", help="include wall-clock timing in reports")
    ap.add_argument("--jobs", type=int, default=1, help="specs processed in parallel")
    ap.add_argument("--output", "-o", default=None)
    return ap


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        primes = (_check_prime(args.prime), _check_prime(args.second_prime))
        if primes[0] == primes[1]:
            raise ModulusError("the two primes must differ")
        cfg = RunConfig(
            primes=primes, degree_bound=args.degree_bound, max_subsets=args.max_subsets,
            max_minors=args.max_minors, tol=args.tol, seed=args.seed, starts=args.starts,
            witness=args.witness, timing=args.timing, trace=args.trace,
        )
        FlowConfig(tol=cfg.tol)
        jobs = [(args.command, s, _load(s), cfg) for s in args.specs]
    except (LargenessError, ValueError, OSError) as exc:
        print(f"largeness: {exc}", file=sys.stderr)
        return EXIT_FAILURE
    if len(jobs) > 1 and args.trace:
        jobs = [(c, s, t, replace(cf, trace=f"{args.trace}.{i}")) for i, (c, s, t, cf) in enumerate(jobs)]
    if args.jobs > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=args.jobs) as ex:
            outcomes = list(ex.map(_one, jobs))
    else:
        outcomes = [_one(j) for j in jobs]
    reports = [r for r, _ in outcomes]
    payload = reports[0] if len(reports) == 1 else reports
    text = json.dumps(payload, indent=2, sort_keys=True, default=str) + "\n"
    if args.output:
        with open(args.output, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    codes = [c for _, c in outcomes]
    if EXIT_INCONSISTENT in codes:
        return EXIT_INCONSISTENT
    return EXIT_FAILURE if EXIT_FAILURE in codes else EXIT_OK
