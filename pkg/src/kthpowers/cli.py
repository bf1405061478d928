"""Command-line entry point: ``kthpowers {tables,theorems,bound,oracle}``."""

from __future__ import annotations

import argparse
import math
import sys
import time
from typing import Optional, Sequence

from . import oracle, report, search
from .constants import CATALOG
from .engine import (GENERIC, LARGE_K, BoundConfig, FixedZ, PointwiseZhat, bound_breakdown,
                     certificate_report, precheck, regime_for)
from .errors import BoundsError, PreconditionError


def parse_k_range(text: str) -> list[int]:
    """``86..90``, ``70`` or ``65,70,75`` (items may mix both forms)."""
    out = []
    for part in text.split(","):
        part = part.strip()
        if ".." in part:
            a, b = (int(s) for s in part.split("..", 1))
            step = 1 if b >= a else -1
            out.extend(range(a, b + step, step))
        elif part:
            out.append(int(part))
    if not out:
        raise argparse.ArgumentTypeError("empty k range")
    return out


def _emit(text: str, out: Optional[str]) -> None:
    if out:
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--format", choices=("json", "csv"), default="json")
    p.add_argument("--out", metavar="PATH")
    p.add_argument("--strict", action="store_true", help="enforce T >= H_R as a hard precondition")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="kthpowers",
        description="Explicit bounds for primes between consecutive k-th powers.")
    sub = parser.add_subparsers(dest="command", required=True)

    t = sub.add_parser("tables", help="recompute threshold tables and diff them")
    t.add_argument("mode", choices=("a", "b", "z"))
    t.add_argument("--k", type=parse_k_range, default=list(range(90, 64, -1)))
    t.add_argument("--c-source", choices=("table", "optimize"), default="table",
                   help="inject the tabulated c values or search for c")
    t.add_argument("--eps-step", type=float, default=search.DEFAULT_EPS_STEP)
    t.add_argument("--z-step", type=float, default=search.DEFAULT_Z_STEP)
    t.add_argument("--stall-limit", type=int, default=search.DEFAULT_STALL_LIMIT)
    t.add_argument("--rounding-inflation", type=float, default=1e-9)
    t.add_argument("--diff-paper", action=argparse.BooleanOptionalAction, default=True,
                   help="compare each row against the embedded tables")
    _common(t)

    th = sub.add_parser("theorems", help="coverage verdicts and derived constants")
    _common(th)

    b = sub.add_parser("bound", help="evaluate the bound at one point")
    b.add_argument("--k", type=int, required=True)
    b.add_argument("--c", type=float, required=True)
    b.add_argument("--sigma1", type=float, required=True)
    b.add_argument("--shape", choices=("kln", "bellotti"), default="kln")
    b.add_argument("--z", default="zhat", help="'zhat' or a fixed positive number")
    b.add_argument("--logx", type=float, required=True)
    b.add_argument("--regime", choices=("auto", "generic", "large-k"), default="auto")
    b.add_argument("--rounding-inflation", type=float, default=1e-9)
    _common(b)

    o = sub.add_parser("oracle", help="desk-scale prime checks")
    osub = o.add_subparsers(dest="oracle_command", required=True)
    for name in ("theta", "psi"):
        q = osub.add_parser(name)
        q.add_argument("--x", type=int, required=True)
        _common(q)
    q = osub.add_parser("interval")
    q.add_argument("--lo", type=int, required=True)
    q.add_argument("--hi", type=int, required=True)
    q.add_argument("--rounds", type=int, default=20)
    q.add_argument("--budget", type=int, default=1_000_000)
    _common(q)
    q = osub.add_parser("cubes")
    q.add_argument("--nmax", type=int, required=True)
    _common(q)
    return parser


def _simple_payload(kind: str, body: dict) -> dict:
    return {"schema_version": report.SCHEMA_VERSION, "kind": kind,
            "generated_at": time.strftime("%Y-%m-%dT%H:%M:%SZ", time.gmtime()), **body}


def _emit_mapping(kind: str, body: dict, args) -> None:
    payload = _simple_payload(kind, body)
    if args.format == "csv":
        flat = {k: v for k, v in payload.items() if not isinstance(v, (dict, list))}
        lines = ["key,value"] + [f"{k},{v}" for k, v in sorted(flat.items())]
        _emit("\n".join(lines) + "\n", args.out)
    else:
        _emit(report.to_json(payload), args.out)


def cmd_tables(args) -> int:
    cfg = report.RunConfig(eps_step=args.eps_step, z_step=args.z_step,
                           stall_limit=args.stall_limit,
                           rounding_inflation=args.rounding_inflation,
                           strict_preconditions=args.strict, output_format=args.format,
                           output_path=args.out, c_source=args.c_source)
    records = report.tables_records(args.mode, args.k, cfg)
    if not args.diff_paper:
        records = [r if r.status in ("ERROR", "INFEASIBLE") else
                   report.ReportRecord(**{**r.__dict__, "status": "COMPUTED"}) for r in records]
    if args.format == "csv":
        _emit(report.to_csv(records), args.out)
    else:
        _emit(report.to_json(report.records_payload(f"tables-{args.mode}", records, cfg)),
              args.out)
    for r in records:
        print(f"{r.mode} k={r.k}: {r.status}", file=sys.stderr)
    if not args.diff_paper:
        return report.EXIT_ERROR if any(r.status in ("ERROR", "INFEASIBLE")
                                        for r in records) else report.EXIT_OK
    return report.exit_code(records)


def cmd_theorems(args) -> int:
    _emit_mapping("theorems", report.theorems_report(), args)
    return report.EXIT_OK


def _bound_config(args) -> BoundConfig:
    shape = CATALOG.kln if args.shape == "kln" else CATALOG.bellotti
    z_policy = PointwiseZhat() if args.z == "zhat" else FixedZ(float(args.z))
    alpha = args.c / args.k
    regime = {"auto": regime_for(args.k, alpha), "generic": GENERIC,
              "large-k": LARGE_K}[args.regime]
    return BoundConfig(k=args.k, c=args.c, sigma1=args.sigma1, z_policy=z_policy, shape=shape,
                       regime=regime, inflation=args.rounding_inflation)


def cmd_bound(args) -> int:
    config = _bound_config(args)
    pre = precheck(args.logx, config, args.strict)
    body = {"k": args.k, "c": args.c, "sigma1": args.sigma1, "shape": args.shape,
            "regime": config.regime.name, "log_x": args.logx,
            "precheck": [{"code": v.code, "message": v.message, "warning": v.warning}
                         for v in pre.violations]}
    if not pre.ok:
        body["refused"] = True
        _emit_mapping("bound", body, args)
        for v in pre.errors:
            print(f"precheck violation {v.code}: {v.message}", file=sys.stderr)
        return 1
    bd = bound_breakdown(args.logx, config, args.strict)
    cert = certificate_report(args.logx, config, args.strict)
    body.update({
        "terms": dict(zip(("zero_main", "b3", "b1", "perron", "psi_half", "psi_third"),
                          bd.terms)),
        "total": bd.total, "guarantees_prime": bd.total < 1, "log_2t": bd.log_2t,
        "nu_2t": bd.nu_2t, "z": bd.z, "density": bd.shape,
        "certificate": {"ok": cert.ok, "z": cert.z, "majorant_total": cert.majorant_total,
                        "valid_until_log_x": "inf" if math.isinf(cert.valid_until_log_x)
                        else cert.valid_until_log_x,
                        "checks": [list(c) for c in cert.checks]}})
    _emit_mapping("bound", body, args)
    return report.EXIT_OK


def cmd_oracle(args) -> int:
    t0 = time.perf_counter()
    sub = args.oracle_command
    if sub in ("theta", "psi"):
        fn = oracle.theta_exact if sub == "theta" else oracle.psi_exact
        body = {"x": args.x, sub: fn(args.x)}
    elif sub == "interval":
        w = oracle.prime_in_interval(args.lo, args.hi, rounds=args.rounds, budget=args.budget)
        body = {"lo": str(args.lo), "hi": str(args.hi),
                "witness": None if w is None else str(w.value),
                "probable": None if w is None else w.probable}
    else:
        r = oracle.cubes_check(args.nmax)
        body = {"n_max": r.n_max, "checked": r.checked, "failures": list(r.failures),
                "ok": r.ok, "largest_offset": r.largest_offset}
    body["seconds"] = round(time.perf_counter() - t0, 3)
    _emit_mapping(f"oracle-{sub}", body, args)
    return report.EXIT_OK


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    handler = {"tables": cmd_tables, "theorems": cmd_theorems, "bound": cmd_bound,
               "oracle": cmd_oracle}[args.command]
    try:
        return handler(args)
    except PreconditionError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except (BoundsError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return report.EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
