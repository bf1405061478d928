"""Report records, diffing against the embedded tables, and JSON/CSV emission."""

from __future__ import annotations

import csv
import hashlib
import io
import json
import math
import time
from dataclasses import asdict, dataclass, field, fields
from typing import Iterable, Optional, Sequence

import mpmath

from . import coverage, fixtures, search
from .engine import DEFAULT_INFLATION, bound_breakdown
from .errors import BoundsError, DomainError, InfeasibleError

SCHEMA_VERSION = 1
EXIT_OK, EXIT_MISMATCH, EXIT_ERROR = 0, 2, 3
OK_STATUSES = ("MATCH", "IMPROVED", "FLAGGED", "NOT_TABULATED", "UNLISTED")


@dataclass(frozen=True)
class RunConfig:
    eps_step: float = search.DEFAULT_EPS_STEP
    z_step: float = search.DEFAULT_Z_STEP
    stall_limit: int = search.DEFAULT_STALL_LIMIT
    rounding_inflation: float = DEFAULT_INFLATION
    strict_preconditions: bool = False
    output_format: str = "json"
    output_path: Optional[str] = None
    c_source: str = "table"

    def __post_init__(self):
        if self.eps_step <= 0 or self.z_step <= 0 or self.stall_limit <= 0:
            raise DomainError("steps and stall limit must be positive")
        if not 0 <= self.rounding_inflation <= 1e-6:
            raise DomainError("rounding inflation must lie in [0, 1e-6]")
        if self.output_format not in ("json", "csv"):
            raise DomainError("output format must be json or csv")
        if self.c_source not in ("table", "optimize"):
            raise DomainError("c source must be table or optimize")


@dataclass(frozen=True)
class ReportRecord:
    k: int
    mode: str
    c: Optional[float] = None
    z: Optional[float] = None
    threshold_logx: Optional[int] = None
    required_logT: Optional[float] = None
    status: str = ""
    terms_at_threshold: Optional[tuple[float, ...]] = None
    certified: Optional[bool] = None
    expected: Optional[str] = None
    notes: tuple[str, ...] = field(default=())


# ---------------------------------------------------------------------------
# tables


def _threshold_status(expected: Optional[int], got: int) -> str:
    if expected is None:
        return "UNLISTED"
    if abs(got - expected) <= 1:
        return "MATCH"
    if got < expected:
        return "IMPROVED"
    return f"MISMATCH(expected={expected}, got={got})"


def _terms(k, mode, c, z, log_x, cfg: RunConfig):
    config = search.make_config(k, mode, c, z, inflation=cfg.rounding_inflation)
    return bound_breakdown(log_x, config, cfg.strict_preconditions).terms


def _row_ab(k: int, mode: str, cfg: RunConfig) -> ReportRecord:
    row = fixtures.table2_row(k) if 65 <= k <= 90 else None
    exp_x = None if row is None else (row.x_a if mode == "A" else row.x_b)
    exp_c = None if row is None else (row.c_a if mode == "A" else row.c_b)
    expected = None if row is None else (
        "-" if exp_x is None else f"x={exp_x} c={exp_c}")
    if mode == "B" and search.c_cap(k, "B") <= 1:
        status = "MATCH" if (row is not None and exp_x is None) else "INFEASIBLE"
        return ReportRecord(k, mode, status=status, expected=expected,
                            notes=("INFEASIBLE: 1/k >= 1 - sigma1",))
    if cfg.c_source == "table":
        if exp_c is None:
            return ReportRecord(k, mode, status="NOT_TABULATED", expected=expected)
        c = float(exp_c)
        t = search.minimal_threshold(search.make_config(k, mode, c), strict=cfg.strict_preconditions)
    else:
        c, t = search.optimize_c(k, mode, cfg.eps_step, cfg.stall_limit,
                                 strict=cfg.strict_preconditions)
    config = search.make_config(k, mode, c)
    certified = search.certify(config, t, cfg.strict_preconditions)
    notes = []
    if not certified:
        notes.append("bound below 1 at the threshold but not certified for all larger x")
    return ReportRecord(k, mode, c=c, threshold_logx=t, status=_threshold_status(exp_x, t),
                        terms_at_threshold=_terms(k, mode, c, None, t, cfg),
                        certified=certified, expected=expected, notes=tuple(notes))


def _row_z(k: int, cfg: RunConfig) -> ReportRecord:
    row = fixtures.table4_row(k)
    expected = f"z={row.z} x={row.x_z} c={row.c_z} T={row.required_log_t or '-'}"
    target = math.floor(coverage.chain_coverage(k).max_log_x)
    c = float(row.c_z) if cfg.c_source == "table" else None
    res = search.minimal_Z(k, target, cfg.z_step, c=c, eps_step=cfg.eps_step,
                           stall_limit=cfg.stall_limit, strict=cfg.strict_preconditions)
    req = search.required_log_t(k, res.c, search.xhat(k))
    notes = [f"target log x = {target}"]
    if k <= 85:
        recomputed = search.required_log_t(k, res.c, search.xhat_computed(k))
        notes.append(f"required log T with recomputed xhat = {recomputed:.5f}")
    ok_z = abs(res.z - float(row.z)) <= cfg.z_step + 1e-9
    ok_x = abs(res.x_z - row.x_z) <= 1
    ok_t = (req is None) == (row.required_log_t is None) and (
        req is None or abs(req - float(row.required_log_t)) <= 5e-4)
    if ok_z and ok_x and ok_t:
        status = "MATCH"
    elif res.z > float(row.z) + cfg.z_step and res.x_z <= target:
        status = "IMPROVED"
    else:
        status = (f"MISMATCH(expected=({row.z}, {row.x_z}, {row.required_log_t}), "
                  f"got=({res.z:.3f}, {res.x_z}, {req if req is None else round(req, 5)}))")
    t1 = fixtures.table1_row(k)
    if t1 is not None and t1.z != row.z:
        notes.append(f"headline z_k = {t1.z} disagrees with tabulated {row.z}; "
                     f"computed {res.z:.3f}")
        if not status.startswith("MISMATCH"):
            status = "FLAGGED"
    config = search.make_config(k, "Z", res.c, res.z)
    return ReportRecord(k, "Z", c=res.c, z=res.z, threshold_logx=res.x_z, required_logT=req,
                        status=status, terms_at_threshold=_terms(k, "Z", res.c, res.z, res.x_z, cfg),
                        certified=search.certify(config, res.x_z, cfg.strict_preconditions),
                        expected=expected, notes=tuple(notes))


def tables_records(mode: str, ks: Iterable[int], cfg: RunConfig = RunConfig()) -> list[ReportRecord]:
    mode = mode.upper()
    if mode not in search.MODES:
        raise DomainError(f"unknown mode {mode!r}")
    out = []
    for k in ks:
        try:
            out.append(_row_z(k, cfg) if mode == "Z" else _row_ab(k, mode, cfg))
        except InfeasibleError as exc:
            out.append(ReportRecord(k, mode, status="INFEASIBLE", notes=(str(exc),)))
        except (BoundsError, KeyError) as exc:
            out.append(ReportRecord(k, mode, status="ERROR", notes=(f"{type(exc).__name__}: {exc}",)))
    return out


def exit_code(records: Sequence[ReportRecord]) -> int:
    if any(r.status in ("ERROR", "INFEASIBLE") for r in records):
        return EXIT_ERROR
    if any(r.status not in OK_STATUSES for r in records):
        return EXIT_MISMATCH
    return EXIT_OK


# ---------------------------------------------------------------------------
# theorems


def _finite(x):
    return "inf" if isinstance(x, float) and math.isinf(x) else x


def theorems_report(unconditional_ks: Sequence[int] = tuple(range(65, 91)),
                    conditional_ks: Sequence[int] = (85, 80, 75, 70)) -> dict:
    verdicts = []
    for k in unconditional_ks:
        v = coverage.theorem_unconditional(k)
        verdicts.append({
            "k": k, "status": v.status, "chain_max_logx": v.chain_max, "xhat": v.xhat,
            "gap": None if v.status == "HOLDS" else [_finite(v.gap_lo), _finite(v.gap_hi)],
            "tail": [[s.lo, _finite(s.hi), s.c, s.z] for s in v.tail], "notes": list(v.notes)})

    k = 70
    lo = math.floor(coverage.chain_coverage(k).max_log_x)
    row = fixtures.table2_row(k)
    seq = {"k": k, "gap_lo_logx": lo}
    for label, hi in (("xB", row.x_b), ("xA", row.x_a)):
        n = coverage.sequence_gap_N(k, lo, hi)
        seq[f"N_{label}"] = {"gap_hi_logx": hi, "N": mpmath.nstr(n, 10),
                             "log10_N": coverage.log10_sequence_gap_N(k, lo, hi)}

    conditional = []
    for kk in conditional_ks:
        r = coverage.theorem_conditional(kk, c=float(fixtures.table4_row(kk).c_z))
        t1 = fixtures.table1_row(kk)
        conditional.append({
            "k": kk, "z_k": r.z, "log_T_k": r.log_t, "x_z": r.x_z, "c_z": r.c,
            "side_condition": r.side_condition, "target_logx": r.target_log_x,
            "headline": None if t1 is None else {"z_k": t1.z, "log_T_k": t1.log_t},
            "tabulated_z": fixtures.table4_row(kk).z, "flags": list(r.flags)})
    return {"unconditional": verdicts, "sequence_constant": seq, "conditional": conditional}


# ---------------------------------------------------------------------------
# serialisation


def records_payload(kind: str, records: Sequence[ReportRecord], cfg: RunConfig) -> dict:
    return {"schema_version": SCHEMA_VERSION, "kind": kind,
            "generated_at": time.strftime("%Y-%m-%dT%H:%M:%SZ", time.gmtime()),
            "config": asdict(cfg), "fixture_digest": fixtures.digest(),
            "records": [asdict(r) for r in records]}


def to_json(payload: dict) -> str:
    return json.dumps(payload, sort_keys=True, indent=2, allow_nan=False) + "\n"


def payload_digest(payload: dict) -> str:
    """Hash of a payload with the timestamp removed."""
    body = {k: v for k, v in payload.items() if k != "generated_at"}
    return hashlib.sha256(to_json(body).encode()).hexdigest()


def records_from_json(text: str) -> list[ReportRecord]:
    out = []
    for d in json.loads(text)["records"]:
        d = dict(d)
        if d["terms_at_threshold"] is not None:
            d["terms_at_threshold"] = tuple(d["terms_at_threshold"])
        d["notes"] = tuple(d["notes"])
        out.append(ReportRecord(**d))
    return out


CSV_FIELDS = [f.name for f in fields(ReportRecord)]


def to_csv(records: Sequence[ReportRecord]) -> str:
    buf = io.StringIO()
    writer = csv.DictWriter(buf, fieldnames=CSV_FIELDS, lineterminator="\n")
    writer.writeheader()
    for r in records:
        row = asdict(r)
        for key, value in row.items():
            if value is None:
                row[key] = ""
            elif key == "terms_at_threshold":
                row[key] = ";".join(repr(float(t)) for t in value)
            elif key == "notes":
                row[key] = json.dumps(list(value))
            elif isinstance(value, float):
                row[key] = repr(value)
        writer.writerow(row)
    return buf.getvalue()


def records_from_csv(text: str) -> list[ReportRecord]:
    out = []
    for row in csv.DictReader(io.StringIO(text)):
        opt = lambda s, f: None if s == "" else f(s)  # noqa: E731
        out.append(ReportRecord(
            k=int(row["k"]), mode=row["mode"], c=opt(row["c"], float), z=opt(row["z"], float),
            threshold_logx=opt(row["threshold_logx"], int),
            required_logT=opt(row["required_logT"], float), status=row["status"],
            terms_at_threshold=opt(row["terms_at_threshold"],
                                   lambda s: tuple(float(t) for t in s.split(";"))),
            certified=opt(row["certified"], lambda s: s == "True"),
            expected=opt(row["expected"], str), notes=tuple(json.loads(row["notes"]))))
    return out
