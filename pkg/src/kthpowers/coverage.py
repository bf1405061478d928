"""Medium-range coverage from short-interval results, and the end-to-end verdicts.

A pair ``(x0, Delta)`` guarantees a prime in ``(x(1 - 1/Delta), x]`` for
``x >= x0``; that interval sits inside ``(x, x + k x^(1-1/k)]`` as long as
``log x <= k log(k Delta (1 - 1/Delta)^2)``.  Pairs are chained from
``x = 4e18`` upward, each usable once coverage has reached its ``x0``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Optional, Sequence

import mpmath

from . import fixtures
from .constants import CATALOG, zhat_upper
from .engine import FixedZ, certificate_report, config_kln, nu
from .errors import BoundsError, DomainError, NotFoundError
from .search import DEFAULT_Z_STEP, minimal_Z, xhat, xhat_computed

LOG_CHAIN_FLOOR = math.log(4e18)
LOG_REDUCTION_FLOOR = math.log(3.68e19)


@dataclass(frozen=True)
class DeltaEntry:
    log_x0: float
    delta: float

    def __post_init__(self):
        if not self.delta > 1:
            raise DomainError("Delta must exceed 1")


DELTA_TABLE = tuple(DeltaEntry(r.log_x0_value, float(r.delta)) for r in fixtures.TABLE3)


@dataclass(frozen=True)
class CoverageChain:
    k: int
    segments: tuple[tuple[float, float, float], ...]
    max_log_x: float
    floor_log_x: float = LOG_CHAIN_FLOOR


def segment_max(k: int, delta: float) -> float:
    """Largest ``log x`` at which a ``Delta`` short interval fits inside ``(x, x + h]``."""
    if delta <= 1:
        raise DomainError("segment_max needs Delta > 1")
    if k < 1:
        raise DomainError("segment_max needs k >= 1")
    return k * (math.log(k) + math.log(delta) + 2 * math.log1p(-1 / delta))


def chain_coverage(k: int, table: Sequence[DeltaEntry] = DELTA_TABLE) -> CoverageChain:
    if not table:
        raise DomainError("EMPTY_TABLE: no short-interval pairs supplied")
    entries = sorted(table, key=lambda e: (e.log_x0, e.delta))
    reach = LOG_CHAIN_FLOOR
    segments = []
    for entry in entries:
        if entry.log_x0 > reach:
            break
        top = segment_max(k, entry.delta)
        if top > reach:
            segments.append((max(entry.log_x0, LOG_CHAIN_FLOOR), top, entry.delta))
            reach = top
    if not segments:
        return CoverageChain(k, (), LOG_CHAIN_FLOOR)
    return CoverageChain(k, tuple(segments), reach)


# ---------------------------------------------------------------------------
# tail cover


@dataclass(frozen=True)
class TailSegment:
    """``[lo, hi]`` in ``log x`` covered with a fixed ``c`` and the constant ``z``."""

    lo: int
    hi: float
    c: float
    z: float


def segment_certified(k: int, c: float, lo: int, hi: float) -> Optional[float]:
    """Certify the bound below 1 on ``[lo, hi]`` with ``c`` fixed.

    Over the heights ``[alpha lo, alpha hi]`` the zero-free constant never
    exceeds ``zhat_upper``; the bound grows with ``Z``, so a monotone
    certificate at ``lo`` with that constant covers the whole segment.
    Returns the constant used, or ``None``.
    """
    a = c / k
    try:
        z = zhat_upper(a * lo, a * hi)
        if certificate_report(lo, config_kln(k, c, z_policy=FixedZ(z))).ok:
            return z
    except BoundsError:
        pass
    return None


def find_tail_cover(k: int, start: int, c_step: float = 1e-4, c_max: float = 1.5,
                    max_segments: int = 50) -> tuple[TailSegment, ...]:
    """Greedy cover of ``[start, inf)`` by certified fixed-``c`` segments.

    At each start the ``c`` grid is scanned for the farthest certified reach;
    the first ``c`` that reaches infinity ends the cover.  The search bound
    ``c_max`` only limits the witness search: every returned segment is
    certified on its own.
    """
    lo, out = start, []
    n_max = int((c_max - 1) / c_step)
    while len(out) < max_segments:
        best = None
        for i in range(1, n_max + 1):
            c = round(1 + i * c_step, 10)
            if c / k >= 0.1 or segment_certified(k, c, lo, lo + 1) is None:
                continue
            z_inf = segment_certified(k, c, lo, math.inf)
            if z_inf is not None:
                return tuple(out) + (TailSegment(lo, math.inf, c, z_inf),)
            if best is not None and segment_certified(k, c, lo, best[0] + 1) is None:
                continue
            good, bad = lo + 1, 2 * lo
            while segment_certified(k, c, lo, bad) is not None:
                good, bad = bad, 2 * bad
            while bad - good > 1:
                mid = (good + bad) // 2
                if segment_certified(k, c, lo, mid) is not None:
                    good = mid
                else:
                    bad = mid
            if best is None or good > best[0]:
                best = (good, c)
        if best is None:
            raise NotFoundError(f"no certified segment from log x = {lo} for k={k}")
        hi, c = best
        out.append(TailSegment(lo, hi, c, segment_certified(k, c, lo, hi)))
        lo = hi
    raise NotFoundError(f"tail cover for k={k} exceeded {max_segments} segments")


def verify_tail_cover(k: int, start: float, segments: Sequence[TailSegment]) -> bool:
    """Segments are contiguous from ``start``, end at infinity, and each is certified."""
    if not segments or segments[0].lo > start or not math.isinf(segments[-1].hi):
        return False
    for prev, nxt in zip(segments, segments[1:]):
        if nxt.lo > prev.hi:
            return False
    return all(segment_certified(k, s.c, s.lo, s.hi) is not None for s in segments)


@lru_cache(maxsize=None)
def tail_cover(k: int) -> tuple[TailSegment, ...]:
    return find_tail_cover(k, math.floor(chain_coverage(k).max_log_x))


# ---------------------------------------------------------------------------
# verdicts


@dataclass(frozen=True)
class Verdict:
    k: int
    status: str
    chain_max: float
    xhat: int
    gap_lo: Optional[float] = None
    gap_hi: Optional[float] = None
    tail: tuple[TailSegment, ...] = ()
    notes: tuple[str, ...] = field(default=())


def theorem_unconditional(k: int, xhat_value: int | None = None,
                          require_tail: bool = True) -> Verdict:
    """HOLDS when the chain reaches the unconditional threshold, else GAP.

    A threshold alone guarantees the bound below 1 only at ``xhat`` itself
    (for ``k >= 86`` it rises above 1 right after), so with ``require_tail`` a
    certified cover from the end of the chain to infinity is also required.
    """
    if not 65 <= k <= 90:
        raise DomainError("theorem_unconditional covers 65 <= k <= 90")
    chain = chain_coverage(k)
    x = xhat_computed(k) if xhat_value is None else xhat_value
    notes = []
    if LOG_REDUCTION_FLOOR < chain.floor_log_x:
        return Verdict(k, "GAP", chain.max_log_x, x, LOG_REDUCTION_FLOOR, chain.floor_log_x,
                       notes=("reduction floor below chain floor",))
    if x > chain.max_log_x:
        return Verdict(k, "GAP", chain.max_log_x, x, chain.max_log_x, x)
    tail: tuple[TailSegment, ...] = ()
    if require_tail:
        try:
            tail = tail_cover(k)
        except NotFoundError as exc:
            return Verdict(k, "GAP", chain.max_log_x, x, chain.max_log_x, math.inf,
                           notes=(f"no certified tail: {exc}",))
        start = math.floor(chain.max_log_x)
        if not verify_tail_cover(k, start, tail):
            return Verdict(k, "GAP", chain.max_log_x, x, chain.max_log_x, math.inf,
                           notes=("tail cover failed verification",))
        notes.append(f"tail from log x = {start} certified in {len(tail)} segment(s)")
    return Verdict(k, "HOLDS", chain.max_log_x, x, tail=tail, notes=tuple(notes))


def sequence_gap_N(k: int, gap_lo_log: float, gap_hi_log: float, dps: int = 30) -> mpmath.mpf:
    """``exp(gap_hi / k) - exp(gap_lo / k)`` as a multiprecision float."""
    if not gap_lo_log < gap_hi_log:
        raise DomainError("sequence_gap_N needs gap_lo_log < gap_hi_log")
    with mpmath.workdps(dps):
        return +(mpmath.exp(mpmath.mpf(gap_hi_log) / k) - mpmath.exp(mpmath.mpf(gap_lo_log) / k))


def log10_sequence_gap_N(k: int, gap_lo_log: float, gap_hi_log: float) -> float:
    with mpmath.workdps(30):
        return float(mpmath.log10(sequence_gap_N(k, gap_lo_log, gap_hi_log)))


def rect_region(z: float, log_t_hi: float) -> tuple[float, float]:
    """Rectangle ``[sigma_min, 1] x [H_R, T]`` containing the Littlewood-form region."""
    log_hr = CATALOG.profile.log_riemann_height
    if not log_t_hi > log_hr:
        raise DomainError("rect_region needs log_t_hi > log H_R")
    return 1 - nu(log_hr, z), log_t_hi


@dataclass(frozen=True)
class ConditionalResult:
    k: int
    z: float
    x_z: int
    c: float
    log_t: Optional[float]
    target_log_x: int
    side_condition: bool
    flags: tuple[str, ...] = ()


def ceil_decimals(value: float, places: int = 3) -> float:
    scale = 10 ** places
    return math.ceil(round(value * scale, 6)) / scale


def theorem_conditional(k: int, c: float | None = None, z_step: float = DEFAULT_Z_STEP,
                        xhat_value: int | None = None, **search_kw) -> ConditionalResult:
    """Largest admissible ``z_k`` and the height ``log T_k`` it must be verified to.

    ``log T_k = xhat c_Z / k`` rounded up at the third decimal, with ``xhat``
    the tabulated unconditional threshold unless ``xhat_value`` is given.
    """
    if not 65 <= k <= 90:
        raise DomainError("theorem_conditional covers 65 <= k <= 90")
    target = math.floor(chain_coverage(k).max_log_x)
    res = minimal_Z(k, target, z_step=z_step, c=c, **search_kw)
    x = xhat(k) if xhat_value is None else xhat_value
    log_t = None if k >= 86 else ceil_decimals(x * res.c / k)
    flags = []
    t1 = fixtures.table1_row(k)
    if t1 is not None and abs(float(t1.z) - res.z) > z_step / 2:
        flags.append(f"computed z {res.z:.3f} differs from headline value {t1.z}")
    t4 = fixtures.table4_row(k)
    if abs(float(t4.z) - res.z) > z_step / 2:
        flags.append(f"computed z {res.z:.3f} differs from tabulated value {t4.z}")
    return ConditionalResult(k, res.z, res.x_z, res.c, log_t, target,
                             side_condition=res.x_z <= chain_coverage(k).max_log_x,
                             flags=tuple(flags))

