"""Minimal integer ``log x`` thresholds and parameter searches over ``c`` and ``Z``.

A threshold is the least integer ``L`` at which the precheck passes and the
bound is below 1.  Whether the bound then stays below 1 for every larger
``log x`` is a separate question answered by :func:`certify`, which records
the result in ``ThresholdRecord.certified``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Optional

from . import fixtures
from .constants import CATALOG, BellottiTable, zhat
from .engine import (SIGMA1_BELLOTTI, SIGMA1_KLN, BoundBreakdown, BoundConfig, FixedZ,
                     bound_breakdown, certificate_report, config_bellotti, config_kln,
                     passes, precheck)
from .errors import DomainError, InfeasibleError, NotFoundError, TableRangeError

MODES = ("A", "B", "Z")
DEFAULT_LOG_X_LO = 1000
DEFAULT_LOG_X_HI = 10 ** 9
DEFAULT_EPS_STEP = 1e-5
DEFAULT_Z_STEP = 1e-3
DEFAULT_STALL_LIMIT = 200


@dataclass(frozen=True)
class ThresholdRecord:
    k: int
    mode: str
    c: float
    log_x_threshold: int
    z: Optional[float] = None
    required_log_t: Optional[float] = None
    certified: bool = False
    regime: str = ""
    notes: tuple[str, ...] = field(default=())


def make_config(k: int, mode: str, c: float, z: float | None = None, **kw) -> BoundConfig:
    """Standard configuration for a table mode: A (KLN), B (piecewise table) or Z (fixed Z)."""
    if mode == "A":
        return config_kln(k, c, **kw)
    if mode == "B":
        return config_bellotti(k, c, **kw)
    if mode == "Z":
        if z is None:
            raise DomainError("mode Z needs a z value")
        return config_kln(k, c, z_policy=FixedZ(z), **kw)
    raise DomainError(f"unknown mode {mode!r}")


def least_true(pred: Callable[[int], bool], lo: int, hi: int) -> Optional[int]:
    """Least integer in ``[lo, hi]`` where ``pred`` holds, for ``pred`` monotone false -> true.

    Exponential bracketing from ``lo`` followed by bisection; ``None`` when
    ``pred(hi)`` is false.
    """
    if lo > hi:
        return None
    if pred(lo):
        return lo
    bad, step = lo, 1
    while True:
        probe = min(lo + step, hi)
        if pred(probe):
            good = probe
            break
        if probe == hi:
            return None
        bad, step = probe, step * 2
    while good - bad > 1:
        mid = (bad + good) // 2
        if pred(mid):
            good = mid
        else:
            bad = mid
    return good


def _first_at_least(alpha: float, log_t: float) -> int:
    """Least integer L with ``alpha * L >= log_t`` as evaluated in binary64."""
    n = math.ceil(log_t / alpha)
    while alpha * (n - 1) >= log_t:
        n -= 1
    while alpha * n < log_t:
        n += 1
    return n


def shape_segments(config: BoundConfig, lo: int, hi: int) -> list[tuple[int, int]]:
    """Integer sub-ranges of ``[lo, hi]`` on which the density shape is fixed."""
    shape = config.shape
    if not isinstance(shape, BellottiTable):
        return [(lo, hi)] if lo <= hi else []
    a = config.alpha
    out = []
    for i, row in enumerate(shape.rows):
        start = _first_at_least(a, row.log_t0)
        if i + 1 < len(shape.rows):
            end = _first_at_least(a, row.log_t1) - 1
        else:
            end = _first_at_least(a, row.log_t1)
            if a * end > row.log_t1:
                end -= 1
        s, e = max(start, lo), min(end, hi)
        if s <= e:
            out.append((s, e))
    return out


def minimal_threshold(config: BoundConfig, log_x_lo: int = DEFAULT_LOG_X_LO,
                      log_x_hi: int = DEFAULT_LOG_X_HI, strict: bool = False) -> int:
    """Least integer ``L`` in range where the precheck passes and the bound is below 1.

    Inside each fixed-shape sub-range the feasible points form an interval and
    the bound is assumed to cross 1 once; sub-ranges are tried in increasing
    order.  The result is confirmed by a direct evaluation at ``L - 1``.
    """
    if log_x_lo < 1000:
        raise DomainError("log_x_lo must be at least 1000")
    ok = lambda n: precheck(n, config, strict).ok  # noqa: E731
    good = lambda n: passes(n, config, strict)  # noqa: E731
    for a, b in shape_segments(config, log_x_lo, log_x_hi):
        first = least_true(ok, a, b)
        if first is None:
            continue
        if good(first):
            return first
        # feasibility may end inside the range; find its right end
        end = least_true(lambda n: not ok(n), first, b)
        last = b if end is None else end - 1
        hit = least_true(good, first, last)
        if hit is None:
            continue
        while hit - 1 >= first and good(hit - 1):
            hit -= 1
        return hit
    raise NotFoundError(f"no admissible log x in [{log_x_lo}, {log_x_hi}] for k={config.k}, "
                        f"c={config.c}")


def certify(config: BoundConfig, log_x: int, strict: bool = False) -> bool:
    """All-``x`` guarantee from ``log_x`` onward.

    A fixed shape needs one monotone certificate.  A piecewise table needs one
    per remaining row, each taken at the first point of its row; together they
    cover every height up to the top of the table.
    """
    segments = shape_segments(config, log_x, 10 ** 18)
    if not segments:
        return False
    for a, _ in segments:
        try:
            if not certificate_report(a, config, strict).ok:
                return False
        except Exception:
            return False
    return True


def threshold_record(k: int, mode: str, c: float, z: float | None = None,
                     log_x_lo: int = DEFAULT_LOG_X_LO, log_x_hi: int = DEFAULT_LOG_X_HI,
                     strict: bool = False, **kw) -> ThresholdRecord:
    config = make_config(k, mode, c, z, **kw)
    t = minimal_threshold(config, log_x_lo, log_x_hi, strict)
    return ThresholdRecord(k=k, mode=mode, c=c, z=z, log_x_threshold=t,
                           certified=certify(config, t, strict),
                           regime=config.regime.name)


def is_minimal(record: ThresholdRecord, strict: bool = False, **kw) -> bool:
    """The bound is at least 1, or a precondition fails, one step below the threshold."""
    config = make_config(record.k, record.mode, record.c, record.z, **kw)
    below = record.log_x_threshold - 1
    if below < 1000:
        return True
    return not passes(below, config, strict)


def table_B_eval(k: int, c: float, log_x: float, strict: bool = False) -> BoundBreakdown:
    """Bound under the piecewise table, with the row chosen at ``alpha log x``."""
    if k < 67:
        raise InfeasibleError("the piecewise table needs k >= 67")
    table = CATALOG.bellotti
    log_2t = c / k * log_x
    if not (table.log_t_min <= log_2t <= table.log_t_max):
        raise TableRangeError(
            f"alpha log x = {log_2t} outside [{table.log_t_min}, {table.log_t_max:g}]")
    return bound_breakdown(log_x, config_bellotti(k, c), strict)


# ---------------------------------------------------------------------------
# c optimisation


def _sigma1(mode: str) -> float:
    return SIGMA1_BELLOTTI if mode == "B" else SIGMA1_KLN


def c_cap(k: int, mode: str) -> float:
    """Supremum of admissible ``c`` (``alpha < min(1/10, 1 - sigma1)``)."""
    return k * min(0.1, 1 - _sigma1(mode))


def _scan(values, evaluate, stall_limit):
    """Walk ``values`` keeping the best (smallest key); stop after ``stall_limit`` misses."""
    best, best_key, stall = None, None, 0
    for v in values:
        key = evaluate(v)
        if key is not None and (best_key is None or key < best_key):
            best, best_key, stall = v, key, 0
        else:
            stall += 1
            if best is not None and stall >= stall_limit:
                break
    return best, best_key


def _c_grid(start_index: int, stop_index: int, step: float, cap: float):
    for i in range(start_index, stop_index + 1):
        c = round(1 + i * step, 10)
        if c >= cap:
            return
        yield c


def optimize_c(k: int, mode: str, eps_step: float = DEFAULT_EPS_STEP,
               stall_limit: int = DEFAULT_STALL_LIMIT, log_x_hi: int = DEFAULT_LOG_X_HI,
               strict: bool = False, coarse_factor: int = 100) -> tuple[float, int]:
    """Scan ``c = 1 + eps`` for the least threshold; ties go to the smaller ``c``.

    A coarse pass at ``coarse_factor * eps_step`` locates the basin; a fine
    pass at ``eps_step`` then scans one coarse step either side of it.  Both
    passes stop after ``stall_limit`` consecutive non-improving steps or at the
    feasibility cap.
    """
    if mode not in ("A", "B"):
        raise DomainError("optimize_c handles modes A and B")
    if eps_step <= 0 or stall_limit < 1:
        raise DomainError("eps_step and stall_limit must be positive")
    cap = c_cap(k, mode)
    if cap <= 1:
        raise InfeasibleError(f"no admissible c for k={k}, mode {mode}: 1/k >= cap/k")

    def evaluate(c):
        try:
            return minimal_threshold(make_config(k, mode, c), DEFAULT_LOG_X_LO, log_x_hi,
                                     strict)
        except (NotFoundError, DomainError):
            return None

    n_cap = int((cap - 1) / eps_step) + 1
    coarse_step = eps_step * max(1, coarse_factor)
    best, _ = _scan(_c_grid(1, int((cap - 1) / coarse_step) + 1, coarse_step, cap),
                    evaluate, stall_limit)
    if best is None:
        best, _ = _scan(_c_grid(1, n_cap, eps_step, cap), evaluate, stall_limit)
        if best is None:
            raise InfeasibleError(f"no admissible c for k={k}, mode {mode}")
    centre = round((best - 1) / eps_step)
    lo = max(1, centre - coarse_factor)
    best, key = _scan(_c_grid(lo, min(n_cap, centre + coarse_factor), eps_step, cap),
                      evaluate, stall_limit)
    return best, key


# ---------------------------------------------------------------------------
# conditional Z


@dataclass(frozen=True)
class ZResult:
    z: float
    x_z: int
    c: float


def largest_z(k: int, c: float, target_log_x: int, z_step: float = DEFAULT_Z_STEP,
              strict: bool = False, z_start: float | None = None) -> ZResult:
    """Largest ``z`` on the ``z_step`` grid with threshold at most ``target_log_x``.

    The bound grows with ``Z`` so the predicate is monotone; the grid is
    bracketed from ``z_start`` (default ``zhat`` at ``2 H_R``), bisected, and
    confirmed by a direct check one step above.
    """
    if z_step <= 0:
        raise DomainError("z_step must be positive")

    def threshold(m):
        try:
            return minimal_threshold(make_config(k, "Z", c, m * z_step), DEFAULT_LOG_X_LO,
                                     target_log_x, strict)
        except (NotFoundError, DomainError):
            return None

    good = lambda m: threshold(m) is not None  # noqa: E731
    if z_start is None:
        z_start = zhat(math.log(2 * CATALOG.profile.riemann_height))
    m = max(1, round(z_start / z_step))
    if good(m):
        lo, hi = m, 2 * m
        while good(hi):
            lo, hi = hi, 2 * hi
            if hi * z_step > 1e6:
                raise NotFoundError("z unbounded above")
    else:
        hi, lo = m, m // 2
        while lo >= 1 and not good(lo):
            hi, lo = lo, lo // 2
        if lo < 1:
            raise NotFoundError(f"no admissible z for k={k}, c={c}")
    while hi - lo > 1:
        mid = (lo + hi) // 2
        if good(mid):
            lo = mid
        else:
            hi = mid
    while good(lo + 1):
        lo += 1
    return ZResult(z=round(lo * z_step, 12), x_z=threshold(lo), c=c)


def minimal_Z(k: int, target_log_x: int, z_step: float = DEFAULT_Z_STEP,
              c: float | None = None, eps_step: float = DEFAULT_EPS_STEP,
              stall_limit: int = DEFAULT_STALL_LIMIT, strict: bool = False,
              coarse_factor: int = 100) -> ZResult:
    """Largest ``z`` admitting some ``c`` with ``x_Z <= target_log_x``.

    With ``c`` given only ``z`` is searched.  Otherwise ``c`` runs over a coarse
    and then a fine grid (as in :func:`optimize_c`) maximising ``z``, with ties
    broken toward the smaller ``x_Z`` and then the smaller ``c``.
    """
    if c is not None:
        return largest_z(k, c, target_log_x, z_step, strict)
    cap = c_cap(k, "Z")
    cache: dict[float, ZResult | None] = {}

    def evaluate(cv):
        if cv not in cache:
            try:
                cache[cv] = largest_z(k, cv, target_log_x, z_step, strict)
            except NotFoundError:
                cache[cv] = None
        r = cache[cv]
        return None if r is None else (-r.z, r.x_z)

    coarse_step = eps_step * max(1, coarse_factor)
    n_cap = int((cap - 1) / eps_step) + 1
    best, _ = _scan(_c_grid(1, int((cap - 1) / coarse_step) + 1, coarse_step, cap),
                    evaluate, stall_limit)
    if best is None:
        raise NotFoundError(f"no admissible (c, z) for k={k}")
    centre = round((best - 1) / eps_step)
    best, _ = _scan(_c_grid(max(1, centre - coarse_factor), min(n_cap, centre + coarse_factor),
                            eps_step, cap), evaluate, stall_limit)
    return cache[best]


def xhat(k: int) -> int:
    """Unconditional threshold as listed: ``x_A`` for ``k >= 86`` or ``k <= 66``, else ``x_B``."""
    if not 65 <= k <= 90:
        raise TableRangeError("xhat is tabulated for 65 <= k <= 90")
    row = fixtures.table2_row(k)
    return row.x_a if (k >= 86 or k <= 66) else row.x_b


def xhat_mode(k: int) -> str:
    if not 65 <= k <= 90:
        raise TableRangeError("xhat is tabulated for 65 <= k <= 90")
    return "A" if (k >= 86 or k <= 66) else "B"


def xhat_computed(k: int, strict: bool = False) -> int:
    """Unconditional threshold recomputed with the listed ``c`` for the applicable mode."""
    mode = xhat_mode(k)
    row = fixtures.table2_row(k)
    c = float(row.c_a if mode == "A" else row.c_b)
    return minimal_threshold(make_config(k, mode, c), strict=strict)


def required_log_t(k: int, c_z: float, xhat_value: int) -> Optional[float]:
    """Height ``xhat(k) c_Z / k`` the hypothesised region must reach (``None`` for k >= 86)."""
    if k >= 86:
        return None
    return xhat_value * c_z / k
