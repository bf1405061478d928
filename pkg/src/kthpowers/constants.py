"""Literature constants and the zero-free / zero-density formulas built on them.

Every height is passed as its natural logarithm ``log_t``; heights such as
``exp(6.7e12)`` are far outside binary64 range, while every formula here only
needs ``log t`` and ``log log t``.

Constants are kept as decimal strings and parsed once, so a value read from a
key=value override file and a shipped default go through the same path.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Mapping, Sequence

from .errors import DomainError, TableRangeError

DEFAULTS: dict[str, str] = {
    # zero-free region constants
    "z1": "4.862",
    "z2": "19.62",
    "z3": "51.34",
    # Ford's J(T) and Z(T)
    "ford_j_offset": "1.8521",
    "ford_j_log_arg": "3",
    "ford_num_const": "0.685",
    "ford_num_loglog": "0.155",
    "ford_den_const": "0.04962",
    "ford_den_num": "0.0196",
    "ford_den_shift": "1.15",
    "ford_validity_t": "5.45e8",
    "riemann_height": "3000175332800",
    # N(T) remainder coefficients
    "a1": "0.10076",
    "a2": "0.24460",
    "a3": "8.08344",
    # zero-density estimate N(s,T) <= 17.253 (log T)^(5-2s) T^(8/3 (1-s)) + 5.663 (log T)^2
    "kln_b1": "17.253",
    "kln_b2": "3",
    "kln_b3": "5.663",
    "kln_b4": "2",
    "kln_f_log_power": "2",
    "kln_sigma_min": "0.6",
}

KLN_F_POWER = 8.0 / 3.0


def _parse(values: Mapping[str, str], key: str) -> float:
    return float(values[key])


@dataclass(frozen=True)
class ZeroFreeProfile:
    z1: float
    z2: float
    z3: float
    ford_coeffs: tuple[float, ...]
    riemann_height: float
    ford_validity_log_t: float

    def __post_init__(self):
        if not (0 < self.z1 < self.z2 < self.z3):
            raise DomainError("zero-free constants must satisfy 0 < z1 < z2 < z3")
        if len(self.ford_coeffs) != 7:
            raise DomainError("Ford's J/Z need exactly seven coefficients")
        if self.riemann_height <= 0:
            raise DomainError("riemann_height must be positive")

    @property
    def log_riemann_height(self) -> float:
        return math.log(self.riemann_height)


@dataclass(frozen=True)
class ZeroCountCoeffs:
    a1: float
    a2: float
    a3: float

    def __post_init__(self):
        if min(self.a1, self.a2, self.a3) <= 0:
            raise DomainError("zero-count coefficients must be positive")


@dataclass(frozen=True)
class DensityShape:
    """Zero-density bound ``b1 (log T)^b2 f(T)^(1-s) + b3 (log T)^b4``.

    ``f(T) = T^f_power (log T)^f_log_power``; the bound is valid for
    ``sigma_min < s < 1`` and ``log_t_min <= log T <= log_t_max``.
    """

    b1: float
    b2: float
    b3: float
    b4: float
    f_power: float
    f_log_power: float
    sigma_min: float
    log_t_min: float
    log_t_max: float = math.inf
    label: str = ""

    def __post_init__(self):
        if self.b1 <= 0 or self.f_power <= 0:
            raise DomainError("density shape needs b1 > 0 and f_power > 0")
        if not (0.5 < self.sigma_min < 1):
            raise DomainError("sigma_min must lie in (1/2, 1)")
        if not self.log_t_min < self.log_t_max:
            raise DomainError("empty validity window")

    def log_f(self, log_t: float) -> float:
        """``log f(T)`` for ``T = exp(log_t)``."""
        out = self.f_power * log_t
        if self.f_log_power:
            out += self.f_log_power * math.log(log_t)
        return out

    def contains(self, log_t: float) -> bool:
        return self.log_t_min <= log_t <= self.log_t_max


@dataclass(frozen=True)
class BellottiRow:
    log_t0: float
    log_t1: float
    alpha0: float
    c: float
    b: float


@dataclass(frozen=True)
class BellottiTable:
    """Piecewise ``N(s, T) <= C T^(B(1-s))`` estimates over contiguous height windows."""

    rows: tuple[BellottiRow, ...]
    _starts: tuple[float, ...] = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        rows = self.rows
        if not rows:
            raise DomainError("empty Bellotti table")
        for prev, nxt in zip(rows, rows[1:]):
            if prev.log_t1 != nxt.log_t0:
                raise DomainError(f"rows not contiguous at {prev.log_t1}")
        object.__setattr__(self, "_starts", tuple(r.log_t0 for r in rows))

    @property
    def log_t_min(self) -> float:
        return self.rows[0].log_t0

    @property
    def log_t_max(self) -> float:
        return self.rows[-1].log_t1

    def index(self, log_t: float) -> int:
        """Row whose window contains ``log_t``; a shared boundary goes to the later row."""
        if not (self.log_t_min <= log_t <= self.log_t_max):
            raise TableRangeError(
                f"log T = {log_t} outside [{self.log_t_min}, {self.log_t_max}]")
        lo, hi = 0, len(self._starts)
        while hi - lo > 1:
            mid = (lo + hi) // 2
            if self._starts[mid] <= log_t:
                lo = mid
            else:
                hi = mid
        return lo

    def shape(self, i: int) -> DensityShape:
        r = self.rows[i]
        return DensityShape(b1=r.c, b2=0.0, b3=0.0, b4=0.0, f_power=r.b, f_log_power=0.0,
                            sigma_min=r.alpha0, log_t_min=r.log_t0, log_t_max=r.log_t1,
                            label=f"bellotti[{r.log_t0:g},{r.log_t1:g}]")

    def __len__(self):
        return len(self.rows)


# (log T0, log T1, alpha0, C, B)
BELLOTTI_ROWS: tuple[tuple[str, str, str, str, str], ...] = (
    ("80", "90", "0.985", "370655.73", "5.216"),
    ("90", "100", "0.985", "425721.47", "4.831"),
    ("100", "110", "0.985", "488901.14", "4.513"),
    ("110", "120", "0.985", "545744.21", "4.264"),
    ("120", "130", "0.985", "629490.27", "4.032"),
    ("130", "140", "0.985", "694045.43", "3.855"),
    ("140", "150", "0.985", "771373.78", "3.696"),
    ("150", "160", "0.985", "825913.07", "3.572"),
    ("160", "170.2", "0.985", "909966.07", "3.448"),
    ("170.2", "500", "0.985", "1.12e6", "3.337"),
    ("500", "1000", "0.985", "6.23e6", "2.152"),
    ("1000", "1500", "0.985", "2.12e7", "1.820"),
    ("1500", "2000", "0.985", "6.47e7", "1.684"),
    ("2000", "2500", "0.985", "1.73e8", "1.610"),
    ("2500", "3000", "0.985", "2.56e8", "1.577"),
    ("3000", "481958", "0.985", "5.76e8", "1.551"),
    ("481958", "6.7e12", "0.985", "1.62e11", "1.448"),
)


@dataclass(frozen=True)
class Catalog:
    """Immutable bundle of every imported constant."""

    profile: ZeroFreeProfile
    zero_count: ZeroCountCoeffs
    kln: DensityShape
    bellotti: BellottiTable
    raw: Mapping[str, str]


def build_catalog(overrides: Mapping[str, str] | None = None,
                  bellotti_rows: Sequence[Sequence[str]] = BELLOTTI_ROWS) -> Catalog:
    values = dict(DEFAULTS)
    if overrides:
        unknown = set(overrides) - set(values)
        if unknown:
            raise KeyError(f"unknown constant(s): {sorted(unknown)}")
        values.update(overrides)
    p = lambda key: _parse(values, key)  # noqa: E731
    profile = ZeroFreeProfile(
        z1=p("z1"), z2=p("z2"), z3=p("z3"),
        ford_coeffs=tuple(p(k) for k in (
            "ford_j_offset", "ford_j_log_arg", "ford_num_const", "ford_num_loglog",
            "ford_den_const", "ford_den_num", "ford_den_shift")),
        riemann_height=p("riemann_height"),
        ford_validity_log_t=math.log(p("ford_validity_t")),
    )
    kln = DensityShape(
        b1=p("kln_b1"), b2=p("kln_b2"), b3=p("kln_b3"), b4=p("kln_b4"),
        f_power=KLN_F_POWER, f_log_power=p("kln_f_log_power"),
        sigma_min=p("kln_sigma_min"), log_t_min=profile.log_riemann_height, label="kln")
    table = BellottiTable(tuple(BellottiRow(*(float(x) for x in row)) for row in bellotti_rows))
    return Catalog(profile, ZeroCountCoeffs(p("a1"), p("a2"), p("a3")), kln, table, values)


def load_constants(path: str | Path) -> Catalog:
    """Build a catalog from a plain ``key = value`` file (``#`` starts a comment)."""
    overrides = {}
    for lineno, line in enumerate(Path(path).read_text().splitlines(), 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ValueError(f"{path}:{lineno}: expected key=value")
        key, value = (s.strip() for s in line.split("=", 1))
        float(value)
        overrides[key] = value
    return build_catalog(overrides)


CATALOG = build_catalog()
PROFILE = CATALOG.profile
LOG_HR = PROFILE.log_riemann_height


# ---------------------------------------------------------------------------
# zero-free regions


def ford_J(log_t: float, profile: ZeroFreeProfile = PROFILE) -> float:
    if log_t <= 1:
        raise DomainError("ford_J needs log_t > 1")
    offset, log_arg = profile.ford_coeffs[:2]
    return min(log_t / 4 + offset, log_t / 6 + math.log(log_t) + math.log(log_arg))


def ford_Z(log_t: float, profile: ZeroFreeProfile = PROFILE) -> float:
    _, _, num_c, num_ll, den_c, den_n, den_s = profile.ford_coeffs
    j = ford_J(log_t, profile)
    den = den_c - den_n / (j + den_s)
    if den <= 0:
        raise DomainError(f"ford_Z denominator vanishes at log_t={log_t}")
    return (j + num_c + num_ll * math.log(log_t)) / (den * log_t)


def _check_zhat_domain(log_t, profile):
    if log_t < profile.ford_validity_log_t:
        raise DomainError(
            f"zhat defined for log_t >= {profile.ford_validity_log_t:.6f}, got {log_t}")


def zhat_rising_branch(log_t: float, profile: ZeroFreeProfile = PROFILE) -> float:
    """``min{Z1, Z(T)} log log T``, the branch that grows with height."""
    return min(profile.z1, ford_Z(log_t, profile)) * math.log(log_t)


def zhat_z3_branch(log_t: float, profile: ZeroFreeProfile = PROFILE) -> float:
    ll = math.log(log_t)
    return profile.z3 * ll ** (4 / 3) / log_t ** (1 / 3)


def zhat(log_t: float, profile: ZeroFreeProfile = PROFILE) -> float:
    """Best Littlewood-form constant at height ``T = exp(log_t)``."""
    _check_zhat_domain(log_t, profile)
    return min(profile.z2, zhat_rising_branch(log_t, profile), zhat_z3_branch(log_t, profile))


def zero_free_width(log_t: float, profile: ZeroFreeProfile = PROFILE) -> float:
    """Width ``log log t / (zhat(t) log t)`` of the known zero-free region.

    This width is non-increasing in ``t``, which is what allows the constant
    ``zhat(2T)`` to be used for every height up to ``2T``.
    """
    return math.log(log_t) / (zhat(log_t, profile) * log_t)


def zhat_envelope(log_t: float, profile: ZeroFreeProfile = PROFILE) -> float:
    """An upper bound for ``sup_{s >= log_t} zhat(s)``.

    Past ``log t = e^4`` the Z3 branch is non-increasing, and the rising branch
    never decreases, so once the rising branch has reached Z2 the function is
    non-increasing from there on and the supremum is ``zhat(log_t)`` itself.
    Otherwise Z2 bounds every branch minimum.
    """
    _check_zhat_domain(log_t, profile)
    if log_t >= math.exp(4) and zhat_rising_branch(log_t, profile) >= profile.z2:
        return zhat(log_t, profile)
    return profile.z2


def zhat_upper(log_t_lo: float, log_t_hi: float, profile: ZeroFreeProfile = PROFILE) -> float:
    """Upper bound for ``zhat`` over the closed height window ``[log_t_lo, log_t_hi]``."""
    _check_zhat_domain(log_t_lo, profile)
    if log_t_hi < log_t_lo:
        raise DomainError("empty window")
    if math.isinf(log_t_hi):
        return zhat_envelope(log_t_lo, profile)
    # Z1 log log t is increasing; the Z3 branch peaks at log t = e^4
    peak = min(max(math.exp(4), log_t_lo), log_t_hi)
    z3_sup = max(zhat_z3_branch(s, profile) for s in (log_t_lo, peak, log_t_hi))
    return min(profile.z2, profile.z1 * math.log(log_t_hi), z3_sup)


# ---------------------------------------------------------------------------
# zero counts and densities


def zero_count_upper(log_t: float) -> float:
    """``T log T / (2 pi)``, valid for ``T >= 1``."""
    if log_t < 0:
        raise DomainError("zero_count_upper needs T >= 1")
    try:
        return math.exp(log_t) * log_t / (2 * math.pi)
    except OverflowError as exc:
        raise DomainError("N(T) bound exceeds binary64 range") from exc


def zero_count_window(log_t: float, coeffs: ZeroCountCoeffs = CATALOG.zero_count,
                      profile: ZeroFreeProfile = PROFILE) -> tuple[float, float]:
    """Lower and upper bounds for ``N(T)``, valid for ``T >= H_R``."""
    if log_t < profile.log_riemann_height:
        raise DomainError("zero_count_window valid only for T >= H_R")
    remainder = coeffs.a1 * log_t + coeffs.a2 * math.log(log_t) + coeffs.a3
    try:
        main = math.exp(log_t) / (2 * math.pi) * (log_t - math.log(2 * math.pi) - 1) + 7 / 8
    except OverflowError as exc:
        raise DomainError("N(T) main term exceeds binary64 range") from exc
    return main - remainder, main + remainder


def bellotti_lookup(log_t: float, table: BellottiTable = CATALOG.bellotti) -> DensityShape:
    return table.shape(table.index(log_t))


def density_eval(shape: DensityShape, sigma: float, log_t: float) -> float:
    if not (shape.sigma_min < sigma < 1):
        raise DomainError(f"sigma={sigma} outside ({shape.sigma_min}, 1)")
    if not shape.contains(log_t):
        raise DomainError(f"log_t={log_t} outside shape window")
    try:
        main = shape.b1 * math.exp(shape.b2 * math.log(log_t) + (1 - sigma) * shape.log_f(log_t))
    except OverflowError as exc:
        raise DomainError("N(sigma, T) bound exceeds binary64 range") from exc
    return main + shape.b3 * log_t ** shape.b4
