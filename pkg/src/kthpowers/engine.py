"""Upper bound for ``|theta(x+h) - theta(x) - h| / h`` with ``h = k x^(1-1/k)``.

The bound is a sum of six terms depending on ``k``, ``alpha = c/k`` (with
``2T = x^alpha``), ``sigma1``, a Littlewood-form constant ``Z`` and a
zero-density shape.  Every power of ``x`` is evaluated through ``log x`` so
``log x`` may run to 10^8 and beyond without overflow.

When the bound is below 1 at ``x``, ``theta(x + h) - theta(x) > 0``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from typing import Union

from .constants import (CATALOG, PROFILE, BellottiTable, DensityShape, ZeroFreeProfile,
                        zhat, zhat_envelope)
from .errors import DomainError, PreconditionError

DEFAULT_INFLATION = 1e-9


@dataclass(frozen=True)
class RegimeConstants:
    alpha_cap: float
    perron_c: float
    log_exp: float
    min_k: int

    def __post_init__(self):
        if (self.alpha_cap, self.perron_c, self.log_exp, self.min_k) not in _REGIME_TRIPLES:
            raise DomainError("only the two published Perron-error regimes are admissible")

    @property
    def name(self) -> str:
        return "k>=86" if self.min_k == 86 else "generic"


_REGIME_TRIPLES = {(1 / 10, 2.52, 8 / 10, 11), (1 / 85, 12.782, 1 / 10, 86)}
GENERIC = RegimeConstants(1 / 10, 2.52, 8 / 10, 11)
LARGE_K = RegimeConstants(1 / 85, 12.782, 1 / 10, 86)


def regime_for(k: int, alpha: float) -> RegimeConstants:
    """The sharper k >= 86 constants when admissible, otherwise the generic ones."""
    if k >= LARGE_K.min_k and alpha < LARGE_K.alpha_cap:
        return LARGE_K
    return GENERIC


@dataclass(frozen=True)
class PsiThetaConstants:
    alpha1: float = 1 + 1.93378e-8
    alpha2: float = 1 + 1.936e-8
    lower_half: float = 0.999
    lower_third: float = 0.885
    validity_log_x: float = 300.0

    def __post_init__(self):
        if not (1 < self.alpha1 < self.alpha2):
            raise DomainError("psi-theta constants need 1 < alpha1 < alpha2")


PSI_THETA = PsiThetaConstants()


@dataclass(frozen=True)
class FixedZ:
    value: float

    def __post_init__(self):
        if not self.value > 0:
            raise DomainError("Z must be positive")


@dataclass(frozen=True)
class PointwiseZhat:
    """Use ``zhat(2T)`` at the height ``2T = x^alpha`` of the point under test."""


ZPolicy = Union[FixedZ, PointwiseZhat]
Shape = Union[DensityShape, BellottiTable]


@dataclass(frozen=True)
class BoundConfig:
    k: int
    c: float
    sigma1: float
    z_policy: ZPolicy
    shape: Shape
    regime: RegimeConstants = GENERIC
    psi_theta: PsiThetaConstants = PSI_THETA
    inflation: float = DEFAULT_INFLATION
    profile: ZeroFreeProfile = PROFILE

    def __post_init__(self):
        if self.k < 11:
            raise DomainError("k must be at least 11")
        if not 0 <= self.inflation <= 1e-6:
            raise DomainError("rounding inflation must lie in [0, 1e-6]")

    @property
    def alpha(self) -> float:
        return self.c / self.k

    def with_z(self, z: float) -> "BoundConfig":
        return replace(self, z_policy=FixedZ(z))


def shape_at(config: BoundConfig, log_2t: float) -> DensityShape:
    """Density shape in force at height ``log 2T``; tables pick their row per point."""
    shape = config.shape
    if isinstance(shape, BellottiTable):
        return shape.shape(shape.index(log_2t))
    return shape


# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Violation:
    code: str
    message: str
    warning: bool = False


@dataclass(frozen=True)
class PrecheckReport:
    violations: tuple[Violation, ...] = ()

    @property
    def ok(self) -> bool:
        return not any(not v.warning for v in self.violations)

    @property
    def codes(self) -> list[str]:
        return [v.code for v in self.violations]

    @property
    def errors(self) -> list[Violation]:
        return [v for v in self.violations if not v.warning]

    def __bool__(self):
        return bool(self.violations)


def nu(log_y: float, z: float) -> float:
    if log_y <= 1:
        raise DomainError("nu needs log_y > 1")
    if z <= 0:
        raise DomainError("nu needs z > 0")
    return math.log(log_y) / (z * log_y)


def resolve_z(log_2t: float, config: BoundConfig) -> float:
    if isinstance(config.z_policy, FixedZ):
        return config.z_policy.value
    return zhat(log_2t, config.profile)


def _window(config: BoundConfig) -> tuple[float, float]:
    s = config.shape
    return s.log_t_min, s.log_t_max


def precheck(log_x: float, config: BoundConfig, strict: bool = False) -> PrecheckReport:
    out = []
    k, alpha, s1 = config.k, config.alpha, config.sigma1
    regime = config.regime
    log_2t = alpha * log_x
    add = lambda code, msg, warning=False: out.append(Violation(code, msg, warning))  # noqa: E731

    floor = max(1000.0, config.psi_theta.validity_log_x)
    if log_x < floor:
        add("X_TOO_SMALL", f"log x = {log_x} < {floor:g}")
    if k < regime.min_k:
        add("ALPHA_RANGE", f"k = {k} below regime minimum {regime.min_k}")
    cap = min(regime.alpha_cap, 1 - s1)
    if not (1 / k < alpha < cap):
        add("ALPHA_RANGE", f"alpha = {alpha:.10g} not in (1/k, {cap:.10g})")

    lo, hi = _window(config)
    in_window = lo <= log_2t <= hi
    if not in_window:
        add("SHAPE_WINDOW", f"log 2T = {log_2t:.6f} outside [{lo:g}, {hi:g}]")
    shape = shape_at(config, log_2t) if in_window else None
    sigma_floor = max(0.6, shape.sigma_min if shape else config.shape.sigma_min if
                      isinstance(config.shape, DensityShape) else config.shape.rows[0].alpha0)
    if not (sigma_floor <= s1 < 1):
        add("SIGMA_RANGE", f"sigma1 = {s1} not in [{sigma_floor}, 1)")

    if log_2t < math.log(2 * config.profile.riemann_height):
        add("T_BELOW_HR", f"log T = {log_2t - math.log(2):.6f} < log H_R", warning=not strict)

    if log_2t > 1:
        if shape is not None:
            log_f = shape.log_f(log_2t)
            if log_x < 1 + log_f:
                add("X_BELOW_EF", f"log x = {log_x} < 1 + log f(x^alpha) = {1 + log_f:.6f}")
        try:
            z = resolve_z(log_2t, config)
        except DomainError as exc:
            add("SHAPE_WINDOW", f"zhat undefined: {exc}")
        else:
            v = nu(log_2t, z)
            if v > 1 - s1:
                add("NU_EXCEEDS_STRIP", f"nu(2T) = {v:.6g} > 1 - sigma1")
    else:
        add("X_BELOW_EF", "log 2T <= 1")
    return PrecheckReport(tuple(out))


# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class BoundBreakdown:
    term_zero_main: float
    term_b3: float
    term_b1: float
    term_perron: float
    term_psi_half: float
    term_psi_third: float
    total: float
    log_2t: float
    nu_2t: float
    z: float
    regime: str = ""
    shape: str = ""
    warnings: tuple[str, ...] = field(default=())

    @property
    def terms(self) -> tuple[float, ...]:
        return (self.term_zero_main, self.term_b3, self.term_b1, self.term_perron,
                self.term_psi_half, self.term_psi_third)


def _raw_terms(log_x: float, config: BoundConfig, shape: DensityShape, z: float):
    k, a, s1 = config.k, config.alpha, config.sigma1
    pt = config.psi_theta
    lx = log_x
    big_l = a * lx
    log_l = math.log(big_l)

    t1 = a * math.exp((s1 + a - 1) * lx) * lx / math.pi

    if shape.b3:
        t2 = 2 * shape.b3 * big_l ** shape.b4 * (
            math.exp(-log_l / (z * a)) - math.exp((s1 - 1) * lx))
    else:
        t2 = 0.0

    lq = lx - shape.log_f(big_l)  # log(x / f(x^alpha))
    t3 = (2 * shape.b1 * big_l ** shape.b2 * lx / lq
          * (math.exp(-log_l * lq / (z * a * lx)) - math.exp((s1 - 1) * lq)))

    u = k * math.exp(-lx / k)
    r = config.regime
    t4 = (r.perron_c / k * math.exp(-(a - 1 / k) * lx)
          * ((1 + u) * (lx + u) ** r.log_exp + lx ** r.log_exp))
    t5 = (pt.alpha1 * math.sqrt(1 + u) - pt.lower_half) * math.exp((1 / k - 0.5) * lx) / k
    t6 = (pt.alpha2 * (1 + u) ** (1 / 3) - pt.lower_third) * math.exp((1 / k - 2 / 3) * lx) / k
    return t1, t2, t3, t4, t5, t6


def bound_breakdown(log_x: float, config: BoundConfig, strict: bool = False) -> BoundBreakdown:
    report = precheck(log_x, config, strict)
    if not report.ok:
        raise PreconditionError(
            "; ".join(f"{v.code}: {v.message}" for v in report.errors), report)
    log_2t = config.alpha * log_x
    shape = shape_at(config, log_2t)
    z = resolve_z(log_2t, config)
    inflate = 1 + config.inflation
    terms = [t * inflate for t in _raw_terms(log_x, config, shape, z)]
    return BoundBreakdown(*terms, total=math.fsum(terms), log_2t=log_2t,
                          nu_2t=nu(log_2t, z), z=z, regime=config.regime.name,
                          shape=shape.label, warnings=tuple(report.codes))


def guarantees_prime(log_x: float, config: BoundConfig, strict: bool = False) -> bool:
    return bound_breakdown(log_x, config, strict).total < 1


def passes(log_x: float, config: BoundConfig, strict: bool = False) -> bool:
    """Precheck passes and the bound is below 1; never raises on precondition failure."""
    if not precheck(log_x, config, strict).ok:
        return False
    return guarantees_prime(log_x, config, strict)


# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class CertificateReport:
    ok: bool
    z: float
    checks: tuple[tuple[str, bool, str], ...]
    majorant_total: float
    valid_until_log_x: float

    def __bool__(self):
        return self.ok


def certificate_report(log_x0: float, config: BoundConfig, strict: bool = False,
                       require_precheck: bool = True) -> CertificateReport:
    """Per-term proof that the bound stays below 1 for every ``log x >= log_x0``.

    Each term is replaced by a majorant (negative subtrahends dropped, and for
    pointwise Z the constant ``zhat_envelope(log 2T)``, an upper bound for Z at
    every larger height).  Each majorant is a product of factors of the form
    ``x^(-a) (log x)^b`` or ``L^e`` with ``L = alpha log x``; those are
    non-increasing once ``log x >= b/a`` or ``e <= 0``.  The certificate holds
    when every majorant is non-increasing from ``log_x0`` and their sum at
    ``log_x0`` is below 1.  For a table shape the claim stops at the end of the
    current row (``valid_until_log_x``).  With ``require_precheck=False`` the
    per-term checks are reported even when a precondition fails; the result is
    then never ``ok``.
    """
    report = precheck(log_x0, config, strict)
    if require_precheck and not report.ok:
        raise PreconditionError(
            "; ".join(f"{v.code}: {v.message}" for v in report.errors), report)
    k, a, s1 = config.k, config.alpha, config.sigma1
    lx = log_x0
    big_l = a * lx
    shape = shape_at(config, big_l)
    if isinstance(config.z_policy, FixedZ):
        z = config.z_policy.value
    else:
        z = zhat_envelope(big_l, config.profile)
    checks = []
    check = lambda name, ok, detail: checks.append((name, bool(ok), detail))  # noqa: E731

    a1 = 1 - s1 - a
    check("zero_main", a1 > 0 and lx >= 1 / a1,
          f"x^-{a1:.6g} log x, needs log x >= {1 / a1 if a1 > 0 else math.inf:.6g}")

    e2 = shape.b4 - 1 / (z * a)
    check("b3", shape.b3 == 0 or (e2 <= 0 and big_l >= 1), f"L^{e2:.6g}")

    slope = 1 - shape.f_power * a
    e3 = shape.b2 - slope / (z * a)
    q = shape.f_log_power
    check("b1", slope > 0 and e3 <= 0 and (q == 0 or big_l >= math.e ** 2),
          f"L^{e3:.6g} exp(q log^2 L / (Z L))")

    a4 = a - 1 / k
    le = config.regime.log_exp
    check("perron", a4 > 0 and lx >= le / a4,
          f"x^-{a4:.6g} (log x)^{le:g}, needs log x >= {le / a4 if a4 > 0 else math.inf:.6g}")
    check("psi_half", 1 / k < 0.5, "x^(1/k - 1/2)")
    check("psi_third", 1 / k < 2 / 3, "x^(1/k - 2/3)")

    log_l = math.log(big_l)
    m1 = a * math.exp((s1 + a - 1) * lx) * lx / math.pi
    m2 = 2 * shape.b3 * math.exp(e2 * log_l) if shape.b3 else 0.0
    lq_ratio = slope - q * math.log(big_l) / lx
    if lq_ratio <= 0:
        check("b1_denominator", False, "log(x/f) <= 0")
        m3 = math.inf
    else:
        m3 = (2 * shape.b1 * math.exp(e3 * log_l + q * log_l ** 2 / (z * big_l)) / lq_ratio)
    _, _, _, t4, t5, t6 = _raw_terms(lx, replace(config, z_policy=FixedZ(z)), shape, z)
    inflate = 1 + config.inflation
    total = math.fsum(m * inflate for m in (m1, m2, m3, t4, t5, t6))
    ok = report.ok and all(c[1] for c in checks) and total < 1
    return CertificateReport(ok=ok, z=z, checks=tuple(checks), majorant_total=total,
                             valid_until_log_x=shape.log_t_max / a)


def monotone_certificate(log_x0: float, config: BoundConfig, strict: bool = False) -> bool:
    return certificate_report(log_x0, config, strict).ok


# ---------------------------------------------------------------------------
# standard configurations

SIGMA1_KLN = 0.675
SIGMA1_BELLOTTI = 0.985


def config_kln(k: int, c: float, z_policy: ZPolicy | None = None,
               regime: RegimeConstants | None = None, **kw) -> BoundConfig:
    """KLN density configuration (sigma1 = 0.675)."""
    return BoundConfig(k=k, c=c, sigma1=SIGMA1_KLN,
                       z_policy=z_policy if z_policy is not None else PointwiseZhat(),
                       shape=CATALOG.kln, regime=regime or regime_for(k, c / k), **kw)


def config_bellotti(k: int, c: float, regime: RegimeConstants | None = None, **kw) -> BoundConfig:
    """Piecewise Bellotti density configuration (sigma1 = 0.985)."""
    return BoundConfig(k=k, c=c, sigma1=SIGMA1_BELLOTTI, z_policy=PointwiseZhat(),
                       shape=CATALOG.bellotti, regime=regime or regime_for(k, c / k), **kw)
