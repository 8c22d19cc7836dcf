"""Square barrier V0 on 0 < x < L: three routes to the total amplitudes.

* ``closed_form``  - the summed two-step series, written with alpha only;
* ``series_expand`` - the multiple-reflection series term by term;
* ``matrix_solve`` - the four continuity conditions solved as a linear system.

In the diffusion zone all three agree.  In the Klein zone the loop factor
exceeds one, the series has no sum, and the linear system still returns a
finite |r| < 1; the closed form is then only a formal continuation.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field
from enum import Enum

import numpy as np
from scipy.optimize import bisect

from .errors import DivergentSeriesError, RegimeError, SingularityError
from .kinematics import Kinematics, Regime, classify_regime, spinor
from .steps import AlphaFactor, alpha_factor, step1, step2, step3, step_reflection_probability

MAX_TERMS = 10_000
SERIES_TOL = 1e-12
COND_LIMIT = 1e13
# terms beyond this magnitude would overflow complex arithmetic
_TERM_CEILING = 1e300


class Method(str, Enum):
    CLOSED_FORM = "ClosedForm"
    SERIES_SUM = "SeriesSum"
    MATRIX_SOLVE = "MatrixSolve"

    def __str__(self) -> str:
        return self.value


@dataclass(frozen=True)
class BarrierConfig:
    kin: Kinematics
    L: float

    def __post_init__(self):
        if not (self.L > 0 and math.isfinite(self.L)):
            raise ValueError(f"barrier width must be positive and finite, got L={self.L}")

    @property
    def regime(self) -> Regime:
        return classify_regime(self.kin)


@dataclass(frozen=True)
class BarrierResult:
    t: complex
    r: complex
    method: Method
    formal: bool = False
    # interior coefficients of u(q) e^{i q1 x} and u(-q) e^{-i q1 x}
    A: complex | None = None
    B: complex | None = None
    cond: float | None = None

    @property
    def T(self) -> float:
        return abs(self.t) ** 2

    @property
    def R(self) -> float:
        return abs(self.r) ** 2


@dataclass
class SeriesExpansion:
    loop_factor: complex
    terms_t: list[complex] = field(default_factory=list)
    terms_r: list[complex] = field(default_factory=list)
    partial_sums_t: list[complex] = field(default_factory=list)
    partial_sums_r: list[complex] = field(default_factory=list)
    convergent: bool = False
    reached_tol: bool = False
    truncation_index: int = 0

    @property
    def t(self) -> complex:
        if not self.convergent:
            raise DivergentSeriesError(
                f"|loop factor| = {abs(self.loop_factor):.6g} >= 1: transmission series has no sum"
            )
        return self.partial_sums_t[-1]

    @property
    def r(self) -> complex:
        if not self.convergent:
            raise DivergentSeriesError(
                f"|loop factor| = {abs(self.loop_factor):.6g} >= 1: reflection series has no sum"
            )
        return self.partial_sums_r[-1]

    def result(self) -> BarrierResult:
        return BarrierResult(self.t, self.r, Method.SERIES_SUM)


@dataclass(frozen=True)
class KleinReport:
    loop_magnitude: float
    per_bounce_growth: list[float]
    bounce_period: float
    hole_count_proxy: list[float]

    @property
    def times(self) -> list[float]:
        return [s * self.bounce_period for s in range(len(self.per_bounce_growth))]


@dataclass(frozen=True)
class ResonanceScan:
    energies: list[float]
    orders: list[int]
    head_on: bool


def _real_q_regime(cfg: BarrierConfig) -> Regime:
    regime = cfg.regime
    if regime not in (Regime.DIFFUSION, Regime.KLEIN):
        raise RegimeError(f"barrier amplitudes need real q1; regime is {regime}")
    return regime


def loop_factor(cfg: BarrierConfig, af: AlphaFactor | None = None) -> complex:
    """r_L * r~0; its modulus is the step reflection probability |r0|^2."""
    _real_q_regime(cfg)
    af = af or alpha_factor(cfg.kin)
    return step2(cfg.kin, cfg.L, af).r * step3(cfg.kin, af).r


def series_expand(cfg: BarrierConfig, max_terms: int = MAX_TERMS, tol: float = SERIES_TOL,
                  af: AlphaFactor | None = None) -> SeriesExpansion:
    """Expand t = t0 tL sum (rL r~0)^s and r = r0 + t0 rL t~0 sum (rL r~0)^s.

    In the diffusion zone the expansion stops once the geometric tail bound
    |term| |loop| / (1 - |loop|) drops below ``tol`` times the amplitude
    scale max(|t|, |r|).  In the Klein zone ``max_terms`` terms are emitted
    (fewer if they would overflow) and no sum is exposed.
    """
    if max_terms < 1:
        raise ValueError("max_terms must be >= 1")
    regime = _real_q_regime(cfg)
    kin, L = cfg.kin, cfg.L
    af = af or alpha_factor(kin)
    s1, s2, s3 = step1(kin, af), step2(kin, L, af), step3(kin, af)
    loop = s2.r * s3.r
    mag = abs(loop)
    convergent = regime is Regime.DIFFUSION and mag < 1.0
    out = SeriesExpansion(loop_factor=loop, convergent=convergent)

    out.terms_r.append(s1.r)
    out.partial_sums_r.append(s1.r)
    lead_t = s1.t * s2.t
    lead_r = s1.t * s2.r * s3.t
    power = 1.0 + 0j
    sum_t = 0j
    sum_r = s1.r
    for s in range(max_terms):
        term_t = lead_t * power
        term_r = lead_r * power
        if max(abs(term_t), abs(term_r)) > _TERM_CEILING:
            break
        sum_t += term_t
        sum_r += term_r
        out.terms_t.append(term_t)
        out.terms_r.append(term_r)
        out.partial_sums_t.append(sum_t)
        out.partial_sums_r.append(sum_r)
        out.truncation_index = s
        if convergent:
            tail = max(abs(term_t), abs(term_r)) * mag / (1.0 - mag)
            if tail <= tol * max(abs(sum_t), abs(sum_r)):
                out.reached_tol = True
                break
        power *= loop
    return out


def two_step_sum(cfg: BarrierConfig, af: AlphaFactor | None = None) -> BarrierResult:
    """Geometric sums t0 tL / (1 - loop) and r0 + t0 rL t~0 / (1 - loop) from the step amplitudes.

    Accepts an explicit ``af`` so the normalisation N can be altered.
    """
    _real_q_regime(cfg)
    kin = cfg.kin
    af = af or alpha_factor(kin)
    s1, s2, s3 = step1(kin, af), step2(kin, cfg.L, af), step3(kin, af)
    loop = s2.r * s3.r
    if abs(1 - loop) < 1e-15:
        raise SingularityError("1 - loop factor vanishes")
    t = s1.t * s2.t / (1 - loop)
    r = s1.r + s1.t * s2.r * s3.t / (1 - loop)
    return BarrierResult(t, r, Method.SERIES_SUM, formal=cfg.regime is Regime.KLEIN)


def closed_form(cfg: BarrierConfig, formal: bool = False) -> BarrierResult:
    """t = e^{-i p1 L} / [cos(q1 L) - i K sin(q1 L)], K = (1 + |alpha|^2) / (2 Re alpha).

    Refuses the Klein zone unless ``formal`` is set; the result is then
    flagged ``formal`` since it sums a divergent series.
    """
    regime = _real_q_regime(cfg)
    if regime is Regime.KLEIN and not formal:
        raise RegimeError("closed form is not a physical result in the Klein zone; pass formal=True")
    kin, L = cfg.kin, cfg.L
    a = alpha_factor(kin).alpha
    K = (1.0 + abs(a) ** 2) / (2.0 * a.real)
    phase = kin.q1.real * L / kin.hbar
    den = math.cos(phase) - 1j * K * math.sin(phase)
    t = cmath.exp(-1j * kin.p1 * L / kin.hbar) / den
    r = -1j * (1 - a) * (1 + a.conjugate()) / (2.0 * a.real) * math.sin(phase) / den
    return BarrierResult(t, r, Method.CLOSED_FORM, formal=regime is Regime.KLEIN)


def continuity_matrix(cfg: BarrierConfig) -> tuple[np.ndarray, np.ndarray]:
    """Linear system M (r, A, B, t) = b for unit incident amplitude.

    Region I:   u(p) e^{i p1 x} + r u(-p) e^{-i p1 x}
    Region II:  A u(q) e^{i q1 x} + B u(-q) e^{-i q1 x}
    Region III: t u(p) e^{i p1 x}
    with unit spinors; rows 0-1 match at x = 0, rows 2-3 at x = L.
    """
    kin, L = cfg.kin, cfg.L
    p1, q1, hb = kin.p1, kin.q1.real, kin.hbar
    up = spinor(p1, kin.p2, kin.p3, kin.E, kin.c)
    um = spinor(-p1, kin.p2, kin.p3, kin.E, kin.c)
    eII = kin.E - kin.V0
    uq = spinor(q1, kin.p2, kin.p3, eII, kin.c)
    uqm = spinor(-q1, kin.p2, kin.p3, eII, kin.c)
    M = np.zeros((4, 4), dtype=complex)
    b = np.zeros(4, dtype=complex)
    M[0:2, 0] = um
    M[0:2, 1] = -uq
    M[0:2, 2] = -uqm
    b[0:2] = -up
    M[2:4, 1] = uq * cmath.exp(1j * q1 * L / hb)
    M[2:4, 2] = uqm * cmath.exp(-1j * q1 * L / hb)
    M[2:4, 3] = -up * cmath.exp(1j * p1 * L / hb)
    return M, b


def matrix_solve(cfg: BarrierConfig) -> BarrierResult:
    """Solve the continuity conditions at x = 0 and x = L directly."""
    _real_q_regime(cfg)
    M, b = continuity_matrix(cfg)
    cond = float(np.linalg.cond(M))
    if not cond < COND_LIMIT:
        raise SingularityError(f"continuity system is singular (cond = {cond:.3e})")
    r, A, B, t = np.linalg.solve(M, b)
    return BarrierResult(complex(t), complex(r), Method.MATRIX_SOLVE,
                         formal=False, A=complex(A), B=complex(B), cond=cond)


def incoherent_probabilities(kin: Kinematics) -> tuple[float, float]:
    """Sum-of-squares limit: T = (1 - |r0|^2)/(1 + |r0|^2), R = 2|r0|^2/(1 + |r0|^2)."""
    regime = classify_regime(kin)
    if regime is not Regime.DIFFUSION:
        raise RegimeError(f"incoherent limit needs |r0| < 1 (diffusion); regime is {regime}")
    R0 = step_reflection_probability(kin)
    return (1.0 - R0) / (1.0 + R0), 2.0 * R0 / (1.0 + R0)


def find_resonances(E_min: float, E_max: float, V0: float, L: float, p2: float = 0.0,
                    p3: float = 0.0, c: float = 1.0, hbar: float = 1.0,
                    xtol: float = 1e-10) -> ResonanceScan:
    """Energies in [E_min, E_max] with q1(E) L / hbar = n pi, n >= 1.

    q1 grows monotonically with E in the diffusion zone, so every order n is
    bracketed by the range ends and refined by bisection.  ``head_on`` marks
    p2 = p3 = 0, where |t| = 1 at every energy anyway.
    """
    if not E_min < E_max:
        raise ValueError("need E_min < E_max")
    lo_kin = Kinematics(E_min, V0, p2, p3, c, hbar)
    Kinematics(E_max, V0, p2, p3, c, hbar)
    if classify_regime(lo_kin) is not Regime.DIFFUSION:
        raise RegimeError("resonance scan range must lie in the diffusion zone")

    def order(E: float) -> float:
        return Kinematics(E, V0, p2, p3, c, hbar).q1.real * L / (math.pi * hbar)

    n_lo, n_hi = order(E_min), order(E_max)
    energies, orders = [], []
    for n in range(max(1, math.ceil(n_lo)), math.floor(n_hi) + 1):
        if order(E_min) == n:
            root = E_min
        elif order(E_max) == n:
            root = E_max
        else:
            root = bisect(lambda E: order(E) - n, E_min, E_max, xtol=xtol, maxiter=500)
        energies.append(root)
        orders.append(n)
    return ResonanceScan(energies, orders, head_on=(p2 == 0.0 and p3 == 0.0))


def group_speed_barrier(kin: Kinematics) -> float:
    """|dE/dq1| = c^2 q1 / |E - V0| inside the barrier."""
    return kin.c**2 * kin.q1.real / abs(kin.E - kin.V0)


def klein_report(cfg: BarrierConfig, bounces: int) -> KleinReport:
    """Bounce-by-bounce growth of the divergent series in the Klein zone.

    ``per_bounce_growth[s] = |t0 tL| |loop|^s`` for s = 0..bounces and
    ``hole_count_proxy[s] = sum_{k<=s} |loop|^k``.  The proxy is a
    dimensionless bookkeeping model of the trapped-hole population, not a
    pair-production rate.
    """
    if bounces < 0:
        raise ValueError("bounces must be >= 0")
    if cfg.regime is not Regime.KLEIN:
        raise RegimeError(f"Klein report needs the Klein zone; regime is {cfg.regime}")
    kin = cfg.kin
    af = alpha_factor(kin)
    lead = abs(step1(kin, af).t * step2(kin, cfg.L, af).t)
    mag = abs(loop_factor(cfg, af))
    growth, holes = [], []
    acc = 0.0
    for s in range(bounces + 1):
        growth.append(lead * mag**s)
        acc += mag**s
        holes.append(acc)
    period = 2.0 * cfg.L / group_speed_barrier(kin)
    return KleinReport(mag, growth, period, holes)
