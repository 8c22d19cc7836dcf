"""Wave packets built by superposing exact plane-wave barrier solutions.

A Gaussian spectral envelope over the incoming energy (transverse momenta
held fixed) is integrated with Gauss-Legendre quadrature.  ``full`` mode
uses the linear-system amplitudes, ``per_term`` keeps only the first few
terms of the multiple-reflection series, so every outgoing packet can be
followed on its own.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from typing import Sequence

import numpy as np

from .barrier import BarrierConfig, closed_form, group_speed_barrier, incoherent_probabilities, matrix_solve
from .errors import RegimeError, ResolutionError
from .kinematics import Kinematics, Regime, classify_regime, spinor
from .steps import alpha_factor, step1, step2, step3

HUMP_THRESHOLD = 1e-4
_CHUNK = 2048


@dataclass(frozen=True)
class WavePacketSpec:
    E0: float
    sigma_E: float
    p2: float = 0.0
    p3: float = 0.0
    x0: float = -60.0
    x_min: float = -150.0
    x_max: float = 150.0
    n_x: int = 4096
    n_E: int = 257
    k_window: float = 5.0
    mixed: bool = False

    def __post_init__(self):
        if not self.sigma_E > 0:
            raise ValueError("sigma_E must be positive")
        if not self.x0 < 0:
            raise ValueError("packet must start left of the barrier (x0 < 0)")
        if not self.x_min < self.x_max:
            raise ValueError("need x_min < x_max")
        if self.n_x < 16 or self.n_E < 16:
            raise ValueError("n_x and n_E must be >= 16")

    @property
    def window(self) -> tuple[float, float]:
        return self.E0 - self.k_window * self.sigma_E, self.E0 + self.k_window * self.sigma_E


@dataclass(frozen=True)
class SpectralTable:
    """Quadrature nodes with the envelope folded into ``weights``.

    ``weights[k] = w_k g(E_k)``, scaled so that 2 pi hbar sum |g|^2 v w = 1,
    i.e. the incoming packet has unit norm.
    """

    energies: np.ndarray
    weights: np.ndarray
    quad_weights: np.ndarray
    envelope: np.ndarray
    p1: np.ndarray
    speed: np.ndarray
    spec: WavePacketSpec
    V0: float
    c: float
    hbar: float

    def kinematics(self, k: int) -> Kinematics:
        return Kinematics(float(self.energies[k]), self.V0, self.spec.p2, self.spec.p3, self.c, self.hbar)

    @property
    def spectral_density(self) -> np.ndarray:
        """2 pi hbar |g|^2 v w per node; sums to one."""
        return 2 * math.pi * self.hbar * self.envelope**2 * self.speed * self.quad_weights


@dataclass
class PacketState:
    t: float
    x: np.ndarray
    psi: np.ndarray  # shape (2, n_x)
    L: float
    mode: str
    norms: tuple[float, float, float] = field(default=(0.0, 0.0, 0.0))

    def _mask(self, region: int) -> np.ndarray:
        if region == 1:
            return self.x <= 0
        if region == 2:
            return (self.x >= 0) & (self.x <= self.L)
        return self.x >= self.L

    @property
    def density(self) -> np.ndarray:
        return np.sum(np.abs(self.psi) ** 2, axis=0)

    @property
    def psi_I(self) -> np.ndarray:
        return self.psi[:, self._mask(1)]

    @property
    def psi_II(self) -> np.ndarray:
        return self.psi[:, self._mask(2)]

    @property
    def psi_III(self) -> np.ndarray:
        return self.psi[:, self._mask(3)]

    @property
    def total_norm(self) -> float:
        return float(sum(self.norms))

    def region_tags(self) -> np.ndarray:
        tags = np.full(self.x.shape, "III", dtype=object)
        tags[self.x < self.L] = "II"
        tags[self.x < 0] = "I"
        return tags

    def records(self):
        """Columnar snapshot rows (x, |psi_1|^2, |psi_2|^2, region)."""
        d1 = np.abs(self.psi[0]) ** 2
        d2 = np.abs(self.psi[1]) ** 2
        for x, a, b, tag in zip(self.x, d1, d2, self.region_tags()):
            yield {"t": self.t, "x": float(x), "psi1_sq": float(a), "psi2_sq": float(b), "region": tag}


@dataclass(frozen=True)
class Hump:
    start: float
    stop: float
    center: float
    peak: float
    norm: float


def spatial_width(spec: WavePacketSpec, c: float = 1.0, hbar: float = 1.0) -> float:
    """RMS width of |psi|^2 for the incoming packet, hbar v(E0) / (2 sigma_E)."""
    kin = Kinematics(spec.E0, 0.0, spec.p2, spec.p3, c, hbar)
    return hbar * _speed(kin) / (2 * spec.sigma_E)


def sigma_for_width(width: float, E0: float, p2: float = 0.0, p3: float = 0.0,
                    c: float = 1.0, hbar: float = 1.0) -> float:
    kin = Kinematics(E0, 0.0, p2, p3, c, hbar)
    return hbar * _speed(kin) / (2 * width)


def _speed(kin: Kinematics) -> float:
    return kin.c**2 * kin.p1 / kin.E


def build_packet(spec: WavePacketSpec, V0: float = 0.0, c: float = 1.0, hbar: float = 1.0) -> SpectralTable:
    """Gaussian weights g(E) ~ exp(-(E - E0)^2 / (4 sigma_E^2)) on Gauss-Legendre nodes."""
    lo, hi = spec.window
    if lo <= math.hypot(spec.p2, spec.p3) * c:
        raise RegimeError("spectral window reaches energies with no propagating incoming wave")
    nodes, w = np.polynomial.legendre.leggauss(spec.n_E)
    half = 0.5 * (hi - lo)
    energies = 0.5 * (hi + lo) + half * nodes
    quad = half * w
    kins = [Kinematics(float(E), V0, spec.p2, spec.p3, c, hbar) for E in energies]
    if not spec.mixed:
        regimes = {classify_regime(k) for k in kins}
        if regimes != {Regime.DIFFUSION}:
            names = ", ".join(sorted(str(r) for r in regimes))
            raise RegimeError(f"spectral window spans several regimes ({names}); set mixed=True to allow")
    p1 = np.array([k.p1 for k in kins])
    speed = c**2 * p1 / energies
    g = np.exp(-((energies - spec.E0) ** 2) / (4 * spec.sigma_E**2))
    norm = 2 * math.pi * hbar * np.sum(g**2 * speed * quad)
    g = g / math.sqrt(norm)
    return SpectralTable(energies, quad * g, quad, g, p1, speed, spec, V0, c, hbar)


def _coefficients(table: SpectralTable, cfg: BarrierConfig, mode: str, n_terms: int):
    n = table.energies.size
    r = np.empty(n, complex)
    A = np.empty(n, complex)
    B = np.empty(n, complex)
    t = np.empty(n, complex)
    q1 = np.empty(n)
    loops = np.empty(n)
    for k in range(n):
        kin = table.kinematics(k)
        kcfg = BarrierConfig(kin, cfg.L)
        q1[k] = kin.q1.real
        af = alpha_factor(kin)
        s1, s2, s3 = step1(kin, af), step2(kin, cfg.L, af), step3(kin, af)
        loop = s2.r * s3.r
        loops[k] = abs(loop)
        if mode == "full":
            res = matrix_solve(kcfg)
            r[k], A[k], B[k], t[k] = res.r, res.A, res.B, res.t
        else:
            geo = sum(loop**s for s in range(n_terms))
            t[k] = s1.t * s2.t * geo
            r[k] = s1.r + s1.t * s2.r * s3.t * geo
            A[k] = s1.t * geo
            B[k] = s1.t * s2.r * geo
    return r, A, B, t, q1, loops


def _effective_bounces(loop_mag: float, amplitude: float = 1e-6) -> int:
    if not 0 < loop_mag < 1:
        return 1
    return max(1, math.ceil(math.log(amplitude) / math.log(loop_mag)))


def required_nodes(spec: WavePacketSpec, kin: Kinematics, L: float, t: float, x_extent: float,
                   bounces: int) -> int:
    """Gauss-Legendre nodes needed to integrate the spectral phase without aliasing.

    The phase derivative in E is bounded by the travel time to the farthest
    grid point plus ``t`` plus the internal round trips; n nodes integrate
    e^{i w E} exactly enough once n exceeds half the phase span over the
    window.  Speeds are taken over the +-3 sigma core of the envelope.
    """
    c, hb, V0 = kin.c, kin.hbar, kin.V0
    lo_core = max(spec.E0 - 3 * spec.sigma_E, spec.window[0])
    hi_core = min(spec.E0 + 3 * spec.sigma_E, spec.window[1])
    core = [Kinematics(e, V0, spec.p2, spec.p3, c, hb) for e in (lo_core, spec.E0, hi_core)]
    v_in = min(_speed(k) for k in core)
    v_b = min(group_speed_barrier(k) for k in core)
    delay = (x_extent + abs(spec.x0)) / v_in + abs(t) + (2 * bounces + 2) * L / v_b
    lo, hi = spec.window
    return int(math.ceil(delay * (hi - lo) / (2 * hb))) + 8


def _superpose(weights: np.ndarray, k_vals: np.ndarray, x: np.ndarray, hbar: float) -> np.ndarray:
    """sum_k weights[k] exp(i k_vals[k] x / hbar), chunked over x."""
    out = np.empty(x.size, dtype=complex)
    for s in range(0, x.size, _CHUNK):
        xs = x[s:s + _CHUNK]
        out[s:s + _CHUNK] = weights @ np.exp(1j * np.outer(k_vals, xs) / hbar)
    return out


def _grid(spec: WavePacketSpec, L: float) -> np.ndarray:
    x = np.linspace(spec.x_min, spec.x_max, spec.n_x)
    extra = [v for v in (0.0, L) if spec.x_min < v < spec.x_max]
    return np.unique(np.concatenate([x, extra]))


def evolve(spec: WavePacketSpec | SpectralTable, cfg: BarrierConfig, t: float, mode: str = "full",
           n_terms: int = 8, check_resolution: bool = True) -> PacketState:
    """Packet at time ``t`` on the grid of ``spec``.

    ``mode='full'`` superposes the exact region-wise solutions.
    ``mode='per_term'`` truncates the multiple-reflection series after
    ``n_terms`` loop powers, so the field holds exactly that many transmitted
    packets.  Only diffusion-zone windows are accepted.
    """
    if mode not in ("full", "per_term"):
        raise ValueError(f"unknown mode {mode!r}")
    if t < 0:
        raise ValueError("t must be >= 0")
    kin = cfg.kin
    if isinstance(spec, SpectralTable):
        table = spec
        spec = table.spec
    else:
        table = build_packet(spec, kin.V0, kin.c, kin.hbar)
    if table.V0 != kin.V0:
        raise ValueError("spectral table was built for a different V0")
    if any(classify_regime(table.kinematics(k)) is not Regime.DIFFUSION for k in (0, table.energies.size - 1)):
        raise RegimeError("packet evolution is defined for diffusion-zone windows only")

    L, hb = cfg.L, kin.hbar
    x = _grid(spec, L)
    r, A, B, tt, q1, loops = _coefficients(table, cfg, mode, n_terms)
    if mode == "full":
        bounces = _effective_bounces(float(np.median(loops)))
    else:
        bounces = min(n_terms, _effective_bounces(float(np.median(loops))))
    if check_resolution:
        need = required_nodes(spec, kin, L, t, float(np.max(np.abs(x))), bounces)
        if spec.n_E < need:
            raise ResolutionError(
                f"n_E = {spec.n_E} under-resolves the spectral phase (need >= {need}); "
                "raise n_E or shrink the grid/time"
            )

    base = table.weights * np.exp(-1j * table.energies * t / hb) * np.exp(-1j * table.p1 * table.spec.x0 / hb)
    E, p1 = table.energies, table.p1
    p2, p3, c = spec.p2, spec.p3, kin.c
    up = np.array([spinor(a, p2, p3, e, c) for a, e in zip(p1, E)]).T
    um = np.array([spinor(-a, p2, p3, e, c) for a, e in zip(p1, E)]).T
    eII = E - kin.V0
    uq = np.array([spinor(a, p2, p3, e, c) for a, e in zip(q1, eII)]).T
    uqm = np.array([spinor(-a, p2, p3, e, c) for a, e in zip(q1, eII)]).T

    psi = np.zeros((2, x.size), dtype=complex)
    m1, m3 = x < 0, x > L
    m2 = ~(m1 | m3)
    for comp in range(2):
        psi[comp, m1] = (_superpose(base * up[comp], p1, x[m1], hb)
                         + _superpose(base * r * um[comp], -p1, x[m1], hb))
        psi[comp, m2] = (_superpose(base * A * uq[comp], q1, x[m2], hb)
                         + _superpose(base * B * uqm[comp], -q1, x[m2], hb))
        psi[comp, m3] = _superpose(base * tt * up[comp], p1, x[m3], hb)

    state = PacketState(float(t), x, psi, L, mode)
    dens = state.density
    norms = []
    for region in (1, 2, 3):
        mask = state._mask(region)
        norms.append(float(np.trapezoid(dens[mask], x[mask])) if mask.sum() > 1 else 0.0)
    state.norms = tuple(norms)
    return state


def find_humps(x: np.ndarray, density: np.ndarray, rel_threshold: float = HUMP_THRESHOLD) -> list[Hump]:
    """Connected runs of ``density > rel_threshold * max(density)``."""
    if density.size == 0 or not np.any(density > 0):
        return []
    above = density > rel_threshold * density.max()
    edges = np.diff(np.concatenate([[0], above.astype(np.int8), [0]]))
    starts = np.flatnonzero(edges == 1)
    stops = np.flatnonzero(edges == -1)
    humps = []
    for a, b in zip(starts, stops):
        xs, ds = x[a:b], density[a:b]
        norm = float(np.trapezoid(ds, xs)) if b - a > 1 else 0.0
        center = float(np.trapezoid(ds * xs, xs) / norm) if norm > 0 else float(xs[0])
        humps.append(Hump(float(xs[0]), float(xs[-1]), center, float(ds.max()), norm))
    return humps


def transmitted_humps(state: PacketState, rel_threshold: float = HUMP_THRESHOLD) -> list[Hump]:
    mask = state.x >= state.L
    return find_humps(state.x[mask], state.density[mask], rel_threshold)


def asymptotic_transmission(table: SpectralTable, cfg: BarrierConfig) -> float:
    """Long-time transmitted norm, sum over nodes of the spectral density times |t(E)|^2."""
    T = np.array([matrix_solve(BarrierConfig(table.kinematics(k), cfg.L)).T
                  for k in range(table.energies.size)])
    return float(np.sum(table.spectral_density * T))


def settle_time(spec: WavePacketSpec, cfg: BarrierConfig, residual: float = 1e-9, margin: float = 8.0) -> float:
    """Time by which the barrier holds less than ``residual`` of the norm."""
    kin = Kinematics(spec.E0, cfg.kin.V0, spec.p2, spec.p3, cfg.kin.c, cfg.kin.hbar)
    width = spatial_width(spec, kin.c, kin.hbar)
    v_in = _speed(kin)
    v_b = group_speed_barrier(kin)
    mag2 = min(abs(_loop(kin, cfg.L)) ** 2, 0.999)
    bounces = max(1, math.ceil(math.log(residual) / math.log(mag2))) if mag2 > 0 else 1
    return (abs(spec.x0) + margin * width) / v_in + (2 * bounces + 1) * cfg.L / v_b + margin * width / v_in


def _loop(kin: Kinematics, L: float) -> complex:
    af = alpha_factor(kin)
    return step2(kin, L, af).r * step3(kin, af).r


def late_spec(spec: WavePacketSpec, cfg: BarrierConfig, t: float, dx: float | None = None) -> WavePacketSpec:
    """Copy of ``spec`` whose grid holds every outgoing packet at time ``t``, with n_E raised to match."""
    kin = cfg.kin
    width = spatial_width(spec, kin.c, kin.hbar)
    reach = kin.c * t + abs(spec.x0) + 10 * width
    x_min, x_max = -reach, cfg.L + reach
    dx = dx or width / 20
    n_x = int(math.ceil((x_max - x_min) / dx)) + 1
    k0 = Kinematics(spec.E0, kin.V0, spec.p2, spec.p3, kin.c, kin.hbar)
    bounces = _effective_bounces(abs(_loop(k0, cfg.L)))
    need = required_nodes(spec, kin, cfg.L, t, max(abs(x_min), abs(x_max)), bounces)
    return replace(spec, x_min=x_min, x_max=x_max, n_x=n_x, n_E=max(spec.n_E, need))


@dataclass(frozen=True)
class CrossoverRow:
    L: float
    L_over_width: float
    P_T: float
    T_coherent: float
    T_incoherent: float


def coherence_crossover(spec: WavePacketSpec, V0: float, L_values: Sequence[float], c: float = 1.0,
                        hbar: float = 1.0, method: str = "grid") -> list[CrossoverRow]:
    """Long-time transmitted norm against barrier width.

    ``method='grid'`` evolves each packet until the barrier has emptied and
    integrates |psi|^2 beyond x = L; ``method='spectral'`` uses the exact
    t -> inf limit, the spectral average of |t(E)|^2.
    """
    kin0 = Kinematics(spec.E0, V0, spec.p2, spec.p3, c, hbar)
    width = spatial_width(spec, c, hbar)
    T_inc, _ = incoherent_probabilities(kin0)
    rows = []
    for L in L_values:
        cfg = BarrierConfig(kin0, float(L))
        T_coh = closed_form(cfg).T
        if method == "spectral":
            P = asymptotic_transmission(build_packet(spec, V0, c, hbar), cfg)
        elif method == "grid":
            t_end = settle_time(spec, cfg)
            P = evolve(late_spec(spec, cfg, t_end), cfg, t_end).norms[2]
        else:
            raise ValueError(f"unknown method {method!r}")
        rows.append(CrossoverRow(float(L), float(L) / width, P, T_coh, T_inc))
    return rows
