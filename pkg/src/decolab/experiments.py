"""Experiment orchestration: simulation-versus-limit studies and the
statistical validation suites for the synthesized medium.

The weak metric is a truncated dual pairing against a fixed family of
phase-space Gaussian packets; convergence acceptance is trend-based
(monotone distance decrease along an epsilon ladder plus shrinking
realization spread), since no rate is claimed by the model.

All experiments are re-runnable bit-identically from (params, seed):
per-realization streams come from a counter-based SeedSequence spawn, so
results do not depend on worker scheduling.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, replace

import numpy as np
from scipy import stats

from . import medium, phasespace
from .errors import ConfigError
from .params import (
    Envelope,
    ModelParams,
    ScalingRegime,
    coherence_scale,
    derived_exponents,
)
from .evolvers import frac_diffusion_evolve
from .randomwalks import HurstEstimate, hurst_estimate
from .spectral import covariance, frac_damping_rate, spatial_spectrum, spectral_gap
from .waveprop import Grid, Propagator, snap_wavevector

_TWO_PI = 2.0 * math.pi


def _run_indexed(fn, n: int, jobs: int) -> list:
    """Evaluate fn(0..n-1), optionally on a thread pool, in index order.

    Each index must own its randomness (pre-spawned seed), so the result
    list is the same for any jobs value; numpy FFT work releases the GIL,
    which is where the wall-clock win comes from.
    """
    if jobs <= 1:
        return [fn(r) for r in range(n)]
    with ThreadPoolExecutor(max_workers=jobs) as pool:
        return list(pool.map(fn, range(n)))


# ------------------------------------------------------- weak metric ----


@dataclass(frozen=True)
class TestFamily:
    """Fixed family of Gaussian phase-space packets g_j with weights 2^-j.

    Centers span a 4 x 4 grid in (x, k) at two alternating width pairs; each
    packet is normalized to unit L2 norm, so the family sits in the unit
    ball (radius attribute).  Versioned: changing the layout is a new
    version, not a silent retune.
    """

    x_centers: tuple
    k_centers: tuple
    widths: tuple  # ((wx1, wk1), (wx2, wk2))
    weights: tuple
    radius: float = 1.0
    version: int = 1

    def bind(self, x_grid, k_grid) -> "BoundTestFamily":
        """Tabulate the family on a concrete (x, k) grid."""
        x = np.asarray(x_grid, dtype=float)
        k = np.asarray(k_grid, dtype=float)
        tables = []
        j = 0
        for xc in self.x_centers:
            for kc in self.k_centers:
                wx, wk = self.widths[j % len(self.widths)]
                amp = 1.0 / math.sqrt(math.pi * wx * wk)
                g = amp * np.exp(
                    -0.5 * ((x[:, None] - xc) / wx) ** 2
                    - 0.5 * ((k[None, :] - kc) / wk) ** 2
                )
                tables.append(g)
                j += 1
        return BoundTestFamily(
            family=self,
            x=x,
            k=k,
            tables=np.array(tables),
            weights=np.asarray(self.weights, dtype=float),
        )


@dataclass(frozen=True)
class BoundTestFamily:
    family: TestFamily
    x: np.ndarray
    k: np.ndarray
    tables: np.ndarray  # (J, nx, nk)
    weights: np.ndarray

    def pair(self, W: np.ndarray) -> np.ndarray:
        """Dual pairings <W, g_j> dx dk for all members."""
        W = np.asarray(W)
        if W.shape != self.tables.shape[1:]:
            raise ConfigError(
                f"Wigner array shape {W.shape} does not match the family grid "
                f"{self.tables.shape[1:]}"
            )
        dx = self.x[1] - self.x[0]
        dk = self.k[1] - self.k[0]
        return np.tensordot(self.tables, W, axes=([1, 2], [0, 1])) * dx * dk


def default_test_family() -> TestFamily:
    return TestFamily(
        x_centers=(-6.0, -2.0, 2.0, 6.0),
        k_centers=(-1.5, -0.5, 0.5, 1.5),
        widths=((2.0, 0.8), (4.0, 1.6)),
        weights=tuple(2.0 ** (-(j + 1)) for j in range(16)),
    )


def weak_distance(W1: np.ndarray, W2: np.ndarray, family: BoundTestFamily) -> float:
    """Truncated dual metric sum_j 2^-j |<W1 - W2, g_j>| on a common grid."""
    if np.shape(W1) != np.shape(W2):
        raise ConfigError(f"grid mismatch: {np.shape(W1)} vs {np.shape(W2)}")
    p = family.pair(np.asarray(W1) - np.asarray(W2))
    return float(np.sum(family.weights * np.abs(p)))


# ------------------------------------------------- validation suites ----


@dataclass(frozen=True)
class SuiteRow:
    name: str
    statistic: float
    target: float
    tolerance: float
    passed: bool

    def __str__(self):
        tag = "pass" if self.passed else "FAIL"
        return (
            f"{self.name}: {self.statistic:.6g} vs {self.target:.6g} "
            f"(tol {self.tolerance:.3g}) [{tag}]"
        )


def prop1_suite(
    params: ModelParams,
    wavenumbers,
    *,
    hold: float = 0.3,
    n_samples: int = 100_000,
    seed: int = 0,
    variance_scale: float = 1.0,
) -> list[SuiteRow]:
    """Relaxation-regression suite for the exact per-mode mode updates.

    For each mode, regresses the state after a hold time on the state before
    it: the least-squares slope must equal the per-mode decay factor within
    1% and the residual variance must equal stationary_var * (1 - decay^2)
    within 2%, pooling real and imaginary parts over n_samples stationary
    draws.  A hold of zero is the identity row (slope 1, residual 0).

    variance_scale deliberately mis-scales the injected refresh noise; the
    default 1.0 exercises the shipped synthesizer, anything else is a fault
    injection that the residual-variance check must flag.
    """
    p = np.asarray(wavenumbers, dtype=float)
    modes = medium.build_mode_set(params, p, seed=seed)
    decay = np.exp(-modes.gaps * hold)
    before = np.empty((n_samples, p.size), dtype=complex)
    after = np.empty_like(before)
    for i in range(n_samples):
        medium.reset(modes)
        before[i] = modes.amps
        medium.advance(modes, hold)
        after[i] = modes.amps
    if variance_scale != 1.0:
        after = decay * before + (after - decay * before) * math.sqrt(variance_scale)

    rows = []
    for j in range(p.size):
        xs = np.concatenate((before[:, j].real, before[:, j].imag))
        ys = np.concatenate((after[:, j].real, after[:, j].imag))
        if hold == 0.0:
            slope = 1.0 if np.allclose(xs, ys) else math.nan
            resvar = float(np.mean((ys - xs) ** 2))
            rows.append(SuiteRow(f"slope p={p[j]:g} h=0", slope, 1.0, 0.01, slope == 1.0))
            rows.append(SuiteRow(f"resvar p={p[j]:g} h=0", resvar, 0.0, 1e-12, resvar <= 1e-12))
            continue
        slope = float(np.dot(xs, ys) / np.dot(xs, xs))
        target = float(decay[j])
        ok1 = abs(slope / target - 1.0) < 0.01
        rows.append(SuiteRow(f"slope p={p[j]:g} h={hold:g}", slope, target, 0.01, ok1))
        resid = ys - slope * xs
        resvar = float(resid.var())
        rtarget = float(modes.stationary_var[j] * 0.5 * (1.0 - decay[j] ** 2))
        ok2 = abs(resvar / rtarget - 1.0) < 0.02
        rows.append(SuiteRow(f"resvar p={p[j]:g} h={hold:g}", resvar, rtarget, 0.02, ok2))
    return rows


def covariance_suite(
    params: ModelParams,
    *,
    box_length: float = 2048.0 * math.pi,
    n_grid: int = 65536,
    t_lags=(0.0, 1.0),
    x_cells=(0, 16, 64),
    n_real: int = 10_000,
    ks_samples: int = 10_000,
    ks_hold: float = 7.0,
    seed: int = 1,
) -> list[SuiteRow]:
    """Covariance and stationarity validation of the synthesized medium.

    Checks the ensemble space-time covariance against the band-limited
    quadrature oracle at each lag (3 SE), x -> -x symmetry, stationarity of
    pointwise values under a long hold (two-sample KS, p > 0.01), the
    ordering of temporal decorrelation between the softest and hardest mode,
    and the infrared divergence signature: the lattice sum of spectrum/gap
    grows like p_min^-theta as the box grows (log-log slope within 5%).
    """
    fund = _TWO_PI / box_length
    m = np.arange(1, n_grid // 2)
    p = fund * m
    rng = np.random.default_rng(seed)
    modes = medium.build_mode_set(params, p, weights=np.full(p.size, fund), rng=rng, bins=m, n_grid=n_grid)
    est, se = medium.empirical_covariance(modes, t_lags, x_cells, n_real)
    dx_cell = box_length / n_grid
    rows = []
    band_lo, band_hi = 0.5 * fund, p[-1] + 0.5 * fund
    for it, tl in enumerate(t_lags):
        for ix, xc in enumerate(x_cells):
            oracle = covariance(params, tl, xc * dx_cell, p_lo=band_lo, p_hi=band_hi)
            z = (est[it, ix] - oracle) / se[it, ix]
            rows.append(
                SuiteRow(f"cov t={tl:g} x={xc}dx", float(est[it, ix]), oracle, 3.0 * se[it, ix], abs(z) < 3.0)
            )

    # x -> -x symmetry: compare estimates at opposite spatial cells
    sym_cells = (8, -8)
    est2, se2 = medium.empirical_covariance(modes, (0.0,), sym_cells, n_real // 2)
    gap = abs(est2[0, 0] - est2[0, 1])
    tol = 3.0 * math.hypot(se2[0, 0], se2[0, 1])
    rows.append(SuiteRow("cov symmetry x vs -x", gap, 0.0, tol, gap < tol))

    # stationarity: distribution of field values now vs after a long hold
    a = np.empty(ks_samples)
    b = np.empty(ks_samples)
    probe = 0.37 * box_length
    for i in range(ks_samples):
        medium.reset(modes)
        a[i] = medium.evaluate(modes, probe)
        medium.advance(modes, ks_hold)
        b[i] = medium.evaluate(modes, probe)
    ks = stats.ks_2samp(a, b)
    rows.append(SuiteRow("stationarity KS p-value", float(ks.pvalue), 1.0, 0.01, ks.pvalue > 0.01))

    # decorrelation ordering: soft modes must outlive hard ones.  The hard
    # probe sits where the envelope still carries variance, not at Nyquist.
    j_hard = int(np.argmin(np.abs(p - 2.0)))
    g_soft = spectral_gap(params, p[0])
    g_hard = spectral_gap(params, p[j_hard])
    hold = 1.0 / g_hard
    n_pairs = 4000
    soft = np.empty((n_pairs, 2), dtype=complex)
    hard = np.empty((n_pairs, 2), dtype=complex)
    for i in range(n_pairs):
        medium.reset(modes)
        soft[i, 0], hard[i, 0] = modes.amps[0], modes.amps[j_hard]
        medium.advance(modes, hold)
        soft[i, 1], hard[i, 1] = modes.amps[0], modes.amps[j_hard]
    def lag_corr(z):
        x0 = np.concatenate((z[:, 0].real, z[:, 0].imag))
        x1 = np.concatenate((z[:, 1].real, z[:, 1].imag))
        return float(np.dot(x0, x1) / np.dot(x0, x0))
    c_soft, c_hard = lag_corr(soft), lag_corr(hard)
    rows.append(
        SuiteRow("decorrelation ordering soft>hard", c_soft - c_hard,
                 math.exp(-g_soft * hold) - math.exp(-g_hard * hold), 0.05,
                 c_soft > c_hard)
    )

    # infrared divergence: lattice sum of spectrum/gap vs shrinking p_min
    p_mins = np.array([1e-2, 1e-3, 1e-4, 1e-5])
    sums = []
    for pm in p_mins:
        lat = np.geomspace(pm, p[-1], 20000)
        w = np.gradient(lat)
        sums.append(np.sum(w * spatial_spectrum(params, lat) / spectral_gap(params, lat)))
    theta = derived_exponents(params).theta
    slope = np.polyfit(np.log(p_mins), np.log(sums), 1)[0]
    rows.append(
        SuiteRow("infrared divergence exponent", float(-slope), theta, 0.05 * theta,
                 abs(-slope - theta) < 0.05 * theta)
    )
    return rows


# ---------------------------------------------------- experiment plans ----


@dataclass(frozen=True)
class ExperimentPlan:
    """Declarative description of a ladder experiment.

    model selects the limit being probed: "frac" (momentum diffusion with
    spread eta = eps^(s - s_c), s_c on the decoherence line), "transfer"
    (kinetic regime s = 1, s_c = 0), or "phase" (pure phase modulation at
    s = 1 / (2 kappa_gamma)).
    """

    model: str
    params: ModelParams
    epsilons: tuple
    s: float
    n_realizations: int
    batch: int
    box_length: float
    n_grid: int
    dt: float
    t_final: float
    seed: int
    zeta_nodes: tuple = (-1.5, -0.5, 0.5, 1.5)
    zeta_weights: tuple = (0.2, 0.3, 0.3, 0.2)
    track_modes: tuple = (1, 2, 3, 4)
    snapshot_stride: int = 1
    packet_width: float | None = None  # envelope width; None means box_length/16
    carrier_mode: int = 0  # integer box mode of the initial plane-wave carrier

    def __post_init__(self):
        eps = tuple(self.epsilons)
        if not eps or any(e <= 0.0 or e >= 1.0 for e in eps):
            raise ConfigError("epsilon ladder entries must lie in (0, 1)")
        if len(eps) > 1 and not all(a > b for a, b in zip(eps, eps[1:])):
            raise ConfigError("epsilon ladder must be strictly decreasing")
        if self.model not in ("frac", "transfer", "phase"):
            raise ConfigError(f"unknown model '{self.model}'")
        if self.n_realizations < 1 or self.batch < 1:
            raise ConfigError("need at least one realization and one batch member")
        if abs(sum(self.zeta_weights) - 1.0) > 1e-12:
            raise ConfigError("zeta weights must sum to 1")
        if self.packet_width is not None and not (
            0.0 < self.packet_width < 0.25 * self.box_length
        ):
            raise ConfigError("packet width must lie in (0, box_length/4)")

    def coherence(self) -> float:
        theta = derived_exponents(self.params).theta
        return coherence_scale(self.s, theta)

    def regimes(self) -> list[ScalingRegime]:
        theta = derived_exponents(self.params).theta
        out = []
        for e in self.epsilons:
            if self.model == "frac":
                lo = 1.0 / (1.0 + theta)
                if not (lo < self.s < 1.0):
                    raise ConfigError(
                        "fractional plan requires 1/(1+theta) < s < 1: "
                        f"violated by s = {self.s} (1/(1+theta) = {lo:.6g})"
                    )
                sc = coherence_scale(self.s, theta)
            elif self.model == "transfer":
                if self.s != 1.0:
                    raise ConfigError(f"transfer plan requires s = 1, got s = {self.s}")
                if self.params.gamma <= 0.0:
                    raise ConfigError("transfer plan requires gamma > 0")
                sc = 0.0
            else:
                target = derived_exponents(self.params).phase_scale
                if abs(self.s - target) > 1e-9:
                    raise ConfigError(
                        f"phase plan requires s = 1/(2 kappa_gamma) = {target:.6g}, got {self.s}"
                    )
                sc = self.s
            reg = ScalingRegime(epsilon=e, s=self.s, s_c=sc)
            reg.validate_against(self.params)
            out.append(reg)
        return out


def frac_default_plan(seed: int = 20240) -> ExperimentPlan:
    # t_final is chosen so the largest epsilon already sits several medium
    # correlation times into the dynamics; with a shorter horizon the first
    # rung is still in scattering onset and its distance to the limit is a
    # deterministic gap rather than a shrinking fluctuation.
    return ExperimentPlan(
        model="frac",
        params=ModelParams(),
        epsilons=(0.3, 0.2, 0.1),
        s=0.8,
        n_realizations=24,
        batch=64,
        box_length=64.0,
        n_grid=2048,
        dt=0.02,
        t_final=1.5,
        seed=seed,
    )


def phase_default_plan(seed: int = 31113) -> ExperimentPlan:
    # Design notes.  Three competing error floors pin this geometry.  The
    # packet spatially averages medium modes above ~eps^s/width, which
    # suppresses short-lag phase variance (a shoulder below the 3/2 power
    # law); a narrow packet would fix that but disperses, so the filter
    # then collapses over the horizon and drags the fitted slope up or
    # down depending on which lags it starves.  Minimizing total spreading
    # over the horizon gives width ~ sqrt(eps^s t_final / 2), and a small
    # epsilon keeps that width (and hence the shoulder) small.  At the
    # other end, the box fundamental must stay below the slowest medium
    # scale the top dyadic lag integrates, or the missing infrared band
    # bends the ladder down.  eps = 1e-4 with a 258 pi box balances the
    # two residuals to a predicted slope bias under 0.005, and the filter
    # also removes every mode the coarse step under-resolves, so dt can
    # sit near the packet-filter scale instead of the medium's fastest
    # mode.  The weak envelope keeps cumulative mass exchange (modulus
    # drift) at the few-percent level.
    par = ModelParams(envelope=Envelope(amp=0.01))
    return ExperimentPlan(
        model="phase",
        params=par,
        epsilons=(1e-4,),
        s=derived_exponents(par).phase_scale,
        n_realizations=64,
        batch=1,
        box_length=258.0 * math.pi,
        n_grid=8192,
        dt=0.002,
        t_final=14.0,
        seed=seed,
        track_modes=(1, 2, 3, 4, 5),
        packet_width=0.18,
        carrier_mode=0,
    )


# --------------------------------------------------- phase experiment ----


@dataclass(frozen=True)
class PhaseReport:
    hurst: HurstEstimate
    hurst_target: float
    modulus_drift: float
    increment_ks_pvalue: float
    ambiguous_steps: int
    tracked_wavenumbers: np.ndarray
    n_realizations: int


def phase_experiment(
    plan: ExperimentPlan, *, lag_time: float = 0.4, jobs: int = 1
) -> PhaseReport:
    """Ensemble phase-roughness study at the pure-modulation scale.

    Propagates an ensemble of smooth states at s = 1/(2 kappa_gamma),
    compensates the free dispersion of a few tracked low modes, unwraps
    their phases, and estimates the Hurst exponent of the pooled phase
    paths by aggregated increment variance over 5 dyadic lags starting at
    lag_time.  Also reports the worst relative modulus drift (the limit
    model keeps |zeta| constant) and a KS test of across-ensemble
    half-horizon phase increments.  Per-step phase jumps above pi/2 are
    counted as unwrap ambiguities.
    """
    if plan.model != "phase":
        raise ConfigError("phase_experiment requires a 'phase' plan")
    grid = Grid(plan.box_length, plan.n_grid)
    exps = derived_exponents(plan.params)
    ss = np.random.SeedSequence(plan.seed)
    children = ss.spawn(plan.n_realizations)

    reg = plan.regimes()[-1]  # the smallest epsilon carries the claim
    track = np.asarray(plan.track_modes, dtype=int)
    k_track = _TWO_PI * track / plan.box_length
    idx = track  # fft layout: positive low modes sit at their index
    n_steps = int(round(plan.t_final / plan.dt))
    stride = plan.snapshot_stride
    n_snap = n_steps // stride + 1

    width = plan.packet_width or plan.box_length / 16.0
    zeta = _TWO_PI * plan.carrier_mode / plan.box_length
    phi0 = np.exp(
        -((grid.x - 0.5 * plan.box_length) ** 2) / (4.0 * width**2)
        + 1j * zeta * grid.x
    )
    phi0 /= math.sqrt(np.sum(np.abs(phi0) ** 2) * grid.dx)

    phases = np.empty((plan.n_realizations * track.size, n_snap))
    moduli = np.empty_like(phases)
    kin = 0.5 * reg.epsilon**reg.s * k_track**2

    def one(r: int) -> int:
        prop = Propagator(plan.params, reg, grid, dt=plan.dt, seed=children[r])
        phi = phi0.copy()
        z = np.empty((n_snap, track.size), dtype=complex)
        z[0] = np.fft.fft(phi)[idx] * grid.dx
        for j in range(1, n_snap):
            phi, _ = prop.run(phi, stride)
            t = j * stride * plan.dt
            z[j] = np.fft.fft(phi)[idx] * grid.dx * np.exp(1j * kin * t)
        ang = np.angle(z)
        jumps = np.abs(np.diff(ang, axis=0))
        rows = slice(r * track.size, (r + 1) * track.size)
        phases[rows] = np.unwrap(ang, axis=0).T
        moduli[rows] = np.abs(z).T
        return int(np.sum(np.minimum(jumps, _TWO_PI - jumps) > 0.5 * math.pi))

    ambiguous = sum(_run_indexed(one, plan.n_realizations, jobs))

    snap_dt = stride * plan.dt
    base = max(1, int(round(lag_time / snap_dt)))
    lags = tuple(base * (2**i) for i in range(5))
    est = hurst_estimate(phases, lags=lags)
    drift = float(np.median(np.max(np.abs(moduli / moduli[:, :1] - 1.0), axis=1)))
    # Gaussianity check on increments that are independent across the
    # ensemble: one long-lag increment per realization, lowest tracked mode.
    # Pooled per-step increments share the common slow driver across modes
    # and are serially dependent, which breaks the iid premise of the KS
    # statistic and pins its p-value at 0.
    first = phases[:: track.size]
    inc = first[:, -1] - first[:, n_snap // 2]
    inc = (inc - inc.mean()) / inc.std()
    ks = stats.kstest(inc, "norm")
    return PhaseReport(
        hurst=est,
        hurst_target=exps.kappa0,
        modulus_drift=drift,
        increment_ks_pvalue=float(ks.pvalue),
        ambiguous_steps=ambiguous,
        tracked_wavenumbers=k_track,
        n_realizations=plan.n_realizations,
    )


# ------------------------------------------- decoherence convergence ----


@dataclass(frozen=True)
class LadderRow:
    epsilon: float
    median_distance: float
    iqr: float
    distances: np.ndarray


def _snap_nodes(plan: ExperimentPlan, grid: Grid, regime: ScalingRegime):
    """Per-node (carrier, snapped momentum) pairs on this regime's lattices."""
    pairs = [snap_wavevector(grid, regime, v) for v in plan.zeta_nodes]
    carriers = np.array([K for K, _ in pairs])
    snapped = np.array([ks for _, ks in pairs])
    return carriers, snapped


def _mixture_states(plan: ExperimentPlan, grid: Grid, carriers, draws):
    """Batch of single-carrier states for one realization's mixture."""
    return np.exp(1j * np.outer(carriers[draws], grid.x)) / math.sqrt(plan.box_length)


def decoherence_convergence(plan: ExperimentPlan, *, jobs: int = 1) -> list[LadderRow]:
    """Ladder study: mixture-averaged Wigner distance to the limit model.

    For each epsilon, propagates n_realizations independent media, each
    carrying a common-random-number batch of single-carrier states drawn
    from the plan's momentum mixture; the batch-averaged Wigner transform
    at t_final is compared in the weak metric to the limit evolution of the
    same empirical mixture.  Returns one row per epsilon with the median
    distance and realization IQR.  Only the fractional plan is implemented
    as a dynamics target; transfer-regime plans are refused here (the
    closed-form transport solver covers that limit directly).

    jobs > 1 fans realizations out to a thread pool; per-realization seeds
    are fixed up front and results merge by realization index, so the output
    is identical for any worker count.
    """
    if plan.model != "frac":
        raise ConfigError("decoherence_convergence requires a 'frac' plan")
    regimes = plan.regimes()
    grid = Grid(plan.box_length, plan.n_grid)
    family = default_test_family()
    theta = derived_exponents(plan.params).theta
    rate = frac_damping_rate(plan.params)

    ss = np.random.SeedSequence(plan.seed)
    children = ss.spawn(plan.n_realizations + 1)
    zeta_rng = np.random.default_rng(children[-1])
    weights = np.asarray(plan.zeta_weights, dtype=float)
    draws = zeta_rng.choice(
        len(plan.zeta_nodes), size=(plan.n_realizations, plan.batch), p=weights
    )

    n_steps = int(round(plan.t_final / plan.dt))
    rows = []
    for regime in regimes:
        eta = regime.spread
        k_axis = phasespace.momentum_axis(grid, eta)[0]
        bound = family.bind(grid.x, k_axis)
        dk = k_axis[1] - k_axis[0]
        carriers, snapped = _snap_nodes(plan, grid, regime)

        def one(r: int) -> float:
            counts = np.bincount(draws[r], minlength=len(plan.zeta_nodes)).astype(float)
            counts /= counts.sum()
            # duplicate draws through one medium are the same state, so only
            # the distinct carriers are propagated and the Wigner average is
            # taken with the empirical counts as weights
            live = np.flatnonzero(counts)
            phi = _mixture_states(plan, grid, carriers, live)
            prop = Propagator(plan.params, regime, grid, dt=plan.dt, seed=children[r])
            phi_t, _ = prop.run(phi, n_steps)
            W_bar = np.tensordot(
                counts[live], phasespace.wigner_transform(phi_t, grid, eta), axes=1
            )
            # the limit acts on the same empirical mixture, nodes snapped to
            # the carriers actually propagated
            W0_lim, _ = phasespace.initial_wigner(
                grid, eta, np.full(grid.n, 1.0 / plan.box_length), snapped, counts
            )
            W_lim = frac_diffusion_evolve(W0_lim, dk, plan.t_final, theta=theta, rate=rate)
            return weak_distance(W_bar, W_lim, bound)

        dists = np.array(_run_indexed(one, plan.n_realizations, jobs))
        q1, q2, q3 = np.percentile(dists, [25, 50, 75])
        rows.append(
            LadderRow(
                epsilon=regime.epsilon,
                median_distance=float(q2),
                iqr=float(q3 - q1),
                distances=dists,
            )
        )
    return rows
