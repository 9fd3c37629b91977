"""Samplers for the stochastic limit objects.

Three families live here: fractional Brownian phase modulation, the
Hermitian-paired Brownian mode field driving random Wigner realizations,
and the compound-Poisson momentum process giving the Monte Carlo
representation of the kinetic transport solution.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.interpolate import PchipInterpolator, RectBivariateSpline

from .errors import ConfigError, NumericalError
from .params import ModelParams
from .spectral import frac_damping_rate, jump_rate, transfer_kernel

_TWO_PI = 2.0 * math.pi


# ---------------------------------------------------------------- fBm ----


@dataclass(frozen=True)
class FbmPath:
    """Fractional Brownian paths on a uniform time grid, B(0) = 0.

    values has shape (n_paths, n_steps + 1); hurst and the generating seed
    are carried for provenance.
    """

    values: np.ndarray
    hurst: float
    dt: float
    seed: object = None

    @property
    def times(self) -> np.ndarray:
        return np.arange(self.values.shape[-1]) * self.dt


def fbm_sample(kappa: float, n_steps: int, dt: float, seed=None, *, n_paths: int = 1, rng=None) -> FbmPath:
    """Exact-in-law fractional Brownian motion via circulant embedding.

    The fractional Gaussian noise covariance is embedded in a circulant
    matrix whose FFT gives the sampling spectrum; a non-positive embedding
    is retried at doubled size before giving up (never observed for the
    minimal embedding in this Hurst range, but the fallback is cheap).
    """
    if not (0.0 < kappa < 1.0):
        raise ConfigError(f"hurst index must lie in (0, 1), got {kappa}")
    if n_steps < 1 or dt <= 0.0:
        raise ConfigError("need n_steps >= 1 and dt > 0")
    if rng is None:
        rng = np.random.default_rng(seed)
    n = int(n_steps)
    h2 = 2.0 * kappa

    pad = 1
    while True:
        m = 2 * n * pad
        j = np.arange(m // 2 + 1, dtype=float)
        gamma = 0.5 * (
            np.abs(j + 1) ** h2 - 2.0 * np.abs(j) ** h2 + np.abs(j - 1) ** h2
        )
        row = np.concatenate((gamma, gamma[-2:0:-1]))
        lam = np.fft.fft(row).real
        floor = lam.min()
        if floor > -1e-12 * lam.max():
            lam = np.maximum(lam, 0.0)
            break
        pad *= 2
        if pad > 16:
            raise NumericalError(
                "circulant embedding stayed non-positive-definite", -floor
            )

    half = m // 2
    scale = np.sqrt(lam / m)
    z = rng.standard_normal((n_paths, m))
    w = np.empty((n_paths, m), dtype=complex)
    w[:, 0] = scale[0] * z[:, 0] * math.sqrt(2.0)
    w[:, half] = scale[half] * z[:, half] * math.sqrt(2.0)
    re = z[:, 1:half]
    im = z[:, half + 1:]
    w[:, 1:half] = scale[1:half] * (re + 1j * im)
    w[:, half + 1:] = np.conj(w[:, half - 1:0:-1])
    noise = (np.fft.fft(w, axis=1).real)[:, :n] / math.sqrt(2.0)
    noise *= dt**kappa
    paths = np.concatenate(
        (np.zeros((n_paths, 1)), np.cumsum(noise, axis=1)), axis=1
    )
    return FbmPath(values=paths, hurst=kappa, dt=dt, seed=seed)


def phase_limit_sample(D: float, fbm: FbmPath, zeta_hat0: complex) -> np.ndarray:
    """Limiting phase-modulated mode: zeta_hat0 * exp(i sqrt(D) B(t)).

    Modulus is constant by construction; D = 0 returns a constant path.
    """
    if D < 0.0:
        raise ConfigError(f"variance coefficient D must be >= 0, got {D}")
    return zeta_hat0 * np.exp(1j * math.sqrt(D) * fbm.values)


@dataclass(frozen=True)
class HurstEstimate:
    value: float
    ci_low: float
    ci_high: float
    degenerate: bool
    lags: np.ndarray
    lag_variances: np.ndarray


def hurst_estimate(path, *, lags=(1, 2, 4, 8, 16), n_boot: int = 200, seed=0) -> HurstEstimate:
    """Aggregated-variance Hurst estimator with a path-ensemble bootstrap CI.

    path: one real path (n,) or an ensemble (n_paths, n); needs >= 2^10 total
    samples and >= 5 dyadic lags.  A slope pinned at the smooth-path ceiling
    (estimate > 0.99) raises the degenerate flag: the input has a dominant
    deterministic trend and the scaling regression is meaningless.
    """
    arr = np.atleast_2d(np.asarray(path, dtype=float))
    lags = np.asarray(sorted(lags), dtype=int)
    if lags.size < 5:
        raise ConfigError("need at least 5 lags")
    if arr.shape[-1] < 1024:
        raise ConfigError(f"path too short: {arr.shape[-1]} < 1024 samples")
    if arr.shape[-1] <= 2 * lags.max():
        raise ConfigError("path too short for the largest lag")

    def slope_of(rows: np.ndarray) -> tuple[float, np.ndarray]:
        v = np.array(
            [np.mean((rows[:, lag:] - rows[:, :-lag]) ** 2) for lag in lags]
        )
        if np.any(v <= 0.0):
            return 1.0, v
        coef = np.polyfit(np.log(lags), np.log(v), 1)
        return 0.5 * coef[0], v

    est, variances = slope_of(arr)

    rng = np.random.default_rng(seed)
    groups = arr if arr.shape[0] >= 4 else _split_rows(arr, 8)
    boots = np.empty(n_boot)
    for b in range(n_boot):
        idx = rng.integers(0, groups.shape[0], groups.shape[0])
        boots[b], _ = slope_of(groups[idx])
    lo, hi = np.percentile(boots, [2.5, 97.5])
    return HurstEstimate(
        value=float(est),
        ci_low=float(lo),
        ci_high=float(hi),
        degenerate=bool(est > 0.99),
        lags=lags,
        lag_variances=variances,
    )


def _split_rows(arr: np.ndarray, pieces: int) -> np.ndarray:
    n = arr.shape[-1]
    seg = n // pieces
    if seg < 64:
        return arr
    chunks = [arr[0, i * seg:(i + 1) * seg] for i in range(pieces)]
    return np.stack([c - c[0] for c in chunks])


# ------------------------------------------------ Brownian mode field ----


@dataclass(frozen=True)
class BrownianFieldPath:
    """Hermitian-paired Brownian mode field on a time grid.

    values[i, j] is the complex amplitude of mode p_j at time t_i, scaled so
    E|values[i, j]|^2 = t_i * weights[j] / p_j**(1 + theta); the negative
    wavenumber partner is the conjugate.
    """

    wavenumbers: np.ndarray
    weights: np.ndarray
    times: np.ndarray
    values: np.ndarray
    theta: float

    def pair_with(self, test_values: np.ndarray) -> np.ndarray:
        """Real pairing <field(t), phi> = 2 Re sum_j values conj(phi(p_j))."""
        return 2.0 * np.real(self.values @ np.conj(np.asarray(test_values)))


def log_mode_ladder(p_min: float, p_max: float, n_modes: int):
    """Log-spaced radial modes with exact cell weights for power-law sums."""
    if not (0.0 < p_min < p_max) or n_modes < 8:
        raise ConfigError("need 0 < p_min < p_max and >= 8 modes")
    edges = np.geomspace(p_min, p_max, n_modes + 1)
    p = np.sqrt(edges[:-1] * edges[1:])
    w = np.diff(edges)
    return p, w


def brownian_field_sample(
    params: ModelParams,
    wavenumbers,
    weights,
    time_grid,
    seed=None,
    *,
    rng=None,
) -> BrownianFieldPath:
    """Independent complex Brownian increments per mode, variances as stated.

    Increment over [t_i, t_{i+1}] has E|dB_j|^2 = dt * w_j / p_j**(1+theta);
    time_grid must start at 0 (the zero field) and increase.
    """
    p = np.asarray(wavenumbers, dtype=float)
    w = np.asarray(weights, dtype=float)
    t = np.asarray(time_grid, dtype=float)
    if p.ndim != 1 or p.size == 0 or np.any(p <= 0.0):
        raise ConfigError("wavenumbers must be positive")
    if w.shape != p.shape:
        raise ConfigError("weights must match wavenumbers")
    if t.ndim != 1 or t[0] != 0.0 or np.any(np.diff(t) <= 0.0):
        raise ConfigError("time grid must start at 0 and strictly increase")
    theta = 2.0 * (params.alpha + params.beta - 1.0)
    if rng is None:
        rng = np.random.default_rng(seed)
    var = w / p ** (1.0 + theta)
    vals = np.zeros((t.size, p.size), dtype=complex)
    for i in range(1, t.size):
        dt = t[i] - t[i - 1]
        std = np.sqrt(0.5 * dt * var)
        z = rng.standard_normal((2, p.size))
        vals[i] = vals[i - 1] + std * (z[0] + 1j * z[1])
    return BrownianFieldPath(
        wavenumbers=p, weights=w, times=t, values=vals, theta=theta
    )


@dataclass(frozen=True)
class WignerSampleGeometry:
    """Cached trigonometric geometry for repeated Wigner-limit sampling."""

    cos_xp: np.ndarray  # (n_x, M)
    sin_xp: np.ndarray  # (n_x, M)
    sin_qp: np.ndarray  # (M, n_k) : 4 sin(q p_j / 2), Nyquist column zeroed
    coupling: float  # sqrt(2 a(0) / ((2 pi)^d nu))


def make_wigner_geometry(
    params: ModelParams, x_grid, k_grid, wavenumbers
) -> WignerSampleGeometry:
    x = np.asarray(x_grid, dtype=float)
    k = np.asarray(k_grid, dtype=float)
    p = np.asarray(wavenumbers, dtype=float)
    n_k = k.size
    if n_k % 2:
        raise ConfigError("momentum grid length must be even")
    dk = k[1] - k[0]
    q = _TWO_PI * np.fft.fftfreq(n_k, d=dk)
    s = 4.0 * np.sin(0.5 * np.outer(p, q))
    s[:, n_k // 2] = 0.0  # unpaired Nyquist column: keep the multiplier real
    xp = np.outer(x, p)
    coupling = math.sqrt(2.0 * params.a0 / (_TWO_PI**params.d * params.nu))
    return WignerSampleGeometry(
        cos_xp=np.cos(xp), sin_xp=np.sin(xp), sin_qp=s, coupling=coupling
    )


def stochastic_wigner_sample(
    W0: np.ndarray,
    field_path: BrownianFieldPath,
    t: float,
    x_grid,
    k_grid,
    *,
    params: ModelParams | None = None,
    geometry: WignerSampleGeometry | None = None,
    imag_tol: float = 1e-9,
) -> np.ndarray:
    """One realization of the random Wigner limit at time t.

    Applies the unimodular momentum-frequency multiplier exp(i c Y(x, q))
    with Y assembled from the Brownian mode field; Hermitian pairing makes Y
    real and odd in q, so the output is real and each realization conserves
    the phase-space L2 norm exactly.
    """
    ti = np.searchsorted(field_path.times, t)
    if ti >= field_path.times.size or field_path.times[ti] != t:
        raise ConfigError(f"t = {t} is not on the field path's time grid")
    W0 = np.asarray(W0, dtype=float)
    if geometry is None:
        if params is None:
            raise ConfigError("provide params or a prebuilt geometry")
        geometry = make_wigner_geometry(params, x_grid, k_grid, field_path.wavenumbers)
    z = field_path.values[ti]
    if not np.any(z):
        return W0.copy()
    y = geometry.cos_xp @ (z.imag[:, None] * geometry.sin_qp) + geometry.sin_xp @ (
        z.real[:, None] * geometry.sin_qp
    )
    spec = np.fft.fft(np.fft.ifftshift(W0, axes=1), axis=1)
    out = np.fft.ifft(spec * np.exp(1j * geometry.coupling * y), axis=1)
    resid = float(np.max(np.abs(out.imag)))
    ref = float(np.max(np.abs(out.real))) or 1.0
    if resid > imag_tol * ref:
        raise NumericalError("Wigner-limit realization lost realness", resid)
    return np.fft.fftshift(out.real, axes=1)


# -------------------------------------------------- Levy jump process ----


class JumpSampler:
    """Inverse-CDF sampler for jump magnitudes with |p| >= delta (d = 1).

    The radial density a(p) p^(-1-theta) is integrated per log-spaced cell
    with fixed-order Gauss-Legendre, cumulated, and inverted by a monotone
    (PCHIP) spline, built once per parameter set.
    """

    def __init__(self, params: ModelParams, delta: float, *, p_hi: float | None = None, n_cells: int = 4096):
        if params.d != 1:
            raise NotImplementedError("jump sampling implemented for d = 1")
        if delta <= 0.0:
            raise ConfigError(f"delta must be > 0, got {delta}")
        theta = 2.0 * (params.alpha + params.beta - 1.0)
        if p_hi is None:
            # envelope tail: residual mass beyond is below any tolerance used here
            p_hi = max(9.0, 3.0 * delta)
        edges = np.geomspace(delta, p_hi, n_cells + 1)
        nodes, wts = np.polynomial.legendre.leggauss(16)
        mid = 0.5 * (edges[1:] + edges[:-1])
        half = 0.5 * np.diff(edges)
        pts = mid[:, None] + half[:, None] * nodes[None, :]
        dens = params.envelope.value(pts) * pts ** (-1.0 - theta)
        cell_mass = (dens * wts[None, :]).sum(axis=1) * half
        cdf = np.concatenate(([0.0], np.cumsum(cell_mass)))
        if cdf[-1] > 0.0:
            cdf /= cdf[-1]
            # drop knots where the cumulated mass underflows (envelope tail);
            # the trimmed magnitudes carry probability below fp resolution
            keep = np.concatenate(([True], np.diff(cdf) > 0.0))
            self._inverse = PchipInterpolator(cdf[keep], edges[keep])
        else:
            # decoupled medium: zero jump rate, the sampler is never exercised
            self._inverse = None
        self.delta = float(delta)
        self.p_hi = float(p_hi)

    def __call__(self, u: np.ndarray) -> np.ndarray:
        if self._inverse is None:
            return np.zeros_like(np.asarray(u, dtype=float))
        return self._inverse(u)


@dataclass(frozen=True)
class LevyPath:
    """One compound-Poisson momentum path: full jump record and running sums."""

    jump_times: np.ndarray
    jumps: np.ndarray
    delta: float
    horizon: float

    def terminal(self) -> tuple[float, float]:
        """(L_t, int_0^t L_s ds) at the horizon; the integral is exact for
        the piecewise-constant path."""
        t = self.horizon
        return (
            float(self.jumps.sum()),
            float(np.sum(self.jumps * (t - self.jump_times))),
        )


def levy_sample(params: ModelParams, t: float, delta: float, seed=None, *, rng=None, sampler: JumpSampler | None = None) -> LevyPath:
    """One jump-process realization on [0, t] with IR cutoff delta."""
    if t < 0.0:
        raise ConfigError(f"t must be >= 0, got {t}")
    if rng is None:
        rng = np.random.default_rng(seed)
    if sampler is None:
        sampler = JumpSampler(params, delta)
    lam = jump_rate(params, delta)
    n = rng.poisson(lam * t) if t > 0.0 else 0
    times = np.sort(rng.uniform(0.0, t, n))
    mags = sampler(rng.random(n))
    signs = rng.integers(0, 2, n) * 2.0 - 1.0
    return LevyPath(jump_times=times, jumps=mags * signs, delta=delta, horizon=t)


def levy_terminal_batch(
    params: ModelParams,
    t: float,
    delta: float,
    n_paths: int,
    *,
    rng,
    sampler: JumpSampler | None = None,
    rate: float | None = None,
    chunk: int = 1500,
):
    """Vectorized terminal statistics of n_paths jump processes.

    Returns (L_t, integral, counts) arrays of length n_paths; the integral
    uses the exact piecewise-constant formula sum_i J_i (t - tau_i).  Chunked
    to bound memory at the mean rate Lambda(delta) * t jumps per path.
    """
    if sampler is None:
        sampler = JumpSampler(params, delta)
    if rate is None:
        rate = jump_rate(params, delta)
    L = np.empty(n_paths)
    I = np.empty(n_paths)
    counts = np.empty(n_paths, dtype=np.int64)
    done = 0
    while done < n_paths:
        m = min(chunk, n_paths - done)
        c = rng.poisson(rate * t, m)
        tot = int(c.sum())
        mags = sampler(rng.random(tot))
        signs = rng.integers(0, 2, tot) * 2.0 - 1.0
        taus = rng.uniform(0.0, t, tot)
        jumps = mags * signs
        ids = np.repeat(np.arange(m), c)
        L[done:done + m] = np.bincount(ids, weights=jumps, minlength=m)
        I[done:done + m] = np.bincount(ids, weights=jumps * (t - taus), minlength=m)
        counts[done:done + m] = c
        done += m
    return L, I, counts


def small_jump_bias_bound(params: ModelParams, delta: float, t: float, lipschitz: float) -> float:
    """First-moment bound on the bias from dropping jumps below delta.

    The omitted component has E|L^small_t| <= t * int_{|p|<delta} |p| sigma(p) dp
    <= t * (2 a(0) / (pi nu)) delta^(1-theta) / (1-theta) (the envelope is
    maximal at the origin); its time integral adds the t^2/2 term, and a
    Lipschitz constant of the probed observable converts momentum and
    position displacement into value error.
    """
    if params.d != 1:
        raise NotImplementedError("bias bound implemented for d = 1")
    theta = 2.0 * (params.alpha + params.beta - 1.0)
    moment = (
        2.0 * params.a0 / (math.pi * params.nu) * delta ** (1.0 - theta) / (1.0 - theta)
    )
    return lipschitz * moment * (t + 0.5 * t * t)


def interpolate_wigner(W: np.ndarray, x_grid, k_grid, *, edge_tol: float = 1e-8):
    """Cubic-spline evaluator for a gridded Wigner array, zero outside the box.

    Requires the data to have decayed at the grid edges (relative edge_tol),
    so the zero extension is consistent; raises ConfigError otherwise.
    """
    W = np.asarray(W, dtype=float)
    x = np.asarray(x_grid, dtype=float)
    k = np.asarray(k_grid, dtype=float)
    edge = max(
        np.abs(W[0, :]).max(),
        np.abs(W[-1, :]).max(),
        np.abs(W[:, 0]).max(),
        np.abs(W[:, -1]).max(),
    )
    if edge > edge_tol * np.abs(W).max():
        raise ConfigError(
            "Wigner data has not decayed at the grid edge; zero extension "
            f"would be inconsistent (edge level {edge:.3e})"
        )
    spline = RectBivariateSpline(x, k, W, kx=3, ky=3)

    def evaluate(xq, kq):
        xq = np.asarray(xq, dtype=float)
        kq = np.asarray(kq, dtype=float)
        inside = (
            (xq >= x[0]) & (xq <= x[-1]) & (kq >= k[0]) & (kq <= k[-1])
        )
        out = np.zeros(np.broadcast(xq, kq).shape)
        if np.any(inside):
            xi = np.broadcast_to(xq, out.shape)[inside]
            ki = np.broadcast_to(kq, out.shape)[inside]
            out[inside] = spline(xi, ki, grid=False)
        return out

    evaluate.x_range = (float(x[0]), float(x[-1]))
    evaluate.k_range = (float(k[0]), float(k[-1]))
    return evaluate


def levy_mc_solution(
    W0,
    params: ModelParams,
    t: float,
    probes,
    n_paths: int,
    delta: float,
    seed=None,
    *,
    rng=None,
    chunk: int = 1500,
):
    """Monte Carlo estimate of the transport solution at probe (x, k) points.

    W0: callable (x, k) -> values, vectorized (see interpolate_wigner).
    Returns (estimates, standard_errors).  All probes share the same path
    ensemble; accumulation order is fixed, so results are reproducible for a
    given seed regardless of how callers schedule the chunks.
    """
    probes = np.asarray(probes, dtype=float)
    if probes.ndim != 2 or probes.shape[1] != 2:
        raise ConfigError("probes must be an (n, 2) array of (x, k) points")
    if hasattr(W0, "x_range"):
        for xq, kq in probes:
            if not (W0.x_range[0] <= xq <= W0.x_range[1]) or not (
                W0.k_range[0] <= kq <= W0.k_range[1]
            ):
                raise ConfigError(f"probe ({xq}, {kq}) outside the data domain")
    if rng is None:
        rng = np.random.default_rng(seed)
    sampler = JumpSampler(params, delta)
    rate = jump_rate(params, delta)
    acc = np.zeros(probes.shape[0])
    acc2 = np.zeros(probes.shape[0])
    done = 0
    while done < n_paths:
        m = min(chunk, n_paths - done)
        L, I, _ = levy_terminal_batch(
            params, t, delta, m, rng=rng, sampler=sampler, rate=rate, chunk=m
        )
        for i, (xq, kq) in enumerate(probes):
            vals = W0(xq - t * kq - I, kq + L)
            acc[i] += vals.sum()
            acc2[i] += np.square(vals).sum()
        done += m
    mean = acc / n_paths
    var = np.maximum(acc2 / n_paths - mean * mean, 0.0)
    se = np.sqrt(var / n_paths)
    return mean, se
