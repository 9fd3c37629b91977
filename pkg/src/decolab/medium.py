"""Synthesis of the random potential from Fourier modes.

The field is a finite Hermitian sum

    V(t, x) = sum_j [ A_j(t) exp(i p_j x) + conj ],   p_j > 0,

where each complex amplitude A_j follows an independent Ornstein-Uhlenbeck
process with relaxation rate g(p_j) and stationary variance

    E|A_j|^2 = S0(p_j) w_j / (2 pi)^d ,

S0 the spatial spectrum and w_j the spectral cell width carried by the mode.
Time stepping uses the exact OU transition, so statistics are unbiased for
any step size.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import ConfigError
from .params import ModelParams
from .spectral import spatial_spectrum, spectral_gap


@dataclass
class ModeSet:
    """State of a finite Fourier-mode representation of the potential.

    amps holds the positive-wavenumber complex amplitudes; the conjugate
    partners are implicit.  bins/n_grid are set when the wavenumbers sit on
    an FFT lattice, enabling exact grid synthesis via irfft.
    """

    params: ModelParams
    wavenumbers: np.ndarray  # (M,) positive
    weights: np.ndarray  # (M,) spectral cell widths
    gaps: np.ndarray  # (M,) relaxation rates
    stationary_var: np.ndarray  # (M,) E|A_j|^2
    amps: np.ndarray  # (M,) complex state
    rng: np.random.Generator
    bins: np.ndarray | None = None  # FFT bin index per mode, if on a lattice
    n_grid: int | None = None

    def __len__(self) -> int:
        return self.wavenumbers.size


def build_mode_set(
    params: ModelParams,
    wavenumbers,
    weights=None,
    *,
    seed=None,
    rng=None,
    bins=None,
    n_grid=None,
) -> ModeSet:
    """Assemble a ModeSet at the given positive wavenumbers.

    weights=None infers cell widths from midpoints of the sorted wavenumber
    sequence (uniform lattices get their exact spacing).  The amplitude state
    is drawn from the stationary law immediately.
    """
    if params.d != 1:
        raise NotImplementedError("mode synthesis implemented for d = 1")
    p = np.asarray(wavenumbers, dtype=float)
    if p.ndim != 1 or p.size == 0:
        raise ConfigError("wavenumbers must be a non-empty 1-d sequence")
    if np.any(p <= 0.0) or np.any(np.diff(p) <= 0.0):
        raise ConfigError("wavenumbers must be positive and strictly increasing")
    if weights is None:
        mid = 0.5 * (p[1:] + p[:-1])
        lo = np.concatenate(([max(p[0] - (mid[0] - p[0]), 0.5 * p[0])], mid)) if p.size > 1 else np.array([0.5 * p[0]])
        hi = np.concatenate((mid, [p[-1] + (p[-1] - mid[-1])])) if p.size > 1 else np.array([1.5 * p[0]])
        w = hi - lo
    else:
        w = np.asarray(weights, dtype=float)
        if w.shape != p.shape or np.any(w <= 0.0):
            raise ConfigError("weights must be positive and match wavenumbers")
    var = spatial_spectrum(params, p) * w / (2.0 * np.pi) ** params.d
    gaps = spectral_gap(params, p)
    if rng is None:
        rng = np.random.default_rng(seed)
    if bins is not None:
        bins = np.asarray(bins, dtype=int)
        if n_grid is None or bins.shape != p.shape:
            raise ConfigError("bins require a matching n_grid")
    modes = ModeSet(
        params=params,
        wavenumbers=p,
        weights=w,
        gaps=gaps,
        stationary_var=var,
        amps=np.empty(p.size, dtype=complex),
        rng=rng,
        bins=bins,
        n_grid=n_grid,
    )
    reset(modes)
    return modes


def solver_mode_set(
    params: ModelParams,
    epsilon: float,
    s: float,
    box_length: float,
    n_grid: int,
    *,
    seed=None,
    rng=None,
) -> ModeSet:
    """Mode set aligned with a propagation grid of n_grid points on [0, L).

    Microscopic wavenumbers are p_m = epsilon**s * (2 pi m / L) for
    m = 1 .. n_grid/2 - 1, so that p_m * (x/epsilon**s) lands exactly on the
    macroscopic FFT lattice and grid synthesis is a single irfft.  The m = 0
    bin is the spectral pole (excluded); the Nyquist bin is dropped to keep a
    clean conjugate pairing.
    """
    if n_grid < 4 or n_grid % 2:
        raise ConfigError(f"n_grid must be even and >= 4, got {n_grid}")
    scale = float(epsilon) ** float(s)
    fundamental = scale * 2.0 * np.pi / float(box_length)
    m = np.arange(1, n_grid // 2)
    return build_mode_set(
        params,
        fundamental * m,
        np.full(m.size, fundamental),
        seed=seed,
        rng=rng,
        bins=m,
        n_grid=n_grid,
    )


def reset(modes: ModeSet) -> None:
    """Redraw the amplitude state from the stationary law."""
    std = np.sqrt(0.5 * modes.stationary_var)
    z = modes.rng.standard_normal((2, len(modes)))
    modes.amps = std * (z[0] + 1j * z[1])


def advance(modes: ModeSet, dt: float, *, deterministic: bool = False) -> None:
    """Exact OU transition over a time step dt (microscopic time units).

    deterministic=True applies only the mean flow exp(-g dt) with no noise
    injection; useful for convergence studies that need a frozen medium with
    a smooth, known time dependence.
    """
    if dt < 0.0:
        raise ConfigError(f"dt must be >= 0, got {dt}")
    decay = np.exp(-modes.gaps * dt)
    modes.amps *= decay
    if not deterministic:
        std = np.sqrt(0.5 * modes.stationary_var * (1.0 - decay * decay))
        z = modes.rng.standard_normal((2, len(modes)))
        modes.amps += std * (z[0] + 1j * z[1])


def evaluate(modes: ModeSet, x):
    """Field values V(x) at arbitrary microscopic positions (direct sum)."""
    x = np.atleast_1d(np.asarray(x, dtype=float))
    phase = np.outer(x, modes.wavenumbers)
    out = 2.0 * (np.cos(phase) @ modes.amps.real - np.sin(phase) @ modes.amps.imag)
    return out if out.size > 1 else float(out[0])


def grid_field(modes: ModeSet) -> np.ndarray:
    """Field on the n_grid-point lattice the modes were built for (exact irfft)."""
    if modes.bins is None:
        raise ConfigError("grid_field requires a lattice mode set (bins/n_grid)")
    n = modes.n_grid
    spec = np.zeros(n // 2 + 1, dtype=complex)
    spec[modes.bins] = modes.amps
    return n * np.fft.irfft(spec, n)


def empirical_covariance(modes: ModeSet, t_lags, x_cells, n_real: int):
    """Monte Carlo estimate of E[V(t, x0 + x) V(0, x0)] on the synthesis grid.

    t_lags: increasing microscopic time lags (first may be 0).
    x_cells: integer grid-cell offsets; one cell spans 2 pi / (n_grid * p_1)
    microscopic length units, p_1 the fundamental wavenumber.
    Averages over both realizations and grid translations; returns
    (estimates, standard_errors) with shape (len(t_lags), len(x_cells)).
    Standard errors treat realizations (not translations) as independent.
    """
    if modes.bins is None:
        raise ConfigError("empirical_covariance requires a lattice mode set")
    t_lags = np.asarray(t_lags, dtype=float)
    if np.any(np.diff(t_lags) < 0.0) or np.any(t_lags < 0.0):
        raise ConfigError("t_lags must be non-negative and sorted")
    cells = np.asarray(x_cells, dtype=int)
    acc = np.zeros((t_lags.size, cells.size))
    acc2 = np.zeros_like(acc)
    for _ in range(n_real):
        reset(modes)
        base = grid_field(modes)
        t_prev = 0.0
        row = np.empty_like(acc)
        for i, t in enumerate(t_lags):
            if t > t_prev:
                advance(modes, t - t_prev)
                t_prev = t
            f = grid_field(modes) if t > 0.0 else base
            for j, c in enumerate(cells):
                row[i, j] = np.mean(base * np.roll(f, -c))
        acc += row
        acc2 += row * row
    est = acc / n_real
    var = np.maximum(acc2 / n_real - est * est, 0.0)
    se = np.sqrt(var / n_real)
    return est, se
