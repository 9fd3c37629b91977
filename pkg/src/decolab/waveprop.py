"""Split-step propagation of the scaled dispersive wave equation.

Macroscopic form solved here (d = 1, periodic box [0, L)):

    d phi/dt = i (eps^s / 2) d^2 phi/dx^2
               - i eps^((1-gamma)/2 - s) V(t / eps^(s+gamma), x / eps^s) phi.

Strang splitting with the exact Fourier kinetic map and the exact
Ornstein-Uhlenbeck medium update sampled at the half step; each factor is
unimodular, so the discrete L2 norm is conserved to rounding error.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np

from .errors import ConfigError
from .medium import ModeSet, advance, grid_field, solver_mode_set
from .params import ModelParams, ScalingRegime
from .spectral import spatial_spectrum


@dataclass(frozen=True)
class Grid:
    """Uniform periodic spatial grid on [0, box_length)."""

    box_length: float
    n: int

    def __post_init__(self):
        if not (self.box_length > 0.0):
            raise ConfigError(f"box_length must be > 0, got {self.box_length}")
        if self.n < 4 or self.n % 2:
            raise ConfigError(f"n must be even and >= 4, got {self.n}")

    @property
    def dx(self) -> float:
        return self.box_length / self.n

    @property
    def x(self) -> np.ndarray:
        return np.arange(self.n) * self.dx

    @property
    def wavenumbers(self) -> np.ndarray:
        """Macroscopic dual lattice in FFT order."""
        return 2.0 * np.pi * np.fft.fftfreq(self.n, d=self.dx)


def l2_norm(phi: np.ndarray, grid: Grid) -> float:
    """Discrete L2 norm sqrt(sum |phi|^2 dx) over the last axis."""
    return float(np.sqrt(np.sum(np.abs(phi) ** 2) * grid.dx))


def sample_direction(rng: np.random.Generator, d: int = 1):
    """Uniform random unit vector; for d = 1 this is a fair sign."""
    if d == 1:
        return float(rng.choice((-1.0, 1.0)))
    v = rng.standard_normal(d)
    return v / np.linalg.norm(v)


def snap_wavevector(grid: Grid, regime: ScalingRegime, k0: float):
    """Round a target spread-scale wavevector onto the representable lattice.

    The carrier K = k0 / eta must be a multiple of 2 pi / L for periodicity;
    returns (K, k0_snapped) with k0_snapped = K * eta.
    """
    eta = regime.spread
    fund = 2.0 * np.pi / grid.box_length
    K = fund * round(float(k0) / eta / fund)
    return K, K * eta


def initial_condition(
    grid: Grid,
    regime: ScalingRegime,
    *,
    center: float,
    wavevector: float = 0.0,
    width: float = 1.0,
    kind: str = "gauss",
) -> np.ndarray:
    """Coherent packet  f(x - center) * exp(i K (x - center)),  unit L2 norm.

    wavevector is expressed on the spread scale (the Wigner momentum axis);
    it is snapped to the representable lattice, so the packet is periodic.
    kind 'gauss' uses a Gaussian envelope of rms width `width`; 'sech' a
    smooth non-Gaussian alternative for robustness checks.
    """
    if width <= 0.0:
        raise ConfigError(f"width must be > 0, got {width}")
    x = grid.x
    u = x - float(center)
    if kind == "gauss":
        env = np.exp(-(u * u) / (4.0 * width * width))
    elif kind == "sech":
        env = 1.0 / np.cosh(u / width)
    else:
        raise ConfigError(f"unknown initial condition kind {kind!r}")
    K, _ = snap_wavevector(grid, regime, wavevector)
    phi = env * np.exp(1j * K * u)
    return phi / l2_norm(phi, grid)


def medium_std(params: ModelParams, regime: ScalingRegime, grid: Grid) -> float:
    """Pointwise standard deviation of the synthesized potential."""
    scale = regime.epsilon**regime.s
    fund = scale * 2.0 * np.pi / grid.box_length
    m = np.arange(1, grid.n // 2)
    var = spatial_spectrum(params, fund * m) * fund / (2.0 * np.pi)
    return float(np.sqrt(2.0 * np.sum(var)))


def suggest_dt(
    params: ModelParams,
    regime: ScalingRegime,
    grid: Grid,
    *,
    k_content: float,
    target_phase: float = math.pi / 8.0,
) -> float:
    """Step size keeping per-step kinetic and potential phases below target.

    k_content: largest macroscopic wavenumber carrying appreciable packet
    mass (carrier plus a few envelope widths).  Also resolves the medium
    relaxation at the dominant spectral scale.
    """
    eps = regime.epsilon
    coupling = eps ** ((1.0 - params.gamma) / 2.0 - regime.s)
    sig = medium_std(params, regime, grid)
    dt_pot = target_phase / (coupling * 3.0 * sig) if sig > 0 else math.inf
    kin_rate = eps**regime.s * 0.5 * max(abs(k_content), 1e-12) ** 2
    dt_kin = target_phase / kin_rate
    # medium relaxation: fastest rate among modes the envelope keeps alive
    scale = eps**regime.s
    p_alive = min(scale * math.pi * grid.n / grid.box_length, 3.0)
    g_max = params.nu * p_alive ** (2.0 * params.beta)
    dt_med = 0.25 * eps ** (regime.s + params.gamma) / g_max
    return min(dt_pot, dt_kin, dt_med)


class Propagator:
    """Strang-split integrator bound to one grid, regime, and medium state.

    phi arrays may carry leading batch axes; all realizations share the one
    medium path held in `modes`.
    """

    def __init__(
        self,
        params: ModelParams,
        regime: ScalingRegime,
        grid: Grid,
        *,
        dt: float,
        modes: ModeSet | None = None,
        seed=None,
        deterministic: bool = False,
        warn_phase: float = math.pi / 4.0,
    ):
        if dt <= 0.0:
            raise ConfigError(f"dt must be > 0, got {dt}")
        regime.validate_against(params)
        self.params = params
        self.regime = regime
        self.grid = grid
        self.dt = float(dt)
        self.deterministic = deterministic
        if modes is None:
            modes = solver_mode_set(
                params, regime.epsilon, regime.s, grid.box_length, grid.n, seed=seed
            )
        if modes.n_grid != grid.n:
            raise ConfigError("mode set lattice does not match the grid")
        self.modes = modes
        eps = regime.epsilon
        self.coupling = eps ** ((1.0 - params.gamma) / 2.0 - regime.s)
        self.micro_half = 0.5 * self.dt / eps ** (regime.s + params.gamma)
        k = grid.wavenumbers
        self.kin_half = np.exp(-0.25j * eps**regime.s * k * k * self.dt)
        self.t = 0.0
        pot_phase = self.coupling * 3.0 * medium_std(params, regime, grid) * self.dt
        if pot_phase > warn_phase:
            warnings.warn(
                f"potential phase per step {pot_phase:.3f} rad exceeds "
                f"{warn_phase:.3f}; consider dt <= {suggest_dt(params, regime, grid, k_content=1.0):.3e}",
                stacklevel=2,
            )

    def step(self, phi: np.ndarray) -> np.ndarray:
        """Advance one Strang step: kinetic half, potential kick, kinetic half."""
        phi = np.fft.ifft(self.kin_half * np.fft.fft(phi, axis=-1), axis=-1)
        advance(self.modes, self.micro_half, deterministic=self.deterministic)
        v = grid_field(self.modes)
        phi = np.exp(-1j * self.coupling * self.dt * v) * phi
        advance(self.modes, self.micro_half, deterministic=self.deterministic)
        phi = np.fft.ifft(self.kin_half * np.fft.fft(phi, axis=-1), axis=-1)
        self.t += self.dt
        return phi

    def run(self, phi: np.ndarray, n_steps: int, *, snapshot_every: int | None = None):
        """Advance n_steps; optionally collect phi every snapshot_every steps.

        Returns (phi, snapshots) where snapshots stacks the collected states
        (includes the final state; empty list when snapshot_every is None).
        """
        snaps = []
        for j in range(n_steps):
            phi = self.step(phi)
            if snapshot_every and (j + 1) % snapshot_every == 0:
                snaps.append(phi.copy())
        return phi, snaps


def propagate(
    params: ModelParams,
    regime: ScalingRegime,
    grid: Grid,
    phi0: np.ndarray,
    *,
    t_final: float,
    dt: float,
    seed=None,
    modes: ModeSet | None = None,
    deterministic: bool = False,
    snapshot_every: int | None = None,
):
    """One-call propagation to t_final (snapped to a whole number of steps).

    Returns (phi, snapshots, propagator); the propagator exposes the medium
    state and the actual final time reached.
    """
    n_steps = max(1, round(float(t_final) / dt))
    prop = Propagator(
        params, regime, grid, dt=dt, modes=modes, seed=seed, deterministic=deterministic
    )
    phi, snaps = prop.run(np.asarray(phi0, dtype=complex), n_steps, snapshot_every=snapshot_every)
    return phi, snaps, prop


def free_gaussian(grid: Grid, regime: ScalingRegime, t: float, *, center, wavevector, width):
    """Closed-form free evolution of the Gaussian packet from initial_condition.

    Valid while the packet stays well inside the box.  Used as the exact
    reference for solver convergence checks.
    """
    K, _ = snap_wavevector(grid, regime, wavevector)
    c = regime.epsilon**regime.s
    w2 = width * width
    # psi(0,x) = (2 pi w^2)^(-1/4) exp(-u0^2/(4 w^2) + i K u0),  u0 = x - center;
    # dispersion i(c/2) d_xx widens w^2 -> w^2 + i c t/2 and transports at c K
    u = grid.x - float(center) - c * K * t
    wt = w2 + 0.5j * c * t
    amp = (2.0 * np.pi) ** (-0.25) * np.sqrt(width) / np.sqrt(wt)
    return (
        amp
        * np.exp(-(u * u) / (4.0 * wt))
        * np.exp(1j * K * u)
        * np.exp(0.5j * c * K * K * t)
    )
