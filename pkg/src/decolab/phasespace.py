"""Discrete Wigner transforms on the propagation grid.

The spread-scale Wigner function of a field phi on the periodic grid is

    W(x_a, k_l) = (dy / 2 pi) * sum_m exp(2 pi i l m / N)
                  phi(x_{a-m}) conj(phi(x_{a+m})),

with window coordinate y_m = 2 m dx / eta, eta the spread parameter, and
momentum lattice k_l = pi eta l / L for l = -N/2 .. N/2-1.  Two identities
hold exactly in this discretization and are enforced as invariants:
the k-marginal equals |phi(x)|^2, and conjugate-pair symmetry makes W real.
"""

from __future__ import annotations

import numpy as np

from .errors import ConfigError, NumericalError
from .params import ScalingRegime
from .waveprop import Grid


def momentum_axis(grid: Grid, eta: float):
    """Ascending momentum lattice (k values, spacing) for spread eta."""
    if eta <= 0.0:
        raise ConfigError(f"eta must be > 0, got {eta}")
    n = grid.n
    dk = np.pi * eta / grid.box_length
    l = np.arange(-n // 2, n // 2)
    return l * dk, dk


def wigner_transform(phi: np.ndarray, grid: Grid, eta: float, *, imag_tol: float = 1e-10):
    """Wigner array W[a, l] (x rows, ascending k columns) of one field.

    Accepts a single (n,) field or a batch (..., n); returns matching
    (..., n, n).  Raises NumericalError if the imaginary residual exceeds
    imag_tol relative to the real part's scale.
    """
    phi = np.asarray(phi, dtype=complex)
    n = grid.n
    if phi.shape[-1] != n:
        raise ConfigError("field length does not match the grid")
    k_vals, _ = momentum_axis(grid, eta)
    dy = 2.0 * grid.dx / eta
    batch_shape = phi.shape[:-1]
    flat = phi.reshape(-1, n)
    out = np.empty((flat.shape[0], n, n))
    m_phys = np.fft.fftfreq(n, 1.0 / n).astype(int)  # 0..N/2-1, -N/2..-1
    a = np.arange(n)
    ia = (a[:, None] - m_phys[None, :]) % n
    ib = (a[:, None] + m_phys[None, :]) % n
    scale = dy / (2.0 * np.pi)
    for b, f in enumerate(flat):
        corr = f[ia] * np.conj(f[ib])
        w = n * np.fft.ifft(corr, axis=1)
        resid = float(np.max(np.abs(w.imag)))
        ref = float(np.max(np.abs(w.real))) or 1.0
        if resid > imag_tol * ref:
            raise NumericalError("Wigner transform lost conjugate symmetry", resid)
        out[b] = scale * np.fft.fftshift(w.real, axes=1)
    return out.reshape(*batch_shape, n, n)


def mixture_average(fields, grid: Grid, eta: float):
    """Mean Wigner function over an ensemble of fields (iterable or array).

    Streaming accumulation: memory stays one Wigner array regardless of the
    ensemble size.  Returns (W_mean, count).
    """
    acc = None
    count = 0
    for f in fields:
        w = wigner_transform(np.asarray(f), grid, eta)
        if w.ndim != 2:
            raise ConfigError("mixture_average expects an iterable of single fields")
        acc = w if acc is None else acc + w
        count += 1
    if count == 0:
        raise ConfigError("mixture_average needs at least one field")
    return acc / count, count


def k_marginal(W: np.ndarray, grid: Grid, eta: float) -> np.ndarray:
    """Momentum marginal sum_l W dk; equals |phi|^2 exactly for a pure state."""
    _, dk = momentum_axis(grid, eta)
    return np.sum(W, axis=-1) * dk


def l2_norm(W: np.ndarray, grid: Grid, eta: float) -> float:
    """Phase-space L2 norm sqrt(sum W^2 dx dk)."""
    _, dk = momentum_axis(grid, eta)
    return float(np.sqrt(np.sum(np.square(W)) * grid.dx * dk))


def initial_wigner(grid: Grid, eta: float, density_x: np.ndarray, zeta_nodes, zeta_weights):
    """Limit-side initial datum: density_x(x) times a point mixture in k.

    Each mixture node is snapped to the nearest momentum lattice point and
    deposited as mass weight/dk there, so the array integrates to
    (sum density_x dx) * (sum weights).  Returns (W0, snapped_nodes).
    """
    density_x = np.asarray(density_x, dtype=float)
    if density_x.shape != (grid.n,):
        raise ConfigError("density_x must match the grid")
    k_vals, dk = momentum_axis(grid, eta)
    nodes = np.atleast_1d(np.asarray(zeta_nodes, dtype=float))
    weights = np.atleast_1d(np.asarray(zeta_weights, dtype=float))
    if nodes.shape != weights.shape:
        raise ConfigError("zeta nodes and weights must align")
    if np.any(nodes < k_vals[0] - 0.5 * dk) or np.any(nodes > k_vals[-1] + 0.5 * dk):
        raise ConfigError("zeta node outside the representable momentum window")
    W0 = np.zeros((grid.n, grid.n))
    snapped = np.empty_like(nodes)
    for j, (z, wgt) in enumerate(zip(nodes, weights)):
        l = int(np.clip(np.rint((z - k_vals[0]) / dk), 0, grid.n - 1))
        snapped[j] = k_vals[l]
        W0[:, l] += density_x * (wgt / dk)
    return W0, snapped


def aligned_shift_time(grid: Grid, eta: float, regime: ScalingRegime, cells: int = 1) -> float:
    """Time at which free-flow transport shifts column l by exactly cells*l
    grid points, making the characteristic flow exact on the lattice."""
    _, dk = momentum_axis(grid, eta)
    return cells * grid.dx / (regime.epsilon**regime.s_c * dk)


def free_flow_shift(W: np.ndarray, grid: Grid, eta: float, regime: ScalingRegime, t: float):
    """Exact lattice transport W(x,k) -> W(x - eps^s_c t k, k).

    Requires t to align column shifts with whole grid cells (see
    aligned_shift_time); raises ConfigError otherwise.
    """
    k_vals, dk = momentum_axis(grid, eta)
    speed = regime.epsilon**regime.s_c
    per_l = speed * t * dk / grid.dx  # cells moved per unit momentum index
    if abs(per_l - round(per_l)) > 1e-9 * max(1.0, abs(per_l)):
        raise ConfigError(
            f"free-flow time {t} misaligned with the lattice; nearest aligned "
            f"time {aligned_shift_time(grid, eta, regime, max(1, round(per_l)))}"
        )
    c = int(round(per_l))
    n = grid.n
    l_idx = np.arange(-n // 2, n // 2)
    rows = (np.arange(n)[:, None] - c * l_idx[None, :]) % n
    return W[rows, np.arange(n)[None, :]]
