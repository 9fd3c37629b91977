"""Model parameters, scaling regimes, and the derived exponent bundle.

The medium is a stationary Gaussian field with spatial spectral density
``envelope(|p|) / |p|**(d + 2*(alpha-1))`` and temporal relaxation rate
``nu * |p|**(2*beta)`` per mode.  Everything downstream is controlled by
the combination ``theta = 2*(alpha + beta - 1)``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import ConfigError

# Radial envelope profiles, by name.  Each maps |p| >= 0 to a positive
# amplitude; smooth, bounded, and decaying fast enough for UV convergence.
# "flat" does not decay; it exists for ideal-kernel cross-checks and is
# rejected wherever a UV-convergent synthesis is required.
_ENVELOPES = {
    "gauss": lambda r: np.exp(-np.square(r)),
    "flat": lambda r: np.ones_like(np.asarray(r, dtype=float)),
}


@dataclass(frozen=True)
class Envelope:
    """Named radial amplitude profile scaled by ``amp``."""

    name: str = "gauss"
    amp: float = 1.0

    def __post_init__(self):
        if self.name not in _ENVELOPES:
            raise ConfigError(
                f"unknown envelope {self.name!r}; known: {sorted(_ENVELOPES)}"
            )
        if not (self.amp >= 0.0 and math.isfinite(self.amp)):
            # amp == 0 is the decoupled medium, useful as a null control
            raise ConfigError(f"envelope amplitude must be finite and >= 0, got {self.amp}")

    def value(self, r):
        """Profile evaluated at radial frequency ``r = |p|``."""
        return self.amp * _ENVELOPES[self.name](np.asarray(r, dtype=float))

    @property
    def at_zero(self) -> float:
        return float(self.value(0.0))

    @property
    def decays(self) -> bool:
        return self.name != "flat"


@dataclass(frozen=True)
class ModelParams:
    """Static description of the random medium.

    Constraints: ``1/2 < alpha < 1``, ``0 < beta <= 1/2``, ``alpha + beta > 1``,
    ``0 <= gamma < 1``, ``nu > 0``.  Together these put
    ``theta = 2*(alpha+beta-1)`` in ``(0, 1)``.
    """

    d: int = 1
    alpha: float = 0.75
    beta: float = 0.5
    nu: float = 1.0
    gamma: float = 0.25
    envelope: Envelope = field(default_factory=Envelope)

    def __post_init__(self):
        if not (isinstance(self.d, int) and self.d >= 1):
            raise ConfigError(f"dimension d must be a positive integer, got {self.d!r}")
        if not (0.5 < self.alpha < 1.0):
            raise ConfigError(f"alpha must lie in (1/2, 1), got {self.alpha}")
        if not (0.0 < self.beta <= 0.5):
            raise ConfigError(f"beta must lie in (0, 1/2], got {self.beta}")
        if not (self.alpha + self.beta > 1.0):
            raise ConfigError(
                f"need alpha + beta > 1 for long-range behaviour, got {self.alpha + self.beta}"
            )
        if not (0.0 <= self.gamma < 1.0):
            raise ConfigError(f"gamma must lie in [0, 1), got {self.gamma}")
        if not (self.nu > 0.0 and math.isfinite(self.nu)):
            raise ConfigError(f"nu must be finite and > 0, got {self.nu}")

    @property
    def a0(self) -> float:
        """Envelope amplitude at the spectral origin."""
        return self.envelope.at_zero


@dataclass(frozen=True)
class DerivedExponents:
    """Exponents computed from a ModelParams; see derived_exponents."""

    theta: float
    kappa0: float
    kappa_gamma: float

    @property
    def phase_scale(self) -> float:
        """The propagation exponent s at which phase-modulation scaling holds."""
        return 1.0 / (2.0 * self.kappa_gamma)


def derived_exponents(params: ModelParams) -> DerivedExponents:
    """Compute (theta, kappa0, kappa_gamma) for a validated parameter set.

    theta       = 2*(alpha + beta - 1), the tail exponent of the
                  momentum-space jump kernel; lies in (0, 1).
    kappa0      = (alpha + 2*beta - 1) / (2*beta), the Hurst index of the
                  limiting phase modulation; lies in (1/2, 1).
    kappa_gamma = kappa0 / (1 - gamma*(alpha + beta - 1)/beta), the
                  gamma-adjusted index that fixes the scaling exponent
                  s = 1/(2*kappa_gamma).
    """
    theta = 2.0 * (params.alpha + params.beta - 1.0)
    kappa0 = (params.alpha + 2.0 * params.beta - 1.0) / (2.0 * params.beta)
    denom = 1.0 - params.gamma * (params.alpha + params.beta - 1.0) / params.beta
    if denom <= 0.0:
        raise ConfigError(
            "gamma too large: need gamma*(alpha+beta-1)/beta < 1, "
            f"got {params.gamma * (params.alpha + params.beta - 1.0) / params.beta:.6g}"
        )
    kappa_gamma = kappa0 / denom
    if not (0.0 < theta < 1.0):
        raise ConfigError(f"theta = {theta} outside (0, 1)")
    if not (0.5 < kappa0 < 1.0):
        raise ConfigError(f"kappa0 = {kappa0} outside (1/2, 1)")
    return DerivedExponents(theta=theta, kappa0=kappa0, kappa_gamma=kappa_gamma)


def coherence_scale(s: float, theta: float) -> float:
    """Largest admissible coherence exponent s_c = (1 - s)/theta for given s.

    Requires s >= 1/(1+theta) so that s_c <= s; the boundary s = 1/(1+theta)
    (where s_c = s) is admitted.  Returns a value clipped into [0, s].
    """
    if not (0.0 < s <= 1.0):
        raise ConfigError(f"s must lie in (0, 1], got {s}")
    if not (0.0 < theta < 1.0):
        raise ConfigError(f"theta must lie in (0, 1), got {theta}")
    s_min = 1.0 / (1.0 + theta)
    if s < s_min - 1e-12:
        raise ConfigError(
            f"s = {s} below the admissible minimum 1/(1+theta) = {s_min:.12g}; "
            "no coherence exponent with s_c <= s exists"
        )
    return min(s, max(0.0, (1.0 - s) / theta))


@dataclass(frozen=True)
class ScalingRegime:
    """Propagation scaling: wavelength exponent s, coherence exponent s_c,
    and the small parameter epsilon actually used in a simulation."""

    epsilon: float
    s: float
    s_c: float

    def __post_init__(self):
        if not (0.0 < self.epsilon < 1.0):
            raise ConfigError(f"epsilon must lie in (0, 1), got {self.epsilon}")
        if not (0.0 < self.s <= 1.0):
            raise ConfigError(f"s must lie in (0, 1], got {self.s}")
        if not (0.0 <= self.s_c <= self.s + 1e-12):
            raise ConfigError(f"need 0 <= s_c <= s, got s_c={self.s_c}, s={self.s}")

    @property
    def spread(self) -> float:
        """Wigner momentum magnification eta = epsilon**(s - s_c)."""
        return self.epsilon ** (self.s - self.s_c)

    def validate_against(self, params: ModelParams) -> None:
        """Check (s, s_c) against the admissible window for these params.

        The coherence exponent may not exceed min(s, (1-s)/theta): beyond
        (1-s)/theta the correlation scale outruns the decoherence line, and
        beyond s the spread eta would grow with shrinking epsilon.  Plans
        impose their own stricter thresholds (e.g. fractional plans need
        s > 1/(1+theta)); a coherent regime with s_c = s is admissible at
        any s up to that line.
        """
        exps = derived_exponents(params)
        s_c_max = min(self.s, max(0.0, (1.0 - self.s) / exps.theta))
        if self.s_c > s_c_max + 1e-12:
            raise ConfigError(
                f"s_c = {self.s_c} exceeds min(s, (1-s)/theta) = {s_c_max:.12g} "
                f"for s = {self.s}"
            )
