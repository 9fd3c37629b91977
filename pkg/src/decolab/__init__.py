"""decolab: a numerical laboratory for wave decoherence in long-range
correlated random media.

Layers, bottom-up:

- params / spectral: model description, derived exponents, and slow
  quadrature oracles for every coefficient used downstream.
- medium: exact-in-time synthesis of the random potential from Fourier
  modes with Ornstein-Uhlenbeck dynamics.
- waveprop: split-step propagation of the scaled dispersive wave equation.
- phasespace: discrete Wigner transforms and their invariants.
- evolvers: deterministic limiting models (fractional momentum diffusion,
  kinetic transport closed form, stable densities).
- randomwalks: stochastic limiting models (fractional Brownian phase,
  Gaussian-field Wigner sampler, compound-Poisson transport solution).
- experiments: statistical comparison harness gluing simulation to limits.
- config / arrayio / cli: run configuration, binary array container, and
  the command line front end.
"""

from .errors import ConfigError, NumericalError, OutOfDomainError
from .params import (
    Envelope,
    ModelParams,
    ScalingRegime,
    DerivedExponents,
    derived_exponents,
    coherence_scale,
)

__version__ = "0.1.0"

__all__ = [
    "ConfigError",
    "NumericalError",
    "OutOfDomainError",
    "Envelope",
    "ModelParams",
    "ScalingRegime",
    "DerivedExponents",
    "derived_exponents",
    "coherence_scale",
    "__version__",
]
