"""Spectral densities, closed-form coefficients, and quadrature oracles.

All momentum-space densities share the long-range radial profile
``envelope(|p|) / |p|**(d + 2*(alpha-1))`` with temporal relaxation rate
``g(p) = nu * |p|**(2*beta)``.  The functions here are the slow, accurate
reference implementations that the samplers and evolvers are tested against.
"""

from __future__ import annotations

import math

import numpy as np
from scipy import integrate, special

from .errors import ConfigError, NumericalError, OutOfDomainError
from .params import ModelParams, derived_exponents

_TWO_PI = 2.0 * math.pi

# quad knobs shared by the oracle integrals
_QUAD_LIMIT = 200
_QUAD_EPS = 1e-11


def _theta(params: ModelParams) -> float:
    return 2.0 * (params.alpha + params.beta - 1.0)


def _radial(p):
    p = np.asarray(p, dtype=float)
    if p.ndim <= 1:
        return np.abs(p)
    # trailing axis holds vector components
    return np.sqrt(np.sum(np.square(p), axis=-1))


def _check_quad(value, abserr, what, rel_tol):
    scale = max(abs(value), 1e-30)
    if not math.isfinite(value) or abserr > max(rel_tol * scale, 1e-13):
        raise NumericalError(f"quadrature for {what} did not converge", abserr)


def spatial_spectrum(params: ModelParams, p):
    """Static spectral density envelope(|p|) / |p|**(d + 2*alpha - 2).

    |p| = 0 is a non-integrable pole; evaluation there is out of domain.
    """
    r = _radial(p)
    if np.any(r <= 0.0):
        raise OutOfDomainError("spatial_spectrum has a pole at p = 0")
    return params.envelope.value(r) * r ** (-(params.d + 2.0 * params.alpha - 2.0))


def spectral_gap(params: ModelParams, p):
    """Temporal relaxation rate g(p) = nu * |p|**(2*beta)."""
    r = _radial(p)
    return params.nu * r ** (2.0 * params.beta)


def space_time_spectrum(params: ModelParams, omega, p):
    """Lorentzian-in-frequency density 2*g(p)*S0(p) / (omega**2 + g(p)**2)."""
    g = spectral_gap(params, p)
    s0 = spatial_spectrum(params, p)
    omega = np.asarray(omega, dtype=float)
    return 2.0 * g * s0 / (omega * omega + g * g)


def covariance(params: ModelParams, t, x, *, p_lo=0.0, p_hi=None, rel_tol=1e-8):
    """Space-time covariance R(t, x) by adaptive radial quadrature.

    R(t, x) = (2*pi)**-d * int exp(-g(p)|t|) S0(p) exp(i p.x) dp, reduced to a
    radial integral (cosine kernel for d=1, Bessel J0 for d=2).  The infrared
    endpoint carries an integrable singularity p**-(2*alpha-1); it is removed
    by the power substitution p = u**(1/(2-2*alpha)).  Optional [p_lo, p_hi]
    restricts the integral to a spectral band.
    """
    if params.d not in (1, 2):
        raise NotImplementedError("covariance quadrature implemented for d in {1, 2}")
    t = abs(float(t))
    r_x = float(_radial(x)) if np.ndim(x) else abs(float(x))
    a = params.envelope.value
    nu, alpha, beta, d = params.nu, params.alpha, params.beta, params.d
    m = 2.0 - 2.0 * alpha  # in (0, 1)

    if d == 1:
        angular = lambda z: np.cos(z)
        front = 1.0 / math.pi
    else:
        angular = special.j0
        front = 1.0 / _TWO_PI

    def radial_integrand(p):
        return math.exp(-nu * p ** (2.0 * beta) * t) * a(p) * angular(p * r_x)

    p_lo = max(0.0, float(p_lo))
    if p_hi is None:
        if not params.envelope.decays and t == 0.0:
            raise ConfigError(
                "covariance with a non-decaying envelope needs t > 0 or a finite p_hi"
            )
        p_hi = math.inf
    else:
        p_hi = float(p_hi)
        if p_hi <= p_lo:
            raise ConfigError(f"need p_hi > p_lo, got [{p_lo}, {p_hi}]")

    split = min(1.0, p_hi)
    total, err = 0.0, 0.0

    if p_lo < split:
        # substituted head: p = u**(1/m) turns p**-(2a-1) dp into du/m
        def head(u):
            p = u ** (1.0 / m)
            return radial_integrand(p) / m

        val, e = integrate.quad(
            head, p_lo**m, split**m, epsabs=_QUAD_EPS, epsrel=rel_tol, limit=_QUAD_LIMIT
        )
        total += val
        err += e

    lo = max(p_lo, split)
    if p_hi > lo:
        def body(p):
            return radial_integrand(p) * p ** (-(2.0 * alpha - 1.0))

        val, e = integrate.quad(
            body, lo, p_hi, epsabs=_QUAD_EPS, epsrel=rel_tol, limit=_QUAD_LIMIT
        )
        total += val
        err += e

    result = front * total
    _check_quad(result, front * err, "covariance", rel_tol)
    return result


def sphere_abs_moment(d: int, theta: float, *, method: str = "special") -> float:
    """Integral of |u . e1|**theta over the unit sphere S^(d-1).

    method='special' uses the Gamma-function closed form, valid for any d;
    method='quadrature' integrates directly (d <= 2).
    """
    if not (0.0 < theta < 1.0):
        raise ConfigError(f"theta must lie in (0, 1), got {theta}")
    if method == "special":
        if d == 1:
            return 2.0
        return (
            2.0
            * math.pi ** ((d - 1) / 2.0)
            * special.gamma((theta + 1.0) / 2.0)
            / special.gamma((theta + d) / 2.0)
        )
    if method == "quadrature":
        if d == 1:
            # S^0 = {-1, +1} with counting measure
            return abs(-1.0) ** theta + abs(1.0) ** theta
        if d == 2:
            val, e = integrate.quad(
                lambda phi: abs(math.cos(phi)) ** theta,
                0.0,
                _TWO_PI,
                points=[0.5 * math.pi, 1.5 * math.pi],
                epsabs=_QUAD_EPS,
                epsrel=1e-12,
                limit=_QUAD_LIMIT,
            )
            _check_quad(val, e, "sphere moment", 1e-11)
            return val
        raise ConfigError("quadrature route for the sphere moment covers d <= 2")
    raise ConfigError(f"unknown method {method!r}")


def _gamma_one_minus(theta: float, *, method: str) -> float:
    """Gamma(1 - theta), by library special function or by direct quadrature."""
    if method == "special":
        return float(special.gamma(1.0 - theta))
    # integral definition with the endpoint singularity substituted away:
    # int_0^1 u^-theta e^-u du = (1/(1-theta)) int_0^1 exp(-v**(1/(1-theta))) dv
    one_m = 1.0 - theta
    head, e1 = integrate.quad(
        lambda v: math.exp(-(v ** (1.0 / one_m))) / one_m,
        0.0,
        1.0,
        epsabs=_QUAD_EPS,
        epsrel=1e-12,
    )
    tail, e2 = integrate.quad(
        lambda u: u ** (-theta) * math.exp(-u), 1.0, math.inf, epsabs=_QUAD_EPS, epsrel=1e-12
    )
    val = head + tail
    _check_quad(val, e1 + e2, "Gamma(1-theta)", 1e-11)
    return val


def sigma_theta(params: ModelParams, *, method: str = "special") -> float:
    """Front constant of the fractional momentum-diffusion limit:

        sigma(theta) = 2 a(0) theta Gamma(1-theta) S_theta / (2 pi)**d,

    with S_theta the sphere moment above.  Two independent evaluation routes
    are provided: 'special' (closed Gamma forms) and 'quadrature' (integral
    definitions of both factors).
    """
    theta = _theta(params)
    s_mom = sphere_abs_moment(params.d, theta, method=method)
    gam = _gamma_one_minus(theta, method=method)
    return 2.0 * params.a0 * theta * gam * s_mom / _TWO_PI**params.d


def half_line_cos_moment(theta: float) -> float:
    """C(theta) = int_0^inf (1 - cos u) u**(-1-theta) du = Gamma(1-theta) cos(pi theta/2) / theta."""
    if not (0.0 < theta < 1.0):
        raise ConfigError(f"theta must lie in (0, 1), got {theta}")
    return float(special.gamma(1.0 - theta)) * math.cos(0.5 * math.pi * theta) / theta


def frac_damping_rate(params: ModelParams) -> float:
    """Decay rate r(theta) of the Fourier multiplier exp(-r |q|**theta t).

    This is the constant for which the ideal jump kernel (envelope frozen at
    its origin value) satisfies  int sigma_ideal(p) (1 - cos(p.q)) dp
    = r(theta) |q|**theta.  It differs from sigma_theta(params) by the factor
    cos(pi*theta/2) / theta**2 / Gamma-free bookkeeping; both are exposed so
    the relationship stays testable.
    """
    theta = _theta(params)
    s_mom = sphere_abs_moment(params.d, theta)
    return (
        2.0
        * params.a0
        / (_TWO_PI**params.d * params.nu)
        * s_mom
        * half_line_cos_moment(theta)
    )


def D_coefficient(params: ModelParams, k: float | None = None, *, rel_tol=1e-9) -> float:
    """Variance coefficient of the limiting random phase.

    Generic form (k independent):

        D = a(0) Omega_d / ((2 pi)^d kappa0 (2 kappa0 - 1))
            * int_0^inf exp(-nu rho**(2 beta)) rho**(1 - 2 alpha) d rho.

    With beta = 1/2 and gamma = 0 a wavenumber-resolved variant replaces the
    solid angle Omega_d by the angular average of exp(i k . rho u); pass k to
    request it.  Quadrature is cross-checked against the Gamma closed form.
    """
    exps = derived_exponents(params)
    kappa0 = exps.kappa0
    alpha, beta, nu, d = params.alpha, params.beta, params.nu, params.d
    m = 2.0 - 2.0 * alpha
    front = params.a0 / (_TWO_PI**d * kappa0 * (2.0 * kappa0 - 1.0))

    if k is None:
        omega_d = 2.0 if d == 1 else _TWO_PI ** (d / 2.0) / special.gamma(d / 2.0)
        head, e1 = integrate.quad(
            lambda u: math.exp(-nu * u ** (2.0 * beta / m)) / m,
            0.0,
            1.0,
            epsabs=_QUAD_EPS,
            epsrel=rel_tol,
        )
        tail, e2 = integrate.quad(
            lambda rho: math.exp(-nu * rho ** (2.0 * beta)) * rho ** (1.0 - 2.0 * alpha),
            1.0,
            math.inf,
            epsabs=_QUAD_EPS,
            epsrel=rel_tol,
            limit=_QUAD_LIMIT,
        )
        radial = head + tail
        _check_quad(radial, e1 + e2, "D coefficient", rel_tol)
        closed = special.gamma(m / (2.0 * beta)) / (2.0 * beta * nu ** (m / (2.0 * beta)))
        if abs(radial - closed) > 1e-8 * max(abs(closed), 1e-30):
            raise NumericalError(
                "quadrature and closed form for the D coefficient disagree",
                abs(radial - closed),
            )
        return front * omega_d * radial

    # wavenumber-resolved variant
    if beta != 0.5 or params.gamma != 0.0:
        raise ConfigError(
            "wavenumber-resolved D coefficient requires beta = 1/2 and gamma = 0"
        )
    if d not in (1, 2):
        raise NotImplementedError("wavenumber-resolved D implemented for d in {1, 2}")
    k = abs(float(k))
    if d == 1:
        angular = lambda z: 2.0 * math.cos(z)
    else:
        angular = lambda z: _TWO_PI * special.j0(z)

    def head_f(u):
        rho = u ** (1.0 / m)
        return math.exp(-nu * rho) * angular(k * rho) / m

    head, e1 = integrate.quad(
        head_f, 0.0, 1.0, epsabs=_QUAD_EPS, epsrel=rel_tol, limit=_QUAD_LIMIT
    )
    tail, e2 = integrate.quad(
        lambda rho: math.exp(-nu * rho) * rho ** (1.0 - 2.0 * alpha) * angular(k * rho),
        1.0,
        math.inf,
        epsabs=_QUAD_EPS,
        epsrel=rel_tol,
        limit=_QUAD_LIMIT,
    )
    radial = head + tail
    _check_quad(radial, e1 + e2, "wavenumber-resolved D", rel_tol)
    if d == 1:
        # Laplace-transform closed form for the cosine integral
        closed = (
            2.0
            * special.gamma(m)
            * (nu * nu + k * k) ** (-0.5 * m)
            * math.cos(m * math.atan2(k, nu))
        )
        if abs(radial - closed) > 1e-8 * max(abs(closed), 1e-30):
            raise NumericalError(
                "quadrature and closed form for wavenumber-resolved D disagree",
                abs(radial - closed),
            )
    return front * radial


def transfer_kernel(params: ModelParams, p, omega=None):
    """Differential scattering kernel in momentum space.

    At omega=None this is the elastic kernel
        sigma(p) = 2 a(|p|) / ((2 pi)^d nu |p|**(d + theta));
    with omega it generalises to the Lorentzian-in-frequency form
        2 g(p) S0(p) / ((2 pi)^d (g(p)**2 + omega**2)).
    """
    r = _radial(p)
    if np.any(r <= 0.0):
        raise OutOfDomainError("transfer kernel has a pole at p = 0")
    if omega is None:
        theta = _theta(params)
        return (
            2.0
            * params.envelope.value(r)
            / (_TWO_PI**params.d * params.nu * r ** (params.d + theta))
        )
    return space_time_spectrum(params, omega, p) / _TWO_PI**params.d


def _kernel_radial_front(params: ModelParams) -> float:
    # front factor of the d=1 radial reduction: int_R sigma(p) f(|p|) dp
    # = 2 * front * int_0^inf a(rho) rho**(-1-theta) f(rho) drho
    return 2.0 * 2.0 / (_TWO_PI * params.nu)


def _require_d1(params: ModelParams, what: str):
    if params.d != 1:
        raise NotImplementedError(f"{what} implemented for d = 1")


def levy_exponent(
    params: ModelParams,
    q,
    *,
    p_lo: float = 0.0,
    ideal: bool = False,
    rel_tol: float = 1e-9,
):
    """Characteristic exponent Psi(q) = int sigma(p) (cos(p q) - 1) dp  (d = 1).

    Real, even, non-positive.  With ideal=True the envelope is frozen at its
    origin value, making Psi(q) = -frac_damping_rate * |q|**theta exactly; the
    default uses the true envelope, which adds a bounded correction.  p_lo > 0
    removes the small-jump band |p| < p_lo (the compensated component).
    Oscillatory tails are handled by Fourier-weighted quadrature.
    """
    _require_d1(params, "levy_exponent")
    theta = _theta(params)
    a0 = params.a0
    amp = (lambda rho: a0) if ideal else params.envelope.value

    def one(qv: float) -> float:
        qv = abs(float(qv))
        if qv == 0.0:
            return 0.0
        front = 2.0 / (math.pi * params.nu)
        h = 1.0
        lo = max(0.0, float(p_lo))
        total, err = 0.0, 0.0
        if lo < h:
            # head on [lo, h]: substitute rho = u**(1/(1-theta)), for which
            # drho = rho**theta du / (1-theta); the (cos-1) rho**(-1-theta)
            # ~ rho**(1-theta) kink at 0 becomes smooth in u
            one_m = 1.0 - theta

            def head(u):
                rho = u ** (1.0 / one_m)
                return (
                    (math.cos(qv * rho) - 1.0)
                    * float(amp(rho))
                    * rho ** (-1.0 - theta)
                    * rho**theta
                    / one_m
                )

            val, e = integrate.quad(
                head,
                lo**one_m,
                h**one_m,
                epsabs=_QUAD_EPS,
                epsrel=rel_tol,
                limit=_QUAD_LIMIT,
            )
            total += val
            err += e
        start = max(lo, h)
        # oscillatory part on [start, inf): QAWF handles the cosine weight
        f = lambda rho: float(amp(rho)) * rho ** (-1.0 - theta)
        val_c, e_c = integrate.quad(
            f, start, math.inf, weight="cos", wvar=qv, epsabs=_QUAD_EPS, limit=_QUAD_LIMIT
        )
        if ideal or not params.envelope.decays:
            val_p = a0 * start ** (-theta) / theta
            e_p = 0.0
        else:
            val_p, e_p = integrate.quad(
                f, start, math.inf, epsabs=_QUAD_EPS, epsrel=rel_tol, limit=_QUAD_LIMIT
            )
        total += val_c - val_p
        err += e_c + e_p
        result = front * total
        # the Fourier-weighted tail reports a conservative error estimate
        # (orders above its actual accuracy), so gate on an absolute floor
        if not math.isfinite(result) or front * err > max(
            rel_tol * abs(result), 1e-8
        ):
            raise NumericalError(
                "quadrature for levy_exponent did not converge", front * err
            )
        return result

    if np.ndim(q) == 0:
        return one(q)
    return np.array([one(qv) for qv in np.asarray(q, dtype=float).ravel()]).reshape(
        np.shape(q)
    )


def jump_rate(params: ModelParams, delta: float, *, rel_tol: float = 1e-10) -> float:
    """Total intensity of jumps with |p| >= delta:  int_{|p|>=delta} sigma(p) dp  (d = 1)."""
    _require_d1(params, "jump_rate")
    if not delta > 0.0:
        raise ConfigError(f"delta must be > 0, got {delta}")
    theta = _theta(params)
    a = params.envelope.value
    a0 = params.envelope.at_zero
    # Tiny cutoffs span many decades, so peel off the exact power-law part
    # on [delta, 1]; what remains of the integrand vanishes at the origin.
    head = a0 * (delta ** (-theta) - 1.0) / theta if delta < 1.0 else 0.0
    lo = min(delta, 1.0)
    val, e = integrate.quad(
        lambda rho: (float(a(rho)) - a0) * rho ** (-1.0 - theta),
        lo,
        1.0,
        epsabs=_QUAD_EPS,
        epsrel=rel_tol,
        limit=_QUAD_LIMIT,
    )
    tail, e2 = integrate.quad(
        lambda rho: float(a(rho)) * rho ** (-1.0 - theta),
        max(delta, 1.0),
        math.inf,
        epsabs=_QUAD_EPS,
        epsrel=rel_tol,
        limit=_QUAD_LIMIT,
    )
    front = 2.0 / (math.pi * params.nu)
    result = front * (head + val + tail)
    # absolute floor: far cutoffs give tiny rates with honest ~1e-13 errors
    if front * (e + e2) > max(rel_tol * abs(result), 1e-12):
        raise NumericalError("quadrature for jump_rate did not converge", front * (e + e2))
    return result


def capped_kernel_level(params: ModelParams, p_cap: float) -> float:
    """Cap level M = sigma(p_cap) used by the bounded-kernel comparison model."""
    if not p_cap > 0.0:
        raise ConfigError(f"p_cap must be > 0, got {p_cap}")
    return float(transfer_kernel(params, p_cap))


def capped_jump_rate(params: ModelParams, p_cap: float) -> float:
    """Total mass of the capped kernel min(sigma(p), sigma(p_cap))  (d = 1)."""
    _require_d1(params, "capped_jump_rate")
    level = capped_kernel_level(params, p_cap)
    return 2.0 * level * p_cap + jump_rate(params, p_cap)


def levy_exponent_capped(
    params: ModelParams, q, p_cap: float, *, rel_tol: float = 1e-9
):
    """Characteristic exponent of the capped kernel min(sigma, sigma(p_cap)) (d = 1).

    The plateau |p| < p_cap contributes 2 M (sin(q p_cap)/q - p_cap) in closed
    form; the tail reuses the long-range quadrature with p_lo = p_cap.
    """
    _require_d1(params, "levy_exponent_capped")
    level = capped_kernel_level(params, p_cap)
    tail = levy_exponent(params, q, p_lo=p_cap, rel_tol=rel_tol)

    q_arr = np.asarray(q, dtype=float)
    with np.errstate(divide="ignore", invalid="ignore"):
        plateau = np.where(
            q_arr == 0.0, 0.0, 2.0 * level * (np.sin(q_arr * p_cap) / np.where(q_arr == 0.0, 1.0, q_arr) - p_cap)
        )
    out = plateau + tail
    if np.ndim(q) == 0:
        return float(out)
    return out
