"""Regenerate tests/_frozen.py.

Every constant the unit tests pin is computed here with mpmath at 30-digit
working precision, by a route independent of the package implementation
(closed special-function forms where they exist, direct mp quadrature
otherwise, and both where we can cross-check). Run from the repo root:

    python tests/_gen_frozen.py

The emitted file is committed so the test suite never depends on mpmath.
"""

import mpmath as mp

mp.mp.dps = 30

ALPHA = mp.mpf("0.75")
BETA = mp.mpf("0.5")
NU = mp.mpf(1)
THETA = 2 * (ALPHA + BETA - 1)          # 0.5
KAPPA0 = (ALPHA + 2 * BETA - 1) / (2 * BETA)


def sphere_abs_moment(d, theta):
    """S = integral over the unit sphere of |e1.u|^theta."""
    if d == 1:
        return mp.mpf(2)
    if d == 2:
        # two independent routes: direct quadrature and the Beta identity
        # |cos| has kinks at pi/2 and 3pi/2; split there
        quad = mp.quad(lambda phi: mp.fabs(mp.cos(phi)) ** theta,
                       [0, mp.pi / 2, mp.pi, 3 * mp.pi / 2, 2 * mp.pi])
        beta = 2 * mp.beta((theta + 1) / 2, mp.mpf(1) / 2)
        assert mp.fabs(quad - beta) < mp.mpf(10) ** -25
        return beta
    raise ValueError(d)


def sigma_display(d, theta, a0=1):
    """2 a0 theta Gamma(1-theta) / (2 pi)^d * S."""
    return 2 * a0 * theta * mp.gamma(1 - theta) * sphere_abs_moment(d, theta) / (2 * mp.pi) ** d


def cos_moment_constant(theta):
    """c with  int_0^inf (1-cos u) u^(-1-theta) du = c;  c = Gamma(1-theta) cos(pi theta/2)/theta.

    Cross-checked by direct oscillatory quadrature.
    """
    closed = mp.gamma(1 - theta) * mp.cos(mp.pi * theta / 2) / theta
    head = mp.quad(lambda u: (1 - mp.cos(u)) * u ** (-1 - theta), [0, mp.pi])
    tail_const = mp.quad(lambda u: u ** (-1 - theta), [mp.pi, mp.inf])
    tail_cos = mp.quadosc(lambda u: mp.cos(u) * u ** (-1 - theta), [mp.pi, mp.inf],
                          zeros=lambda n: mp.pi / 2 + mp.pi * n)
    direct = head + tail_const - tail_cos
    assert mp.fabs(closed - direct) < mp.mpf(10) ** -15, (closed, direct)
    return closed


def damping_rate(d, theta, a0=1, nu=1):
    """c with  int sigma_ideal(p) (e^{ipq}-1) dp = -c |q|^theta  (envelope frozen at a0)."""
    return (2 * a0 / ((2 * mp.pi) ** d * nu)) * sphere_abs_moment(d, theta) * cos_moment_constant(theta)


def levy_exponent_gauss_direct(q, theta=THETA, nu=NU):
    """Psi(q) = (2/(pi nu)) int_0^inf e^{-p^2} p^(-1-theta) (cos(qp)-1) dp   (d=1).

    Substituted u = qp; the head keeps (cos u - 1) combined (integrable at 0),
    the tail splits into a quadosc cosine piece and a plain monotone piece.
    """
    def f(u):
        return mp.exp(-(u / q) ** 2) * u ** (-1 - theta) * (mp.cos(u) - 1)
    head = mp.quad(f, [0, mp.pi])
    tail_cos = mp.quadosc(lambda u: mp.cos(u) * u ** (-1 - theta) * mp.exp(-(u / q) ** 2),
                          [mp.pi, mp.inf], period=2 * mp.pi)
    tail_const = -mp.quad(lambda u: u ** (-1 - theta) * mp.exp(-(u / q) ** 2), [mp.pi, mp.inf])
    return (2 / (mp.pi * nu)) * q ** theta * (head + tail_cos + tail_const)


def levy_exponent_gauss_split(q, theta=THETA, nu=NU):
    """Same quantity by an independent route: ideal part in closed form plus
    the absolutely convergent envelope correction with g = (e^{-p^2}-1) p^(-1-theta)."""
    ideal = -damping_rate(1, theta, 1, nu) * q ** theta
    def g(p):
        return (mp.exp(-p * p) - 1) * p ** (-1 - theta)
    plain = mp.quad(g, [0, 1, 8, mp.inf])
    osc_head = mp.quad(lambda p: g(p) * mp.cos(q * p), [0, mp.pi / q])
    osc_tail = mp.quadosc(lambda p: g(p) * mp.cos(q * p), [mp.pi / q, mp.inf],
                          period=2 * mp.pi / q)
    corr = (osc_head + osc_tail) - plain
    return ideal + (2 / (mp.pi * nu)) * corr


def covariance_default(t, x, p_lo=0, p_hi=mp.inf, alpha=ALPHA, beta=BETA, nu=NU):
    """R(t,x) for d=1, gaussian envelope: (1/pi) int_{p_lo}^{p_hi} e^{-nu p^{2b} t} e^{-p^2} p^{1-2a} cos(px) dp."""
    def f(p):
        return mp.exp(-nu * p ** (2 * beta) * abs(t)) * mp.exp(-p * p) * p ** (1 - 2 * alpha) * mp.cos(p * x)
    pts = [p_lo, p_hi] if p_lo > 0 else [0, mp.mpf(1), p_hi]
    return mp.quad(f, pts) / mp.pi


def d_generic(alpha=ALPHA, beta=BETA, nu=NU, a0=1, d=1):
    omega = mp.mpf(2) if d == 1 else 2 * mp.pi
    k0 = (alpha + 2 * beta - 1) / (2 * beta)
    rho_int = mp.quad(lambda r: mp.exp(-nu * r ** (2 * beta)) * r ** (1 - 2 * alpha), [0, 1, mp.inf])
    closed = mp.gamma((2 - 2 * alpha) / (2 * beta)) / (2 * beta) * nu ** (-(2 - 2 * alpha) / (2 * beta))
    assert mp.fabs(rho_int - closed) < mp.mpf(10) ** -15
    return a0 * omega / ((2 * mp.pi) ** d * k0 * (2 * k0 - 1)) * rho_int


def d_special_k(k, alpha=ALPHA, nu=NU, a0=1):
    """d=1, beta=1/2 momentum-dependent value: direction mean of cos(k rho)."""
    k0 = (alpha + 2 * mp.mpf("0.5") - 1) / (2 * mp.mpf("0.5"))
    s = 2 - 2 * alpha
    rho_int = mp.quad(lambda r: mp.exp(-nu * r) * r ** (1 - 2 * alpha) * mp.cos(k * r), [0, 1, mp.inf])
    closed = mp.gamma(s) * (nu * nu + k * k) ** (-s / 2) * mp.cos(s * mp.atan(k / nu))
    assert mp.fabs(rho_int - closed) < mp.mpf(10) ** -15
    return a0 * 2 / ((2 * mp.pi) * k0 * (2 * k0 - 1)) * rho_int


def psi_cutoff(q, delta, theta=THETA, nu=NU):
    """Psi restricted to |p| >= delta (gaussian envelope), for jump-sampler checks."""
    def f(p):
        return mp.exp(-p * p) * p ** (-1 - theta) * (mp.cos(q * p) - 1)
    return (2 / (mp.pi * nu)) * mp.quad(f, [delta, mp.pi / q if mp.pi / q > delta else 2 * delta, 1, 8, mp.inf])


def jump_rate(delta, theta=THETA, nu=NU):
    """Lambda(delta) = (2/(pi nu)) int_delta^inf e^{-p^2} p^{-1-theta} dp."""
    return (2 / (mp.pi * nu)) * mp.quad(lambda p: mp.exp(-p * p) * p ** (-1 - theta), [delta, 1, mp.inf])


def emit():
    rows = []

    def put(name, value, comment=""):
        rows.append((name, mp.nstr(mp.mpf(value), 17), comment))

    put("THETA_DEFAULT", THETA, "2(alpha+beta-1) at alpha=.75, beta=.5")
    put("KAPPA0_DEFAULT", KAPPA0)
    put("KAPPA_GAMMA_DEFAULT", KAPPA0 / (1 - mp.mpf("0.25") * (ALPHA + BETA - 1) / BETA), "gamma=0.25")
    put("S_PHASE_DEFAULT", 1 / (2 * (KAPPA0 / (1 - mp.mpf("0.25") * (ALPHA + BETA - 1) / BETA))), "1/(2 kappa_gamma)")

    put("SIGMA_D1", sigma_display(1, THETA), "equals 1/sqrt(pi)")
    assert mp.fabs(sigma_display(1, THETA) - 1 / mp.sqrt(mp.pi)) < mp.mpf(10) ** -25
    put("SIGMA_D2", sigma_display(2, THETA), "sphere factor cross-checked vs 2 B(3/4,1/2)")
    put("SPHERE_ABS_MOMENT_D2", sphere_abs_moment(2, THETA))

    r = damping_rate(1, THETA)
    put("DAMPING_RATE_D1", r, "equals 2 sqrt(2/pi)")
    assert mp.fabs(r - 2 * mp.sqrt(2 / mp.pi)) < mp.mpf(10) ** -25
    put("DAMPING_OVER_SIGMA", r / sigma_display(1, THETA), "cos(pi theta/2)/theta^2 = 2 sqrt(2)")
    put("COS_MOMENT_C_HALF", cos_moment_constant(THETA))

    put("SPATIAL_SPECTRUM_A1_P2", mp.mpf(2) ** (-mp.mpf("0.5")), "p^{-(d+2a-2)} at p=2, flat envelope")
    put("TRANSFER_KERNEL_P1", 1 / mp.pi, "2/(2 pi) at p=1, flat envelope")

    put("COV_T1_X0", covariance_default(1, 0), "R(1,0), gaussian envelope, defaults")
    put("COV_T0_X0", covariance_default(0, 0), "R(0,0)")
    put("COV_T0_X2", covariance_default(0, 2))
    put("COV_BAND_T0_X0", covariance_default(0, 0, p_lo=mp.mpf("0.1"), p_hi=3), "band [0.1,3]")
    put("COV_BAND_T2_X1", covariance_default(2, 1, p_lo=mp.mpf("0.1"), p_hi=3))

    put("D_GENERIC_DEFAULT", d_generic(), "2 sqrt(pi) / (2 pi k0 (2k0-1))")
    assert mp.fabs(d_generic() - 2 * mp.sqrt(mp.pi) / (2 * mp.pi * KAPPA0 * (2 * KAPPA0 - 1))) < mp.mpf(10) ** -15
    put("D_SPECIAL_K0", d_special_k(mp.mpf(0)), "momentum-dependent variant at k=0 (= generic)")
    put("D_SPECIAL_K1", d_special_k(mp.mpf(1)))

    for q in (10, 30, 100):
        a = levy_exponent_gauss_direct(mp.mpf(q))
        b = levy_exponent_gauss_split(mp.mpf(q))
        assert mp.fabs(a - b) < mp.mpf(10) ** -15, (q, a, b)
        put("PSI_GAUSS_Q%d" % q, a)
        put("PSI_RATIO_Q%d" % q, a / (-r * mp.mpf(q) ** THETA),
            "jump exponent over -damping_rate*q^theta")
    put("PSI_GAUSS_Q2", levy_exponent_gauss_direct(mp.mpf(2)))

    put("PSI_CUT_Q2_D005", psi_cutoff(mp.mpf(2), mp.mpf("0.05")))
    put("PSI_CUT_Q5_D005", psi_cutoff(mp.mpf(5), mp.mpf("0.05")))
    put("JUMP_RATE_D005", jump_rate(mp.mpf("0.05")))
    put("JUMP_RATE_D02", jump_rate(mp.mpf("0.2")))

    put("STABLE_HALF_T1_K0", 2 / mp.pi, "(1/pi) int e^{-sqrt(q)} dq = 2/pi")

    lines = ["# Generated by tests/_gen_frozen.py -- do not edit by hand.",
             "# High-precision pins for unit tests (30-digit mpmath upstream).",
             ""]
    for name, val, comment in rows:
        suffix = ("  # " + comment) if comment else ""
        lines.append(f"{name} = {val}{suffix}")
    lines.append("")
    with open("tests/_frozen.py", "w") as fh:
        fh.write("\n".join(lines))
    print("wrote tests/_frozen.py with", len(rows), "constants")


if __name__ == "__main__":
    emit()
