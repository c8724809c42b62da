"""Closed-form laws for winding angles of planar Brownian motion.

The winding process of a planar Brownian motion Z (started away from the
origin) has hitting times of angular levels and cones whose distributions
admit closed forms through the skew-product decomposition
log|Z_t| = beta(H_t), theta_t = gamma(H_t) with the radial clock
H_t = int_0^t ds/|Z_s|^2.  This module collects those scalar laws:

* densities of the driving linear Brownian motion at angular hitting times
  (Cauchy at a one-sided hit, hyperbolic-secant at a symmetric two-sided
  exit, y/sinh at a range time),
* Laplace-type transforms of the winding hitting times themselves,
* the series density of the symmetric cone exit time,
* log-moments, sinh-moments, tail and moment-finiteness constants,
* the deterministic clock mapping Ornstein-Uhlenbeck windings to Brownian
  windings, with its mean-exit asymptotics.

Everything is deterministic and start-point conventions are global: times
scale by z0^2 and log-times shift by 2 ln z0; all formulas below assume the
unit start point unless a parameter says otherwise.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import DomainError, NonConvergenceError
from .numerics import (
    SeriesTruncation,
    arcsinh_a,
    log_gamma,
    quad_finite,
    quad_semi_infinite,
    _series_tail_sum,
)

__all__ = [
    "EULER_GAMMA",
    "ConeSpec",
    "OuSpec",
    "SeriesDensityValue",
    "cauchy_density",
    "cauchy_cdf",
    "exit_density_symmetric",
    "exit_cdf_symmetric",
    "exit_charfn",
    "range_density",
    "laplace_one_sided",
    "q_laplace",
    "p_laplace_from_phi",
    "laplace_two_sided",
    "laplace_range",
    "exit_cone_density",
    "exit_cone_density_full",
    "exit_cone_cdf_fn",
    "expected_log_exit",
    "log_sinh_integral",
    "sinh_moment2",
    "sinh_moment2_integral",
    "sinh_moment4",
    "sinh_moment4_integral",
    "spitzer_moment_finite",
    "log_moment_finite",
    "tail_constant",
    "ou_exit_from_bm_exit",
    "ou_mean_exit_asymptotics",
]

#: Euler's constant, appearing in the expected-log exit-time formula.
EULER_GAMMA = 0.5772156649015329


@dataclass(frozen=True)
class ConeSpec:
    """Angular sector (-d, c): the winding angle exits when it leaves it.

    c is the upper arm and d the lower one; omitting d gives the symmetric
    cone.  Derived quantities used throughout the series and transforms:
    psi = 2c, zeta = pi/(2c), zeta_hat = pi/c, nu(k) = pi (2k+1)/(4c).
    """

    c: float
    d: float = field(default=math.nan)

    def __post_init__(self):
        if math.isnan(self.d):
            object.__setattr__(self, "d", self.c)
        if not (self.c > 0.0 and self.d > 0.0):
            raise DomainError("cone arms must be positive")

    @property
    def symmetric(self) -> bool:
        return self.c == self.d

    def require_symmetric(self, op: str) -> None:
        if not self.symmetric:
            raise DomainError(f"{op} is only available for symmetric cones "
                              f"(c={self.c!r}, d={self.d!r})")

    @property
    def psi(self) -> float:
        return 2.0 * self.c

    @property
    def zeta(self) -> float:
        return math.pi / (2.0 * self.c)

    @property
    def zeta_hat(self) -> float:
        return math.pi / self.c

    def nu(self, k: int) -> float:
        return math.pi * (2 * k + 1) / (4.0 * self.c)


@dataclass(frozen=True)
class OuSpec:
    """Ornstein-Uhlenbeck parameters: dZ = -lam Z dt + sqrt(2 D) dW, start z0.

    The deterministic clock alpha(t) = D (e^{2 lam t} - 1)/lam identifies the
    OU winding with a Brownian winding; alpha degenerates to 2 D t at lam = 0.
    """

    lam: float
    D: float = 0.5
    z0: float = 1.0

    def __post_init__(self):
        if self.lam < 0.0:
            raise DomainError("lam must be >= 0")
        if not self.D > 0.0:
            raise DomainError("diffusivity D must be positive")
        if not self.z0 > 0.0:
            raise DomainError("start point z0 must be positive")

    def alpha(self, t):
        """Clock alpha(t); exact at lam = 0 via the expm1 form.  Accepts
        scalars or arrays."""
        if self.lam == 0.0:
            return 2.0 * self.D * t
        return self.D * np.expm1(2.0 * self.lam * t) / self.lam

    def alpha_inv(self, a):
        """Inverse clock; exact at lam = 0 via the log1p form.  Accepts
        scalars or arrays."""
        if self.lam == 0.0:
            return a / (2.0 * self.D)
        return np.log1p(self.lam * a / self.D) / (2.0 * self.lam)


# ---------------------------------------------------------------------------
# Densities of the driving linear BM at angular hitting times
# ---------------------------------------------------------------------------

def cauchy_density(y: float, scale: float) -> float:
    """Cauchy density with the given scale (law of the driving BM at an
    independent one-sided hitting time, and Spitzer's limit law)."""
    if not scale > 0.0:
        raise DomainError("scale must be positive")
    return scale / (math.pi * (scale * scale + y * y))


def cauchy_cdf(y: float, scale: float) -> float:
    if not scale > 0.0:
        raise DomainError("scale must be positive")
    return 0.5 + math.atan2(y, scale) / math.pi


def exit_density_symmetric(x: float, cone: ConeSpec) -> float:
    """Density of the driving BM at the two-sided exit time from (-c, c):
    (1/2c) sech(pi x / 2c)."""
    cone.require_symmetric("exit_density_symmetric")
    c = cone.c
    arg = math.pi * x / (2.0 * c)
    if abs(arg) > 700.0:
        return 0.0
    return 0.5 / (c * math.cosh(arg))


def exit_cdf_symmetric(x: float, cone: ConeSpec) -> float:
    """Closed-form CDF of `exit_density_symmetric` (gudermannian form)."""
    cone.require_symmetric("exit_cdf_symmetric")
    return 0.5 + (2.0 / math.pi) * math.atan(math.tanh(math.pi * x / (4.0 * cone.c)))


def _log_cosh(x: float) -> float:
    ax = abs(x)
    return ax + math.log1p(math.exp(-2.0 * ax)) - math.log(2.0)


def exit_charfn(lam: float, cone: ConeSpec) -> float:
    """Characteristic function of the driving BM at the exit time from the
    (possibly asymmetric) sector (-d, c):

        E[exp(i lam B)] = cosh(lam (c-d)/2) / cosh(lam (c+d)/2).

    Evaluated in log space so large |lam| underflows to 0 instead of inf/inf.
    """
    num = lam * (cone.c - cone.d) / 2.0
    den = lam * (cone.c + cone.d) / 2.0
    return math.exp(_log_cosh(num) - _log_cosh(den))


def range_density(y: float, cone: ConeSpec) -> float:
    """Density of the driving BM at the first time its range reaches c:

        h_c(y) = (2 |y| / c^2) / sinh(pi |y| / c),

    continuously extended to 2/(pi c) at y = 0 (even in y; total mass 1,
    matching the characteristic function 1/cosh^2(lam c / 2)).
    """
    c = cone.c
    ay = abs(y)
    if ay == 0.0:
        return 2.0 / (math.pi * c)
    arg = math.pi * ay / c
    if arg > 700.0:
        return 0.0
    return (2.0 * ay / (c * c)) / math.sinh(arg)


# ---------------------------------------------------------------------------
# Laplace-type transforms of the winding hitting times
# ---------------------------------------------------------------------------

def laplace_one_sided(x: float, c: float) -> float:
    """E[(2 pi T)^{-1/2} e^{-x/(2T)}] for the one-sided angular hit T:

        (1/sqrt(1+x)) * c / (pi (c^2 + arcsinh(sqrt x)^2)).
    """
    if not c > 0.0:
        raise DomainError("c must be positive")
    if x < 0.0:
        raise DomainError("x must be >= 0")
    a = arcsinh_a(math.sqrt(x))
    return cauchy_density(a, c) / math.sqrt(1.0 + x)


def q_laplace(x: float, c: float) -> float:
    """Laplace transform of 1/(2T) under the size-biased (normalized)
    measure: (1/sqrt(1+x)) / (1 + arcsinh(sqrt x)^2 / c^2).  Equals 1 at
    x = 0 and tends to 1/sqrt(1+x) as c grows."""
    if not c > 0.0:
        raise DomainError("c must be positive")
    if x < 0.0:
        raise DomainError("x must be >= 0")
    a = arcsinh_a(math.sqrt(x))
    return 1.0 / (math.sqrt(1.0 + x) * (1.0 + (a / c) * (a / c)))


def _log_sinh(u: float) -> float:
    """ln sinh(u) for u > 0, stable for large u."""
    return u - math.log(2.0) + math.log1p(-math.exp(-2.0 * u))


def p_laplace_from_phi(x: float, c: float, tol: float = 1e-10) -> float:
    """E[e^{-x/(2T)}] for the one-sided angular hit T, reconstructed from the
    transform phi = `laplace_one_sided` through

        E[e^{-x/(2T)}] = int_x^oo phi(w) dw / sqrt(w - x).

    The integral is computed after the substitutions w = sinh(u)^2 and then
    u = c tan(psi), which map it onto a finite interval,

        (2/pi) int_{atan(v/c)}^{pi/2} sinh(u)/sqrt(sinh(u)^2 - sinh(v)^2) dpsi,

    with v = arcsinh(sqrt x); the inverse-square-root endpoint is handled by
    the tanh-sinh rule.  (A direct semi-infinite rule on w = x + s^2 cannot
    converge: that integrand's tail decays only like 1/(s ln^2 s).)
    At x = 0 the integrand is identically 1 and the value is exactly 1.
    """
    if not c > 0.0:
        raise DomainError("c must be positive")
    if x < 0.0:
        raise DomainError("x must be >= 0")
    v = arcsinh_a(math.sqrt(x))
    psi_lo = math.atan2(v, c)
    if x == 0.0:
        def integrand(_psi: float) -> float:
            return 1.0
    else:
        log_sv = _log_sinh(v)

        def integrand(psi: float) -> float:
            u = c * math.tan(psi)
            if u <= v:
                return 0.0
            r = math.exp(log_sv - _log_sinh(u))
            return 1.0 / math.sqrt((1.0 - r) * (1.0 + r))

    res = quad_finite(integrand, psi_lo, 0.5 * math.pi, tol)
    return (2.0 / math.pi) * res.value


def laplace_two_sided(x: float, cone: ConeSpec) -> float:
    """E[(2 pi T)^{-1/2} e^{-x/(2T)}] for the symmetric cone exit time T:

        (1/c) (1/sqrt(1+x)) / ((sqrt x + sqrt(1+x))^zeta
                               + (sqrt(1+x) - sqrt x)^zeta),

    zeta = pi/(2c); evaluated as (1/(2c)) sech(zeta a)/sqrt(1+x) with
    a = arcsinh(sqrt x), which is the same expression in stable form.
    """
    cone.require_symmetric("laplace_two_sided")
    if x < 0.0:
        raise DomainError("x must be >= 0")
    a = arcsinh_a(math.sqrt(x))
    za = cone.zeta * a
    if za > 700.0:
        return 0.0
    return 0.5 / (cone.c * math.cosh(za) * math.sqrt(1.0 + x))


def laplace_range(x: float, cone: ConeSpec) -> float:
    """E[(2 pi T)^{-1/2} e^{-x/(2T)}] for the range-c winding time T:

        (4/c^2) (1/sqrt(1+x)) arcsinh(sqrt x)
            / ((sqrt x + sqrt(1+x))^zeta_hat - (sqrt(1+x) - sqrt x)^zeta_hat),

    i.e. range_density(arcsinh(sqrt x)) / sqrt(1+x); continuously extended to
    2/(pi c) at x = 0 (the printed ratio is 0/0 there).
    """
    if x < 0.0:
        raise DomainError("x must be >= 0")
    a = arcsinh_a(math.sqrt(x))
    return range_density(a, cone) / math.sqrt(1.0 + x)


# ---------------------------------------------------------------------------
# Series density of the symmetric cone exit time
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class SeriesDensityValue:
    """Truncated series density value with its truncation diagnostics.

    negative_warning flags the small-t truncation artifact where the
    alternating series dips below zero; the value is reported as computed,
    never clamped.
    """

    value: float
    negative_warning: bool
    k_used: int
    n_used_max: int
    last_outer_term: float


def _outer_term(nu: float, w: float, log_common: float,
                trunc: SeriesTruncation):
    """One outer term of the exit-time density series (positive part):

        exp(log_common) * w^(nu+1/2) * nu * Gamma(nu)/Gamma(2nu+1) * S(nu, w)

    with S the confluent sum normalized to S(n=0 term) = 1.
    Returns (term, n_used)."""
    s, n_used, _last, log_scale = _series_tail_sum(nu, w, trunc.tail_tol,
                                                   trunc.N, trunc.adaptive)
    log_term = (log_common + log_scale
                + (nu + 0.5) * math.log(w)
                + math.log(nu)
                + log_gamma(nu) - log_gamma(2.0 * nu + 1.0))
    if log_term > 700.0:
        # The alternating series is analytically convergent but its terms can
        # hump far above double range at very small t; treat as non-physical.
        return math.inf, n_used
    return math.exp(log_term) * s, n_used


def exit_cone_density_full(t: float, cone: ConeSpec,
                           trunc: SeriesTruncation | None = None) -> SeriesDensityValue:
    """Series density of the symmetric cone exit time, with diagnostics.

    f(t) = (sqrt 2 / c) sum_k (-1)^k t^{-1/2} e^{-1/(2t)} (1/2t)^{nu_k + 1/2}
           nu_k sum_n [Gamma(nu_k+n)/Gamma(2 nu_k + n + 1)] (1/2t)^n / n!

    with nu_k = pi (2k+1)/(4c).  The outer alternating series is summed in
    (k, k+1) pairs to damp oscillation.  In adaptive mode k grows until the
    last outer term falls under tail_tol (caps raise NonConvergenceError); in
    fixed mode exactly K+1 outer and N+1 inner terms are used, matching the
    truncated approximations studied for the density plots.  Truncation can
    push the value slightly negative near t = 0; that is reported, flagged,
    and never clamped.
    """
    cone.require_symmetric("exit_cone_density")
    if not t > 0.0:
        raise DomainError("t must be positive")
    if trunc is None:
        trunc = SeriesTruncation()
    w = 0.5 / t
    log_common = -0.5 * math.log(t) - w
    pref = math.sqrt(2.0) / cone.c

    total = 0.0
    n_used_max = 0
    last_term = math.inf
    prev_term = math.inf
    k = 0
    while True:
        term_even, n_used = _outer_term(cone.nu(k), w, log_common, trunc)
        n_used_max = max(n_used_max, n_used)
        if k + 1 <= trunc.K or not trunc.adaptive:
            term_odd, n_used = _outer_term(cone.nu(k + 1), w, log_common, trunc)
            n_used_max = max(n_used_max, n_used)
        else:
            term_odd = 0.0
        if not trunc.adaptive:
            # Fixed mode: honor the inclusive orders exactly.
            if k <= trunc.K:
                total += term_even
            if k + 1 <= trunc.K:
                total -= term_odd
            last_term = pref * (term_odd if k + 1 <= trunc.K else term_even)
            k += 2
            if k > trunc.K:
                break
            continue
        total += term_even - term_odd
        last_term = pref * max(term_even, term_odd)
        k += 2
        if not math.isfinite(total):
            raise DomainError(
                f"series terms overflow at t={t:g} (truncation artifact "
                "region); evaluate at larger t or use fixed truncation")
        if last_term <= trunc.tail_tol and term_even < prev_term:
            break
        prev_term = term_even
        if k > trunc.K:
            raise NonConvergenceError(
                f"outer series did not reach tail_tol={trunc.tail_tol:g} "
                f"within K={trunc.K} terms at t={t:g}")

    value = pref * total
    return SeriesDensityValue(value=value,
                              negative_warning=value < 0.0,
                              k_used=min(k - 1, trunc.K),
                              n_used_max=n_used_max,
                              last_outer_term=last_term)


def exit_cone_density(t: float, cone: ConeSpec,
                      trunc: SeriesTruncation | None = None) -> float:
    """Series density of the symmetric cone exit time (value only); see
    `exit_cone_density_full` for truncation diagnostics and the negative-value
    warning flag."""
    return exit_cone_density_full(t, cone, trunc).value


def exit_cone_cdf_fn(cone: ConeSpec, trunc: SeriesTruncation | None = None,
                     t_max: float = 1e5, grid_points: int = 6000):
    """Build a vectorized CDF of the symmetric cone exit time by integrating
    the series density.

    The density is integrated by trapezoid on a dense log grid between a
    floor where the mass is negligible (the exit time concentrates above
    ~c^2, with probability ~e^{-c^2/(2t)} of exiting earlier) and t_max;
    beyond t_max the polynomial tail is integrated after the substitution
    t = t_max e^y, which makes it exponentially decaying and suitable for the
    semi-infinite rule.  Returns a callable mapping times to CDF values
    (clipped to [0, 1]).
    """
    cone.require_symmetric("exit_cone_cdf_fn")
    if trunc is None:
        trunc = SeriesTruncation()
    # Mass below t_floor = c^2/56 is at the e^-28 level.
    t_floor = cone.c * cone.c / 56.0
    grid = np.exp(np.linspace(math.log(t_floor), math.log(t_max), grid_points))
    dens = np.array([exit_cone_density(t, cone, trunc) for t in grid])
    cum = np.concatenate(([0.0], np.cumsum(np.diff(grid) * 0.5 * (dens[1:] + dens[:-1]))))

    nu0 = cone.nu(0)

    def tail_mass(t0: float) -> float:
        def integrand(y: float) -> float:
            # t f(t) at t = t0 e^y decays like t^{-nu0}; past ~600 the
            # contribution is below underflow regardless of nu0.
            if y > 600.0:
                return 0.0
            t = t0 * math.exp(y)
            return exit_cone_density(t, cone, trunc) * t

        return quad_semi_infinite(integrand, decay=nu0, tol=1e-10).value

    upper_tail = tail_mass(t_max)

    def cdf(t):
        t_arr = np.atleast_1d(np.asarray(t, dtype=float))
        out = np.interp(t_arr, grid, cum)
        # Beyond the grid the interpolation clamps; integrate the tail
        # explicitly for those (rare) points instead.
        for i in np.nonzero(t_arr > t_max)[0]:
            out[i] = cum[-1] + upper_tail - tail_mass(t_arr[i])
        out = np.clip(out, 0.0, 1.0)
        return out if np.ndim(t) else float(out[0])

    cdf.total_mass = cum[-1] + upper_tail
    return cdf


# ---------------------------------------------------------------------------
# Moments and asymptotic constants
# ---------------------------------------------------------------------------

def log_sinh_integral(c: float, delta: float, tol: float = 1e-12) -> float:
    """F(c, delta) = int_0^oo ln(sinh(c z)) / cosh(delta z) dz.

    The ln(cz) endpoint singularity is integrable and the tail decays like
    z e^{(c - delta) z}, so delta > c is required for convergence.
    Satisfies the scaling identity F(c, delta) = (pi/2delta) F(c pi/(2delta)).
    """
    if not (c > 0.0 and delta > c):
        raise DomainError("log_sinh_integral requires 0 < c < delta")

    def integrand(z: float) -> float:
        arg = c * z
        if arg > 350.0:
            ls = arg - math.log(2.0)
        else:
            ls = math.log(math.sinh(arg))
        dz = delta * z
        if dz > 700.0:
            return 0.0
        return ls / math.cosh(dz)

    return quad_semi_infinite(integrand, decay=delta - c, tol=tol).value


def expected_log_exit(cone: ConeSpec, tol: float = 1e-12) -> float:
    """E[ln T] for the symmetric cone exit time T (unit start point):

        2 int_0^oo ln(sinh(c z))/cosh(pi z/2) dz + ln 2 + EULER_GAMMA.
    """
    cone.require_symmetric("expected_log_exit")
    if not cone.c < 0.5 * math.pi:
        # The two-sided exit time only has a log-moment for c < pi/2 (the
        # integral diverges otherwise, matching the tail exponent).
        raise DomainError("expected_log_exit requires c < pi/2")
    F = log_sinh_integral(cone.c, 0.5 * math.pi, tol)
    return 2.0 * F + math.log(2.0) + EULER_GAMMA


def sinh_moment2(c: float) -> float:
    """E[T] for the symmetric cone exit time (unit start), c < pi/4:

        (1/2)(1/cos(2c) - 1) = E[sinh(B)^2] at the two-sided BM exit."""
    if not 0.0 < c < 0.25 * math.pi:
        raise DomainError("sinh_moment2 requires 0 < c < pi/4 "
                          "(the first moment is infinite beyond)")
    return 0.5 * (1.0 / math.cos(2.0 * c) - 1.0)


def sinh_moment2_integral(c: float, tol: float = 1e-12) -> float:
    """Quadrature form of `sinh_moment2`:
    int_0^oo sinh(cz)^2 / cosh(pi z / 2) dz."""
    if not 0.0 < c < 0.25 * math.pi:
        raise DomainError("sinh_moment2_integral requires 0 < c < pi/4")

    def integrand(z: float) -> float:
        dz = 0.5 * math.pi * z
        if dz > 700.0:
            return 0.0
        s = math.sinh(c * z)
        return s * s / math.cosh(dz)

    return quad_semi_infinite(integrand, decay=0.5 * math.pi - 2.0 * c,
                              tol=tol).value


def sinh_moment4(c: float) -> float:
    """E[sinh(B)^4] at the two-sided BM exit (second moment driver of the
    small-lam OU expansion), c < pi/8:

        (1/8)(1/cos(4c) - 4/cos(2c) + 3)."""
    if not 0.0 < c < 0.125 * math.pi:
        raise DomainError("sinh_moment4 requires 0 < c < pi/8 "
                          "(finite if and only if c < pi/8)")
    return 0.125 * (1.0 / math.cos(4.0 * c) - 4.0 / math.cos(2.0 * c) + 3.0)


def sinh_moment4_integral(c: float, tol: float = 1e-12) -> float:
    """Quadrature form of `sinh_moment4`:
    int_0^oo sinh(cz)^4 / cosh(pi z / 2) dz."""
    if not 0.0 < c < 0.125 * math.pi:
        raise DomainError("sinh_moment4_integral requires 0 < c < pi/8")

    def integrand(z: float) -> float:
        dz = 0.5 * math.pi * z
        if dz > 700.0:
            return 0.0
        s = math.sinh(c * z)
        return s ** 4 / math.cosh(dz)

    return quad_semi_infinite(integrand, decay=0.5 * math.pi - 4.0 * c,
                              tol=tol).value


def spitzer_moment_finite(p: float, cone: ConeSpec) -> bool:
    """Whether E[T^p] is finite for the exit time of the sector (-d, c):
    true iff p < pi / (2 (c + d)) (boundary excluded)."""
    if not p > 0.0:
        raise DomainError("p must be positive")
    return p < math.pi / (2.0 * (cone.c + cone.d))


def log_moment_finite(eta: float) -> bool:
    """Whether E[(ln T)_+^eta] is finite for the one-sided angular hit:
    true iff eta < 1 (any level c)."""
    if not eta > 0.0:
        raise DomainError("eta must be positive")
    return eta < 1.0


def tail_constant(c: float) -> float:
    """The tail limit of the one-sided angular hit: (ln t) P(T > t) -> 4c/pi."""
    if not c > 0.0:
        raise DomainError("c must be positive")
    return 4.0 * c / math.pi


# ---------------------------------------------------------------------------
# Ornstein-Uhlenbeck windings through the deterministic clock
# ---------------------------------------------------------------------------

def ou_exit_from_bm_exit(t_bm, ou: OuSpec):
    """Map a Brownian winding exit time to the OU winding exit time through
    the inverse clock: (1/2 lam) ln(1 + (lam/D) t); identity at lam = 0 with
    D = 1/2.  Accepts scalars or arrays."""
    if np.any(np.asarray(t_bm) < 0.0):
        raise DomainError("t_bm must be >= 0")
    return ou.alpha_inv(t_bm)


def ou_mean_exit_asymptotics(cone: ConeSpec, ou: OuSpec, regime: str) -> float:
    """Asymptotic mean exit time of the OU winding from the symmetric cone.

    regime="large_lambda": (2 ln z0 + ln(lam/D) + E[ln T^bm]) / (2 lam),
    the gap to the true mean vanishing as lam grows.

    regime="small_lambda" (requires c < pi/8 so the second moment exists):
    (z0^2/2D) m2(c) - lam (1/3) (z0^2/2D)^2 m4(c), the first-order expansion
    at lam = 0 whose derivative is -(1/3) (z0^2/2D)^2 m4(c).
    """
    cone.require_symmetric("ou_mean_exit_asymptotics")
    scale = ou.z0 * ou.z0 / (2.0 * ou.D)
    if regime == "large_lambda":
        if not ou.lam > 0.0:
            raise DomainError("large_lambda regime requires lam > 0")
        log_mean = 2.0 * math.log(ou.z0) + expected_log_exit(cone)
        return (math.log(ou.lam / ou.D) + log_mean) / (2.0 * ou.lam)
    if regime == "small_lambda":
        if not cone.c < 0.125 * math.pi:
            raise DomainError("small_lambda expansion requires c < pi/8")
        return (scale * sinh_moment2(cone.c)
                - ou.lam * (scale * scale) * sinh_moment4(cone.c) / 3.0)
    raise DomainError(f"unknown regime {regime!r}")
