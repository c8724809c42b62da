"""Random samplers for winding functionals of planar Brownian motion.

Exact-in-law samplers are built on the radial representation
(log|Z_t| = beta_{H_t}, theta_t = gamma_{H_t}, with the clock inverse
A_u = int_0^u e^{2 beta}) so that heavy-tailed hitting times never require
resolving excursions near the origin; direct plane simulations are provided
as independent oracles where they are feasible.

Randomness is counter-based: a stream is (master_seed, stream_id), every
stream id yields an independent reproducible sequence, and batch samplers
assign one stream per path from the contiguous block
[stream_id, stream_id + n).  Results are independent of thread count and
identical on reruns.
"""

import math
from dataclasses import dataclass, field
from typing import Tuple

import numpy as np

from ._backend import kernels
from ._rng import CHANNEL_NORMAL, CHANNEL_NORMAL2, MASK64
from .errors import NonConvergenceError, StepUnderflowError
from .laws import ConeSpec, OuSpec, arcsinh_a, ou_exit_from_bm_exit

DEFAULT_FUNCTIONAL_CAP = 10_000_000
"""Default cap on the number of grid steps of one exponential-functional
integration (bounds work on the heavy-tailed one-sided horizons)."""


@dataclass(frozen=True)
class RngStream:
    """A reproducible random stream: (master_seed, stream_id).

    Distinct stream ids under one master seed are independent; batch
    samplers use ids [stream_id, stream_id + n), so callers running several
    batches should space their stream ids accordingly (`advance`)."""

    master_seed: int
    stream_id: int = 0

    def __post_init__(self):
        if not 0 <= self.master_seed <= MASK64:
            raise ValueError("master_seed must fit in 64 bits")
        if self.stream_id < 0:
            raise ValueError("stream_id must be >= 0")

    def advance(self, n: int) -> "RngStream":
        """The stream starting right after a block of n path streams."""
        return RngStream(self.master_seed, self.stream_id + int(n))

    def _mb(self):
        return np.uint64(self.master_seed), np.uint64(self.stream_id)


@dataclass(frozen=True)
class WindingPath:
    """A simulated planar-winding trajectory on its adaptive time grid."""

    times: np.ndarray
    log_modulus: np.ndarray
    angle: np.ndarray
    clock: np.ndarray

    def __post_init__(self):
        if not (np.diff(self.times) > 0).all():
            raise ValueError("times must be strictly increasing")
        if self.angle[0] != 0.0 or self.clock[0] != 0.0:
            raise ValueError("paths start with angle = clock = 0")
        if (np.diff(self.clock) < 0).any():
            raise ValueError("clock must be nondecreasing")


@dataclass(frozen=True)
class SampleBatch:
    """A batch of i.i.d. samples with its seed provenance."""

    values: np.ndarray
    n: int
    seed_provenance: Tuple[int, Tuple[int, int]]
    label: str = field(default="")

    def __post_init__(self):
        if self.n != len(self.values):
            raise ValueError("n must equal len(values)")
        if not np.isfinite(self.values).all():
            raise ValueError("batch contains non-finite values")


def _batch(values, rng: RngStream, n: int, label: str) -> SampleBatch:
    prov = (rng.master_seed, (rng.stream_id, rng.stream_id + n))
    return SampleBatch(np.asarray(values), n, prov, label)


# ---------------------------------------------------------------------------
# Hitting times of linear Brownian motion
# ---------------------------------------------------------------------------

def one_sided_hit_batch(c: float, n: int, rng: RngStream) -> SampleBatch:
    """n exact samples of the first hitting time of level c > 0 by a
    standard linear BM started at 0 (law c^2/N^2)."""
    if c <= 0:
        raise ValueError("c must be > 0")
    m, b = rng._mb()
    return _batch(kernels.one_sided_hit(m, b, int(n), float(c)), rng, n,
                  "one-sided-hit(c=%g)" % c)


def sample_one_sided_hit(c: float, rng: RngStream) -> float:
    """One exact sample of the one-sided hitting time (c^2/N^2)."""
    return float(one_sided_hit_batch(c, 1, rng).values[0])


def two_sided_hit_batch(c: float, dt: float, n: int,
                        rng: RngStream) -> SampleBatch:
    """n samples of the exit time of linear BM from (-c, c): grid step dt
    with Brownian-bridge crossing corrections on both barriers; the
    remaining bias vanishes as dt -> 0."""
    if c <= 0 or dt <= 0:
        raise ValueError("c and dt must be > 0")
    m, b = rng._mb()
    return _batch(kernels.two_sided_hit(m, b, int(n), float(c), float(dt)),
                  rng, n, "two-sided-hit(c=%g,dt=%g)" % (c, dt))


def sample_two_sided_hit(c: float, dt: float, rng: RngStream) -> float:
    """One sample of the two-sided exit time of linear BM from (-c, c)."""
    return float(two_sided_hit_batch(c, dt, 1, rng).values[0])


def one_sided_hit_grid_batch(c: float, dt: float, t_max: float, n: int,
                             rng: RngStream):
    """Direct grid+bridge simulation of the one-sided hit, censored at
    t_max (the hitting time has infinite mean, so any direct simulation
    must censor).  Returns (times, hit_flags)."""
    if c <= 0 or dt <= 0 or t_max <= 0:
        raise ValueError("c, dt, t_max must be > 0")
    m, b = rng._mb()
    return kernels.one_sided_hit_grid(m, b, int(n), float(c), float(dt),
                                      float(t_max))


# ---------------------------------------------------------------------------
# Exponential functional of linear BM
# ---------------------------------------------------------------------------

def exp_functional_log_batch(stop, dt: float, n: int, rng: RngStream,
                             nmax: int = DEFAULT_FUNCTIONAL_CAP):
    """log A_stop and beta_stop for n paths, where A_u = int_0^u e^{2 beta}.

    `stop` is a scalar horizon or a per-path array.  The grid step is
    stop/ceil(stop/dt) <= dt, capped at nmax steps (heavy-tailed horizons
    would otherwise be unboundedly expensive; capped paths coarsen their
    grid, which matters only beyond the resolved tail).  Returns
    (log_a, beta_end) arrays."""
    if dt <= 0:
        raise ValueError("dt must be > 0")
    stops = np.broadcast_to(np.asarray(stop, dtype=float), (int(n),)).copy()
    if (stops <= 0).any():
        raise ValueError("stop must be > 0")
    m, b = rng._mb()
    return kernels.exp_functional(m, b, int(n), stops, float(dt), int(nmax))


def exp_functional(stop: float, dt: float, rng: RngStream):
    """(A_stop, beta_stop) for one path: the trapezoidal estimate of
    int_0^stop e^{2 beta} ds from exact Gaussian increments of beta on a
    grid of step <= dt, and the endpoint beta_stop.  Weak error O(dt)."""
    la, bend = exp_functional_log_batch(float(stop), dt, 1, rng)
    return float(np.exp(la[0])), float(bend[0])


# ---------------------------------------------------------------------------
# Winding exit times (exact in law via the radial representation)
# ---------------------------------------------------------------------------

def exit_cone_log_batch(cone: ConeSpec, z0: float, dt: float, n: int,
                        rng: RngStream, one_sided: bool = False,
                        nmax: int = DEFAULT_FUNCTIONAL_CAP):
    """n exact-in-law samples of the winding exit time, in log form.

    Two-sided (default): ln T where T is the first time the winding of a
    planar BM started at z0 > 0 leaves (-c, c).  One-sided: the first time
    the winding reaches c.  Construction: the angular hitting time tau of
    the driving linear BM, then T = z0^2 * A_tau.  Returns (log_t, tau)."""
    cone.require_symmetric("exit_cone sampling")
    if z0 <= 0:
        raise ValueError("z0 must be > 0")
    if dt <= 0:
        raise ValueError("dt must be > 0")
    m, b = rng._mb()
    log_t, tau = kernels.exit_cone(m, b, int(n), cone.c, float(dt),
                                   int(nmax), bool(one_sided))
    return log_t + 2.0 * math.log(z0), tau


def exit_cone_batch(cone: ConeSpec, z0: float, dt: float, n: int,
                    rng: RngStream, one_sided: bool = False,
                    nmax: int = DEFAULT_FUNCTIONAL_CAP) -> SampleBatch:
    """Exact-in-law winding exit times (linear scale).  Suitable for
    two-sided cones, whose exit time has moments of all orders below the
    zeta threshold; one-sided times are so heavy-tailed that occasional
    samples overflow double precision — use exit_cone_log_batch there."""
    log_t, _tau = exit_cone_log_batch(cone, z0, dt, n, rng,
                                      one_sided=one_sided, nmax=nmax)
    side = "one" if one_sided else "two"
    return _batch(np.exp(log_t), rng, n,
                  "exit-cone-%s-sided(c=%g,z0=%g,dt=%g)" % (side, cone.c,
                                                            z0, dt))


def sample_exit_cone(cone: ConeSpec, z0: float, dt: float, rng: RngStream,
                     one_sided: bool = False) -> float:
    """One exact-in-law sample of the winding exit time T for planar BM
    started at z0: draw the angular hitting time tau, return
    z0^2 * exp_functional(tau).A."""
    return float(exit_cone_batch(cone, z0, dt, 1, rng,
                                 one_sided=one_sided).values[0])


def range_exit_batch(c: float, dt: float, n: int, rng: RngStream):
    """First times the running range (sup - inf) of a linear BM reaches c,
    simulated on grid dt with per-step sampled bridge extrema; also returns
    the exit time from (-c/2, c/2) detected on the same paths, which is a
    pathwise lower bound.  Returns (t_range, t_half)."""
    if c <= 0 or dt <= 0:
        raise ValueError("c and dt must be > 0")
    m, b = rng._mb()
    return kernels.range_exit(m, b, int(n), float(c), float(dt))


def sample_range_exit(c: float, dt: float, rng: RngStream) -> float:
    """One sample of the winding-range exit time: the first time
    sup theta - inf theta = c, via the range time of the driving linear BM
    and the exponential functional at it (start point 1)."""
    t_range, _ = range_exit_batch(c, dt, 1, rng)
    la, _bend = exp_functional_log_batch(float(t_range[0]), dt, 1, rng)
    return float(np.exp(la[0]))


def range_exit_log_batch(c: float, dt: float, n: int, rng: RngStream,
                         nmax: int = DEFAULT_FUNCTIONAL_CAP):
    """Batch version of sample_range_exit in log form: returns
    (log_t, t_range, t_half); the functional reuses each path's stream on
    its own channel, matching the scalar composition."""
    t_range, t_half = range_exit_batch(c, dt, n, rng)
    m, b = rng._mb()
    la, _bend = kernels.exp_functional(m, b, int(n), t_range, float(dt),
                                       int(nmax))
    return la, t_range, t_half


# ---------------------------------------------------------------------------
# Winding at fixed times and at independent hitting times
# ---------------------------------------------------------------------------

def winding_at_time_batch(t: float, z0: float, n: int, rng: RngStream,
                          du: float = 1e-3, track_max: bool = False):
    """Winding angle theta_t, Bessel clock H_t, and running supremum
    sup_{s<=t} theta_s for n planar BM paths at a fixed time, simulated in
    the radial representation (joint (beta, gamma) in the radial clock,
    stopping when A_u reaches t).  The angle supremum uses sampled bridge
    maxima and is exact in law given the skeleton when track_max is set.
    Returns (theta, clock, theta_sup)."""
    if t <= 0 or z0 <= 0 or du <= 0:
        raise ValueError("t, z0, du must be > 0")
    m, b = rng._mb()
    th, h, sup, ok = kernels.skew_winding_at_time(m, b, int(n), float(t),
                                                  float(z0), float(du),
                                                  bool(track_max))
    if not ok.all():
        raise NonConvergenceError(
            "winding driver exceeded its step budget on %d/%d paths"
            % (int((ok == 0).sum()), n))
    return th, h, sup


def winding_at_times_batch(t_targets, z0: float, n: int, rng: RngStream,
                           du: float = 1e-3, track_max: bool = False):
    """Same as winding_at_time_batch with one horizon per path (used when
    the horizons themselves are sampled, e.g. boundary-hit times of an
    independent process).  Returns (theta, clock, theta_sup)."""
    targets = np.broadcast_to(np.asarray(t_targets, dtype=float),
                              (int(n),)).copy()
    if (targets <= 0).any() or z0 <= 0 or du <= 0:
        raise ValueError("horizons, z0, du must be > 0")
    m, b = rng._mb()
    th, h, sup, ok = kernels.skew_winding_at_times(m, b, int(n), targets,
                                                   float(z0), float(du),
                                                   bool(track_max))
    if not ok.all():
        raise NonConvergenceError(
            "winding driver exceeded its step budget on %d/%d paths"
            % (int((ok == 0).sum()), n))
    return th, h, sup


def winding_at_indep_hit_batch(b_level: float, n: int, rng: RngStream,
                               z0: float = 1.0, du: float = 1e-3,
                               track_max: bool = False):
    """theta, H, and sup theta at the first time an independent linear BM
    hits b_level: the horizon is drawn exactly (b^2/N^2 on an independent
    channel), the winding is then simulated to it in the radial
    representation.  Returns (theta, clock, theta_sup)."""
    if b_level <= 0 or z0 <= 0 or du <= 0:
        raise ValueError("b_level, z0, du must be > 0")
    m, b = rng._mb()
    th, h, sup, ok = kernels.skew_winding_at_indep_hit(
        m, b, int(n), float(b_level), float(z0), float(du), bool(track_max))
    if not ok.all():
        raise NonConvergenceError(
            "winding driver exceeded its step budget on %d/%d paths"
            % (int((ok == 0).sum()), n))
    return th, h, sup


def cauchy_batch(scale: float, n: int, rng: RngStream) -> SampleBatch:
    """n exact standard-Cauchy-scaled draws via the inverse CDF (tan form);
    exact quantile coupling with the uniform stream."""
    if scale <= 0:
        raise ValueError("scale must be > 0")
    m, b = rng._mb()
    return _batch(kernels.cauchy_exact(m, b, int(n), float(scale)), rng, n,
                  "cauchy(scale=%g)" % scale)


def std_normal_batch(n: int, rng: RngStream,
                     independent_channel: bool = False) -> SampleBatch:
    """One standard normal per stream; with independent_channel=True the
    draws come from the secondary normal channel, independent of any
    primary-channel use of the same streams."""
    ch = CHANNEL_NORMAL2 if independent_channel else CHANNEL_NORMAL
    m, b = rng._mb()
    return _batch(kernels.normals_batch(m, b, int(n), ch), rng, n, "normal")


def sample_winding_at_indep_hit(b: float, mode: str, rng: RngStream,
                                sup: bool = False, du: float = 1e-3) -> float:
    """Winding angle of a planar BM (start 1) at the first hitting time of
    level b by an independent linear BM.

    mode="exact": the law is Cauchy with scale arcsinh(b) — inverse-CDF
    draw; with sup=True, the supremum variant |Cauchy(arcsinh(b))|.
    mode="simulated": simulate the winding to an exactly drawn horizon.
    Both modes agree in law."""
    if mode == "exact":
        v = float(cauchy_batch(arcsinh_a(b), 1, rng).values[0])
        return abs(v) if sup else v
    if mode == "simulated":
        th, _h, s = winding_at_indep_hit_batch(b, 1, rng, track_max=sup)
        return float(s[0]) if sup else float(th[0])
    raise ValueError("mode must be 'exact' or 'simulated'")


# ---------------------------------------------------------------------------
# Direct planar simulations
# ---------------------------------------------------------------------------

def simulate_planar_winding(horizon: float, z0: float, dt: float,
                            rng: RngStream, step_floor: float = None,
                            max_points: int = None) -> WindingPath:
    """Direct simulation of a planar BM path from z0 > 0 with its winding
    angle, log-modulus, and Bessel clock on an adaptive grid.

    The step is min(dt, 0.01 |Z|^2): small enough that per-step angle
    increments stay far from pi (the principal-branch accumulation of theta
    is then correct — the path never visits 0) and that the 1/|Z|^2 clock
    integrand is resolved.  Deep excursions toward the origin shrink the
    step geometrically; if it falls below step_floor (default
    1e-14 * horizon) a StepUnderflowError is raised.  Long horizons make
    such excursions likely — fixed-time winding laws are better sampled by
    winding_at_time_batch, which is dive-proof by construction."""
    if horizon <= 0 or z0 <= 0 or dt <= 0:
        raise ValueError("horizon, z0, dt must be > 0")
    floor = 1e-14 * horizon if step_floor is None else float(step_floor)
    if max_points is None:
        max_points = 3 * int(math.ceil(horizon / dt)) + 4096
    m, b = rng._mb()
    times, logr, angle, clock, count, status = kernels.planar_winding_path(
        m, b, float(horizon), float(z0), float(dt), floor, int(max_points))
    if status == 1:
        raise StepUnderflowError(
            "adaptive step fell below %g at t=%g (deep excursion toward the "
            "origin)" % (floor, times[count - 1]))
    if times[count - 1] < horizon:
        raise NonConvergenceError("path buffer exhausted before the horizon; "
                                  "increase max_points")
    return WindingPath(times[:count].copy(), logr[:count].copy(),
                       angle[:count].copy(), clock[:count].copy())


def planar_winding_at_time_batch(horizon: float, z0: float, dt: float,
                                 n: int, rng: RngStream,
                                 rotation: float = 0.0,
                                 step_floor: float = None,
                                 on_underflow: str = "raise"):
    """theta_horizon and H_horizon for n directly simulated planar paths
    (same stepping policy as simulate_planar_winding, without trajectory
    storage).  The driving noise is rotated by the fixed `rotation` phase —
    the law of theta is invariant under it.

    Paths whose adaptive step underflows the floor (the modulus dipped
    below sqrt(100 * floor)) cannot be continued in cartesian coordinates.
    With on_underflow="raise" any such path aborts the batch; with "mask"
    the triple (theta, clock, ok) is returned and flagged paths are parked
    where they stood.  Masking is a radius-measurable censoring, so
    comparisons that condition both sides on ok (or compare two identically
    censored batches) remain exact in law.  Returns (theta, clock) or
    (theta, clock, ok)."""
    if horizon <= 0 or z0 <= 0 or dt <= 0:
        raise ValueError("horizon, z0, dt must be > 0")
    if on_underflow not in ("raise", "mask"):
        raise ValueError("on_underflow must be 'raise' or 'mask'")
    floor = 1e-14 * horizon if step_floor is None else float(step_floor)
    m, b = rng._mb()
    th, h, ok = kernels.planar_theta_at_time(
        m, b, int(n), float(horizon), float(z0), float(dt),
        math.cos(rotation), math.sin(rotation), floor)
    if on_underflow == "mask":
        return th, h, ok == 1
    if not ok.all():
        raise StepUnderflowError(
            "adaptive step underflow on %d/%d paths (deep excursion); use "
            "winding_at_time_batch for long horizons, or on_underflow="
            "'mask'" % (int((ok == 0).sum()), n))
    return th, h


def angle_exit_planar_batch(cone: ConeSpec, n: int, rng: RngStream,
                            z0: float = 1.0, dt_cap: float = 1e-2,
                            one_sided: bool = False,
                            ou: OuSpec = None):
    """Direct planar simulation (BM, or OU when `ou` is given) until the
    winding angle first leaves the sector — an independent oracle for the
    exact-in-law exit samplers.  Angle exits stop every path almost
    immediately after any deep radial excursion, so no step floor is
    needed.  Returns exit times."""
    cone.require_symmetric("angle exit simulation")
    lam = 0.0 if ou is None else ou.lam
    dd = 0.5 if ou is None else ou.D
    if ou is not None:
        z0 = ou.z0
    m, b = rng._mb()
    t, ok = kernels.angle_exit_planar(m, b, int(n), cone.c, bool(one_sided),
                                      float(dt_cap), float(z0), float(lam),
                                      float(dd))
    if not ok.all():
        raise NonConvergenceError(
            "angle-exit simulation exceeded its step budget on %d/%d paths"
            % (int((ok == 0).sum()), n))
    return t


# ---------------------------------------------------------------------------
# Ornstein-Uhlenbeck winding exits
# ---------------------------------------------------------------------------

def ou_exit_batch(cone: ConeSpec, ou: OuSpec, dt: float, n: int,
                  rng: RngStream, mode: str = "exact",
                  nmax: int = DEFAULT_FUNCTIONAL_CAP) -> SampleBatch:
    """Winding exit times of the OU process from the symmetric cone.

    mode="exact": exact in law via the deterministic time change of a BM
    exit (at lam=0 the output equals the BM sampler's pathwise).
    mode="direct": direct planar OU simulation (oracle)."""
    cone.require_symmetric("OU exit sampling")
    if mode == "exact":
        log_t, _tau = exit_cone_log_batch(cone, ou.z0, dt, n, rng, nmax=nmax)
        vals = ou_exit_from_bm_exit(np.exp(log_t), ou)
        return _batch(vals, rng, n,
                      "ou-exit-exact(c=%g,lam=%g)" % (cone.c, ou.lam))
    if mode == "direct":
        t = angle_exit_planar_batch(cone, n, rng, dt_cap=dt, ou=ou)
        return _batch(t, rng, n,
                      "ou-exit-direct(c=%g,lam=%g)" % (cone.c, ou.lam))
    raise ValueError("mode must be 'exact' or 'direct'")


def sample_ou_exit(cone: ConeSpec, ou: OuSpec, dt: float, rng: RngStream,
                   mode: str = "exact") -> float:
    """One OU winding exit time (see ou_exit_batch)."""
    return float(ou_exit_batch(cone, ou, dt, 1, rng, mode=mode).values[0])


def ou_boundary_hit_batch(b_level: float, ou: OuSpec, dt: float,
                          t_cap: float, n: int, rng: RngStream):
    """First times the 1-D OU process U (U_0 = 0) satisfies
    e^{lam t} U_t = b_level, with bridge crossing corrections performed in
    the clock where e^{lam t} U_t is a Brownian motion.  Returns
    (t_hit, hit_flags); paths that have not hit by t_cap are censored."""
    if b_level <= 0 or dt <= 0 or t_cap <= 0:
        raise ValueError("b_level, dt, t_cap must be > 0")
    m, b = rng._mb()
    return kernels.ou_boundary_hit(m, b, int(n), float(b_level), ou.lam,
                                   ou.D, float(dt), float(t_cap))
