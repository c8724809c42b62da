"""Numba implementations of the sampling kernels.

Each kernel simulates n independent paths; path i draws from its own
counter-based stream (master_seed, base_stream + i), so results do not depend
on thread count or scheduling, and reruns are bit-identical.  The numpy twins
in `_kernels_numpy` consume the same integer streams.

Conventions shared by both backends:
  * normals come from channel 0 (channel 2 for a second independent BM),
    consumed pairwise per counter index with the odd one cached;
  * auxiliary uniforms (bridge crossings, sampled extrema) come from channel 1;
  * absorption times of grid walks are recorded at the step midpoint;
  * the exponential functional is returned in log form (the raw value
    overflows for the heavy-tailed horizons these laws produce).
"""

import math

import numpy as np
from numba import njit, prange

from ._rng import (CTR_TAG, CHANNEL_NORMAL, CHANNEL_NORMAL2, CHANNEL_UNIFORM,
                   PHILOX_M0, PHILOX_M1, PHILOX_W0, PHILOX_W1, SPLITMIX_GAMMA)

_U64 = np.uint64
_M32 = _U64(0xFFFFFFFF)
_M0 = _U64(PHILOX_M0)
_M1 = _U64(PHILOX_M1)
_W0 = _U64(PHILOX_W0)
_W1 = _U64(PHILOX_W1)
_TAG = _U64(CTR_TAG)
_GAMMA = _U64(SPLITMIX_GAMMA)
_SM1 = _U64(0xBF58476D1CE4E5B9)
_SM2 = _U64(0x94D049BB133111EB)
_S32 = _U64(32)
_S30 = _U64(30)
_S27 = _U64(27)
_S31 = _U64(31)
_S11 = _U64(11)
_ONE64 = _U64(1)
_CH_N = _U64(CHANNEL_NORMAL)
_CH_U = _U64(CHANNEL_UNIFORM)
_CH_N2 = _U64(CHANNEL_NORMAL2)
_TWO_NEG_53 = 2.0 ** -53
_TWO_PI = 2.0 * math.pi


@njit(cache=True, inline="always")
def _splitmix(x):
    z = x + _GAMMA
    z = (z ^ (z >> _S30)) * _SM1
    z = (z ^ (z >> _S27)) * _SM2
    return z ^ (z >> _S31)


@njit(cache=True, inline="always")
def _skey(master, sid):
    return _splitmix(_splitmix(master) ^ sid)


@njit(cache=True, inline="always")
def _philox_block(key, idx, channel):
    x0 = idx & _M32
    x1 = idx >> _S32
    x2 = channel
    x3 = _TAG
    k0 = key & _M32
    k1 = key >> _S32
    for r in range(10):
        if r > 0:
            k0 = (k0 + _W0) & _M32
            k1 = (k1 + _W1) & _M32
        p0 = x0 * _M0
        p1 = x2 * _M1
        hi0 = p0 >> _S32
        lo0 = p0 & _M32
        hi1 = p1 >> _S32
        lo1 = p1 & _M32
        x0 = hi1 ^ x1 ^ k0
        x1 = lo1
        x2 = hi0 ^ x3 ^ k1
        x3 = lo0
    return x0, x1, x2, x3


@njit(cache=True, inline="always")
def _uniform_pair(key, idx, channel):
    x0, x1, x2, x3 = _philox_block(key, idx, channel)
    hi = ((x0 << _S32) | x1) >> _S11
    lo = ((x2 << _S32) | x3) >> _S11
    return (np.float64(hi) + 1.0) * _TWO_NEG_53, np.float64(lo) * _TWO_NEG_53


@njit(cache=True, inline="always")
def _normal_pair(key, idx, channel):
    u1, u2 = _uniform_pair(key, idx, channel)
    r = math.sqrt(-2.0 * math.log(u1))
    a = _TWO_PI * u2
    return r * math.cos(a), r * math.sin(a)


@njit(cache=True, inline="always")
def _bridge_max(a, b, h, u):
    """Sampled maximum of a Brownian bridge from a to b over duration h."""
    d = a - b
    return 0.5 * (a + b + math.sqrt(d * d - 2.0 * h * math.log(u)))


@njit(cache=True, inline="always")
def _bridge_min(a, b, h, u):
    d = a - b
    return 0.5 * (a + b - math.sqrt(d * d - 2.0 * h * math.log(u)))


# ---------------------------------------------------------------------------
# 1-D hitting-time kernels
# ---------------------------------------------------------------------------

@njit(cache=True, parallel=True)
def one_sided_hit(master, base, n, c):
    """Exact one-sided hitting times c^2/N^2."""
    out = np.empty(n)
    for i in prange(n):
        key = _skey(master, base + _U64(i))
        z0, _z1 = _normal_pair(key, _U64(0), _CH_N)
        out[i] = c * c / (z0 * z0)
    return out


@njit(cache=True, parallel=True)
def one_sided_hit_grid(master, base, n, c, dt, t_max):
    """Grid+bridge direct simulation of the one-sided hit, censored at t_max.

    Returns (t, hit); t is min(hitting time, t_max)."""
    out_t = np.empty(n)
    out_hit = np.zeros(n, dtype=np.uint8)
    sdt = math.sqrt(dt)
    for i in prange(n):
        key = _skey(master, base + _U64(i))
        idxn = _U64(0)
        idxu = _U64(0)
        have = False
        cache = 0.0
        beta = 0.0
        t = 0.0
        while t < t_max:
            if have:
                z = cache
                have = False
            else:
                z, cache = _normal_pair(key, idxn, _CH_N)
                idxn += _ONE64
                have = True
            nxt = beta + sdt * z
            if nxt >= c:
                out_hit[i] = 1
                break
            e = 2.0 * (c - beta) * (c - nxt) / dt
            if e < 40.0:
                u, _ = _uniform_pair(key, idxu, _CH_U)
                idxu += _ONE64
                if u <= math.exp(-e):
                    out_hit[i] = 1
                    break
            beta = nxt
            t += dt
        out_t[i] = t + 0.5 * dt if out_hit[i] == 1 else t_max
    return out_t, out_hit


@njit(cache=True, parallel=True)
def two_sided_hit(master, base, n, c, dt):
    """Two-sided exit times of linear BM from (-c, c), grid dt with
    Brownian-bridge crossing corrections on both barriers."""
    out = np.empty(n)
    sdt = math.sqrt(dt)
    for i in prange(n):
        key = _skey(master, base + _U64(i))
        idxn = _U64(0)
        idxu = _U64(0)
        have = False
        cache = 0.0
        beta = 0.0
        t = 0.0
        while True:
            if have:
                z = cache
                have = False
            else:
                z, cache = _normal_pair(key, idxn, _CH_N)
                idxn += _ONE64
                have = True
            nxt = beta + sdt * z
            if nxt >= c or nxt <= -c:
                t += 0.5 * dt
                break
            eu = 2.0 * (c - beta) * (c - nxt) / dt
            ed = 2.0 * (c + beta) * (c + nxt) / dt
            pu = math.exp(-eu) if eu < 40.0 else 0.0
            pd = math.exp(-ed) if ed < 40.0 else 0.0
            if pu > 0.0 or pd > 0.0:
                u, _ = _uniform_pair(key, idxu, _CH_U)
                idxu += _ONE64
                if u <= pu + pd:
                    t += 0.5 * dt
                    break
            beta = nxt
            t += dt
        out[i] = t
    return out


@njit(cache=True, parallel=True)
def range_exit(master, base, n, c, dt):
    """First time the running range (sup - inf) of linear BM reaches c,
    with per-step sampled bridge extrema; also returns the exit time from
    (-c/2, c/2) detected on the same path (pathwise lower bound).

    Returns (t_range, t_half)."""
    out_r = np.empty(n)
    out_h = np.empty(n)
    sdt = math.sqrt(dt)
    half = 0.5 * c
    for i in prange(n):
        key = _skey(master, base + _U64(i))
        idxn = _U64(0)
        idxu = _U64(0)
        have = False
        cache = 0.0
        beta = 0.0
        t = 0.0
        hi = 0.0
        lo = 0.0
        t_half = -1.0
        while True:
            if have:
                z = cache
                have = False
            else:
                z, cache = _normal_pair(key, idxn, _CH_N)
                idxn += _ONE64
                have = True
            nxt = beta + sdt * z
            u1, u2 = _uniform_pair(key, idxu, _CH_U)
            idxu += _ONE64
            m_up = _bridge_max(beta, nxt, dt, u1)
            m_dn = _bridge_min(beta, nxt, dt, u2)
            if m_up > hi:
                hi = m_up
            if m_dn < lo:
                lo = m_dn
            if t_half < 0.0 and (m_up >= half or m_dn <= -half):
                t_half = t + 0.5 * dt
            if hi - lo >= c:
                out_r[i] = t + 0.5 * dt
                break
            beta = nxt
            t += dt
        if t_half < 0.0:
            # range reached c on the very step that crossed half-width too
            t_half = out_r[i]
        out_h[i] = t_half
    return out_r, out_h


# ---------------------------------------------------------------------------
# Exponential functional and the cone exit built on it
# ---------------------------------------------------------------------------

@njit(cache=True, inline="always")
def _log_exp_functional(key, stop, dt, nmax):
    """log of int_0^stop e^{2 beta} ds (trapezoid, exact Gaussian increments,
    channel-2 normals) and beta_stop.  The accumulation is carried at a
    floating log-offset so large excursions of beta cannot overflow."""
    m = int(math.ceil(stop / dt))
    if m < 1:
        m = 1
    if m > nmax:
        m = nmax
    h = stop / m
    sh = math.sqrt(h)
    idxn = _U64(0)
    have = False
    cache = 0.0
    beta = 0.0
    shift = 0.0
    acc = 0.0        # sum of trapezoids, scaled by e^{-shift}
    prev = 1.0       # e^{2*beta - shift} at the left step edge
    for _k in range(m):
        if have:
            z = cache
            have = False
        else:
            z, cache = _normal_pair(key, idxn, _CH_N2)
            idxn += _ONE64
            have = True
        beta += sh * z
        e2 = 2.0 * beta - shift
        if e2 > 350.0:
            # rescale so the new edge value is representable
            delta = e2 - 0.0
            acc *= math.exp(-delta)
            prev *= math.exp(-delta)
            shift += delta
            e2 = 0.0
        cur = math.exp(e2)
        acc += 0.5 * h * (prev + cur)
        prev = cur
    if acc <= 0.0:
        # all contributions underflowed the current scale; the integral is
        # dominated by the first edge at the old scale — return a floor
        return shift - 745.0, beta
    return math.log(acc) + shift, beta


@njit(cache=True, parallel=True)
def exp_functional(master, base, n, stops, dt, nmax):
    """Batch log(A_stop), beta_stop over given horizons."""
    out_log_a = np.empty(n)
    out_beta = np.empty(n)
    for i in prange(n):
        key = _skey(master, base + _U64(i))
        la, b = _log_exp_functional(key, stops[i], dt, nmax)
        out_log_a[i] = la
        out_beta[i] = b
    return out_log_a, out_beta


@njit(cache=True, parallel=True)
def exit_cone(master, base, n, c, dt, nmax, one_sided):
    """Exact-in-law winding exit times through the subordination identity:
    draw the angular hitting time tau (one- or two-sided), then the log of
    the exponential functional over [0, tau].  Returns (log_T, tau) for the
    unit start point; time scales by z0^2 downstream."""
    out_log_t = np.empty(n)
    out_tau = np.empty(n)
    sdt = math.sqrt(dt)
    for i in prange(n):
        key = _skey(master, base + _U64(i))
        if one_sided:
            z0, _ = _normal_pair(key, _U64(0), _CH_N)
            tau = c * c / (z0 * z0)
        else:
            idxn = _U64(0)
            idxu = _U64(0)
            have = False
            cache = 0.0
            beta = 0.0
            t = 0.0
            while True:
                if have:
                    z = cache
                    have = False
                else:
                    z, cache = _normal_pair(key, idxn, _CH_N)
                    idxn += _ONE64
                    have = True
                nxt = beta + sdt * z
                if nxt >= c or nxt <= -c:
                    t += 0.5 * dt
                    break
                eu = 2.0 * (c - beta) * (c - nxt) / dt
                ed = 2.0 * (c + beta) * (c + nxt) / dt
                pu = math.exp(-eu) if eu < 40.0 else 0.0
                pd = math.exp(-ed) if ed < 40.0 else 0.0
                if pu > 0.0 or pd > 0.0:
                    u, _ = _uniform_pair(key, idxu, _CH_U)
                    idxu += _ONE64
                    if u <= pu + pd:
                        t += 0.5 * dt
                        break
                beta = nxt
                t += dt
            tau = t
        la, _bend = _log_exp_functional(key, tau, dt, nmax)
        out_log_t[i] = la
        out_tau[i] = tau
    return out_log_t, out_tau


# ---------------------------------------------------------------------------
# Windings in the radial (Bessel-clock) representation
# ---------------------------------------------------------------------------

@njit(cache=True, inline="always")
def _budget_step(beta, rem, du, kappa):
    """Largest admissible clock step when the functional budget allows more
    than the base du: h such that h * e^{2(beta + 4 sqrt(h))} <= kappa*rem,
    i.e. a step the integrand cannot blow through even on a +4 sigma move."""
    L = math.log(kappa * rem) - 2.0 * beta
    if L <= 0.0:
        return du
    # solve 8 s + 2 ln s = L for s = sqrt(h); Newton from s = L/8
    s = L / 8.0
    if s < 1e-9:
        return du
    for _ in range(6):
        f = 8.0 * s + 2.0 * math.log(s) - L
        s -= f * s / (8.0 * s + 2.0)
        if s < 1e-12:
            s = 1e-12
    h = s * s
    # enforce the bound exactly (Newton can overshoot)
    while h > du and h * math.exp(2.0 * beta + 8.0 * math.sqrt(h)) > kappa * rem:
        h *= 0.5
    if h < du:
        h = du
    return h


@njit(cache=True, inline="always")
def _skew_winding_core(key, t_target, z0, du, track_max, max_steps):
    """Joint (beta, gamma) simulation in the radial clock: beta drives the
    functional A_u = int_0^u e^{2 beta} ds (beta_0 = ln z0), gamma is the
    angle in that clock; returns (theta, H, theta_sup, ok) at the first u
    with A_u = t_target.

    Steps are the base du while the functional is active and grow adaptively
    (budget rule) through deep negative excursions of beta where A stalls;
    the angle stays exact because Gaussian increments are exact at any step,
    and the running supremum of gamma uses sampled bridge maxima so it is
    exact in law given the skeleton."""
    beta = math.log(z0)
    gamma = 0.0
    gmax = 0.0
    u = 0.0
    acc = 0.0
    idxn = _U64(0)
    idxu = _U64(0)
    kappa = 0.01
    steps = 0
    while steps < max_steps:
        steps += 1
        e2b = math.exp(2.0 * beta)
        rem = t_target - acc
        if rem <= 1.5 * e2b * du:
            # final partial step: land on the target with frozen beta
            hf = rem / e2b
            z1, _z2 = _normal_pair(key, idxn, _CH_N)
            idxn += _ONE64
            gn = gamma + math.sqrt(hf) * z1
            if track_max:
                uu, _ = _uniform_pair(key, idxu, _CH_U)
                idxu += _ONE64
                m = _bridge_max(gamma, gn, hf, uu)
                if m > gmax:
                    gmax = m
            gamma = gn
            if gamma > gmax:
                gmax = gamma
            u += hf
            return gamma, u, gmax, True
        h = du
        if kappa * rem > du * e2b:
            h = _budget_step(beta, rem, du, kappa)
        z1, z2 = _normal_pair(key, idxn, _CH_N)
        idxn += _ONE64
        sh = math.sqrt(h)
        bn = beta + sh * z2
        gn = gamma + sh * z1
        if track_max:
            uu, _ = _uniform_pair(key, idxu, _CH_U)
            idxu += _ONE64
            m = _bridge_max(gamma, gn, h, uu)
            if m > gmax:
                gmax = m
        elif gn > gmax:
            gmax = gn
        e2n = math.exp(2.0 * bn) if 2.0 * bn < 700.0 else math.exp(700.0)
        inc = 0.5 * h * (e2b + e2n)
        if acc + inc >= t_target:
            # rare overshoot inside a step: linear crossing fraction
            f = (t_target - acc) / inc
            u += f * h
            theta = gamma + (gn - gamma) * f
            if theta > gmax:
                gmax = theta
            return theta, u, gmax, True
        acc += inc
        beta = bn
        gamma = gn
        u += h
    return gamma, u, gmax, False


@njit(cache=True, parallel=True)
def skew_winding_at_time(master, base, n, t_target, z0, du, track_max):
    """Winding angle, Bessel clock H, and running angle supremum at a fixed
    time, per the radial representation.  Returns (theta, H, theta_sup, ok)."""
    out_th = np.empty(n)
    out_h = np.empty(n)
    out_sup = np.empty(n)
    out_ok = np.zeros(n, dtype=np.uint8)
    for i in prange(n):
        key = _skey(master, base + _U64(i))
        th, hh, sup, ok = _skew_winding_core(key, t_target, z0, du, track_max,
                                             5_000_000)
        out_th[i] = th
        out_h[i] = hh
        out_sup[i] = sup
        out_ok[i] = 1 if ok else 0
    return out_th, out_h, out_sup, out_ok


@njit(cache=True, parallel=True)
def skew_winding_at_times(master, base, n, t_targets, z0, du, track_max):
    """Winding angle, Bessel clock, and running angle supremum at per-path
    fixed times.  Returns (theta, H, theta_sup, ok)."""
    out_th = np.empty(n)
    out_h = np.empty(n)
    out_sup = np.empty(n)
    out_ok = np.zeros(n, dtype=np.uint8)
    for i in prange(n):
        key = _skey(master, base + _U64(i))
        th, hh, sup, ok = _skew_winding_core(key, t_targets[i], z0, du,
                                             track_max, 5_000_000)
        out_th[i] = th
        out_h[i] = hh
        out_sup[i] = sup
        out_ok[i] = 1 if ok else 0
    return out_th, out_h, out_sup, out_ok


@njit(cache=True, parallel=True)
def skew_winding_at_indep_hit(master, base, n, b, z0, du, track_max):
    """Winding angle (and clock, supremum) at the first time an independent
    linear BM hits b: the horizon is drawn exactly as b^2/N^2 (channel-2
    normal), then the winding is simulated to it.  Returns
    (theta, H, theta_sup, ok)."""
    out_th = np.empty(n)
    out_h = np.empty(n)
    out_sup = np.empty(n)
    out_ok = np.zeros(n, dtype=np.uint8)
    for i in prange(n):
        key = _skey(master, base + _U64(i))
        zh, _ = _normal_pair(key, _U64(0), _CH_N2)
        horizon = b * b / (zh * zh)
        th, hh, sup, ok = _skew_winding_core(key, horizon, z0, du, track_max,
                                             5_000_000)
        out_th[i] = th
        out_h[i] = hh
        out_sup[i] = sup
        out_ok[i] = 1 if ok else 0
    return out_th, out_h, out_sup, out_ok


# ---------------------------------------------------------------------------
# Direct planar simulations (xy plane), used as oracles
# ---------------------------------------------------------------------------

@njit(cache=True, parallel=True)
def angle_exit_planar(master, base, n, c, one_sided, dt_cap, z0, lam, D):
    """Direct planar simulation (BM for lam=0, OU otherwise, exact Gaussian
    steps) until the continuous winding angle first leaves the sector:
    theta >= c (one-sided) or |theta| >= c (two-sided).  Adaptive steps keep
    both the relative radial move and the expected angle increment small;
    near the barrier the step shrinks with the remaining angular gap.
    Returns (T, ok); crossing times use linear interpolation in the step."""
    out_t = np.empty(n)
    out_ok = np.zeros(n, dtype=np.uint8)
    max_steps = 200_000_000
    for i in prange(n):
        key = _skey(master, base + _U64(i))
        idxn = _U64(0)
        x = z0
        y = 0.0
        theta = 0.0
        t = 0.0
        steps = 0
        done = False
        while steps < max_steps:
            steps += 1
            r2 = x * x + y * y
            gap = c - theta
            if not one_sided and c + theta < gap:
                gap = c + theta
            gs = gap
            if gs < 0.02:
                gs = 0.02
            h = 0.01 * r2 / (2.0 * D)
            hg = (0.15 * gs) * (0.15 * gs) * r2 / (2.0 * D)
            if hg < h:
                h = hg
            if h > dt_cap:
                h = dt_cap
            z1, z2 = _normal_pair(key, idxn, _CH_N)
            idxn += _ONE64
            if lam > 0.0:
                ef = math.exp(-lam * h)
                sg = math.sqrt(D * (1.0 - ef * ef) / lam)
            else:
                ef = 1.0
                sg = math.sqrt(2.0 * D * h)
            xn = x * ef + sg * z1
            yn = y * ef + sg * z2
            dth = math.atan2(yn * x - xn * y, xn * x + yn * y)
            tn = theta + dth
            crossed_up = tn >= c
            crossed_dn = (not one_sided) and tn <= -c
            if crossed_up or crossed_dn:
                lvl = c if crossed_up else -c
                f = (lvl - theta) / dth
                out_t[i] = t + f * h
                out_ok[i] = 1
                done = True
                break
            theta = tn
            x = xn
            y = yn
            t += h
        if not done:
            out_t[i] = t
    return out_t, out_ok


@njit(cache=True, parallel=True)
def planar_theta_at_time(master, base, n, horizon, z0, dt, rot_c, rot_s,
                         step_floor):
    """Direct planar BM winding at a fixed moderate horizon: returns
    (theta, H, ok) with the adaptive step policy min(dt, 0.01 |Z|^2); the driving
    noise is rotated by the fixed phase (rot_c, rot_s) — the winding law must
    be invariant under it.  ok=0 flags a step-floor underflow."""
    out_th = np.empty(n)
    out_h = np.empty(n)
    out_ok = np.zeros(n, dtype=np.uint8)
    for i in prange(n):
        key = _skey(master, base + _U64(i))
        idxn = _U64(0)
        x = z0
        y = 0.0
        theta = 0.0
        hclock = 0.0
        t = 0.0
        ok = True
        while t < horizon:
            r2 = x * x + y * y
            h = 0.01 * r2
            if h > dt:
                h = dt
            if h < step_floor:
                ok = False
                break
            last = h >= horizon - t
            if last:
                h = horizon - t
            z1, z2 = _normal_pair(key, idxn, _CH_N)
            idxn += _ONE64
            w1 = rot_c * z1 - rot_s * z2
            w2 = rot_s * z1 + rot_c * z2
            sh = math.sqrt(h)
            xn = x + sh * w1
            yn = y + sh * w2
            r2n = xn * xn + yn * yn
            theta += math.atan2(yn * x - xn * y, xn * x + yn * y)
            hclock += 0.5 * h * (1.0 / r2 + 1.0 / r2n)
            x = xn
            y = yn
            t = horizon if last else t + h
        out_th[i] = theta
        out_h[i] = hclock
        out_ok[i] = 1 if ok else 0
    return out_th, out_h, out_ok


@njit(cache=True)
def planar_winding_path(master, sid, horizon, z0, dt, step_floor, cap):
    """Single-path planar BM winding with full trajectory recording.

    Returns (times, log_modulus, angle, clock, count, status); status 1 means
    the adaptive step fell below step_floor at times[count-1]."""
    times = np.empty(cap)
    logr = np.empty(cap)
    angle = np.empty(cap)
    clock = np.empty(cap)
    key = _skey(master, sid)
    idxn = _U64(0)
    x = z0
    y = 0.0
    theta = 0.0
    hclock = 0.0
    t = 0.0
    times[0] = 0.0
    logr[0] = math.log(z0)
    angle[0] = 0.0
    clock[0] = 0.0
    k = 1
    status = 0
    while t < horizon and k < cap:
        r2 = x * x + y * y
        h = 0.01 * r2
        if h > dt:
            h = dt
        if h < step_floor:
            status = 1
            break
        last = h >= horizon - t
        if last:
            h = horizon - t
        z1, z2 = _normal_pair(key, idxn, _CH_N)
        idxn += _ONE64
        sh = math.sqrt(h)
        xn = x + sh * z1
        yn = y + sh * z2
        r2n = xn * xn + yn * yn
        theta += math.atan2(yn * x - xn * y, xn * x + yn * y)
        hclock += 0.5 * h * (1.0 / r2 + 1.0 / r2n)
        x = xn
        y = yn
        t = horizon if last else t + h
        times[k] = t
        logr[k] = 0.5 * math.log(r2n)
        angle[k] = theta
        clock[k] = hclock
        k += 1
    return times, logr, angle, clock, k, status


# ---------------------------------------------------------------------------
# Ornstein-Uhlenbeck boundary hit for the OU-Bougerol pipeline
# ---------------------------------------------------------------------------

@njit(cache=True, parallel=True)
def ou_boundary_hit(master, base, n, b, lam, D, dt, t_cap):
    """First time the OU process U (U_0 = 0, dU = -lam U dt + sqrt(2D) dW)
    satisfies e^{lam t} U_t = b: simulated with exact OU steps and a
    Brownian-bridge crossing correction in the alpha-clock, where
    delta_t = e^{lam t} U_t is a Brownian motion.  Hit times are recorded at
    the alpha midpoint mapped back through alpha_inv.  Returns (t_hit, ok)."""
    out_t = np.empty(n)
    out_ok = np.zeros(n, dtype=np.uint8)
    if lam > 0.0:
        ef = math.exp(-lam * dt)
        sg = math.sqrt(D * (1.0 - ef * ef) / lam)
    else:
        ef = 1.0
        sg = math.sqrt(2.0 * D * dt)
    for i in prange(n):
        key = _skey(master, base + _U64(i))
        idxn = _U64(0)
        idxu = _U64(0)
        have = False
        cache = 0.0
        uval = 0.0
        t = 0.0
        delta = 0.0
        while t < t_cap:
            if have:
                z = cache
                have = False
            else:
                z, cache = _normal_pair(key, idxn, _CH_N)
                idxn += _ONE64
                have = True
            un = uval * ef + sg * z
            tn = t + dt
            dn = un * math.exp(lam * tn) if lam > 0.0 else un
            if lam > 0.0:
                d_alpha = D * (math.exp(2.0 * lam * tn) - math.exp(2.0 * lam * t)) / lam
            else:
                d_alpha = 2.0 * D * dt
            hit = False
            a_frac = 0.5
            if dn >= b:
                hit = True
                a_frac = 0.5
            else:
                e = 2.0 * (b - delta) * (b - dn) / d_alpha
                if e < 40.0:
                    u, _ = _uniform_pair(key, idxu, _CH_U)
                    idxu += _ONE64
                    if u <= math.exp(-e):
                        hit = True
            if hit:
                if lam > 0.0:
                    a_mid = D * (math.exp(2.0 * lam * t) - 1.0) / lam + a_frac * d_alpha
                    out_t[i] = math.log1p(lam * a_mid / D) / (2.0 * lam)
                else:
                    out_t[i] = t + a_frac * dt
                out_ok[i] = 1
                break
            uval = un
            t = tn
            delta = dn
        if out_ok[i] == 0:
            out_t[i] = t_cap
    return out_t, out_ok


@njit(cache=True, parallel=True)
def cauchy_exact(master, base, n, scale):
    """Exact Cauchy draws scale * tan(pi (U - 1/2)) (channel-1 uniforms)."""
    out = np.empty(n)
    for i in prange(n):
        key = _skey(master, base + _U64(i))
        u, _ = _uniform_pair(key, _U64(0), _CH_U)
        out[i] = scale * math.tan(math.pi * (u - 0.5))
    return out


@njit(cache=True, parallel=True)
def normals_batch(master, base, n, channel):
    """One standard normal per stream (first of the Box-Muller pair)."""
    out = np.empty(n)
    ch = _U64(channel)
    for i in prange(n):
        key = _skey(master, base + _U64(i))
        z, _ = _normal_pair(key, _U64(0), ch)
        out[i] = z
    return out
