"""Pure-numpy implementations of the sampling kernels.

Mirrors the function surface of `_kernels_numba` and consumes the identical
per-path counter streams (same keys, channels, and draw indices), so the two
backends are interchangeable; floating-point results may differ in the last
ulp where numpy's vector math library rounds differently from libm, which can
occasionally flip a data-dependent branch on adaptive kernels — the backends
are stream-identical at the integer level and statistically identical at the
sample level.

Batch loops operate on compacted active-index arrays so per-step cost scales
with the number of unfinished paths.
"""

import math

import numpy as np

from ._rng import (CHANNEL_NORMAL, CHANNEL_NORMAL2, CHANNEL_UNIFORM,
                   normal_pair, stream_key, stream_keys_np, normal_pair_np,
                   uniform_pair_np)

_U64_1 = np.uint64(1)


def _keys_for(master, base, n):
    ids = np.uint64(base) + np.arange(n, dtype=np.uint64)
    return stream_keys_np(int(master), ids)


class _NormalCache:
    """Pairwise Box-Muller consumption with the odd draw cached, matching the
    scalar kernels' per-path state machine."""

    def __init__(self, keys, channel):
        n = keys.shape[0]
        self.keys = keys
        self.channel = channel
        self.idx = np.zeros(n, dtype=np.uint64)
        self.have = np.zeros(n, dtype=bool)
        self.cache = np.zeros(n)

    def take(self, act):
        """One normal for each path index in `act`."""
        z = np.empty(act.shape[0])
        have = self.have[act]
        used = act[have]
        z[have] = self.cache[used]
        self.have[used] = False
        need = act[~have]
        if need.size:
            z1, z2 = normal_pair_np(self.keys[need], self.idx[need],
                                    self.channel)
            z[~have] = z1
            self.cache[need] = z2
            self.idx[need] += _U64_1
            self.have[need] = True
        return z

    def take_pair(self, act):
        """Both normals of a fresh pair (cache must be empty on those paths)."""
        z1, z2 = normal_pair_np(self.keys[act], self.idx[act], self.channel)
        self.idx[act] += _U64_1
        return z1, z2


class _UniformCounter:
    def __init__(self, keys):
        self.keys = keys
        self.idx = np.zeros(keys.shape[0], dtype=np.uint64)

    def take_pair(self, act):
        u1, u2 = uniform_pair_np(self.keys[act], self.idx[act],
                                 CHANNEL_UNIFORM)
        self.idx[act] += _U64_1
        return u1, u2


def one_sided_hit(master, base, n, c):
    keys = _keys_for(master, base, n)
    z0, _ = normal_pair_np(keys, np.zeros(n, dtype=np.uint64), CHANNEL_NORMAL)
    return c * c / (z0 * z0)


def one_sided_hit_grid(master, base, n, c, dt, t_max):
    keys = _keys_for(master, base, n)
    nc = _NormalCache(keys, CHANNEL_NORMAL)
    uc = _UniformCounter(keys)
    beta = np.zeros(n)
    out_t = np.full(n, t_max)
    out_hit = np.zeros(n, dtype=np.uint8)
    act = np.arange(n)
    sdt = math.sqrt(dt)
    t = 0.0
    while act.size and t < t_max:
        z = nc.take(act)
        nxt = beta[act] + sdt * z
        hit = nxt >= c
        margin = 2.0 * (c - beta[act]) * (c - nxt) / dt
        chk = ~hit & (margin < 40.0)
        if chk.any():
            u, _ = uc.take_pair(act[chk])
            cross = u <= np.exp(-margin[chk])
            hit[chk] |= cross
        done = act[hit]
        out_t[done] = t + 0.5 * dt
        out_hit[done] = 1
        keep = ~hit
        beta[act[keep]] = nxt[keep]
        act = act[keep]
        t += dt
    return out_t, out_hit


def two_sided_hit(master, base, n, c, dt):
    keys = _keys_for(master, base, n)
    nc = _NormalCache(keys, CHANNEL_NORMAL)
    uc = _UniformCounter(keys)
    beta = np.zeros(n)
    out = np.empty(n)
    act = np.arange(n)
    sdt = math.sqrt(dt)
    t = 0.0
    while act.size:
        z = nc.take(act)
        nxt = beta[act] + sdt * z
        hit = (nxt >= c) | (nxt <= -c)
        eu = 2.0 * (c - beta[act]) * (c - nxt) / dt
        ed = 2.0 * (c + beta[act]) * (c + nxt) / dt
        pu = np.where(eu < 40.0, np.exp(-np.minimum(eu, 40.0)), 0.0)
        pd = np.where(ed < 40.0, np.exp(-np.minimum(ed, 40.0)), 0.0)
        chk = ~hit & ((pu > 0.0) | (pd > 0.0))
        if chk.any():
            u, _ = uc.take_pair(act[chk])
            hit[chk] |= u <= (pu + pd)[chk]
        out[act[hit]] = t + 0.5 * dt
        keep = ~hit
        beta[act[keep]] = nxt[keep]
        act = act[keep]
        t += dt
    return out


def range_exit(master, base, n, c, dt):
    keys = _keys_for(master, base, n)
    nc = _NormalCache(keys, CHANNEL_NORMAL)
    uc = _UniformCounter(keys)
    beta = np.zeros(n)
    hi = np.zeros(n)
    lo = np.zeros(n)
    t_half = np.full(n, -1.0)
    out_r = np.empty(n)
    out_h = np.empty(n)
    act = np.arange(n)
    sdt = math.sqrt(dt)
    half = 0.5 * c
    t = 0.0
    while act.size:
        z = nc.take(act)
        b = beta[act]
        nxt = b + sdt * z
        u1, u2 = uc.take_pair(act)
        d = b - nxt
        root = np.sqrt(d * d - 2.0 * dt * np.log(u1))
        m_up = 0.5 * (b + nxt + root)
        root2 = np.sqrt(d * d - 2.0 * dt * np.log(u2))
        m_dn = 0.5 * (b + nxt - root2)
        nhi = np.maximum(hi[act], m_up)
        nlo = np.minimum(lo[act], m_dn)
        cross_half = (t_half[act] < 0.0) & ((m_up >= half) | (m_dn <= -half))
        t_half[act[cross_half]] = t + 0.5 * dt
        hit = nhi - nlo >= c
        done = act[hit]
        out_r[done] = t + 0.5 * dt
        th = t_half[done]
        out_h[done] = np.where(th < 0.0, t + 0.5 * dt, th)
        keep = ~hit
        ak = act[keep]
        beta[ak] = nxt[keep]
        hi[ak] = nhi[keep]
        lo[ak] = nlo[keep]
        act = ak
        t += dt
    return out_r, out_h


def _log_exp_functional_arrays(keys, stops, dt, nmax):
    """Vector twin of the scalar log-functional: per-path grids stops/m with
    m = clip(ceil(stop/dt), 1, nmax); paths sorted by step count so the live
    set is always a prefix."""
    n = keys.shape[0]
    m = np.ceil(stops / dt).astype(np.int64)
    np.clip(m, 1, int(nmax), out=m)
    h = stops / m
    order = np.argsort(-m, kind="stable")
    keys_s = keys[order]
    h_s = h[order]
    m_s = m[order]
    sh = np.sqrt(h_s)
    nc = _NormalCache(keys_s, CHANNEL_NORMAL2)
    beta = np.zeros(n)
    shift = np.zeros(n)
    acc = np.zeros(n)
    prev = np.ones(n)
    steps_desc = m_s
    kmax = int(steps_desc[0]) if n else 0
    for k in range(kmax):
        cnt = int(np.searchsorted(-steps_desc, -k, side="left"))
        if cnt <= 0:
            break
        act = np.arange(cnt)
        z = nc.take(act)
        beta[:cnt] += sh[:cnt] * z
        e2 = 2.0 * beta[:cnt] - shift[:cnt]
        resc = e2 > 350.0
        if resc.any():
            delta = e2[resc]
            scale = np.exp(-delta)
            acc[:cnt][resc] *= scale
            prev[:cnt][resc] *= scale
            shift[:cnt][resc] += delta
            e2[resc] = 0.0
        cur = np.exp(np.minimum(e2, 350.0))
        acc[:cnt] += 0.5 * h_s[:cnt] * (prev[:cnt] + cur)
        prev[:cnt] = cur
    with np.errstate(divide="ignore"):
        la = np.where(acc > 0.0, np.log(np.maximum(acc, 1e-320)) + shift,
                      shift - 745.0)
    out_la = np.empty(n)
    out_beta = np.empty(n)
    out_la[order] = la
    out_beta[order] = beta
    return out_la, out_beta


def exp_functional(master, base, n, stops, dt, nmax):
    keys = _keys_for(master, base, n)
    return _log_exp_functional_arrays(keys, np.asarray(stops, dtype=float),
                                      dt, nmax)


def exit_cone(master, base, n, c, dt, nmax, one_sided):
    keys = _keys_for(master, base, n)
    if one_sided:
        z0, _ = normal_pair_np(keys, np.zeros(n, dtype=np.uint64),
                               CHANNEL_NORMAL)
        tau = c * c / (z0 * z0)
    else:
        tau = two_sided_hit(master, base, n, c, dt)
    la, _bend = _log_exp_functional_arrays(keys, tau, dt, nmax)
    return la, tau


# ---------------------------------------------------------------------------
# Radial-representation winding driver
# ---------------------------------------------------------------------------

def _budget_step_vec(beta, rem, du, kappa):
    """Vector twin of the scalar budget rule."""
    h = np.full(beta.shape[0], du)
    L = np.log(kappa * rem) - 2.0 * beta
    go = L > 0.0
    if not go.any():
        return h
    s = L[go] / 8.0
    small = s < 1e-9
    for _ in range(6):
        f = 8.0 * s + 2.0 * np.log(np.maximum(s, 1e-300)) - L[go]
        s = s - f * s / (8.0 * s + 2.0)
        s = np.maximum(s, 1e-12)
    hg = s * s
    hg[small] = du
    bg = beta[go]
    rg = rem[go]
    bad = (hg > du) & (hg * np.exp(np.minimum(2.0 * bg + 8.0 * np.sqrt(hg),
                                              700.0)) > kappa * rg)
    while bad.any():
        hg[bad] *= 0.5
        bad = (hg > du) & (hg * np.exp(np.minimum(
            2.0 * bg + 8.0 * np.sqrt(hg), 700.0)) > kappa * rg)
    h[go] = np.maximum(hg, du)
    return h


def _skew_winding_vec(keys, t_targets, z0, du, track_max, max_steps):
    n = keys.shape[0]
    nc = _NormalCache(keys, CHANNEL_NORMAL)
    uc = _UniformCounter(keys)
    beta = np.full(n, math.log(z0))
    gamma = np.zeros(n)
    gmax = np.zeros(n)
    u_clock = np.zeros(n)
    acc = np.zeros(n)
    out_th = np.zeros(n)
    out_h = np.zeros(n)
    out_sup = np.zeros(n)
    out_ok = np.zeros(n, dtype=np.uint8)
    act = np.arange(n)
    kappa = 0.01
    steps = 0
    while act.size and steps < max_steps:
        steps += 1
        b = beta[act]
        e2b = np.exp(np.minimum(2.0 * b, 700.0))
        rem = t_targets[act] - acc[act]
        final = rem <= 1.5 * e2b * du
        h = np.empty(act.shape[0])
        h[final] = rem[final] / e2b[final]
        nf = ~final
        if nf.any():
            h[nf] = _budget_step_vec(b[nf], rem[nf], du, kappa)
        z1, z2 = nc.take_pair(act)
        sh = np.sqrt(h)
        gn = gamma[act] + sh * z1
        bn = b + sh * z2
        bn[final] = b[final]
        if track_max:
            uu, _ = uc.take_pair(act)
            d = gamma[act] - gn
            m = 0.5 * (gamma[act] + gn +
                       np.sqrt(d * d - 2.0 * h * np.log(uu)))
            np.maximum(gmax[act], m, out=m)
        else:
            m = np.maximum(gmax[act], gn)
        e2n = np.exp(np.minimum(2.0 * bn, 700.0))
        inc = 0.5 * h * (e2b + e2n)
        over = ~final & (acc[act] + inc >= t_targets[act])
        fin = final | over
        if fin.any():
            af = act[fin]
            hf = h[fin].copy()
            th = gn[fin]
            ovl = over[fin]
            if ovl.any():
                frac = (t_targets[af][ovl] - acc[af][ovl]) / inc[fin][ovl]
                hf[ovl] = h[fin][ovl] * frac
                th[ovl] = gamma[af][ovl] + (gn[fin][ovl] -
                                            gamma[af][ovl]) * frac
            out_th[af] = th
            out_h[af] = u_clock[af] + hf
            out_sup[af] = np.maximum(m[fin], th)
            out_ok[af] = 1
        keep = ~fin
        ak = act[keep]
        gamma[ak] = gn[keep]
        beta[ak] = bn[keep]
        gmax[ak] = m[keep]
        acc[ak] += inc[keep]
        u_clock[ak] += h[keep]
        act = ak
    if act.size:
        out_th[act] = gamma[act]
        out_h[act] = u_clock[act]
        out_sup[act] = gmax[act]
    return out_th, out_h, out_sup, out_ok


def skew_winding_at_time(master, base, n, t_target, z0, du, track_max):
    keys = _keys_for(master, base, n)
    targets = np.full(n, float(t_target))
    return _skew_winding_vec(keys, targets, z0, du, track_max, 5_000_000)


def skew_winding_at_times(master, base, n, t_targets, z0, du, track_max):
    keys = _keys_for(master, base, n)
    return _skew_winding_vec(keys, np.asarray(t_targets, dtype=float), z0,
                             du, track_max, 5_000_000)


def skew_winding_at_indep_hit(master, base, n, b, z0, du, track_max):
    keys = _keys_for(master, base, n)
    zh, _ = normal_pair_np(keys, np.zeros(n, dtype=np.uint64),
                           CHANNEL_NORMAL2)
    horizons = b * b / (zh * zh)
    return _skew_winding_vec(keys, horizons, z0, du, track_max, 5_000_000)


# ---------------------------------------------------------------------------
# Direct planar simulations
# ---------------------------------------------------------------------------

def angle_exit_planar(master, base, n, c, one_sided, dt_cap, z0, lam, D):
    keys = _keys_for(master, base, n)
    nc = _NormalCache(keys, CHANNEL_NORMAL)
    x = np.full(n, float(z0))
    y = np.zeros(n)
    theta = np.zeros(n)
    t = np.zeros(n)
    out_t = np.zeros(n)
    out_ok = np.zeros(n, dtype=np.uint8)
    act = np.arange(n)
    steps = 0
    while act.size and steps < 200_000_000:
        steps += 1
        xa = x[act]
        ya = y[act]
        th = theta[act]
        r2 = xa * xa + ya * ya
        gap = c - th
        if not one_sided:
            gap = np.minimum(gap, c + th)
        gs = np.maximum(gap, 0.02)
        h = np.minimum(0.01 * r2 / (2.0 * D),
                       (0.15 * gs) ** 2 * r2 / (2.0 * D))
        np.minimum(h, dt_cap, out=h)
        z1, z2 = nc.take_pair(act)
        if lam > 0.0:
            ef = np.exp(-lam * h)
            sg = np.sqrt(D * (1.0 - ef * ef) / lam)
        else:
            ef = 1.0
            sg = np.sqrt(2.0 * D * h)
        xn = xa * ef + sg * z1
        yn = ya * ef + sg * z2
        dth = np.arctan2(yn * xa - xn * ya, xn * xa + yn * ya)
        tn = th + dth
        up = tn >= c
        dn = (tn <= -c) & (not one_sided)
        crossed = up | dn
        if crossed.any():
            lvl = np.where(up[crossed], c, -c)
            frac = (lvl - th[crossed]) / dth[crossed]
            af = act[crossed]
            out_t[af] = t[af] + frac * h[crossed]
            out_ok[af] = 1
        keep = ~crossed
        ak = act[keep]
        x[ak] = xn[keep]
        y[ak] = yn[keep]
        theta[ak] = tn[keep]
        t[ak] += h[keep]
        act = ak
    if act.size:
        out_t[act] = t[act]
    return out_t, out_ok


def planar_theta_at_time(master, base, n, horizon, z0, dt, rot_c, rot_s,
                         step_floor):
    keys = _keys_for(master, base, n)
    nc = _NormalCache(keys, CHANNEL_NORMAL)
    x = np.full(n, float(z0))
    y = np.zeros(n)
    theta = np.zeros(n)
    hclock = np.zeros(n)
    t = np.zeros(n)
    out_ok = np.ones(n, dtype=np.uint8)
    act = np.arange(n)
    while act.size:
        xa = x[act]
        ya = y[act]
        r2 = xa * xa + ya * ya
        h = np.minimum(0.01 * r2, dt)
        under = h < step_floor
        if under.any():
            out_ok[act[under]] = 0
            ak = act[~under]
            xa = xa[~under]
            ya = ya[~under]
            r2 = r2[~under]
            h = h[~under]
            act = ak
            if not act.size:
                break
        last = h >= horizon - t[act]
        h = np.where(last, horizon - t[act], h)
        z1, z2 = nc.take_pair(act)
        w1 = rot_c * z1 - rot_s * z2
        w2 = rot_s * z1 + rot_c * z2
        sh = np.sqrt(h)
        xn = xa + sh * w1
        yn = ya + sh * w2
        r2n = xn * xn + yn * yn
        theta[act] += np.arctan2(yn * xa - xn * ya, xn * xa + yn * ya)
        hclock[act] += 0.5 * h * (1.0 / r2 + 1.0 / r2n)
        x[act] = xn
        y[act] = yn
        t[act] = np.where(last, horizon, t[act] + h)
        act = act[~last]
    return theta, hclock, out_ok


def planar_winding_path(master, sid, horizon, z0, dt, step_floor, cap):
    """Scalar path-filler mirroring the numba version (pure python loop)."""
    times = np.empty(cap)
    logr = np.empty(cap)
    angle = np.empty(cap)
    clock = np.empty(cap)
    key = stream_key(int(master), int(sid))
    idxn = 0
    x = float(z0)
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
        h = min(dt, 0.01 * r2)
        if h < step_floor:
            status = 1
            break
        last = h >= horizon - t
        if last:
            h = horizon - t
        z1, z2 = normal_pair(key, idxn, CHANNEL_NORMAL)
        idxn += 1
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


def ou_boundary_hit(master, base, n, b, lam, D, dt, t_cap):
    keys = _keys_for(master, base, n)
    nc = _NormalCache(keys, CHANNEL_NORMAL)
    uc = _UniformCounter(keys)
    if lam > 0.0:
        ef = math.exp(-lam * dt)
        sg = math.sqrt(D * (1.0 - ef * ef) / lam)
    else:
        ef = 1.0
        sg = math.sqrt(2.0 * D * dt)
    uval = np.zeros(n)
    delta = np.zeros(n)
    out_t = np.full(n, t_cap)
    out_ok = np.zeros(n, dtype=np.uint8)
    act = np.arange(n)
    t = 0.0
    while act.size and t < t_cap:
        z = nc.take(act)
        un = uval[act] * ef + sg * z
        tn = t + dt
        if lam > 0.0:
            dn = un * math.exp(lam * tn)
            d_alpha = D * (math.exp(2.0 * lam * tn) -
                           math.exp(2.0 * lam * t)) / lam
        else:
            dn = un
            d_alpha = 2.0 * D * dt
        hit = dn >= b
        e = 2.0 * (b - delta[act]) * (b - dn) / d_alpha
        chk = ~hit & (e < 40.0)
        if chk.any():
            u, _ = uc.take_pair(act[chk])
            hit[chk] |= u <= np.exp(-e[chk])
        if hit.any():
            ah = act[hit]
            if lam > 0.0:
                a_mid = D * (math.exp(2.0 * lam * t) - 1.0) / lam + \
                    0.5 * d_alpha
                out_t[ah] = math.log1p(lam * a_mid / D) / (2.0 * lam)
            else:
                out_t[ah] = t + 0.5 * dt
            out_ok[ah] = 1
        keep = ~hit
        ak = act[keep]
        uval[ak] = un[keep]
        delta[ak] = dn[keep]
        act = ak
        t = tn
    return out_t, out_ok


def cauchy_exact(master, base, n, scale):
    keys = _keys_for(master, base, n)
    u, _ = uniform_pair_np(keys, np.zeros(n, dtype=np.uint64),
                           CHANNEL_UNIFORM)
    return scale * np.tan(math.pi * (u - 0.5))


def normals_batch(master, base, n, channel):
    keys = _keys_for(master, base, n)
    z, _ = normal_pair_np(keys, np.zeros(n, dtype=np.uint64), int(channel))
    return z
