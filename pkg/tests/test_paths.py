"""Path samplers: reproducibility, laws at reduced sample sizes, backends."""

import math

import numpy as np
import pytest

from windhit import _kernels_numba as KB
from windhit import _kernels_numpy as KN
from windhit.errors import NonConvergenceError, StepUnderflowError
from windhit.laws import ConeSpec, OuSpec, cauchy_cdf, range_density
from windhit.paths import (
    RngStream,
    SampleBatch,
    WindingPath,
    angle_exit_planar_batch,
    cauchy_batch,
    exit_cone_batch,
    exit_cone_log_batch,
    exp_functional,
    exp_functional_log_batch,
    one_sided_hit_batch,
    one_sided_hit_grid_batch,
    ou_boundary_hit_batch,
    ou_exit_batch,
    planar_winding_at_time_batch,
    range_exit_batch,
    range_exit_log_batch,
    sample_winding_at_indep_hit,
    simulate_planar_winding,
    std_normal_batch,
    two_sided_hit_batch,
    winding_at_indep_hit_batch,
    winding_at_time_batch,
    winding_at_times_batch,
)
from windhit.verify import ks_one_sample, ks_two_sample, moment_check

PI = math.pi
SEED = 20240817


def _rng(sub):
    return RngStream(SEED, sub * 10 ** 6)


def _wrap(values):
    arr = np.asarray(values, dtype=float)
    return SampleBatch(arr, len(arr), (0, (0, len(arr))), "test")


def one_sided_cdf(c):
    # T = c^2 / N^2: P(T <= t) = P(|N| >= c/sqrt(t)).
    def cdf(t):
        t = np.asarray(t, dtype=float)
        out = np.zeros(t.shape)
        pos = t > 0
        out[pos] = np.vectorize(math.erfc)(c / np.sqrt(2.0 * t[pos]))
        return out
    return cdf


def _even_density_cdf(density, ymax, m=4001):
    """CDF of an even density on R from a cumulative trapezoid on [0, ymax]."""
    ys = np.linspace(0.0, ymax, m)
    f = np.array([density(y) for y in ys])
    half = np.concatenate([[0.0], np.cumsum(0.5 * (f[1:] + f[:-1]) * np.diff(ys))])

    def cdf(x):
        x = np.asarray(x, dtype=float)
        tail = np.interp(np.abs(x), ys, half)
        return 0.5 + np.sign(x) * tail
    return cdf


# --------------------------------------------------------------------------
# Reproducibility and stream discipline
# --------------------------------------------------------------------------

def test_bit_reproducible_and_stream_disjoint():
    cone = ConeSpec(PI / 4.0)
    a1, tau1 = exit_cone_log_batch(cone, 1.0, 1e-3, 512, _rng(0))
    a2, tau2 = exit_cone_log_batch(cone, 1.0, 1e-3, 512, _rng(0))
    assert np.array_equal(a1, a2) and np.array_equal(tau1, tau2)
    b1, _ = exit_cone_log_batch(cone, 1.0, 1e-3, 512, _rng(0).advance(512))
    assert not np.array_equal(a1, b1)


def test_sample_batch_provenance_and_validation():
    batch = cauchy_batch(1.0, 100, _rng(1))
    assert batch.n == 100 and len(batch.values) == 100
    assert batch.seed_provenance[0] == SEED
    with pytest.raises(ValueError):
        SampleBatch(np.zeros(3), 4, (0, (0, 4)), "bad")
    with pytest.raises(ValueError):
        SampleBatch(np.array([1.0, np.inf]), 2, (0, (0, 2)), "bad")


def test_start_point_scaling_is_a_log_shift():
    # T(z0) = z0^2 * A_tau: same streams, so log times shift by 2 ln z0.
    cone = ConeSpec(0.6)
    la1, _ = exit_cone_log_batch(cone, 1.0, 1e-3, 400, _rng(2))
    la2, _ = exit_cone_log_batch(cone, 2.0, 1e-3, 400, _rng(2))
    assert np.allclose(la2, la1 + 2.0 * math.log(2.0), rtol=0, atol=1e-12)


# --------------------------------------------------------------------------
# Linear hitting and range kernels
# --------------------------------------------------------------------------

def test_one_sided_hit_law():
    batch = one_sided_hit_batch(0.8, 20000, _rng(3))
    rep = ks_one_sample(batch, one_sided_cdf(0.8), label="one-sided")
    assert rep.passed, rep


def test_one_sided_hit_grid_censoring():
    times, hit = one_sided_hit_grid_batch(1.0, 1e-3, 5.0, 4000, _rng(4))
    assert hit.dtype == np.bool_ or set(np.unique(hit)).issubset({0, 1})
    hit = hit.astype(bool)
    assert 0.0 < hit.mean() < 1.0
    assert (times[hit] <= 5.0 + 1e-12).all()
    # Censored fraction matches the closed-form CDF at the cap.
    p_hit = one_sided_cdf(1.0)(np.array([5.0]))[0]
    z = (hit.mean() - p_hit) / math.sqrt(p_hit * (1 - p_hit) / 4000)
    assert abs(z) <= 4.0


def test_two_sided_hit_moments():
    batch = two_sided_hit_batch(1.0, 1e-4, 20000, _rng(5))
    t = batch.values
    rep = moment_check(batch, lambda x: x, 1.0, label="mean")
    assert rep.passed, rep
    rep2 = moment_check(batch, lambda x: np.exp(-0.5 * x),
                        1.0 / math.cosh(1.0), label="mgf")
    assert rep2.passed, rep2


def test_two_sided_hit_grid_refinement_consistent():
    for dt in (2e-4, 1e-4):
        batch = two_sided_hit_batch(1.0, dt, 10000, _rng(6))
        rep = moment_check(batch, lambda x: x, 1.0, label=f"dt={dt}")
        assert rep.passed, rep


def test_range_exit_pathwise_and_mgf():
    t_range, t_half = range_exit_batch(1.0, 1e-3, 20000, _rng(7))
    assert (t_half <= t_range + 1e-12).all()
    assert (t_range > 0).all()
    rep = moment_check(_wrap(t_range), lambda x: np.exp(-0.5 * x),
                       1.0 / math.cosh(0.5) ** 2, label="range-mgf")
    assert rep.passed, rep


def test_value_at_range_time_law():
    # The driver at its range time, by conditional Gaussianity of the
    # independent component: sqrt(T) * fresh normal has the range density.
    n = 20000
    la, t_range, _ = range_exit_log_batch(1.0, 1e-3, n, _rng(8))
    fresh = std_normal_batch(n, _rng(8).advance(n)).values
    vals = np.sqrt(t_range) * fresh
    cone = ConeSpec(1.0)
    cdf = _even_density_cdf(lambda y: range_density(y, cone), 12.0)
    rep = ks_one_sample(_wrap(vals), cdf, label="range-value")
    assert rep.passed, rep
    assert np.isfinite(la).all()


# --------------------------------------------------------------------------
# Exponential functional (hyperbolic identity)
# --------------------------------------------------------------------------

def test_exp_functional_short_time_and_mean():
    la, _ = exp_functional_log_batch(1e-4, 1e-5, 2000, _rng(9))
    assert np.exp(la).mean() / 1e-4 == pytest.approx(1.0, abs=1e-2)
    la1, _ = exp_functional_log_batch(1.0, 1e-3, 20000, _rng(10))
    rep = moment_check(_wrap(np.exp(la1)), lambda x: x,
                       (math.e ** 2 - 1.0) / 2.0, label="mean-A1")
    assert rep.passed, rep


def test_exp_functional_scalar_matches_batch():
    a, bend = exp_functional(0.5, 1e-3, _rng(11))
    la, be = exp_functional_log_batch(0.5, 1e-3, 1, _rng(11))
    assert a == pytest.approx(float(np.exp(la[0])), rel=1e-15)
    assert bend == float(be[0])


def test_hyperbolic_sinh_identity():
    # sinh(beta_u) has the same law as sqrt(A_u) times a fresh normal.
    n = 20000
    la, bend = exp_functional_log_batch(1.0, 1e-3, n, _rng(12))
    fresh = std_normal_batch(n, _rng(12).advance(n)).values
    rep = ks_two_sample(_wrap(np.sinh(bend)), _wrap(np.exp(0.5 * la) * fresh),
                        label="sinh-identity")
    assert rep.passed, rep


# --------------------------------------------------------------------------
# Winding exit times (exact in law)
# --------------------------------------------------------------------------

def test_exit_cone_against_angular_cdf():
    # tau (the angular hit of the driver) has the closed two-sided exit law.
    cone = ConeSpec(PI / 4.0)
    _, tau = exit_cone_log_batch(cone, 1.0, cone.c ** 2 / 2000.0, 8000,
                                 _rng(13))
    rep = moment_check(_wrap(tau), lambda x: x, cone.c ** 2, label="mean-tau")
    assert rep.passed, rep


def test_exit_cone_vs_direct_planar():
    cone = ConeSpec(PI / 4.0)
    exact = exit_cone_batch(cone, 1.0, cone.c ** 2 / 2000.0, 3000, _rng(14))
    direct = angle_exit_planar_batch(cone, 3000, _rng(15))
    rep = ks_two_sample(exact, _wrap(direct), label="exact-vs-direct")
    assert rep.passed, rep


def test_exit_cone_one_sided_log_form():
    cone = ConeSpec(PI / 4.0)
    log_t, _ = exit_cone_log_batch(cone, 1.0, cone.c ** 2 / 500.0, 4000,
                                   _rng(16), one_sided=True)
    # Median of ln T: T = A_tau with tau = c^2/N^2 pins no simple closed
    # form, but the tail constant does: P(T > t) ~ (4c/pi)/ln t.
    big = np.log(1e6)
    p = (log_t > big).mean()
    target = (4.0 * cone.c / PI) / big
    z = (p - target) / math.sqrt(target * (1 - target) / 4000)
    assert abs(z) <= 4.0


# --------------------------------------------------------------------------
# Winding at fixed and independent times
# --------------------------------------------------------------------------

def test_winding_at_time_skew_consistency():
    # theta_t =law sqrt(H_t) * fresh normal (independence of the angular
    # driver from the radial clock).
    n = 6000
    th, h, _ = winding_at_time_batch(1.0, 1.0, n, _rng(17))
    fresh = std_normal_batch(n, _rng(17).advance(n)).values
    rep = ks_two_sample(_wrap(th), _wrap(np.sqrt(h) * fresh),
                        label="skew-consistency")
    assert rep.passed, rep
    assert (h > 0).all()


def test_winding_at_time_step_refinement():
    th1, _, _ = winding_at_time_batch(1.0, 1.0, 3000, _rng(18), du=1e-3)
    th2, _, _ = winding_at_time_batch(1.0, 1.0, 3000, _rng(19), du=5e-4)
    rep = ks_two_sample(_wrap(th1), _wrap(th2), label="du-halving")
    assert rep.passed, rep


def test_winding_at_times_matches_scalar_horizon():
    th1, h1, s1 = winding_at_time_batch(2.0, 1.0, 500, _rng(20),
                                        track_max=True)
    th2, h2, s2 = winding_at_times_batch(np.full(500, 2.0), 1.0, 500,
                                         _rng(20), track_max=True)
    assert np.array_equal(th1, th2)
    assert np.array_equal(h1, h2)
    assert np.array_equal(s1, s2)


def test_winding_sup_dominates():
    th, _, sup = winding_at_time_batch(1.0, 1.0, 2000, _rng(21),
                                       track_max=True)
    assert (sup >= th - 1e-12).all()
    assert (sup >= -1e-12).all()


def test_winding_at_indep_hit_laws_reduced():
    # At the hit of an independent BM at level b: the clock is the angular
    # hit at arcsinh(b), the angle is Cauchy(arcsinh(b)).
    b = math.sinh(1.0)
    n = 6000
    th, h, sup = winding_at_indep_hit_batch(b, n, _rng(22), track_max=True)
    clock_ref = one_sided_hit_batch(1.0, n, _rng(23))
    rep1 = ks_two_sample(_wrap(h), clock_ref, label="clock-law")
    assert rep1.passed, rep1
    rep2 = ks_one_sample(_wrap(th),
                         lambda y: np.array([cauchy_cdf(v, 1.0) for v in y]),
                         label="angle-law")
    assert rep2.passed, rep2
    rep3 = ks_one_sample(_wrap(sup), lambda y: np.array(
        [max(2.0 * cauchy_cdf(v, 1.0) - 1.0, 0.0) for v in y]),
        label="sup-law")
    assert rep3.passed, rep3


def test_sample_winding_exact_mode():
    vals = np.array([sample_winding_at_indep_hit(1.0, "exact",
                                                 _rng(24).advance(i))
                     for i in range(400)])
    a = math.asinh(1.0)
    rep = ks_one_sample(_wrap(vals), lambda y: np.array(
        [cauchy_cdf(v, a) for v in y]), label="exact-mode")
    assert rep.passed, rep
    with pytest.raises(ValueError):
        sample_winding_at_indep_hit(1.0, "bogus", _rng(24))


def test_sample_winding_modes_agree():
    ex = np.array([sample_winding_at_indep_hit(1.0, "exact",
                                               _rng(25).advance(i))
                   for i in range(600)])
    sim = np.array([sample_winding_at_indep_hit(1.0, "simulated",
                                                _rng(26).advance(i))
                    for i in range(600)])
    rep = ks_two_sample(_wrap(ex), _wrap(sim), label="modes")
    assert rep.passed, rep


# --------------------------------------------------------------------------
# Direct planar simulation
# --------------------------------------------------------------------------

def test_simulate_planar_winding_invariants():
    path = simulate_planar_winding(1.0, 1.0, 1e-3, _rng(27))
    assert isinstance(path, WindingPath)
    assert path.times[0] == 0.0
    assert path.times[-1] == pytest.approx(1.0, abs=1e-12)
    assert (np.diff(path.times) > 0).all()
    assert path.angle[0] == 0.0
    assert path.log_modulus[0] == pytest.approx(0.0)
    assert (np.diff(path.clock) >= 0).all()
    # Clock consistency: H = int dt / |Z|^2 within coarse tolerance.
    approx = np.sum(np.diff(path.times) * np.exp(-2.0 * path.log_modulus[:-1]))
    assert path.clock[-1] == pytest.approx(approx, rel=0.05)


def test_simulate_planar_underflow():
    with pytest.raises(StepUnderflowError):
        simulate_planar_winding(1.0, 1.0, 1e-3, _rng(28), step_floor=1e-2)


def test_planar_batch_mask_mode():
    th, h, ok = planar_winding_at_time_batch(1.0, 1.0, 1e-3, 1000, _rng(29),
                                             on_underflow="mask")
    flagged = int((~ok).sum())
    assert 0 < flagged < 150
    assert np.isfinite(th[ok]).all() and (h[ok] > 0).all()
    with pytest.raises(StepUnderflowError):
        planar_winding_at_time_batch(1.0, 1.0, 1e-3, 1000, _rng(29))
    with pytest.raises(ValueError):
        planar_winding_at_time_batch(1.0, 1.0, 1e-3, 10, _rng(29),
                                     on_underflow="drop")


def test_planar_rotation_invariance():
    th0, _, ok0 = planar_winding_at_time_batch(1.0, 1.0, 1e-3, 2000, _rng(30),
                                               on_underflow="mask")
    th1, _, ok1 = planar_winding_at_time_batch(1.0, 1.0, 1e-3, 2000, _rng(31),
                                               rotation=0.7,
                                               on_underflow="mask")
    rep = ks_two_sample(_wrap(th0[ok0]), _wrap(th1[ok1]), label="rotation")
    assert rep.passed, rep


def test_planar_skew_consistency_masked():
    n = 2000
    th, h, ok = planar_winding_at_time_batch(1.0, 1.0, 1e-3, n, _rng(32),
                                             on_underflow="mask")
    fresh = std_normal_batch(n, _rng(32).advance(n)).values
    rep = ks_two_sample(_wrap(th[ok]), _wrap((np.sqrt(h) * fresh)[ok]),
                        label="planar-skew")
    assert rep.passed, rep


# --------------------------------------------------------------------------
# Ornstein-Uhlenbeck
# --------------------------------------------------------------------------

def test_ou_exit_flat_rate_identity():
    cone = ConeSpec(PI / 4.0)
    dt = cone.c ** 2 / 2000.0
    flat = ou_exit_batch(cone, OuSpec(0.0), dt, 2000, _rng(33), mode="exact")
    bm = exit_cone_batch(cone, 1.0, dt, 2000, _rng(33))
    assert np.array_equal(flat.values, bm.values)


def test_ou_exit_modes_agree_reduced():
    cone = ConeSpec(PI / 4.0)
    ou = OuSpec(1.0)
    exact = ou_exit_batch(cone, ou, cone.c ** 2 / 2000.0, 3000, _rng(34),
                          mode="exact")
    direct = ou_exit_batch(cone, ou, 1e-2, 3000, _rng(35), mode="direct")
    rep = ks_two_sample(exact, direct, label="ou-modes")
    assert rep.passed, rep
    with pytest.raises(ValueError):
        ou_exit_batch(cone, ou, 1e-3, 10, _rng(34), mode="other")


def test_ou_boundary_hit_law():
    # alpha(t_hit) is the first-passage time of a BM at the boundary level.
    b = 0.8
    ou = OuSpec(1.0)
    t_hit, hit = ou_boundary_hit_batch(b, ou, 1e-3, 40.0, 3000, _rng(36))
    hit = hit.astype(bool)
    assert hit.mean() > 0.99
    ref = one_sided_hit_batch(b, 3000, _rng(37))
    rep = ks_two_sample(_wrap(ou.alpha(t_hit[hit])), ref, label="ou-boundary")
    assert rep.passed, rep


# --------------------------------------------------------------------------
# Elementary batches
# --------------------------------------------------------------------------

def test_cauchy_batch_law():
    batch = cauchy_batch(2.0, 20000, _rng(38))
    rep = ks_one_sample(batch,
                        lambda y: np.array([cauchy_cdf(v, 2.0) for v in y]),
                        label="cauchy")
    assert rep.passed, rep


def test_std_normal_channels_independent():
    a = std_normal_batch(20000, _rng(39)).values
    b = std_normal_batch(20000, _rng(39), independent_channel=True).values
    assert not np.array_equal(a, b)
    assert abs(np.corrcoef(a, b)[0, 1]) < 0.03
    rep = moment_check(_wrap(a), lambda x: x * x, 1.0, label="variance")
    assert rep.passed, rep


# --------------------------------------------------------------------------
# Backend parity
# --------------------------------------------------------------------------

M = np.uint64(777)
B = np.uint64(0)


def test_parity_bit_exact_fixed_grid():
    # Grid/bridge kernels whose float work is identical scalar arithmetic on
    # the shared integer streams: the two backends must agree to the bit.
    pairs = []
    pairs.append((KB.one_sided_hit_grid(M, B, 1500, 1.0, 1e-3, 5.0),
                  KN.one_sided_hit_grid(M, B, 1500, 1.0, 1e-3, 5.0)))
    pairs.append((KB.two_sided_hit(M, B, 1500, 1.0, 1e-3),
                  KN.two_sided_hit(M, B, 1500, 1.0, 1e-3)))
    pairs.append((KB.range_exit(M, B, 1500, 1.0, 1e-3),
                  KN.range_exit(M, B, 1500, 1.0, 1e-3)))
    pairs.append((KB.ou_boundary_hit(M, B, 1000, 0.8, 1.0, 0.5, 1e-3, 40.0),
                  KN.ou_boundary_hit(M, B, 1000, 0.8, 1.0, 0.5, 1e-3, 40.0)))
    for jb, jn in pairs:
        if not isinstance(jb, tuple):
            jb, jn = (jb,), (jn,)
        for xb, xn in zip(jb, jn):
            assert np.array_equal(np.asarray(xb), np.asarray(xn))


def test_parity_transcendental_ulp():
    # Kernels routing the streams through libm transcendentals differ by a
    # few ulps between scalar (compiled) and vectorized (numpy) math.
    pairs = []
    pairs.append((KB.one_sided_hit(M, B, 4096, 1.0),
                  KN.one_sided_hit(M, B, 4096, 1.0)))
    pairs.append((KB.cauchy_exact(M, B, 4096, 1.0),
                  KN.cauchy_exact(M, B, 4096, 1.0)))
    pairs.append((KB.normals_batch(M, B, 4096, 0),
                  KN.normals_batch(M, B, 4096, 0)))
    stops = np.full(1500, 0.7)
    pairs.append((KB.exp_functional(M, B, 1500, stops, 1e-3, 10 ** 6),
                  KN.exp_functional(M, B, 1500, stops, 1e-3, 10 ** 6)))
    pairs.append((KB.exit_cone(M, B, 1000, PI / 4.0, 3e-4, 10 ** 6, False),
                  KN.exit_cone(M, B, 1000, PI / 4.0, 3e-4, 10 ** 6, False)))
    for jb, jn in pairs:
        if not isinstance(jb, tuple):
            jb, jn = (jb,), (jn,)
        for xb, xn in zip(jb, jn):
            assert np.allclose(np.asarray(xb), np.asarray(xn),
                               rtol=1e-12, atol=1e-12)


def test_parity_adaptive_statistical():
    thb, _, _, okb = KB.skew_winding_at_time(M, B, 800, 1.0, 1.0, 1e-3, False)
    thn, _, _, okn = KN.skew_winding_at_time(M, B, 800, 1.0, 1.0, 1e-3, False)
    assert okb.all() and okn.all()
    rep = ks_two_sample(_wrap(thb), _wrap(thn), label="skew-cross-backend")
    assert rep.passed, rep
    tb, okb2 = KB.angle_exit_planar(M, B, 600, PI / 4.0, False, 1e-2, 1.0,
                                    0.0, 0.5)
    tn, okn2 = KN.angle_exit_planar(M, B, 600, PI / 4.0, False, 1e-2, 1.0,
                                    0.0, 0.5)
    assert okb2.all() and okn2.all()
    rep2 = ks_two_sample(_wrap(tb), _wrap(tn), label="angle-cross-backend")
    assert rep2.passed, rep2
