"""Statistical verdict machinery: calibration, invariances, suite plumbing."""

import json
import math

import numpy as np
import pytest

from windhit.errors import DomainError
from windhit.laws import cauchy_cdf
from windhit.paths import (
    RngStream,
    SampleBatch,
    cauchy_batch,
    std_normal_batch,
    winding_at_time_batch,
)
from windhit.verify import (
    CheckReport,
    KsReport,
    MomentReport,
    ks_critical,
    ks_one_sample,
    ks_two_sample,
    moment_check,
    paired_diff_check,
    run_suite,
    spitzer_limit_check,
    suite_names,
    tail_trend_check,
)

SEED = 424242


def _rng(sub):
    return RngStream(SEED, sub * 10 ** 6)


def _wrap(values):
    arr = np.asarray(values, dtype=float)
    return SampleBatch(arr, len(arr), (0, (0, len(arr))), "test")


def _cauchy_cdf_vec(scale):
    return lambda y: np.array([cauchy_cdf(v, scale) for v in y])


def _normal_cdf_vec(y):
    y = np.asarray(y, dtype=float)
    return np.array([0.5 * (1.0 + math.erf(v / math.sqrt(2.0))) for v in y])


# --------------------------------------------------------------------------
# Kolmogorov-Smirnov machinery
# --------------------------------------------------------------------------

def test_ks_critical_value():
    assert ks_critical(0.01) == pytest.approx(1.628, abs=1e-3)
    assert ks_critical(0.05) == pytest.approx(1.358, abs=1e-3)


def test_ks_one_sample_calibrated():
    batch = cauchy_batch(1.0, 20000, _rng(0))
    rep = ks_one_sample(batch, _cauchy_cdf_vec(1.0), label="exact")
    assert rep.passed
    assert rep.threshold == pytest.approx(ks_critical(0.01) / math.sqrt(20000))
    shifted = _wrap(batch.values + 5.0)
    rep2 = ks_one_sample(shifted, _cauchy_cdf_vec(1.0), label="shifted")
    assert not rep2.passed
    assert rep2.statistic > 10 * rep2.threshold


def test_ks_one_sample_rejects_bad_cdf():
    batch = std_normal_batch(100, _rng(1))
    with pytest.raises(DomainError):
        ks_one_sample(batch, lambda y: np.asarray(y, dtype=float))


def test_ks_one_sample_threshold_override():
    batch = cauchy_batch(1.0, 500, _rng(2))
    rep = ks_one_sample(batch, _cauchy_cdf_vec(1.0), threshold=0.9)
    assert rep.passed and rep.threshold == 0.9


def test_ks_two_sample_calibrated():
    a = std_normal_batch(8000, _rng(3))
    b = std_normal_batch(8000, _rng(4))
    rep = ks_two_sample(a, b, label="same-law")
    assert rep.passed
    expected_thr = ks_critical(0.01) * math.sqrt(2.0 / 8000.0)
    assert rep.threshold == pytest.approx(expected_thr)
    c = cauchy_batch(1.0, 8000, _rng(5))
    rep2 = ks_two_sample(a, c, label="cross-law")
    assert not rep2.passed


def test_ks_invariant_under_increasing_transform():
    a = std_normal_batch(4000, _rng(6))
    b = std_normal_batch(4000, _rng(7))
    r1 = ks_two_sample(a, b)
    r2 = ks_two_sample(_wrap(np.exp(a.values)), _wrap(np.exp(b.values)))
    assert r1.statistic == r2.statistic
    # One-sample: push samples and CDF through exp together.
    rep_raw = ks_one_sample(a, _normal_cdf_vec)
    rep_exp = ks_one_sample(_wrap(np.exp(a.values)),
                            lambda y: _normal_cdf_vec(np.log(y)))
    assert rep_raw.statistic == pytest.approx(rep_exp.statistic, abs=1e-15)


# --------------------------------------------------------------------------
# Moment checks
# --------------------------------------------------------------------------

def test_moment_check_z_scores():
    batch = std_normal_batch(20000, _rng(8))
    rep = moment_check(batch, lambda x: x, 0.0, label="mean")
    assert rep.passed and abs(rep.z_score) <= 3.0
    rep2 = moment_check(batch, lambda x: x, 0.5, label="off-target")
    assert not rep2.passed and abs(rep2.z_score) > 10


def test_moment_check_zero_variance():
    const = _wrap(np.full(50, 2.0))
    rep = moment_check(const, lambda x: x, 2.0, label="const-match")
    assert rep.passed
    with pytest.raises(DomainError):
        moment_check(const, lambda x: x, 1.0, label="const-mismatch")


def test_paired_diff_check():
    vals = std_normal_batch(5000, _rng(9)).values * 0.1 + 1.0
    rep = paired_diff_check(vals, 1.0, 5000, label="paired")
    assert rep.passed
    assert not paired_diff_check(vals, 0.0, 5000, label="wrong").passed


# --------------------------------------------------------------------------
# Tail-constant trend
# --------------------------------------------------------------------------

def test_tail_trend_grid_validation():
    rng = _rng(10)
    with pytest.raises(DomainError):
        tail_trend_check(0.5, [1e3, 1e6], 1000, rng)
    with pytest.raises(DomainError):
        tail_trend_check(0.5, [1e3, 1e4, 1e5], 1000, rng)  # only 2 decades
    with pytest.raises(DomainError):
        tail_trend_check(0.5, [1e6, 1e4, 1e9], 1000, rng)  # not increasing


def test_tail_trend_insufficient_exceedances():
    with pytest.raises(DomainError):
        tail_trend_check(math.pi / 4.0, [1e3, 10 ** 4.5, 1e6], 300, _rng(11))


def test_tail_trend_scales_with_aperture():
    # The plateau (ln t) P(T > t) approaches 4c/pi: doubling c doubles it.
    grid = [1e3, 10 ** 4.5, 1e6]
    r8 = tail_trend_check(math.pi / 8.0, grid, 10000, _rng(12))
    r4 = tail_trend_check(math.pi / 4.0, grid, 10000, _rng(13))
    assert r8.target == pytest.approx(0.5)
    assert r4.target == pytest.approx(1.0)
    ratio = r8.estimates[-1] / r4.estimates[-1]
    assert ratio == pytest.approx(0.5, abs=0.1)
    assert len(r8.grid) == 3 and len(r8.estimates) == 3


# --------------------------------------------------------------------------
# Spitzer-limit check
# --------------------------------------------------------------------------

def test_spitzer_requires_long_horizon():
    with pytest.raises(DomainError):
        spitzer_limit_check(100.0, 1000, _rng(14))


def test_spitzer_at_moderate_horizon():
    rep = spitzer_limit_check(1e4, 3000, _rng(15))
    assert rep.passed
    assert rep.threshold == 0.05


def test_spitzer_wrong_target_fails():
    # Negative control: the normalized winding is Cauchy-like, so a normal
    # target must be rejected even under the loose bar.
    th, _, _ = winding_at_time_batch(1e4, 1.0, 3000, _rng(16))
    scaled = _wrap(2.0 * th / math.log(1e4))
    rep = ks_one_sample(scaled, _normal_cdf_vec, threshold=0.05)
    assert not rep.passed


# --------------------------------------------------------------------------
# Reports and suite plumbing
# --------------------------------------------------------------------------

def test_reports_serialize():
    batch = std_normal_batch(1000, _rng(17))
    ks = ks_one_sample(batch, _normal_cdf_vec)
    mo = moment_check(batch, lambda x: x, 0.0)
    check = CheckReport("demo", [ks, mo], ks.passed and mo.passed)
    blob = json.dumps(check.to_dict(), sort_keys=True)
    assert "demo" in blob
    d = mo.to_dict()
    assert isinstance(d["estimate"], float) and isinstance(d["pass"], bool)
    assert d["kind"] == "moment"
    # NaN-free serialization for moment reports without a z-score.
    nan_rep = MomentReport(1.0, float("nan"), 1.0, float("nan"), True, "x")
    d2 = nan_rep.to_dict()
    assert d2["std_error"] is None and d2["z_score"] is None
    json.dumps(d2)


def test_suite_names_and_unknown():
    names = suite_names()
    assert "quadrature-log-sech" in names
    assert "spitzer-limit" in names
    assert len(names) == len(set(names)) == 16
    with pytest.raises(ValueError):
        run_suite(1, samples=100, names=["not-a-check"])


def test_run_suite_deterministic_subset():
    names = ["quadrature-log-sech", "fourth-moment-forms", "log-exit-mean"]
    r1 = run_suite(2024, samples=1500, names=names)
    r2 = run_suite(2024, samples=1500, names=names)
    assert r1 == r2
    assert r1["pass"] is True
    assert [c["name"] for c in r1["checks"]] == names
    # Order requested does not matter: execution follows the suite order.
    r3 = run_suite(2024, samples=1500, names=list(reversed(names)))
    assert r3 == r1
    json.dumps(r1)


def test_run_suite_seed_sensitivity():
    names = ["log-exit-mean"]
    r1 = run_suite(1, samples=1500, names=names)
    r2 = run_suite(2, samples=1500, names=names)
    e1 = r1["checks"][0]["reports"][0]["estimate"]
    e2 = r2["checks"][0]["reports"][0]["estimate"]
    assert e1 != e2
