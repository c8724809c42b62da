"""Command-line interface: grids, formats, exit codes, reproducibility."""

import json
import math

import numpy as np
import pytest

from windhit.cli import (
    EXIT_INVALID_ARGS,
    EXIT_NON_CONVERGENCE,
    EXIT_OK,
    EXIT_SUITE_FAILURE,
    main,
    parse_grid,
)
from windhit.errors import DomainError

PI = math.pi


def _run(capsys, argv):
    rc = main(argv)
    return rc, capsys.readouterr().out


def _data_lines(text):
    return [ln for ln in text.strip().splitlines()
            if ln and not ln.startswith("#")]


# --------------------------------------------------------------------------
# Grid parsing
# --------------------------------------------------------------------------

def test_parse_grid_forms():
    assert parse_grid("0.5").tolist() == [0.5]
    lin = parse_grid("0:10:5")
    assert lin.tolist() == [0.0, 2.5, 5.0, 7.5, 10.0]
    lo = parse_grid("log:0.01:100:5")
    assert lo == pytest.approx(np.geomspace(0.01, 100, 5))
    single = parse_grid("1e4")
    assert single.tolist() == [1e4]


@pytest.mark.parametrize("bad", [
    "", "1:2", "a:b:c", "1:10:0", "1:10:-2", "log:0:1:5", "log:-1:1:5",
    "1:2:3:4",
])
def test_parse_grid_rejects(bad):
    with pytest.raises(DomainError):
        parse_grid(bad)


# --------------------------------------------------------------------------
# moments
# --------------------------------------------------------------------------

def test_moments_second_closed_form(capsys):
    rc, out = _run(capsys, ["moments", "--second", "--c", "0.3927"])
    assert rc == EXIT_OK
    row = _data_lines(out)[-1].split(",")
    val = float(row[1])
    assert abs(val - (math.sqrt(2.0) - 1.0) / 2.0) < 2e-6


def test_moments_integral_form_agrees(capsys):
    rc, out = _run(capsys, ["moments", "--fourth", "--c", "0.3"])
    rc2, out2 = _run(capsys, ["moments", "--fourth", "--c", "0.3",
                              "--integral"])
    assert rc == rc2 == EXIT_OK
    v1 = float(_data_lines(out)[-1].split(",")[1])
    v2 = float(_data_lines(out2)[-1].split(",")[1])
    assert v1 == pytest.approx(v2, rel=1e-8)


def test_moments_fourth_domain(capsys):
    rc, _ = _run(capsys, ["moments", "--fourth", "--c", "0.5"])
    assert rc == EXIT_INVALID_ARGS


def test_moments_requires_exactly_one(capsys):
    rc, _ = _run(capsys, ["moments", "--c", "0.3"])
    assert rc == EXIT_INVALID_ARGS
    rc2, _ = _run(capsys, ["moments", "--second", "--fourth", "--c", "0.1"])
    assert rc2 == EXIT_INVALID_ARGS


# --------------------------------------------------------------------------
# laplace
# --------------------------------------------------------------------------

def test_laplace_two_sided_reference(capsys):
    rc, out = _run(capsys, ["laplace", "--kind", "two-sided",
                            "--c", repr(PI / 2.0), "--x", "1"])
    assert rc == EXIT_OK
    val = float(_data_lines(out)[-1].split(",")[1])
    assert val == pytest.approx(1.0 / (2.0 * PI), rel=1e-12)


def test_laplace_kinds_all_run(capsys):
    for kind in ("one-sided", "two-sided", "q-normalized", "inverse-time",
                 "range"):
        rc, out = _run(capsys, ["laplace", "--kind", kind, "--c", "1.0",
                                "--x", "0.5:2:4"])
        assert rc == EXIT_OK
        rows = _data_lines(out)
        assert len(rows) == 1 + 4  # header + grid
        vals = [float(r.split(",")[1]) for r in rows[1:]]
        assert all(v > 0 for v in vals)
        assert vals == sorted(vals, reverse=True)


# --------------------------------------------------------------------------
# density
# --------------------------------------------------------------------------

def test_density_fixed_truncation_flags(capsys):
    rc, out = _run(capsys, ["density", "--c", repr(2.0 * PI),
                            "--t", "0.01:10:200", "--K", "9", "--N", "9"])
    assert rc == EXIT_OK
    rows = _data_lines(out)
    assert rows[0] == "t,density,negative_warning"
    assert len(rows) == 201
    flagged = [r for r in rows[1:] if r.endswith("true")]
    assert len(flagged) == 4
    assert all(float(r.split(",")[0]) < 0.2 for r in flagged)


def test_density_fixed_requires_truncation(capsys):
    rc, _ = _run(capsys, ["density", "--c", "0.7854", "--t", "1"])
    assert rc == EXIT_INVALID_ARGS


def test_density_adaptive_mass(capsys):
    rc, out = _run(capsys, ["density", "--c", "0.7854", "--t", "0.01:50:500",
                            "--adaptive"])
    assert rc == EXIT_OK
    rows = _data_lines(out)[1:]
    t = np.array([float(r.split(",")[0]) for r in rows])
    f = np.array([float(r.split(",")[1]) for r in rows])
    mass = np.trapezoid(f, t) + f[-1] * t[-1] / (PI / (4.0 * 0.7854))
    assert abs(mass - 1.0) < 1e-2


def test_density_adaptive_cap_nonconvergence(capsys):
    rc, _ = _run(capsys, ["density", "--c", "0.7854", "--t", "0.01:50:500",
                          "--adaptive", "--K", "3"])
    assert rc == EXIT_NON_CONVERGENCE


def test_density_rejects_nonpositive_grid(capsys):
    rc, _ = _run(capsys, ["density", "--c", "0.7854", "--t", "0:1:5",
                          "--adaptive"])
    assert rc == EXIT_INVALID_ARGS


# --------------------------------------------------------------------------
# sample
# --------------------------------------------------------------------------

def test_sample_reproducible_bytes(tmp_path):
    f1, f2 = tmp_path / "a.csv", tmp_path / "b.csv"
    for f in (f1, f2):
        rc = main(["sample", "--law", "exit-cone", "--c", "0.7854",
                   "--n", "200", "--seed", "7", "--out", str(f)])
        assert rc == EXIT_OK
    assert f1.read_bytes() == f2.read_bytes()
    lines = _data_lines(f1.read_text())
    assert len(lines) == 201
    assert lines[0].split(",")[0] == "stream_id"


def test_sample_seed_changes_values(tmp_path):
    outs = []
    for seed in ("7", "8"):
        f = tmp_path / f"s{seed}.csv"
        main(["sample", "--law", "cauchy", "--n", "50", "--seed", seed,
              "--out", str(f)])
        outs.append(f.read_bytes())
    assert outs[0] != outs[1]


def test_sample_threads_do_not_change_values(tmp_path):
    outs = []
    for th in ("1", "2"):
        f = tmp_path / f"t{th}.csv"
        rc = main(["sample", "--law", "two-sided-hit", "--c", "1.0",
                   "--dt", "1e-3", "--n", "500", "--seed", "11",
                   "--threads", th, "--out", str(f)])
        assert rc == EXIT_OK
        outs.append(f.read_bytes())
    assert outs[0] == outs[1]


def test_sample_laws_run(capsys):
    cases = [
        ["--law", "one-sided-hit", "--c", "0.8"],
        ["--law", "range-exit", "--c", "1.0", "--dt", "1e-3"],
        ["--law", "exp-functional", "--u", "0.5"],
        ["--law", "winding-hit", "--b", "1.0", "--mode", "exact"],
        ["--law", "ou-exit", "--c", "0.7854", "--lam", "1.0"],
        ["--law", "exit-cone-one-sided", "--c", "0.7854"],
    ]
    for extra in cases:
        rc, out = _run(capsys, ["sample", "--n", "20", "--seed", "3"] + extra)
        assert rc == EXIT_OK, extra
        assert len(_data_lines(out)) == 21


def test_sample_json_format(capsys):
    rc, out = _run(capsys, ["sample", "--law", "cauchy", "--n", "5",
                            "--seed", "2", "--format", "json"])
    assert rc == EXIT_OK
    doc = json.loads(out)
    assert doc["columns"][0] == "stream_id"
    assert len(doc["rows"]) == 5
    assert doc["master_seed"] == 2


def test_sample_requires_seed():
    with pytest.raises(SystemExit) as exc:
        main(["sample", "--law", "cauchy", "--n", "5"])
    assert exc.value.code == 2


def test_sample_missing_parameter(capsys):
    rc, _ = _run(capsys, ["sample", "--law", "exit-cone", "--n", "5",
                          "--seed", "1"])
    assert rc == EXIT_INVALID_ARGS


# --------------------------------------------------------------------------
# spitzer
# --------------------------------------------------------------------------

def test_spitzer_csv_shape(capsys):
    rc, out = _run(capsys, ["spitzer", "--t", "1e4", "--n", "1500",
                            "--seed", "5"])
    assert rc == EXIT_OK
    rows = _data_lines(out)
    assert rows[0] == "t,n,ks_statistic,threshold,pass"
    assert len(rows) == 2
    fields = rows[1].split(",")
    assert float(fields[0]) == 1e4 and int(fields[1]) == 1500
    assert float(fields[2]) < float(fields[3])
    assert fields[4] == "true"


def test_spitzer_short_horizon_rejected(capsys):
    rc, _ = _run(capsys, ["spitzer", "--t", "100", "--n", "100",
                          "--seed", "5"])
    assert rc == EXIT_INVALID_ARGS


# --------------------------------------------------------------------------
# verify
# --------------------------------------------------------------------------

def test_verify_subset_reproducible(tmp_path):
    f1, f2 = tmp_path / "r1.json", tmp_path / "r2.json"
    argv = ["verify", "--suite", "quadrature-log-sech,fourth-moment-forms",
            "--seed", "3", "--samples", "1500"]
    for f in (f1, f2):
        rc = main(argv + ["--out", str(f)])
        assert rc == EXIT_OK
    assert f1.read_bytes() == f2.read_bytes()
    doc = json.loads(f1.read_text())
    assert doc["pass"] is True
    assert doc["master_seed"] == 3
    assert "backend" in doc
    assert [c["name"] for c in doc["checks"]] == [
        "quadrature-log-sech", "fourth-moment-forms"]


def test_verify_unknown_suite(capsys):
    rc, _ = _run(capsys, ["verify", "--suite", "nope", "--seed", "1"])
    assert rc == EXIT_INVALID_ARGS


def test_exit_code_constants():
    assert (EXIT_OK, EXIT_SUITE_FAILURE, EXIT_INVALID_ARGS,
            EXIT_NON_CONVERGENCE) == (0, 1, 2, 3)
