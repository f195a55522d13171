import csv
import io
import json
import math

import numpy as np
import pytest

from locsample import cli

REPORT_KEYS = {
    "config",
    "m_w",
    "series_value",
    "bound_sq",
    "critical_lambda",
    "sup_rel",
    "lattice_mismatch_max",
    "terms_used",
    "remainder",
}


def run(capsys, *argv):
    code = cli.main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def rows(text):
    return list(csv.DictReader(io.StringIO(text)))


# -- bounds ------------------------------------------------------------------


def test_bounds_gaussian_moment(capsys):
    code, out, _ = run(capsys, "bounds", "--prefilter", "gauss", "--beta", "2", "--lambda", "0.25")
    rep = json.loads(out)
    assert code == 0
    assert REPORT_KEYS <= rep.keys()
    assert rep["m_w"] == pytest.approx(2 / math.sqrt(2 * math.pi), rel=1e-12)
    assert rep["critical_lambda"] == pytest.approx(0.5)
    assert rep["config"]["prefilter"] == {"kind": "Gaussian", "beta": 2.0}


def test_bounds_sinc_scaled_moment(capsys):
    code, out, _ = run(
        capsys, "bounds", "--prefilter", "sinc", "--beta", "4", "--weight", "sincscaled", "--s", "4", "--lambda", "0.25"
    )
    assert code == 0
    assert json.loads(out)["m_w"] == pytest.approx(0.25, rel=1e-12)


def test_bounds_monomial_critical_lambda_on_gaussian(capsys):
    _, out, _ = run(capsys, "bounds", "--prefilter", "gauss", "--beta", "2", "--weight", "monomial", "--s", "2")
    assert json.loads(out)["critical_lambda"] == pytest.approx(math.sqrt(2) / 2, rel=1e-12)


def test_bounds_divergent_moment_exit_code(capsys):
    code, _, err = run(capsys, "bounds", "--prefilter", "bspline", "--order", "2", "--weight", "monomial", "--s", "4")
    assert code == 1
    assert "DivergentMoment" in err


# -- sweep -------------------------------------------------------------------


def test_sweep_empty_list_is_header_only(capsys):
    code, out, _ = run(capsys, "sweep", "--prefilter", "gauss")
    assert code == 0
    assert out == "lambda,sup_rel,bound_sqrt,critical_lambda,status\n"


def test_sweep_gaussian_decreasing(capsys):
    lams = ["0.5", "0.4", "0.3", "0.25", "0.2", "0.15"]
    argv = ["sweep", "--prefilter", "gauss", "--beta", "2", "--window=-2:2:201"]
    for lam in lams:
        argv += ["--lambda", lam]
    code, out, _ = run(capsys, *argv)
    table = rows(out)
    assert code == 0
    assert [r["lambda"] for r in table] == [format(float(v), ".17g") for v in lams]
    sup = [float(r["sup_rel"]) for r in table]
    # below the double-precision floor the sequence flattens; compare above it
    above = [v for v in sup if v > 1e-13]
    assert all(b < a for a, b in zip(above, above[1:]))
    assert all(float(r["sup_rel"]) <= float(r["bound_sqrt"]) for r in table)


def test_sweep_flags_failed_rows(capsys):
    code, out, _ = run(capsys, "sweep", "--prefilter", "bspline", "--order", "2", "--weight", "monomial",
                       "--s", "4", "--lambda", "0.3", "--window=-1:1:11")
    assert code == 1
    table = rows(out)
    assert len(table) == 1 and table[0]["status"] == "DivergentMoment"


# -- walter ------------------------------------------------------------------


def test_walter_partial_sums(capsys):
    code, out, _ = run(capsys, "walter", "--order", "3", "--n", "100", "--n", "1000", "--n", "10000")
    table = rows(out)
    assert code == 0
    mags = [float(r["abs_partial_sum"]) for r in table]
    assert mags[0] > mags[1] > mags[2]
    assert mags[2] <= 1e-6
    assert all(float(r["partial_sum_re"]) == 0.0 for r in table)
    assert all(float(r["centered_denominator"]) > 1e-2 for r in table)


def test_walter_higher_order_decays_faster(capsys):
    _, out3, _ = run(capsys, "walter", "--order", "3", "--n", "1000")
    _, out5, _ = run(capsys, "walter", "--order", "5", "--n", "1000")
    assert float(rows(out5)[0]["abs_partial_sum"]) < float(rows(out3)[0]["abs_partial_sum"])


def test_walter_even_order_rejected(capsys):
    code, _, err = run(capsys, "walter", "--order", "4")
    assert code == 2
    assert "odd" in err


# -- interp ------------------------------------------------------------------


def test_interp_resonance_traces(capsys):
    code, out, err = run(
        capsys, "interp", "--prefilter", "bspline", "--order", "3", "--lambda", "0.26", "--lambda", "0.2501",
        "--limit-ell", "4", "--window=-3:3:61",
    )
    assert code == 0
    table = rows(out)
    labels = {r["trace"] for r in table}
    assert labels == {"lambda=0.26", "lambda=0.2501", "limit_ell=4"}
    time = {lab: [float(r["value"]) for r in table if r["trace"] == lab and r["domain"] == "time"] for lab in labels}
    # value at x = 0
    assert time["lambda=0.26"][30] == pytest.approx(1.0, abs=1e-9)
    assert time["limit_ell=4"][30] == pytest.approx(1.0, abs=1e-12)
    # this close to 1/4 the time trace is only approximate, and says so
    assert time["lambda=0.2501"][30] == pytest.approx(1.0, abs=1e-2)
    assert "warning: lambda=0.2501" in err
    assert "lambda=0.26:" not in err


def test_interp_sinc_flat_top(capsys):
    _, out, _ = run(capsys, "interp", "--prefilter", "sinc", "--beta", "4", "--lambda", "0.25",
                    "--freq-window=-20:20:81", "--window=-1:1:3")
    freq = [(float(r["coordinate"]), float(r["value"])) for r in rows(out) if r["domain"] == "freq"]
    inside = [v for x, v in freq if abs(x) < 4 * math.pi - 0.1]
    outside = [v for x, v in freq if abs(x) > 4 * math.pi + 0.1]
    assert max(inside) == pytest.approx(min(inside))
    assert max(outside) == 0.0


def test_interp_resonant_lambda_reports_error(capsys):
    code, _, err = run(capsys, "interp", "--prefilter", "bspline", "--order", "3", "--lambda", "0.25")
    assert code == 1
    assert "ResonantInterval" in err


# -- reconstruct -------------------------------------------------------------


def test_reconstruct_sinc_is_exact(capsys, tmp_path):
    report = tmp_path / "r.json"
    code, out, _ = run(capsys, "reconstruct", "--prefilter", "sinc", "--beta", "4", "--lambda", "0.25",
                       "--window=-2:2:81", "--report", str(report))
    assert code == 0
    table = rows(out)
    assert list(table[0]) == ["lambda", "x", "re_g", "re_g_tilde", "abs_err"]
    rep = json.loads(report.read_text())
    assert REPORT_KEYS <= rep.keys()
    assert rep["sup_rel"] < 1e-8


def test_reconstruct_gaussian_within_bound(capsys):
    code, out, _ = run(capsys, "reconstruct", "--prefilter", "gauss", "--beta", "2", "--lambda", "0.25",
                       "--seed", "3", "--format", "json", "--window=-2:2:81")
    rep = json.loads(out)
    assert code == 0
    assert rep["sup_rel"] ** 2 <= rep["bound_sq"]


# -- plumbing ----------------------------------------------------------------


def test_output_is_deterministic(capsys, tmp_path):
    argv = ["reconstruct", "--prefilter", "bspline", "--order", "3", "--lambda", "0.3", "--seed", "9",
            "--window=-1:1:21"]
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    assert cli.main(argv + ["--out", str(a)]) == 0
    assert cli.main(argv + ["--out", str(b)]) == 0
    assert a.read_bytes() == b.read_bytes()
    assert b"\r" not in a.read_bytes()


def test_seventeen_digit_output(capsys):
    # S_10 = (i 10.5 pi)^-3 = i / (10.5 pi)^3, printed so that it round-trips
    _, out, _ = run(capsys, "walter", "--order", "3", "--n", "10")
    value = rows(out)[0]["partial_sum_im"]
    assert float(value) == pytest.approx(1 / (10.5 * math.pi) ** 3, rel=1e-14)
    assert float(value) == float(format(float(value), ".17g"))


def test_config_file_with_flag_override(capsys, tmp_path):
    cfg = tmp_path / "run.cfg"
    cfg.write_text("# defaults\nprefilter = gauss\nbeta = 1.0\nlambda = 0.3, 0.4\n")
    _, out, _ = run(capsys, "bounds", "--config", str(cfg))
    reps = json.loads(out)
    assert [r["lambda"] for r in reps] == [0.3, 0.4]
    assert reps[0]["config"]["prefilter"]["beta"] == 1.0
    _, out, _ = run(capsys, "bounds", "--config", str(cfg), "--beta", "2", "--lambda", "0.25")
    rep = json.loads(out)
    assert rep["lambda"] == 0.25
    assert rep["config"]["prefilter"]["beta"] == 2.0


def test_bad_config_key(capsys, tmp_path):
    cfg = tmp_path / "bad.cfg"
    cfg.write_text("colour = blue\n")
    code, _, err = run(capsys, "bounds", "--config", str(cfg))
    assert code == 2
    assert "colour" in err


@pytest.mark.parametrize("window", ["oops", "3:1:10", "0:1:1"])
def test_bad_window_rejected(capsys, window):
    code, _, err = run(capsys, "bounds", "--window", window)
    assert code == 2
    assert "window" in err


def test_numpy_values_are_formatted_plainly():
    assert cli.fmt(np.float64(0.1)) == "0.10000000000000001"
    assert cli.fmt(3) == "3"
