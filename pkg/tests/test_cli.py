import json
import math
import os

import numpy as np
import pytest

from zetadiff import Histogram, build_histogram, make_table, sample_function, sieve_primes, write_histogram_csv
from zetadiff.cli import main

DATA = os.path.join(os.path.dirname(__file__), os.pardir, "data", "zeros_100k.f64")
THREE_ZEROS = "14.134725\n21.022040\n25.010858\n"


def run(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def test_primes_json(capsys, tmp_path):
    code, out, _ = run(capsys, "primes", "--limit", "10")
    assert code == 0
    assert json.loads(out) == {"limit": 10, "count": 4, "last": 7}

    target = tmp_path / "p.json"
    code, out, _ = run(capsys, "primes", "--limit", "4090441", "--out", str(target))
    assert code == 0 and out == ""
    payload = json.loads(target.read_text())
    assert payload["last"] == 4090441
    assert payload["count"] == 289140


def test_primes_domain_error(capsys):
    code, out, err = run(capsys, "primes", "--limit", "1")
    assert code == 1
    assert err.startswith("domain_error:")


def test_const_values(capsys):
    l2 = math.log(2.0)
    code, out, _ = run(capsys, "const", "--prime-cutoff", "2")
    assert code == 0
    assert float(out) == pytest.approx(-l2 * l2 / 2.0, rel=1e-12)
    code, out, _ = run(capsys, "const", "--prime-cutoff", "3")
    assert code == 0
    assert float(out) == pytest.approx(-l2 * l2, rel=1e-12)


def test_eval_cin_zero_row(capsys, tmp_path):
    target = tmp_path / "cin.csv"
    code, _, _ = run(capsys, "eval", "--function", "cin", "--x-from", "0",
                     "--x-to", "0.02", "--step", "0.01", "--out", str(target))
    assert code == 0
    lines = target.read_text().splitlines()
    assert lines[0] == "x,value"
    assert lines[1] == "0,0"
    assert len(lines) == 4


def test_eval_f_prime_at_zero_matches_const(capsys, tmp_path):
    code, out, _ = run(capsys, "const", "--prime-cutoff", "101")
    assert code == 0
    const_value = float(out)
    target = tmp_path / "fp.csv"
    code, _, _ = run(capsys, "eval", "--function", "f-prime", "--prime-cutoff",
                     "101", "--x-from", "0", "--x-to", "0", "--step", "0.01",
                     "--out", str(target))
    assert code == 0
    row = target.read_text().splitlines()[1].split(",")
    assert float(row[0]) == 0.0
    assert float(row[1]) == pytest.approx(const_value, rel=1e-13)


def test_eval_requires_cutoff(capsys, tmp_path):
    code, _, err = run(capsys, "eval", "--function", "g",
                       "--out", str(tmp_path / "g.csv"))
    assert code == 1
    assert err.startswith("usage_error:")


def test_hist_three_real_zeros(capsys, tmp_path):
    src = tmp_path / "zeros.txt"
    src.write_text(THREE_ZEROS)
    target = tmp_path / "h.csv"
    code, _, err = run(capsys, "hist", "--zeros", str(src), "--bin-width", "1.0",
                       "--x-max", "12", "--out", str(target))
    assert code == 0
    assert "pairs in window: 3" in err
    rows = [ln.split(",") for ln in target.read_text().splitlines()[1:]]
    counts = {float(c): int(v) for c, v in rows}
    # deltas 3.988, 6.887, 10.876 land in bins 3, 6, 10
    assert len(rows) == 12
    assert counts[3.5] == 1 and counts[6.5] == 1 and counts[10.5] == 1
    assert sum(counts.values()) == 3


def test_hist_n_zeros_flag(capsys, tmp_path):
    target = tmp_path / "h.csv"
    code, _, err = run(capsys, "hist", "--zeros", DATA, "--format", "binary",
                       "--n-zeros", "1000", "--x-max", "10", "--out", str(target))
    assert code == 0
    assert "zeros: 1000" in err
    code, _, err = run(capsys, "hist", "--zeros", DATA, "--format", "binary",
                       "--n-zeros", "100001", "--out", str(target))
    assert code == 1
    assert err.startswith("range_error:")


def test_fft_finds_prime_log_peaks(capsys, tmp_path):
    pt = sieve_primes(101)
    centers = (np.arange(100000, dtype=np.float64) + 0.5) * 0.001
    vals = sample_function(pt, "g", centers).values
    src = tmp_path / "g.csv"
    with open(src, "w") as fh:
        fh.write("bin_center,value\n")
        for c, v in zip(centers, vals):
            fh.write("%.17g,%.17g\n" % (c, v))
    target = tmp_path / "spec.csv"
    code, _, _ = run(capsys, "fft", "--hist", str(src), "--normalize", "no",
                     "--out", str(target))
    assert code == 0
    rows = np.loadtxt(target, delimiter=",", skiprows=1)
    freqs, mags = rows[:, 0], np.hypot(rows[:, 1], rows[:, 2])
    step = freqs[1] - freqs[0]
    for f in (math.log(2.0), math.log(3.0)):
        j = int(round(f / step))
        window = mags[j - 3:j + 4]
        j_star = j - 3 + int(np.argmax(window))
        assert abs(j_star - f / step) <= 1.0


def test_fft_rejects_unknown_header(capsys, tmp_path):
    src = tmp_path / "bad.csv"
    src.write_text("a,b\n1,2\n")
    code, _, err = run(capsys, "fft", "--hist", str(src),
                       "--out", str(tmp_path / "o.csv"))
    assert code == 1
    assert err.startswith("usage_error:")


def test_fit_from_histogram_csv(capsys, tmp_path):
    pt = sieve_primes(101)
    centers = (np.arange(100000, dtype=np.float64) + 0.5) * 0.001
    s = sample_function(pt, "f_prime", centers).values
    hist = Histogram(bin_width=0.001, x_max=100.0,
                     counts=np.round(119.0 + 7.5 * s).astype(np.int64), n_zeros=42)
    src = tmp_path / "h.csv"
    write_histogram_csv(hist, str(src))

    code, out, _ = run(capsys, "fit", "--hist", str(src),
                       "--prime-cutoff", "101", "--variant", "f-prime")
    assert code == 0
    payload = json.loads(out)
    assert payload["amplitude"] == pytest.approx(-7.5, abs=0.02)
    assert payload["variant"] == "f_prime"
    assert payload["method"] == "spectral_lsq"
    assert payload["cutoff"] == 101
    assert len(payload["counts_sha256"]) == 64

    corrected = tmp_path / "corr.csv"
    fit_json = tmp_path / "fit.json"
    code, _, err = run(capsys, "correct", "--hist", str(src),
                       "--prime-cutoff", "101", "--out", str(corrected),
                       "--fit-out", str(fit_json))
    assert code == 0
    assert "amplitude:" in err
    assert json.loads(fit_json.read_text())["amplitude"] == payload["amplitude"]
    lines = corrected.read_text().splitlines()
    assert lines[0] == "bin_center,value"
    assert len(lines) == 100001


def test_report_end_to_end(capsys, tmp_path):
    target = tmp_path / "report.json"
    code, _, _ = run(capsys, "report", "--zeros", DATA, "--format", "binary",
                     "--prime-cutoff", "101", "--out", str(target))
    assert code == 0
    payload = json.loads(target.read_text())
    assert payload["params"]["n_zeros"] == 100000
    assert payload["params"]["prime_cutoff"] == 101
    assert payload["flatness_after"] < payload["flatness_before"]
    assert payload["fit"]["amplitude"] == pytest.approx(1.91, abs=0.1)
    peaks = payload["peaks"]
    assert peaks[0]["p"] == 2 and peaks[0]["n"] == 1
    assert peaks[0]["freq"] == pytest.approx(math.log(2.0), rel=1e-12)
    assert len(peaks) >= 6
    for key in ("magnitude_before", "prominence_after", "background_before"):
        assert key in peaks[0]


def test_config_file_with_override(capsys, tmp_path):
    src = tmp_path / "zeros.txt"
    src.write_text(THREE_ZEROS)
    cfg = tmp_path / "run.cfg"
    cfg.write_text("# defaults\nbin-width = 1.0\nx_max = 12\n")
    target = tmp_path / "h.csv"

    code, _, _ = run(capsys, "hist", "--zeros", str(src), "--config", str(cfg),
                     "--out", str(target))
    assert code == 0
    assert len(target.read_text().splitlines()) == 13

    code, _, _ = run(capsys, "hist", "--zeros", str(src), "--config", str(cfg),
                     "--bin-width", "0.5", "--out", str(target))
    assert code == 0
    assert len(target.read_text().splitlines()) == 25


def test_config_errors(capsys, tmp_path):
    cfg = tmp_path / "bad.cfg"
    cfg.write_text("no separator here\n")
    code, _, err = run(capsys, "hist", "--zeros", "x", "--config", str(cfg),
                       "--out", "y")
    assert code == 1
    assert err.startswith("usage_error:")

    code, _, err = run(capsys, "--config", str(cfg))
    assert code == 1
    assert err.startswith("usage_error:")


def test_missing_file_is_io_error(capsys, tmp_path):
    code, _, err = run(capsys, "hist", "--zeros", str(tmp_path / "nope.txt"),
                       "--out", str(tmp_path / "h.csv"))
    assert code == 1
    assert err.startswith("io_error:")
