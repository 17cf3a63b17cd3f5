import csv

import pytest

from occnav.errors import DomainError
from occnav.sweeps import (
    error_trend,
    ranging_error_sweep,
    reproduce_sweeps,
    reproduce_table1,
)


def test_table1_check_passes(tmp_path):
    out = tmp_path / "t1.csv"
    rows, passed = reproduce_table1(out)
    assert passed
    assert len(rows) == 11
    assert rows[0]["corrected_cm"] == pytest.approx(255.5, abs=0.5)
    assert rows[-1]["error_vs_actual_cm"] <= 2.0
    with open(out) as fh:
        emitted = list(csv.DictReader(fh))
    assert len(emitted) == 11


def test_table1_direct_vs_corrected():
    rows, _ = reproduce_table1()
    # at zero offset the raw photogrammetric distance is already right;
    # off-axis the correction pulls it back toward the reference
    assert rows[0]["direct_cm"] == pytest.approx(rows[0]["corrected_cm"])
    last = rows[-1]
    assert abs(last["corrected_cm"] - last["reference_cm"]) < \
        abs(last["direct_cm"] - last["reference_cm"])


def test_error_sweep_bounds_and_trend():
    for spacing, bound in ((50.0, 7.5), (100.0, 8.5)):
        recs = error_trend(spacing)
        means = [r["mean_error_cm"] for r in recs]
        assert means == sorted(means)
        assert means[-1] <= bound


def test_error_sweep_rejects_bad_count():
    with pytest.raises(DomainError):
        ranging_error_sweep(5, 50.0)


def test_reproduce_sweeps_files(tmp_path):
    paths = reproduce_sweeps(tmp_path)
    assert set(paths) == {"accuracy_vs_offset", "error_vs_leds",
                          "ber_vs_snr"}
    with open(paths["error_vs_leds"]) as fh:
        rows = list(csv.DictReader(fh))
    assert len(rows) == 6       # 2 spacings x 3 LED counts
    with open(paths["accuracy_vs_offset"]) as fh:
        acc = list(csv.DictReader(fh))
    assert float(acc[0]["accuracy_pct"]) == pytest.approx(100.0)
    assert min(float(r["accuracy_pct"]) for r in acc) >= 98.0
