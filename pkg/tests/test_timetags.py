import numpy as np
import pytest

from biphoton import (ConstantCoherence, GateWindow, SourceModel, estimate,
                      simulate_pairs, tally)
from biphoton.montecarlo import InsufficientCountsError
from biphoton.timetags import TimeTagFormatError, export_timetags, read_timetags


def model():
    return SourceModel(2.5, 769.0, 577.0, ConstantCoherence(0.78))


def test_roundtrip_estimates_identical(tmp_path):
    events = simulate_pairs(model(), 50_000, seed=101)
    path = tmp_path / "tags.csv"
    export_timetags(path, events)
    back = read_timetags(path)
    gate = GateWindow(0.0, 537.0)
    direct = estimate(tally(events, gate))
    ingested = estimate(tally(back, gate))
    assert ingested.fidelity == direct.fidelity
    assert ingested.correlations == direct.correlations


def test_file_layout(tmp_path):
    events = simulate_pairs(model(), 10, seed=5)
    path = tmp_path / "tags.csv"
    export_timetags(path, events)
    lines = path.read_text().splitlines()
    assert lines[0] == "pair_id,tau_meas_ps,basis,outcome"
    assert len(lines) == 11
    first = lines[1].split(",")
    assert first[0] == "0"
    assert len(first[1].split(".")[1]) >= 3
    assert first[2] in ("R", "D", "C")
    assert first[3] in ("co", "cross")


def write(tmp_path, body):
    path = tmp_path / "tags.csv"
    path.write_text("pair_id,tau_meas_ps,basis,outcome\n" + body)
    return path


def test_handcrafted_perfect_psi_plus(tmp_path):
    path = write(tmp_path, "\n".join([
        "0,10.000,R,co", "1,20.000,R,co",
        "2,30.000,D,co", "3,40.000,D,co",
        "4,50.000,C,cross", "5,60.000,C,cross",
    ]) + "\n")
    events = read_timetags(path)
    report = estimate(tally(events, GateWindow(0.0, 100.0)))
    assert report.fidelity.value == pytest.approx(1.0)


def test_all_records_outside_gate(tmp_path):
    path = write(tmp_path, "0,10.000,R,co\n1,20.000,D,co\n2,30.000,C,cross\n")
    events = read_timetags(path)
    with pytest.raises(InsufficientCountsError):
        estimate(tally(events, GateWindow(1000.0, 100.0)))


@pytest.mark.parametrize("body,lineno", [
    ("0,abc,R,co\n", 2),
    ("0,1.000,Q,co\n", 2),
    ("0,1.000,R,maybe\n", 2),
    ("0,1.000,R\n", 2),
    ("0,1.000,R,co\n0,2.000,D,co\n", 3),
    ("5,1.000,R,co\n4,2.000,D,co\n", 3),
])
def test_malformed_lines_report_line_number(tmp_path, body, lineno):
    path = write(tmp_path, body)
    with pytest.raises(TimeTagFormatError, match=f"line {lineno}"):
        read_timetags(path)


def test_bad_header(tmp_path):
    path = tmp_path / "tags.csv"
    path.write_text("id,tau,b,o\n0,1.0,R,co\n")
    with pytest.raises(TimeTagFormatError, match="line 1"):
        read_timetags(path)


def test_ingested_true_delay_is_nan(tmp_path):
    path = write(tmp_path, "0,1.000,R,co\n")
    events = read_timetags(path)
    assert np.isnan(events.tau_true_ps).all()
