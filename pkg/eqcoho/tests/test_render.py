import dataclasses
import json
import sys
from pathlib import Path

import pandas as pd

sys.path.insert(0, str(Path(__file__).resolve().parents[1]))

from reports.render import (  # noqa: E402
    example_to_dict,
    render_e2_ascii,
    render_e2_tikz,
    render_example_text,
    render_report_text,
    render_sweep_text,
    report_from_dict,
    report_to_dict,
    sweep_to_dict,
    to_json,
    write_sweep_csv,
)
from spectral.examples import wedge_swap_pipeline  # noqa: E402
from spectral.polygon import SWEEP_COLUMNS, PolygonReport, build_polygon_report, sweep  # noqa: E402


def test_report_json_round_trip():
    for n, p in [(4, 2), (6, 3)]:
        report = build_polygon_report(n, p)
        assert report_from_dict(json.loads(to_json(report_to_dict(report)))) == report


def test_report_json_uses_field_names():
    data = report_to_dict(build_polygon_report(5, 5))
    assert data["pg_verdict"] == "TORSION"
    assert data["torsion_dim"] == 2
    assert data["betti"] == [1, 10, 1]
    assert set(data["eq51_lhs"]) == {"3", "4", "5", "6"}
    assert data["lyndon_summary"]["ell"] == {"1": 2, "5": 6}


def test_report_json_keys_are_the_report_fields():
    data = report_to_dict(build_polygon_report(4, 2))
    assert set(data) == {f.name for f in dataclasses.fields(PolygonReport)}
    required = {
        "n", "p", "betti", "genus", "b_XK", "fixed_orbit_profile", "k_formal", "g_formal",
        "e2_window", "eq51_lhs", "eq51_rhs", "pg_verdict", "torsion_dim", "lyndon_summary",
    }
    assert required <= set(data)
    assert not any(key.startswith("accounting") for key in data)
    assert data["eq51_rhs"] == 3
    assert all(value == 3 for value in data["eq51_lhs"].values())


def test_text_and_json_agree():
    report = build_polygon_report(6, 3)
    text = render_report_text(report)
    assert f"b(X^K)          : {report.b_XK}" in text
    assert f"pg_verdict      : {report.pg_verdict}" in text
    assert f"b0={report.betti[0]} b1={report.betti[1]} b2={report.betti[2]}" in text
    assert f"torsion_dim     : {report.torsion_dim}" in text


def test_e2_ascii_layout():
    assert render_e2_ascii([[1, 1], [0, 2]]) == "1 | 0 2\n0 | 1 1\n  +----\n    0 1"
    assert render_e2_ascii([]) == ""


def test_e2_tikz_is_a_standalone_document():
    tikz = render_e2_tikz([[1, 1, 1], [0, 2, 0]], caption="demo")
    assert tikz.startswith(r"\documentclass[tikz]{standalone}")
    assert tikz.endswith(r"\end{document}")
    assert tikz.count(r"\fill") == 4
    assert r"{\tiny 2}" in tikz
    assert "demo" in tikz


def test_sweep_renderings(tmp_path):
    result = sweep(5)
    data = sweep_to_dict(result)
    assert [(row["n"], row["p"]) for row in data["rows"]] == [(3, 3), (4, 2), (5, 5)]
    assert "runs" not in data
    assert len(sweep_to_dict(result, timings=True)["runs"]) == 3

    text = render_sweep_text(result, timings=True)
    assert "elapsed_s" in text
    assert "TORSION" in text

    path = tmp_path / "sweep.csv"
    write_sweep_csv(result, str(path))
    frame = pd.read_csv(path)
    assert list(frame.columns) == SWEEP_COLUMNS
    assert list(frame.pg_verdict) == ["FREE", "FREE", "TORSION"]


def test_example_renderings():
    report = wedge_swap_pipeline()
    data = json.loads(to_json(example_to_dict(report)))
    assert data["antidiagonals"] == [1, 2, 2, 2, 2, 2]
    assert data["freeness"]["verdict"] == "FREE"
    assert data["k_level"] is None
    assert "wedge-swap" in render_example_text(report)
