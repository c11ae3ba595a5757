"""
Renderers for polygon reports, sweeps, worked examples and E2 charts.

JSON form of a PolygonReport uses the dataclass field names as keys; degree
indexed maps (eq51_lhs, h1_cohomology, lyndon_summary.ell) become objects
keyed by the degree as a string.
"""
from __future__ import annotations

import json
from dataclasses import asdict
from typing import Any, Mapping, Sequence

from spectral.borel_ss import PGFreenessReport, RowHypotheses
from spectral.examples import ExampleReport
from spectral.polygon import SWEEP_COLUMNS, LyndonSummary, PolygonReport, SweepResult, sweep_table


def _pairs_to_object(pairs: Sequence[tuple[int, int]]) -> dict[str, int]:
    return {str(k): v for k, v in pairs}


def _object_to_pairs(obj: Mapping[str, int]) -> tuple[tuple[int, int], ...]:
    return tuple(sorted((int(k), int(v)) for k, v in obj.items()))


def report_to_dict(report: PolygonReport) -> dict[str, Any]:
    data = asdict(report)
    data["betti"] = list(report.betti)
    data["fixed_orbit_profile"] = [list(pair) for pair in report.fixed_orbit_profile]
    data["orbit_representatives"] = list(report.orbit_representatives)
    data["e2_window"] = [list(row) for row in report.e2_window]
    data["eq51_lhs"] = _pairs_to_object(report.eq51_lhs)
    data["h1_cohomology"] = _pairs_to_object(report.h1_cohomology)
    data["row_hypotheses"] = [asdict(h) for h in report.row_hypotheses]
    data["lyndon_summary"] = {
        "ell": _pairs_to_object(report.lyndon_summary.ell),
        "l_n1": report.lyndon_summary.l_n1,
        "d_np": list(report.lyndon_summary.d_np),
    }
    return data


def report_from_dict(data: Mapping[str, Any]) -> PolygonReport:
    summary = data["lyndon_summary"]
    return PolygonReport(
        n=data["n"],
        p=data["p"],
        betti=tuple(data["betti"]),
        genus=data["genus"],
        genus_formula=data["genus_formula"],
        euler_characteristic=data["euler_characteristic"],
        b_X=data["b_X"],
        b_XK=data["b_XK"],
        b_XK_closed_form=data["b_XK_closed_form"],
        fixed_orbit_profile=tuple(tuple(pair) for pair in data["fixed_orbit_profile"]),
        orbit_representatives=tuple(data["orbit_representatives"]),
        k_formal=data["k_formal"],
        g_formal=data["g_formal"],
        formality_failed=data["formality_failed"],
        e2_window=tuple(tuple(row) for row in data["e2_window"]),
        eq51_lhs=_object_to_pairs(data["eq51_lhs"]),
        eq51_rhs=data["eq51_rhs"],
        degenerate=data["degenerate"],
        h1_cohomology=_object_to_pairs(data["h1_cohomology"]),
        h1_formula=data["h1_formula"],
        row_hypotheses=tuple(RowHypotheses(**h) for h in data["row_hypotheses"]),
        pg_verdict=data["pg_verdict"],
        free_rank=data["free_rank"],
        torsion_dim=data["torsion_dim"],
        lyndon_summary=LyndonSummary(
            ell=_object_to_pairs(summary["ell"]),
            l_n1=summary["l_n1"],
            d_np=tuple(summary["d_np"]),
        ),
        cell_count=data["cell_count"],
    )


def to_json(data: Any) -> str:
    return json.dumps(data, indent=2, default=str)


def render_report_text(report: PolygonReport) -> str:
    b0, b1, b2 = report.betti
    lyndon = report.lyndon_summary
    ell = ", ".join(f"l_{d}={v}" for d, v in lyndon.ell)
    lines = [
        f"Z_K(D1,S0) over the {report.n}-gon, coefficients F_{report.p}",
        f"  betti           : b0={b0} b1={b1} b2={b2}  (b(X)={report.b_X})",
        f"  genus           : {report.genus} (formula {report.genus_formula})",
        f"  euler           : {report.euler_characteristic}",
        f"  b(X^K)          : {report.b_XK} (2^(n/p) = {report.b_XK_closed_form})",
        "  fixed orbits    : " + ", ".join(
            f"{word}[size {size}, stabilizer {stab}]"
            for word, (size, stab) in zip(report.orbit_representatives, report.fixed_orbit_profile)
        ),
        f"  k_formal        : {report.k_formal}",
        f"  g_formal        : {report.g_formal}" + (f"  (fails: {report.formality_failed})" if report.formality_failed else ""),
        "  eq51 lhs        : " + ", ".join(f"k={k}: {v}" for k, v in report.eq51_lhs),
        f"  eq51 rhs        : {report.eq51_rhs}  degenerate={report.degenerate}",
        "  H^k(G;H^1)      : " + ", ".join(f"k={k}: {v}" for k, v in report.h1_cohomology)
        + f"  (formula {report.h1_formula})",
        "  row hypotheses  : " + "; ".join(
            f"q={h.q} " + ("trivial" if h.trivial_row else f"norm_zero={h.norm_zero} kernel_in_image={h.kernel_in_image}")
            for h in report.row_hypotheses
        ),
        f"  pg_verdict      : {report.pg_verdict}"
        + (f"  free_rank={report.free_rank}" if report.free_rank is not None else ""),
        f"  torsion_dim     : {report.torsion_dim}",
        f"  lyndon          : {ell}; L(n,1)={lyndon.l_n1}; D_n,p={list(lyndon.d_np)}",
        "",
        "E2 page",
        render_e2_ascii(report.e2_window),
    ]
    return "\n".join(lines)


def sweep_to_dict(result: SweepResult, *, timings: bool = False) -> dict[str, Any]:
    data: dict[str, Any] = {
        "rows": [{column: getattr(r, column) for column in SWEEP_COLUMNS} for r in result.reports],
        "failures": result.failures,
    }
    if timings:
        data["runs"] = result.runs
    return data


def render_sweep_text(result: SweepResult, *, timings: bool = False) -> str:
    table = sweep_table(result.reports)
    if timings and result.runs:
        table = table.assign(elapsed_s=[run["elapsed_s"] for run in result.runs])
    text = table.to_string(index=False) if not table.empty else "(no pairs)"
    for failure in result.failures:
        text += f"\nfailed n={failure['n']} p={failure['p']}: {failure['error']}"
    return text


def write_sweep_csv(result: SweepResult, path: str) -> None:
    sweep_table(result.reports).to_csv(path, index=False)


# ── E2 charts ──────────────────────────────────────────────


def render_e2_ascii(grid: Sequence[Sequence[int]]) -> str:
    """grid[q][k]; the q axis runs upward as in a spectral sequence chart."""
    if not grid:
        return ""
    cols = len(grid[0])
    width = max(len(str(v)) for row in grid for v in row)
    label = len(str(len(grid) - 1))
    lines = []
    for q in range(len(grid) - 1, -1, -1):
        cells = " ".join(str(v).rjust(width) for v in grid[q])
        lines.append(f"{str(q).rjust(label)} | {cells}")
    lines.append(" " * label + " +" + "-" * (cols * (width + 1)))
    lines.append(" " * (label + 3) + " ".join(str(k).rjust(width) for k in range(cols)))
    return "\n".join(lines)


def render_e2_tikz(grid: Sequence[Sequence[int]], *, caption: str = "") -> str:
    """Standalone TikZ: a dot for every nonzero entry, labelled when larger than 1."""
    rows = len(grid)
    cols = len(grid[0]) if grid else 0
    body = [
        r"\documentclass[tikz]{standalone}",
        r"\begin{document}",
        r"\begin{tikzpicture}[scale=0.8]",
        rf"  \draw[step=1, very thin, gray!30] (0,0) grid ({cols - 1},{max(rows - 1, 1)});",
        rf"  \draw[->] (-0.3,0) -- ({cols - 0.5},0) node[right] {{$p$}};",
        rf"  \draw[->] (0,-0.3) -- (0,{rows - 0.5}) node[above] {{$q$}};",
    ]
    for k in range(cols):
        body.append(rf"  \node[below] at ({k},-0.3) {{\tiny {k}}};")
    for q in range(rows):
        body.append(rf"  \node[left] at (-0.3,{q}) {{\tiny {q}}};")
    for q, row in enumerate(grid):
        for k, value in enumerate(row):
            if value == 0:
                continue
            body.append(rf"  \fill ({k},{q}) circle (2pt);")
            if value > 1:
                body.append(rf"  \node[above right] at ({k},{q}) {{\tiny {value}}};")
    if caption:
        body.append(rf"  \node[above] at ({(cols - 1) / 2},{rows - 0.2}) {{{caption}}};")
    body += [r"\end{tikzpicture}", r"\end{document}"]
    return "\n".join(body)


# ── Worked examples ────────────────────────────────────────


def _freeness_to_dict(report: PGFreenessReport) -> dict[str, Any]:
    return {
        "verdict": report.verdict,
        "free_rank": report.free_rank,
        "degenerate_at_E2": report.degenerate_at_E2,
        "hypotheses": [asdict(h) for h in report.hypotheses],
    }


def example_to_dict(report: ExampleReport) -> dict[str, Any]:
    return {
        "name": report.name,
        "n": report.n,
        "p": report.p,
        "b_X": report.b_X,
        "b_XK": report.b_XK,
        "e2_window": report.page.grid(),
        "antidiagonals": report.antidiagonals(),
        "accounting": {
            "lhs": _pairs_to_object(report.accounting.lhs),
            "rhs": report.accounting.rhs,
            "degenerate": report.accounting.degenerate,
        },
        "freeness": _freeness_to_dict(report.freeness),
        "formality": asdict(report.formality),
        "k_level": _freeness_to_dict(report.k_level) if report.k_level else None,
        "restricted_norm_nonzero": report.restricted_norm_nonzero,
    }


def render_example_text(report: ExampleReport) -> str:
    f = report.formality
    lines = [
        f"example {report.name} (n={report.n}, p={report.p})",
        f"  b(X)={report.b_X} b(X^K)={report.b_XK}",
        f"  antidiagonals   : {report.antidiagonals()}",
        f"  degenerate      : {report.accounting.degenerate} (target {report.accounting.rhs})",
        f"  pg_verdict      : {report.freeness.verdict}"
        + (f"  free_rank={report.freeness.free_rank}" if report.freeness.free_rank is not None else ""),
        f"  K_formal={f.K_formal} XK_G_formal={f.XK_G_formal} G_formal={f.G_formal}",
    ]
    if report.restricted_norm_nonzero is not None:
        lines.append(f"  restricted norm nonzero (P_K-torsion): {report.restricted_norm_nonzero}")
    lines += ["", render_e2_ascii(report.page.grid())]
    return "\n".join(lines)
