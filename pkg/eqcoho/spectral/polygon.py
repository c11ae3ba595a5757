"""
Full pipeline for the canonical C_n action on Z_K(D^1, S^0), K the boundary of the n-gon.

Usage:
    from spectral.polygon import build_polygon_report, sweep

    report = build_polygon_report(6, 3)
    result = sweep(10, workers=4)
    table = sweep_table(result.reports)
"""
from __future__ import annotations

import logging
from concurrent.futures import ProcessPoolExecutor, as_completed
from dataclasses import dataclass, field
from typing import Any, Optional, Sequence

import pandas as pd
from sympy import divisors, primefactors

import config
from combinatorics.lyndon import divisor_set, lyndon_blocks, lyndon_count, lyndon_plus_count
from complexes.moment_angle import (
    CubicalChainComplex,
    SimplicialComplex,
    betti_numbers,
    build_complex,
    fixed_subcomplex,
    orbit_decomposition,
    polygon_complex,
    polygon_genus_formula,
    orbit_sum_action,
    rotation_action,
    total_betti,
)
from errors import ArgumentError, DomainError, EqcohoError, SizeGuardError, ensure
from groups.cyclic_rep import CyclicGroup, GModule, contragredient
from linalg.fp_matrix import FpMatrix, validate_prime
from spectral.borel_ss import (
    E2Page,
    RowHypotheses,
    Verdict,
    e2_page,
    fixed_point_equivariant_dims,
    g_formality,
    localization_accounting,
    pg_freeness,
)
from utils.run_monitor import analysis_run

log = logging.getLogger(__name__)

SWEEP_COLUMNS = ["n", "p", "k_formal", "g_formal", "pg_verdict", "torsion_dim"]


@dataclass(frozen=True)
class LyndonSummary:
    ell: tuple[tuple[int, int], ...]  # (d, l_d) for d | n
    l_n1: int
    d_np: tuple[int, ...]


@dataclass(frozen=True)
class PolygonReport:
    n: int
    p: int
    betti: tuple[int, ...]
    genus: int
    genus_formula: int
    euler_characteristic: int
    b_X: int
    b_XK: int
    b_XK_closed_form: int
    fixed_orbit_profile: tuple[tuple[int, int], ...]
    orbit_representatives: tuple[str, ...]
    k_formal: bool
    g_formal: bool
    formality_failed: Optional[str]
    e2_window: tuple[tuple[int, ...], ...]  # [q][k]
    eq51_lhs: tuple[tuple[int, int], ...]
    eq51_rhs: int
    degenerate: bool
    h1_cohomology: tuple[tuple[int, int], ...]
    h1_formula: int
    row_hypotheses: tuple[RowHypotheses, ...]
    pg_verdict: Verdict
    free_rank: Optional[int]
    torsion_dim: int
    lyndon_summary: LyndonSummary
    cell_count: int


def _check_pair(n: int, p: int, force: bool) -> int:
    p = validate_prime(p)
    if n < 3:
        raise ArgumentError(f"polygon pipelines need n >= 3, got {n}")
    if n % p:
        raise DomainError(f"p={p} does not divide n={n}")
    if n > config.MAX_N and not force:
        raise SizeGuardError(f"n={n} exceeds the size guard of {config.MAX_N} (pass --force or raise EQCOHO_MAX_N)")
    return p


def homology_rows(
    n: int,
    p: int,
    homology: Sequence[FpMatrix],
    *,
    inverse: Optional[Sequence[FpMatrix]] = None,
    norms: Optional[Sequence[FpMatrix]] = None,
) -> list[GModule]:
    """E2 rows H^q(X): cohomology carries the contragredient of the homology action.

    With the action of g^-1 on homology at hand the contragredient is its
    transpose, and the norm of the dual is the transposed norm.
    """
    if inverse is None:
        return [contragredient(GModule(CyclicGroup(n), p, matrix)) for matrix in homology]
    rows = []
    for q, (forward, backward) in enumerate(zip(homology, inverse)):
        ensure((backward @ forward).is_identity(), f"rotations by 1 and -1 are not inverse on H_{q}")
        norm = None if norms is None else norms[q].transpose()
        rows.append(GModule(CyclicGroup(n), p, backward.transpose(), norm=norm, checked=True))
    return rows


def _polygon_rows(C: CubicalChainComplex, K: SimplicialComplex) -> list[GModule]:
    n = K.n
    forward = rotation_action(C, K, 1)
    inverse = rotation_action(C, K, n - 1)
    return homology_rows(n, C.p, forward.homology, inverse=inverse.homology, norms=orbit_sum_action(C, K))


def polygon_e2_page(n: int, p: int, *, window: Optional[int] = None, force: bool = False) -> E2Page:
    """Only the E2 page, without fixed points or verdicts."""
    p = _check_pair(n, p, force)
    K = polygon_complex(n)
    C = build_complex(K, p, max_vertices=max(n, config.MAX_N) if force else None)
    return e2_page(_polygon_rows(C, K), window)


def build_polygon_report(n: int, p: int, *, window: Optional[int] = None, force: bool = False) -> PolygonReport:
    p = _check_pair(n, p, force)
    K = polygon_complex(n)
    C = build_complex(K, p, max_vertices=max(n, config.MAX_N) if force else None)

    betti = betti_numbers(C)
    euler = C.euler_characteristic()
    ensure(euler == sum((-1) ** k * b for k, b in enumerate(betti)), "Euler characteristic disagrees with Betti numbers")
    ensure(euler == 2 ** (n - 2) * (4 - n), f"Euler characteristic {euler} != 2^(n-2)(4-n)")
    genus_formula = polygon_genus_formula(n)
    ensure(betti[1] == 2 * genus_formula, f"b_1={betti[1]} disagrees with genus {genus_formula}")

    rows = _polygon_rows(C, K)
    page: E2Page = e2_page(rows, window)

    fixed = fixed_subcomplex(C, K, p)
    b_XK = total_betti(fixed.complex)
    closed_form = 2 ** (n // p)
    ensure(b_XK == closed_form, f"b(X^K)={b_XK} != 2^(n/p)={closed_form}")
    orbits = orbit_decomposition(fixed)

    accounting = localization_accounting(page, n, p)
    for k, _ in accounting.lhs:
        ensure(
            fixed_point_equivariant_dims(orbits, n, p, k) == accounting.rhs,
            "orbit count differs from the localized target",
        )

    b_X = sum(betti)
    formality = g_formality(b_X, b_XK, orbits, discrete=fixed.is_discrete)
    torsion_dim = lyndon_plus_count(n)
    freeness = pg_freeness(rows, page, accounting, torsion_dim=torsion_dim)

    d_np = divisor_set(n, p)
    h1_formula = sum(lyndon_count(d) for d in d_np if d != 1)
    h1 = tuple((k, page.dim(k, 1)) for k in range(1, 5))
    if any(value != h1_formula for _, value in h1):
        log.error("n=%d p=%d: H^k(G; H^1) = %s, combinatorial count %d", n, p, h1, h1_formula)

    return PolygonReport(
        n=n,
        p=p,
        betti=betti,
        genus=betti[1] // 2,
        genus_formula=genus_formula,
        euler_characteristic=euler,
        b_X=b_X,
        b_XK=b_XK,
        b_XK_closed_form=closed_form,
        fixed_orbit_profile=tuple((o.size, o.stabilizer) for o in orbits),
        orbit_representatives=tuple(str(o.representative) for o in orbits),
        k_formal=formality.K_formal,
        g_formal=bool(formality.G_formal),
        formality_failed=formality.failed_conjunct,
        e2_window=tuple(tuple(row) for row in page.grid()),
        eq51_lhs=accounting.lhs,
        eq51_rhs=accounting.rhs,
        degenerate=accounting.degenerate,
        h1_cohomology=h1,
        h1_formula=h1_formula,
        row_hypotheses=freeness.hypotheses,
        pg_verdict=freeness.verdict,
        free_rank=freeness.free_rank,
        torsion_dim=torsion_dim,
        lyndon_summary=LyndonSummary(
            ell=tuple((d, lyndon_count(d)) for d in divisors(n)),
            l_n1=lyndon_blocks(n, 1),
            d_np=tuple(d_np),
        ),
        cell_count=C.total_cells,
    )


# ── Sweeps ─────────────────────────────────────────────────


@dataclass
class SweepResult:
    reports: list[PolygonReport] = field(default_factory=list)
    runs: list[dict[str, Any]] = field(default_factory=list)
    failures: list[dict[str, Any]] = field(default_factory=list)

    @property
    def exit_code(self) -> int:
        return max((f["exit_code"] for f in self.failures), default=0)


def sweep_pairs(max_n: int) -> list[tuple[int, int]]:
    return [(n, p) for n in range(3, max_n + 1) for p in primefactors(n)]


def _sweep_pair(n: int, p: int, force: bool) -> tuple[PolygonReport, dict[str, Any]]:
    with analysis_run("polygon_report", n=n, p=p) as run:
        report = build_polygon_report(n, p, force=force)
        run.cells_processed = report.cell_count
    return report, run.as_dict()


def sweep(max_n: int, *, workers: Optional[int] = None, force: bool = False) -> SweepResult:
    """Reports for every (n, p) with 3 <= n <= max_n and p | n, sorted by n then p."""
    if max_n > config.MAX_N and not force:
        raise SizeGuardError(f"max_n={max_n} exceeds the size guard of {config.MAX_N}")
    pairs = sweep_pairs(max_n)
    workers = workers or config.WORKERS
    result = SweepResult()
    collected: dict[tuple[int, int], tuple[PolygonReport, dict[str, Any]]] = {}

    def _record_failure(n: int, p: int, exc: EqcohoError) -> None:
        result.failures.append({"n": n, "p": p, "error": str(exc), "exit_code": exc.exit_code})

    if workers <= 1:
        for n, p in pairs:
            try:
                collected[(n, p)] = _sweep_pair(n, p, force)
            except EqcohoError as exc:
                _record_failure(n, p, exc)
    else:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            future_to_pair = {pool.submit(_sweep_pair, n, p, force): (n, p) for n, p in pairs}
            for future in as_completed(future_to_pair):
                n, p = future_to_pair[future]
                try:
                    collected[(n, p)] = future.result()
                except EqcohoError as exc:
                    _record_failure(n, p, exc)

    for pair in sorted(collected):
        report, run = collected[pair]
        result.reports.append(report)
        result.runs.append(run)
    result.failures.sort(key=lambda f: (f["n"], f["p"]))
    log.info("sweep to n=%d: %d reports, %d failures", max_n, len(result.reports), len(result.failures))
    return result


def sweep_table(reports: list[PolygonReport]) -> pd.DataFrame:
    rows = [{column: getattr(r, column) for column in SWEEP_COLUMNS} for r in reports]
    return pd.DataFrame(rows, columns=SWEEP_COLUMNS)
