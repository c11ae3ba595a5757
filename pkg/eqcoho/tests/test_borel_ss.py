import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).resolve().parents[1]))

from combinatorics.lyndon import Word  # noqa: E402
from complexes.moment_angle import Orbit  # noqa: E402
from errors import ArgumentError, DomainError  # noqa: E402
from groups.cyclic_rep import restrict, freeness_hypotheses, trivial_module  # noqa: E402
from spectral.borel_ss import (  # noqa: E402
    e2_page,
    fixed_point_equivariant_dims,
    g_formality,
    k_formality,
    localization_accounting,
    pg_freeness,
    row_hypotheses,
    sigma_g_module,
)
from spectral.examples import sigma_g_pipeline, swap_module, wedge_swap_pipeline  # noqa: E402
from spectral.polygon import polygon_e2_page  # noqa: E402

SIGMA_G_PAIRS = [(n, p) for n in range(3, 9) for p in (2, 3, 5, 7) if n % p == 0]


def test_point_page_is_one_everywhere():
    page = e2_page([trivial_module(4, 2, 1)])
    assert page.grid(5) == [[1, 1, 1, 1, 1]]
    assert page.dim(40, 0) == 1
    assert page.dim(3, 1) == 0


def test_sigma_g_page_for_n_equal_p():
    page = e2_page([trivial_module(5, 5, 1), sigma_g_module(5, 5)])
    assert page.grid(4) == [[1, 1, 1, 1], [1, 1, 1, 1]]
    assert page.dim(2, 2) == 0


def test_e2_page_errors():
    with pytest.raises(ArgumentError):
        e2_page([])
    with pytest.raises(ArgumentError):
        e2_page([trivial_module(4, 2), trivial_module(6, 2)])


def test_polygon_localization_accounting():
    for n, p, rhs in [(4, 2, 3), (6, 3, 3), (6, 2, 4)]:
        page = polygon_e2_page(n, p)
        accounting = localization_accounting(page, n, p)
        assert accounting.rhs == rhs
        assert all(value == rhs for _, value in accounting.lhs)
        assert accounting.degenerate
        assert accounting.failing_degrees == []


def test_polygon_page_rows():
    page = polygon_e2_page(6, 2)
    assert page.row(1, 5)[1:] == [2, 2, 2, 2]
    assert page.row(0, 4) == [1, 1, 1, 1]


def test_fixed_point_equivariant_dims():
    orbits = [Orbit(1, 6, Word((0,))), Orbit(1, 6, Word((1,))), Orbit(2, 3, Word((0, 1)))]
    assert [fixed_point_equivariant_dims(orbits, 6, 3, k) for k in range(4)] == [3, 3, 3, 3]
    with pytest.raises(ArgumentError):
        fixed_point_equivariant_dims(orbits, 6, 3, -1)


def test_k_formality():
    assert k_formality(2, 2)
    assert k_formality(4, 4)
    assert not k_formality(36, 4)


def test_g_formality_on_discrete_fixed_sets():
    poles = [Orbit(1, 3, Word((0,))), Orbit(1, 3, Word((1,)))]
    assert g_formality(2, 2, poles).G_formal is True

    swapped = [Orbit(1, 4, Word((0,))), Orbit(1, 4, Word((1,))), Orbit(2, 2, Word((0, 1)))]
    report = g_formality(4, 4, swapped)
    assert report.K_formal is True
    assert report.XK_G_formal is False
    assert report.G_formal is False
    assert report.failed_conjunct == "XK_G_formal"

    mismatch = g_formality(36, 8, swapped)
    assert mismatch.G_formal is False
    assert mismatch.failed_conjunct == "K_formal"


def test_g_formality_on_non_discrete_fixed_sets():
    report = g_formality(3, 3, [], discrete=False)
    assert report.status == "UNDECIDED"
    assert report.G_formal is None


def test_row_hypotheses_trivial_row_passes():
    h = row_hypotheses(0, trivial_module(4, 2, 1))
    assert h.trivial_row
    assert h.passes
    assert not h.kernel_in_image


def test_sigma_g_module_satisfies_hypotheses_except_six_two():
    for n, p in SIGMA_G_PAIRS:
        h = freeness_hypotheses(sigma_g_module(n, p))
        assert h.norm_zero
        assert h.kernel_in_image == ((n, p) != (6, 2)), (n, p)


def test_sigma_g_pipeline_is_free_of_rank_four():
    for n, p in SIGMA_G_PAIRS:
        if (n, p) == (6, 2):
            continue
        report = sigma_g_pipeline(n, p)
        assert report.freeness.verdict == "FREE", (n, p)
        assert report.freeness.free_rank == 4
        assert report.accounting.degenerate


def test_sigma_g_six_two_is_undecided():
    report = sigma_g_pipeline(6, 2)
    assert report.accounting.degenerate
    assert report.freeness.verdict == "UNDECIDED"
    assert report.freeness.failed_rows == [1]


def test_sigma_g_restricted_norm_detects_pk_torsion():
    assert sigma_g_pipeline(4, 2).restricted_norm_nonzero is True
    assert sigma_g_pipeline(6, 3).restricted_norm_nonzero is True
    assert sigma_g_pipeline(3, 3).restricted_norm_nonzero is False
    for n, p in [(4, 2), (6, 3), (6, 2), (8, 2)]:
        report = sigma_g_pipeline(n, p)
        assert report.k_level.verdict == "TORSION", (n, p)
        assert report.k_level.torsion_dim_degree1 > 0
    assert sigma_g_pipeline(3, 3).k_level.verdict == "FREE"
    M = sigma_g_module(3, 3)
    assert restrict(M, 1) is M


def test_sigma_g_module_errors():
    with pytest.raises(DomainError):
        sigma_g_module(5, 2)
    with pytest.raises(ArgumentError):
        sigma_g_module(1, 2)


def test_wedge_swap_example():
    report = wedge_swap_pipeline()
    assert report.antidiagonals() == [1, 2, 2, 2, 2, 2]
    assert report.freeness.verdict == "FREE"
    assert report.freeness.free_rank == 4
    assert report.formality.K_formal is True
    assert report.formality.G_formal is False
    assert freeness_hypotheses(swap_module()).holds


def test_pg_freeness_without_torsion_count_is_undecided():
    rows = [trivial_module(6, 2, 1), sigma_g_module(6, 2)]
    page = e2_page(rows)
    accounting = localization_accounting(page, 6, 2, rhs=2)
    assert pg_freeness(rows, page, accounting).verdict == "UNDECIDED"
    assert pg_freeness(rows, page, accounting, torsion_dim=3).verdict == "TORSION"
