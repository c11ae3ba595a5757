import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).resolve().parents[1]))

from errors import ArgumentError, DomainError  # noqa: E402
from groups.classifying_ring import (  # noqa: E402
    composed_restriction_rank,
    poincare_dims,
    restriction_rank,
    ring_of,
    rk_as_pg_module,
)
from groups.cyclic_rep import group_cohomology_dim, trivial_module  # noqa: E402


def test_ring_shapes():
    assert ring_of(2, 2).shape == "POLYNOMIAL_T"
    assert ring_of(6, 3).shape == "EXTERIOR_TENSOR_POLY"
    assert ring_of(3, 2).shape == "TRIVIAL"
    assert ring_of(6, 3).generator_degrees == (1, 2)


def test_poincare_dims_agree_with_trivial_module_cohomology():
    for n, p in [(2, 2), (4, 2), (6, 3), (3, 2), (5, 5)]:
        M = trivial_module(n, p, 1)
        assert poincare_dims(ring_of(n, p), 6) == [group_cohomology_dim(M, k) for k in range(7)]


def test_restriction_ranks_on_c2_in_c4():
    assert restriction_rank("subgroup_inclusion_j", 2, p=2, n=4, m=2) == 1
    assert restriction_rank("subgroup_inclusion_j", 1, p=2, n=4, m=2) == 0
    assert restriction_rank("quotient_projection_s", 1, p=2, n=4, m=2) == 1
    assert restriction_rank("quotient_projection_s", 2, p=2, n=4, m=2) == 0


def test_restriction_rank_hypotheses():
    with pytest.raises(DomainError):
        restriction_rank("subgroup_inclusion_j", 2, p=3, n=6, m=3)
    with pytest.raises(ArgumentError):
        restriction_rank("subgroup_inclusion_j", 2, p=2, n=8, m=3)
    with pytest.raises(ArgumentError):
        restriction_rank("bogus", 2, p=2, n=4, m=2)


def test_composed_restriction():
    assert composed_restriction_rank([8, 4, 2], 2, p=2) == 1
    assert composed_restriction_rank([8, 4, 2], 3, p=2) == 0
    with pytest.raises(ArgumentError):
        composed_restriction_rank([8], 2, p=2)


def test_rk_is_free_of_rank_two():
    for n, p, m in [(4, 2, 2), (6, 3, 3), (6, 3, 6), (9, 3, 3)]:
        summary = rk_as_pg_module(n, p, m)
        assert summary.free_rank == 2
        assert summary.is_free
        assert summary.generator_degrees == (0, 1)
    with pytest.raises(DomainError):
        rk_as_pg_module(6, 3, 2)
