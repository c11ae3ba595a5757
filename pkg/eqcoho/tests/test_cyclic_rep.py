import sys
from pathlib import Path

import numpy as np
import pytest

sys.path.insert(0, str(Path(__file__).resolve().parents[1]))

import config  # noqa: E402
from errors import ArgumentError  # noqa: E402
from groups.cyclic_rep import (  # noqa: E402
    CyclicGroup,
    GModule,
    contragredient,
    direct_sum,
    group_cohomology_dim,
    module_from_json,
    module_to_json,
    norm_operator,
    regular_module,
    restrict,
    sigma_minus_identity,
    freeness_hypotheses,
    trivial_module,
    weighted_sum_observation,
    weighted_sum_operator,
)
from linalg.fp_matrix import FpMatrix, kernel_basis, mat_pow, rank, subspace_leq  # noqa: E402
from spectral.borel_ss import sigma_g_module  # noqa: E402


def swap():
    return GModule(CyclicGroup(4), 2, FpMatrix.from_rows(2, [[0, 1], [1, 0]]))


def test_basic_modules():
    assert trivial_module(4, 2, 1).sigma.to_rows() == [[1]]
    assert regular_module(3, 3).sigma.to_rows() == [[0, 0, 1], [1, 0, 0], [0, 1, 0]]
    assert mat_pow(regular_module(2, 2).sigma, 2).is_identity()


def test_sigma_must_have_order_dividing_n():
    with pytest.raises(ArgumentError):
        GModule(CyclicGroup(3), 2, FpMatrix.from_rows(2, [[0, 1], [1, 0]]))
    with pytest.raises(ArgumentError):
        CyclicGroup(0)


def test_norm_operator():
    assert norm_operator(trivial_module(4, 2, 1)).is_zero()
    for n, p in [(4, 2), (6, 3), (5, 5)]:
        norm = norm_operator(regular_module(n, p))
        assert norm.to_rows() == [[1] * n for _ in range(n)]
        assert rank(norm) == 1
    assert norm_operator(sigma_g_module(5, 5)).is_zero()


def test_group_cohomology_dims():
    M = trivial_module(6, 3, 1)
    assert [group_cohomology_dim(M, k) for k in range(7)] == [1] * 7
    R = regular_module(4, 2)
    assert [group_cohomology_dim(R, k) for k in range(5)] == [1, 0, 0, 0, 0]
    A = sigma_g_module(5, 5)
    assert [group_cohomology_dim(A, k) for k in range(6)] == [1] * 6


def test_semisimple_regime_vanishes_above_degree_zero():
    M = trivial_module(3, 2, 2)
    assert M.semisimple
    assert group_cohomology_dim(M, 0) == 2
    assert group_cohomology_dim(M, 1) == 0
    assert group_cohomology_dim(M, 4) == 0


def test_negative_degree_is_rejected():
    with pytest.raises(ArgumentError):
        group_cohomology_dim(trivial_module(2, 2), -1)


def test_restrict():
    R = restrict(regular_module(4, 2), 2)
    assert R.n == 2
    assert R.sigma.to_rows() == [[0, 0, 1, 0], [0, 0, 0, 1], [1, 0, 0, 0], [0, 1, 0, 0]]
    M = regular_module(6, 3)
    assert restrict(M, 1) is M
    with pytest.raises(ArgumentError):
        restrict(regular_module(4, 2), 3)


def test_contragredient_of_a_permutation_module_is_itself():
    M = regular_module(5, 5)
    assert contragredient(M).sigma == M.sigma


def test_freeness_hypotheses():
    for n, p in [(4, 2), (5, 5), (6, 3), (3, 3)]:
        h = freeness_hypotheses(sigma_g_module(n, p))
        assert h.norm_zero and h.kernel_in_image
    trivial = freeness_hypotheses(trivial_module(4, 2, 1))
    assert (trivial.norm_zero, trivial.kernel_in_image) == (True, False)
    assert freeness_hypotheses(swap()).holds


def test_kernel_in_image_fails_for_even_n_at_p_two_when_four_does_not_divide():
    h = freeness_hypotheses(sigma_g_module(6, 2))
    assert h.norm_zero
    assert not h.kernel_in_image


def test_weighted_sum_operator():
    assert weighted_sum_operator(trivial_module(3, 3, 1)).to_rows() == [[0]]
    assert weighted_sum_operator(trivial_module(2, 2, 1)).to_rows() == [[1]]
    sigma = regular_module(4, 2).sigma
    expected = mat_pow(sigma, 1) + mat_pow(sigma, 3)
    assert weighted_sum_operator(regular_module(4, 2)) == expected


def test_weighted_sum_observation():
    obs = weighted_sum_observation(sigma_g_module(5, 5))
    assert obs["source_dim"] == 1
    assert obs["target_dim"] == 1
    assert 0 <= obs["rank"] <= 1
    assert weighted_sum_observation(trivial_module(3, 2))["weighted_sum_iso"] is True


def test_direct_sum():
    empty = direct_sum([])
    assert empty.dim == 0
    assert group_cohomology_dim(empty, 3) == 0
    total = direct_sum([trivial_module(4, 2), regular_module(4, 2)])
    assert total.dim == 5
    assert group_cohomology_dim(total, 0) == 2
    assert group_cohomology_dim(total, 1) == 1
    with pytest.raises(ArgumentError):
        direct_sum([trivial_module(4, 2), trivial_module(6, 2)])


def test_module_json_round_trip():
    M = sigma_g_module(4, 2)
    data = module_to_json(M)
    assert data["dim"] == 3
    again = module_from_json(data)
    assert again.sigma == M.sigma
    assert again.n == 4
    with pytest.raises(ArgumentError):
        module_from_json({"n": 4, "p": 2})
    with pytest.raises(ArgumentError):
        module_from_json({"n": 4, "p": 2, "dim": 2, "sigma": [[1, 0]]})


def test_sparse_modules_match_dense(monkeypatch):
    dense = [group_cohomology_dim(regular_module(6, 3), k) for k in range(4)]
    dense_h = freeness_hypotheses(sigma_g_module(6, 3))
    monkeypatch.setattr(config, "DENSE_LIMIT", 1)
    monkeypatch.setattr(config, "DENSE_FILL_RATIO", 2.0)
    monkeypatch.setattr(config, "DENSE_ELIMINATION_CELLS", 0)
    R = regular_module(6, 3)
    assert R.sigma.is_sparse
    assert norm_operator(R).to_rows() == [[1] * 6 for _ in range(6)]
    assert [group_cohomology_dim(R, k) for k in range(4)] == dense
    assert freeness_hypotheses(sigma_g_module(6, 3)) == dense_h


def _random_permutation_module(rng, n, p):
    """Disjoint cycles whose lengths divide n, so σ^n = I."""
    lengths = [d for d in range(1, n + 1) if n % d == 0]
    images = []
    while len(images) < 12:
        length = int(rng.choice(lengths))
        start = len(images)
        images.extend(start + (j + 1) % length for j in range(length))
    perm = rng.permutation(len(images))
    inverse = np.argsort(perm)
    conjugated = [int(perm[images[inverse[j]]]) for j in range(len(images))]
    return GModule(CyclicGroup(n), p, FpMatrix.signed_permutation(p, conjugated))


def test_cohomology_structure_on_random_permutation_modules():
    rng = np.random.default_rng(2024)
    for _ in range(200):
        n = int(rng.choice([2, 3, 4, 6, 8, 9]))
        p = int(rng.choice([q for q in (2, 3) if n % q == 0]))
        M = _random_permutation_module(rng, n, p)
        S, N = sigma_minus_identity(M), norm_operator(M)
        assert (N @ S).is_zero()
        assert subspace_leq(S, kernel_basis(N))
        assert rank(N) + kernel_basis(N).cols == M.dim
        dims = [group_cohomology_dim(M, k) for k in range(6)]
        assert dims[1] == dims[3] == dims[5]
        assert dims[2] == dims[4]
        assert dims[0] >= dims[2]


def _unipotent_inverse(nilpotent):
    """(I + X)^-1 = I - X + X^2 - ... for nilpotent X."""
    p, dim = nilpotent.p, nilpotent.rows
    result = FpMatrix.identity(p, dim)
    term = FpMatrix.identity(p, dim)
    for _ in range(dim):
        term = term @ (-nilpotent)
        if term.is_zero():
            break
        result = result + term
    return result


def _block_sigma(rng, n, p, dim):
    """Block diagonal σ with σ^n = I: twisted cycles of length d | n and scalar roots of unity."""
    roots = [z for z in range(1, p) if pow(z, n, p) == 1]
    lengths = [d for d in range(1, n + 1) if n % d == 0]
    arr = np.zeros((dim, dim), dtype=np.int64)
    start = 0
    while start < dim:
        length = min(int(rng.choice(lengths)), dim - start)
        if n % length:
            length = 1
        # the wrap-around entry c satisfies c^(n/length) = 1, so the block has order dividing n
        twists = [z for z in range(1, p) if pow(z, n // length, p) == 1]
        for j in range(length):
            arr[start + (j + 1) % length, start + j] = 1
        arr[start, start + length - 1] = int(rng.choice(twists))
        if length == 1:
            arr[start, start] = int(rng.choice(roots))
        start += length
    return FpMatrix.from_array(p, arr)


def _random_conjugate(rng, D):
    p, dim = D.p, D.rows
    density = rng.uniform(0.05, 0.4)
    upper = np.triu(rng.integers(0, p, size=(dim, dim)) * (rng.random((dim, dim)) < density), 1)
    lower = np.tril(rng.integers(0, p, size=(dim, dim)) * (rng.random((dim, dim)) < density), -1)
    U, L = FpMatrix.from_array(p, upper), FpMatrix.from_array(p, lower)
    ident = FpMatrix.identity(p, dim)
    P = (ident + U) @ (ident + L)
    P_inv = _unipotent_inverse(L) @ _unipotent_inverse(U)
    assert (P @ P_inv).is_identity()
    return P @ D @ P_inv


def test_cohomology_is_invariant_under_conjugation_on_random_modules():
    rng = np.random.default_rng(77)
    for case in range(500):
        n = int(rng.integers(1, 13))
        p = int(rng.choice([2, 3, 5, 7]))
        dim = int(rng.integers(1, 41))
        D = _block_sigma(rng, n, p, dim)
        sigma = _random_conjugate(rng, D)
        block, M = GModule(CyclicGroup(n), p, D), GModule(CyclicGroup(n), p, sigma)
        label = (case, n, p, dim)

        S, N = sigma_minus_identity(M), norm_operator(M)
        assert (N @ S).is_zero(), label
        assert (S @ N).is_zero(), label
        assert N == sum((mat_pow(sigma, k) for k in range(1, n)), FpMatrix.identity(p, dim)), label
        assert rank(S) + kernel_basis(S).cols == dim, label
        assert rank(S) == rank(S.T), label
        assert rank(N) == rank(N.T), label

        dims = [group_cohomology_dim(M, k) for k in range(5)]
        assert dims == [group_cohomology_dim(block, k) for k in range(5)], label
        assert dims[1] == dims[3] and dims[2] == dims[4], label
        assert group_cohomology_dim(contragredient(M), 0) == dims[0], label

        h = freeness_hypotheses(M)
        assert h == freeness_hypotheses(block), label
        assert h.kernel_in_image == subspace_leq(kernel_basis(S), S), label
        assert h.norm_zero == N.is_zero(), label


def test_random_modules_agree_on_sparse_storage(monkeypatch):
    rng = np.random.default_rng(78)
    cases = []
    for _ in range(60):
        n = int(rng.integers(2, 13))
        p = int(rng.choice([2, 3, 5]))
        dim = int(rng.integers(2, 41))
        sigma = _random_conjugate(rng, _block_sigma(rng, n, p, dim))
        M = GModule(CyclicGroup(n), p, sigma)
        expected = ([group_cohomology_dim(M, k) for k in range(4)], freeness_hypotheses(M))
        cases.append((n, p, sigma.to_rows(), expected))

    monkeypatch.setattr(config, "DENSE_LIMIT", 1)
    monkeypatch.setattr(config, "DENSE_FILL_RATIO", 2.0)
    monkeypatch.setattr(config, "DENSE_ELIMINATION_CELLS", 0)
    for n, p, rows, (dims, h) in cases:
        M = GModule(CyclicGroup(n), p, FpMatrix.from_rows(p, rows))
        assert M.sigma.is_sparse
        assert [group_cohomology_dim(M, k) for k in range(4)] == dims
        assert freeness_hypotheses(M) == h


def test_supplied_norm_and_checked_flag():
    R = regular_module(6, 3)
    N = norm_operator(R)
    seeded = GModule(CyclicGroup(6), 3, R.sigma, norm=N, checked=True)
    assert norm_operator(seeded) is N
    assert [group_cohomology_dim(seeded, k) for k in range(4)] == [group_cohomology_dim(R, k) for k in range(4)]
    dual = contragredient(seeded)
    assert norm_operator(dual) == N.T
    with pytest.raises(ArgumentError):
        GModule(CyclicGroup(6), 3, R.sigma, norm=FpMatrix.identity(3, 2))
    with pytest.raises(ArgumentError):
        GModule(CyclicGroup(4), 3, R.sigma)
