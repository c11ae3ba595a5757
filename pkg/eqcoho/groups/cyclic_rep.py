"""
F_p[C_n]-modules and their group cohomology.

A module is the matrix of the generator σ. Cohomology comes from the 2-periodic
cyclic resolution of the trivial module, whose differentials alternate between
σ - I and the norm N = I + σ + ... + σ^(n-1):

    H^0      = ker(σ - I)
    H^even   = ker(σ - I) / im N          (k >= 2)
    H^odd    = ker N / im(σ - I)

When p does not divide n everything above degree 0 vanishes.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass, field
from typing import Any, Callable, Mapping, Optional, Sequence

from errors import ArgumentError, ensure
from linalg.fp_matrix import (
    FpMatrix,
    block_diag,
    kernel_basis,
    mat_pow,
    rank,
    validate_prime,
)

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class CyclicGroup:
    n: int

    def __post_init__(self) -> None:
        if self.n < 1:
            raise ArgumentError(f"cyclic group order must be >= 1, got {self.n}")


@dataclass(frozen=True, eq=False)
class GModule:
    group: CyclicGroup
    p: int
    sigma: FpMatrix
    # Σ σ^k when the caller already has it, e.g. summed on chains
    norm: Optional[FpMatrix] = field(default=None, repr=False, compare=False)
    # σ^n = I is known, e.g. for powers and duals of a validated module
    checked: bool = field(default=False, repr=False, compare=False)
    _cache: dict[str, Any] = field(default_factory=dict, repr=False, compare=False)

    def __post_init__(self) -> None:
        validate_prime(self.p)
        if self.sigma.p != self.p:
            raise ArgumentError(f"sigma is over F_{self.sigma.p}, module over F_{self.p}")
        if not self.sigma.is_square:
            raise ArgumentError(f"sigma must be square, got {self.sigma.shape}")
        if self.norm is not None and self.norm.shape != self.sigma.shape:
            raise ArgumentError(f"norm must be {self.sigma.shape}, got {self.norm.shape}")
        if not self.checked and not mat_pow(self.sigma, self.group.n).is_identity():
            raise ArgumentError(f"sigma^{self.group.n} is not the identity over F_{self.p}")

    @property
    def n(self) -> int:
        return self.group.n

    @property
    def dim(self) -> int:
        return self.sigma.rows

    @property
    def semisimple(self) -> bool:
        return self.n % self.p != 0

    def cached(self, key: str, compute: Callable[[], Any]) -> Any:
        if key not in self._cache:
            self._cache[key] = compute()
        return self._cache[key]

    def __repr__(self) -> str:
        return f"GModule(n={self.n}, p={self.p}, dim={self.dim})"


def trivial_module(n: int, p: int, dim: int = 1) -> GModule:
    return GModule(CyclicGroup(n), validate_prime(p), FpMatrix.identity(p, dim))


def regular_module(n: int, p: int) -> GModule:
    """F_p[C_n] with σ the n-cycle e_i -> e_(i+1 mod n)."""
    sigma = FpMatrix.signed_permutation(p, [(j + 1) % n for j in range(n)])
    return GModule(CyclicGroup(n), validate_prime(p), sigma)


def sigma_minus_identity(M: GModule) -> FpMatrix:
    return M.cached("sigma_minus_identity", lambda: M.sigma - FpMatrix.identity(M.p, M.dim))


def norm_operator(M: GModule) -> FpMatrix:
    """N = Σ_{k=0}^{n-1} σ^k."""

    def compute() -> FpMatrix:
        if M.norm is not None:
            return M.norm
        # binary doubling: with total = Σ_{k<m} σ^k and power = σ^m,
        # m -> 2m and m -> m+1 are one product each
        total = FpMatrix.zeros(M.p, M.dim, M.dim)
        power = FpMatrix.identity(M.p, M.dim)
        for bit in format(M.n, "b"):
            total = total + power @ total
            power = power @ power
            if bit == "1":
                total = total + power
                power = power @ M.sigma
        return total

    return M.cached("norm", compute)


def _check_resolution(M: GModule) -> None:
    """N(σ-I) = (σ-I)N = 0, hence im N ⊆ ker(σ-I) and im(σ-I) ⊆ ker N."""

    def compute() -> bool:
        S, N = sigma_minus_identity(M), norm_operator(M)
        ensure((N @ S).is_zero(), f"N(σ-I) != 0 for {M!r}")
        ensure((S @ N).is_zero(), f"(σ-I)N != 0 for {M!r}")
        return True

    M.cached("resolution_checked", compute)


def _rank_s(M: GModule) -> int:
    return M.cached("rank_sigma_minus_identity", lambda: rank(sigma_minus_identity(M)))


def _ranks(M: GModule) -> tuple[int, int]:
    def compute() -> tuple[int, int]:
        r_s = _rank_s(M)
        r_n = rank(norm_operator(M))
        log.debug("%r: rank(σ-I)=%d rank(N)=%d", M, r_s, r_n)
        return r_s, r_n

    return M.cached("ranks", compute)


def group_cohomology_dim(M: GModule, k: int) -> int:
    if k < 0:
        raise ArgumentError(f"cohomological degree must be >= 0, got {k}")
    if M.dim == 0:
        return 0
    if k > 0 and M.semisimple:
        return 0
    r_s, r_n = _ranks(M)
    invariants = M.dim - r_s
    if k == 0:
        return invariants
    _check_resolution(M)
    if k % 2 == 0:
        value = invariants - r_n
    else:
        value = (M.dim - r_n) - r_s
    ensure(value >= 0, f"negative cohomology dimension {value} for {M!r} in degree {k}")
    return value


def restrict(M: GModule, m: int) -> GModule:
    """Restriction to the subgroup of index m, generated by σ^m."""
    if m < 1 or M.n % m:
        raise ArgumentError(f"index {m} does not divide the group order {M.n}")
    if m == 1:
        return M
    return GModule(CyclicGroup(M.n // m), M.p, mat_pow(M.sigma, m), checked=True)


def contragredient(M: GModule) -> GModule:
    """Dual module: σ acts by (σ^-1)ᵀ = (σ^(n-1))ᵀ."""
    norm = None if M.norm is None else M.norm.transpose()
    return GModule(M.group, M.p, mat_pow(M.sigma, M.n - 1).transpose(), norm=norm, checked=True)


@dataclass(frozen=True)
class FreenessHypotheses:
    norm_zero: bool
    kernel_in_image: bool

    @property
    def holds(self) -> bool:
        return self.norm_zero and self.kernel_in_image


def freeness_hypotheses(M: GModule) -> FreenessHypotheses:
    """Norm vanishes, and ker(σ-I) ⊆ im(σ-I).

    With S = σ-I, dim(ker S ∩ im S) = rank S - rank S², so the kernel sits in
    the image exactly when rank S - rank S² equals dim M - rank S.
    """

    def compute() -> FreenessHypotheses:
        S = sigma_minus_identity(M)
        r_s = _rank_s(M)
        return FreenessHypotheses(
            norm_zero=norm_operator(M).is_zero(),
            kernel_in_image=r_s - rank(S @ S) == M.dim - r_s,
        )

    return M.cached("freeness", compute)


thm32_hypotheses = freeness_hypotheses


def weighted_sum_operator(M: GModule) -> FpMatrix:
    """Σ_{k=1}^{n-1} k·σ^k with k reduced mod p."""
    total = FpMatrix.zeros(M.p, M.dim, M.dim)
    power = FpMatrix.identity(M.p, M.dim)
    for k in range(1, M.n):
        power = M.sigma @ power
        if k % M.p:
            total = total + power.scale(k)
    return total


def weighted_sum_observation(M: GModule) -> dict[str, Any]:
    """How the weighted sum acts from the odd to the even cohomology.

    (σ-I)·W = n·I - N, so W sends ker N into ker(σ-I) and im(σ-I) into im N
    when p | n; the induced map ker N / im(σ-I) -> ker(σ-I) / im N is recorded
    together with its rank. This is an observation about one module, not an
    invariant.
    """
    if M.semisimple:
        return {"source_dim": 0, "target_dim": 0, "rank": 0, "weighted_sum_iso": True}
    W = weighted_sum_operator(M)
    S, N = sigma_minus_identity(M), norm_operator(M)
    ensure(
        (S @ W) == (FpMatrix.identity(M.p, M.dim).scale(M.n) - N),
        f"(σ-I)W != nI - N for {M!r}",
    )
    kernel_n = kernel_basis(N)
    image = W @ kernel_n
    r_n = rank(N)
    induced_rank = rank(FpMatrix.hstack([N, image])) - r_n if M.dim else 0
    source_dim = group_cohomology_dim(M, 1)
    target_dim = group_cohomology_dim(M, 2)
    return {
        "source_dim": source_dim,
        "target_dim": target_dim,
        "rank": induced_rank,
        "weighted_sum_iso": induced_rank == source_dim == target_dim,
    }


def direct_sum(modules: Sequence[GModule], n: Optional[int] = None, p: Optional[int] = None) -> GModule:
    """Block-diagonal sum. The empty sum needs n and p (defaulting to the zero module over C_1, F_2)."""
    if not modules:
        return GModule(CyclicGroup(n or 1), validate_prime(p or 2), FpMatrix.zeros(p or 2, 0, 0))
    n0, p0 = modules[0].n, modules[0].p
    for M in modules:
        if (M.n, M.p) != (n0, p0):
            raise ArgumentError(f"cannot sum modules over (n={M.n}, p={M.p}) and (n={n0}, p={p0})")
    if (n is not None and n != n0) or (p is not None and p != p0):
        raise ArgumentError(f"summands are over (n={n0}, p={p0}), requested (n={n}, p={p})")
    return GModule(CyclicGroup(n0), p0, block_diag(p0, [M.sigma for M in modules]))


# ── JSON form ──────────────────────────────────────────────


def module_from_json(data: Mapping[str, Any]) -> GModule:
    """{"n": int, "p": int, "dim": int, "sigma": [[int]]}, sigma row-major."""
    missing = [key for key in ("n", "p", "dim", "sigma") if key not in data]
    if missing:
        raise ArgumentError(f"module JSON is missing keys: {', '.join(missing)}")
    try:
        n, dim = int(data["n"]), int(data["dim"])
        rows = [[int(v) for v in row] for row in data["sigma"]]
    except (TypeError, ValueError) as exc:
        raise ArgumentError(f"module JSON needs integers for n, dim and sigma: {exc}") from exc
    p = validate_prime(data["p"])
    if len(rows) != dim or any(len(row) != dim for row in rows):
        raise ArgumentError(f"sigma must be {dim}x{dim}")
    return GModule(CyclicGroup(n), p, FpMatrix.from_rows(p, rows, n_cols=dim))


def module_to_json(M: GModule) -> dict[str, Any]:
    return {"n": M.n, "p": M.p, "dim": M.dim, "sigma": M.sigma.to_rows()}
