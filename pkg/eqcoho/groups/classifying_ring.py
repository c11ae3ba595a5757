"""
Descriptors for R_G = H*(BC_n; F_p) and its polynomial part P_G = H^{2*}(BC_n; F_p).

Only dimensions, ranks and shapes are modelled:
- p | n, (n, p) != (2, 2): F_p[x, y]/(x^2), |x| = 1, |y| = 2
- n = p = 2:              F_2[t], |t| = 1, P_G generated by t^2
- p ∤ n:                  F_p concentrated in degree 0
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Literal, Sequence

from errors import ArgumentError, DomainError
from linalg.fp_matrix import validate_prime

RingShape = Literal["POLYNOMIAL_T", "EXTERIOR_TENSOR_POLY", "TRIVIAL"]
RestrictionKind = Literal["subgroup_inclusion_j", "quotient_projection_s"]

RESTRICTION_KINDS: tuple[str, ...] = ("subgroup_inclusion_j", "quotient_projection_s")


@dataclass(frozen=True)
class ClassifyingRing:
    n: int
    p: int
    shape: RingShape
    generator_degrees: tuple[int, ...]

    def dim_in_degree(self, k: int) -> int:
        if k < 0:
            return 0
        if self.shape == "TRIVIAL":
            return 1 if k == 0 else 0
        return 1


@dataclass(frozen=True)
class PGModuleSummary:
    free_rank: int
    torsion_dims: tuple[int, ...] = ()
    generator_degrees: tuple[int, ...] = ()

    @property
    def is_free(self) -> bool:
        return not any(self.torsion_dims)


def ring_of(n: int, p: int) -> ClassifyingRing:
    if n < 1:
        raise ArgumentError(f"group order must be >= 1, got {n}")
    p = validate_prime(p)
    if n % p:
        return ClassifyingRing(n, p, "TRIVIAL", ())
    if n == 2 and p == 2:
        return ClassifyingRing(n, p, "POLYNOMIAL_T", (1,))
    return ClassifyingRing(n, p, "EXTERIOR_TENSOR_POLY", (1, 2))


def poincare_dims(ring: ClassifyingRing, top: int) -> list[int]:
    """Per-degree dimensions in degrees 0..top."""
    return [ring.dim_in_degree(k) for k in range(top + 1)]


def _check_extension(p: int, n: int, m: int) -> None:
    p = validate_prime(p)
    if m < 1 or n % m:
        raise ArgumentError(f"subgroup order {m} does not divide {n}")
    if m % p or (n // m) % p:
        raise DomainError(
            f"restriction ranks need p | |K| and p | |G/K|; got p={p}, |K|={m}, |G/K|={n // m}"
        )


def restriction_rank(kind: RestrictionKind, k: int, *, p: int, n: int, m: int) -> int:
    """Rank in degree k of j*: R_G -> R_K (K of order m) or s*: R_{G/K} -> R_G.

    j* kills the degree-1 class and is an isomorphism on even degrees;
    s* is an isomorphism in degrees <= 1 and zero above.
    """
    if kind not in RESTRICTION_KINDS:
        raise ArgumentError(f"unknown restriction kind {kind!r}")
    _check_extension(p, n, m)
    if k < 0:
        return 0
    if kind == "subgroup_inclusion_j":
        return 1 if k % 2 == 0 else 0
    return 1 if k <= 1 else 0


def composed_restriction_rank(orders: Sequence[int], k: int, *, p: int) -> int:
    """Rank of the composite j* along a chain of subgroups with orders[0] ⊇ orders[1] ⊇ ..."""
    if len(orders) < 2:
        raise ArgumentError("a restriction chain needs at least two groups")
    result = 1
    for big, small in zip(orders, orders[1:]):
        result = min(result, restriction_rank("subgroup_inclusion_j", k, p=p, n=big, m=small))
    return result


def rk_as_pg_module(n: int, p: int, m: int, *, window: int = 16) -> PGModuleSummary:
    """R_K (K of order m) as a module over P_G.

    P_G acts through j*, which hits the degree-2 generator of R_K, so the
    Hilbert series of R_K times (1 - t^2) lists generators; a free module leaves
    a finite polynomial with nonnegative coefficients.
    """
    p = validate_prime(p)
    if m < 1 or n % m:
        raise ArgumentError(f"subgroup order {m} does not divide {n}")
    if m % p:
        raise DomainError(f"p={p} does not divide the subgroup order {m}")
    dims = poincare_dims(ring_of(m, p), window + 2)
    generators = [dims[k] - (dims[k - 2] if k >= 2 else 0) for k in range(window + 3)]
    if any(g < 0 for g in generators):
        raise DomainError(f"R_K for (n={n}, p={p}, m={m}) is not free over P_G")
    degrees = tuple(k for k, g in enumerate(generators) for _ in range(g))
    return PGModuleSummary(free_rank=sum(generators), torsion_dims=(), generator_degrees=degrees)
