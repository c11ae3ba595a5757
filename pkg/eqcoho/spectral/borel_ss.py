"""
E2 pages of the Serre spectral sequence of X -> X_hG -> BG, localization
accounting, and the formality / P_G-freeness verdicts built on them.

Degeneration is certified by dimensions only: once every antidiagonal of E2
past dim X already has the dimension of the localized target H*_G(X^K), no
differential can be nonzero.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import Literal, Optional, Sequence

import config
from combinatorics.lyndon import necklace_count
from complexes.moment_angle import Orbit
from errors import ArgumentError, DomainError, ensure
from groups.cyclic_rep import (
    CyclicGroup,
    GModule,
    group_cohomology_dim,
    freeness_hypotheses,
)
from linalg.fp_matrix import FpMatrix, validate_prime

log = logging.getLogger(__name__)

Verdict = Literal["FREE", "TORSION", "UNDECIDED"]
FormalityStatus = Literal["DECIDED", "UNDECIDED"]


# ── E2 pages ───────────────────────────────────────────────


@dataclass(frozen=True, eq=False)
class E2Page:
    """dims[k][q] = dim H^k(G; H^q(X)) for 0 <= k < window; 2-periodic in k >= 1."""

    n: int
    p: int
    rows: tuple[GModule, ...]
    window: int
    dims: tuple[tuple[int, ...], ...]

    @property
    def top_row(self) -> int:
        return len(self.rows) - 1

    def dim(self, k: int, q: int) -> int:
        if k < 0 or not 0 <= q < len(self.rows):
            return 0
        if k >= self.window:
            k = 1 + (k - 1) % 2
        return self.dims[k][q]

    def antidiagonal(self, t: int) -> int:
        return sum(self.dim(t - q, q) for q in range(len(self.rows)))

    def row(self, q: int, cols: Optional[int] = None) -> list[int]:
        return [self.dim(k, q) for k in range(cols or self.window)]

    def grid(self, cols: Optional[int] = None) -> list[list[int]]:
        """grid[q][k], rows bottom-up."""
        return [self.row(q, cols) for q in range(len(self.rows))]


def e2_page(rows: Sequence[GModule], window: Optional[int] = None) -> E2Page:
    if not rows:
        raise ArgumentError("an E2 page needs at least one row")
    n, p = rows[0].n, rows[0].p
    for M in rows:
        if (M.n, M.p) != (n, p):
            raise ArgumentError(f"row over (n={M.n}, p={M.p}) on a page over (n={n}, p={p})")
    window = max(window or config.DEFAULT_WINDOW, len(rows) + 2)
    dims = tuple(
        tuple(group_cohomology_dim(M, k) for M in rows)
        for k in range(window)
    )
    for q, M in enumerate(rows):
        ensure(
            all(dims[k][q] == dims[k - 2][q] for k in range(3, window)),
            f"row {q} is not 2-periodic",
        )
    return E2Page(n, p, tuple(rows), window, dims)


# ── Localization ───────────────────────────────────────────


@dataclass(frozen=True)
class LocalizationAccounting:
    lhs: tuple[tuple[int, int], ...]
    rhs: int
    degenerate: bool

    @property
    def failing_degrees(self) -> list[int]:
        return [k for k, value in self.lhs if value != self.rhs]


def localization_accounting(
    page: E2Page,
    n: int,
    p: int,
    rhs: Optional[int] = None,
    degrees: Optional[Sequence[int]] = None,
) -> LocalizationAccounting:
    """Compare antidiagonal totals past dim X with dim H^k_G(X^K).

    Without rhs the fixed set is taken to be the polygon one, (S^0)^(n/p) with
    the residual rotation, whose equivariant cohomology has necklace_count(n/p)
    dimensions in every degree.
    """
    if rhs is None:
        if n % p:
            raise DomainError(f"p={p} does not divide n={n}")
        rhs = necklace_count(n // p)
    if degrees is None:
        start = page.top_row + 1
        degrees = range(start, start + 4)
    lhs = tuple((k, page.antidiagonal(k)) for k in degrees)
    degenerate = all(value == rhs for _, value in lhs)
    if not degenerate:
        log.info("localization does not balance for n=%d p=%d: lhs=%s rhs=%d", n, p, lhs, rhs)
    return LocalizationAccounting(lhs, rhs, degenerate)


def fixed_point_equivariant_dims(orbits: Sequence[Orbit], n: int, p: int, k: int) -> int:
    """dim H^k_G(X^K) for a discrete fixed set: one R_{G_w} per orbit, each 1-dimensional in every degree."""
    if k < 0:
        raise ArgumentError(f"degree must be >= 0, got {k}")
    for orbit in orbits:
        ensure(orbit.stabilizer % p == 0, f"stabilizer of order {orbit.stabilizer} is prime to p={p}")
    return len(orbits)


# ── Formality ──────────────────────────────────────────────


def k_formality(b_X: int, b_XK: int) -> bool:
    return b_X == b_XK


@dataclass(frozen=True)
class FormalityReport:
    b_X: int
    b_XK: int
    K_formal: bool
    XK_G_formal: Optional[bool]
    G_formal: Optional[bool]
    status: FormalityStatus = "DECIDED"
    failed_conjunct: Optional[str] = None


def g_formality(
    b_X: int,
    b_XK: int,
    orbits: Sequence[Orbit],
    *,
    discrete: bool = True,
    fixed_action_trivial: Optional[bool] = None,
) -> FormalityReport:
    """X is G-formal iff it is K-formal and X^K is G-formal.

    A discrete X^K is G-formal exactly when G fixes every point of it. For a
    non-discrete X^K only a nontrivial G-action on H*(X^K) decides (negatively);
    pass it as fixed_action_trivial=False.
    """
    k_formal = k_formality(b_X, b_XK)
    if not discrete:
        if not k_formal:
            return FormalityReport(b_X, b_XK, False, None, False, "DECIDED", "K_formal")
        if fixed_action_trivial is False:
            return FormalityReport(b_X, b_XK, True, False, False, "DECIDED", "XK_G_formal")
        log.warning("fixed set is not discrete; G-formality of X^K is not evaluated")
        return FormalityReport(b_X, b_XK, True, None, None, "UNDECIDED", None)
    xk_formal = all(orbit.size == 1 for orbit in orbits)
    failed = None
    if not k_formal:
        failed = "K_formal"
    elif not xk_formal:
        failed = "XK_G_formal"
    return FormalityReport(b_X, b_XK, k_formal, xk_formal, k_formal and xk_formal, "DECIDED", failed)


# ── P_G-freeness ───────────────────────────────────────────


@dataclass(frozen=True)
class RowHypotheses:
    q: int
    trivial_row: bool
    norm_zero: bool
    kernel_in_image: bool

    @property
    def passes(self) -> bool:
        return self.trivial_row or (self.norm_zero and self.kernel_in_image)


@dataclass(frozen=True)
class PGFreenessReport:
    hypotheses: tuple[RowHypotheses, ...]
    degenerate_at_E2: bool
    verdict: Verdict
    free_rank: Optional[int] = None
    torsion_dim_degree1: Optional[int] = None

    @property
    def failed_rows(self) -> list[int]:
        return [h.q for h in self.hypotheses if not h.passes]


def row_hypotheses(q: int, M: GModule) -> RowHypotheses:
    """A row on which σ is the identity is R_G^dim, already free over P_G."""
    h = freeness_hypotheses(M)
    trivial = M.sigma.is_identity() and not M.semisimple
    return RowHypotheses(q, trivial, h.norm_zero, h.kernel_in_image)


def pg_freeness(
    rows: Sequence[GModule],
    page: E2Page,
    accounting: LocalizationAccounting,
    *,
    torsion_dim: Optional[int] = None,
) -> PGFreenessReport:
    hypotheses = tuple(row_hypotheses(q, M) for q, M in enumerate(rows))
    if all(h.passes for h in hypotheses) and accounting.degenerate:
        # eventual antidiagonal dimension over one period of the degree-2 generator
        t = page.top_row + 1
        free_rank = page.antidiagonal(t) + page.antidiagonal(t + 1)
        return PGFreenessReport(hypotheses, True, "FREE", free_rank, torsion_dim)
    if torsion_dim is not None and torsion_dim > 0:
        return PGFreenessReport(hypotheses, accounting.degenerate, "TORSION", None, torsion_dim)
    log.warning(
        "P_G-freeness undecided for n=%d p=%d (failed rows %s, degenerate=%s)",
        page.n, page.p, [h.q for h in hypotheses if not h.passes], accounting.degenerate,
    )
    return PGFreenessReport(hypotheses, accounting.degenerate, "UNDECIDED", None, torsion_dim)


# ── Suspension of G ────────────────────────────────────────


def sigma_g_module(n: int, p: int) -> GModule:
    """H^1 of the suspension of G, acted on by left translation.

    Basis e_1..e_(n-1) with σe_i = e_(i+1) and σe_(n-1) = -(e_1 + ... + e_(n-1)),
    the companion matrix of 1 + x + ... + x^(n-1).
    """
    p = validate_prime(p)
    if n < 2:
        raise ArgumentError(f"the suspension example needs n >= 2, got {n}")
    if n % p:
        raise DomainError(f"p={p} does not divide n={n}")
    dim = n - 1
    columns = [{i + 1: 1} for i in range(dim - 1)]
    columns.append({r: -1 for r in range(dim)})
    return GModule(CyclicGroup(n), p, FpMatrix.from_columns(p, dim, columns))
