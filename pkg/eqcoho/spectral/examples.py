"""
Worked examples with hand-built E2 rows.

- sigma-g:    C_n acting on the suspension of G (a wedge of n-1 circles) by
              left translation; both poles are fixed by G.
- wedge-swap: C_4 acting on S^1 v S^1 over F_2, the generator swapping the
              circles, so the subgroup of order 2 acts trivially.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

from combinatorics.lyndon import Word
from complexes.moment_angle import Orbit
from groups.cyclic_rep import (
    CyclicGroup,
    GModule,
    norm_operator,
    restrict,
    trivial_module,
)
from linalg.fp_matrix import FpMatrix, rank
from spectral.borel_ss import (
    E2Page,
    FormalityReport,
    LocalizationAccounting,
    PGFreenessReport,
    e2_page,
    g_formality,
    localization_accounting,
    pg_freeness,
    sigma_g_module,
)

EXAMPLE_NAMES: tuple[str, ...] = ("sigma-g", "wedge-swap")


@dataclass(frozen=True, eq=False)
class ExampleReport:
    name: str
    n: int
    p: int
    b_X: int
    b_XK: int
    page: E2Page
    accounting: LocalizationAccounting
    freeness: PGFreenessReport
    formality: FormalityReport
    k_level: Optional[PGFreenessReport] = None
    restricted_norm_nonzero: Optional[bool] = None

    def antidiagonals(self, count: int = 6) -> list[int]:
        return [self.page.antidiagonal(t) for t in range(count)]


def sigma_g_pipeline(n: int, p: int, window: Optional[int] = None) -> ExampleReport:
    rows = [trivial_module(n, p, 1), sigma_g_module(n, p)]
    page = e2_page(rows, window)
    # both poles are G-fixed: two copies of R_G
    accounting = localization_accounting(page, n, p, rhs=2)
    freeness = pg_freeness(rows, page, accounting)
    poles = [Orbit(1, n, Word((0,))), Orbit(1, n, Word((1,)))]
    formality = g_formality(n, 2, poles)

    index = n // p
    k_rows = [restrict(M, index) for M in rows]
    k_page = e2_page(k_rows, window)
    # a nonzero restricted norm on H^1 gives P_K-torsion of that rank
    restricted_norm_rank = rank(norm_operator(k_rows[1]))
    k_level = pg_freeness(
        k_rows, k_page, localization_accounting(k_page, p, p, rhs=2), torsion_dim=restricted_norm_rank
    )
    return ExampleReport(
        name="sigma-g",
        n=n,
        p=p,
        b_X=n,
        b_XK=2,
        page=page,
        accounting=accounting,
        freeness=freeness,
        formality=formality,
        k_level=k_level,
        restricted_norm_nonzero=restricted_norm_rank > 0,
    )


def swap_module() -> GModule:
    return GModule(CyclicGroup(4), 2, FpMatrix.from_rows(2, [[0, 1], [1, 0]]))


def wedge_swap_pipeline(window: Optional[int] = None) -> ExampleReport:
    rows = [trivial_module(4, 2, 1), swap_module()]
    page = e2_page(rows, window)
    # H*_G(X) = R_G + R_K[1]: 1 in degree 0, 2 in every degree above
    accounting = localization_accounting(page, 4, 2, rhs=2)
    freeness = pg_freeness(rows, page, accounting)
    # K acts trivially, so X^K = X and b(X^K) = b(X); G still swaps the circles
    formality = g_formality(3, 3, [], discrete=False, fixed_action_trivial=False)
    return ExampleReport(
        name="wedge-swap",
        n=4,
        p=2,
        b_X=3,
        b_XK=3,
        page=page,
        accounting=accounting,
        freeness=freeness,
        formality=formality,
    )
