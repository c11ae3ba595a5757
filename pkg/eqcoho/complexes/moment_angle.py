"""
Cubical chain complexes of polyhedral products Z_K(D^1, S^0).

A cell is a face σ of K together with a sign ε_i ∈ {+1, -1} for every vertex
i outside σ: the product of intervals on σ and endpoints elsewhere. Signs are
packed into an int mask (bit i-1 set means ε_i = +1; bits on σ are zero).

Boundary of (σ, ε) with σ = (i_0 < i_1 < ...):

    ∂(σ, ε) = Σ_j (-1)^j [ (σ \\ i_j, ε ∪ {i_j → +}) - (σ \\ i_j, ε ∪ {i_j → -}) ]

Cells of each dimension are ordered by face tuple, then by mask.
"""
from __future__ import annotations

import heapq
import itertools
import logging
from dataclasses import dataclass, field
from functools import cached_property
from math import gcd
from typing import Any, Iterable, Mapping, Optional, Sequence

import networkx as nx

import config
from combinatorics.lyndon import Word, necklace_count, necklace_representative, primitive_period
from errors import ArgumentError, SizeGuardError, SymmetryError, ensure
from linalg.fp_matrix import (
    Column,
    ColumnEchelon,
    FpMatrix,
    kernel_basis,
    rank,
    validate_prime,
)

log = logging.getLogger(__name__)

Face = tuple[int, ...]


# ── Simplicial complexes ───────────────────────────────────


@dataclass(frozen=True)
class SimplicialComplex:
    """Vertices 1..n, stored by maximal faces. Every singleton is a face."""

    n: int
    facets: frozenset[frozenset[int]]

    def __post_init__(self) -> None:
        if self.n < 0:
            raise ArgumentError(f"vertex count must be >= 0, got {self.n}")
        for facet in self.facets:
            bad = [v for v in facet if not 1 <= v <= self.n]
            if bad:
                raise ArgumentError(f"facet {sorted(facet)} has vertices outside 1..{self.n}")
        faces = set(self.facets) | {frozenset({i}) for i in range(1, self.n + 1)}
        maximal = frozenset(f for f in faces if not any(f < g for g in faces))
        object.__setattr__(self, "facets", maximal)

    @classmethod
    def from_facets(cls, n: int, facets: Iterable[Iterable[int]]) -> "SimplicialComplex":
        return cls(n, frozenset(frozenset(int(v) for v in f) for f in facets))

    @classmethod
    def from_json(cls, data: Mapping[str, Any]) -> "SimplicialComplex":
        """{"n": int, "facets": [[int]]}, 1-based vertices."""
        if "n" not in data or "facets" not in data:
            raise ArgumentError("complex JSON needs keys 'n' and 'facets'")
        return cls.from_facets(int(data["n"]), data["facets"])

    def to_json(self) -> dict[str, Any]:
        return {"n": self.n, "facets": sorted(sorted(f) for f in self.facets)}

    def contains(self, face: Iterable[int]) -> bool:
        face = frozenset(face)
        return any(face <= facet for facet in self.facets)

    @cached_property
    def faces_by_dim(self) -> list[list[Face]]:
        """faces_by_dim[d] lists faces with d vertices (the empty face at d = 0), sorted."""
        found: set[Face] = set()
        for facet in self.facets:
            ordered = sorted(facet)
            for r in range(len(ordered) + 1):
                found.update(itertools.combinations(ordered, r))
        top = max((len(f) for f in found), default=0)
        return [sorted(f for f in found if len(f) == d) for d in range(top + 1)]

    def is_invariant_under(self, permutation: Sequence[int]) -> bool:
        """permutation[i-1] is the image of vertex i."""
        return all(self.contains(permutation[v - 1] for v in facet) for facet in self.facets)


def polygon_complex(n: int) -> SimplicialComplex:
    """Boundary of the n-gon: facets {i, i+1} and {1, n}."""
    if n < 3:
        raise ArgumentError(f"a polygon needs at least 3 vertices, got {n}")
    facets = [(i, i + 1) for i in range(1, n)] + [(1, n)]
    return SimplicialComplex.from_facets(n, facets)


# ── Cells and chain complexes ──────────────────────────────


@dataclass(frozen=True, order=True)
class CubicalCell:
    face: Face
    mask: int

    @property
    def dim(self) -> int:
        return len(self.face)


@dataclass(frozen=True, eq=False)
class CubicalChainComplex:
    """cells[d] are the d-cells; boundaries[d] is ∂_d: C_d -> C_(d-1), with boundaries[0] empty."""

    p: int
    K: SimplicialComplex
    cells: tuple[tuple[CubicalCell, ...], ...]
    index: tuple[dict[CubicalCell, int], ...]
    boundaries: tuple[FpMatrix, ...]
    _cache: dict[Any, Any] = field(default_factory=dict, repr=False)

    @property
    def n(self) -> int:
        return self.K.n

    @property
    def top_dim(self) -> int:
        return len(self.cells) - 1

    def cell_count(self, d: int) -> int:
        return len(self.cells[d]) if 0 <= d <= self.top_dim else 0

    @property
    def cell_counts(self) -> tuple[int, ...]:
        return tuple(len(c) for c in self.cells)

    @property
    def total_cells(self) -> int:
        return sum(self.cell_counts)

    def boundary(self, d: int) -> FpMatrix:
        if 1 <= d <= self.top_dim:
            return self.boundaries[d]
        return FpMatrix.zeros(self.p, self.cell_count(d - 1), self.cell_count(d))

    def boundary_rank(self, d: int) -> int:
        if not 1 <= d <= self.top_dim:
            return 0
        key = ("rank", d)
        if key not in self._cache:
            if d == 1:
                graph, _ = _one_skeleton(self)
                self._cache[key] = self.cell_count(0) - nx.number_connected_components(graph)
            elif d == self.top_dim and _is_thin(self, d):
                self._cache[key] = self.cell_count(d) - _top_cycles(self, d).dim
            else:
                self._cache[key] = rank(self.boundaries[d])
            log.debug("rank ∂_%d = %d (n=%d, p=%d)", d, self._cache[key], self.n, self.p)
        return self._cache[key]

    def euler_characteristic(self) -> int:
        return sum((-1) ** d * count for d, count in enumerate(self.cell_counts))

    def __repr__(self) -> str:
        return f"CubicalChainComplex(n={self.n}, p={self.p}, cells={self.cell_counts})"


def _rotate_mask(mask: int, shift: int, n: int) -> int:
    """Move bit i-1 to bit (i-1+shift) mod n."""
    if n == 0:
        return mask
    shift %= n
    full = (1 << n) - 1
    return ((mask << shift) | (mask >> (n - shift))) & full


def _boundary_column(cell: CubicalCell, below: Mapping[CubicalCell, int]) -> Column:
    column: Column = {}
    for j, i in enumerate(cell.face):
        rest = cell.face[:j] + cell.face[j + 1:]
        sign = 1 if j % 2 == 0 else -1
        column[below[CubicalCell(rest, cell.mask | (1 << (i - 1)))]] = sign
        column[below[CubicalCell(rest, cell.mask)]] = -sign
    return column


def _assemble(K: SimplicialComplex, p: int, cells_by_dim: list[list[CubicalCell]]) -> CubicalChainComplex:
    while len(cells_by_dim) > 1 and not cells_by_dim[-1]:
        cells_by_dim.pop()
    cells = tuple(tuple(sorted(cs)) for cs in cells_by_dim)
    index = tuple({cell: k for k, cell in enumerate(cs)} for cs in cells)
    boundaries = [FpMatrix.zeros(p, 0, len(cells[0]))]
    for d in range(1, len(cells)):
        columns = [_boundary_column(cell, index[d - 1]) for cell in cells[d]]
        boundaries.append(FpMatrix.from_columns(p, len(cells[d - 1]), columns))
    for d in range(2, len(cells)):
        ensure((boundaries[d - 1] @ boundaries[d]).is_zero(), f"∂_{d - 1}∂_{d} != 0 on {K.n} vertices")
    return CubicalChainComplex(p, K, cells, index, tuple(boundaries))


def build_complex(K: SimplicialComplex, p: int, *, max_vertices: Optional[int] = None) -> CubicalChainComplex:
    p = validate_prime(p)
    limit = config.MAX_N if max_vertices is None else max_vertices
    if K.n > limit:
        raise SizeGuardError(f"{K.n} vertices exceeds the size guard of {limit} (EQCOHO_MAX_N)")
    cells_by_dim: list[list[CubicalCell]] = []
    for d, faces in enumerate(K.faces_by_dim):
        cells: list[CubicalCell] = []
        for face in faces:
            free = [i for i in range(1, K.n + 1) if i not in face]
            for choice in range(2 ** len(free)):
                mask = 0
                for b, i in enumerate(free):
                    if (choice >> b) & 1:
                        mask |= 1 << (i - 1)
                cells.append(CubicalCell(face, mask))
        ensure(len(cells) == len(faces) * 2 ** (K.n - d), f"cell count mismatch in dimension {d}")
        cells_by_dim.append(cells)
    C = _assemble(K, p, cells_by_dim)
    log.debug("built %r", C)
    return C


def betti(C: CubicalChainComplex, k: int) -> int:
    if not 0 <= k <= C.top_dim:
        return 0
    return C.cell_count(k) - C.boundary_rank(k) - C.boundary_rank(k + 1)


def betti_numbers(C: CubicalChainComplex) -> tuple[int, ...]:
    return tuple(betti(C, k) for k in range(C.top_dim + 1))


def total_betti(C: CubicalChainComplex) -> int:
    return sum(betti_numbers(C))


def polygon_genus_formula(n: int) -> int:
    """Genus of Z_K(D^1, S^0) for the n-gon boundary, 1 + (n-4)·2^(n-3)."""
    if n < 3:
        raise ArgumentError(f"a polygon needs at least 3 vertices, got {n}")
    return 1 + (n - 4) * 2 ** (n - 3)


# ── Homology bases ─────────────────────────────────────────


def _add_into(target: Column, coeff: int, source: Mapping[int, int], p: int) -> None:
    for k, v in source.items():
        new = (target.get(k, 0) + coeff * v) % p
        if new:
            target[k] = new
        else:
            target.pop(k, None)


class _HomologyBasis:
    """A fixed basis of H_q: cycle representatives and a coordinate map on cycles."""

    representatives: list[Column]

    @property
    def dim(self) -> int:
        return len(self.representatives)

    def coordinates(self, cycle: Mapping[int, int]) -> Column:
        raise NotImplementedError


def _one_skeleton(C: CubicalChainComplex) -> tuple[nx.Graph, list[tuple[int, int]]]:
    """Graph on the vertex cells, plus the (+, -) endpoints of every edge cell."""
    key = ("one_skeleton",)
    if key not in C._cache:
        graph = nx.Graph()
        graph.add_nodes_from(range(C.cell_count(0)))
        ends: list[tuple[int, int]] = []
        for e, cell in enumerate(C.cells[1] if C.top_dim >= 1 else ()):
            bit = 1 << (cell.face[0] - 1)
            plus = C.index[0][CubicalCell((), cell.mask | bit)]
            minus = C.index[0][CubicalCell((), cell.mask)]
            ends.append((plus, minus))
            if not graph.has_edge(plus, minus):
                graph.add_edge(plus, minus, cell=e)
        C._cache[key] = (graph, ends)
    return C._cache[key]


class _ComponentBasis(_HomologyBasis):
    """H_0: one class per connected component, represented by its smallest vertex."""

    def __init__(self, C: CubicalChainComplex) -> None:
        self.p = C.p
        graph, _ = _one_skeleton(C)
        components = sorted(nx.connected_components(graph), key=min)
        self._component = {v: k for k, members in enumerate(components) for v in members}
        self.representatives = [{min(members): 1} for members in components]

    def coordinates(self, cycle: Mapping[int, int]) -> Column:
        coords: Column = {}
        for v, value in cycle.items():
            _add_into(coords, value, {self._component[v]: 1}, self.p)
        return coords


_OUTER = -1


class _TreeCycleBasis(_HomologyBasis):
    """H_1 from a BFS spanning forest of the 1-skeleton and a dual forest on 2-cells.

    A 1-cycle is the sum of the fundamental cycles of its non-tree edges. When
    every non-tree edge bounds at most two 2-cells, those edges form a dual
    graph on the 2-cells (plus an outer node for edges on one 2-cell) and a BFS
    forest of it picks a parent edge for every non-root 2-cell. The boundary of
    that 2-cell rewrites the class of its parent edge in terms of its other
    edges, deepest cells first, so every class is a combination of the leftover
    edges and the dual roots contribute the only relations. Otherwise every
    2-cell is a root and all non-tree edges are leftover.
    """

    def __init__(self, C: CubicalChainComplex) -> None:
        p = self.p = C.p
        graph, self._ends = _one_skeleton(C)

        self._parent: dict[int, Optional[tuple[int, int]]] = {}
        self._depth: dict[int, int] = {}
        tree_edges: set[int] = set()
        for component in sorted(nx.connected_components(graph), key=min):
            root = min(component)
            self._parent[root] = None
            self._depth[root] = 0
            for u, v in nx.bfs_edges(graph, root):
                e = graph.edges[u, v]["cell"]
                self._parent[v] = (u, e)
                self._depth[v] = self._depth[u] + 1
                tree_edges.add(e)

        nontree = [e for e in range(C.cell_count(1)) if e not in tree_edges]
        faces = list(C.boundary(2).iter_columns()) if C.top_dim >= 2 else []
        incidence: dict[int, list[int]] = {e: [] for e in nontree}
        for f, column in enumerate(faces):
            for e in column:
                if e in incidence:
                    incidence[e].append(f)

        dual_parent: dict[int, tuple[int, int]] = {}
        depth: dict[int, int] = {f: 0 for f in range(len(faces))}
        if all(len(owners) <= 2 for owners in incidence.values()):
            dual = nx.Graph()
            dual.add_nodes_from(range(len(faces)))
            for e in nontree:
                owners = incidence[e]
                if not owners:
                    continue
                a, b = (owners[0], _OUTER) if len(owners) == 1 else owners
                if not dual.has_edge(a, b):
                    dual.add_edge(a, b, cell=e)
            for component in sorted(nx.connected_components(dual), key=min):
                root = min(component)
                depth[root] = 0
                for u, v in nx.bfs_edges(dual, root):
                    dual_parent[v] = (u, dual.edges[u, v]["cell"])
                    depth[v] = depth[u] + 1
        else:
            log.debug("%r: a non-tree edge bounds more than two 2-cells, every 2-cell is a relation", C)

        cotree = {edge for _, edge in dual_parent.values()}
        leftover = [e for e in nontree if e not in cotree]
        self._lift_of: dict[int, Column] = {e: {} for e in nontree}
        relations: dict[int, Column] = {}
        for k, edge in enumerate(leftover):
            self._lift_of[edge][k] = 1
            pending: dict[int, int] = {}
            queue: list[tuple[int, int]] = []
            for f in incidence[edge]:
                pending[f] = (pending.get(f, 0) + faces[f][edge]) % p
                heapq.heappush(queue, (-depth[f], f))
            while queue:
                _, f = heapq.heappop(queue)
                value = pending.pop(f, 0)
                if not value:
                    continue
                if f not in dual_parent:
                    relations.setdefault(f, {})[k] = value
                    continue
                up, parent_edge = dual_parent[f]
                weight = (-value * pow(faces[f][parent_edge], -1, p)) % p
                self._lift_of[parent_edge][k] = weight
                if up != _OUTER:
                    pending[up] = (pending.get(up, 0) + faces[up][parent_edge] * weight) % p
                    heapq.heappush(queue, (-depth[up], up))

        self._echelon = ColumnEchelon(p, len(leftover))
        for f in sorted(relations):
            self._echelon.add(relations[f])
        pivots = set(self._echelon.pivot_rows)
        free = [r for r in range(len(leftover)) if r not in pivots]
        self._position = {r: k for k, r in enumerate(free)}
        self.representatives = [self._fundamental_cycle(leftover[r]) for r in free]
        log.debug(
            "%r: H_1 from %d leftover edges, %d cotree edges, %d relations",
            C, len(leftover), len(cotree), self._echelon.rank,
        )
        d1 = C.boundary(1)
        for rep in self.representatives:
            ensure(not d1.apply(rep), "fundamental cycle has nonzero boundary")

    def _lift(self, chain: Mapping[int, int]) -> Column:
        lifted: Column = {}
        for e, value in chain.items():
            image = self._lift_of.get(e)
            if image:
                _add_into(lifted, value, image, self.p)
        return lifted

    def _step(self, chain: Column, start: int, end: int, edge: int) -> None:
        # travel start -> end along a tree edge
        sign = 1 if self._ends[edge][0] == end else -1
        _add_into(chain, sign, {edge: 1}, self.p)

    def _fundamental_cycle(self, edge: int) -> Column:
        plus, minus = self._ends[edge]
        chain: Column = {edge: 1}
        a, b = plus, minus
        down: list[tuple[int, int, int]] = []
        while a != b:
            if self._depth[a] >= self._depth[b]:
                up, e = self._parent[a]
                self._step(chain, a, up, e)
                a = up
            else:
                up, e = self._parent[b]
                down.append((up, b, e))
                b = up
        for start, end, e in reversed(down):
            self._step(chain, start, end, e)
        return chain

    def coordinates(self, cycle: Mapping[int, int]) -> Column:
        remainder, _ = self._echelon.reduce(self._lift(cycle))
        ensure(all(r in self._position for r in remainder), "H_1 remainder left a pivot row")
        return {self._position[r]: v for r, v in remainder.items()}


class _TopCycleBasis(_HomologyBasis):
    """Top-degree cycles when every codimension-1 cell bounds at most two top cells.

    A cycle is then fixed on each connected piece of the adjacency graph by its
    value at one cell, so each consistent piece contributes one basis cycle,
    normalized to 1 at its smallest cell.
    """

    def __init__(self, C: CubicalChainComplex, q: int) -> None:
        p = C.p
        rows = list(C.boundary(q).transpose().iter_columns())
        graph = nx.Graph()
        graph.add_nodes_from(range(C.cell_count(q)))
        for row in rows:
            if len(row) == 2:
                a, b = sorted(row)
                graph.add_edge(a, b, coeffs=(row[a], row[b]))

        values: dict[int, int] = {}
        roots: dict[int, int] = {}
        for component in sorted(nx.connected_components(graph), key=min):
            root = min(component)
            values[root] = 1
            roots[root] = root
            for u, v in nx.bfs_edges(graph, root):
                a, _ = sorted((u, v))
                c_lo, c_hi = graph.edges[u, v]["coeffs"]
                c_u, c_v = (c_lo, c_hi) if u == a else (c_hi, c_lo)
                values[v] = (-c_u * values[u] * pow(c_v, -1, p)) % p
                roots[v] = root

        broken = set()
        for row in rows:
            total = sum(c * values[cell] for cell, c in row.items()) % p
            if total:
                broken.add(roots[next(iter(row))])
        cycles: dict[int, Column] = {}
        for cell, value in values.items():
            root = roots[cell]
            if root not in broken:
                cycles.setdefault(root, {})[cell] = value
        self._roots = sorted(cycles)
        self.representatives = [cycles[r] for r in self._roots]

    def coordinates(self, cycle: Mapping[int, int]) -> Column:
        return {k: cycle[r] for k, r in enumerate(self._roots) if cycle.get(r)}


class _EchelonBasis(_HomologyBasis):
    """General degree: kernel vectors extended past the boundaries, coordinates from tags."""

    def __init__(self, C: CubicalChainComplex, q: int) -> None:
        self._echelon = ColumnEchelon(C.p, C.cell_count(q))
        for column in C.boundary(q + 1).iter_columns():
            self._echelon.add(column)
        self._position: dict[int, int] = {}
        self.representatives = []
        for j, z in enumerate(kernel_basis(C.boundary(q)).iter_columns()):
            if self._echelon.add_labelled(z, j) is None:
                self._position[j] = len(self.representatives)
                self.representatives.append(z)

    def coordinates(self, cycle: Mapping[int, int]) -> Column:
        remainder, tags = self._echelon.reduce(cycle, track=True)
        ensure(not remainder, "chain is not a cycle")
        return {self._position[label]: v for label, v in tags.items()}


def _is_thin(C: CubicalChainComplex, q: int) -> bool:
    key = ("thin", q)
    if key not in C._cache:
        C._cache[key] = all(len(row) <= 2 for row in C.boundary(q).transpose().iter_columns())
    return C._cache[key]


def _top_cycles(C: CubicalChainComplex, q: int) -> _TopCycleBasis:
    key = ("top_cycles", q)
    if key not in C._cache:
        C._cache[key] = _TopCycleBasis(C, q)
    return C._cache[key]


def homology_basis(C: CubicalChainComplex, q: int) -> _HomologyBasis:
    key = ("basis", q)
    if key not in C._cache:
        if q == 0:
            basis: _HomologyBasis = _ComponentBasis(C)
        elif q == 1:
            basis = _TreeCycleBasis(C)
        elif q == C.top_dim and _is_thin(C, q):
            basis = _top_cycles(C, q)
        else:
            basis = _EchelonBasis(C, q)
        ensure(basis.dim == betti(C, q), f"H_{q} basis has {basis.dim} elements, betti is {betti(C, q)}")
        C._cache[key] = basis
    return C._cache[key]


# ── Cyclic symmetry ────────────────────────────────────────


@dataclass(frozen=True, eq=False)
class InducedAction:
    """Rotation i -> i+shift on vertices, its chain maps and its action on homology.

    homology[q] acts on the fixed basis of H_q; columns are images of basis classes.
    """

    shift: int
    order: int
    permutation: tuple[int, ...]
    chain_maps: tuple[FpMatrix, ...]
    homology: tuple[FpMatrix, ...]

    @property
    def matrix_on_H1(self) -> FpMatrix:
        if len(self.homology) > 1:
            return self.homology[1]
        return FpMatrix.zeros(self.chain_maps[0].p, 0, 0)


def _sort_sign(values: Sequence[int]) -> int:
    inversions = sum(1 for a, b in itertools.combinations(values, 2) if a > b)
    return -1 if inversions % 2 else 1


def _rotate_cell(C: CubicalChainComplex, d: int, cell: CubicalCell, shift: int) -> tuple[int, int]:
    """Index and sign of the image of cell under rotation by shift."""
    n = C.n
    moved = [((i - 1 + shift) % n) + 1 for i in cell.face]
    target = CubicalCell(tuple(sorted(moved)), _rotate_mask(cell.mask, shift, n))
    k = C.index[d].get(target)
    ensure(k is not None, f"rotation by {shift} leaves the complex at {cell}")
    return k, _sort_sign(moved)


def _rotation_chain_map(C: CubicalChainComplex, d: int, shift: int) -> FpMatrix:
    images, signs = [], []
    for cell in C.cells[d]:
        k, sign = _rotate_cell(C, d, cell, shift)
        images.append(k)
        signs.append(sign)
    return FpMatrix.signed_permutation(C.p, images, signs)


def _check_invariant(K: SimplicialComplex, shift: int) -> tuple[int, ...]:
    n = K.n
    permutation = tuple(((i - 1 + shift) % n) + 1 for i in range(1, n + 1))
    if not K.is_invariant_under(permutation):
        raise SymmetryError(f"rotation by {shift} does not preserve K")
    return permutation


def homology_matrix(C: CubicalChainComplex, q: int, chain_map: FpMatrix) -> FpMatrix:
    basis = homology_basis(C, q)
    columns = [basis.coordinates(chain_map.apply(rep)) for rep in basis.representatives]
    return FpMatrix.from_columns(C.p, basis.dim, columns)


def rotation_action(C: CubicalChainComplex, K: SimplicialComplex, shift: int) -> InducedAction:
    n = K.n
    permutation = _check_invariant(K, shift)
    maps = tuple(_rotation_chain_map(C, d, shift) for d in range(C.top_dim + 1))
    for d in range(1, C.top_dim + 1):
        ensure(
            C.boundary(d) @ maps[d] == maps[d - 1] @ C.boundary(d),
            f"rotation by {shift} does not commute with ∂_{d}",
        )
    homology = tuple(homology_matrix(C, q, maps[q]) for q in range(C.top_dim + 1))
    order = n // gcd(n, shift % n) if n else 1
    log.debug("rotation by %d on %r: H dims %s", shift, C, [h.rows for h in homology])
    return InducedAction(shift, order, permutation, maps, homology)


def orbit_sum_action(C: CubicalChainComplex, K: SimplicialComplex) -> tuple[FpMatrix, ...]:
    """Σ_{k<n} g^k on each H_q, summed on chains before passing to homology."""
    _check_invariant(K, 1)
    result = []
    for q in range(C.top_dim + 1):
        columns = []
        for cell in C.cells[q]:
            column: Column = {}
            for shift in range(C.n):
                k, sign = _rotate_cell(C, q, cell, shift)
                _add_into(column, sign, {k: 1}, C.p)
            columns.append(column)
        chain_sum = FpMatrix.from_columns(C.p, C.cell_count(q), columns)
        result.append(homology_matrix(C, q, chain_sum))
    return tuple(result)


# ── Fixed points ───────────────────────────────────────────


@dataclass(frozen=True, eq=False)
class FixedSubcomplex:
    """Cells fixed pointwise by the subgroup of order m, generated by rotation by n/m."""

    complex: CubicalChainComplex
    n: int
    subgroup_order: int
    step: int

    @property
    def vertex_count(self) -> int:
        return self.complex.cell_count(0)

    @property
    def is_discrete(self) -> bool:
        return self.complex.top_dim == 0


@dataclass(frozen=True)
class Orbit:
    size: int
    stabilizer: int
    representative: Word


def fixed_subcomplex(C: CubicalChainComplex, K: SimplicialComplex, m: int) -> FixedSubcomplex:
    n = K.n
    if m < 1 or n % m:
        raise ArgumentError(f"subgroup order {m} does not divide {n}")
    step = n // m
    moves_vertices = m > 1
    cells_by_dim: list[list[CubicalCell]] = []
    for d, cells in enumerate(C.cells):
        if d > 0 and moves_vertices:
            # every vertex lies in an orbit of size m > 1, so no interval coordinate is fixed
            cells_by_dim.append([])
            continue
        cells_by_dim.append([c for c in cells if _rotate_mask(c.mask, step, n) == c.mask])
    fixed = _assemble(K, C.p, cells_by_dim)
    if moves_vertices:
        ensure(fixed.cell_count(0) == 2 ** step, f"expected 2^{step} fixed vertices, got {fixed.cell_count(0)}")
    return FixedSubcomplex(fixed, n, m, step)


def _mask_bits(mask: int, n: int) -> tuple[int, ...]:
    return tuple((mask >> (i - 1)) & 1 for i in range(1, n + 1))


def orbit_decomposition(fixed: FixedSubcomplex) -> list[Orbit]:
    """Orbits of the residual rotation by 1 on the fixed vertices."""
    n = fixed.n
    seen: set[int] = set()
    orbits: list[Orbit] = []
    for cell in fixed.complex.cells[0]:
        if cell.mask in seen:
            continue
        bits = _mask_bits(cell.mask, n)
        size = primitive_period(bits)
        seen.update(_rotate_mask(cell.mask, k, n) for k in range(size))
        stabilizer = n // size
        ensure(
            stabilizer % fixed.subgroup_order == 0,
            f"stabilizer of order {stabilizer} does not contain the subgroup of order {fixed.subgroup_order}",
        )
        least = necklace_representative(bits)
        orbits.append(Orbit(size, stabilizer, Word(least.bits[:size])))
    orbits.sort(key=lambda o: (o.size, o.representative))
    if fixed.is_discrete:
        ensure(len(orbits) == necklace_count(fixed.step), "orbit count differs from the necklace count")
    return orbits
