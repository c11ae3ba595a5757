"""
Exact linear algebra over the prime field F_p.

Matrices carry their modulus; entries are machine-integer residues in [0, p).
Two storage profiles:
- dense: read-only numpy int64 array
- sparse: column-major, one {row: value} dict per column, zeros never stored

Elimination pivots on the first nonzero entry in column order, so every basis
returned here is reproducible run to run.
"""
from __future__ import annotations

import heapq
import logging
from dataclasses import dataclass
from functools import lru_cache
from typing import Any, Iterator, Mapping, Optional, Sequence

import numpy as np
from sympy import isprime

import config
from errors import ArgumentError, DimensionError, DomainError, ShapeError

log = logging.getLogger(__name__)

Column = dict[int, int]

# float64 matmul is exact while every partial sum stays below 2**53
_FLOAT_EXACT = 2 ** 53
# rough cost of one dict update measured in BLAS multiply-adds
_DICT_OP_COST = 2000


@lru_cache(maxsize=None)
def validate_prime(p: int) -> int:
    if isinstance(p, bool) or not isinstance(p, (int, np.integer)):
        raise DomainError(f"modulus must be an integer, got {p!r}")
    p = int(p)
    if p < 2 or p >= config.PRIME_BOUND or not isprime(p):
        raise DomainError(f"modulus p={p} is not a prime below {config.PRIME_BOUND}")
    return p


@dataclass(frozen=True)
class FpScalar:
    value: int
    p: int

    def __post_init__(self) -> None:
        validate_prime(self.p)
        object.__setattr__(self, "value", int(self.value) % int(self.p))

    def __int__(self) -> int:
        return self.value

    def inverse(self) -> "FpScalar":
        if self.value == 0:
            raise ZeroDivisionError(f"0 has no inverse mod {self.p}")
        return FpScalar(pow(self.value, -1, self.p), self.p)


def _prefers_dense(rows: int, cols: int, nnz: int) -> bool:
    if max(rows, cols) <= config.DENSE_LIMIT:
        return True
    return nnz >= config.DENSE_FILL_RATIO * rows * cols


def _axpy(target: Column, coeff: int, source: Mapping[int, int], p: int) -> None:
    """target += coeff * source, in place, dropping zeros."""
    if coeff % p == 0:
        return
    for row, value in source.items():
        new = (target.get(row, 0) + coeff * value) % p
        if new:
            target[row] = new
        else:
            target.pop(row, None)


class FpMatrix:
    """Immutable matrix over F_p with dense or sparse storage."""

    __slots__ = ("p", "rows", "cols", "_dense", "_columns")

    def __init__(
        self,
        p: int,
        rows: int,
        cols: int,
        *,
        dense: Optional[np.ndarray] = None,
        columns: Optional[list[Column]] = None,
    ) -> None:
        if (dense is None) == (columns is None):
            raise ArgumentError("exactly one of dense / columns must be given")
        if rows < 0 or cols < 0:
            raise DimensionError(f"negative shape ({rows}, {cols})")
        self.p = validate_prime(p)
        self.rows = int(rows)
        self.cols = int(cols)
        if dense is not None:
            dense.setflags(write=False)
        self._dense = dense
        self._columns = columns

    # ── constructors ───────────────────────────────────────

    @classmethod
    def _choose(
        cls,
        p: int,
        rows: int,
        cols: int,
        *,
        dense: Optional[np.ndarray] = None,
        columns: Optional[list[Column]] = None,
    ) -> "FpMatrix":
        if dense is not None:
            nnz = int(np.count_nonzero(dense))
        else:
            nnz = sum(len(c) for c in columns or [])
        if _prefers_dense(rows, cols, nnz):
            if dense is None:
                dense = np.zeros((rows, cols), dtype=np.int64)
                for j, col in enumerate(columns or []):
                    for i, v in col.items():
                        dense[i, j] = v
            return cls(p, rows, cols, dense=dense)
        if columns is None:
            columns = [
                {int(i): int(dense[i, j]) for i in np.flatnonzero(dense[:, j])}
                for j in range(cols)
            ]
        return cls(p, rows, cols, columns=columns)

    @classmethod
    def from_array(cls, p: int, array: Any) -> "FpMatrix":
        p = validate_prime(p)
        arr = np.array(array, dtype=np.int64)
        if arr.ndim != 2:
            raise DimensionError(f"expected a 2-d array, got shape {arr.shape}")
        arr = np.mod(arr, p)
        return cls._choose(p, arr.shape[0], arr.shape[1], dense=arr)

    @classmethod
    def from_rows(cls, p: int, rows: Sequence[Sequence[int]], n_cols: int = 0) -> "FpMatrix":
        if len(rows) == 0:
            return cls.zeros(p, 0, n_cols)
        widths = {len(r) for r in rows}
        if len(widths) != 1:
            raise DimensionError(f"ragged rows with widths {sorted(widths)}")
        return cls.from_array(p, [list(r) for r in rows])

    @classmethod
    def from_columns(cls, p: int, n_rows: int, columns: Sequence[Mapping[int, int]]) -> "FpMatrix":
        p = validate_prime(p)
        cleaned: list[Column] = []
        for col in columns:
            clean: Column = {}
            for row, value in col.items():
                if not 0 <= row < n_rows:
                    raise DimensionError(f"row index {row} outside [0, {n_rows})")
                value = int(value) % p
                if value:
                    clean[int(row)] = value
            cleaned.append(clean)
        return cls._choose(p, n_rows, len(cleaned), columns=cleaned)

    @classmethod
    def zeros(cls, p: int, rows: int, cols: int) -> "FpMatrix":
        return cls._choose(validate_prime(p), rows, cols, columns=[{} for _ in range(cols)])

    @classmethod
    def identity(cls, p: int, n: int) -> "FpMatrix":
        return cls._choose(validate_prime(p), n, n, columns=[{j: 1} for j in range(n)])

    @classmethod
    def signed_permutation(
        cls, p: int, images: Sequence[int], signs: Optional[Sequence[int]] = None, n_rows: Optional[int] = None
    ) -> "FpMatrix":
        """Column j has entry signs[j] in row images[j]."""
        signs = signs if signs is not None else [1] * len(images)
        rows = n_rows if n_rows is not None else len(images)
        return cls.from_columns(p, rows, [{int(i): int(s)} for i, s in zip(images, signs)])

    @classmethod
    def hstack(cls, matrices: Sequence["FpMatrix"]) -> "FpMatrix":
        if not matrices:
            raise ArgumentError("hstack needs at least one matrix")
        p, rows = matrices[0].p, matrices[0].rows
        for m in matrices[1:]:
            if m.p != p:
                raise DimensionError(f"modulus mismatch: {m.p} != {p}")
            if m.rows != rows:
                raise DimensionError(f"row count mismatch: {m.rows} != {rows}")
        if all(not m.is_sparse for m in matrices):
            return cls._choose(p, rows, sum(m.cols for m in matrices),
                               dense=np.hstack([m._dense for m in matrices]))
        columns = [col for m in matrices for col in m.iter_columns()]
        return cls._choose(p, rows, len(columns), columns=columns)

    # ── accessors ──────────────────────────────────────────

    @property
    def shape(self) -> tuple[int, int]:
        return self.rows, self.cols

    @property
    def is_sparse(self) -> bool:
        return self._columns is not None

    @property
    def is_square(self) -> bool:
        return self.rows == self.cols

    @property
    def nnz(self) -> int:
        if self._dense is not None:
            return int(np.count_nonzero(self._dense))
        return sum(len(c) for c in self._columns)

    def entry(self, i: int, j: int) -> FpScalar:
        if self._dense is not None:
            return FpScalar(int(self._dense[i, j]), self.p)
        return FpScalar(self._columns[j].get(i, 0), self.p)

    def column(self, j: int) -> Column:
        if self._dense is not None:
            col = self._dense[:, j]
            return {int(i): int(col[i]) for i in np.flatnonzero(col)}
        return dict(self._columns[j])

    def iter_columns(self) -> Iterator[Column]:
        for j in range(self.cols):
            yield self.column(j)

    def to_array(self) -> np.ndarray:
        if self._dense is not None:
            return self._dense.copy()
        arr = np.zeros((self.rows, self.cols), dtype=np.int64)
        for j, col in enumerate(self._columns):
            for i, v in col.items():
                arr[i, j] = v
        return arr

    def to_rows(self) -> list[list[int]]:
        return self.to_array().tolist()

    # ── arithmetic ─────────────────────────────────────────

    def _check_same(self, other: "FpMatrix") -> None:
        if not isinstance(other, FpMatrix):
            raise ArgumentError(f"expected FpMatrix, got {type(other).__name__}")
        if other.p != self.p:
            raise DimensionError(f"modulus mismatch: {self.p} != {other.p}")

    def transpose(self) -> "FpMatrix":
        if self._dense is not None:
            return FpMatrix._choose(self.p, self.cols, self.rows, dense=self._dense.T.copy())
        out: list[Column] = [{} for _ in range(self.rows)]
        for j, col in enumerate(self._columns):
            for i, v in col.items():
                out[i][j] = v
        return FpMatrix._choose(self.p, self.cols, self.rows, columns=out)

    @property
    def T(self) -> "FpMatrix":
        return self.transpose()

    def __matmul__(self, other: "FpMatrix") -> "FpMatrix":
        self._check_same(other)
        if self.cols != other.rows:
            raise DimensionError(f"cannot multiply {self.shape} by {other.shape}")
        if _dense_product_pays(self, other):
            return FpMatrix._choose(self.p, self.rows, other.cols,
                                    dense=_dense_matmul(self.to_array(), other.to_array(), self.p))
        left = list(self.iter_columns())
        out: list[Column] = []
        for col in other.iter_columns():
            acc: Column = {}
            for k, v in col.items():
                _axpy(acc, v, left[k], self.p)
            out.append(acc)
        return FpMatrix._choose(self.p, self.rows, other.cols, columns=out)

    def apply(self, vector: Mapping[int, int]) -> Column:
        """Sparse matrix-vector product M·v."""
        acc: Column = {}
        for k, v in vector.items():
            if v % self.p:
                _axpy(acc, v, self.column(k) if self._dense is not None else self._columns[k], self.p)
        return acc

    def _combine(self, other: "FpMatrix", sign: int) -> "FpMatrix":
        self._check_same(other)
        if self.shape != other.shape:
            raise DimensionError(f"shape mismatch: {self.shape} vs {other.shape}")
        if self._dense is not None and other._dense is not None:
            return FpMatrix._choose(self.p, self.rows, self.cols,
                                    dense=(self._dense + sign * other._dense) % self.p)
        out: list[Column] = []
        for a, b in zip(self.iter_columns(), other.iter_columns()):
            _axpy(a, sign, b, self.p)
            out.append(a)
        return FpMatrix._choose(self.p, self.rows, self.cols, columns=out)

    def __add__(self, other: "FpMatrix") -> "FpMatrix":
        return self._combine(other, 1)

    def __sub__(self, other: "FpMatrix") -> "FpMatrix":
        return self._combine(other, -1)

    def scale(self, c: int) -> "FpMatrix":
        c = int(c) % self.p
        if self._dense is not None:
            return FpMatrix._choose(self.p, self.rows, self.cols, dense=(self._dense * c) % self.p)
        if c == 0:
            return FpMatrix.zeros(self.p, self.rows, self.cols)
        out = [{i: (v * c) % self.p for i, v in col.items()} for col in self._columns]
        return FpMatrix._choose(self.p, self.rows, self.cols, columns=out)

    def __rmul__(self, c: int) -> "FpMatrix":
        if isinstance(c, (int, np.integer)) and not isinstance(c, bool):
            return self.scale(int(c))
        return NotImplemented

    def __neg__(self) -> "FpMatrix":
        return self.scale(-1)

    def is_zero(self) -> bool:
        if self._dense is not None:
            return not self._dense.any()
        return all(not col for col in self._columns)

    def is_identity(self) -> bool:
        if not self.is_square:
            return False
        if self._dense is not None:
            return bool(np.array_equal(self._dense, np.eye(self.rows, dtype=np.int64)))
        return all(col == {j: 1} for j, col in enumerate(self._columns))

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, FpMatrix):
            return NotImplemented
        if self.p != other.p or self.shape != other.shape:
            return False
        if self._dense is not None and other._dense is not None:
            return bool(np.array_equal(self._dense, other._dense))
        return all(a == b for a, b in zip(self.iter_columns(), other.iter_columns()))

    __hash__ = None  # type: ignore[assignment]

    def __repr__(self) -> str:
        profile = "sparse" if self.is_sparse else "dense"
        return f"FpMatrix(p={self.p}, shape={self.shape}, {profile}, nnz={self.nnz})"


def block_diag(p: int, blocks: Sequence[FpMatrix]) -> FpMatrix:
    rows = sum(b.rows for b in blocks)
    columns: list[Column] = []
    offset = 0
    for b in blocks:
        if b.p != p:
            raise DimensionError(f"modulus mismatch: {b.p} != {p}")
        for col in b.iter_columns():
            columns.append({i + offset: v for i, v in col.items()})
        offset += b.rows
    return FpMatrix.from_columns(p, rows, columns)


def _fits_dense(*cells: int) -> bool:
    return max(cells) <= config.DENSE_ELIMINATION_CELLS


def _dense_product_pays(a: FpMatrix, b: FpMatrix) -> bool:
    if not a.is_sparse and not b.is_sparse:
        return True
    if not _fits_dense(a.rows * a.cols, b.rows * b.cols, a.rows * b.cols):
        return False
    if not a.is_sparse or not b.is_sparse:
        return True
    dict_updates = a.nnz * b.nnz / max(a.cols, 1)
    return dict_updates * _DICT_OP_COST > a.rows * a.cols * b.cols


def _dense_matmul(a: np.ndarray, b: np.ndarray, p: int) -> np.ndarray:
    inner = a.shape[1]
    if (p - 1) ** 2 * max(inner, 1) < _FLOAT_EXACT:
        prod = np.rint(a.astype(np.float64) @ b.astype(np.float64)).astype(np.int64)
        return prod % p
    return (a @ b) % p


# ── elimination ─────────────────────────────────────────────


def _rref_dense(arr: np.ndarray, p: int) -> tuple[np.ndarray, list[int]]:
    """Reduced row echelon form and pivot columns."""
    a = np.array(arr, dtype=np.int64)
    n_rows, n_cols = a.shape
    pivots: list[int] = []
    r = 0
    for c in range(n_cols):
        if r == n_rows:
            break
        nz = np.flatnonzero(a[r:, c])
        if nz.size == 0:
            continue
        piv = r + int(nz[0])
        if piv != r:
            a[[r, piv]] = a[[piv, r]]
        inv = pow(int(a[r, c]), -1, p)
        a[r, c:] = (a[r, c:] * inv) % p
        others = np.flatnonzero(a[:, c])
        others = others[others != r]
        if others.size:
            a[others, c:] = (a[others, c:] - np.outer(a[others, c], a[r, c:])) % p
        pivots.append(c)
        r += 1
    return a, pivots


def _rank_dense(arr: np.ndarray, p: int) -> int:
    a = np.array(arr, dtype=np.int64)
    n_rows, n_cols = a.shape
    r = 0
    for c in range(n_cols):
        if r == n_rows:
            break
        nz = np.flatnonzero(a[r:, c])
        if nz.size == 0:
            continue
        piv = r + int(nz[0])
        if piv != r:
            a[[r, piv]] = a[[piv, r]]
        inv = pow(int(a[r, c]), -1, p)
        a[r, c:] = (a[r, c:] * inv) % p
        below = r + 1 + np.flatnonzero(a[r + 1:, c])
        if below.size:
            a[below, c:] = (a[below, c:] - np.outer(a[below, c], a[r, c:])) % p
        r += 1
    return r


def _rank_dense_blocked(arr: np.ndarray, p: int, block: int) -> int:
    """Rank by panels of `block` columns.

    Each panel is eliminated on its own, recording one multiplier column per
    pivot; the rows left over are then updated past the panel with a single
    matrix product. Pivot rows are retired rather than swapped.
    """
    a = np.array(arr, dtype=np.int64) % p
    n_rows, n_cols = a.shape
    live_rows = np.ones(n_rows, dtype=bool)
    total = 0
    for c0 in range(0, n_cols, block):
        if total == n_rows:
            break
        c1 = min(c0 + block, n_cols)
        rows = np.flatnonzero(live_rows)
        panel = a[rows, c0:c1]
        live = np.ones(rows.size, dtype=bool)
        pivots: list[int] = []
        multipliers: list[np.ndarray] = []
        for c in range(c1 - c0):
            candidates = np.flatnonzero(live & (panel[:, c] != 0))
            if candidates.size == 0:
                continue
            i = int(candidates[0])
            inv = pow(int(panel[i, c]), -1, p)
            mult = (panel[:, c] * inv) % p
            mult[~live] = 0
            mult[i] = 0
            touched = np.flatnonzero(mult)
            if touched.size:
                panel[touched, c:] = (panel[touched, c:] - np.outer(mult[touched], panel[i, c:])) % p
            live[i] = False
            pivots.append(i)
            multipliers.append(mult)
        if not pivots:
            continue
        total += len(pivots)
        live_rows[rows[pivots]] = False
        if c1 == n_cols:
            continue
        L = np.stack(multipliers, axis=1)
        # pivot rows past the panel, as they stood when each was chosen
        U = np.empty((len(pivots), n_cols - c1), dtype=np.int64)
        for j, i in enumerate(pivots):
            u = a[rows[i], c1:]
            if j:
                u = u - L[i, :j] @ U[:j]
            U[j] = u % p
        rest = np.flatnonzero(live)
        rest = rest[L[rest].any(axis=1)]
        if rest.size:
            update = _dense_matmul(L[rest], U, p)
            a[rows[rest], c1:] = (a[rows[rest], c1:] - update) % p
    return total


def _rank_gf2_packed(arr: np.ndarray) -> int:
    """Rank over F_2 with rows bit-packed eight columns per byte."""
    bits = np.packbits((arr & 1).astype(np.uint8), axis=1)
    n_rows, n_cols = arr.shape
    r = 0
    for c in range(n_cols):
        if r == n_rows:
            break
        byte, offset = divmod(c, 8)
        mask = np.uint8(0x80 >> offset)
        nz = np.flatnonzero(bits[r:, byte] & mask)
        if nz.size == 0:
            continue
        piv = r + int(nz[0])
        if piv != r:
            bits[[r, piv]] = bits[[piv, r]]
        below = r + 1 + np.flatnonzero(bits[r + 1:, byte] & mask)
        if below.size:
            bits[below] ^= bits[r]
        r += 1
    return r


class ColumnEchelon:
    """Incremental column echelon form over F_p.

    Every stored column is scaled so that its smallest row index (its pivot row)
    holds 1, and no two stored columns share a pivot row. Reducing a vector
    clears its pivot rows in increasing order, so the remainder is supported on
    non-pivot rows only; those rows index a complement of the column span.

    Inputs can be labelled. A stored column then carries a tag: the combination
    of labelled inputs it equals modulo the unlabelled ones. Over F_2 columns and
    tags are int bitsets.
    """

    def __init__(self, p: int, n_rows: int) -> None:
        self.p = validate_prime(p)
        self.n_rows = n_rows
        self._gf2 = self.p == 2
        self._pivots: dict[int, Any] = {}
        self._tags: dict[int, Any] = {}
        self._pivot_mask = 0

    @property
    def rank(self) -> int:
        return len(self._pivots)

    @property
    def pivot_rows(self) -> list[int]:
        return sorted(self._pivots)

    def _encode(self, column: Mapping[int, int]) -> Any:
        if self._gf2:
            bits = 0
            for row, value in column.items():
                if value % 2:
                    bits ^= 1 << row
            return bits
        return {int(r): int(v) % self.p for r, v in column.items() if int(v) % self.p}

    def _decode(self, vec: Any) -> Column:
        if not self._gf2:
            return dict(vec)
        out: Column = {}
        while vec:
            low = vec & -vec
            out[low.bit_length() - 1] = 1
            vec ^= low
        return out

    def _empty(self) -> Any:
        return 0 if self._gf2 else {}

    def _reduce(self, vec: Any, track: bool) -> tuple[Any, Any]:
        if self._gf2:
            acc = 0
            while True:
                hit = vec & self._pivot_mask
                if not hit:
                    return vec, acc
                r = (hit & -hit).bit_length() - 1
                vec ^= self._pivots[r]
                if track:
                    acc ^= self._tags.get(r, 0)
        p = self.p
        pivots = self._pivots
        acc: Column = {}
        # a stored column only reaches rows at or below its pivot, so popping
        # pivot rows in increasing order never revisits a cleared row
        pending = [r for r in vec if r in pivots]
        heapq.heapify(pending)
        while pending:
            r = heapq.heappop(pending)
            c = vec.get(r)
            if not c:
                continue
            column = pivots[r]
            _axpy(vec, -c, column, p)
            for i in column:
                if i != r and i in pivots and i in vec:
                    heapq.heappush(pending, i)
            if track:
                _axpy(acc, c, self._tags.get(r, {}), p)
        return vec, acc

    def reduce(self, column: Mapping[int, int], *, track: bool = False) -> tuple[Column, Column]:
        """Return (remainder, tag combination) with column ≡ remainder + Σ tag·labels."""
        vec, acc = self._reduce(self._encode(column), track)
        return self._decode(vec), self._decode(acc)

    def _insert(self, vec: Any, tag_in: Any, track: bool) -> tuple[bool, Any]:
        rem, acc = self._reduce(vec, track)
        if self._gf2:
            relation = tag_in ^ acc
            if not rem:
                return False, relation
            r = (rem & -rem).bit_length() - 1
            self._pivots[r] = rem
            if track:
                self._tags[r] = relation
            self._pivot_mask |= 1 << r
            return True, None
        relation = dict(tag_in)
        _axpy(relation, -1, acc, self.p)
        if not rem:
            return False, relation
        r = min(rem)
        inv = pow(rem[r], -1, self.p)
        self._pivots[r] = {i: (v * inv) % self.p for i, v in rem.items()}
        if track:
            self._tags[r] = {i: (v * inv) % self.p for i, v in relation.items()}
        return True, None

    def add(self, column: Mapping[int, int]) -> bool:
        """Insert an unlabelled column; True when it raised the rank."""
        created, _ = self._insert(self._encode(column), self._empty(), track=bool(self._tags))
        return created

    def add_labelled(self, column: Mapping[int, int], label: int) -> Optional[Column]:
        """Insert a labelled column.

        Returns None when the rank grew, otherwise the dependency relation: a
        combination of labels whose inputs sum to zero modulo unlabelled inputs.
        """
        created, relation = self._insert(self._encode(column), self._encode({label: 1}), track=True)
        if created:
            return None
        return self._decode(relation)

    def reduced_columns(self) -> list[tuple[int, Column]]:
        """Fully reduced basis: each column is zero on every other pivot row."""
        done: dict[int, Any] = {}
        done_mask = 0
        for r in sorted(self._pivots, reverse=True):
            vec = self._pivots[r]
            if self._gf2:
                hit = vec & done_mask
                while hit:
                    low = hit & -hit
                    vec ^= done[low.bit_length() - 1]
                    hit ^= low
                done_mask |= 1 << r
            else:
                vec = dict(vec)
                for r2 in [row for row in vec if row in done]:
                    _axpy(vec, -vec[r2], done[r2], self.p)
            done[r] = vec
        return [(r, self._decode(done[r])) for r in sorted(done)]


# ── public operations ───────────────────────────────────────


def rank(M: FpMatrix) -> int:
    if M.rows == 0 or M.cols == 0:
        return 0
    large = max(M.shape) > config.DENSE_LIMIT
    if M.is_sparse and large and _fits_dense(M.rows * M.cols):
        log.debug("rank: dense elimination on %s", M)
        if M.p == 2:
            return _rank_gf2_packed(M.to_array())
        return _rank_dense_blocked(M.to_array(), M.p, config.RANK_BLOCK)
    if not M.is_sparse:
        if large:
            return _rank_dense_blocked(M._dense, M.p, config.RANK_BLOCK)
        if M.p == 2 and max(M.shape) > 64:
            return _rank_gf2_packed(M._dense)
        return _rank_dense(M._dense, M.p)
    log.debug("rank: sparse elimination on %s", M)
    echelon = ColumnEchelon(M.p, M.rows)
    for col in M.iter_columns():
        echelon.add(col)
    return echelon.rank


def kernel_basis(M: FpMatrix) -> FpMatrix:
    """Columns form the reduced-echelon basis of ker M, ordered by free column."""
    p = M.p
    if not M.is_sparse:
        reduced, pivots = _rref_dense(M._dense, p)
        free = [c for c in range(M.cols) if c not in set(pivots)]
        basis = np.zeros((M.cols, len(free)), dtype=np.int64)
        for k, f in enumerate(free):
            basis[f, k] = 1
            for i, pc in enumerate(pivots):
                basis[pc, k] = (-reduced[i, f]) % p
        return FpMatrix._choose(p, M.cols, len(free), dense=basis)

    log.debug("kernel_basis: sparse elimination on %s", M)
    echelon = ColumnEchelon(p, M.rows)
    relations = []
    for j, col in enumerate(M.iter_columns()):
        relation = echelon.add_labelled(col, j)
        if relation is not None:
            relations.append(relation)
    # canonical form: reduce with the highest coordinate (the free column) as pivot
    top = M.cols - 1
    canon = ColumnEchelon(p, M.cols)
    for rel in relations:
        canon.add({top - i: v for i, v in rel.items()})
    columns = sorted(
        ({top - i: v for i, v in col.items()} for _, col in canon.reduced_columns()),
        key=lambda col: max(col),
    )
    return FpMatrix.from_columns(p, M.cols, columns)


def subspace_leq(U: FpMatrix, V: FpMatrix) -> bool:
    """True iff the column span of U lies inside the column span of V."""
    if U.p != V.p:
        raise DimensionError(f"modulus mismatch: {U.p} != {V.p}")
    if U.rows != V.rows:
        raise DimensionError(f"row count mismatch: {U.rows} != {V.rows}")
    if U.cols == 0:
        return True
    return rank(V) == rank(FpMatrix.hstack([V, U]))


def mat_pow(M: FpMatrix, k: int) -> FpMatrix:
    if not M.is_square:
        raise ShapeError(f"mat_pow needs a square matrix, got {M.shape}")
    if k < 0:
        raise ArgumentError(f"negative exponent {k}")
    result = FpMatrix.identity(M.p, M.rows)
    base = M
    while k:
        if k & 1:
            result = result @ base
        k >>= 1
        if k:
            base = base @ base
    return result
