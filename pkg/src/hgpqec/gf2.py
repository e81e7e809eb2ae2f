"""GF(2) vectors and sparse parity-check matrices.

BitVector carries a sorted integer support; SparseBitMatrix keeps per-row
supports plus a packed machine-word mirror that feeds the elimination and
membership kernels.  Matrices are immutable after construction, so the
row-echelon basis behind in_row_space is computed on first use and cached
for the lifetime of the object.  All coordinate indices are 0-based,
including the text format.
"""

from __future__ import annotations

from typing import Iterable, Sequence

import numpy as np
from scipy import sparse

from . import _kernels


class DimensionMismatchError(ValueError):
    """Vector/matrix dimensions do not line up; indicates a caller bug."""


class BitVector:
    """A vector over GF(2), stored as a strictly increasing support.

    Args:
        length: Number of coordinates.
        support: Iterable of indices holding 1.  Must be strictly
            increasing once sorted and all < length; duplicates are
            rejected rather than cancelled.
    """

    __slots__ = ("length", "support")

    def __init__(self, length: int, support: Iterable[int] = ()):
        sup = np.asarray(list(support) if not isinstance(support, np.ndarray) else support,
                         dtype=np.int64)
        if sup.size:
            sup = np.sort(sup)
            if sup[0] < 0 or sup[-1] >= length:
                raise ValueError(f"support index out of range for length {length}")
            if np.any(np.diff(sup) == 0):
                raise ValueError("support indices must be distinct")
        self.length = int(length)
        self.support = sup

    @classmethod
    def from_dense(cls, dense) -> "BitVector":
        dense = np.asarray(dense)
        vec = cls.__new__(cls)
        vec.length = int(dense.shape[0])
        vec.support = np.nonzero(dense)[0].astype(np.int64)
        return vec

    @property
    def weight(self) -> int:
        return int(self.support.size)

    def to_dense(self) -> np.ndarray:
        dense = np.zeros(self.length, dtype=np.uint8)
        dense[self.support] = 1
        return dense

    def packed(self) -> np.ndarray:
        words = np.zeros((self.length + 63) >> 6, dtype=np.uint64)
        _kernels.pack_bits(self.to_dense(), words)
        return words

    def __xor__(self, other: "BitVector") -> "BitVector":
        if self.length != other.length:
            raise DimensionMismatchError("xor of vectors with different lengths")
        return BitVector.from_dense(self.to_dense() ^ other.to_dense())

    def __eq__(self, other) -> bool:
        if not isinstance(other, BitVector):
            return NotImplemented
        return self.length == other.length and np.array_equal(self.support, other.support)

    def __hash__(self):
        return hash((self.length, self.support.tobytes()))

    def __repr__(self) -> str:
        return f"BitVector(length={self.length}, support={self.support.tolist()})"


class SparseBitMatrix:
    """A binary matrix stored as per-row supports.

    Rows double as packed bitsets for the elimination kernels.  Instances
    are immutable: mutate nothing after construction, and the cached
    echelon basis / rank / scipy mirror stay valid.
    """

    def __init__(self, n_rows: int, n_cols: int, row_supports: Sequence[Iterable[int]]):
        if len(row_supports) != n_rows:
            raise ValueError(f"expected {n_rows} rows, got {len(row_supports)}")
        self.n_rows = int(n_rows)
        self.n_cols = int(n_cols)
        self.rows = tuple(
            sup if isinstance(sup, BitVector) else BitVector(n_cols, sup)
            for sup in row_supports
        )
        for r in self.rows:
            if r.length != n_cols:
                raise DimensionMismatchError("row length differs from n_cols")
        self._packed: np.ndarray | None = None
        self._echelon: tuple[np.ndarray, np.ndarray, int] | None = None
        self._rank: int | None = None
        self._csr: sparse.csr_matrix | None = None

    # -- construction helpers -------------------------------------------------

    @classmethod
    def from_dense(cls, dense) -> "SparseBitMatrix":
        dense = np.asarray(dense)
        return cls(dense.shape[0], dense.shape[1],
                   [np.nonzero(row)[0] for row in dense])

    @classmethod
    def identity(cls, n: int) -> "SparseBitMatrix":
        return cls(n, n, [[i] for i in range(n)])

    def to_dense(self) -> np.ndarray:
        dense = np.zeros((self.n_rows, self.n_cols), dtype=np.uint8)
        for i, row in enumerate(self.rows):
            dense[i, row.support] = 1
        return dense

    def to_scipy(self) -> sparse.csr_matrix:
        if self._csr is None:
            indptr = np.zeros(self.n_rows + 1, dtype=np.int64)
            for i, row in enumerate(self.rows):
                indptr[i + 1] = indptr[i] + row.weight
            indices = (np.concatenate([r.support for r in self.rows])
                       if self.n_rows else np.zeros(0, dtype=np.int64))
            data = np.ones(indptr[-1], dtype=np.uint8)
            self._csr = sparse.csr_matrix(
                (data, indices, indptr), shape=(self.n_rows, self.n_cols)
            )
        return self._csr

    def packed_rows(self) -> np.ndarray:
        if self._packed is None:
            words = max(1, (self.n_cols + 63) >> 6)
            packed = np.zeros((self.n_rows, words), dtype=np.uint64)
            for i, row in enumerate(self.rows):
                for j in row.support:
                    packed[i, j >> 6] |= np.uint64(1) << np.uint64(j & 63)
            self._packed = packed
        return self._packed

    # -- core operations ------------------------------------------------------

    def mat_vec_mul(self, v: BitVector) -> BitVector:
        """Matrix-vector product over GF(2)."""
        if v.length != self.n_cols:
            raise DimensionMismatchError(
                f"vector length {v.length} != n_cols {self.n_cols}"
            )
        prod = self.to_scipy() @ v.to_dense().astype(np.int64)
        return BitVector.from_dense((prod & 1).astype(np.uint8))

    def rank(self) -> int:
        """GF(2) row rank via Gaussian elimination (cached).

        Shares the elimination with the in_row_space echelon basis, so the
        work is done once per matrix.
        """
        if self._rank is None:
            self._rank = self._echelon_basis()[2]
        return self._rank

    def _echelon_basis(self) -> tuple[np.ndarray, np.ndarray, int]:
        if self._echelon is None:
            words = max(1, (self.n_cols + 63) >> 6)
            if self.n_rows == 0:
                self._echelon = (np.zeros((0, words), dtype=np.uint64),
                                 np.zeros(0, dtype=np.int64), 0)
            else:
                work = self.packed_rows().copy()
                pivots = np.zeros(self.n_rows, dtype=np.int64)
                count = int(_kernels.echelon_inplace(work, self.n_cols, pivots))
                self._echelon = (work[:count].copy(), pivots[:count].copy(), count)
                if self._rank is None:
                    self._rank = count
        return self._echelon

    def in_row_space(self, v: BitVector) -> bool:
        """Whether v is a GF(2) combination of the rows (cached basis)."""
        if v.length != self.n_cols:
            raise DimensionMismatchError(
                f"vector length {v.length} != n_cols {self.n_cols}"
            )
        basis, pivots, count = self._echelon_basis()
        return bool(_kernels.reduce_vs_echelon(v.packed(), basis, pivots, count))

    def in_row_space_dense(self, dense: np.ndarray) -> bool:
        """in_row_space for a dense uint8 vector, skipping the wrapper."""
        if dense.shape[0] != self.n_cols:
            raise DimensionMismatchError("dense vector length != n_cols")
        basis, pivots, count = self._echelon_basis()
        vec = np.zeros(max(1, (self.n_cols + 63) >> 6), dtype=np.uint64)
        _kernels.pack_bits(dense, vec)
        return bool(_kernels.reduce_vs_echelon(vec, basis, pivots, count))

    def transpose(self) -> "SparseBitMatrix":
        supports: list[list[int]] = [[] for _ in range(self.n_cols)]
        for i, row in enumerate(self.rows):
            for j in row.support:
                supports[j].append(i)
        return SparseBitMatrix(self.n_cols, self.n_rows, supports)

    def row_weights(self) -> np.ndarray:
        return np.array([r.weight for r in self.rows], dtype=np.int64)

    def col_weights(self) -> np.ndarray:
        weights = np.zeros(self.n_cols, dtype=np.int64)
        for row in self.rows:
            weights[row.support] += 1
        return weights

    def __eq__(self, other) -> bool:
        if not isinstance(other, SparseBitMatrix):
            return NotImplemented
        return (self.n_rows == other.n_rows and self.n_cols == other.n_cols
                and self.rows == other.rows)

    def __hash__(self):
        return hash((self.n_rows, self.n_cols, self.rows))

    def __repr__(self) -> str:
        return f"SparseBitMatrix({self.n_rows}x{self.n_cols})"


def write_matrix_text(m: SparseBitMatrix) -> str:
    """Serialize: first line `n_rows n_cols`, then one support line per row."""
    lines = [f"{m.n_rows} {m.n_cols}"]
    for row in m.rows:
        lines.append(" ".join(str(i) for i in row.support))
    return "\n".join(lines) + "\n"


def read_matrix_text(text: str) -> SparseBitMatrix:
    """Parse the format produced by write_matrix_text."""
    lines = text.split("\n")
    if not lines or not lines[0].strip():
        raise ValueError("empty matrix text")
    n_rows, n_cols = (int(tok) for tok in lines[0].split())
    if len(lines) < n_rows + 1:
        raise ValueError(f"expected {n_rows} row lines, found {len(lines) - 1}")
    supports = []
    for i in range(1, n_rows + 1):
        toks = lines[i].split()
        supports.append([int(t) for t in toks])
    return SparseBitMatrix(n_rows, n_cols, supports)
