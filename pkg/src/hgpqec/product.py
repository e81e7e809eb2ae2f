"""Hypergraph product CSS codes.

Two factor graphs G1, G2 with parity-check matrices H1 (m1 x n1) and
H2 (m2 x n2) produce a CSS code on n1*n2 + m1*m2 qubits.  Qubits are
indexed row-major over V1 x V2 first, then row-major over C1 x C2.  With
blocks written [V-block | C-block]:

    H_X = [ I_{n1} (x) H2   |  H1^T (x) I_{m2} ]   rows indexed by V1 x C2
    H_Z = [ H1 (x) I_{n2}   |  I_{m1} (x) H2^T ]   rows indexed by C1 x V2

so H_X H_Z^T = H1^T (x) H2 + H1^T (x) H2 = 0 over GF(2) by construction.
The row orderings above are part of the on-disk contract.

Logical-operator bases and exact distances are computed only for small
instances; both go through dense enumerations with explicit budgets.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .gf2 import BitVector, SparseBitMatrix
from .graphs import BiregularBipartiteGraph, BudgetExceededError


class ConstructionError(AssertionError):
    """A structural invariant failed during code construction."""


@dataclass(frozen=True)
class CodeParameters:
    n_qubits: int
    k: int
    rate: float


class CssCode:
    """Paired X/Z parity-check matrices with qubit-block bookkeeping.

    Instances are built by hypergraph_product and are immutable; the CSS
    orthogonality H_X H_Z^T = 0 is asserted at construction.  Logical-qubit
    counts are computed lazily because they need two large-matrix ranks.
    """

    def __init__(
        self,
        h_x: SparseBitMatrix,
        h_z: SparseBitMatrix,
        block_split: tuple[int, int],
        g1: BiregularBipartiteGraph,
        g2: BiregularBipartiteGraph,
    ):
        if h_x.n_cols != h_z.n_cols:
            raise ConstructionError("H_X and H_Z disagree on qubit count")
        self.h_x = h_x
        self.h_z = h_z
        self.n_qubits = h_x.n_cols
        self.block_split = block_split
        self.g1 = g1
        self.g2 = g2
        self._params: CodeParameters | None = None
        prod = (self.h_x.to_scipy().astype(np.int64) @ self.h_z.to_scipy().astype(np.int64).T)
        if prod.nnz and np.any(prod.data % 2 != 0):
            raise ConstructionError("CSS orthogonality H_X H_Z^T = 0 violated")

    @property
    def params(self) -> CodeParameters:
        if self._params is None:
            self._params = code_parameters(self)
        return self._params


def hypergraph_product(
    g1: BiregularBipartiteGraph, g2: BiregularBipartiteGraph
) -> CssCode:
    """Build the CSS product code of two factor graphs."""
    n1, m1 = g1.n_left, g1.n_right
    n2, m2 = g2.n_left, g2.n_right
    v_block = n1 * n2
    c_block = m1 * m2

    # X generator (v1, c2): qubits (v1, v) for v adjacent to c2, plus
    # (c, c2) for c adjacent to v1.  Supports come out sorted because the
    # V block precedes the C block and neighbor lists are sorted.
    hx_rows = []
    for v1 in range(n1):
        v1_checks = g1.left_neighbors(v1)
        for c2 in range(m2):
            sup = [v1 * n2 + int(v) for v in g2.right_neighbors(c2)]
            sup += [v_block + int(c) * m2 + c2 for c in v1_checks]
            hx_rows.append(sup)
    hz_rows = []
    for c1 in range(m1):
        c1_vars = g1.right_neighbors(c1)
        for v2 in range(n2):
            sup = [int(v) * n2 + v2 for v in c1_vars]
            sup += [v_block + c1 * m2 + int(c) for c in g2.left_neighbors(v2)]
            hz_rows.append(sup)

    n_qubits = v_block + c_block
    h_x = SparseBitMatrix(n1 * m2, n_qubits, hx_rows)
    h_z = SparseBitMatrix(m1 * n2, n_qubits, hz_rows)
    return CssCode(h_x, h_z, (v_block, c_block), g1, g2)


def code_parameters(code: CssCode) -> CodeParameters:
    """Block size, logical-qubit count and rate.

    k is computed two ways: N - rank(H_X) - rank(H_Z) and
    k1*k2 + k1T*k2T from the factor codes; a mismatch means the
    construction is broken.
    """
    n = code.n_qubits
    k_rank = n - code.h_x.rank() - code.h_z.rank()
    r1 = SparseBitMatrix(
        code.g1.n_right, code.g1.n_left,
        [code.g1.right_neighbors(j) for j in range(code.g1.n_right)],
    ).rank()
    r2 = SparseBitMatrix(
        code.g2.n_right, code.g2.n_left,
        [code.g2.right_neighbors(j) for j in range(code.g2.n_right)],
    ).rank()
    k1, k1t = code.g1.n_left - r1, code.g1.n_right - r1
    k2, k2t = code.g2.n_left - r2, code.g2.n_right - r2
    k_formula = k1 * k2 + k1t * k2t
    if k_rank != k_formula:
        raise ConstructionError(
            f"logical count mismatch: rank-based {k_rank} != factor-based {k_formula}"
        )
    return CodeParameters(n_qubits=n, k=k_rank, rate=k_rank / n)


# -- small-instance linear algebra over GF(2) (int bitmasks) -----------------
#
# These helpers back the logical-basis and exact-distance oracles.  They are
# deliberately independent of the packed kernels: plain python integers as
# row bitmasks, O(n^3)-ish, fine for the desk-scale codes they serve.


def _rows_as_ints(m: SparseBitMatrix) -> list[int]:
    return [sum(1 << int(i) for i in row.support) for row in m.rows]


class _IntEchelon:
    """Growing echelon basis over GF(2) with int-bitmask rows."""

    def __init__(self, rows: list[int] = ()):
        self.pivot_rows: dict[int, int] = {}
        for r in rows:
            self.add(r)

    def reduce(self, v: int) -> int:
        while v:
            p = v.bit_length() - 1
            row = self.pivot_rows.get(p)
            if row is None:
                return v
            v ^= row
        return 0

    def add(self, v: int) -> bool:
        v = self.reduce(v)
        if v == 0:
            return False
        self.pivot_rows[v.bit_length() - 1] = v
        return True

    def __contains__(self, v: int) -> bool:
        return self.reduce(v) == 0


def _kernel_basis(m: SparseBitMatrix) -> list[int]:
    """Basis of the right kernel of m, as int bitmasks of length n_cols."""
    n = m.n_cols
    rows = [r for r in _rows_as_ints(m) if r]
    pivots: list[int] = []
    reduced: list[int] = []
    for row in rows:
        for p, rr in zip(pivots, reduced):
            if (row >> p) & 1:
                row ^= rr
        if row == 0:
            continue
        p = row.bit_length() - 1
        # Normalize earlier rows so each pivot column appears once.
        for i, rr in enumerate(reduced):
            if (rr >> p) & 1:
                reduced[i] = rr ^ row
        pivots.append(p)
        reduced.append(row)
    pivot_set = set(pivots)
    basis = []
    for free in range(n):
        if free in pivot_set:
            continue
        vec = 1 << free
        for p, rr in zip(pivots, reduced):
            if (rr >> free) & 1:
                vec |= 1 << p
        basis.append(vec)
    return basis


def _int_to_bitvector(v: int, length: int) -> BitVector:
    return BitVector(length, [i for i in range(length) if (v >> i) & 1])


@dataclass(frozen=True)
class LogicalBasis:
    """Coset representatives of the logical operators.

    z_logicals spans ker(H_X) modulo rowspace(H_Z); x_logicals the mirror.
    Both lists have exactly k entries.
    """

    z_logicals: tuple[BitVector, ...]
    x_logicals: tuple[BitVector, ...]


def logical_basis(code: CssCode) -> LogicalBasis:
    """Enumerate logical coset representatives (small instances only)."""

    def sector(h_ker: SparseBitMatrix, h_stab: SparseBitMatrix) -> list[BitVector]:
        ech = _IntEchelon(_rows_as_ints(h_stab))
        logicals = []
        for vec in _kernel_basis(h_ker):
            if ech.add(vec):
                logicals.append(_int_to_bitvector(vec, code.n_qubits))
        return logicals

    z_logicals = sector(code.h_x, code.h_z)
    x_logicals = sector(code.h_z, code.h_x)
    k = code.params.k
    if len(z_logicals) != k or len(x_logicals) != k:
        raise ConstructionError(
            f"logical basis size mismatch: {len(z_logicals)}/{len(x_logicals)} vs k={k}"
        )
    return LogicalBasis(tuple(z_logicals), tuple(x_logicals))


@dataclass(frozen=True)
class DistanceResult:
    d_x: float
    d_z: float
    d: float


def _sector_distance(h_ker: SparseBitMatrix, h_stab: SparseBitMatrix, budget_bits: int) -> float:
    basis = _kernel_basis(h_ker)
    dim = len(basis)
    if dim > budget_bits:
        raise BudgetExceededError(
            f"kernel dimension {dim} exceeds enumeration budget 2^{budget_bits}"
        )
    ech = _IntEchelon(_rows_as_ints(h_stab))
    best = math.inf
    vec = 0
    # Gray-code walk over the kernel span.
    for idx in range(1, 1 << dim):
        vec ^= basis[(idx & -idx).bit_length() - 1]
        w = vec.bit_count()
        if w < best and ech.reduce(vec) != 0:
            best = w
    return best


def classical_minimum_distance(h: SparseBitMatrix, budget_bits: int = 22) -> float:
    """Exact minimum distance of ker(h); inf for the zero code."""
    basis = _kernel_basis(h)
    dim = len(basis)
    if dim > budget_bits:
        raise BudgetExceededError(
            f"kernel dimension {dim} exceeds enumeration budget 2^{budget_bits}"
        )
    best = math.inf
    vec = 0
    for idx in range(1, 1 << dim):
        vec ^= basis[(idx & -idx).bit_length() - 1]
        best = min(best, vec.bit_count())
    return best


def brute_force_distance(code: CssCode, budget_bits: int = 22) -> DistanceResult:
    """Exact X/Z distances by exhaustive coset enumeration.

    d_Z is the minimum weight over ker(H_X) \\ rowspace(H_Z), d_X the
    mirror, d their minimum.  When the factor codes are themselves small
    enough to brute-force, the min(d1, d2T)-style identities are
    recomputed from classical distances and verified against the coset
    search.  Refuses when a kernel dimension exceeds budget_bits.
    """
    d_z = _sector_distance(code.h_x, code.h_z, budget_bits)
    d_x = _sector_distance(code.h_z, code.h_x, budget_bits)
    result = DistanceResult(d_x=d_x, d_z=d_z, d=min(d_x, d_z))

    def factor_matrices(g: BiregularBipartiteGraph) -> tuple[SparseBitMatrix, SparseBitMatrix]:
        h = SparseBitMatrix(
            g.n_right, g.n_left, [g.right_neighbors(j) for j in range(g.n_right)]
        )
        return h, h.transpose()

    try:
        h1, h1t = factor_matrices(code.g1)
        h2, h2t = factor_matrices(code.g2)
        d1 = classical_minimum_distance(h1, budget_bits)
        d1t = classical_minimum_distance(h1t, budget_bits)
        d2 = classical_minimum_distance(h2, budget_bits)
        d2t = classical_minimum_distance(h2t, budget_bits)
    except BudgetExceededError:
        return result
    expect_x = min(d1t, d2)
    expect_z = min(d1, d2t)
    if code.params.k > 0 and (expect_x != d_x or expect_z != d_z):
        raise ConstructionError(
            f"distance cross-check failed: coset search ({d_x}, {d_z}) vs "
            f"factor formula ({expect_x}, {expect_z})"
        )
    return result
