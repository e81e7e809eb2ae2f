"""The small-set-flip decoder.

Decoding searches the power sets of the stabilizer generators of one type
for the subset that maximally reduces the opposite-type syndrome weight per
flipped qubit.  For a product code every generator's subset images live on
an exact (a x b) grid of checks: each support qubit from the V block flips
one full grid line and each C-block qubit flips one line of the other
orientation.  The catalog stores that grid structure per generator, an
index from each check to the generators whose windows contain it, and the
shared per-subset weight/image tables (identical for all generators of a
sector in canonical window coordinates).

Subset bitmasks are read over the generator's sorted support: bit k is the
k-th smallest support qubit, and masks compare as plain integers.  The
argmax tie-break is: larger ratio, then smaller subset, then lower
generator index (row order of the generator matrix), then smaller mask.
Ratio comparisons use integer cross-multiplication throughout; no floats.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import _kernels
from .gf2 import BitVector, DimensionMismatchError
from .graphs import BudgetExceededError
from .product import CssCode

SECTORS = ("z", "x")


@dataclass(frozen=True)
class SmallSetCatalog:
    """Per-generator subset tables for one decoding sector.

    sector 'z' decodes Z errors: subsets of Z-generator supports scored
    against the X-check syndrome.  sector 'x' is the mirror.  Window cell
    (i, j) of generator g is check win_checks[g, i*b + j]; support qubit k
    is first_qubits[g, k] for k < a and second_qubits[g, k - a] otherwise,
    in increasing qubit order.  subset_cell_patterns[mask] gives the XOR of
    window cells flipped by that subset, as an (a*b)-bit integer in cell
    order, shared by every generator of the sector.
    """

    sector: str
    n_generators: int
    n_checks: int
    n_qubits: int
    a: int
    b: int
    win_checks: np.ndarray
    first_qubits: np.ndarray
    second_qubits: np.ndarray
    check_indptr: np.ndarray
    check_gens: np.ndarray
    check_cells: np.ndarray
    subset_weights: np.ndarray
    subset_cell_patterns: np.ndarray

    @property
    def generator_weight(self) -> int:
        return self.a + self.b

    @property
    def subsets_per_generator(self) -> int:
        return (1 << self.generator_weight) - 1

    def generator_support(self, g: int) -> np.ndarray:
        """Sorted qubit support of generator g."""
        return np.concatenate([self.first_qubits[g], self.second_qubits[g]])

    def subset_qubits(self, g: int, mask: int) -> np.ndarray:
        """Qubits selected by a subset bitmask of generator g."""
        sup = self.generator_support(g)
        return sup[[k for k in range(self.generator_weight) if (mask >> k) & 1]]

    def syndrome_image(self, g: int, mask: int) -> BitVector:
        """Cached syndrome image of subset `mask` of generator g."""
        pattern = int(self.subset_cell_patterns[mask])
        cells = [c for c in range(self.a * self.b) if (pattern >> c) & 1]
        return BitVector(self.n_checks, self.win_checks[g, cells])


def build_catalog(code: CssCode, sector: str, weight_cap: int = 20) -> SmallSetCatalog:
    """Precompute the subset catalog for one sector of a product code.

    Refuses generators heavier than weight_cap, since the subset tables
    grow as 2^weight.
    """
    if sector not in SECTORS:
        raise ValueError(f"sector must be one of {SECTORS}")
    g1, g2 = code.g1, code.g2
    n1, m1 = g1.n_left, g1.n_right
    n2, m2 = g2.n_left, g2.n_right
    v_block = n1 * n2

    if sector == "z":
        # Z generator (c1, v2), in H_Z row order.  V-block qubits are the
        # a row selectors, C-block qubits the b column selectors; window
        # cell (i, j) is X-check (v_i, c_j).
        a, b = g1.deg_right, g2.deg_left
        n_gens = m1 * n2
        n_checks = n1 * m2
        weight = a + b
        if weight > weight_cap:
            raise BudgetExceededError(
                f"generator weight {weight} exceeds cap {weight_cap}"
            )
        win = np.empty((n_gens, a * b), dtype=np.int32)
        first = np.empty((n_gens, a), dtype=np.int32)
        second = np.empty((n_gens, b), dtype=np.int32)
        for c1 in range(m1):
            rows_v = g1.right_neighbors(c1)
            for v2 in range(n2):
                g = c1 * n2 + v2
                cols_c = g2.left_neighbors(v2)
                for i, v in enumerate(rows_v):
                    first[g, i] = v * n2 + v2
                    base = i * b
                    for j, c in enumerate(cols_c):
                        win[g, base + j] = v * m2 + c
                for j, c in enumerate(cols_c):
                    second[g, j] = v_block + c1 * m2 + c
    else:
        # X generator (v1, c2), in H_X row order.  V-block qubits (v1, v)
        # select rows of the transposed window, C-block qubits (c, c2)
        # select columns; window cell (i, j) is Z-check (c_j, v_i).
        a, b = g2.deg_right, g1.deg_left
        n_gens = n1 * m2
        n_checks = m1 * n2
        weight = a + b
        if weight > weight_cap:
            raise BudgetExceededError(
                f"generator weight {weight} exceeds cap {weight_cap}"
            )
        win = np.empty((n_gens, a * b), dtype=np.int32)
        first = np.empty((n_gens, a), dtype=np.int32)
        second = np.empty((n_gens, b), dtype=np.int32)
        for v1 in range(n1):
            cols_c = g1.left_neighbors(v1)
            for c2 in range(m2):
                g = v1 * m2 + c2
                rows_v = g2.right_neighbors(c2)
                for i, v in enumerate(rows_v):
                    first[g, i] = v1 * n2 + v
                    base = i * b
                    for j, c in enumerate(cols_c):
                        win[g, base + j] = c * n2 + v
                for j, c in enumerate(cols_c):
                    second[g, j] = v_block + c * m2 + c2

    # Check -> (generator, cell) incidence, CSR over checks.
    counts = np.zeros(n_checks + 1, dtype=np.int32)
    for g in range(n_gens):
        for cell in range(a * b):
            counts[win[g, cell] + 1] += 1
    indptr = np.cumsum(counts, dtype=np.int32)
    fill = indptr[:-1].copy()
    gens = np.empty(indptr[-1], dtype=np.int32)
    cells = np.empty(indptr[-1], dtype=np.int32)
    for g in range(n_gens):
        for cell in range(a * b):
            c = win[g, cell]
            gens[fill[c]] = g
            cells[fill[c]] = cell
            fill[c] += 1

    # Shared subset tables in canonical window coordinates.  Selector k < a
    # flips row k (cells k*b .. k*b+b-1); selector a+j flips column j.
    lines = np.empty(weight, dtype=np.uint64)
    row_line = (1 << b) - 1
    for i in range(a):
        lines[i] = row_line << (i * b)
    for j in range(b):
        col = 0
        for i in range(a):
            col |= 1 << (i * b + j)
        lines[a + j] = col
    patterns = np.zeros(1 << weight, dtype=np.uint64)
    for k in range(weight):
        size = 1 << k
        patterns[size: 2 * size] = patterns[:size] ^ lines[k]
    weights = np.bitwise_count(np.arange(1 << weight, dtype=np.uint64)).astype(np.uint8)

    return SmallSetCatalog(
        sector=sector,
        n_generators=n_gens,
        n_checks=n_checks,
        n_qubits=code.n_qubits,
        a=a,
        b=b,
        win_checks=win,
        first_qubits=first,
        second_qubits=second,
        check_indptr=indptr,
        check_gens=gens,
        check_cells=cells,
        subset_weights=weights,
        subset_cell_patterns=patterns,
    )


@dataclass(frozen=True)
class DecodeOutcome:
    """Result of one small-set-flip run.

    converged is equivalent to final_syndrome_weight == 0; the deduced
    error always satisfies syndrome(deduced_error) = sigma0 xor final
    syndrome.  flip_trace holds the applied (generator, subset mask) pairs.
    """

    converged: bool
    deduced_error: BitVector
    iterations: int
    final_syndrome_weight: int
    flip_trace: tuple[tuple[int, int], ...] = ()

    @property
    def status(self) -> str:
        return "converged" if self.converged else "FAIL"


def small_set_flip(catalog: SmallSetCatalog, sigma0: BitVector) -> DecodeOutcome:
    """Run small-set-flip on a syndrome.

    Applies the argmax-ratio subset until no subset strictly reduces the
    syndrome weight; each iteration strictly decreases it, so the loop
    terminates within weight(sigma0) iterations.
    """
    if sigma0.length != catalog.n_checks:
        raise DimensionMismatchError(
            f"syndrome length {sigma0.length} != checks {catalog.n_checks}"
        )
    sigma = sigma0.to_dense()
    return _decode_dense(catalog, sigma, want_trace=True)


_EMPTY_TRACE = (np.zeros(0, dtype=np.int32), np.zeros(0, dtype=np.int64))


def _decode_raw(catalog: SmallSetCatalog, sigma: np.ndarray, trace_cap: int = 0):
    """Decode a dense uint8 syndrome in place; returns plain arrays."""
    ehat = np.zeros(catalog.n_qubits, dtype=np.uint8)
    if trace_cap > 0:
        trace_gens = np.zeros(trace_cap, dtype=np.int32)
        trace_masks = np.zeros(trace_cap, dtype=np.int64)
    else:
        trace_gens, trace_masks = _EMPTY_TRACE
    converged, iterations, final_weight, monotone = _kernels.ssf_decode(
        sigma,
        catalog.a,
        catalog.b,
        catalog.win_checks,
        catalog.first_qubits,
        catalog.second_qubits,
        catalog.check_indptr,
        catalog.check_gens,
        catalog.check_cells,
        ehat,
        trace_gens,
        trace_masks,
    )
    if not monotone:
        raise AssertionError("syndrome weight failed to decrease strictly")
    return bool(converged), ehat, int(iterations), int(final_weight), trace_gens, trace_masks


def _decode_dense(catalog: SmallSetCatalog, sigma: np.ndarray,
                  want_trace: bool = False) -> DecodeOutcome:
    cap = int(sigma.sum()) if want_trace else 0
    converged, ehat, iterations, final_weight, tg, tm = _decode_raw(
        catalog, sigma, trace_cap=cap
    )
    trace = tuple((int(tg[i]), int(tm[i])) for i in range(iterations)) if want_trace else ()
    return DecodeOutcome(
        converged=converged,
        deduced_error=BitVector.from_dense(ehat),
        iterations=iterations,
        final_syndrome_weight=final_weight,
        flip_trace=trace,
    )


@dataclass(frozen=True)
class CssDecodeResult:
    """Outcomes of the two independent sector decodes.

    z_outcome deduces the Z error from the X syndrome, x_outcome the X
    error from the Z syndrome.
    """

    z_outcome: DecodeOutcome
    x_outcome: DecodeOutcome


def decode_css(
    code: CssCode,
    catalogs: tuple[SmallSetCatalog, SmallSetCatalog],
    x_syndrome: BitVector,
    z_syndrome: BitVector,
) -> CssDecodeResult:
    """Decode both sectors independently.

    catalogs is (z-sector catalog, x-sector catalog) as built by
    build_catalog(code, 'z') and build_catalog(code, 'x').
    """
    cat_z, cat_x = catalogs
    if cat_z.sector != "z" or cat_x.sector != "x":
        raise ValueError("catalogs must be (z, x) in that order")
    z_outcome = small_set_flip(cat_z, x_syndrome)
    x_outcome = small_set_flip(cat_x, z_syndrome)
    return CssDecodeResult(z_outcome=z_outcome, x_outcome=x_outcome)
