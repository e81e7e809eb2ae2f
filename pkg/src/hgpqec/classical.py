"""Classical codes on factor graphs and the flip decoder.

A factor graph turns into a parity-check matrix with rows indexed by checks
and columns by variables.  flip repeatedly flips any variable with at least
ceil(deg/2) unsatisfied incident checks; with odd variable degrees every
flip strictly lowers the number of unsatisfied checks, and a hard cap of
2 * n_checks flips guards the even-degree stall case.  The Monte Carlo
benchmark under a binary symmetric channel is the graph pre-selection
heuristic: candidate factor graphs are ranked by flip block-error rate.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .gf2 import BitVector, DimensionMismatchError, SparseBitMatrix
from .graphs import BiregularBipartiteGraph


class ClassicalCode:
    """A linear code defined by a factor graph.

    orientation 'standard' treats the left side as variables (H is
    n_right x n_left); 'transposed' swaps the roles, giving the code whose
    parity-check matrix is the transpose.
    """

    def __init__(self, g: BiregularBipartiteGraph, orientation: str = "standard"):
        if orientation not in ("standard", "transposed"):
            raise ValueError("orientation must be 'standard' or 'transposed'")
        self.source_graph = g
        self.orientation = orientation
        if orientation == "standard":
            self.n_vars = g.n_left
            self.n_checks = g.n_right
            rows = [g.right_neighbors(j) for j in range(g.n_right)]
            self._var_deg = g.deg_left
        else:
            self.n_vars = g.n_right
            self.n_checks = g.n_left
            rows = [g.left_neighbors(i) for i in range(g.n_left)]
            self._var_deg = g.deg_right
        self.H = SparseBitMatrix(self.n_checks, self.n_vars, rows)
        # Adjacency both ways for the decoder loops.
        self._check_vars = [self.H.rows[j].support for j in range(self.n_checks)]
        var_checks: list[list[int]] = [[] for _ in range(self.n_vars)]
        for j, sup in enumerate(self._check_vars):
            for v in sup:
                var_checks[int(v)].append(j)
        self._var_checks = [np.asarray(c, dtype=np.int64) for c in var_checks]

    def syndrome(self, word: np.ndarray) -> np.ndarray:
        sigma = np.zeros(self.n_checks, dtype=np.uint8)
        for v in np.nonzero(word)[0]:
            sigma[self._var_checks[v]] ^= 1
        return sigma


def code_from_graph(g: BiregularBipartiteGraph, orientation: str = "standard") -> ClassicalCode:
    return ClassicalCode(g, orientation)


@dataclass(frozen=True)
class FlipOutcome:
    converged: bool
    deduced_error: BitVector | None
    iterations: int
    stalled: bool


def flip_decode(code: ClassicalCode, y: BitVector) -> FlipOutcome:
    """Decode a corrupted word with flip.

    Scans variables from index 0, flips the first one with at least
    ceil(deg/2) unsatisfied checks, and rescans from 0.  Returns the
    deduced error y xor w when the final syndrome is zero, FAIL otherwise;
    hitting the 2 * n_checks flip cap reports FAIL with stalled=True.
    """
    if y.length != code.n_vars:
        raise DimensionMismatchError(f"word length {y.length} != n_vars {code.n_vars}")
    w = y.to_dense().copy()
    sigma = code.syndrome(w)
    unsat = np.zeros(code.n_vars, dtype=np.int64)
    for v in range(code.n_vars):
        unsat[v] = int(sigma[code._var_checks[v]].sum())
    thresh = (code._var_deg + 1) // 2
    cap = 2 * code.n_checks
    flips = 0
    stalled = False
    i = 0
    while i < code.n_vars:
        if unsat[i] >= thresh:
            if flips >= cap:
                stalled = True
                break
            w[i] ^= 1
            flips += 1
            for c in code._var_checks[i]:
                if sigma[c]:
                    sigma[c] = 0
                    for v in code._check_vars[c]:
                        unsat[v] -= 1
                else:
                    sigma[c] = 1
                    for v in code._check_vars[c]:
                        unsat[v] += 1
            i = 0
        else:
            i += 1
    if not stalled and not sigma.any():
        return FlipOutcome(True, BitVector.from_dense(y.to_dense() ^ w), flips, False)
    return FlipOutcome(False, None, flips, stalled)


def flip_benchmark(code: ClassicalCode, p: float, trials: int, seed: int) -> float:
    """Block-error rate of flip over a BSC(p), transmitting the zero codeword.

    Each trial draws its error from a counter-based stream keyed by
    (seed, trial_index), so the estimate is independent of trial order.
    A trial fails unless the decoder converges to exactly the true error.
    """
    if not 0.0 <= p <= 1.0:
        raise ValueError("p must be in [0, 1]")
    failures = 0
    for t in range(trials):
        rng = np.random.Generator(np.random.Philox(key=np.array([seed, t], dtype=np.uint64)))
        err = (rng.random(code.n_vars) < p).astype(np.uint8)
        out = flip_decode(code, BitVector.from_dense(err))
        if not out.converged or not np.array_equal(out.deduced_error.to_dense(), err):
            failures += 1
    return failures / trials


def select_best_graph(
    candidates: list[BiregularBipartiteGraph],
    p: float,
    trials: int,
    seed: int,
) -> BiregularBipartiteGraph:
    """Pick the candidate whose flip block-error rate is lowest.

    All candidates are benchmarked with the same (p, trials, seed); ties go
    to the lowest index.
    """
    if not candidates:
        raise ValueError("candidate list is empty")
    best_idx = 0
    best_rate = None
    for idx, g in enumerate(candidates):
        rate = flip_benchmark(code_from_graph(g), p, trials, seed)
        if best_rate is None or rate < best_rate:
            best_rate = rate
            best_idx = idx
    return candidates[best_idx]
