"""Random biregular bipartite graphs and small-set expansion auditing.

Graphs come out of the configuration model: pair left and right half-edges
by a uniformly random permutation, and resample the whole pairing whenever
it contains a multi-edge so the returned graph is simple and exactly
biregular.  Expansion cannot be certified efficiently, so it is audited by
exhaustive subset enumeration up to a small size cap and reported as
empirical (gamma_hat, delta_hat) values.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from math import comb

import numpy as np


class GenerationError(RuntimeError):
    """Resampling budget exhausted while looking for a simple pairing."""


class BudgetExceededError(ValueError):
    """An exhaustive enumeration would exceed the configured budget."""


class BiregularBipartiteGraph:
    """A simple (deg_left, deg_right)-biregular bipartite graph.

    edges is an (E, 2) int array of (left, right) pairs, sorted
    lexicographically.  Construction validates exact biregularity,
    simplicity, and the handshake identity.
    """

    def __init__(self, n_left: int, n_right: int, deg_left: int, deg_right: int, edges):
        edges = np.asarray(edges, dtype=np.int64).reshape(-1, 2)
        order = np.lexsort((edges[:, 1], edges[:, 0]))
        edges = edges[order]
        if n_left * deg_left != n_right * deg_right:
            raise ValueError(
                f"handshake violation: {n_left}*{deg_left} != {n_right}*{deg_right}"
            )
        if edges.shape[0] != n_left * deg_left:
            raise ValueError("edge count does not match degrees")
        codes = edges[:, 0] * n_right + edges[:, 1]
        if np.unique(codes).size != codes.size:
            raise ValueError("duplicate edges: graph must be simple")
        left_deg = np.bincount(edges[:, 0], minlength=n_left)
        right_deg = np.bincount(edges[:, 1], minlength=n_right)
        if not (np.all(left_deg == deg_left) and np.all(right_deg == deg_right)):
            raise ValueError("graph is not exactly biregular")
        self.n_left = int(n_left)
        self.n_right = int(n_right)
        self.deg_left = int(deg_left)
        self.deg_right = int(deg_right)
        self.edges = edges
        # Neighbor lists, sorted; edges are lex-sorted so left adjacency is
        # a simple reshape.
        self._left_adj = edges[:, 1].reshape(n_left, deg_left).copy()
        self._left_adj.sort(axis=1)
        right_adj = np.zeros((n_right, deg_right), dtype=np.int64)
        fill = np.zeros(n_right, dtype=np.int64)
        for l, r in edges:
            right_adj[r, fill[r]] = l
            fill[r] += 1
        right_adj.sort(axis=1)
        self._right_adj = right_adj

    def left_neighbors(self, i: int) -> np.ndarray:
        """Sorted right-side neighbors of left node i."""
        return self._left_adj[i]

    def right_neighbors(self, j: int) -> np.ndarray:
        """Sorted left-side neighbors of right node j."""
        return self._right_adj[j]

    def __eq__(self, other) -> bool:
        if not isinstance(other, BiregularBipartiteGraph):
            return NotImplemented
        return (self.n_left == other.n_left and self.n_right == other.n_right
                and self.deg_left == other.deg_left
                and self.deg_right == other.deg_right
                and np.array_equal(self.edges, other.edges))

    def __repr__(self) -> str:
        return (f"BiregularBipartiteGraph(n_left={self.n_left}, n_right={self.n_right}, "
                f"degrees=({self.deg_left},{self.deg_right}))")


def _duplicate_stub_positions(left_stubs: np.ndarray, paired: np.ndarray, m: int) -> np.ndarray:
    """Stub positions carrying the second-and-later copies of a repeated edge."""
    codes = left_stubs * m + paired
    order = np.argsort(codes, kind="stable")
    repeats = np.nonzero(codes[order][1:] == codes[order][:-1])[0] + 1
    return order[repeats]


def generate_configuration_model(
    n: int,
    m: int,
    deg_left: int,
    deg_right: int,
    seed: int,
    max_attempts: int = 10_000,
    repair_rounds: int = 500,
) -> BiregularBipartiteGraph:
    """Sample a simple (deg_left, deg_right)-biregular graph.

    Pairs half-edges by a uniformly random shuffle.  A pairing with
    multi-edges is repaired by swapping each offending stub with a random
    partner (which preserves both degree sequences exactly) for up to
    repair_rounds passes before the whole pairing is resampled; pure
    resampling alone is hopeless for dense degree pairs, where the chance
    of an immediately simple pairing is about exp(-(dv-1)(dc-1)/2).

    Raises:
        ValueError: handshake violation or non-positive sizes.
        GenerationError: no simple pairing found within max_attempts.
    """
    if n < 1 or m < 1:
        raise ValueError("n and m must be at least 1")
    if deg_left < 1 or deg_right < 1:
        raise ValueError("degrees must be at least 1")
    if n * deg_left != m * deg_right:
        raise ValueError(
            f"handshake violation: n*deg_left={n * deg_left} != m*deg_right={m * deg_right}"
        )
    rng = np.random.default_rng(seed)
    left_stubs = np.repeat(np.arange(n, dtype=np.int64), deg_left)
    right_stubs = np.repeat(np.arange(m, dtype=np.int64), deg_right)
    n_stubs = left_stubs.shape[0]
    for _ in range(max_attempts):
        paired = rng.permutation(right_stubs)
        for _ in range(repair_rounds):
            bad = _duplicate_stub_positions(left_stubs, paired, m)
            if bad.size == 0:
                edges = np.stack([left_stubs, paired], axis=1)
                return BiregularBipartiteGraph(n, m, deg_left, deg_right, edges)
            for k in bad:
                r = rng.integers(n_stubs)
                paired[k], paired[r] = paired[r], paired[k]
    raise GenerationError(
        f"no simple ({deg_left},{deg_right})-biregular graph with n={n}, m={m} "
        f"found in {max_attempts} pairings with {repair_rounds} repair rounds each"
    )


@dataclass(frozen=True)
class ExpansionReport:
    """Exhaustive neighborhood-expansion audit of one side of a graph.

    For each subset size s <= max_subset_size, min_neighbors[s-1] is the
    smallest |Gamma(S)| over subsets S of that size and ratios[s-1] the
    corresponding |Gamma(S)| / (degree * s).  delta_hat = 1 - min(ratios),
    gamma_hat = max_subset_size / n_side.
    """

    side: str
    n_side: int
    degree: int
    max_subset_size: int
    min_neighbors: tuple[int, ...]
    ratios: tuple[float, ...]
    delta_hat: float
    gamma_hat: float

    def meets_delta_bound(self, num: int = 1, den: int = 6) -> bool:
        """Exact integer test for delta_hat < num/den on every audited size."""
        for s, nb in enumerate(self.min_neighbors, start=1):
            # ratio > 1 - num/den  <=>  den*nb > (den-num)*degree*s
            if den * nb <= (den - num) * self.degree * s:
                return False
        return True


def expansion_audit(
    g: BiregularBipartiteGraph,
    side: str,
    s_max: int,
    budget: int = 5_000_000,
) -> ExpansionReport:
    """Exact worst-case expansion ratios for subsets up to size s_max.

    Refuses when the total number of subsets to enumerate exceeds budget.
    """
    if side not in ("left", "right"):
        raise ValueError("side must be 'left' or 'right'")
    if side == "left":
        n_side, degree = g.n_left, g.deg_left
        adj = [g.left_neighbors(i) for i in range(n_side)]
    else:
        n_side, degree = g.n_right, g.deg_right
        adj = [g.right_neighbors(j) for j in range(n_side)]
    if not 1 <= s_max <= n_side:
        raise ValueError(f"s_max must be in [1, {n_side}]")
    cost = sum(comb(n_side, s) for s in range(1, s_max + 1))
    if cost > budget:
        raise BudgetExceededError(
            f"expansion audit needs {cost} subset enumerations, budget is {budget}"
        )
    masks = [sum(1 << int(x) for x in neigh) for neigh in adj]
    min_neighbors = []
    ratios = []
    for s in range(1, s_max + 1):
        worst = None
        for subset in combinations(range(n_side), s):
            union = 0
            for node in subset:
                union |= masks[node]
            size = union.bit_count()
            if worst is None or size < worst:
                worst = size
        min_neighbors.append(int(worst))
        ratios.append(worst / (degree * s))
    return ExpansionReport(
        side=side,
        n_side=n_side,
        degree=degree,
        max_subset_size=s_max,
        min_neighbors=tuple(min_neighbors),
        ratios=tuple(ratios),
        delta_hat=1.0 - min(ratios),
        gamma_hat=s_max / n_side,
    )


@dataclass(frozen=True)
class CorrectionBound:
    """Adversarial correction-weight bound from audited expansion."""

    weight: int
    applicable: bool


def guaranteed_correction_bound(
    g: BiregularBipartiteGraph,
    left_report: ExpansionReport,
    right_report: ExpansionReport,
) -> CorrectionBound:
    """Decoder correction-weight bound floor(min(s_L, s_R) / (3 (1 + deg_right))).

    The audited gamma_hat values make gamma*n equal the audited subset-size
    caps exactly.  The bound only carries its guarantee when both audited
    delta_hat values are below 1/6; the applicable flag reports that test
    (done in exact integer arithmetic).
    """
    if left_report.side != "left" or right_report.side != "right":
        raise ValueError("reports must be (left, right) in that order")
    if left_report.n_side != g.n_left or right_report.n_side != g.n_right:
        raise ValueError("reports do not match the graph")
    min_cap = min(left_report.max_subset_size, right_report.max_subset_size)
    weight = min_cap // (3 * (1 + g.deg_right))
    applicable = left_report.meets_delta_bound() and right_report.meets_delta_bound()
    return CorrectionBound(weight=weight, applicable=applicable)


def write_graph_text(g: BiregularBipartiteGraph) -> str:
    """Serialize: `n m deg_left deg_right`, then one `left right` pair per line."""
    lines = [f"{g.n_left} {g.n_right} {g.deg_left} {g.deg_right}"]
    for l, r in g.edges:
        lines.append(f"{l} {r}")
    return "\n".join(lines) + "\n"


def read_graph_text(text: str) -> BiregularBipartiteGraph:
    lines = [ln for ln in text.split("\n") if ln.strip()]
    n, m, dv, dc = (int(t) for t in lines[0].split())
    edges = [(int(a), int(b)) for a, b in (ln.split() for ln in lines[1:])]
    return BiregularBipartiteGraph(n, m, dv, dc, edges)
