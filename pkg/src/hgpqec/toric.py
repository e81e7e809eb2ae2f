"""Toric code baseline with exact minimum-weight perfect matching.

The L x L toric code is the product of two length-L cycle factor graphs,
which lands it in the same CssCode container as every other code here, with
2 L^2 qubits and k = 2.  Geometry: V-block qubit (i, j) is the horizontal
edge between vertices (i, j-1) and (i, j); C-block qubit (i, j) the
vertical edge between vertices (i, j) and (i+1, j); X checks sit on
vertices, Z checks on plaquettes, both indexed row-major by (i, j).

Decoding matches syndrome defects over the toroidal Manhattan metric with
an exact blossom matching (networkx), then XORs the geodesic path of each
matched pair.  Sector names follow the error type being corrected: 'z'
means Z errors / vertex defects, 'x' means X errors / plaquette defects.
"""

from __future__ import annotations

from dataclasses import dataclass

import networkx as nx
import numpy as np

from .gf2 import BitVector, DimensionMismatchError
from .graphs import BiregularBipartiteGraph
from .product import CssCode, hypergraph_product

SECTORS = ("z", "x")


def cycle_factor_graph(length: int) -> BiregularBipartiteGraph:
    """Length-L cycle as a (2,2)-biregular factor graph: check j touches
    variables j and j+1 mod L."""
    edges = []
    for j in range(length):
        edges.append((j, j))
        edges.append(((j + 1) % length, j))
    return BiregularBipartiteGraph(length, length, 2, 2, edges)


class ToricCode:
    """Toric code of side L (N = 2 L^2 qubits, k = 2)."""

    def __init__(self, L: int):
        if L < 2:
            raise ValueError("toric code needs L >= 2")
        self.L = int(L)
        cyc = cycle_factor_graph(L)
        self.css: CssCode = hypergraph_product(cyc, cyc)

    # Row-major index helpers; all coordinates wrap mod L.
    def v_qubit(self, i: int, j: int) -> int:
        return (i % self.L) * self.L + (j % self.L)

    def c_qubit(self, i: int, j: int) -> int:
        return self.L * self.L + (i % self.L) * self.L + (j % self.L)

    def vertex_check(self, i: int, j: int) -> int:
        return (i % self.L) * self.L + (j % self.L)

    def plaquette_check(self, i: int, j: int) -> int:
        return (i % self.L) * self.L + (j % self.L)


def build_toric(L: int) -> ToricCode:
    return ToricCode(L)


def _toroidal_distance(a: tuple[int, int], b: tuple[int, int], L: int) -> int:
    dr = abs(a[0] - b[0])
    dc = abs(a[1] - b[1])
    return min(dr, L - dr) + min(dc, L - dc)


def _geodesic_qubits(code: ToricCode, a: tuple[int, int], b: tuple[int, int], sector: str) -> list[int]:
    """Edge qubits of a minimal path from defect a to defect b.

    Walks rows first, then columns; when the two toroidal directions tie
    (separation exactly L/2) the increasing-coordinate direction is taken.
    """
    L = code.L
    path: list[int] = []
    r, c = a
    dr = (b[0] - r) % L
    if dr != 0:
        down = dr * 2 <= L
        steps = dr if down else L - dr
        for _ in range(steps):
            if sector == "z":
                q = code.c_qubit(r if down else r - 1, c)
            else:
                q = code.v_qubit(r + 1 if down else r, c)
            path.append(q)
            r = (r + (1 if down else -1)) % L
    dc = (b[1] - c) % L
    if dc != 0:
        right = dc * 2 <= L
        steps = dc if right else L - dc
        for _ in range(steps):
            if sector == "z":
                q = code.v_qubit(r, c + 1 if right else c)
            else:
                q = code.c_qubit(r, c if right else c - 1)
            path.append(q)
            c = (c + (1 if right else -1)) % L
    return path


@dataclass(frozen=True)
class DefectMatching:
    """Matched defect pairs and the geodesic connecting each pair."""

    pairs: tuple[tuple[tuple[int, int], tuple[int, int]], ...]
    paths: tuple[tuple[int, ...], ...]


def match_defects(code: ToricCode, syndrome: BitVector, sector: str) -> DefectMatching:
    """Exact minimum-weight perfect matching of syndrome defects.

    Edge weight is the toroidal Manhattan distance; exactness comes from
    the blossom algorithm on the complete defect graph.  Defects are fed in
    sorted index order so the matching is deterministic.
    """
    if sector not in SECTORS:
        raise ValueError(f"sector must be one of {SECTORS}")
    L = code.L
    if syndrome.length != L * L:
        raise DimensionMismatchError(f"syndrome length {syndrome.length} != {L * L}")
    defects = [(int(idx) // L, int(idx) % L) for idx in syndrome.support]
    if len(defects) % 2 != 0:
        raise ValueError("odd defect count: invalid syndrome on a torus")
    if not defects:
        return DefectMatching(pairs=(), paths=())
    graph = nx.Graph()
    heavy = L + 1
    for u in range(len(defects)):
        for v in range(u + 1, len(defects)):
            dist = _toroidal_distance(defects[u], defects[v], L)
            graph.add_edge(u, v, weight=heavy - dist)
    matching = nx.max_weight_matching(graph, maxcardinality=True)
    pairs = []
    paths = []
    for u, v in sorted((min(e), max(e)) for e in matching):
        pa, pb = defects[u], defects[v]
        pairs.append((pa, pb))
        paths.append(tuple(_geodesic_qubits(code, pa, pb, sector)))
    return DefectMatching(pairs=tuple(pairs), paths=tuple(paths))


def mwpm_decode(code: ToricCode, syndrome: BitVector, sector: str) -> BitVector:
    """Correction operator: XOR of the matched geodesic paths."""
    matching = match_defects(code, syndrome, sector)
    correction = np.zeros(code.css.n_qubits, dtype=np.uint8)
    for path in matching.paths:
        for q in path:
            correction[q] ^= 1
    return BitVector.from_dense(correction)


def toric_logical_failure(code: ToricCode, residual: BitVector, sector: str) -> bool:
    """Whether a zero-syndrome residual acts as a logical operator.

    Tests winding parity against a fixed pair of homology cuts; this is
    equivalent to non-membership in the corresponding stabilizer row space.

    Raises:
        ValueError: the residual has nonzero syndrome in the sector.
    """
    if sector not in SECTORS:
        raise ValueError(f"sector must be one of {SECTORS}")
    check_matrix = code.css.h_x if sector == "z" else code.css.h_z
    if check_matrix.mat_vec_mul(residual).weight != 0:
        raise ValueError("residual has nonzero syndrome; not a candidate logical")
    dense = residual.to_dense()
    L = code.L
    if sector == "z":
        cut_a = sum(int(dense[code.v_qubit(i, 0)]) for i in range(L))
        cut_b = sum(int(dense[code.c_qubit(0, j)]) for j in range(L))
    else:
        cut_a = sum(int(dense[code.v_qubit(0, j)]) for j in range(L))
        cut_b = sum(int(dense[code.c_qubit(i, 0)]) for i in range(L))
    return bool(cut_a % 2 or cut_b % 2)
