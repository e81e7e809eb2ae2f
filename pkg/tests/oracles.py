"""Independent reference implementations used as test oracles.

Everything here is written straight from the algorithm statements with no
shared machinery from the package hot paths: dense numpy matrices, python
loops, exhaustive scans.  Slow on purpose.
"""

from __future__ import annotations

import numpy as np


def dense_mat_vec_mod2(h: np.ndarray, v: np.ndarray) -> np.ndarray:
    """Naive double-loop matrix-vector product over GF(2)."""
    m, n = h.shape
    out = np.zeros(m, dtype=np.uint8)
    for i in range(m):
        acc = 0
        for j in range(n):
            acc ^= int(h[i, j]) & int(v[j])
        out[i] = acc
    return out


def span_of_rows(h: np.ndarray) -> set[bytes]:
    """All 2^m GF(2) combinations of the rows, as dense byte strings."""
    m, n = h.shape
    vectors = set()
    for mask in range(1 << m):
        acc = np.zeros(n, dtype=np.uint8)
        for i in range(m):
            if (mask >> i) & 1:
                acc ^= h[i].astype(np.uint8)
        vectors.add(acc.tobytes())
    return vectors


def exhaustive_rank(h: np.ndarray) -> int:
    """Rank = log2 of the span size (spans are groups)."""
    size = len(span_of_rows(h))
    assert size & (size - 1) == 0
    return size.bit_length() - 1


def exhaustive_in_row_space(h: np.ndarray, v: np.ndarray) -> bool:
    return np.asarray(v, dtype=np.uint8).tobytes() in span_of_rows(h)


def flip_reference(h: np.ndarray, var_checks: list[np.ndarray], y: np.ndarray,
                   cap: int) -> tuple[bool, np.ndarray | None, int, bool]:
    """Bit-flipping decoder, recomputing everything from scratch each step.

    Scans variables from 0, flips the first whose unsatisfied-check count
    reaches ceil(deg/2), restarts the scan.  Returns (converged, error,
    flips, stalled).
    """
    w = y.copy()
    flips = 0
    while True:
        sigma = (h @ w) % 2
        flipped = False
        for v in range(w.shape[0]):
            deg = var_checks[v].shape[0]
            if int(sigma[var_checks[v]].sum()) >= (deg + 1) // 2:
                if flips >= cap:
                    return False, None, flips, True
                w[v] ^= 1
                flips += 1
                flipped = True
                break
        if not flipped:
            break
    sigma = (h @ w) % 2
    if sigma.any():
        return False, None, flips, False
    return True, (y ^ w) % 2, flips, False


def pack_bits_rows(dense: np.ndarray) -> np.ndarray:
    """Pack each row of a 0/1 matrix into little-endian uint64 words."""
    dense = np.asarray(dense, dtype=np.uint8)
    m, n = dense.shape
    words = (n + 63) // 64
    out = np.zeros((m, words), dtype=np.uint64)
    for i in range(m):
        for j in np.nonzero(dense[i])[0]:
            out[i, j >> 6] |= np.uint64(1) << np.uint64(int(j) & 63)
    return out


class SmallSetFlipReference:
    """Full-scan small-set-flip with the pinned tie-break.

    Enumerates, at every iteration, every non-empty subset of every
    generator's support, scores it as (weight drop)/|subset| against the
    current syndrome, and applies the argmax.  Tie-break: larger ratio,
    then smaller subset, then lower generator index, then smaller subset
    bitmask (bit k of the mask = k-th smallest support qubit).  Syndromes
    are packed into uint64 words purely to keep the subset tables small.
    """

    def __init__(self, h_gen: np.ndarray, h_syn: np.ndarray):
        # h_gen: generator matrix whose row supports are searched;
        # h_syn: check matrix producing the syndrome being reduced.
        self.h_syn = h_syn.astype(np.uint8)
        self.n_checks = h_syn.shape[0]
        self.supports = [np.nonzero(row)[0] for row in h_gen]
        cols_packed = pack_bits_rows(self.h_syn.T)
        self.images = []  # per generator: packed syndrome image per mask
        for sup in self.supports:
            w = sup.shape[0]
            imgs = np.zeros((1 << w, cols_packed.shape[1]), dtype=np.uint64)
            for k in range(w):
                size = 1 << k
                imgs[size: 2 * size] = imgs[:size] ^ cols_packed[sup[k]]
            self.images.append(imgs)

    def decode(self, sigma0: np.ndarray):
        sigma = sigma0.astype(np.uint8).copy()
        sigma_packed = pack_bits_rows(sigma[None, :])[0]
        ehat = np.zeros(self.h_syn.shape[1], dtype=np.uint8)
        trace = []
        while True:
            weight = int(sigma.sum())
            best = None  # (num, den, gen, mask)
            for g, sup in enumerate(self.supports):
                imgs = self.images[g]
                hit = np.bitwise_count(sigma_packed[None, :] ^ imgs).sum(axis=1)
                nums = weight - hit.astype(np.int64)
                nums[0] = 0
                if nums.max() <= 0:
                    continue
                w = sup.shape[0]
                masks = np.arange(1 << w, dtype=np.int64)
                dens = np.bitwise_count(masks.astype(np.uint64)).astype(np.int64)
                dens[0] = 1
                # Ratios num/den are small rationals, so float equality is
                # exact; sort by ratio desc, then den, then mask.
                ratios = np.where(nums > 0, nums / dens, -np.inf)
                idx = int(np.lexsort((masks, dens, -ratios))[0])
                cand = (int(nums[idx]), int(dens[idx]), g, idx)
                if best is None:
                    best = cand
                    continue
                cr = cand[0] * best[1] - best[0] * cand[1]
                if cr > 0 or (cr == 0 and (cand[1], cand[2], cand[3]) <
                              (best[1], best[2], best[3])):
                    best = cand
            if best is None:
                break
            num, den, g, mask = best
            sup = self.supports[g]
            for k in range(sup.shape[0]):
                if (mask >> k) & 1:
                    ehat[sup[k]] ^= 1
            sigma_packed ^= self.images[g][mask]
            img_dense = np.zeros(self.n_checks, dtype=np.uint8)
            for c in range(self.n_checks):
                if (int(sigma_packed[c >> 6]) >> (c & 63)) & 1:
                    img_dense[c] = 1
            sigma = img_dense
            trace.append((g, mask))
        return bool(sigma.sum() == 0), ehat, trace


def mwpm_brute_force_weight(defects: list[tuple[int, int]], L: int) -> int:
    """Minimum total toroidal-Manhattan weight over all perfect matchings."""

    def dist(a, b):
        dr = abs(a[0] - b[0])
        dc = abs(a[1] - b[1])
        return min(dr, L - dr) + min(dc, L - dc)

    def solve(points):
        if not points:
            return 0
        first = points[0]
        best = None
        for i in range(1, len(points)):
            rest = points[1:i] + points[i + 1:]
            w = dist(first, points[i]) + solve(rest)
            if best is None or w < best:
                best = w
        return best

    assert len(defects) % 2 == 0
    return solve(list(defects))
