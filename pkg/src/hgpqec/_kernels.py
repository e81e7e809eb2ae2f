"""Numba-compiled hot paths.

Packed GF(2) elimination plus the small-set-flip inner loop.  Everything
operates on plain numpy arrays so the decoder stays allocation-light and can
run with the GIL released.  Packed bit layout is little-endian: bit i lives
in word i >> 6 at position i & 63.
"""

from __future__ import annotations

import numpy as np
from numba import njit

# Popcount lookup for 16-bit values; the decoder's local windows and the
# packed-word helpers never need more than 16 bits at a time.
_POP16 = np.array([bin(i).count("1") for i in range(1 << 16)], dtype=np.uint8)


@njit(cache=True, nogil=True)
def pack_bits(dense, out):
    """Pack a 0/1 uint8 vector into little-endian uint64 words."""
    out[:] = 0
    for i in range(dense.shape[0]):
        if dense[i]:
            out[i >> 6] |= np.uint64(1) << np.uint64(i & 63)


@njit(cache=True, nogil=True)
def rank_inplace(work, n_cols):
    """GF(2) rank by row echelon on packed rows.  Destroys `work`."""
    n_rows = work.shape[0]
    r = 0
    for col in range(n_cols):
        w = col >> 6
        bit = np.uint64(1) << np.uint64(col & 63)
        piv = -1
        for i in range(r, n_rows):
            if work[i, w] & bit:
                piv = i
                break
        if piv < 0:
            continue
        if piv != r:
            for ww in range(work.shape[1]):
                tmp = work[r, ww]
                work[r, ww] = work[piv, ww]
                work[piv, ww] = tmp
        for i in range(r + 1, n_rows):
            if work[i, w] & bit:
                # Columns left of the pivot are already zero below row r.
                for ww in range(w, work.shape[1]):
                    work[i, ww] ^= work[r, ww]
        r += 1
        if r == n_rows:
            break
    return r


@njit(cache=True, nogil=True)
def echelon_inplace(work, n_cols, pivots):
    """Row echelon on packed rows; returns the basis size.

    On return the first `count` rows of `work` form an echelon basis of the
    row space and pivots[:count] holds their leading columns in increasing
    order.
    """
    n_rows = work.shape[0]
    r = 0
    for col in range(n_cols):
        w = col >> 6
        bit = np.uint64(1) << np.uint64(col & 63)
        piv = -1
        for i in range(r, n_rows):
            if work[i, w] & bit:
                piv = i
                break
        if piv < 0:
            continue
        if piv != r:
            for ww in range(work.shape[1]):
                tmp = work[r, ww]
                work[r, ww] = work[piv, ww]
                work[piv, ww] = tmp
        for i in range(r + 1, n_rows):
            if work[i, w] & bit:
                for ww in range(w, work.shape[1]):
                    work[i, ww] ^= work[r, ww]
        pivots[r] = col
        r += 1
        if r == n_rows:
            break
    return r


@njit(cache=True, nogil=True)
def reduce_vs_echelon(vec, basis, pivots, count):
    """Reduce a packed vector against an echelon basis.

    Returns True when the vector lies in the row space (reduces to zero).
    `vec` is destroyed.
    """
    n_words = vec.shape[0]
    for r in range(count):
        col = pivots[r]
        w = col >> 6
        bit = np.uint64(1) << np.uint64(col & 63)
        if vec[w] & bit:
            for ww in range(w, n_words):
                vec[ww] ^= basis[r, ww]
    for ww in range(n_words):
        if vec[ww]:
            return False
    return True


@njit(cache=True, nogil=True)
def toggle_syndrome(support, indptr, check_ids, sigma):
    """XOR the checks incident to each listed qubit into `sigma`."""
    for s in range(support.shape[0]):
        q = support[s]
        for k in range(indptr[q], indptr[q + 1]):
            sigma[check_ids[k]] ^= 1


@njit(cache=True, nogil=True, inline="always")
def _scan_generator(rows_g, a, b, unsat, gains, order):
    """Best subset of one generator's support for the current local syndrome.

    rows_g holds the generator's a-by-b syndrome window as b-bit row masks.
    A subset is a pair (R, C): R flips whole rows, C flips whole columns, and
    the flipped window cells are those where exactly one of the two applies.
    Returns (num, den, mask) maximising num/den = (weight drop)/|subset| with
    ties broken by smaller den then smaller mask; (0, 1, 0) when no subset
    gives a positive drop.  mask bit k refers to the k-th support qubit:
    bits [0, a) select rows, bits [a, a+b) select columns.
    """
    best_num = np.int64(0)
    best_den = np.int64(1)
    best_mask = np.int64(0)
    for col_mask in range(1 << b):
        total = np.int64(0)
        possum = np.int64(0)
        for i in range(a):
            bi = np.int64(_POP16[rows_g[i] ^ col_mask])
            total += bi
            gi = 2 * bi - b
            gains[i] = gi
            if gi > 0:
                possum += gi
        base = unsat - total
        ub = base + possum
        if ub <= 0:
            continue
        den_c = np.int64(_POP16[col_mask])
        dmin = den_c if den_c > 0 else np.int64(1)
        if ub * best_den < best_num * dmin:
            continue
        # Stable insertion sort, descending gain; stability keeps equal-gain
        # rows in index order, which makes the prefix masks minimal.
        for i in range(a):
            order[i] = i
        for i in range(1, a):
            oi = order[i]
            gi = gains[oi]
            k = i - 1
            while k >= 0 and gains[order[k]] < gi:
                order[k + 1] = order[k]
                k -= 1
            order[k + 1] = oi
        num = base
        den = den_c
        mask = np.int64(col_mask) << a
        if den_c > 0 and num > 0:
            cr = num * best_den - best_num * den
            if cr > 0 or (
                cr == 0 and (den < best_den or (den == best_den and mask < best_mask))
            ):
                best_num, best_den, best_mask = num, den, mask
        for r in range(a):
            i2 = order[r]
            gi = gains[i2]
            if gi <= 0:
                # Gains are sorted: everything from here on can only lower
                # the ratio strictly, so no candidate (or tie) is missed.
                break
            num += gi
            den += 1
            mask |= np.int64(1) << i2
            if num > 0:
                cr = num * best_den - best_num * den
                if cr > 0 or (
                    cr == 0
                    and (den < best_den or (den == best_den and mask < best_mask))
                ):
                    best_num, best_den, best_mask = num, den, mask
    return best_num, best_den, best_mask


@njit(cache=True, nogil=True)
def ssf_decode(
    sigma,
    a,
    b,
    win_checks,
    first_qubits,
    second_qubits,
    check_indptr,
    check_gens,
    check_cells,
    ehat,
    trace_gens,
    trace_masks,
):
    """Small-set-flip main loop for one sector.

    sigma (uint8, modified in place) is the syndrome; ehat (uint8, caller
    zeroed) accumulates the deduced error.  Each iteration applies the
    argmax-ratio subset over all generators; candidates are tracked per
    generator and recomputed lazily: a generator marked stale is rescanned
    only when its unsatisfied-window count could still beat the best clean
    candidate, which cannot change the selected argmax.  trace_gens and
    trace_masks record the applied (generator, subset mask) sequence.

    Returns (converged, iterations, final weight, monotone flag).
    """
    n_gens = win_checks.shape[0]
    n_checks = sigma.shape[0]
    rows = np.zeros((n_gens, a), dtype=np.uint16)
    cnt = np.zeros(n_gens, dtype=np.int32)
    stale = np.ones(n_gens, dtype=np.uint8)
    cand_num = np.zeros(n_gens, dtype=np.int64)
    cand_den = np.ones(n_gens, dtype=np.int64)
    cand_mask = np.zeros(n_gens, dtype=np.int64)
    gains = np.zeros(a, dtype=np.int64)
    order = np.zeros(a, dtype=np.int64)

    sigma_weight = np.int64(0)
    for c in range(n_checks):
        if sigma[c]:
            sigma_weight += 1
            for k in range(check_indptr[c], check_indptr[c + 1]):
                g = check_gens[k]
                pos = check_cells[k]
                cnt[g] += 1
                rows[g, pos // b] |= np.uint16(1) << np.uint16(pos % b)

    full_b = (1 << b) - 1
    iterations = np.int64(0)
    monotone = True
    while True:
        best_num = np.int64(0)
        best_den = np.int64(1)
        best_gen = -1
        best_mask = np.int64(0)
        for g in range(n_gens):
            if stale[g] == 0:
                num = cand_num[g]
                if num > 0:
                    den = cand_den[g]
                    cr = num * best_den - best_num * den
                    if cr > 0 or (
                        cr == 0 and (den < best_den or (den == best_den and g < best_gen))
                    ):
                        best_num = num
                        best_den = den
                        best_gen = g
                        best_mask = cand_mask[g]
        for g in range(n_gens):
            if stale[g] == 1:
                u = np.int64(cnt[g])
                if u <= 0:
                    # Empty window: every subset has non-positive score.
                    continue
                if u * best_den < best_num:
                    # Even a weight-1 subset clearing u checks cannot win.
                    continue
                num, den, mask = _scan_generator(rows[g], a, b, u, gains, order)
                cand_num[g] = num
                cand_den[g] = den
                cand_mask[g] = mask
                stale[g] = 0
                if num > 0:
                    cr = num * best_den - best_num * den
                    if cr > 0 or (
                        cr == 0 and (den < best_den or (den == best_den and g < best_gen))
                    ):
                        best_num = num
                        best_den = den
                        best_gen = g
                        best_mask = mask
        if best_gen < 0:
            break

        g = best_gen
        row_sel = best_mask & ((np.int64(1) << a) - 1)
        col_sel = best_mask >> a
        for i in range(a):
            if (row_sel >> i) & 1:
                ehat[first_qubits[g, i]] ^= 1
        for j in range(b):
            if (col_sel >> j) & 1:
                ehat[second_qubits[g, j]] ^= 1
        prev_weight = sigma_weight
        for i in range(a):
            pat = col_sel if ((row_sel >> i) & 1) == 0 else col_sel ^ full_b
            base_cell = i * b
            for j in range(b):
                if (pat >> j) & 1:
                    c = win_checks[g, base_cell + j]
                    if sigma[c]:
                        sigma[c] = 0
                        delta = -1
                        sigma_weight -= 1
                    else:
                        sigma[c] = 1
                        delta = 1
                        sigma_weight += 1
                    for k in range(check_indptr[c], check_indptr[c + 1]):
                        g2 = check_gens[k]
                        pos = check_cells[k]
                        cnt[g2] += delta
                        rows[g2, pos // b] ^= np.uint16(1) << np.uint16(pos % b)
                        stale[g2] = 1
        if iterations < trace_gens.shape[0]:
            trace_gens[iterations] = g
            trace_masks[iterations] = best_mask
        iterations += 1
        if sigma_weight != prev_weight - best_num:
            monotone = False

    return sigma_weight == 0, iterations, sigma_weight, monotone
