"""Pure numpy implementations of the bit-packed tableau kernels.

Fallback backend for miptkit.backend when the compiled extension is not
available.  Layout shared with the compiled core: a 2N x W uint64 matrix per
X/Z block (bit j of word w = site 64*w + j), rows 0..N-1 destabilizers and
N..2N-1 stabilizers, one sign bit per row.  A row with bits (x, z) and sign
s represents (-1)**s times the literal Pauli whose letter on each site is
given by the bit pair, so every generator is Hermitian by construction and
only sign bits need tracking under Clifford conjugation.
"""

from __future__ import annotations

import numpy as np

BACKEND_NAME = "pure"

_U64_1 = np.uint64(1)


def _popcount_rows(words: np.ndarray) -> np.ndarray:
    return np.bitwise_count(words).sum(axis=-1, dtype=np.int64)


def apply_lookup1(X, Z, signs, site, perm, sign) -> None:
    w, b = divmod(site, 64)
    bshift = np.uint64(b)
    xa = (X[:, w] >> bshift) & _U64_1
    za = (Z[:, w] >> bshift) & _U64_1
    k = (xa + 2 * za).astype(np.intp)
    kk = perm[k].astype(np.uint64)
    signs ^= sign[k]
    X[:, w] = (X[:, w] & ~(_U64_1 << bshift)) | ((kk & _U64_1) << bshift)
    Z[:, w] = (Z[:, w] & ~(_U64_1 << bshift)) | (((kk >> _U64_1) & _U64_1) << bshift)


def apply_lookup2(X, Z, signs, site_a, site_b, perm, sign) -> None:
    wa, ba = divmod(site_a, 64)
    wb, bb = divmod(site_b, 64)
    sa, sb = np.uint64(ba), np.uint64(bb)
    xa = (X[:, wa] >> sa) & _U64_1
    za = (Z[:, wa] >> sa) & _U64_1
    xb = (X[:, wb] >> sb) & _U64_1
    zb = (Z[:, wb] >> sb) & _U64_1
    k = (xa + 2 * za + 4 * xb + 8 * zb).astype(np.intp)
    kk = perm[k].astype(np.uint64)
    signs ^= sign[k]
    two = np.uint64(2)
    three = np.uint64(3)
    X[:, wa] = (X[:, wa] & ~(_U64_1 << sa)) | ((kk & _U64_1) << sa)
    Z[:, wa] = (Z[:, wa] & ~(_U64_1 << sa)) | (((kk >> _U64_1) & _U64_1) << sa)
    X[:, wb] = (X[:, wb] & ~(_U64_1 << sb)) | (((kk >> two) & _U64_1) << sb)
    Z[:, wb] = (Z[:, wb] & ~(_U64_1 << sb)) | (((kk >> three) & _U64_1) << sb)


def _rowmult(X, Z, signs, rows, p) -> None:
    """row_i <- row_i * row_p for every i in `rows` (exact sign tracking)."""
    y_i = _popcount_rows(X[rows] & Z[rows])
    y_p = int(_popcount_rows(X[p] & Z[p]))
    cross = _popcount_rows(Z[rows] & X[p])
    X[rows] ^= X[p]
    Z[rows] ^= Z[p]
    y_new = _popcount_rows(X[rows] & Z[rows])
    c = (y_i + y_p + 2 * cross - y_new) % 4
    signs[rows] ^= np.uint8(signs[p]) ^ (c // 2).astype(np.uint8)


def measure_prepare(X, Z, n, site) -> int:
    """Index of the first stabilizer row anticommuting with Z_site, or -1."""
    w, b = divmod(site, 64)
    col = (X[n:, w] >> np.uint64(b)) & _U64_1
    nz = np.nonzero(col)[0]
    return int(n + nz[0]) if nz.size else -1


def measure_update_random(X, Z, signs, n, site, pivot, outcome) -> None:
    w, b = divmod(site, 64)
    col = (X[:, w] >> np.uint64(b)) & _U64_1
    rows = np.nonzero(col)[0]
    rows = rows[(rows != pivot) & (rows != pivot - n)]
    if rows.size:
        _rowmult(X, Z, signs, rows, pivot)
    X[pivot - n] = X[pivot]
    Z[pivot - n] = Z[pivot]
    signs[pivot - n] = signs[pivot]
    X[pivot] = 0
    Z[pivot] = 0
    Z[pivot, w] = _U64_1 << np.uint64(b)
    signs[pivot] = outcome


def measure_deterministic(X, Z, signs, n, site) -> int:
    """Deterministic outcome: sign of the stabilizer-group product fixing Z_site."""
    w, b = divmod(site, 64)
    col = (X[:n, w] >> np.uint64(b)) & _U64_1
    sel = np.nonzero(col)[0] + n
    sx = np.zeros_like(X[0])
    sz = np.zeros_like(Z[0])
    phase = 0  # exponent of i for the literal product
    sbit = 0
    for r in sel:
        y_cur = int(_popcount_rows(sx & sz))
        y_r = int(_popcount_rows(X[r] & Z[r]))
        cross = int(_popcount_rows(sz & X[r]))
        sx ^= X[r]
        sz ^= Z[r]
        y_new = int(_popcount_rows(sx & sz))
        phase = (phase + y_cur + y_r + 2 * cross - y_new) % 4
        sbit ^= int(signs[r])
    return sbit ^ (phase // 2)


def rank_left_half(X, Z, n) -> int:
    """GF(2) rank of the stabilizer generators restricted to sites [0, n/2)."""
    half = n // 2
    wh = (half + 63) // 64
    xl = X[n:, :wh].copy()
    zl = Z[n:, :wh].copy()
    rem = half % 64
    if rem:
        mask = np.uint64((1 << rem) - 1)
        xl[:, -1] &= mask
        zl[:, -1] &= mask
    m = np.concatenate([xl, zl], axis=1)
    rank = 0
    for w in range(2 * wh):
        bits = 64 if (w + 1) % wh != 0 or not rem else rem
        for b in range(bits):
            col = (m[rank:, w] >> np.uint64(b)) & _U64_1
            nz = np.nonzero(col)[0]
            if not nz.size:
                continue
            piv = rank + int(nz[0])
            if piv != rank:
                m[[rank, piv]] = m[[piv, rank]]
            below = np.nonzero((m[rank + 1 :, w] >> np.uint64(b)) & _U64_1)[0]
            if below.size:
                m[rank + 1 + below] ^= m[rank]
            rank += 1
            if rank == n:
                return rank - half
    return rank - half


def compose_layers(perms: np.ndarray, signs: np.ndarray):
    """Fold per-layer conjugation tables into one (perm, sign) pair."""
    perm = np.arange(16, dtype=np.uint8)
    sign = np.zeros(16, dtype=np.uint8)
    for lperm, lsign in zip(perms, signs):
        sign ^= lsign[perm]
        perm = lperm[perm]
    return perm, sign
