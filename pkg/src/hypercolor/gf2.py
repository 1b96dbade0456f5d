"""Linear algebra over GF(2) on numpy uint8 matrices (one bit per entry)."""

from __future__ import annotations

import numpy as np


def as_gf2(m) -> np.ndarray:
    a = np.array(m, dtype=np.uint8) & 1
    if a.ndim == 1:
        a = a.reshape(1, -1)
    return a


def row_echelon(m) -> tuple[np.ndarray, list[int]]:
    """Reduced row echelon form and pivot columns."""
    a = as_gf2(m).copy()
    rows, cols = a.shape
    pivots = []
    r = 0
    for c in range(cols):
        if r == rows:
            break
        hits = np.nonzero(a[r:, c])[0]
        if hits.size == 0:
            continue
        k = r + hits[0]
        if k != r:
            a[[r, k]] = a[[k, r]]
        others = np.nonzero(a[:, c])[0]
        others = others[others != r]
        a[others] ^= a[r]
        pivots.append(c)
        r += 1
    return a[:r], pivots


def rank(m) -> int:
    a = as_gf2(m)
    if a.size == 0:
        return 0
    return len(row_echelon(a)[1])


def nullspace(m) -> np.ndarray:
    """Basis of {v : m v = 0}, one vector per row."""
    a = as_gf2(m)
    n = a.shape[1]
    ech, pivots = row_echelon(a)
    free = [c for c in range(n) if c not in set(pivots)]
    basis = np.zeros((len(free), n), dtype=np.uint8)
    for i, f in enumerate(free):
        basis[i, f] = 1
        for r, p in enumerate(pivots):
            basis[i, p] = ech[r, f]
    return basis


class RowSpace:
    """Membership and reduction against the row space of a matrix."""

    def __init__(self, m):
        self.echelon, self.pivots = row_echelon(m)

    @property
    def dimension(self) -> int:
        return len(self.pivots)

    def reduce(self, v) -> np.ndarray:
        v = np.array(v, dtype=np.uint8).reshape(-1) & 1
        # reduced echelon rows vanish on each other's pivots, so one pass suffices
        for r, p in enumerate(self.pivots):
            if v[p]:
                v ^= self.echelon[r]
        return v

    def reduce_many(self, vs) -> np.ndarray:
        vs = as_gf2(vs).copy()
        for r, p in enumerate(self.pivots):
            hit = vs[:, p] == 1
            vs[hit] ^= self.echelon[r]
        return vs

    def contains(self, v) -> bool:
        return not self.reduce(v).any()


def in_rowspace(m, v) -> bool:
    return RowSpace(m).contains(v)


def complement_basis(sub, space) -> np.ndarray:
    """Rows of ``space`` extending a basis of rowspace(sub) to rowspace(space).

    ``sub``'s row space must lie inside ``space``'s.  Returned rows are
    independent modulo rowspace(sub), chosen greedily in row order.
    """
    ech_arr, pivots = row_echelon(sub)
    ech = list(ech_arr)
    out = []
    for v in as_gf2(space):
        w = v.copy()
        for row, p in zip(ech, pivots):
            if w[p]:
                w ^= row
        nz = np.nonzero(w)[0]
        if nz.size == 0:
            continue
        p = int(nz[0])
        # keep the echelon reduced on the new pivot
        for i, row in enumerate(ech):
            if row[p]:
                ech[i] = row ^ w
        ech.append(w)
        pivots.append(p)
        out.append(v)
    n = as_gf2(space).shape[1]
    return np.array(out, dtype=np.uint8).reshape(-1, n)


def pack_rows(m) -> np.ndarray:
    """Pack each row into little-endian uint64 words."""
    a = as_gf2(m)
    rows, n = a.shape
    words = (n + 63) // 64
    padded = np.zeros((rows, words * 64), dtype=np.uint8)
    padded[:, :n] = a
    packed = np.packbits(padded, axis=1, bitorder="little")
    return packed.view("<u8").reshape(rows, words)


def unpack_rows(packed: np.ndarray, n: int) -> np.ndarray:
    bytes_ = np.ascontiguousarray(packed).view(np.uint8).reshape(packed.shape[0], -1)
    return np.unpackbits(bytes_, axis=1, bitorder="little")[:, :n]


def popcount(words: np.ndarray) -> np.ndarray:
    """Per-row popcount of packed words (sums over the last axis)."""
    return np.bitwise_count(words).sum(axis=-1, dtype=np.int64)


def solve(a, b) -> np.ndarray | None:
    """One solution x of a x = b, or None when the system is inconsistent."""
    a = as_gf2(a)
    b = np.array(b, dtype=np.uint8).reshape(-1, 1) & 1
    aug, pivots = row_echelon(np.hstack([a, b]))
    n = a.shape[1]
    if n in pivots:
        return None
    x = np.zeros(n, dtype=np.uint8)
    for r, p in enumerate(pivots):
        x[p] = aug[r, n]
    return x
