"""Dense exact linear algebra over F_p on numpy int64 arrays.

Matrices follow the column convention used by the spectral-sequence code:
a map V -> W is stored with shape (dim W, dim V).
"""

from __future__ import annotations

import numpy as np


def as_matrix(rows, p: int, ncols: int | None = None) -> np.ndarray:
    a = np.asarray(rows, dtype=np.int64)
    if a.ndim == 1:
        a = a.reshape(0 if a.size == 0 else 1, -1) if ncols is None else a.reshape(-1, ncols)
    return a % p


def rref(matrix: np.ndarray, p: int) -> tuple[np.ndarray, list[int]]:
    """Reduced row echelon form mod p and the list of pivot columns."""
    a = np.array(matrix, dtype=np.int64) % p
    nrows, ncols = a.shape
    pivots: list[int] = []
    row = 0
    for col in range(ncols):
        if row == nrows:
            break
        nz = np.nonzero(a[row:, col])[0]
        if nz.size == 0:
            continue
        piv = row + int(nz[0])
        if piv != row:
            a[[row, piv]] = a[[piv, row]]
        inv = pow(int(a[row, col]), -1, p)
        a[row] = (a[row] * inv) % p
        factors = a[:, col].copy()
        factors[row] = 0
        hit = np.nonzero(factors)[0]
        if hit.size:
            a[hit] = (a[hit] - np.outer(factors[hit], a[row])) % p
        pivots.append(col)
        row += 1
    return a[:row], pivots


def rank(matrix: np.ndarray, p: int) -> int:
    if matrix.size == 0:
        return 0
    # Eliminate along the shorter side.
    m = matrix if matrix.shape[0] <= matrix.shape[1] else matrix.T
    return len(rref(m, p)[1])


def nullspace(matrix: np.ndarray, p: int) -> np.ndarray:
    """Basis of {v : matrix @ v = 0}, one vector per row."""
    nrows, ncols = matrix.shape
    if ncols == 0:
        return np.zeros((0, 0), dtype=np.int64)
    if nrows == 0:
        return np.eye(ncols, dtype=np.int64)
    reduced, pivots = rref(matrix, p)
    free = [c for c in range(ncols) if c not in set(pivots)]
    basis = np.zeros((len(free), ncols), dtype=np.int64)
    for i, f in enumerate(free):
        basis[i, f] = 1
        for r, pc in enumerate(pivots):
            basis[i, pc] = (-reduced[r, f]) % p
    return basis


def complement(span_rows: np.ndarray, candidates: np.ndarray, p: int) -> np.ndarray:
    """Rows of `candidates` reduced modulo the span of `span_rows`, keeping a
    maximal subset independent modulo that span.

    Each returned vector is a candidate minus a combination of the span and of
    earlier kept candidates, so together they span the same quotient.
    """
    ncols = candidates.shape[1] if candidates.ndim == 2 else 0
    if candidates.shape[0] == 0:
        return np.zeros((0, ncols), dtype=np.int64)
    if span_rows.shape[0]:
        echelon, pivots = rref(span_rows, p)
    else:
        echelon, pivots = np.zeros((0, ncols), dtype=np.int64), []
    echelon = [row for row in echelon]
    pivots = list(pivots)
    kept = []
    for vec in candidates % p:
        v = vec.copy()
        for row, pc in zip(echelon, pivots):
            if v[pc]:
                v = (v - v[pc] * row) % p
        nz = np.nonzero(v)[0]
        if nz.size == 0:
            continue
        pc = int(nz[0])
        rep = v.copy()
        normalised = (v * pow(int(v[pc]), -1, p)) % p
        for i, row in enumerate(echelon):
            if row[pc]:
                echelon[i] = (row - row[pc] * normalised) % p
        echelon.append(normalised)
        pivots.append(pc)
        kept.append(rep)
    if not kept:
        return np.zeros((0, ncols), dtype=np.int64)
    return np.array(kept, dtype=np.int64)


def in_span(span_rows: np.ndarray, vector: np.ndarray, p: int) -> bool:
    if span_rows.shape[0] == 0:
        return not np.any(np.asarray(vector) % p)
    stacked = np.vstack([span_rows, np.asarray(vector).reshape(1, -1)])
    return rank(stacked, p) == rank(span_rows, p)
