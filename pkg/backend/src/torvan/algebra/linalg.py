"""Dense exact linear algebra over F_p with numpy int64 arrays."""
from __future__ import annotations

import numpy as np

from torvan.core.errors import InvalidInput


def as_modp(A, p: int) -> np.ndarray:
    if p >= 2**31:
        raise InvalidInput("dense arithmetic needs p < 2^31", field="p")
    arr = np.array(A, dtype=np.int64)
    if arr.ndim == 1:
        arr = arr.reshape(1, -1)
    return arr % p


def rref_modp(A, p: int) -> tuple[np.ndarray, list[int]]:
    """Reduced row echelon form and pivot columns."""
    R = as_modp(A, p).copy()
    m, n = R.shape
    pivots: list[int] = []
    r = 0
    for c in range(n):
        if r == m:
            break
        nz = np.nonzero(R[r:, c])[0]
        if nz.size == 0:
            continue
        pivot = r + int(nz[0])
        if pivot != r:
            R[[r, pivot], :] = R[[pivot, r], :]
        inv = pow(int(R[r, c]), -1, p)
        R[r, :] = (R[r, :] * inv) % p
        col = R[:, c].copy()
        col[r] = 0
        rows = np.nonzero(col)[0]
        if rows.size:
            R[rows, :] = (R[rows, :] - np.outer(col[rows], R[r, :])) % p
        pivots.append(c)
        r += 1
    return R, pivots


def rank_modp(A, p: int) -> int:
    arr = np.asarray(A)
    if arr.size == 0:
        return 0
    return len(rref_modp(arr, p)[1])


def nullspace_modp(A, p: int) -> np.ndarray:
    """Basis of {v : A v = 0} as the columns of the returned (n x k) array."""
    arr = np.asarray(A)
    n = arr.shape[1] if arr.ndim == 2 else arr.size
    if arr.size == 0:
        return np.eye(n, dtype=np.int64)
    R, pivots = rref_modp(arr, p)
    free = [c for c in range(n) if c not in pivots]
    basis = np.zeros((n, len(free)), dtype=np.int64)
    for k, f in enumerate(free):
        basis[f, k] = 1
        for row, c in enumerate(pivots):
            basis[c, k] = (-R[row, f]) % p
    return basis


def extend_basis(span, candidates, p: int) -> list[int]:
    """Indices of candidate columns that enlarge the column span of ``span`` one by one."""
    current = np.asarray(span, dtype=np.int64)
    cand = np.asarray(candidates, dtype=np.int64)
    rows = cand.shape[0]
    if current.size == 0:
        current = np.zeros((rows, 0), dtype=np.int64)
    chosen = []
    r = rank_modp(current.T, p) if current.shape[1] else 0
    for j in range(cand.shape[1]):
        trial = np.concatenate([current, cand[:, j:j + 1]], axis=1)
        r2 = rank_modp(trial.T, p)
        if r2 > r:
            chosen.append(j)
            current, r = trial, r2
    return chosen
