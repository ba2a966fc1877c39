"""Dense linear algebra over prime fields, on numpy integer matrices.

Matrices are 2-d int arrays with entries reduced mod p.  Row vectors act on
the right throughout the package: v @ M.
"""

from __future__ import annotations

import numpy as np

from .errors import ValidationError


def rref_gfp(mat: np.ndarray, p: int) -> tuple[np.ndarray, list[int]]:
    """Reduced row echelon form over GF(p); returns (rref, pivot columns)."""
    m = np.array(mat, dtype=np.int64) % p
    rows, cols = m.shape
    pivots: list[int] = []
    r = 0
    for c in range(cols):
        if r >= rows:
            break
        pivot = None
        for i in range(r, rows):
            if m[i, c] % p != 0:
                pivot = i
                break
        if pivot is None:
            continue
        if pivot != r:
            m[[r, pivot]] = m[[pivot, r]]
        inv = pow(int(m[r, c]), -1, p)
        m[r] = (m[r] * inv) % p
        for i in range(rows):
            if i != r and m[i, c] != 0:
                m[i] = (m[i] - m[i, c] * m[r]) % p
        pivots.append(c)
        r += 1
    return m % p, pivots


def rank_gfp(mat: np.ndarray, p: int) -> int:
    if mat.size == 0:
        return 0
    _, pivots = rref_gfp(mat, p)
    return len(pivots)


def nullspace_gfp(mat: np.ndarray, p: int) -> np.ndarray:
    """Basis of {x : x @ mat.T == 0}, i.e. the right nullspace, rows = basis."""
    m = np.asarray(mat)
    rows, cols = m.shape
    rref, pivots = rref_gfp(m, p)
    free = [c for c in range(cols) if c not in pivots]
    basis = np.zeros((len(free), cols), dtype=np.int64)
    for k, fc in enumerate(free):
        basis[k, fc] = 1
        for r, pc in enumerate(pivots):
            basis[k, pc] = (-rref[r, fc]) % p
    return basis % p


def solve_gfp(a: np.ndarray, b: np.ndarray, p: int) -> np.ndarray | None:
    """One solution x of x @ a == b (row-vector convention), or None."""
    a = np.asarray(a) % p
    b = np.asarray(b) % p
    aug = np.concatenate([a.T, b.reshape(-1, 1)], axis=1)
    rref, pivots = rref_gfp(aug, p)
    n = a.shape[0]
    if n in pivots:
        return None
    x = np.zeros(n, dtype=np.int64)
    for r, pc in enumerate(pivots):
        x[pc] = rref[r, -1]
    return x % p


def inv_gfp(a: np.ndarray, p: int) -> np.ndarray:
    a = np.asarray(a) % p
    n = a.shape[0]
    aug = np.concatenate([a, np.eye(n, dtype=np.int64)], axis=1)
    rref, pivots = rref_gfp(aug, p)
    if pivots != list(range(n)):
        raise ValidationError("matrix is singular over GF(p)")
    return rref[:, n:] % p
