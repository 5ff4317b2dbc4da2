"""Mode-aware dense linear algebra on small matrices.

All routines accept numpy arrays (dtype=object with Fractions for exact
mode, float64 for float mode) and dispatch on the mode flag.  Sizes in
this project never exceed a few dozen rows, so plain Gaussian elimination
is used throughout.
"""

from fractions import Fraction

import numpy as np

from . import scalars
from .errors import DimensionMismatch, NumericallyDegenerate


def rref(mat, mode, eps=None):
    """Reduced row echelon form.  Returns (R, pivot_columns)."""
    m = np.array(mat, copy=True)
    if m.ndim != 2:
        raise DimensionMismatch("rref expects a matrix")
    rows, cols = m.shape
    if mode == scalars.FLOAT and eps is None:
        eps = scalars.float_eps()
    pivots = []
    r = 0
    for c in range(cols):
        if r >= rows:
            break
        if mode == scalars.EXACT:
            pr = next((i for i in range(r, rows) if m[i, c] != 0), None)
        else:
            i = r + int(np.argmax(np.abs(m[r:, c])))
            pr = i if abs(m[i, c]) > eps else None
        if pr is None:
            continue
        if pr != r:
            m[[r, pr]] = m[[pr, r]]
        m[r] = m[r] / m[r, c]
        for i in range(rows):
            if i != r and m[i, c] != 0:
                m[i] = m[i] - m[i, c] * m[r]
        pivots.append(c)
        r += 1
    return m, pivots


def rank(mat, mode, eps=None):
    mat = np.asarray(mat)
    if mat.size == 0:
        return 0
    return len(rref(mat, mode, eps)[1])


def nullspace(mat, mode, eps=None):
    """Kernel basis of a matrix.

    Each basis vector has value 1 at a free column that is zero in every
    other basis vector, so the pivot coordinate identifies it uniquely.
    """
    mat = np.asarray(mat)
    rows, cols = mat.shape
    r, pivots = rref(mat, mode, eps)
    free = [c for c in range(cols) if c not in pivots]
    basis = []
    for f in free:
        v = scalars.zeros_vector(cols, mode)
        one = Fraction(1) if mode == scalars.EXACT else 1.0
        v[f] = one
        for i, p in enumerate(pivots):
            v[p] = -r[i, f]
        basis.append(v)
    return basis


def solve(a, b, mode, eps=None):
    """Solve a @ x = b for square invertible a."""
    a = np.asarray(a)
    n = a.shape[0]
    if a.shape[0] != a.shape[1]:
        raise DimensionMismatch("solve expects a square matrix")
    if mode == scalars.FLOAT:
        return np.linalg.solve(a, b)
    aug = np.concatenate([a, np.asarray(b).reshape(n, 1)], axis=1)
    r, pivots = rref(aug, mode)
    if pivots != list(range(n)):
        raise NumericallyDegenerate("singular matrix in exact solve")
    return r[:, n]


def inverse(a, mode, eps=None):
    a = np.asarray(a)
    n = a.shape[0]
    if mode == scalars.FLOAT:
        return np.linalg.inv(a)
    aug = np.concatenate([a, scalars.identity_matrix(n, mode)], axis=1)
    r, pivots = rref(aug, mode)
    if pivots != list(range(n)):
        raise NumericallyDegenerate("singular matrix in exact inverse")
    return r[:, n:]


def is_invertible(a, mode, eps=None):
    a = np.asarray(a)
    return a.shape[0] == a.shape[1] and rank(a, mode, eps) == a.shape[0]


def independent_rows(vectors, mode, eps=None, need=None):
    """Indices of a maximal (or size-`need`) linearly independent subset,
    scanning in input order."""
    picked = []
    stack = None
    for i, v in enumerate(vectors):
        cand = np.array([v]) if stack is None else np.vstack([stack, [v]])
        if rank(cand, mode, eps) == len(picked) + 1:
            picked.append(i)
            stack = cand
            if need is not None and len(picked) == need:
                break
    return picked
