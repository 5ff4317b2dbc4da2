"""Linear symmetry search over finite effect configurations.

A linear map whose adjoint permutes a spanning vector family {e_i} also
preserves Q = sum_i e_i e_i^T, hence the induced permutation preserves
the form G_ij = <e_i, Q^{-1} e_j>.  Conversely a G-preserving permutation
(extended to fix the distinguished vectors, e.g. the unit effect) always
extends to a unique linear map, because G carries the full linear
relation structure of the family.  Backtracking over G-preserving
permutations therefore enumerates exactly the symmetry group.
"""

import numpy as np

from . import linalg, scalars
from .errors import SearchBudgetExceeded

DEFAULT_NODE_CAP = 10 ** 7


def _gram_key(x, mode):
    if mode == scalars.EXACT:
        return x
    return int(round(float(x) / scalars.MATCH_TOL))


def _gram_table(vectors, fixed, mode):
    pts = list(vectors) + list(fixed)
    n = len(pts[0])
    q = np.zeros((n, n)) if mode == scalars.FLOAT \
        else scalars.identity_matrix(n, mode) * 0
    for v in vectors:
        q = q + np.outer(v, v)
    qi = linalg.inverse(q, mode)
    k = len(pts)
    g = [[_gram_key(pts[i] @ qi @ pts[j], mode) for j in range(k)]
         for i in range(k)]
    return g


def _matrix_from_permutation(vectors, fixed, perm, mode, basis_data=None):
    """Linear map sending vectors[i] -> vectors[perm[i]] and fixing the
    fixed vectors; returns None if the extension fails to verify."""
    pts = list(vectors) + list(fixed)
    full = perm + list(range(len(vectors), len(pts)))
    if basis_data is None:
        idx = linalg.independent_rows(pts, mode, need=len(pts[0]))
        b = np.array([list(pts[i]) for i in idx],
                     dtype=object if mode == scalars.EXACT else float).T
        basis_data = (idx, linalg.inverse(b, mode))
    idx, b_inv = basis_data
    img = np.array([list(pts[full[i]]) for i in idx],
                   dtype=object if mode == scalars.EXACT else float).T
    m = img @ b_inv
    for i, p in enumerate(pts):
        if not scalars.vec_eq(m @ p, pts[full[i]], mode, scalars.MATCH_TOL):
            return None
    if not linalg.is_invertible(m, mode):
        return None
    return m


def automorphism_basis_data(vectors, fixed, mode):
    pts = list(vectors) + list(fixed)
    idx = linalg.independent_rows(pts, mode, need=len(pts[0]))
    b = np.array([list(pts[i]) for i in idx],
                 dtype=object if mode == scalars.EXACT else float).T
    return (idx, linalg.inverse(b, mode))


def automorphism_search(vectors, fixed, mode, node_cap=DEFAULT_NODE_CAP,
                        first_only=False):
    """All permutations pi of `vectors` extending to linear maps that fix
    every vector in `fixed`.  Returns list of (perm, matrix)."""
    k = len(vectors)
    g = _gram_table(vectors, fixed, mode)
    nfix = len(fixed)
    basis_data = automorphism_basis_data(vectors, fixed, mode)

    out = []
    nodes = [0]
    assigned = [None] * k
    used = [False] * k

    def compatible(i, j):
        # candidate image j for point i against fixed tail and prefix
        for t in range(nfix):
            if g[i][k + t] != g[j][k + t] or g[k + t][i] != g[k + t][j]:
                return False
        if g[i][i] != g[j][j]:
            return False
        for p in range(i):
            q = assigned[p]
            if g[i][p] != g[j][q] or g[p][i] != g[q][j]:
                return False
        return True

    def rec(i):
        nodes[0] += 1
        if nodes[0] > node_cap:
            raise SearchBudgetExceeded("symmetry search exceeded %d nodes"
                                       % node_cap)
        if i == k:
            m = _matrix_from_permutation(vectors, fixed, list(assigned),
                                         mode, basis_data)
            if m is not None:
                out.append((list(assigned), m))
            return bool(out) and first_only
        for j in range(k):
            if used[j] or not compatible(i, j):
                continue
            assigned[i] = j
            used[j] = True
            if rec(i + 1):
                return True
            assigned[i] = None
            used[j] = False
        return False

    rec(0)
    return out


def mapping_search(vectors_a, fixed_a, vectors_b, fixed_b, mode,
                   node_cap=DEFAULT_NODE_CAP):
    """First linear map carrying {a_i} bijectively onto {b_j} and each
    fixed_a[t] to fixed_b[t], or None."""
    if len(vectors_a) != len(vectors_b):
        return None
    k = len(vectors_a)
    if len(vectors_a[0]) != len(vectors_b[0]):
        return None
    ga = _gram_table(vectors_a, fixed_a, mode)
    gb = _gram_table(vectors_b, fixed_b, mode)
    nfix = len(fixed_a)
    nodes = [0]
    assigned = [None] * k
    used = [False] * k
    found = []

    def compatible(i, j):
        for t in range(nfix):
            if ga[i][k + t] != gb[j][k + t] or ga[k + t][i] != gb[k + t][j]:
                return False
        if ga[i][i] != gb[j][j]:
            return False
        for p in range(i):
            q = assigned[p]
            if ga[i][p] != gb[j][q] or ga[p][i] != gb[q][j]:
                return False
        return True

    def rec(i):
        nodes[0] += 1
        if nodes[0] > node_cap:
            raise SearchBudgetExceeded("equivalence search exceeded %d nodes"
                                       % node_cap)
        if i == k:
            pts_a = list(vectors_a) + list(fixed_a)
            idx = linalg.independent_rows(pts_a, mode, need=len(pts_a[0]))
            b = np.array([list(pts_a[t]) for t in idx],
                         dtype=object if mode == scalars.EXACT else float).T
            tgt = list(vectors_b) + list(fixed_b)
            full = list(assigned) + list(range(k, k + nfix))
            img = np.array([list(tgt[full[t]]) for t in idx],
                           dtype=object if mode == scalars.EXACT else float).T
            m = img @ linalg.inverse(b, mode)
            for t, p in enumerate(pts_a):
                if not scalars.vec_eq(m @ p, tgt[full[t]], mode,
                                      scalars.MATCH_TOL):
                    return False
            if not linalg.is_invertible(m, mode):
                return False
            found.append(m)
            return True
        for j in range(k):
            if used[j] or not compatible(i, j):
                continue
            assigned[i] = j
            used[j] = True
            if rec(i + 1):
                return True
            assigned[i] = None
            used[j] = False
        return False

    rec(0)
    return found[0] if found else None


def matrix_sort_key(m, mode):
    return tuple(scalars.vector_key(row, mode) for row in np.asarray(m))


def local_symmetry_group(s, node_cap=DEFAULT_NODE_CAP):
    """All invertible maps whose adjoint permutes the ray-extreme set of a
    local system and fixes the unit effect."""
    res = automorphism_search(s.ray_extremes, [s.unit], s.mode, node_cap)
    res.sort(key=lambda pm: matrix_sort_key(pm[1], s.mode))
    return [m for _, m in res]


def systems_equivalent(a, b, node_cap=DEFAULT_NODE_CAP):
    """An invertible map carrying a's ray-extreme set onto b's and unit to
    unit, or None."""
    if len(a.ray_extremes) != len(b.ray_extremes) or a.dim != b.dim:
        return None
    try:
        modes = scalars.join_modes(a.mode, b.mode)
    except Exception:
        return None
    del modes
    return mapping_search(a.ray_extremes, [a.unit],
                          b.ray_extremes, [b.unit], a.mode, node_cap)
