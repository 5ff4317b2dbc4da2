"""Polyhedral cone computations: double description, duality, membership.

A `Cone` is stored by a canonicalized generator set; the facet system
(outward normals, i.e. the generators of the dual cone) is computed
lazily by the double description method and cached.  Dimensions in this
project stay at or below 16 and generator counts below ~40, so the
incremental DD algorithm with the combinatorial adjacency test is both
exact and fast.
"""

import math
from fractions import Fraction

import numpy as np

from . import linalg, scalars
from .errors import (DimensionMismatch, NotGenerating, NotPointed,
                     NumericallyDegenerate)


def canonical_ray(v, mode):
    """Canonical representative of the ray through v (scale only, the
    direction is part of the data).  Exact: primitive integer vector.
    Float: unit Euclidean norm."""
    if mode == scalars.EXACT:
        den = 1
        for x in v:
            den = den * Fraction(x).denominator // math.gcd(
                den, Fraction(x).denominator)
        ints = [int(Fraction(x) * den) for x in v]
        g = 0
        for x in ints:
            g = math.gcd(g, abs(x))
        if g == 0:
            return scalars.zeros_vector(len(v), mode)
        return np.array([Fraction(x, g) for x in ints], dtype=object)
    v = np.asarray(v, dtype=float)
    nrm = float(np.linalg.norm(v))
    if nrm <= scalars.float_eps():
        return np.zeros(len(v))
    return v / nrm


def _ray_key(v, mode):
    return scalars.vector_key(v, mode)


def _dedupe(rays, mode):
    seen = set()
    out = []
    for r in rays:
        k = _ray_key(r, mode)
        if k not in seen:
            seen.add(k)
            out.append(r)
    return out


def halfspace_extreme_rays(constraints, mode, eps=None):
    """Extreme rays of {x : <a, x> >= 0 for each row a}.

    Returns (rays, lineality_basis); the cone is pointed iff the
    lineality basis is empty.  Incremental double description starting
    from the full space.
    """
    rows = [np.asarray(a) for a in constraints]
    if not rows:
        raise DimensionMismatch("no constraints given")
    n = len(rows[0])
    if mode == scalars.FLOAT and eps is None:
        eps = scalars.float_eps()

    def sgn(x):
        if mode == scalars.EXACT:
            return (x > 0) - (x < 0)
        if x > eps:
            return 1
        if x < -eps:
            return -1
        return 0

    lineality = [scalars.identity_matrix(n, mode)[i] for i in range(n)]
    rays = []      # vectors
    zeros = []     # per ray: set of processed-constraint indices with <a,r>=0
    processed = []

    for a in rows:
        if scalars.vec_is_zero(a, mode, eps):
            continue
        k = len(processed)
        dl = [a @ l for l in lineality]
        hit = [i for i, d in enumerate(dl) if sgn(d) != 0]
        if hit:
            if mode == scalars.EXACT:
                i0 = hit[0]
            else:
                i0 = max(hit, key=lambda i: abs(dl[i]))
            l0, d0 = lineality[i0], dl[i0]
            lineality = [lineality[i] - (dl[i] / d0) * l0
                         for i in range(len(lineality)) if i != i0]
            r0 = l0 if sgn(d0) > 0 else -l0
            ar0 = a @ r0
            # project every ray onto {a = 0}: the old cone contained the
            # line through l0, so C' = (C n {a=0}) + cone(r0)
            for i, r in enumerate(rays):
                t = a @ r
                if sgn(t) != 0:
                    rays[i] = canonical_ray(r - (t / ar0) * r0, mode)
                zeros[i] = zeros[i] | {k}
            rays.append(canonical_ray(r0, mode))
            zeros.append(set(range(k)))
        else:
            ts = [a @ r for r in rays]
            pos = [i for i, t in enumerate(ts) if sgn(t) > 0]
            neg = [i for i, t in enumerate(ts) if sgn(t) < 0]
            zer = [i for i, t in enumerate(ts) if sgn(t) == 0]
            if neg:
                new = []
                min_common = n - len(lineality) - 2
                for p in pos:
                    for m in neg:
                        common = zeros[p] & zeros[m]
                        if len(common) < min_common:
                            continue
                        if any(common <= zeros[o]
                               for o in range(len(rays))
                               if o != p and o != m):
                            continue
                        v = canonical_ray(ts[p] * rays[m] - ts[m] * rays[p],
                                          mode)
                        if not scalars.vec_is_zero(v, mode, eps):
                            new.append(v)
                keep_r = [rays[i] for i in pos + zer]
                keep_z = [zeros[i] | ({k} if i in zer else set())
                          for i in pos + zer]
                rays = keep_r
                zeros = keep_z
                for v in _dedupe(new, mode):
                    zs = {j for j, aj in enumerate(processed)
                          if sgn(aj @ v) == 0} | {k}
                    rays.append(v)
                    zeros.append(zs)
            else:
                for i in zer:
                    zeros[i] = zeros[i] | {k}
        processed.append(a)

    order = sorted(range(len(rays)), key=lambda i: _ray_key(rays[i], mode))
    return [rays[i] for i in order], lineality


class Cone:
    """Closed polyhedral cone given by finitely many generators."""

    def __init__(self, generators, ambient_dim, mode):
        scalars.check_mode(mode)
        self.mode = mode
        self.ambient_dim = ambient_dim
        gens = []
        for g in generators:
            g = np.asarray(g)
            if len(g) != ambient_dim:
                raise DimensionMismatch(
                    "generator length %d != ambient dim %d"
                    % (len(g), ambient_dim))
            c = canonical_ray(g, mode)
            if not scalars.vec_is_zero(c, mode):
                gens.append(c)
        self.generators = _dedupe(gens, mode)
        self._facets = None
        self._extreme = None

    # -- structural predicates -------------------------------------------

    def generator_matrix(self):
        return np.array([list(g) for g in self.generators],
                        dtype=object if self.mode == scalars.EXACT else float)

    def is_generating(self):
        if not self.generators:
            return False
        return linalg.rank(self.generator_matrix(), self.mode) \
            == self.ambient_dim

    def is_pointed(self):
        # pointed iff the dual cone is full-dimensional
        facets = self.facets()
        if not facets:
            return False
        m = np.array([list(f) for f in facets],
                     dtype=object if self.mode == scalars.EXACT else float)
        return linalg.rank(m, self.mode) == self.ambient_dim

    # -- facet system ----------------------------------------------------

    def facets(self):
        """Outward normals: the extreme rays of the dual cone."""
        if self._facets is None:
            if not self.generators:
                raise NotGenerating("cone has no generators")
            rays, lin = halfspace_extreme_rays(self.generators, self.mode)
            if lin:
                # dual has lineality: primal is not full-dimensional
                raise NotGenerating("cone does not span the ambient space")
            self._facets = rays
        return self._facets

    # -- membership -------------------------------------------------------

    # above this generator count the facet system can be exponentially
    # large, so membership switches to LP feasibility
    LP_GENERATOR_THRESHOLD = 32

    def member(self, v):
        """True iff v is a nonnegative combination of the generators."""
        v = np.asarray(v)
        if len(v) != self.ambient_dim:
            raise DimensionMismatch("vector length %d != ambient dim %d"
                                    % (len(v), self.ambient_dim))
        if self._facets is None and \
                len(self.generators) > self.LP_GENERATOR_THRESHOLD:
            return self._member_lp(v)
        if self.mode == scalars.EXACT:
            return all(f @ v >= 0 for f in self.facets())
        eps = scalars.float_eps()
        return all(float(f @ v) >= -eps for f in self.facets())

    def _member_lp(self, v):
        """Minimize the L1 residual of G x = v over x >= 0; membership
        iff the optimum vanishes at tolerance."""
        from scipy.optimize import linprog
        g = np.array([[float(x) for x in gen] for gen in self.generators]).T
        b = np.array([float(x) for x in v])
        n, k = g.shape
        a_eq = np.hstack([g, np.eye(n), -np.eye(n)])
        cost = np.concatenate([np.zeros(k), np.ones(2 * n)])
        res = linprog(cost, A_eq=a_eq, b_eq=b, bounds=(0, None),
                      method="highs")
        if res.status != 0:
            raise NumericallyDegenerate("LP membership did not converge")
        scale = max(1.0, float(np.max(np.abs(b))))
        return res.fun <= scalars.float_eps() * scale * n

    def contains_cone(self, other):
        return all(self.member(g) for g in other.generators)


def dual_cone(c):
    """Dual cone {v : <v, g> >= 0 for all generators g of c}."""
    if not c.is_generating():
        raise NotGenerating("dual_cone requires a generating cone")
    rays, lin = halfspace_extreme_rays(c.generators, c.mode)
    if lin:
        raise NotGenerating("cone does not span the ambient space")
    if not rays:
        # dual reduced to the origin: the primal is the whole space
        raise NotPointed("dual_cone requires a pointed cone")
    m = np.array([list(r) for r in rays],
                 dtype=object if c.mode == scalars.EXACT else float)
    if linalg.rank(m, c.mode) < c.ambient_dim:
        raise NotPointed("dual_cone requires a pointed cone")
    d = Cone(rays, c.ambient_dim, c.mode)
    d._facets = extreme_rays(c)
    return d


def extreme_rays(c):
    """Minimal canonical generator set of a pointed cone.

    A generator is extreme iff its tight facet set has rank dim-1.
    """
    if c._extreme is None:
        facets = c.facets()
        fm = np.array([list(f) for f in facets],
                      dtype=object if c.mode == scalars.EXACT else float)
        if linalg.rank(fm, c.mode) < c.ambient_dim:
            raise NotPointed("extreme_rays requires a pointed cone")
        out = []
        for g in c.generators:
            if c.mode == scalars.EXACT:
                tight = [f for f in facets if f @ g == 0]
            else:
                eps = scalars.float_eps()
                tight = [f for f in facets if abs(float(f @ g)) <= eps]
            if not tight:
                continue
            m = np.array([list(f) for f in tight],
                         dtype=object if c.mode == scalars.EXACT else float)
            if linalg.rank(m, c.mode) == c.ambient_dim - 1:
                out.append(g)
        c._extreme = sorted(out, key=lambda r: _ray_key(r, c.mode))
    return list(c._extreme)


def member(c, v):
    return c.member(v)


def cone_leq(v, w, c):
    """Partial order induced by the cone: v <= w iff w - v is a member."""
    v = np.asarray(v)
    w = np.asarray(w)
    if len(v) != len(w):
        raise DimensionMismatch("cone_leq operands differ in length")
    return c.member(w - v)


def nullspace(matrix, mode, eps=None):
    """Kernel basis of a LinearMap (matrix)."""
    return linalg.nullspace(np.asarray(matrix), mode, eps)
