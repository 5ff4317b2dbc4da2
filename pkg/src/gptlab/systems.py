"""Local GPT systems: the catalog, validation, dichotomy, reducibility.

A `LocalSystem` couples a mutually dual pair of cones with the unit
effect, the ray-extreme effect representatives (extreme points of the
proper-effect set) and the pure states.  Pure states are always derived
from the effect cone by duality and vertex enumeration, never hardcoded.
"""

import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from . import cones, linalg, scalars
from .cones import Cone
from .errors import (DecompositionInconsistent, InvalidParameter,
                     SearchBudgetExceeded)


@dataclass
class LocalSystem:
    name: str
    dim: int
    mode: str
    effect_cone: Cone
    state_cone: Cone
    unit: np.ndarray
    ray_extremes: list          # proper-effect representatives
    pure_states: list           # normalized, <u, s> = 1
    ray_labels: list = None
    kind: str = None            # catalog tag: classical|cube|octoplex|...
    params: dict = field(default_factory=dict)

    @property
    def scalar_mode(self):
        return self.mode

    def ray_index(self, v, tol=scalars.MATCH_TOL):
        key = scalars.vector_key(v, self.mode, tol)
        for i, e in enumerate(self.ray_extremes):
            if scalars.vector_key(e, self.mode, tol) == key:
                return i
        return None

    def label(self, i):
        if self.ray_labels:
            return self.ray_labels[i]
        return "e%d" % (i + 1)


@dataclass
class Measurement:
    effects: list
    size: int


@dataclass
class Decomposition:
    components: list    # list of (subspace_basis, ray_indices)

    @property
    def n_components(self):
        return len(self.components)

    def ray_partition(self):
        return [tuple(idx) for _, idx in self.components]


@dataclass
class ValidationReport:
    checks: list        # (name, passed, witness)

    @property
    def passed(self):
        return all(ok for _, ok, _ in self.checks)

    def failures(self):
        return [(n, w) for n, ok, w in self.checks if not ok]


# ---------------------------------------------------------------------------
# construction helpers

def _derive_pure_states(effect_cone, unit, mode):
    state_cone = cones.dual_cone(effect_cone)
    states = []
    for r in cones.extreme_rays(state_cone):
        t = unit @ r
        if mode == scalars.EXACT:
            if t <= 0:
                raise InvalidParameter("unit effect not interior: state ray "
                                       "with <u, s> <= 0")
        elif float(t) <= scalars.float_eps():
            raise InvalidParameter("unit effect not interior (float)")
        states.append(r / t)
    states.sort(key=lambda s: scalars.vector_key(s, mode))
    return state_cone, states


def _representative(ray, pure_states, mode):
    vals = [ray @ s for s in pure_states]
    top = max(vals)
    if (mode == scalars.EXACT and top <= 0) or \
            (mode == scalars.FLOAT and float(top) <= scalars.float_eps()):
        raise InvalidParameter("effect ray vanishes on all pure states")
    return ray / top


def system_from_effect_rays(name, rays, unit, mode, labels=None, kind=None,
                            params=None):
    """Build a system from effect-cone ray directions (order preserved)."""
    dim = len(unit)
    unit = scalars.as_vector(unit, mode)
    effect_cone = Cone(rays, dim, mode)
    state_cone, pure_states = _derive_pure_states(effect_cone, unit, mode)
    extreme = {scalars.vector_key(r, mode)
               for r in cones.extreme_rays(effect_cone)}
    reps = []
    for r in rays:
        c = cones.canonical_ray(scalars.as_vector(r, mode), mode)
        if scalars.vector_key(c, mode) not in extreme:
            raise InvalidParameter("listed effect ray is not extreme")
        reps.append(_representative(c, pure_states, mode))
    return LocalSystem(name=name, dim=dim, mode=mode,
                       effect_cone=effect_cone, state_cone=state_cone,
                       unit=unit, ray_extremes=reps, pure_states=pure_states,
                       ray_labels=labels, kind=kind, params=params or {})


def system_from_states(name, states, unit, mode, kind=None, params=None):
    """Build a system from pure states; effects derived by duality."""
    dim = len(unit)
    unit = scalars.as_vector(unit, mode)
    raw_state_cone = Cone(states, dim, mode)
    effect_cone = cones.dual_cone(raw_state_cone)
    state_cone, pure_states = _derive_pure_states(effect_cone, unit, mode)
    reps = [_representative(r, pure_states, mode)
            for r in cones.extreme_rays(effect_cone)]
    reps.sort(key=lambda e: scalars.vector_key(e, mode))
    return LocalSystem(name=name, dim=dim, mode=mode,
                       effect_cone=effect_cone, state_cone=state_cone,
                       unit=unit, ray_extremes=reps, pure_states=pure_states,
                       kind=kind, params=params or {})


# ---------------------------------------------------------------------------
# catalog builders

def build_classical(n, mode=scalars.EXACT):
    """Classical system on n outcomes: the (n-1)-simplex state space."""
    if n < 2:
        raise InvalidParameter("classical system needs n >= 2 outcomes")
    rays = [[1 if j == i else 0 for j in range(n)] for i in range(n)]
    unit = [1] * n
    return system_from_effect_rays("classical-%d" % n, rays, unit, mode,
                                   labels=["e%d" % (i + 1) for i in range(n)],
                                   kind="classical", params={"n": n})


def build_cube(d, mode=scalars.EXACT):
    """Boxworld gbit with d binary measurements: hypercube state space."""
    if d < 2:
        raise InvalidParameter("cube system needs d >= 2 measurements")
    rays = []
    labels = []
    for k in range(d):
        for sign, tag in ((1, "+"), (-1, "-")):
            v = [1] + [0] * d
            v[k + 1] = sign
            rays.append(v)
            labels.append("e%d%s" % (k + 1, tag))
    unit = [1] + [0] * d
    return system_from_effect_rays("cube-%d" % d, rays, unit, mode,
                                   labels=labels, kind="cube",
                                   params={"d": d})


def build_octoplex(d, mode=scalars.EXACT):
    """Cross-polytope state space (dual polytope to the d-cube)."""
    if d < 2:
        raise InvalidParameter("octoplex system needs d >= 2")
    states = []
    for k in range(d):
        for sign in (1, -1):
            v = [1] + [0] * d
            v[k + 1] = sign
            states.append(v)
    unit = [1] + [0] * d
    return system_from_states("octoplex-%d" % d, states, unit, mode,
                              kind="octoplex", params={"d": d})


def polygon_radius(n):
    return math.sqrt(1.0 / math.cos(math.pi / n))


def build_polygon(n, mode=scalars.FLOAT):
    """Regular polygon system with n pure states (float mode only)."""
    if n < 3:
        raise InvalidParameter("polygon needs n >= 3")
    if mode != scalars.FLOAT:
        raise InvalidParameter("polygon systems use float mode (irrational "
                               "coordinates)")
    r = polygon_radius(n)
    if n % 2 == 1:
        rays = [[1.0 / (1 + r * r),
                 r * math.sin(2 * math.pi * i / n) / (1 + r * r),
                 r * math.cos(2 * math.pi * i / n) / (1 + r * r)]
                for i in range(1, n + 1)]
        sys = system_from_effect_rays(
            "polygon-%d" % n, rays, [1, 0, 0], mode,
            labels=["e%d" % i for i in range(1, n + 1)],
            kind="polygon", params={"n": n})
        return sys
    # even n: derive effects from the states so that the dichotomy pairing
    # e <-> u - e closes exactly within the listed representatives
    states = [[1.0,
               r * math.sin(2 * math.pi * j / n),
               r * math.cos(2 * math.pi * j / n)]
              for j in range(1, n + 1)]
    sys = system_from_states("polygon-%d" % n, states, [1, 0, 0], mode,
                             kind="polygon", params={"n": n})
    if not is_dichotomic(sys):
        raise DecompositionInconsistent(
            "even polygon construction lost dichotomy closure")
    return sys


def build_squashed_gtrit(mode=scalars.EXACT):
    """Reducible 4-dim system with rays {X, Y0, Y1, Z0, Z1} and two
    fine-grained 3-outcome measurements sharing the X effect."""
    third = Fraction(1, 3) if mode == scalars.EXACT else 1.0 / 3.0
    half = Fraction(1, 2) if mode == scalars.EXACT else 0.5
    rays = [[third, 1, 0, 0],
            [third, -half, 1, 0],
            [third, -half, -1, 0],
            [third, -half, 0, 1],
            [third, -half, 0, -1]]
    return system_from_effect_rays(
        "squashed-gtrit", rays, [1, 0, 0, 0], mode,
        labels=["X", "Y0", "Y1", "Z0", "Z1"],
        kind="squashed-gtrit", params={})


# ---------------------------------------------------------------------------
# predicates and analysis

def validate_system(s):
    """Check all LocalSystem invariants; failures are data, not errors."""
    checks = []
    mode = s.mode

    dual = cones.dual_cone(s.effect_cone)
    same = {scalars.vector_key(g, mode) for g in dual.generators} == \
           {scalars.vector_key(g, mode) for g in s.state_cone.generators}
    checks.append(("state_cone_is_dual_of_effect_cone", same, None))
    dual2 = cones.dual_cone(s.state_cone)
    same2 = {scalars.vector_key(g, mode) for g in dual2.generators} == \
            {scalars.vector_key(g, mode) for g in s.effect_cone.generators}
    checks.append(("effect_cone_is_dual_of_state_cone", same2, None))

    checks.append(("effect_cone_pointed", s.effect_cone.is_pointed(), None))
    checks.append(("effect_cone_generating", s.effect_cone.is_generating(),
                   None))

    bad = None
    for st in s.pure_states:
        t = s.unit @ st
        if not scalars.is_zero(t - 1, mode, scalars.MATCH_TOL):
            bad = (list(st), t)
            break
    checks.append(("unit_normalization_on_pure_states", bad is None, bad))

    bad = None
    for st in s.pure_states:
        t = s.unit @ st
        ok = t > 0 if mode == scalars.EXACT else float(t) > scalars.float_eps()
        if not ok:
            bad = list(st)
            break
    interior = bad is None and s.effect_cone.member(s.unit)
    checks.append(("unit_interior_to_effect_cone", interior, bad))

    bad = None
    for e in s.ray_extremes:
        for st in s.pure_states:
            p = e @ st
            lo = p >= 0 if mode == scalars.EXACT \
                else float(p) >= -scalars.float_eps()
            hi = p <= 1 if mode == scalars.EXACT \
                else float(p) <= 1 + scalars.float_eps()
            if not (lo and hi):
                bad = (list(e), list(st), p)
                break
        if bad:
            break
    checks.append(("proper_effect_range", bad is None, bad))

    extreme = {scalars.vector_key(r, mode)
               for r in cones.extreme_rays(s.effect_cone)}
    bad = None
    for e in s.ray_extremes:
        key = scalars.vector_key(cones.canonical_ray(e, mode), mode)
        top = max(e @ st for st in s.pure_states)
        attains = scalars.is_zero(top - 1, mode, scalars.MATCH_TOL)
        if key not in extreme or not attains:
            bad = list(e)
            break
    checks.append(("ray_extremes_extreme_and_normalized", bad is None, bad))

    return ValidationReport(checks)


def is_dichotomic(s):
    """True iff u - e is again a listed ray-extreme for every ray-extreme e."""
    keys = {scalars.vector_key(e, s.mode) for e in s.ray_extremes}
    return all(scalars.vector_key(s.unit - e, s.mode) in keys
               for e in s.ray_extremes)


def is_classical(s):
    rays = s.ray_extremes
    if len(rays) != s.dim:
        return False
    m = np.array([list(r) for r in rays],
                 dtype=object if s.mode == scalars.EXACT else float)
    return linalg.rank(m, s.mode) == s.dim


def _direct_sum_ok(rays, parts, mode):
    union = sorted({i for p in parts for i in p})
    total = np.array([list(rays[i]) for i in union],
                     dtype=object if mode == scalars.EXACT else float)
    full = linalg.rank(total, mode)
    acc = 0
    for idx in parts:
        m = np.array([list(rays[i]) for i in idx],
                     dtype=object if mode == scalars.EXACT else float)
        acc += linalg.rank(m, mode)
    return acc == full


def _brute_force_partition(rays, mode):
    """Finest partition of rays into groups with direct-sum spans."""
    n = len(rays)

    def split(idx):
        if len(idx) <= 1:
            return [idx]
        for bits in range(1, 2 ** (len(idx) - 1)):
            a = [idx[i] for i in range(len(idx)) if bits >> i & 1]
            b = [idx[i] for i in range(len(idx)) if not bits >> i & 1]
            if _direct_sum_ok(rays, [a, b], mode):
                sub = _direct_sum_ok  # noqa: F841  (keep flake quiet)
                return split(a) + split(b)
        return [idx]

    parts = split(list(range(n)))
    return sorted([sorted(p) for p in parts])


def reduce(s):
    """Finest decomposition of the effect-cone extreme rays into groups
    whose spans are in direct sum.

    Rays are connected when some kernel basis vector of the ray matrix is
    nonzero on both; components are the transitive closure.  The result
    is verified (direct-sum property, and minimality by brute force when
    the ray count is small).
    """
    rays = s.ray_extremes
    k = len(rays)
    mode = s.mode
    mat = np.array([list(r) for r in rays],
                   dtype=object if mode == scalars.EXACT else float).T
    kernel = linalg.nullspace(mat, mode)

    parent = list(range(k))

    def find(i):
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    def union(i, j):
        parent[find(i)] = find(j)

    for v in kernel:
        support = [i for i in range(k)
                   if not scalars.is_zero(v[i], mode, scalars.MATCH_TOL)]
        for i in support[1:]:
            union(support[0], i)

    groups = {}
    for i in range(k):
        groups.setdefault(find(i), []).append(i)
    parts = sorted([sorted(g) for g in groups.values()])

    if not _direct_sum_ok(rays, parts, mode):
        raise DecompositionInconsistent(
            "kernel components do not span in direct sum")
    if k <= 10 and parts != _brute_force_partition(rays, mode):
        raise DecompositionInconsistent(
            "kernel components disagree with brute-force partition")

    components = []
    for idx in parts:
        sel = [rays[i] for i in idx]
        basis_idx = linalg.independent_rows(sel, mode)
        components.append(([sel[i] for i in basis_idx], idx))
    return Decomposition(components)


def fine_grained_measurements(s, max_r):
    """All multisets of at most max_r ray-extremes summing to u."""
    if max_r > 4:
        raise SearchBudgetExceeded("fine_grained_measurements bounded at "
                                   "max_r <= 4")
    out = []
    k = len(s.ray_extremes)
    for r in range(1, max_r + 1):
        for combo in itertools.combinations_with_replacement(range(k), r):
            total = sum((s.ray_extremes[i] for i in combo[1:]),
                        s.ray_extremes[combo[0]])
            if scalars.vec_eq(total, s.unit, s.mode, scalars.MATCH_TOL):
                out.append(Measurement([s.ray_extremes[i] for i in combo], r))
    return out
