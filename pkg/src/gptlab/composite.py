"""Max tensor product composites.

The composite effect cone is generated by all tensor products of local
ray-extreme representatives; the state cone is its dual.  Tensor
flattening is row-major over the locals' coordinate bases (numpy kron
order), fixed globally, so coordinates are reproducible byte-for-byte in
exact mode.  Subsystem indices are 1-based throughout the public API.
"""

import itertools
from dataclasses import dataclass, field
from functools import reduce as _reduce

import numpy as np

from . import cones, linalg, scalars
from .cones import Cone
from .errors import (DimensionMismatch, IndexOutOfRange, InvalidState,
                     KindMismatch, Lemma1Violation, NotCubeSystem, TooLarge,
                     TooSmall)

GENERATOR_CAP = 10 ** 5


def kron_all(vectors):
    return _reduce(np.kron, vectors)


@dataclass
class ProductEffect:
    kind: str                   # "ray" | "subunit" | "product"
    components: tuple           # per-subsystem vectors
    flattened: np.ndarray
    indices: tuple = None       # local ray indices; None entry = unit slot
    subunit_slot: int = None    # 1-based, for kind == "subunit"


@dataclass
class CompositeState:
    vector: np.ndarray
    normalized: bool = True


@dataclass
class CompositeSystem:
    locals: list
    mode: str
    dims: list
    ambient_dim: int
    unit: np.ndarray
    effect_cone: Cone
    ray_extremes: list          # ProductEffect, cartesian-product order
    _index: dict = field(default_factory=dict, repr=False)
    _state_cone: Cone = field(default=None, repr=False)
    _pure_products: list = field(default=None, repr=False)
    _separable_cone: Cone = field(default=None, repr=False)

    @property
    def n_subsystems(self):
        return len(self.locals)

    def local_counts(self):
        return [len(l.ray_extremes) for l in self.locals]

    def ray_effect(self, indices):
        return self.ray_extremes[self._index[tuple(indices)]]

    def effect_position(self, v, tol=scalars.MATCH_TOL):
        """Position of a vector in the canonical ray-extreme list, or None.

        Float mode snaps to the nearest representative and rejects
        ambiguous matches (second candidate within 10x of the first).
        """
        if self.mode == scalars.EXACT:
            key = scalars.vector_key(v, self.mode)
            for i, e in enumerate(self.ray_extremes):
                if scalars.vector_key(e.flattened, self.mode) == key:
                    return i
            return None
        dists = sorted(
            (float(np.max(np.abs(e.flattened - v))), i)
            for i, e in enumerate(self.ray_extremes))
        d0, i0 = dists[0]
        if d0 > tol:
            return None
        if len(dists) > 1 and dists[1][0] <= \
                scalars.SNAP_AMBIGUITY_FACTOR * max(d0, 1e-15):
            from .errors import NumericallyDegenerate
            raise NumericallyDegenerate(
                "ambiguous effect snap: distances %g and %g"
                % (d0, dists[1][0]))
        return i0

    def state_cone(self):
        if self._state_cone is None:
            self._state_cone = cones.dual_cone(self.effect_cone)
        return self._state_cone

    def effect_label(self, pe):
        parts = []
        for slot, (loc, ix) in enumerate(zip(self.locals, pe.indices)):
            parts.append("u" if ix is None else loc.label(ix))
        return "(" + ")*(".join(parts) + ")"


def compose(local_systems, cap=GENERATOR_CAP):
    """Build the max tensor product of N >= 2 validated local systems."""
    if len(local_systems) < 2:
        raise TooSmall("composite requires N >= 2 subsystems")
    mode = scalars.join_modes(*[l.mode for l in local_systems])
    counts = [len(l.ray_extremes) for l in local_systems]
    total = 1
    for c in counts:
        total *= c
    if total > cap:
        raise TooLarge("composite would have %d generators (cap %d)"
                       % (total, cap))
    dims = [l.dim for l in local_systems]
    ambient = 1
    for d in dims:
        ambient *= d
    unit = kron_all([l.unit for l in local_systems])
    effects = []
    index = {}
    for combo in itertools.product(*[range(c) for c in counts]):
        comps = tuple(local_systems[i].ray_extremes[j]
                      for i, j in enumerate(combo))
        pe = ProductEffect(kind="ray", components=comps,
                           flattened=kron_all(comps), indices=combo)
        index[combo] = len(effects)
        effects.append(pe)
    cone = Cone([pe.flattened for pe in effects], ambient, mode)
    return CompositeSystem(locals=list(local_systems), mode=mode, dims=dims,
                           ambient_dim=ambient, unit=unit, effect_cone=cone,
                           ray_extremes=effects, _index=index)


def composite_ray_extremes(c, certify=True):
    """Cartesian-product ray-extreme effects; optionally certify each as
    extreme in the composite effect cone."""
    if certify:
        ext = {scalars.vector_key(r, c.mode)
               for r in cones.extreme_rays(c.effect_cone)}
        for pe in c.ray_extremes:
            key = scalars.vector_key(
                cones.canonical_ray(pe.flattened, c.mode), c.mode)
            if key not in ext:
                raise Lemma1Violation(
                    "product effect failed extremality certification")
    return list(c.ray_extremes)


def sub_unit_effects(c, i):
    """All i-sub-unit effects (unit at 1-based slot i)."""
    n = c.n_subsystems
    if not 1 <= i <= n:
        raise IndexOutOfRange("subsystem index %d outside 1..%d" % (i, n))
    out = []
    ranges = [range(len(l.ray_extremes)) if k != i - 1 else [None]
              for k, l in enumerate(c.locals)]
    for combo in itertools.product(*ranges):
        comps = tuple(c.locals[k].unit if j is None
                      else c.locals[k].ray_extremes[j]
                      for k, j in enumerate(combo))
        out.append(ProductEffect(kind="subunit", components=comps,
                                 flattened=kron_all(comps),
                                 indices=tuple(combo), subunit_slot=i))
    return out


def adjacency(e, f):
    """The unique 1-based subsystem where two ray-extreme product effects
    differ, or None if they differ on zero or several."""
    if e.kind != "ray" or f.kind != "ray":
        raise KindMismatch("adjacency is defined on ray-extreme effects")
    diff = [k for k, (a, b) in enumerate(zip(e.indices, f.indices)) if a != b]
    return diff[0] + 1 if len(diff) == 1 else None


def hamming_distance(e, f):
    if e.kind != "ray" or f.kind != "ray":
        raise KindMismatch("hamming distance is defined on ray-extreme "
                           "effects")
    return sum(1 for a, b in zip(e.indices, f.indices) if a != b)


def refiners_of_subunit(c, sub):
    """All composite ray-extremes refining an i-sub-unit effect.

    Any two distinct refiners must be adjacent at the unit slot; a
    violation indicates a cone-arithmetic bug and is raised as such.
    """
    if sub.kind != "subunit":
        raise KindMismatch("expected a sub-unit effect")
    out = [pe for pe in c.ray_extremes
           if cones.cone_leq(pe.flattened, sub.flattened, c.effect_cone)]
    for a, b in itertools.combinations(out, 2):
        if adjacency(a, b) != sub.subunit_slot:
            raise Lemma1Violation(
                "refiners %s and %s of a %d-sub-unit are not adjacent at it"
                % (a.indices, b.indices, sub.subunit_slot))
    return out


def pure_product_states(c, certify=True):
    """Tensor products of local pure states, each certified a vertex of
    the normalized composite state polytope."""
    if c._pure_products is None:
        out = []
        for combo in itertools.product(*[l.pure_states for l in c.locals]):
            v = kron_all(list(combo))
            out.append(CompositeState(vector=v, normalized=True))
        if certify:
            sc = c.state_cone()
            for s in out:
                if not sc.member(s.vector):
                    raise InvalidState("product state outside state cone")
                if not _is_vertex(c, s.vector):
                    raise InvalidState("product state failed vertex "
                                       "certification")
        c._pure_products = out
    return list(c._pure_products)


def _is_vertex(c, v):
    """v generates an extreme ray of the state cone: its tight effect-cone
    generators have rank dim-1."""
    gens = c.effect_cone.generators
    if c.mode == scalars.EXACT:
        tight = [g for g in gens if g @ v == 0]
    else:
        eps = scalars.float_eps() * 10
        tight = [g for g in gens if abs(float(g @ v)) <= eps]
    if not tight:
        return False
    m = np.array([list(g) for g in tight],
                 dtype=object if c.mode == scalars.EXACT else float)
    return linalg.rank(m, c.mode) == c.ambient_dim - 1


def marginalize(c, state, keep):
    """Reduced state on the 1-based subsystems in `keep`, contracting the
    discarded subsystems with their local unit effects."""
    keep = sorted(set(keep))
    n = c.n_subsystems
    if any(not 1 <= k <= n for k in keep) or not keep:
        raise IndexOutOfRange("keep set must be nonempty within 1..%d" % n)
    v = np.asarray(state.vector if isinstance(state, CompositeState)
                   else state)
    if len(v) != c.ambient_dim:
        raise DimensionMismatch("state has wrong length")
    if not c.state_cone().member(v):
        raise InvalidState("input is not a member of the composite state "
                           "cone")
    tensor = v.reshape(c.dims)
    for slot in reversed(range(n)):
        if slot + 1 not in keep:
            tensor = np.tensordot(tensor, c.locals[slot].unit,
                                  axes=([slot], [0]))
    out = tensor.reshape(-1)
    if len(keep) == 1:
        loc = c.locals[keep[0] - 1]
        if not loc.state_cone.member(out):
            raise InvalidState("marginal failed local state membership")
        return out
    sub = compose([c.locals[k - 1] for k in keep])
    if not sub.state_cone().member(out):
        raise InvalidState("marginal failed reduced-composite membership")
    return CompositeState(vector=out, normalized=True)


def separable_cone(c):
    if c._separable_cone is None:
        c._separable_cone = Cone(
            [s.vector for s in pure_product_states(c, certify=False)],
            c.ambient_dim, c.mode)
    return c._separable_cone


def is_separable(c, state):
    """True iff the normalized state lies in the convex hull of the pure
    product states."""
    v = np.asarray(state.vector if isinstance(state, CompositeState)
                   else state)
    t = c.unit @ v
    if not scalars.is_zero(t - 1, c.mode, scalars.MATCH_TOL):
        raise InvalidState("is_separable expects a normalized state")
    return separable_cone(c).member(v)


def state_polytope_vertices(c):
    """Vertex enumeration of the normalized composite state polytope."""
    if len(c.effect_cone.generators) > 32:
        raise TooLarge("state polytope enumeration capped at 32 effect "
                       "generators")
    out = []
    for r in cones.extreme_rays(c.state_cone()):
        t = c.unit @ r
        out.append(CompositeState(vector=r / t, normalized=True))
    out.sort(key=lambda s: scalars.vector_key(s.vector, c.mode))
    return out


# ---------------------------------------------------------------------------
# behavior tables for cube composites

def _cube_measurement_effects(loc, x):
    """Binary measurement x (1-based axis) of a cube system: outcome 0 is
    the +axis effect, outcome 1 the -axis effect."""
    return loc.ray_extremes[2 * (x - 1)], loc.ray_extremes[2 * (x - 1) + 1]


def behavior_table(c, state):
    """Conditional distribution P(a_1..a_N | x_1..x_N) for a composite of
    cube systems, as an array indexed [x_1]..[x_N][a_1]..[a_N]."""
    for loc in c.locals:
        if loc.kind != "cube":
            raise NotCubeSystem("behavior tables require cube subsystems")
    v = np.asarray(state.vector if isinstance(state, CompositeState)
                   else state)
    ds = [loc.params["d"] for loc in c.locals]
    n = c.n_subsystems
    shape = tuple(ds) + (2,) * n
    table = np.empty(shape, dtype=object if c.mode == scalars.EXACT
                     else float)
    for xs in itertools.product(*[range(d) for d in ds]):
        for outs in itertools.product(range(2), repeat=n):
            effs = [
                _cube_measurement_effects(c.locals[i], xs[i] + 1)[outs[i]]
                for i in range(n)]
            table[xs + outs] = kron_all(effs) @ v
    return table


def is_nonsignaling(c, state, tol=None):
    """Marginal tables are independent of discarded inputs."""
    table = behavior_table(c, state)
    ds = [loc.params["d"] for loc in c.locals]
    n = c.n_subsystems
    tol = scalars.MATCH_TOL if tol is None else tol
    for i in range(n):
        # marginal over a_i must not depend on x_i
        for xs in itertools.product(*[range(d) for d in ds]):
            if xs[i] == 0:
                continue
            base = xs[:i] + (0,) + xs[i + 1:]
            for outs in itertools.product(range(2), repeat=n):
                if outs[i] == 1:
                    continue
                tot_a = sum(table[xs + outs[:i] + (a,) + outs[i + 1:]]
                            for a in range(2))
                tot_b = sum(table[base + outs[:i] + (a,) + outs[i + 1:]]
                            for a in range(2))
                if not scalars.is_zero(tot_a - tot_b, c.mode, tol):
                    return False
    return True


def chsh_value(table):
    """Maximal CHSH combination of a 2x2-input binary behavior table."""
    e = {}
    for x in range(2):
        for y in range(2):
            e[(x, y)] = (table[x, y, 0, 0] + table[x, y, 1, 1]
                         - table[x, y, 0, 1] - table[x, y, 1, 0])
    best = None
    for mx, my in itertools.product(range(2), repeat=2):
        s = sum(e[(x, y)] * (-1 if (x, y) == (mx, my) else 1)
                for x in range(2) for y in range(2))
        s = abs(s)
        if best is None or s > best:
            best = s
    return best


def pr_box_analogue(c):
    """The extremal nonseparable vertex with maximal CHSH value; ties are
    broken by lexicographic coordinate order."""
    best = None
    # vertices arrive in lexicographic coordinate order, so the first hit
    # at the maximal value is the tie-break winner
    for v in state_polytope_vertices(c):
        if is_separable(c, v):
            continue
        s = chsh_value(behavior_table(c, v))
        if best is None or float(s) > float(best[0]) + 1e-12:
            best = (s, v)
    if best is None:
        return None
    return best[1]
