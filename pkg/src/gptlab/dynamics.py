"""Reversible transformations of max tensor product composites.

Transformations are stored via their adjoint matrix acting on effects in
the canonical tensor basis.  The allowed-reversible criterion (adjoint
permutes the composite ray-extreme representatives and fixes the unit)
follows the single-system criterion extended to composites; the forward
map preserving the state cone is re-verified cheaply since both cones
are generated sets.
"""

import itertools
from dataclasses import dataclass, field

import numpy as np

from . import composite, cones, linalg, scalars, symmetry, systems
from .composite import CompositeState, kron_all
from .errors import (CertificateVerificationFailed, ControlNotReducible,
                     DimensionMismatch, NotAllowed, PreconditionUnmet,
                     TargetHasNoSymmetry, TooLarge)

ENUMERATION_EFFECT_CAP = 36


@dataclass
class Transformation:
    adjoint: np.ndarray         # action on effects
    mode: str

    @property
    def forward(self):
        """Action on states: <T' e, s> = <e, T s>."""
        return self.adjoint.T

    def condition_number(self):
        if self.mode == scalars.EXACT:
            return None
        return float(np.linalg.cond(np.asarray(self.adjoint, dtype=float)))

    def compose_with(self, other):
        return Transformation(adjoint=self.adjoint @ other.adjoint,
                              mode=self.mode)

    def inverse(self):
        return Transformation(adjoint=linalg.inverse(self.adjoint, self.mode),
                              mode=self.mode)

    def sort_key(self):
        return symmetry.matrix_sort_key(self.adjoint, self.mode)


@dataclass
class TrivialityCertificate:
    sigma: tuple                # 1-based permutation, sigma[i-1] = image of i
    maps: list                  # per-subsystem map P_{i, sigma(i)}
    residual_ok: bool = True


@dataclass
class SearchConfig:
    node_cap: int = symmetry.DEFAULT_NODE_CAP
    workers: int = 1
    symmetry_pruning: bool = True

    def __post_init__(self):
        if self.node_cap <= 0:
            from .errors import InvalidParameter
            raise InvalidParameter("node cap must be positive")


@dataclass
class AuditReport:
    permutes_pure_products: bool
    product_permutation: list = None
    violating_state: np.ndarray = None
    separable_to_entangled_witness: np.ndarray = None
    correlation_witness: tuple = None   # (input state, image state)


@dataclass
class TheoremReport:
    enumerated_count: int
    trivial_group_order: int
    all_certified: bool
    passed: bool
    uncertified: list = field(default_factory=list)


# ---------------------------------------------------------------------------
# basic verifiers

def effect_permutation(c, t):
    """Permutation induced by the adjoint on the canonical composite
    ray-extreme list, or None if it is not a bijection of that set."""
    a = np.asarray(t.adjoint)
    imgs = []
    for pe in c.ray_extremes:
        pos = c.effect_position(a @ pe.flattened)
        if pos is None:
            return None
        imgs.append(pos)
    if len(set(imgs)) != len(imgs):
        return None
    return imgs


def is_allowed_reversible(c, t):
    """Adjoint permutes the composite ray-extreme set and fixes the unit."""
    a = np.asarray(t.adjoint)
    if a.shape != (c.ambient_dim, c.ambient_dim):
        raise DimensionMismatch("adjoint has shape %s, expected %d x %d"
                                % (a.shape, c.ambient_dim, c.ambient_dim))
    if not linalg.is_invertible(a, c.mode):
        return False
    if not scalars.vec_eq(a @ c.unit, c.unit, c.mode, scalars.MATCH_TOL):
        return False
    perm = effect_permutation(c, t)
    if perm is None:
        return False
    # re-verification of the forward direction: the adjoint maps the
    # effect-cone generator set onto itself, so the forward map permutes
    # the dual cone's generating rays as well; cheap spot check
    if c._state_cone is not None:
        fwd = np.asarray(t.forward)
        sc = c.state_cone()
        if not all(sc.member(fwd @ g) for g in sc.generators):
            raise CertificateVerificationFailed(
                "forward map left the state cone despite effect permutation")
    return True


def _require_allowed(c, t):
    if not is_allowed_reversible(c, t):
        raise NotAllowed("transformation is not allowed-reversible")


def is_adjacency_preserving(c, t):
    """Every adjacent pair of composite ray-extremes maps to an adjacent
    pair (exhaustive over pairs)."""
    _require_allowed(c, t)
    perm = effect_permutation(c, t)
    effs = c.ray_extremes
    for i, j in itertools.combinations(range(len(effs)), 2):
        if composite.hamming_distance(effs[i], effs[j]) == 1:
            if composite.hamming_distance(effs[perm[i]], effs[perm[j]]) != 1:
                return False
    return True


# ---------------------------------------------------------------------------
# triviality certificates (constructive)

def _local_effect_basis(loc):
    """Indices of local ray-extremes forming a basis, first ray first."""
    order = list(range(len(loc.ray_extremes)))
    idx = linalg.independent_rows([loc.ray_extremes[i] for i in order],
                                  loc.mode, need=loc.dim)
    if len(idx) != loc.dim:
        raise CertificateVerificationFailed(
            "local ray-extremes do not span the local space")
    return [order[i] for i in idx]


def _trivial_adjoint_matrix(c, sigma0, local_maps):
    """Adjoint of the trivial transformation that routes subsystem i to
    slot sigma0[i] (0-based) through local_maps[i]."""
    dims = c.dims
    n = c.n_subsystems
    inv = [0] * n
    for i, s in enumerate(sigma0):
        inv[s] = i
    cols = []
    for col_tuple in itertools.product(*[range(d) for d in dims]):
        slot_vecs = []
        for j in range(n):
            src = inv[j]
            slot_vecs.append(np.asarray(local_maps[src])[:, col_tuple[src]])
        cols.append(kron_all(slot_vecs))
    m = np.array([list(v) for v in cols],
                 dtype=object if c.mode == scalars.EXACT else float).T
    return m


def triviality_certificate(c, t):
    """Decompose an adjacency-preserving transformation into a subsystem
    permutation plus per-subsystem equivalence maps; None when the
    transformation is not adjacency-preserving."""
    _require_allowed(c, t)
    if not is_adjacency_preserving(c, t):
        return None
    perm = effect_permutation(c, t)
    effs = c.ray_extremes
    n = c.n_subsystems
    anchor = effs[0]                  # index tuple (0, .., 0)
    f = effs[perm[0]]

    sigma0 = [None] * n               # 0-based slot routing
    local_maps = [None] * n
    for i in range(n):
        loc = c.locals[i]
        basis = _local_effect_basis(loc)
        if basis[0] != 0:
            # rotate so the anchor's component heads the basis
            basis = [0] + [b for b in basis if b != 0]
            m = np.array([list(loc.ray_extremes[b]) for b in basis],
                         dtype=object if c.mode == scalars.EXACT else float)
            if linalg.rank(m, c.mode) != loc.dim:
                raise CertificateVerificationFailed(
                    "anchor component not extendable to a ray basis")
        targets = set()
        img_components = []
        for j in basis[1:]:
            probe = list(anchor.indices)
            probe[i] = j
            img = effs[perm[c._index[tuple(probe)]]]
            slot = composite.adjacency(f, img)
            if slot is None:
                raise CertificateVerificationFailed(
                    "adjacency image badly structured")
            targets.add(slot - 1)
            img_components.append(img.components[slot - 1])
        if len(targets) != 1:
            raise CertificateVerificationFailed(
                "adjacency set images landed on several subsystems")
        s = targets.pop()
        if c.locals[s].dim != loc.dim:
            raise CertificateVerificationFailed(
                "matched subsystems have different dimensions")
        sigma0[i] = s
        src = np.array([list(loc.ray_extremes[b]) for b in basis],
                       dtype=object if c.mode == scalars.EXACT else float).T
        dst = np.array([list(f.components[s])] +
                       [list(v) for v in img_components],
                       dtype=object if c.mode == scalars.EXACT else float).T
        local_maps[i] = dst @ linalg.inverse(src, c.mode)

    if sorted(sigma0) != list(range(n)):
        raise CertificateVerificationFailed("slot routing is not a "
                                            "permutation")
    rebuilt = _trivial_adjoint_matrix(c, sigma0, local_maps)
    if not scalars.mat_eq(rebuilt, t.adjoint, c.mode, scalars.MATCH_TOL):
        raise CertificateVerificationFailed(
            "recomposed trivial map does not reproduce the adjoint")
    return TrivialityCertificate(
        sigma=tuple(s + 1 for s in sigma0),
        maps=local_maps, residual_ok=True)


def subunit_criterion(c, t):
    """True iff the image of every sub-unit effect refines a sub-unit
    effect (the if-and-only-if triviality criterion)."""
    _require_allowed(c, t)
    a = np.asarray(t.adjoint)
    subunits = [e for i in range(1, c.n_subsystems + 1)
                for e in composite.sub_unit_effects(c, i)]
    for e in subunits:
        img = a @ e.flattened
        if not any(cones.cone_leq(img, fsub.flattened, c.effect_cone)
                   for fsub in subunits):
            return False
    return True


def two_term_decompositions(c, v):
    """All unordered pairs of composite ray-extremes summing to v; a
    doubled effect yields the degenerate pair (e, e)."""
    v = np.asarray(v)
    out = []
    effs = c.ray_extremes
    for i in range(len(effs)):
        for j in range(i, len(effs)):
            if scalars.vec_eq(effs[i].flattened + effs[j].flattened, v,
                              c.mode, scalars.MATCH_TOL):
                out.append((effs[i], effs[j]))
    return out


# ---------------------------------------------------------------------------
# enumeration

def enumerate_reversibles(c, cfg=None):
    """All allowed reversible transformations, by backtracking over
    Gram-preserving permutations of the composite ray-extreme set."""
    cfg = cfg or SearchConfig()
    if len(c.ray_extremes) > ENUMERATION_EFFECT_CAP:
        raise TooLarge("enumeration capped at %d composite effects"
                       % ENUMERATION_EFFECT_CAP)
    vectors = [pe.flattened for pe in c.ray_extremes]
    res = symmetry.automorphism_search(vectors, [c.unit], c.mode,
                                       node_cap=cfg.node_cap)
    ts = [Transformation(adjoint=m, mode=c.mode) for _, m in res]
    ts.sort(key=lambda t: t.sort_key())
    return ts


def local_equivalence_classes(c):
    """Partition of 1..N into classes of pairwise equivalent subsystems."""
    n = c.n_subsystems
    classes = []
    for i in range(n):
        placed = False
        for cl in classes:
            if symmetry.systems_equivalent(c.locals[cl[0] - 1],
                                           c.locals[i]) is not None:
                cl.append(i + 1)
                placed = True
                break
        if not placed:
            classes.append([i + 1])
    return classes


def trivial_group_order(c):
    """Order of the trivial group: product of local symmetry orders times
    the permutations within subsystem-equivalence classes."""
    order = 1
    for loc in c.locals:
        order *= len(symmetry.local_symmetry_group(loc))
    import math
    for cl in local_equivalence_classes(c):
        order *= math.factorial(len(cl))
    return order


def verify_theorem1(c, cfg=None):
    """Enumerate all reversibles of a composite of non-classical dichotomic
    systems and check that each is certified trivial and the count equals
    the trivial-group order."""
    for loc in c.locals:
        if systems.is_classical(loc):
            raise PreconditionUnmet("subsystem %s is classical" % loc.name)
        if not systems.is_dichotomic(loc):
            raise PreconditionUnmet("subsystem %s is not dichotomic"
                                    % loc.name)
    ts = enumerate_reversibles(c, cfg)
    uncertified = []
    for i, t in enumerate(ts):
        if triviality_certificate(c, t) is None:
            uncertified.append(i)
    expected = trivial_group_order(c)
    report = TheoremReport(enumerated_count=len(ts),
                           trivial_group_order=expected,
                           all_certified=not uncertified,
                           passed=(not uncertified and len(ts) == expected),
                           uncertified=uncertified)
    return report


# ---------------------------------------------------------------------------
# the conditional-CNOT construction

def is_local_symmetry(loc, m):
    """m permutes loc's ray-extreme representatives and fixes its unit."""
    m = np.asarray(m)
    if not scalars.vec_eq(m @ loc.unit, loc.unit, loc.mode,
                          scalars.MATCH_TOL):
        return False
    keys = {scalars.vector_key(e, loc.mode) for e in loc.ray_extremes}
    imgs = set()
    for e in loc.ray_extremes:
        k = scalars.vector_key(m @ e, loc.mode)
        if k not in keys:
            return False
        imgs.add(k)
    return len(imgs) == len(keys)


def build_conditional_cnot(c, control, target, t_local):
    """Linear extension acting as t_local on the target subsystem exactly
    when the control component lies in the first reducibility block."""
    n = c.n_subsystems
    if control == target or not (1 <= control <= n and 1 <= target <= n):
        raise DimensionMismatch("control/target indices invalid")
    ctrl = c.locals[control - 1]
    tgt = c.locals[target - 1]
    dec = systems.reduce(ctrl)
    if dec.n_components < 2:
        raise ControlNotReducible("control subsystem %s is irreducible"
                                  % ctrl.name)
    t_local = np.asarray(t_local)
    if not is_local_symmetry(tgt, t_local):
        raise TargetHasNoSymmetry("t_local is not a local symmetry of %s"
                                  % tgt.name)
    if scalars.mat_eq(t_local, scalars.identity_matrix(tgt.dim, c.mode),
                      c.mode, scalars.MATCH_TOL):
        raise TargetHasNoSymmetry("t_local is the identity")

    # projector onto the first block along the rest
    first = dec.components[0][0]
    rest = [v for basis, _ in dec.components[1:] for v in basis]
    cols = np.array([list(v) for v in first + rest],
                    dtype=object if c.mode == scalars.EXACT else float).T
    d1 = len(first)
    sel = scalars.identity_matrix(ctrl.dim, c.mode)
    for i in range(d1, ctrl.dim):
        sel[i, i] = 0 * sel[i, i]
    proj = cols @ sel @ linalg.inverse(cols, c.mode)

    eye = [scalars.identity_matrix(loc.dim, c.mode) for loc in c.locals]
    from functools import reduce as _red

    def kron_mats(ms):
        return _red(np.kron, ms)

    term1 = [eye[i] for i in range(n)]
    term1[control - 1] = proj
    term1[target - 1] = t_local
    term2 = [eye[i] for i in range(n)]
    term2[control - 1] = eye[control - 1] - proj
    adj = kron_mats(term1) + kron_mats(term2)
    t = Transformation(adjoint=adj, mode=c.mode)

    if not is_allowed_reversible(c, t):
        raise CertificateVerificationFailed(
            "conditional construction failed the allowed criterion")
    if is_adjacency_preserving(c, t):
        raise CertificateVerificationFailed(
            "conditional construction is unexpectedly trivial")
    return t


def gtrit_flip_symmetry(loc):
    """The Y0<->Y1, Z0<->Z1 swap fixing X on a squashed g-trit."""
    perm = {"X": "X", "Y0": "Y1", "Y1": "Y0", "Z0": "Z1", "Z1": "Z0"}
    return symmetry_from_ray_permutation(loc, perm)


def symmetry_from_ray_permutation(loc, label_perm):
    """Linear extension of a labeled ray permutation; verified a local
    symmetry."""
    labels = [loc.label(i) for i in range(len(loc.ray_extremes))]
    pos = {lab: i for i, lab in enumerate(labels)}
    basis_idx = linalg.independent_rows(loc.ray_extremes, loc.mode,
                                        need=loc.dim)
    src = np.array([list(loc.ray_extremes[i]) for i in basis_idx],
                   dtype=object if loc.mode == scalars.EXACT else float).T
    dst = np.array([list(loc.ray_extremes[pos[label_perm[labels[i]]]])
                    for i in basis_idx],
                   dtype=object if loc.mode == scalars.EXACT else float).T
    m = dst @ linalg.inverse(src, loc.mode)
    if not is_local_symmetry(loc, m):
        raise TargetHasNoSymmetry("ray permutation does not extend to a "
                                  "symmetry")
    return m


# ---------------------------------------------------------------------------
# entanglement audit

def _match_state(states, v, mode):
    key = scalars.vector_key(v, mode)
    for i, s in enumerate(states):
        if scalars.vector_key(s.vector, mode) == key:
            return i
    return None


def entanglement_audit(c, t):
    """Check that the forward map permutes the pure product states, that
    no separable state-polytope vertex maps to an entangled one, and look
    for a product state mapped to a correlated (still separable) state."""
    _require_allowed(c, t)
    fwd = np.asarray(t.forward)
    products = composite.pure_product_states(c)
    perm = []
    violating = None
    for s in products:
        img = fwd @ s.vector
        pos = _match_state(products, img, c.mode)
        if pos is None:
            violating = s.vector
            break
        perm.append(pos)
    permutes = violating is None and len(set(perm)) == len(perm)

    sep_witness = None
    if len(c.effect_cone.generators) <= 32:
        for v in composite.state_polytope_vertices(c):
            if composite.is_separable(c, v):
                if not composite.is_separable(
                        c, CompositeState(fwd @ v.vector)):
                    sep_witness = v.vector
                    break

    corr_witness = None
    if permutes:
        half = scalars.as_vector([1], c.mode)[0] / 2
        local_pures = [loc.pure_states for loc in c.locals]
        n = c.n_subsystems
        for slot in range(n):
            if corr_witness is not None:
                break
            for a, b in itertools.combinations(
                    range(len(local_pures[slot])), 2):
                mixed = (local_pures[slot][a] +
                         local_pures[slot][b]) * half
                choices = [range(len(local_pures[k])) if k != slot
                           else [None] for k in range(n)]
                hit = None
                for combo in itertools.product(*choices):
                    factors = [mixed if j is None else local_pures[k][j]
                               for k, j in enumerate(combo)]
                    mix = kron_all(factors)
                    img = fwd @ mix
                    if composite.is_separable(c, CompositeState(img)) and \
                            not _is_product_state(c, img):
                        hit = (mix, img)
                        break
                if hit is not None:
                    corr_witness = hit
                    break

    return AuditReport(permutes_pure_products=permutes,
                       product_permutation=perm if permutes else None,
                       violating_state=violating,
                       separable_to_entangled_witness=sep_witness,
                       correlation_witness=corr_witness)


def _is_product_state(c, v):
    """v equals the tensor product of its own marginals."""
    margs = [composite.marginalize(c, CompositeState(v), [k])
             for k in range(1, c.n_subsystems + 1)]
    return scalars.vec_eq(kron_all(margs), v, c.mode, scalars.MATCH_TOL)
