"""Orthogonal-frame analysis of regular polygon systems.

Odd regular polygons admit a diagonal change of frame Lambda after which
the ray-extreme effects become vectors of equal length 3 whose summed
outer product is a multiple of the identity.  In that frame every
allowed reversible transformation of a polygon composite is orthogonal,
and for n > 3 the extreme inner-product values single out the
neighboring and opposite index relations, which drives a mechanical
proof that all such transformations are trivial.
"""

import itertools
import math
from dataclasses import dataclass, field

import numpy as np

from . import composite, dynamics, linalg, scalars
from .errors import (ArgumentStepFailed, IndexOutOfRange, InvalidParameter,
                     NotAllowed, NotNeighboring)

FRAME_TOL = 1e-12
COMPOSITE_FRAME_TOL = 1e-10
ORTHO_TOL = 1e-8


@dataclass
class PolygonFrame:
    n: int
    r_n: float
    effects_rep1: list
    effects_tilde: list
    lam: np.ndarray
    states: list
    states_tilde: list


@dataclass
class InnerProductClasses:
    self_value: float
    c_max: float
    c_min: float
    neighbor_offsets: tuple
    opposite_offsets: tuple


@dataclass
class TrivialityArgumentReport:
    n: int
    n_subsystems: int
    steps: list = field(default_factory=list)   # (name, passed, detail)
    certificate: object = None

    @property
    def passed(self):
        return all(ok for _, ok, _ in self.steps)


def polygon_frame(n):
    """Analytic polygon data for any n >= 3; the rep1 parametrization is
    meaningful for odd n, even n is supported for the frame identities
    only."""
    if n < 3:
        raise InvalidParameter("polygon frame needs n >= 3")
    r = math.sqrt(1.0 / math.cos(math.pi / n))
    ang = [2 * math.pi * i / n for i in range(1, n + 1)]
    effects = [np.array([1.0, r * math.sin(a), r * math.cos(a)])
               / (1 + r * r) for a in ang]
    lam = (1 + r * r) * np.diag([1.0, math.sqrt(2) / r, math.sqrt(2) / r])
    tilde = [lam @ e for e in effects]
    states = [np.array([1.0, r * math.sin(a), r * math.cos(a)]) for a in ang]
    states_t = [np.linalg.solve(lam, s) for s in states]
    for i, t in enumerate(tilde):
        a = ang[i]
        ref = np.array([1.0, math.sqrt(2) * math.sin(a),
                        math.sqrt(2) * math.cos(a)])
        assert np.max(np.abs(t - ref)) < FRAME_TOL
    for i in range(n):
        for j in range(n):
            assert abs(tilde[i] @ states_t[j] -
                       effects[i] @ states[j]) < FRAME_TOL
    return PolygonFrame(n=n, r_n=r, effects_rep1=effects,
                        effects_tilde=tilde, lam=lam, states=states,
                        states_tilde=states_t)


def frame_identity_check(frames):
    """Sum of tilde outer products equals n * Identity (a single frame) or
    the product of the n(k) times the identity (a list of frames, via the
    tensor products of the tilde effects)."""
    if isinstance(frames, PolygonFrame):
        f = frames
        s = sum(np.outer(t, t) for t in f.effects_tilde)
        return float(np.max(np.abs(s - f.n * np.eye(3)))) < FRAME_TOL
    target = 1.0
    for f in frames:
        target *= f.n
    dim = 3 ** len(frames)
    s = np.zeros((dim, dim))
    for combo in itertools.product(*[f.effects_tilde for f in frames]):
        v = composite.kron_all(list(combo))
        s += np.outer(v, v)
    return float(np.max(np.abs(s - target * np.eye(dim)))) < \
        COMPOSITE_FRAME_TOL


def frame_identity_deviation(frames):
    if isinstance(frames, PolygonFrame):
        f = frames
        s = sum(np.outer(t, t) for t in f.effects_tilde)
        return float(np.max(np.abs(s - f.n * np.eye(3))))
    target = 1.0
    for f in frames:
        target *= f.n
    dim = 3 ** len(frames)
    s = np.zeros((dim, dim))
    for combo in itertools.product(*[f.effects_tilde for f in frames]):
        v = composite.kron_all(list(combo))
        s += np.outer(v, v)
    return float(np.max(np.abs(s - target * np.eye(dim))))


def inner_product_classes(n):
    if n < 3 or n % 2 == 0:
        raise InvalidParameter("inner product classes defined for odd "
                               "n >= 3")
    return InnerProductClasses(
        self_value=3.0,
        c_max=1 + 2 * math.cos(2 * math.pi / n),
        c_min=1 - 2 * math.cos(math.pi / n),
        neighbor_offsets=(1, n - 1),
        opposite_offsets=((n - 1) // 2, (n + 1) // 2))


def relation(frame, i, j):
    """Classify the pair (i, j) of 1-based effect indices by their offset
    mod n; verified against the tilde inner product."""
    n = frame.n
    if not (1 <= i <= n and 1 <= j <= n):
        raise IndexOutOfRange("indices must lie in 1..%d" % n)
    cls = inner_product_classes(n)
    off = (j - i) % n
    ip = frame.effects_tilde[i - 1] @ frame.effects_tilde[j - 1]
    if off == 0:
        name, expect = "identical", cls.self_value
    elif off in cls.neighbor_offsets:
        name, expect = "neighboring", cls.c_max
    elif off in cls.opposite_offsets:
        name, expect = "opposite", cls.c_min
    else:
        return "other"
    assert abs(ip - expect) < FRAME_TOL * n
    return name


def opposite_pair_witness(frame, i, j):
    """The unique index opposite to both members of a neighboring pair,
    found by scan rather than half-integer index arithmetic."""
    if relation(frame, i, j) != "neighboring":
        raise NotNeighboring("(%d, %d) is not a neighboring pair" % (i, j))
    hits = [s for s in range(1, frame.n + 1)
            if relation(frame, s, i) == "opposite"
            and relation(frame, s, j) == "opposite"]
    if len(hits) != 1:
        raise NotNeighboring("opposite witness not unique for (%d, %d)"
                             % (i, j))
    return hits[0]


def _composite_lambda(frames):
    lam = frames[0].lam
    for f in frames[1:]:
        lam = np.kron(lam, f.lam)
    return lam


def tilde_conjugate(frames, t):
    """Adjoint matrix rewritten in the tilde frame."""
    lam = _composite_lambda(frames)
    a = np.asarray(t.adjoint, dtype=float)
    return lam @ a @ np.linalg.inv(lam)


def orthogonality_check(frames, c, t, tol=ORTHO_TOL):
    """Allowed reversible transformations are orthogonal in the tilde
    frame; also checked via preservation of the summed outer product."""
    if not dynamics.is_allowed_reversible(c, t):
        raise NotAllowed("transformation is not allowed-reversible")
    tt = tilde_conjugate(frames, t)
    dim = tt.shape[0]
    if float(np.max(np.abs(tt.T @ tt - np.eye(dim)))) >= tol:
        return False
    q = np.zeros((dim, dim))
    for combo in itertools.product(*[f.effects_tilde for f in frames]):
        v = composite.kron_all(list(combo))
        q += np.outer(v, v)
    return float(np.max(np.abs(tt.T @ q @ tt - q))) < tol * np.max(np.abs(q))


# ---------------------------------------------------------------------------
# the odd-polygon triviality argument, step by step

def _tilde_composites(frames):
    out = []
    for combo in itertools.product(*[range(f.n) for f in frames]):
        v = composite.kron_all([frames[k].effects_tilde[i]
                                for k, i in enumerate(combo)])
        out.append((combo, v))
    return out


def _extremal_uniqueness(frames):
    """The extreme inner products 3^(N-1) c_max and 3^(N-1) c_min over
    non-identical composite pairs are achieved exactly by the pairs
    adjacent at one slot with neighboring (resp. opposite) offset there.
    Returns (ok, detail)."""
    n = frames[0].n
    nsub = len(frames)
    cls = inner_product_classes(n)
    hi = 3.0 ** (nsub - 1) * cls.c_max
    lo = 3.0 ** (nsub - 1) * cls.c_min
    effs = _tilde_composites(frames)
    bad = []
    seen_hi = seen_lo = 0
    for (ia, va), (ib, vb) in itertools.combinations(effs, 2):
        ip = va @ vb
        diff = [k for k in range(nsub) if ia[k] != ib[k]]
        adj_off = ((ib[diff[0]] - ia[diff[0]]) % n) if len(diff) == 1 \
            else None
        if ip > hi - 1e-9:
            seen_hi += 1
            if adj_off not in cls.neighbor_offsets:
                bad.append(("max", ia, ib, ip))
        if ip < lo + 1e-9:
            seen_lo += 1
            if adj_off not in cls.opposite_offsets:
                bad.append(("min", ia, ib, ip))
    ok = not bad and seen_hi > 0 and seen_lo > 0 and hi > lo + 1e-9
    detail = ("%d max / %d min achievers, %d misclassified"
              % (seen_hi, seen_lo, len(bad)))
    return ok, detail


def _triple_image_structure(frames, c, t):
    """For every neighboring-adjacent pair and its opposite witness, the
    three images are pairwise in the same relations and adjacent at one
    common slot."""
    n = frames[0].n
    perm = dynamics.effect_permutation(c, t)
    effs = c.ray_extremes
    tilde = {pe.indices: v for (idx, v) in _tilde_composites(frames)
             for pe in [effs[c._index[idx]]]}

    def rel(a, b):
        slot = composite.adjacency(a, b)
        if slot is None:
            return None
        off = (b.indices[slot - 1] - a.indices[slot - 1]) % n
        cls = inner_product_classes(n)
        if off in cls.neighbor_offsets:
            return (slot, "neighboring")
        if off in cls.opposite_offsets:
            return (slot, "opposite")
        return (slot, "other")

    checked = 0
    for a, b in itertools.combinations(effs, 2):
        ra = rel(a, b)
        if ra is None or ra[1] != "neighboring":
            continue
        slot = ra[0]
        i, j = a.indices[slot - 1] + 1, b.indices[slot - 1] + 1
        s = opposite_pair_witness(frames[slot - 1], i, j)
        widx = list(a.indices)
        widx[slot - 1] = s - 1
        w = effs[c._index[tuple(widx)]]
        fa = effs[perm[c._index[a.indices]]]
        fb = effs[perm[c._index[b.indices]]]
        fw = effs[perm[c._index[w.indices]]]
        rab = rel(fa, fb)
        raw = rel(fa, fw)
        rbw = rel(fb, fw)
        if rab is None or rab[1] != "neighboring":
            return False, "image of a neighboring-adjacent pair lost its " \
                "relation"
        if raw is None or raw[1] != "opposite" or raw[0] != rab[0]:
            return False, "opposite witness image broke slot agreement"
        if rbw is None or rbw[1] != "opposite" or rbw[0] != rab[0]:
            return False, "opposite witness image broke slot agreement"
        checked += 1
    return checked > 0, "%d neighboring triples traced" % checked


def _adjacency_fiber_span(frames, c):
    """Every composite effect adjacent to the anchor at slot k lies in
    the span of the anchor, its neighboring partners, and its opposite
    partners at that slot."""
    anchor = c.ray_extremes[0]
    n = frames[0].n
    for k in range(c.n_subsystems):
        cls = inner_product_classes(n)
        special = [anchor.flattened]
        fiber = []
        for pe in c.ray_extremes:
            slot = composite.adjacency(anchor, pe)
            if slot != k + 1:
                continue
            off = (pe.indices[k] - anchor.indices[k]) % n
            fiber.append(pe.flattened)
            if off in cls.neighbor_offsets or off in cls.opposite_offsets:
                special.append(pe.flattened)
        m = np.array([list(v) for v in special], dtype=float)
        rank0 = linalg.rank(m, scalars.FLOAT)
        for v in fiber:
            m2 = np.vstack([m, np.asarray(v, dtype=float)])
            if linalg.rank(m2, scalars.FLOAT) != rank0:
                return False, "fiber escapes the span at slot %d" % (k + 1)
    return True, "%d slots checked" % c.n_subsystems


def odd_polygon_triviality_check(frames, c, t):
    """Run the staged argument that an allowed reversible transformation
    of a composite of identical odd polygons is trivial.  Raises
    ArgumentStepFailed naming the first failed step (for n = 3 this is
    the extremal uniqueness step)."""
    n = frames[0].n
    if n % 2 == 0 or any(f.n != n for f in frames):
        raise InvalidParameter("argument requires identical odd polygons")
    if not dynamics.is_allowed_reversible(c, t):
        raise NotAllowed("transformation is not allowed-reversible")
    report = TrivialityArgumentReport(n=n, n_subsystems=len(frames))

    def step(name, fn):
        ok, detail = fn()
        report.steps.append((name, ok, detail))
        if not ok:
            raise ArgumentStepFailed(name, report)

    step("extremal_class_uniqueness", lambda: _extremal_uniqueness(frames))
    step("orthogonality",
         lambda: (orthogonality_check(frames, c, t),
                  "tilde-frame T'T vs identity"))
    step("triple_image_structure",
         lambda: _triple_image_structure(frames, c, t))
    step("adjacency_fiber_span", lambda: _adjacency_fiber_span(frames, c))
    step("adjacency_preserving",
         lambda: (dynamics.is_adjacency_preserving(c, t),
                  "exhaustive pair check"))
    cert = dynamics.triviality_certificate(c, t)
    report.steps.append(("certificate", cert is not None,
                         "constructive decomposition"))
    if cert is None:
        raise ArgumentStepFailed("certificate", report)
    report.certificate = cert
    return report
