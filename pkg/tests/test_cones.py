"""Cone arithmetic: duality, extreme rays, membership."""

from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from gptlab import cones, scalars
from gptlab.errors import NotGenerating, NotPointed


def exact_cone(gens, dim):
    return cones.Cone([[Fraction(x) for x in g] for g in gens], dim,
                      scalars.EXACT)


def keyset(vectors, mode):
    return {scalars.vector_key(v, mode) for v in vectors}


def test_orthant_self_dual():
    c = exact_cone([[1, 0, 0], [0, 1, 0], [0, 0, 1]], 3)
    d = cones.dual_cone(c)
    assert keyset(cones.extreme_rays(d), scalars.EXACT) == \
        keyset(c.generators, scalars.EXACT)


def test_square_effect_cone_duality():
    # dual of cone over the four +-1 square states
    c = exact_cone([[1, 1, 1], [1, 1, -1], [1, -1, 1], [1, -1, -1]], 3)
    d = cones.dual_cone(c)
    expect = [[1, 1, 1], [1, 1, -1], [1, -1, 1], [1, -1, -1]]
    # dual rays of the square state cone are again of that shape up to
    # scale; check double duality instead of a fixed listing
    dd = cones.dual_cone(d)
    assert keyset(cones.extreme_rays(dd), scalars.EXACT) == \
        keyset(c.generators, scalars.EXACT)
    assert len(cones.extreme_rays(d)) == 4


def test_membership_boundary_and_interior():
    c = exact_cone([[1, 1], [1, -1]], 2)
    assert c.member([1, 0])
    assert c.member([1, 1])
    assert c.member([2, -2])
    assert not c.member([0, 1])
    assert not c.member([-1, 0])


def test_cone_leq():
    c = exact_cone([[1, 1], [1, -1]], 2)
    assert cones.cone_leq([1, 0], [2, 0], c)
    assert not cones.cone_leq([2, 0], [1, 0], c)


def test_extreme_rays_drop_redundant_generator():
    c = exact_cone([[1, 1], [1, -1], [1, 0]], 2)
    ext = cones.extreme_rays(c)
    assert keyset(ext, scalars.EXACT) == \
        keyset([np.array([Fraction(1), Fraction(1)]),
                np.array([Fraction(1), Fraction(-1)])], scalars.EXACT)


def test_dual_of_non_generating_raises():
    c = exact_cone([[1, 0, 0], [0, 1, 0]], 3)
    with pytest.raises(NotGenerating):
        cones.dual_cone(c)


def test_dual_of_non_pointed_raises():
    c = exact_cone([[1, 0], [-1, 0], [0, 1], [0, -1]], 2)
    with pytest.raises(NotPointed):
        cones.dual_cone(c)


def test_halfspace_intersection_cube():
    # {x : x_0 >= |x_1|, x_0 >= |x_2|} has the four (1, +-1, +-1) rays
    cons = [[1, 1, 0], [1, -1, 0], [1, 0, 1], [1, 0, -1]]
    rays, lin = cones.halfspace_extreme_rays(
        [np.array([Fraction(x) for x in a]) for a in cons], scalars.EXACT)
    assert not lin
    expect = [[1, s, t] for s in (1, -1) for t in (1, -1)]
    assert keyset(rays, scalars.EXACT) == \
        keyset([np.array([Fraction(x) for x in e]) for e in expect],
               scalars.EXACT)


def test_float_and_exact_agree_on_octahedron():
    gens = [[1, 1, 0, 0], [1, -1, 0, 0], [1, 0, 1, 0], [1, 0, -1, 0],
            [1, 0, 0, 1], [1, 0, 0, -1]]
    ce = exact_cone(gens, 4)
    cf = cones.Cone([[float(x) for x in g] for g in gens], 4, scalars.FLOAT)
    de = cones.dual_cone(ce)
    df = cones.dual_cone(cf)
    ee = sorted(tuple(float(x) for x in r) for r in cones.extreme_rays(de))
    # float rays are unit-normalized; rescale so first coordinate is 1
    ef = sorted(tuple(x / r[0] for x in r) for r in cones.extreme_rays(df))
    assert len(ee) == len(ef) == 8
    for a, b in zip(ee, ef):
        scale = a[0] / b[0]
        assert max(abs(x * scale - y) for x, y in zip(b, a)) < 1e-9


@settings(max_examples=40, deadline=None)
@given(st.lists(st.tuples(st.integers(-3, 3), st.integers(-3, 3)),
                min_size=3, max_size=6))
def test_double_dual_is_identity_on_pointed_generating_cones(pts):
    gens = [[1, a, b] for a, b in pts] + [[1, 4, 0], [1, -4, 0],
                                          [1, 0, 4], [1, 0, -4]]
    c = exact_cone(gens, 3)
    d = cones.dual_cone(c)
    dd = cones.dual_cone(d)
    assert keyset(cones.extreme_rays(dd), scalars.EXACT) == \
        keyset(cones.extreme_rays(c), scalars.EXACT)


@settings(max_examples=40, deadline=None)
@given(st.lists(st.tuples(st.integers(-3, 3), st.integers(-3, 3)),
                min_size=1, max_size=5),
       st.tuples(st.integers(-3, 3), st.integers(-3, 3)))
def test_membership_of_positive_combinations(pts, probe):
    # pad so the cone is always full-dimensional and pointed
    pts = pts + [(4, 0), (-4, 0), (0, 4), (0, -4)]
    gens = [[1, a, b] for a, b in pts]
    c = exact_cone(gens, 3)
    combo = sum((np.array([Fraction(x) for x in g]) for g in gens),
                np.array([Fraction(0)] * 3))
    assert c.member(combo)
    v = np.array([Fraction(0), Fraction(probe[0]), Fraction(probe[1])])
    if any(probe):
        # nothing with zero first coordinate except 0 is in these cones
        assert not c.member(v)
