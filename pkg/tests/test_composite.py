"""Max tensor product composites: effects, adjacency, states, behaviors."""

import itertools
from fractions import Fraction

import numpy as np
import pytest

from gptlab import composite, scalars, systems
from gptlab.errors import (IndexOutOfRange, KindMismatch, NotCubeSystem,
                           TooSmall)


def square_pair():
    sq = systems.build_cube(2)
    return composite.compose([sq, sq])


def test_compose_needs_two():
    with pytest.raises(TooSmall):
        composite.compose([systems.build_cube(2)])


def test_composite_ray_extremes_are_certified():
    c = square_pair()
    assert len(c.ray_extremes) == 16
    certified = composite.composite_ray_extremes(c)
    assert len(certified) == 16


def test_gtrit_square_composite_counts():
    c = composite.compose([systems.build_squashed_gtrit(),
                           systems.build_cube(2)])
    assert c.ambient_dim == 12
    assert len(c.ray_extremes) == 20
    assert len(composite.sub_unit_effects(c, 1)) == 4
    assert len(composite.sub_unit_effects(c, 2)) == 5


def test_subunit_index_range():
    c = square_pair()
    with pytest.raises(IndexOutOfRange):
        composite.sub_unit_effects(c, 3)


def test_adjacency_and_hamming():
    c = square_pair()
    e = c.ray_extremes
    assert composite.hamming_distance(e[0], e[0]) == 0
    assert composite.adjacency(e[0], e[1]) == 2
    assert composite.adjacency(e[0], e[5]) is None
    with pytest.raises(KindMismatch):
        composite.adjacency(e[0], composite.sub_unit_effects(c, 1)[0])


def test_refiners_are_adjacent_at_unit_slot():
    c = square_pair()
    for i in (1, 2):
        for sub in composite.sub_unit_effects(c, i):
            refs = composite.refiners_of_subunit(c, sub)
            assert len(refs) >= 2
            for a, b in itertools.combinations(refs, 2):
                assert composite.adjacency(a, b) == i


def test_pure_product_states():
    c = square_pair()
    ps = composite.pure_product_states(c)
    assert len(ps) == 16
    for s in ps:
        assert c.unit @ s.vector == 1
        assert composite.is_separable(c, s)


def test_state_polytope_24_vertices_8_entangled():
    c = square_pair()
    vs = composite.state_polytope_vertices(c)
    assert len(vs) == 24
    ent = [v for v in vs if not composite.is_separable(c, v)]
    assert len(ent) == 8


def test_behavior_tables_nonsignaling_and_chsh():
    c = square_pair()
    for v in composite.state_polytope_vertices(c):
        assert composite.is_nonsignaling(c, v)
        chsh = composite.chsh_value(composite.behavior_table(c, v))
        if composite.is_separable(c, v):
            assert float(chsh) <= 2 + 1e-9
        else:
            assert float(chsh) == 4


def test_behavior_table_requires_cube_locals():
    c = composite.compose([systems.build_squashed_gtrit(),
                           systems.build_squashed_gtrit()])
    v = composite.pure_product_states(c)[0]
    with pytest.raises(NotCubeSystem):
        composite.behavior_table(c, v)


def test_pr_box_marginals_are_maximally_mixed():
    c = square_pair()
    s = composite.pr_box_analogue(c)
    for k in (1, 2):
        marg = composite.marginalize(c, s, [k])
        assert scalars.vec_eq(marg, np.array([Fraction(1), Fraction(0),
                                              Fraction(0)]), c.mode)


def test_marginal_of_product_state_is_its_factor():
    sq = systems.build_cube(2)
    c = composite.compose([sq, sq])
    s1, s2 = sq.pure_states[0], sq.pure_states[2]
    joint = composite.CompositeState(np.kron(s1, s2))
    assert scalars.vec_eq(composite.marginalize(c, joint, [1]), s1, c.mode)
    assert scalars.vec_eq(composite.marginalize(c, joint, [2]), s2, c.mode)


def test_three_subsystem_composite():
    sq = systems.build_cube(2)
    c = composite.compose([sq, sq, sq])
    assert c.ambient_dim == 27
    assert len(c.ray_extremes) == 64
    assert len(composite.sub_unit_effects(c, 2)) == 16
    e = c.ray_extremes
    assert composite.hamming_distance(e[0], e[-1]) == 3
    sub = composite.sub_unit_effects(c, 3)[0]
    refs = composite.refiners_of_subunit(c, sub)
    for a, b in itertools.combinations(refs, 2):
        assert composite.adjacency(a, b) == 3


def test_effect_position_roundtrip():
    c = square_pair()
    for i, pe in enumerate(c.ray_extremes):
        assert c.effect_position(pe.flattened) == i
    assert c.effect_position(c.unit) is None


def test_float_composite_matches_exact_counts():
    p = systems.build_polygon(5)
    c = composite.compose([p, p])
    assert len(c.ray_extremes) == 25
    assert len(composite.pure_product_states(c)) == 25
