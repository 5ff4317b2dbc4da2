"""Local system catalog: validation, dichotomy, reducibility, symmetry."""

import math
from fractions import Fraction
from itertools import permutations

import numpy as np
import pytest

from gptlab import cones, scalars, symmetry, systems
from gptlab.errors import InvalidParameter


def test_catalog_validates():
    for s in [systems.build_classical(3), systems.build_cube(2),
              systems.build_cube(3), systems.build_octoplex(2),
              systems.build_polygon(5), systems.build_polygon(6),
              systems.build_squashed_gtrit()]:
        rep = systems.validate_system(s)
        assert rep.passed, (s.name, rep.failures)


def test_dichotomy_catalog():
    assert not systems.is_dichotomic(systems.build_classical(3))
    assert not systems.is_dichotomic(systems.build_classical(4))
    for d in (2, 3, 4):
        assert systems.is_dichotomic(systems.build_cube(d))
    for d in (2, 3):
        assert systems.is_dichotomic(systems.build_octoplex(d))
    for n in (5, 7):
        assert not systems.is_dichotomic(systems.build_polygon(n))
    for n in (4, 6, 8):
        assert systems.is_dichotomic(systems.build_polygon(n))
    assert not systems.is_dichotomic(systems.build_squashed_gtrit())


def test_classical_bit_is_classical_and_dichotomic():
    b = systems.build_classical(2)
    assert systems.is_classical(b)
    assert systems.is_dichotomic(b)


def test_reduce_classical_trit():
    dec = systems.reduce(systems.build_classical(3))
    assert dec.n_components == 3
    assert sorted(len(ridx) for _, ridx in dec.components) == [1, 1, 1]


def test_reduce_squashed_gtrit():
    g = systems.build_squashed_gtrit()
    dec = systems.reduce(g)
    assert dec.n_components == 2
    sizes = sorted(len(ridx) for _, ridx in dec.components)
    assert sizes == [1, 4]
    # the singleton component is the apex ray X
    (small,) = [ridx for _, ridx in dec.components if len(ridx) == 1]
    assert g.label(small[0]) == "X"


def test_irreducible_catalog():
    for s in [systems.build_cube(2), systems.build_polygon(5),
              systems.build_cube(3)]:
        assert systems.reduce(s).n_components == 1


def test_reduce_matches_brute_force_on_small_systems():
    """Cross-check component count against exhaustive bipartition search."""
    for s in [systems.build_classical(3), systems.build_squashed_gtrit(),
              systems.build_cube(2)]:
        rays = s.ray_extremes
        n = len(rays)
        best = 1
        # count maximal splits: a bipartition works if each side's span
        # meets only its own rays and the spans are complementary
        def span_rank(idx):
            if not idx:
                return 0
            m = np.array([list(rays[i]) for i in idx], dtype=float)
            return np.linalg.matrix_rank(m)
        found_split = False
        for mask in range(1, 2 ** (n - 1)):
            a = [i for i in range(n) if mask >> i & 1]
            b = [i for i in range(n) if not mask >> i & 1]
            if span_rank(a) + span_rank(b) == s.dim:
                found_split = True
                break
        dec = systems.reduce(s)
        assert (dec.n_components > 1) == found_split


def test_ray_span_property():
    """Ray-extreme effects span the ambient space on all catalog systems;
    complete measurements therefore separate states."""
    for s in [systems.build_classical(3), systems.build_cube(3),
              systems.build_octoplex(2), systems.build_polygon(7),
              systems.build_squashed_gtrit()]:
        m = np.array([[float(x) for x in e] for e in s.ray_extremes])
        assert np.linalg.matrix_rank(m) == s.dim


def test_symmetry_group_orders():
    assert len(symmetry.local_symmetry_group(systems.build_cube(2))) == 8
    assert len(symmetry.local_symmetry_group(systems.build_polygon(5))) == 10
    assert len(symmetry.local_symmetry_group(
        systems.build_classical(3))) == 6
    assert len(symmetry.local_symmetry_group(
        systems.build_squashed_gtrit())) == 8


def test_symmetry_group_closure():
    g = symmetry.local_symmetry_group(systems.build_squashed_gtrit())
    keys = {symmetry.matrix_sort_key(m, scalars.EXACT) for m in g}
    for a in g:
        for b in g:
            assert symmetry.matrix_sort_key(a @ b, scalars.EXACT) in keys


def test_square_equivalent_to_octoplex2_not_pentagon():
    sq = systems.build_cube(2)
    assert symmetry.systems_equivalent(sq, systems.build_octoplex(2)) \
        is not None
    # different dimension: trivially inequivalent
    assert symmetry.systems_equivalent(
        sq, systems.build_squashed_gtrit()) is None


def test_polygon_radius():
    assert abs(systems.polygon_radius(5) -
               math.sqrt(1 / math.cos(math.pi / 5))) < 1e-15
    assert abs(systems.polygon_radius(5) - 1.1118) < 5e-4


def test_polygon_rejects_small_n_and_exact_mode():
    with pytest.raises(InvalidParameter):
        systems.build_polygon(2)
    with pytest.raises(InvalidParameter):
        systems.build_polygon(5, mode=scalars.EXACT)


def test_fine_grained_measurements():
    sq = systems.build_cube(2)
    twos = systems.fine_grained_measurements(sq, 2)
    assert len([m for m in twos if len(m.effects) == 2]) == 2
    pent = systems.build_polygon(5)
    assert not [m for m in systems.fine_grained_measurements(pent, 2)
                if len(m.effects) == 2]
    g = systems.build_squashed_gtrit()
    threes = [m for m in systems.fine_grained_measurements(g, 3)
              if len(m.effects) == 3]
    assert len(threes) == 2
    for m in threes:
        total = sum(m.effects)
        assert scalars.vec_eq(total, g.unit, scalars.EXACT)


def test_gtrit_unit_relations():
    g = systems.build_squashed_gtrit()
    by = {g.label(i): e for i, e in enumerate(g.ray_extremes)}
    assert scalars.vec_eq(by["X"] + by["Y0"] + by["Y1"], g.unit,
                          scalars.EXACT)
    assert scalars.vec_eq(by["X"] + by["Z0"] + by["Z1"], g.unit,
                          scalars.EXACT)


def test_pure_state_counts():
    assert len(systems.build_cube(2).pure_states) == 4
    assert len(systems.build_polygon(5).pure_states) == 5
    assert len(systems.build_octoplex(2).pure_states) == 4
    # squashed g-trit: square pyramid, 5 vertices
    assert len(systems.build_squashed_gtrit().pure_states) == 5
