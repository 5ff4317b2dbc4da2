"""Reversible dynamics: enumeration, certificates, the conditional CNOT."""

import numpy as np
import pytest

from gptlab import composite, dynamics, scalars, symmetry, systems
from gptlab.errors import (ControlNotReducible, NotAllowed,
                           TargetHasNoSymmetry)


@pytest.fixture(scope="module")
def square_pair():
    sq = systems.build_cube(2)
    return composite.compose([sq, sq])


@pytest.fixture(scope="module")
def square_reversibles(square_pair):
    return dynamics.enumerate_reversibles(square_pair)


@pytest.fixture(scope="module")
def gtrit_pair():
    g = systems.build_squashed_gtrit()
    return composite.compose([g, g])


@pytest.fixture(scope="module")
def gtrit_cnot(gtrit_pair):
    g = gtrit_pair.locals[0]
    return dynamics.build_conditional_cnot(
        gtrit_pair, 1, 2, dynamics.gtrit_flip_symmetry(g))


def test_identity_and_swap_are_allowed(square_pair):
    c = square_pair
    ident = dynamics.Transformation(
        adjoint=scalars.identity_matrix(c.ambient_dim, c.mode), mode=c.mode)
    assert dynamics.is_allowed_reversible(c, ident)
    assert dynamics.is_adjacency_preserving(c, ident)
    cert = dynamics.triviality_certificate(c, ident)
    assert cert.sigma == (1, 2)

    # the swap in the tensor basis
    d = c.locals[0].dim
    swap = np.zeros((d * d, d * d), dtype=object)
    for i in range(d):
        for j in range(d):
            swap[j * d + i, i * d + j] = 1
    t = dynamics.Transformation(adjoint=swap + 0 * swap, mode=c.mode)
    assert dynamics.is_allowed_reversible(c, t)
    cert = dynamics.triviality_certificate(c, t)
    assert cert.sigma == (2, 1)


def test_non_unit_preserving_is_rejected(square_pair):
    c = square_pair
    m = scalars.identity_matrix(c.ambient_dim, c.mode)
    m[0, 0] = 2 * m[0, 0]
    t = dynamics.Transformation(adjoint=m, mode=c.mode)
    assert not dynamics.is_allowed_reversible(c, t)
    with pytest.raises(NotAllowed):
        dynamics.is_adjacency_preserving(c, t)


def test_enumeration_count_and_group_order(square_pair, square_reversibles):
    assert len(square_reversibles) == 128
    assert dynamics.trivial_group_order(square_pair) == 128


def test_group_order_oracle_is_independent(square_pair):
    """8 local symmetries per square, times 2! for the swap."""
    sq = square_pair.locals[0]
    local_order = len(symmetry.local_symmetry_group(sq))
    assert local_order == 8
    assert dynamics.trivial_group_order(square_pair) == \
        local_order * local_order * 2


def test_all_square_reversibles_certified(square_pair, square_reversibles):
    for t in square_reversibles:
        cert = dynamics.triviality_certificate(square_pair, t)
        assert cert is not None
        assert sorted(cert.sigma) == [1, 2]


def test_enumeration_closed_under_composition(square_pair,
                                              square_reversibles):
    keys = {t.sort_key() for t in square_reversibles}
    picks = square_reversibles[::17]
    for a in picks:
        for b in picks:
            ab = a.compose_with(b)
            assert ab.sort_key() in keys
        assert a.inverse().sort_key() in keys


def test_subunit_criterion_matches_certificates(square_pair,
                                                square_reversibles):
    for t in square_reversibles[::7]:
        has_cert = dynamics.triviality_certificate(square_pair, t) \
            is not None
        assert dynamics.subunit_criterion(square_pair, t) == has_cert


def test_two_term_decompositions(square_pair):
    c = square_pair
    sub = composite.sub_unit_effects(c, 1)[0]
    pairs = dynamics.two_term_decompositions(c, sub.flattened)
    assert len(pairs) == 2
    for a, b in pairs:
        assert scalars.vec_eq(a.flattened + b.flattened, sub.flattened,
                              c.mode)


def test_cnot_matches_explicit_map(gtrit_pair, gtrit_cnot):
    c = gtrit_pair
    perm = dynamics.effect_permutation(c, gtrit_cnot)
    flip = {"Y0": "Y1", "Y1": "Y0", "Z0": "Z1", "Z1": "Z0"}
    g = c.locals[0]
    for i, p in enumerate(perm):
        a = c.ray_extremes[i]
        b = c.ray_extremes[p]
        la = [g.label(k) for k in a.indices]
        lb = [g.label(k) for k in b.indices]
        if la[0] == "X" and la[1] != "X":
            assert lb == [la[0], flip[la[1]]]
        else:
            assert lb == la


def test_cnot_is_allowed_but_nontrivial(gtrit_pair, gtrit_cnot):
    assert dynamics.is_allowed_reversible(gtrit_pair, gtrit_cnot)
    assert not dynamics.is_adjacency_preserving(gtrit_pair, gtrit_cnot)
    assert not dynamics.subunit_criterion(gtrit_pair, gtrit_cnot)
    assert dynamics.triviality_certificate(gtrit_pair, gtrit_cnot) is None


def test_cnot_entanglement_audit(gtrit_pair, gtrit_cnot):
    aud = dynamics.entanglement_audit(gtrit_pair, gtrit_cnot)
    assert aud.permutes_pure_products
    assert len(aud.product_permutation) == 25
    assert aud.separable_to_entangled_witness is None
    mix, img = aud.correlation_witness
    assert dynamics._is_product_state(gtrit_pair, mix)
    assert not dynamics._is_product_state(gtrit_pair, img)
    assert composite.is_separable(gtrit_pair,
                                  composite.CompositeState(img))


def test_cnot_rejects_irreducible_control():
    sq = systems.build_cube(2)
    g = systems.build_squashed_gtrit()
    c = composite.compose([sq, g])
    with pytest.raises(ControlNotReducible):
        dynamics.build_conditional_cnot(c, 1, 2,
                                        dynamics.gtrit_flip_symmetry(g))


def test_cnot_rejects_identity_target(gtrit_pair):
    g = gtrit_pair.locals[1]
    with pytest.raises(TargetHasNoSymmetry):
        dynamics.build_conditional_cnot(
            gtrit_pair, 1, 2,
            scalars.identity_matrix(g.dim, gtrit_pair.mode))


def test_theorem1_rejects_non_dichotomic(gtrit_pair):
    with pytest.raises(Exception) as exc:
        dynamics.verify_theorem1(gtrit_pair)
    assert "dichotomic" in str(exc.value)


def test_theorem1_on_square_pair(square_pair):
    rep = dynamics.verify_theorem1(square_pair)
    assert rep.passed
    assert rep.enumerated_count == rep.trivial_group_order == 128


def test_conjecture2_products_permuted(square_pair, square_reversibles):
    for t in square_reversibles[::11]:
        aud = dynamics.entanglement_audit(square_pair, t)
        assert aud.permutes_pure_products
