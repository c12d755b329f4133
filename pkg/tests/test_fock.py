from fractions import Fraction
from itertools import product

import pytest
from hypothesis import given, settings, strategies as st

from tropogw.errors import TruncationTooSmall
from tropogw.fock import (FockState, OperatorMonomial, OperatorSum, inner_product,
                          matrix_element_invariant, norm_formula, normal_order,
                          truncated_M, truncated_M_c, vacuum_expectation, word_expectation)
from tropogw.invariants import InvariantQuery, disconnected_invariant
from tropogw.polygon import build_polygon
from tropogw.presets import example_64, family_polygon
from tropogw.tangency import make_divergence

METHODS = ("normal_order", "feynman", "operator")


def terms(op):
    return {(m.generators, m.u): m.coeff for m in op.monomials()}


def test_mixed_commutator_sign():
    op = normal_order(OperatorMonomial((("b", 1), ("a", -1))))
    assert terms(op) == {((("a", -1), ("b", 1)), 0): 1, ((), 0): 1}


def test_same_species_commute():
    op = normal_order(OperatorMonomial((("a", 2), ("a", -2))))
    assert terms(op) == {((("a", -2), ("a", 2)), 0): 1}


def test_longer_word():
    # b_2 a_1 a_{-2} b_{-1}: two contractions, each pairing once
    op = normal_order(OperatorMonomial((("b", 2), ("a", 1), ("a", -2), ("b", -1))))
    assert terms(op)[((), 0)] == 2
    assert all(m.is_normal_ordered() for m in op.monomials())


def test_truncated_floor_operator():
    op = truncated_M_c(1, 2)
    assert terms(op) == {
        ((("a", 1),), -1): 1,
        ((("a", -1), ("a", 2)), 0): 1,
        ((("a", -1), ("a", 1), ("a", 1)), 0): Fraction(1, 2),
    }
    assert len(truncated_M(3)) == 3


def test_operator_sum_arithmetic():
    x = OperatorSum([OperatorMonomial((("a", 1),), 0, Fraction(2))])
    y = OperatorSum([OperatorMonomial((("a", 1),), 0, Fraction(-2))])
    assert len(x + y) == 0
    assert terms(x * x) == {((("a", 1), ("a", 1)), 0): 4}


def test_vacuum_norm():
    for method in METHODS:
        assert vacuum_expectation(FockState(), [], FockState(), method) == {0: 1}


SMALL = [FockState(mu, nu) for mu in [(), (1,), (2,), (1, 1)] for nu in [(), (1,), (2,)]]


def test_pairing_of_basis_states():
    assert norm_formula(FockState((2,), ()), FockState((), (2,))) == 2
    for left, right in product(SMALL, repeat=2):
        expected = norm_formula(left, right)
        for method in METHODS:
            assert vacuum_expectation(left, [], right, method).get(0, 0) == expected
        assert inner_product(left.vector(), right.vector()).get(0, 0) == expected
        assert norm_formula(left, right) == norm_formula(right, left)


def test_adjoint_creation_and_annihilation():
    # <out| b_{-n} |in> equals <in'| a_n |out'> after swapping species roles
    for n in (1, 2):
        for left, right in product(SMALL, repeat=2):
            create = OperatorSum([OperatorMonomial((("b", -n),))])
            annihilate = OperatorSum([OperatorMonomial((("a", n),))])
            lhs = vacuum_expectation(left, [create], right, "operator")
            swapped_l, swapped_r = FockState(right.nu, right.mu), FockState(left.nu, left.mu)
            rhs = vacuum_expectation(swapped_l, [annihilate], swapped_r, "operator")
            assert lhs == rhs


@settings(max_examples=40, deadline=None)
@given(st.lists(st.tuples(st.integers(-2, 2), st.integers(0, 2)), min_size=1, max_size=3),
       st.sampled_from(SMALL), st.sampled_from(SMALL))
def test_methods_agree_on_operator_products(choices, out, in_):
    ops = [truncated_M_c(c, 2) if kind else truncated_M(2) for c, kind in choices]
    results = [vacuum_expectation(out, ops, in_, m) for m in METHODS]
    assert results[0] == results[1] == results[2]


gens = st.tuples(st.sampled_from("ab"), st.integers(-3, 3).filter(bool))


@settings(max_examples=200, deadline=None)
@given(st.lists(gens, max_size=6))
def test_methods_agree_on_words(word):
    values = {word_expectation(word, m) for m in METHODS}
    assert len(values) == 1


def test_matrix_element_sixty_four():
    ex = example_64()
    assert matrix_element_invariant(ex["polygon"], 0, ex["x"], ex["y"]) == 64
    assert matrix_element_invariant(ex["polygon"], 0, ex["x"], ex["y"], bare_edges=True) == 72


@pytest.mark.parametrize("poly, genus, x, y", [
    (build_polygon([0], [0], [1], [1], 1), 0, (1, -1), ()),
    (family_polygon(2, 3), 0, (2, 1), (-5,)),
    (family_polygon(2, 3), 1, (2, 1), (-5,)),
    (build_polygon([1], [0], [2], [2], 2, allow_open=True), 0, (1,), (1, -2, -2)),
    (build_polygon([1, -1], [0], [1, 1], [2], 3, allow_open=True), 0, (2, -2), (1, -1)),
    (build_polygon([1], [0], [2], [2], 2), 1, (1, 1), (-2, -2)),
])
def test_matrix_element_equals_diagram_count(poly, genus, x, y):
    q = InvariantQuery.create(poly, genus, make_divergence(x, y), connected=False)
    assert matrix_element_invariant(poly, genus, x, y) == disconnected_invariant(q)


def test_truncated_operators_with_generous_cap():
    ex = example_64()
    assert matrix_element_invariant(ex["polygon"], 0, ex["x"], ex["y"], cap=12) == 64
    with pytest.raises(TruncationTooSmall):
        matrix_element_invariant(ex["polygon"], 0, ex["x"], ex["y"], cap=3)
