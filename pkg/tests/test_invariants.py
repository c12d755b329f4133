import pytest
from hypothesis import given, settings, strategies as st

from tropogw.diagrams import enumerate_weighted, multiplicity
from tropogw.errors import InfeasibleDegree, NotInLambda
from tropogw.invariants import (InvariantQuery, _reduced_stats, automorphism_order,
                                connected_invariant, disconnected_invariant,
                                enumerate_thickened, function_F)
from tropogw.polygon import build_polygon, divergence_sequences, multiset_permutations
from tropogw.polynomials import gamma_shifted
from tropogw.presets import example_64, family_polygon, family_table_value
from tropogw.tangency import make_divergence


def query(poly, genus, x, y, connected=True):
    return InvariantQuery.create(poly, genus, make_divergence(x, y), connected)


def diagram_sum(poly, genus, x, y):
    """Connected count straight from the enumerated diagrams."""
    total = count = 0
    for black_div in divergence_sequences(poly):
        for y_order in multiset_permutations(y):
            for d in enumerate_weighted(poly.a, genus, x, y_order, black_div):
                total += multiplicity(d)
                count += 1
    return total, count


def test_sixty_four():
    ex = example_64()
    q = InvariantQuery.create(ex["polygon"], ex["genus"], ex["tangency"])
    assert connected_invariant(q, with_count=True) == (64, 8)
    assert diagram_sum(ex["polygon"], 0, ex["x"], ex["y"]) == (64, 8)


@pytest.mark.parametrize("poly, genus, x, y", [
    (family_polygon(2, 5), 1, (2, 3), (-7,)),
    (build_polygon([1], [0], [2], [2], 2), 1, (1, 1), (-2, -2)),
    (build_polygon([3, 1, -3], [-1, 0], [1, 2, 1], [2, 2], 2), 0, (2,), (-3, -3)),
])
def test_reduced_sum_matches_diagrams(poly, genus, x, y):
    assert connected_invariant(query(poly, genus, x, y), with_count=True) == \
        diagram_sum(poly, genus, x, y)


def test_wrong_degree_rejected():
    poly = family_polygon(2, 5)
    with pytest.raises(InfeasibleDegree):
        query(poly, 0, (2, 2), (-7,))


def test_function_F_checks_lambda():
    with pytest.raises(NotInLambda):
        function_F(family_polygon(2), 0, (2, 3), (-6,))


@settings(max_examples=15, deadline=None)
@given(st.integers(1, 6), st.integers(1, 6), st.integers(0, 1))
def test_swapping_x_ends(x1, x2, genus):
    poly = family_polygon(2)
    y1 = -2 - x1 - x2
    assert function_F(poly, genus, (x1, x2), (y1,)) == function_F(poly, genus, (x2, x1), (y1,))


@pytest.mark.parametrize("genus", [0, 1])
def test_family_row_needs_the_extra_gamma_zero(genus):
    k, x1, x2, y1 = 2, 5, 3, -10
    value = function_F(family_polygon(k), genus, (x1, x2), (y1,))
    assert value == abs(y1) * family_table_value("++-", genus, k, x1, x2, y1, corrected=True)
    assert value - abs(y1) * family_table_value("++-", genus, k, x1, x2, y1) == \
        abs(y1) * gamma_shifted(genus, k, 0)


def test_two_grey_interval_sum():
    # blacks B1, B2, B3 with greys B1->B2, B1->B3, B2->B3
    c1r, c2r, c1l, c2l, c3l = 3, 1, -2, 0, 1
    x1, x2, y1, x3 = 2, 3, -3, -10
    div = (c1r - c3l + x1 + x2 + y1, c2r - c2l, c1r - c1l + x3)
    assert div == (4, 1, -5)
    total, _ = _reduced_stats(((0, 1), (0, 2), (1, 2)), div)
    # the B2->B3 weight w runs over [1, 5]; balancing fixes the other two
    expected = sum(w ** 2 * (c2l - c2r + w) ** 2 * (-x3 - w - c1r + c1l) ** 2
                   for w in range(1, 6))
    assert total == expected


CASES = [
    (family_polygon(2, 3), 0, (2, 1), (-5,)),
    (family_polygon(2, 3), 1, (2, 1), (-5,)),
    (example_64()["polygon"], 0, (1, -5), (-1,)),
    (build_polygon([1], [0], [2], [2], 2, allow_open=True), 0, (1,), (1, -2, -2)),
    (build_polygon([1, -1], [0], [1, 1], [2], 3, allow_open=True), 0, (2, -2), (1, -1)),
]


@pytest.mark.parametrize("poly, genus, x, y", CASES)
def test_thickened_sums(poly, genus, x, y):
    th = list(enumerate_thickened(poly, genus, x, y))
    assert all(d.check() == [] for d in th)
    connected = sum(d.multiplicity() for d in th if d.is_connected())
    total = sum(d.multiplicity() for d in th)
    assert connected == automorphism_order(y) * connected_invariant(query(poly, genus, x, y))
    assert total == disconnected_invariant(query(poly, genus, x, y, False))
    assert connected <= total


def test_disconnected_diagrams_contribute():
    poly = build_polygon([1, -1], [0], [1, 1], [2], 3, allow_open=True)
    assert connected_invariant(query(poly, 0, (2, -2), (1, -1))) == 144
    assert disconnected_invariant(query(poly, 0, (2, -2), (1, -1), False)) == 184
