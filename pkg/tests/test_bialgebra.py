import pytest
from hypothesis import given

from cofree2as.bialgebra import (
    DELTA, DELTA2, antipode, coassociativity_defect, compatibility_defect, coproduct, counit, delta, delta_second,
    filtration_degree, format_tensor, iota_defect, is_primitive, iterated_reduced_delta, primitive_basis,
    reduced_delta, tag_swap, tensor, twist,
)
from cofree2as.free2as import DOT, STAR, UNIT, FreeElement, basis_element, degree_basis, dot, leaf, star
from cofree2as.linear import accumulate, finish
from cofree2as.trees import parse_tree
from oracles import compat_oracle, delta_closed, oracle_delta
from strategies import basis_elements, elements

T = parse_tree
u, v, w, x = (FreeElement.of(leaf(s)) for s in "uvwx")
ONE = FreeElement.one()


def el(tree, tag, labels):
    return FreeElement.of(basis_element(T(tree), tag, labels))


def A(a, b):
    return dot(a, b)


def all_basis(max_degree):
    return [b for d in range(1, max_degree + 1) for b in degree_basis(d)]


# --- worked values --------------------------------------------------------------


def test_degree_two_reduced_coproduct():
    assert reduced_delta(dot(u, v)) == tensor(u, v)
    assert reduced_delta(star(u, v)) == tensor(u, v) + tensor(v, u)
    assert delta(dot(u, v)) == tensor(dot(u, v), ONE) + tensor(u, v) + tensor(ONE, dot(u, v))


def test_degree_three_reduced_coproduct():
    t = el("((||)|)", DOT, "uvw")
    expected = tensor(star(u, v), w) + tensor(u, A(v, w)) + tensor(v, A(u, w))
    assert reduced_delta(t) == expected


def test_degree_four_reduced_coproduct():
    t = el("(((||)|)|)", DOT, "uvwx")
    expected = (
        tensor(star(A(u, v), w), x)
        + tensor(A(u, v), A(w, x))
        + tensor(w, el("(|||)", DOT, "uvx"))
        + tensor(u, el("((||)|)", DOT, "vwx"))
        + tensor(star(u, w), A(v, x))
    )
    assert reduced_delta(t) == expected


def test_unit_and_leaf():
    assert delta(ONE) == tensor(ONE, ONE)
    assert delta_second(ONE) == tensor(ONE, ONE)
    assert delta_second(v) == tensor(v, ONE) + tensor(ONE, v)
    assert not reduced_delta(v)
    assert is_primitive(v)
    assert counit(el("(|||)", DOT, "uvw")) == 0
    assert counit(ONE) == 1


def test_reduced_second_coproduct_degree_two():
    assert reduced_delta(star(u, v), DELTA2) == tensor(u, v)


def test_filtration_degree():
    assert filtration_degree(dot(u, v)) == 2
    assert filtration_degree(ONE) == 0
    assert filtration_degree(u) == 1


def test_iterated_negative_rejected():
    with pytest.raises(ValueError):
        iterated_reduced_delta(u, -1)


def test_antipode_small():
    assert antipode(v) == -v
    assert antipode(ONE) == ONE


def test_tag_swap_degree_two():
    assert tag_swap(star(u, v)) == dot(u, v)


def test_format_tensor():
    assert format_tensor(tensor(u, v)) == "1 |:u (x) |:v"


# --- closed formula versus the axiomatic recursion ---------------------------------


def test_closed_formula_agrees():
    for b in all_basis(5):
        assert dict(coproduct(b).items()) == delta_closed(b)


def test_tag_swap_transport():
    for b in all_basis(5):
        lhs = coproduct(tag_swap(b))
        rhs = coproduct(b, DELTA2).map_keys(lambda k: (next(iter(tag_swap(k[0]))), next(iter(tag_swap(k[1])))))
        assert lhs == rhs


# --- axioms ----------------------------------------------------------------------


def test_coassociativity():
    for b in all_basis(5):
        for which in (DELTA, DELTA2):
            assert not coassociativity_defect(b, which)


def test_connectedness():
    for b in all_basis(5):
        for which in (DELTA, DELTA2):
            assert filtration_degree(b, which) <= b.degree
            assert not iterated_reduced_delta(b, b.degree, which)


def test_iota_compatibility():
    for b in all_basis(5):
        assert not iota_defect(b)


@given(elements(), elements())
def test_compatibility_table(a, b):
    for op in (STAR, DOT):
        for which in (DELTA, DELTA2):
            assert not compatibility_defect(a, b, op, which)
            assert compat_oracle(a, b, op, which)


@given(elements(max_degree=5))
def test_closed_formula_on_elements(a):
    assert dict(coproduct(a).items()) == oracle_delta(a)


def test_counit_axiom():
    for b in all_basis(4):
        for which in (DELTA, DELTA2):
            d = coproduct(b, which)
            left = {k[1]: c for k, c in d.items() if k[0] == UNIT}
            right = {k[0]: c for k, c in d.items() if k[1] == UNIT}
            assert left == {b: 1} and right == {b: 1}


# --- antipode and primitives -------------------------------------------------


def test_antipode_convolution():
    for b in all_basis(5):
        acc: dict = {}
        for (s, t), c in coproduct(b).items():
            for k, d in star(antipode(s), FreeElement.of(t)).items():
                accumulate(acc, k, c * d)
        assert finish(acc) == {}


def test_primitive_dimensions():
    assert [len(primitive_basis(n)) for n in range(1, 6)] == [1, 1, 3, 11, 45]


def test_primitives_are_primitive():
    for n in range(1, 5):
        for p in primitive_basis(n):
            assert is_primitive(p)
        for p in primitive_basis(n, which=DELTA2):
            assert is_primitive(p, DELTA2)


def test_decorated_primitives():
    ps = primitive_basis(3, labels=("u", "v", "w"))
    assert len(ps) == 3 * 2 * 3
    assert all(is_primitive(p) for p in ps)


@given(basis_elements(1, 5))
def test_iterated_vanishes_beyond_degree(b):
    assert not iterated_reduced_delta(b, b.degree)
    assert iterated_reduced_delta(b, b.degree - 1)


def test_twist():
    assert twist(tensor(u, v)) == tensor(v, u)
