import json

import pytest
from hypothesis import given, strategies as st

from cofree2as.bialgebra import DELTA, coproduct
from cofree2as.free2as import DOT, STAR, FreeElement, basis_element, degree_basis, dot, leaf, star
from cofree2as.linear import accumulate, finish
from cofree2as.tensor_models import (
    BInftyStructure, GradedBasis, Letter, TensorElement, composition_pairs, concat, deconcatenation, format_word,
    iter_words, quasi_shuffle, quasi_shuffle_structure, shuffle, shuffle_elements, star_from_binfty, tfc_check,
    tfc_defect, theta, theta_map, word,
)
from cofree2as.trees import parse_tree
from oracles import shuffle_count

a, b, c = Letter("a", 1), Letter("b", 2), Letter("c", 3)
ABC = (a, b, c)
u, v, w = (Letter(s, 1) for s in "uvw")


def nilpotent(x, y):
    """a.a = b, a.b = b.a = c, all else zero: an associative graded product."""
    table = {(a, a): b, (a, b): c, (b, a): c}
    z = table.get((x, y))
    return {z: 1} if z else {}


def E(*words):
    acc: dict = {}
    for wd in words:
        accumulate(acc, tuple(wd), 1)
    return TensorElement(acc)


words3 = st.lists(st.sampled_from(ABC), max_size=4).map(tuple)
short3 = st.lists(st.sampled_from(ABC), max_size=2).map(tuple)


def symbolic():
    """Structure whose M_pq values are fresh letters named after their arguments."""
    def op(left, right):
        p, q = len(left), len(right)
        name = f"M{p}{q}({''.join(x.symbol for x in left)},{''.join(x.symbol for x in right)})"
        return {Letter(name, p + q): 1}
    return BInftyStructure(None, {}, None, True, "symbolic", fallback=op)


def M(p, q, left, right):
    return Letter(f"M{p}{q}({left},{right})", p + q)


def test_deconcatenation_examples():
    d = deconcatenation(E((u, v)))
    assert dict(d.items()) == {((), (u, v)): 1, ((u,), (v,)): 1, ((u, v), ()): 1}
    assert dict(deconcatenation(TensorElement.one()).items()) == {((), ()): 1}


@given(st.lists(st.sampled_from((u, v, w)), max_size=6).map(tuple))
def test_deconcatenation_coassociative(wd):
    d = deconcatenation(E(wd))
    left, right = {}, {}
    for (x, y), k in d.items():
        for (x1, x2), m in deconcatenation(E(x)).items():
            accumulate(left, (x1, x2, y), k * m)
        for (y1, y2), m in deconcatenation(E(y)).items():
            accumulate(right, (x, y1, y2), k * m)
    assert finish(left) == finish(right)


def test_shuffle_examples():
    assert shuffle((u,), (v,)) == E((u, v), (v, u))
    assert shuffle((u, v), (w,)) == E((u, v, w), (u, w, v), (w, u, v))


@given(st.integers(0, 4), st.integers(0, 4))
def test_shuffle_support_size(p, q):
    letters = [Letter(f"l{i}", 1) for i in range(p + q)]
    s = shuffle(tuple(letters[:p]), tuple(letters[p:]))
    assert len(s) == shuffle_count(p, q)
    assert all(k == 1 for _, k in s.items())


def test_concat_and_unital_infinitesimal():
    assert concat(E((u,)), E((v, w))) == E((u, v, w))
    assert concat(TensorElement.one(), E((w,))) == E((w,))
    assert not tfc_defect(E((u,)), E((v, w)))
    pairs = [(E(x), E(y)) for x in iter_words((u, v), 3) for y in iter_words((u, v), 2)]
    assert tfc_check(pairs)


def test_composition_pairs_counts():
    # index set of the M_pq expansion: each factor (i, j) != (0, 0), sums p and q.
    assert composition_pairs(1, 1) == composition_pairs(1, 1)
    assert set(composition_pairs(1, 1)) == {((1, 1),), ((1, 0), (0, 1)), ((0, 1), (1, 0))}
    for p in range(4):
        for q in range(4):
            for pairs in composition_pairs(p, q):
                assert sum(i for i, _ in pairs) == p and sum(j for _, j in pairs) == q
                assert all(i or j for i, j in pairs)


def test_star_low_degree_display():
    B = symbolic()
    assert star_from_binfty(B, E((u,)), E((v,))) == E((M(1, 1, "u", "v"),), (u, v), (v, u))
    expected = E(
        (M(2, 1, "uv", "w"),), (u, M(1, 1, "v", "w")), (M(1, 1, "u", "w"), v), (u, v, w), (u, w, v), (w, u, v),
    )
    assert star_from_binfty(B, E((u, v)), E((w,))) == expected


def test_trivial_structure_is_shuffle():
    B = BInftyStructure.trivial()
    for x in iter_words((u, v), 3):
        for y in iter_words((u, w), 3):
            assert star_from_binfty(B, E(x), E(y)) == shuffle(x, y)


def test_top_and_bottom_components():
    B = symbolic()
    x, y = (u, v), (w, u)
    prod = star_from_binfty(B, E(x), E(y))
    assert prod.component(4) == shuffle(x, y)
    assert prod.component(1) == E((M(2, 2, "uv", "wu"),))


def test_incomplete_data_error():
    B = BInftyStructure(None, {}, 2, False)
    with pytest.raises(ValueError, match="B∞ data incomplete for degree"):
        star_from_binfty(B, E((u, v)), E((w,)))


def test_quasi_shuffle_example():
    got = quasi_shuffle(nilpotent, (a,), (b,))
    assert got == E((c,), (a, b), (b, a))


@given(words3, words3)
def test_quasi_shuffle_recursion_matches_expansion(x, y):
    B = quasi_shuffle_structure(ABC, nilpotent)
    assert quasi_shuffle(nilpotent, x, y) == star_from_binfty(B, E(x), E(y))


@given(short3, short3, short3)
def test_induced_products_associative(x, y, z):
    for B in (BInftyStructure.trivial(), quasi_shuffle_structure(ABC, nilpotent)):
        left = star_from_binfty(B, star_from_binfty(B, E(x), E(y)), E(z))
        right = star_from_binfty(B, E(x), star_from_binfty(B, E(y), E(z)))
        assert left == right


def test_non_associative_product_rejected():
    with pytest.raises(ValueError):
        # (aa)a = ba = 0 but a(aa) = ab = a
        quasi_shuffle_structure((a, b), lambda x, y: {(a, a): {b: 1}, (a, b): {a: 1}}.get((x, y), {}))


def test_structure_from_json():
    data = {
        "generators": {"1": ["a"], "2": ["b"], "3": ["c"]},
        "arity_bound": 4,
        "operations": {"1,1": [
            {"left": ["a"], "right": ["a"], "value": {"b": "1"}},
            {"left": ["a"], "right": ["b"], "value": {"c": "1"}},
            {"left": ["b"], "right": ["a"], "value": {"c": "1"}},
        ]},
    }
    B = BInftyStructure.from_json(json.dumps(data))
    Q = quasi_shuffle_structure(ABC, nilpotent)
    for x in iter_words(ABC, 2):
        for y in iter_words(ABC, 2):
            assert star_from_binfty(B, E(x), E(y)) == star_from_binfty(Q, E(x), E(y))


def test_graded_basis():
    g = GradedBasis({1: ["a"], 2: ["b"]})
    assert g.letters(2) == (Letter("b", 2),)
    assert len(g.words(3)) == 3  # aaa, ab, ba
    assert format_word(word("u", "v")) == "uv"
    assert format_word(()) == "1"
    assert format_word((b,)) == "b[2]"


# --- theta ------------------------------------------------------------------------


def B_(tree, tag):
    return basis_element(parse_tree(tree), tag)


def test_theta_table():
    values = [
        theta(B_("(||)", DOT)), theta(B_("(||)", STAR)), theta(B_("(|||)", DOT)),
        theta(B_("(|(||))", DOT)), theta(B_("((||)|)", DOT)),
        theta(B_("(|(||))", STAR)), theta(B_("((||)|)", STAR)), theta(B_("(|||)", STAR)),
    ]
    assert values == [1, 2, 1, 2, 2, 3, 3, 6]


def test_theta_rejects_several_generators():
    with pytest.raises(ValueError):
        theta(basis_element(parse_tree("(||)"), DOT, ("u", "v")))
    with pytest.raises(ValueError):
        theta_map(star(leaf("u"), leaf("v")))


def theta_oracle(b):
    """theta through the letter products: x*x*... in the shuffle algebra, x.x... by concatenation."""
    from cofree2as.free2as import dot_word_form, word_form
    if b.tree is None:
        return TensorElement.one()
    if b.tree.is_leaf:
        return E((Letter("x", 1),))
    if b.tag == STAR:
        out = TensorElement.one()
        for f in word_form(b):
            out = shuffle_elements(out, theta_oracle(f))
        return out
    out = TensorElement.one()
    for f in dot_word_form(b):
        out = concat(out, theta_oracle(f))
    return out


def test_theta_against_oracle():
    for d in range(1, 6):
        for b in degree_basis(d):
            assert theta_map(b) == theta_oracle(b)


def test_theta_morphism_and_comorphism():
    basis = {d: degree_basis(d) for d in range(1, 5)}
    for d1 in range(1, 5):
        for d2 in range(1, 6 - d1):
            for s in basis[d1]:
                for t in basis[d2]:
                    assert theta_map(star(s, t)) == shuffle_elements(theta_map(s), theta_map(t))
                    assert theta_map(dot(s, t)) == concat(theta_map(s), theta_map(t))
    for d in range(1, 6):
        for x in degree_basis(d):
            acc: dict = {}
            for (s, t), k in coproduct(x, DELTA).items():
                for w1, c1 in theta_map(FreeElement.of(s)).items():
                    for w2, c2 in theta_map(FreeElement.of(t)).items():
                        accumulate(acc, (w1, w2), k * c1 * c2)
            assert dict(deconcatenation(theta_map(x)).items()) == finish(acc)
