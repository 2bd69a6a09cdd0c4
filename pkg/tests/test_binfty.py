import random

import pytest

from cofree2as.bialgebra import is_primitive, primitive_basis, tag_swap
from cofree2as.binfty import (
    BInftyElement, DecoratedTree, Op, TwoAsOps, check_Rijk, embed, evaluate, expand_Mt,
    free_compose_mpq, free_mpq, free_structure, morphism_from_free, mpq, mpq_in_2as, random_inputs, rijk_sides,
    to_sexpr, tree_letter,
)
from cofree2as.free2as import FreeElement, dot, dot_all, leaf, star
from cofree2as.projector import project
from cofree2as.tensor_models import (
    BInftyStructure, Letter, TensorElement, quasi_shuffle_structure, star_from_binfty,
)
from cofree2as.trees import LEAF, corolla, enumerate_trees, gamma, parse_tree, schroeder

T = parse_tree
u, v, w, x = (FreeElement.of(leaf(s)) for s in "uvwx")


def D(tree, labels):
    return DecoratedTree(T(tree), tuple(labels))


def BE(*pairs):
    acc = BInftyElement.zero()
    for c, tree, labels in pairs:
        acc = acc + BInftyElement.basis(D(tree, labels)).scale(c)
    return acc


# --- M_pq in 2as(V) -----------------------------------------------------------------


def test_m11():
    assert mpq_in_2as("u", "v") == star(u, v) - dot(u, v) - dot(v, u)


def test_m21():
    expected = star(dot(u, v), w) - dot(u, star(v, w)) - dot(star(u, w), v) + dot_all([u, w, v])
    assert mpq_in_2as("uv", "w") == expected


def test_m12():
    expected = star(u, dot(v, w)) - dot(star(u, v), w) - dot(v, star(u, w)) + dot_all([v, u, w])
    assert mpq_in_2as("u", "vw") == expected


def test_boundary_operations():
    assert mpq_in_2as("u", "") == u
    assert mpq_in_2as("", "v") == v
    assert not mpq_in_2as("uv", "")
    with pytest.raises(ValueError):
        mpq_in_2as("", "")


def test_r111_explicit():
    M = mpq_in_2as
    m_uv = M("u", "v")
    m_vw = M("v", "w")
    lhs = M("uv", "w") + M("vu", "w") + M([m_uv], "w")
    rhs = M("u", "vw") + M("u", "wv") + M("u", [m_vw])
    assert lhs == rhs


@pytest.mark.parametrize("ijk", [(i, j, k) for i in range(1, 4) for j in range(1, 4) for k in range(1, 4) if i + j + k <= 5])
def test_rijk(ijk):
    assert check_Rijk(*ijk, samples=2, seed=sum(ijk))


def test_rijk_argument_errors():
    with pytest.raises(ValueError):
        rijk_sides(0, 1, 1, [u, v])
    with pytest.raises(ValueError):
        rijk_sides(1, 1, 1, [u, v])


def test_rijk_trivial_structure():
    B = BInftyStructure.trivial()

    def M(left, right):
        """Multilinear extension of the structure's operations to letter combinations."""
        partial = [((), 1)]
        for arg in list(left) + list(right):
            partial = [(ks + (k[0],), c * d) for ks, c in partial for k, d in arg.items()]
        acc = TensorElement.zero()
        for ks, c in partial:
            value = B.mpq(ks[:len(left)], ks[len(left):])
            acc = acc + TensorElement({(a,): d for a, d in value.items()}).scale(c)
        return acc

    ops = TwoAsOps(None, None, TensorElement.zero(), "trivial")
    letters = [TensorElement({(Letter(s, 1),): 1}) for s in "abcd"]
    for i, j, k in [(1, 1, 1), (2, 1, 1), (1, 2, 1), (1, 1, 2)]:
        lhs, rhs = rijk_sides(i, j, k, letters[:i + j + k], ops, M)
        assert lhs == rhs == TensorElement.zero()


# --- functoriality and U2 -------------------------------------------------------------


def nilpotent(a, b):
    p, q = Letter("p", 1), Letter("q", 2)
    table = {(p, p): {q: 1}}
    return table.get((a, b), {})


def test_mpq_on_tensor_model_recovers_structure():
    """On T^fc with the induced product and concatenation, M_pq on letters is the given operation."""
    p, q = Letter("p", 1), Letter("q", 2)
    B = quasi_shuffle_structure([p, q], nilpotent)
    from cofree2as.binfty import u2_ops
    ops = u2_ops(B)
    P = TensorElement({(p,): 1})
    assert mpq(ops, [P], [P]) == TensorElement({(q,): 1})
    assert not mpq(ops, [P, P], [P])
    assert not mpq(ops, [P], [P, P])


def test_functoriality_evaluation_morphism():
    from cofree2as.binfty import u2_ops
    p = Letter("p", 1)
    B = quasi_shuffle_structure([p, Letter("q", 2)], nilpotent)
    ops = u2_ops(B)
    letters = {s: TensorElement({(Letter(s, 1),): 1}) for s in "uvw"}
    letters["u"] = TensorElement({(p,): 1})
    phi = morphism_from_free(ops, lambda s: letters[s], TensorElement.one())
    for left, right in [("u", "v"), ("uv", "w"), ("u", "vw"), ("uu", "u")]:
        img = phi(mpq_in_2as(left, right))
        direct = mpq(ops, [letters[s] for s in left], [letters[s] for s in right])
        assert img == direct


def test_functoriality_tag_swap():
    swapped = TwoAsOps(lambda a, b: tag_swap(star(tag_swap(a), tag_swap(b))),
                       lambda a, b: tag_swap(dot(tag_swap(a), tag_swap(b))), FreeElement.zero(), "conj")
    for left, right in [("u", "v"), ("uv", "w"), ("u", "vw")]:
        a = [tag_swap(FreeElement.of(leaf(s))) for s in left]
        b = [tag_swap(FreeElement.of(leaf(s))) for s in right]
        assert mpq(swapped, a, b) == tag_swap(mpq_in_2as(left, right))


def test_mpq_of_primitives_is_primitive():
    rng = random.Random(3)
    for p in range(1, 4):
        for q in range(1, 5 - p):
            args = []
            for i in range(p + q):
                d = rng.randint(1, 2)
                labels = tuple(f"l{i}{j}" for j in range(d))
                args.append(rng.choice(primitive_basis(d, labels=labels)))
            assert is_primitive(mpq_in_2as(args[:p], args[p:]))


def test_mpq_of_primitives_is_e_of_product():
    rng = random.Random(5)
    for p in range(1, 4):
        for q in range(1, 5 - p):
            args = []
            for i in range(p + q):
                d = rng.randint(1, 2)
                labels = tuple(f"l{i}{j}" for j in range(d))
                args.append(rng.choice(primitive_basis(d, labels=labels)))
            lhs = mpq_in_2as(args[:p], args[p:])
            rhs = project(star(dot_all(args[:p]), dot_all(args[p:])))
            assert lhs == rhs


# --- the free B-infinity algebra on trees ---------------------------------------------


def test_free_leaves_give_gamma():
    for p in range(1, 5):
        for q in range(1, 6 - p):
            labels = [f"a{i}" for i in range(p + q)]
            got = free_compose_mpq(labels[:p], labels[p:])
            assert got == BInftyElement.basis(DecoratedTree(gamma(p, q), tuple(labels)))


def test_free_three_leaf_examples():
    assert free_compose_mpq(["u"], ["(||):v,w"]) == BE((1, "(|||)", "uvw"), (-1, "(|(||))", "uvw"), (-1, "(|(||))", "uwv"))
    assert free_compose_mpq(["(||):u,v"], ["w"]) == BE((1, "(|||)", "uvw"), (-1, "((||)|)", "uvw"), (-1, "((||)|)", "vuw"))
    assert free_compose_mpq(["u"], ["v"]) == BE((1, "(||)", "uv"))


def test_free_four_leaf_examples():
    got = free_compose_mpq(["(||):u,v"], ["(||):w,x"])
    expected = BE(
        (1, "(||||)", "uvwx"),
        (-1, "((||)||)", "uvwx"), (-1, "((||)||)", "vuwx"),
        (-1, "(||(||))", "uvwx"), (-1, "(||(||))", "uvxw"),
        (1, "((||)(||))", "uvwx"), (1, "((||)(||))", "vuwx"), (1, "((||)(||))", "uvxw"), (1, "((||)(||))", "vuxw"),
    )
    assert got == expected
    got = free_compose_mpq(["(||):u,v"], ["w", "x"])
    expected = BE((1, "(||(||))", "uvwx"), (-1, "((||)(||))", "uvwx"), (-1, "((||)(||))", "vuwx"))
    assert got == expected


def test_free_empty_side_rejected():
    with pytest.raises(ValueError):
        free_compose_mpq([], ["u"])


def test_embed_is_primitive_and_injective():
    for d in range(1, 5):
        images = [embed(DecoratedTree(t, ("x",) * d)) for t in enumerate_trees(d)]
        assert all(is_primitive(e) for e in images)
        assert len(images) == schroeder(d - 1) == len(primitive_basis(d))
        from cofree2as import linalg
        basis = sorted({b for e in images for b in e}, key=lambda b: b.sort_key())
        rows = [[e.coefficient(b) for e in images] for b in basis]
        assert linalg.rank(rows, len(images)) == len(images)


def test_free_structure_associative():
    B = free_structure()
    letter = lambda s: tree_letter(DecoratedTree.parse(s))
    a, b, c = letter("|:u"), letter("(||):v,w"), letter("|:x")
    for xs in [((a,), (b,), (c,)), ((a, c), (b,), (a,)), ((b,), (a, c), (c,))]:
        X, Y, Z = (TensorElement({w: 1}) for w in xs)
        assert star_from_binfty(B, star_from_binfty(B, X, Y), Z) == star_from_binfty(B, X, star_from_binfty(B, Y, Z))


def test_free_mpq_multilinear():
    left = [BE((2, "|", "u"), (1, "|", "w"))]
    right = [BE((1, "|", "v"))]
    assert free_mpq(left, right) == BE((2, "(||)", "uv"), (1, "(||)", "wv"))


def test_decorated_tree_parse():
    assert DecoratedTree.parse("(||):u,v") == D("(||)", "uv")
    assert DecoratedTree.parse("(||)") == D("(||)", "xx")
    with pytest.raises(ValueError):
        DecoratedTree.parse("(||):u")


# --- M(t) as a composite of generators ------------------------------------------------


def test_expand_gamma_is_generator():
    for p in range(1, 3):
        for q in range(1, 3):
            e = expand_Mt(gamma(p, q))
            assert isinstance(e, Op) and (e.p, e.q) == (p, q)


def test_expand_corolla_three():
    e = expand_Mt(corolla(3), ["u", "v", "w"])
    expected = (
        free_mpq(["u"], [free_mpq(["v"], ["w"])]) + free_compose_mpq(["u"], ["v", "w"]) + free_compose_mpq(["u"], ["w", "v"])
    )
    assert evaluate(e) == expected
    assert evaluate(e) == BE((1, "(|||)", "uvw"))


def test_expand_evaluates_to_tree():
    for d in range(2, 6):
        for t in enumerate_trees(d):
            labels = tuple(f"v{i + 1}" for i in range(d))
            assert evaluate(expand_Mt(t)) == BInftyElement.basis(DecoratedTree(t, labels))


def test_expand_errors():
    with pytest.raises(ValueError):
        expand_Mt(LEAF)
    with pytest.raises(ValueError):
        expand_Mt(corolla(3), ["u"])


def test_sexpr():
    assert to_sexpr(expand_Mt(gamma(1, 1), ["u", "v"])) == "(M 1 1 (leaf u) (leaf v))"


def test_random_inputs_distinct_labels():
    import random as _r
    xs = random_inputs(4, _r.Random(1))
    label_sets = [{lab for b in x for lab in b.labels} for x in xs]
    assert sum(map(len, label_sets)) == len(set().union(*label_sets))
