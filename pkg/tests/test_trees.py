import pytest
from hypothesis import given

from cofree2as.trees import LEAF, PlanarTree, corolla, enumerate_trees, gamma, graft, mirror, parse_tree, schroeder, ungraft
from strategies import trees

T = parse_tree


def brute_force_trees(n):
    """All planar trees with n leaves, built from ordered partitions of the leaf count."""
    if n == 1:
        return {"|"}
    out = set()

    def splits(m):
        if m == 0:
            yield []
            return
        for first in range(1, m + 1):
            for rest in splits(m - first):
                yield [first] + rest

    for parts in splits(n):
        if len(parts) < 2:
            continue
        options = [[""]]
        for p in parts:
            options = [o + [s] for o in options for s in sorted(brute_force_trees(p))]
        out.update("(" + "".join(o) + ")" for o in options)
    return out


def test_graft_examples():
    assert graft([LEAF, LEAF]) == T("(||)")
    assert graft([LEAF]) is LEAF
    assert graft([T("(||)"), LEAF]) == T("((||)|)")


def test_graft_empty_rejected():
    with pytest.raises(ValueError):
        graft([])


def test_ungraft_examples():
    assert ungraft(T("(|(||))")) == [LEAF, T("(||)")]
    assert ungraft(LEAF) == [LEAF]
    assert ungraft(corolla(4)) == [LEAF] * 4


def test_enumerate_small():
    assert enumerate_trees(1) == [LEAF]
    assert {str(t) for t in enumerate_trees(3)} == {"(|(||))", "((||)|)", "(|||)"}
    assert len(enumerate_trees(5)) == 45


def test_enumerate_degree_zero():
    with pytest.raises(ValueError, match="no trees of degree 0"):
        enumerate_trees(0)


def test_enumerate_matches_brute_force():
    for n in range(1, 7):
        assert {str(t) for t in enumerate_trees(n)} == brute_force_trees(n)


def test_enumerate_sorted_and_distinct():
    for n in range(1, 7):
        ts = enumerate_trees(n)
        assert ts == sorted(ts)
        assert len(set(ts)) == len(ts)
        assert all(t.degree == n for t in ts)


def test_schroeder_values():
    assert [schroeder(n) for n in range(7)] == [1, 1, 3, 11, 45, 197, 903]
    assert schroeder(7) == len(enumerate_trees(8))


def test_counts_match_schroeder():
    for n in range(1, 9):
        assert len(enumerate_trees(n)) == schroeder(n - 1)


def test_mirror_examples():
    assert mirror(T("(|(||))")) == T("((||)|)")
    assert mirror(LEAF) is LEAF


def test_gamma_and_corolla():
    assert gamma(1, 1) == T("(||)")
    assert gamma(1, 2) == T("(|(||))")
    assert gamma(2, 2) == T("((||)(||))")
    assert corolla(1) is LEAF
    assert corolla(3) == T("(|||)")


@pytest.mark.parametrize("bad", ["", "(|)", "(||", "||", "(|x)", "()"])
def test_parse_rejects(bad):
    with pytest.raises(ValueError):
        parse_tree(bad)


@given(trees(1, 6))
def test_mirror_involution(t):
    assert mirror(mirror(t)) == t
    assert mirror(t).degree == t.degree


@given(trees(1, 6))
def test_parse_roundtrip(t):
    assert parse_tree(str(t)) == t


@given(trees(1, 6))
def test_internal_vertices_have_two_children(t):
    stack = [t]
    while stack:
        s = stack.pop()
        if not s.is_leaf:
            assert len(s.children) >= 2
            stack.extend(s.children)


@given(trees(2, 6))
def test_graft_ungraft_inverse(t):
    assert graft(ungraft(t)) == t


def test_unary_vertex_rejected():
    with pytest.raises(ValueError):
        PlanarTree((LEAF,))
