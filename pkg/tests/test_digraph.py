import itertools
import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from dposet.catalog import get_catalog
from dposet.digraph import (
    MAX_VERTICES, Digraph, canonical_form, canonical_labeling, complement, disjoint_union, induced,
    is_IO, loop_exchange, loop_free_degree, loop_part, one_vertex_deletions, read_dgf, reverse,
    substructure_types, unary_transform, wccs,
)
from dposet.errors import BadGraph, BadSize, EmptySubset, NoDeletion, TooLarge
from dposet.families import circles, family, l_arrow
from dposet.matching import is_embeddable, is_isomorphic, is_substructure
from oracles import brute_canon

E, F, I, L, O = (lambda n, k=k: family(k, n) for k in "EFILO")
EDGE = Digraph.from_edges(2, [(0, 1)])
TWO_CYCLE = Digraph.from_edges(2, [(0, 1), (1, 0)])


@st.composite
def digraphs(draw, max_n=6):
    n = draw(st.integers(1, max_n))
    rows = draw(st.lists(st.integers(0, (1 << n) - 1), min_size=n, max_size=n))
    return Digraph(n, rows)


# canonical form ---------------------------------------------------------------------


def test_canonical_examples():
    assert canonical_form(E(2)) == "2:0000"
    assert canonical_form(L(1)) == "1:1"
    assert canonical_form(EDGE) == "2:0010"
    assert canonical_form(Digraph.from_edges(2, [(1, 0)])) == "2:0010"


@settings(max_examples=300, deadline=None)
@given(digraphs(max_n=6))
def test_canonical_form_matches_brute_force(g):
    assert canonical_form(g) == brute_canon(g)


@settings(max_examples=200, deadline=None)
@given(digraphs(max_n=8), st.randoms(use_true_random=False))
def test_canonical_form_is_invariant_under_relabeling(g, rng):
    perm = list(range(g.n))
    rng.shuffle(perm)
    assert canonical_form(g.relabel(perm)) == canonical_form(g)
    assert g.relabel(canonical_labeling(g)).code() == canonical_form(g)


def test_canonical_form_on_random_catalog_members():
    rng = random.Random(7)
    graphs = get_catalog(4).graphs
    for _ in range(100):
        g = rng.choice(graphs)
        perm = list(range(g.n))
        rng.shuffle(perm)
        assert canonical_form(g.relabel(perm)) == canonical_form(g)


def test_canonical_form_on_symmetric_unions_is_fast():
    # unions of circles have large automorphism groups; orbit pruning keeps this quick
    code = canonical_form(circles([3, 4, 5, 6]))
    assert code.startswith("18:")
    assert canonical_form(disjoint_union(O(6), circles([3, 4, 5]))) == code


# isomorphism and orders -------------------------------------------------------------


def test_isomorphism_examples():
    assert is_isomorphic(O(3), reverse(O(3)))
    assert not is_isomorphic(E(2), L(2))
    g = Digraph.from_edges(3, [(0, 1), (1, 1), (2, 0)])
    assert is_isomorphic(g, g)


def test_substructure_and_embeddability_examples():
    assert is_substructure(I(2), O(3))
    assert not is_substructure(E(2), O(3))
    assert is_embeddable(E(2), O(3))
    assert not is_embeddable(TWO_CYCLE, EDGE)
    assert is_embeddable(I(2), TWO_CYCLE)
    assert not is_substructure(I(2), TWO_CYCLE)
    for g in (O(3), L(2), TWO_CYCLE):
        assert is_substructure(g, g) and is_embeddable(g, g)


def test_order_laws_on_level_three():
    cat = get_catalog(3)
    graphs = cat.graphs
    n = len(graphs)
    sub = [[is_substructure(a, b) for b in graphs] for a in graphs]
    emb = [[is_embeddable(a, b) for b in graphs] for a in graphs]
    for rel in (sub, emb):
        for a in range(n):
            assert rel[a][a]
            for b in range(n):
                if a != b and rel[a][b]:
                    assert not rel[b][a]
        for a, b, c in itertools.product(range(n), repeat=3):
            if rel[a][b] and rel[b][c]:
                assert rel[a][c]
    for a in range(n):
        for b in range(n):
            if sub[a][b]:
                assert emb[a][b]


def test_transforms_preserve_substructure_order():
    cat = get_catalog(3)
    graphs = cat.graphs
    c_breaks_emb = False
    for a in graphs:
        for b in graphs:
            s = is_substructure(a, b)
            for kind in ("loop-exchange", "reverse", "complement"):
                assert is_substructure(unary_transform(a, kind), unary_transform(b, kind)) == s
            e = is_embeddable(a, b)
            assert is_embeddable(reverse(a), reverse(b)) == e
            if e and not is_embeddable(complement(a), complement(b)):
                c_breaks_emb = True
    assert c_breaks_emb


@settings(max_examples=100, deadline=None)
@given(digraphs())
def test_transforms_are_involutions(g):
    for kind in ("loop-exchange", "reverse", "complement"):
        assert unary_transform(unary_transform(g, kind), kind) == g


def test_transform_examples():
    assert loop_exchange(L(1)) == E(1)
    assert is_isomorphic(reverse(EDGE), EDGE)
    assert complement(E(2)) == F(2)
    with pytest.raises(ValueError):
        unary_transform(E(1), "mirror")


# construction and queries -----------------------------------------------------------


def test_induced():
    assert is_isomorphic(induced(O(3), [0, 1]), EDGE)
    g = Digraph.from_edges(3, [(0, 1), (1, 1), (2, 0)])
    assert induced(g, range(3)) == g
    assert induced(L(3), [1]) == L(1)
    with pytest.raises(EmptySubset):
        induced(g, [])


def test_one_vertex_deletions():
    assert one_vertex_deletions(O(3)) == {canonical_form(EDGE)}
    assert one_vertex_deletions(E(3)) == {canonical_form(E(2))}
    a = disjoint_union(L(1), E(1))
    assert one_vertex_deletions(a) == {canonical_form(E(1)), canonical_form(L(1))}
    with pytest.raises(NoDeletion):
        one_vertex_deletions(E(1))
    for n in range(3, 9):
        assert one_vertex_deletions(O(n)) == {canonical_form(I(n - 1))}


def test_disjoint_union():
    assert disjoint_union(E(1), E(1)) == E(2)
    u = disjoint_union(O(3), O(4))
    assert u.n == 7 and u.num_edges == 7
    rng = random.Random(3)
    for _ in range(50):
        a = Digraph(2, [rng.getrandbits(2), rng.getrandbits(2)])
        b = Digraph(3, [rng.getrandbits(3) for _ in range(3)])
        assert canonical_form(disjoint_union(a, b)) == canonical_form(disjoint_union(b, a))
    with pytest.raises(TooLarge):
        disjoint_union(E(MAX_VERTICES), E(1))


def test_loop_parts():
    a = disjoint_union(L(1), E(1))
    assert loop_part(a, "full") == L(1)
    assert loop_part(E(3), "full") is None
    assert loop_part(l_arrow(), "free") == E(1)


def test_loop_free_degree():
    assert loop_free_degree(I(3), 1) == 2
    assert loop_free_degree(L(1), 0) == 0
    assert all(loop_free_degree(F(3), v) == 4 for v in range(3))
    with pytest.raises(BadGraph):
        loop_free_degree(L(1), 1)


def test_wccs():
    assert sorted(c.n for c in wccs(disjoint_union(O(3), O(4)))) == [3, 4]
    assert [canonical_form(c) for c in wccs(E(3))] == ["1:0"] * 3
    assert [canonical_form(c) for c in wccs(l_arrow())] == [canonical_form(l_arrow())]


def test_substructure_types():
    expected = {canonical_form(E(3)), canonical_form(disjoint_union(I(2), E(1))), canonical_form(I(3))}
    assert substructure_types(O(6), 3) == expected
    g = Digraph.from_edges(3, [(0, 1), (1, 1), (2, 0)])
    assert substructure_types(g, 3) == {canonical_form(g)}
    assert substructure_types(F(2), 1) == {canonical_form(L(1))}
    with pytest.raises(BadSize):
        substructure_types(F(2), 3)


@settings(max_examples=100, deadline=None)
@given(digraphs(max_n=6), st.integers(1, 6))
def test_substructure_types_subset_by_subset(g, k):
    if k > g.n:
        return
    direct = {canonical_form(induced(g, s)) for s in itertools.combinations(range(g.n), k)}
    assert substructure_types(g, k) == direct


def test_is_IO():
    assert is_IO(disjoint_union(I(3), O(4)))
    assert not is_IO(L(1))
    assert not is_IO(TWO_CYCLE)
    assert is_IO(circles([3, 4, 5]))


# DGF ---------------------------------------------------------------------------------


def test_dgf_round_trip(tmp_path):
    g = Digraph.from_edges(3, [(0, 1), (1, 1), (2, 0)])
    text = g.to_dgf()
    assert text == "3\n010\n010\n100\n"
    assert Digraph.from_dgf(text) == g
    path = tmp_path / "g.dgf"
    path.write_text(text)
    assert read_dgf(path) == g


@pytest.mark.parametrize("text", ["2\n01\n00", "x\n0\n", "2\n01\n", "2\n012\n00\n", "2\n0a\n00\n"])
def test_dgf_errors(text):
    with pytest.raises(BadGraph):
        Digraph.from_dgf(text)
