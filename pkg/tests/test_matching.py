from hypothesis import given, settings
from hypothesis import strategies as st

from dposet.digraph import Digraph
from dposet.families import circles, male, male_pair
from dposet.matching import find_map, is_embeddable, is_substructure
from oracles import brute_emb, brute_sub


@st.composite
def pairs(draw):
    def one(max_n):
        n = draw(st.integers(1, max_n))
        return Digraph(n, draw(st.lists(st.integers(0, (1 << n) - 1), min_size=n, max_size=n)))
    return one(4), one(6)


@settings(max_examples=400, deadline=None)
@given(pairs())
def test_matcher_agrees_with_all_injections(pair):
    g, h = pair
    assert is_substructure(g, h) == brute_sub(g, h)
    assert is_embeddable(g, h) == brute_emb(g, h)


@settings(max_examples=100, deadline=None)
@given(pairs())
def test_found_map_is_a_witness(pair):
    g, h = pair
    m = find_map(g, h, induced=True)
    if m is not None:
        assert len(set(m.values())) == g.n
        for a in range(g.n):
            for b in range(g.n):
                assert g.has_edge(a, b) == h.has_edge(m[a], m[b])


def test_gadgets_inside_large_hosts():
    host = male_pair(13, True, 14, False, "bi")
    assert is_substructure(male(13, True), host)
    assert is_substructure(male(14, False), host)
    assert not is_substructure(male_pair(13, True, 14, False, "to"), host)
    assert is_embeddable(male_pair(13, True, 14, False, "to"), host)
    assert not is_substructure(circles([5]), circles([6, 7, 8]))
