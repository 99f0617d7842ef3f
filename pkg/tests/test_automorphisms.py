import random

import pytest

from dposet.automorphisms import (
    IDENTITY, LocalRule, all_permutations, apply, closure, compose, generators, inverse,
    parse_permutation, perm_name, pi_rule, rule_of_generator, verify_automorphism, verify_structure,
)
from dposet.catalog import get_catalog
from dposet.digraph import Digraph, loop_exchange, reverse
from dposet.errors import BadPermutation
from dposet.families import family, l_arrow
from dposet.matching import is_isomorphic

EDGE = Digraph.from_edges(2, [(0, 1)])
TWO_CYCLE = Digraph.from_edges(2, [(0, 1), (1, 0)])


def test_generator_examples():
    phi1, phi2, phi4 = (rule_of_generator(f"phi{i}") for i in (1, 2, 4))
    assert apply(phi1, family("E", 2)) == family("L", 2)
    assert apply(phi1, l_arrow()) == Digraph.from_edges(2, [(1, 1), (0, 1)])
    assert apply(phi2, family("E", 2)) == TWO_CYCLE
    assert apply(phi2, EDGE) == EDGE
    assert is_isomorphic(apply(phi4, EDGE), reverse(EDGE))
    assert apply(phi4, TWO_CYCLE) == TWO_CYCLE


def test_pi_rule_examples():
    swap_bc = pi_rule(parse_permutation("(BC)"))
    assert is_isomorphic(apply(swap_bc, l_arrow()), Digraph.from_edges(2, [(0, 0), (1, 0)]))
    assert apply(pi_rule(parse_permutation("()")), l_arrow()) == l_arrow()
    ad = pi_rule(parse_permutation("DBCA"))
    assert apply(ad, family("F", 2)) == family("F", 2)
    assert is_isomorphic(apply(ad, Digraph.from_edges(2, [(0, 0)])), Digraph.from_edges(2, [(0, 0), (0, 1), (1, 0)]))


def test_parse_permutation():
    assert perm_name(parse_permutation("(AB)(CD)")) == "BADC"
    assert perm_name(parse_permutation("(ABC)")) == "BCAD"
    assert perm_name(parse_permutation("BACD")) == "BACD"
    for bad in ("(AA)", "(AB)(BC)", "ABCE", "AABC", "(AE)"):
        with pytest.raises(BadPermutation):
            parse_permutation(bad)
    with pytest.raises(BadPermutation):
        rule_of_generator("pi:(AE)")
    with pytest.raises(ValueError):
        rule_of_generator("phi9")


def test_apply_matches_named_transforms_on_level_three():
    phi = {i: rule_of_generator(f"phi{i}") for i in range(1, 6)}
    rev = compose(compose(phi[4], phi[5]), pi_rule(parse_permutation("(BC)")))
    for g in get_catalog(3).graphs:
        assert apply(phi[1], g) == loop_exchange(g)
        assert apply(rev, g) == reverse(g)
        # phi2 and phi3 toggle "no edge" <-> "2-cycle" between equally looped vertices
        both = compose(phi[2], phi[3])
        for i in range(g.n):
            for j in range(i + 1, g.n):
                h = apply(both, g)
                same_loops = g.has_loop(i) == g.has_loop(j)
                symmetric = g.has_edge(i, j) == g.has_edge(j, i)
                if same_loops and symmetric:
                    assert h.has_edge(i, j) != g.has_edge(i, j) and h.has_edge(j, i) != g.has_edge(j, i)
                else:
                    assert (h.has_edge(i, j), h.has_edge(j, i)) == (g.has_edge(i, j), g.has_edge(j, i))


def test_closure_orders():
    gens = generators()
    assert len(gens) == 29
    assert len(closure([rule_of_generator("phi1")])) == 2
    assert len(closure([pi_rule(p) for p in all_permutations()])) == 24
    full = closure(gens)
    assert len(full) == 768
    assert len(closure(gens[1:])) == 384
    assert IDENTITY in full
    for r in full:
        assert r.is_valid()


def test_compose_and_inverse():
    rng = random.Random(3)
    full = sorted(closure(generators()), key=LocalRule.key)
    graphs = get_catalog(3).graphs
    for _ in range(40):
        a, b = rng.choice(full), rng.choice(full)
        g = rng.choice(graphs)
        assert apply(compose(a, b), g) == apply(b, apply(a, g))
        assert apply(inverse(a), apply(a, g)) == g
        assert compose(a, inverse(a)).key() == IDENTITY.key()


def test_every_generator_is_an_automorphism_at_level_three():
    cat = get_catalog(3)
    for r in generators():
        rep = verify_automorphism(r, 3, cat)
        assert rep["status"] == "pass", rep


def test_negative_controls():
    # exchanging the empty pair with the one-way edge is not swap-equivariant
    pmap = list(range(16))
    pmap[0], pmap[4] = 4, 0
    bad = LocalRule.unchecked((0, 1), pmap, "bad")
    assert not bad.is_valid()
    assert verify_automorphism(bad, 3)["status"] == "fail"
    with pytest.raises(ValueError):
        LocalRule((0, 1), tuple(pmap))
    # loop bits inconsistent with vmap
    with pytest.raises(ValueError):
        LocalRule((1, 0), tuple(range(16)))


def test_verify_structure():
    rep = verify_structure()
    assert rep["status"] == "pass", [c for c in rep["checks"] if c["status"] != "pass"]
    names = {c["check"] for c in rep["checks"]}
    assert {"closure-order-768", "subgroup-order-384", "semidirect-bijection"} <= names
