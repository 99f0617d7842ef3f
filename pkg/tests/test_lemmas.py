import pytest

from dposet.digraph import Digraph, canonical_form
from dposet.errors import BadParams, BadSubset, UnknownLemma
from dposet.families import SupportSpec, edge_support, named
from dposet.lemmas import (
    REGISTRY, decode, default_run, forward_witness, graph_arg, verify_lemma, verify_main_theorem,
    verify_targeted,
)
from dposet.lemmas.patterns import subset_certificate
from dposet.lemmas.report import TARGETED, UNIVERSE

SLOW_DEFAULTS = {"arrow-rel", "multiplication"}


@pytest.mark.parametrize("lemma_id", [k for k in REGISTRY if k not in SLOW_DEFAULTS])
def test_registry_default_passes(lemma_id):
    rep = default_run(lemma_id)
    assert rep.status == "pass", rep.to_json()
    assert rep.mode == REGISTRY[lemma_id]


@pytest.mark.slow
@pytest.mark.parametrize("lemma_id", sorted(SLOW_DEFAULTS))
def test_slow_registry_default_passes(lemma_id):
    rep = default_run(lemma_id)
    assert rep.status == "pass", rep.to_json()


def test_registry_covers_both_modes():
    assert len(REGISTRY) == 19
    assert set(REGISTRY.values()) == {UNIVERSE, TARGETED}


def test_unknown_and_misused_ids():
    with pytest.raises(UnknownLemma):
        verify_lemma("no-such-lemma")
    with pytest.raises(BadParams):
        verify_lemma("male-rel")
    with pytest.raises(BadParams):
        verify_targeted("io-def")
    with pytest.raises(BadParams):
        verify_targeted("male-rel", {"colour": 1})
    with pytest.raises(BadParams):
        verify_targeted("male-rel", {"i": 5, "j": 5})
    with pytest.raises(BadParams):
        verify_targeted("main-theorem", {"graph": "E3"})
    with pytest.raises(BadParams):
        verify_targeted("main-theorem", {"graph": "L1", "l_sizes": [2], "d_sizes": [4]})
    with pytest.raises(BadParams):
        graph_arg("2:01")


def test_margin_leaving_nothing_is_skipped():
    rep = verify_lemma("io-def", universe_bound=1, margin=1)
    assert rep.status == "skipped" and rep.reason


def test_universe_lemmas_at_other_bounds():
    for lemma_id in ("io-def", "io-char", "loop-parts"):
        assert verify_lemma(lemma_id, universe_bound=3).passed


# decoding ---------------------------------------------------------------------------

SPEC = SupportSpec([3], [4])


def test_decode_examples():
    g = named("L1")
    lay = edge_support(g, SPEC).layout
    everything = range(lay.size)
    assert decode(everything, g, SPEC) == g
    assert decode([v for v in everything if v != lay.support[0]], g, SPEC) == named("E1")
    gone = {lay.vertex_pointer[0], *lay.vertex_circle[0]}
    assert decode([v for v in everything if v not in gone], g, SPEC) is None
    assert decode([], g, SPEC) is None
    with pytest.raises(BadSubset):
        decode([0, lay.size], g, SPEC)


def test_forward_witnesses_decode_to_their_substructure():
    g = Digraph.from_edges(2, [(0, 1), (1, 1)])
    spec = SupportSpec([7, 8], [9, 10])
    assert decode(forward_witness(g, spec, {0, 1}, {(0, 1), (1, 1)}), g, spec) == g
    assert decode(forward_witness(g, spec, {0, 1}, set()), g, spec) == named("E2")
    assert decode(forward_witness(g, spec, {1}, {(1, 1)}), g, spec) == named("L1")


def test_main_theorem_on_two_cycle():
    rep = verify_main_theorem(Digraph.from_edges(2, [(0, 1), (1, 0)]), samples=100)
    assert rep.passed, rep.to_json()
    assert set(rep.details["reached"]) == set(rep.details["completeness_set"])
    assert len(rep.details["reached"]) == 4


# recorded findings ------------------------------------------------------------------


@pytest.mark.slow
def test_male_uniqueness_fails_one_size_beyond_the_default_scope():
    rep = verify_targeted("male-rel", {"uniqueness_max": 7})
    assert rep.status == "fail"
    assert all(code.startswith("7:") for ce in rep.counterexamples for code in ce)


def test_certificate_size_finding():
    star = Digraph.from_edges(5, [(0, k) for k in range(1, 5)])
    assert not subset_certificate(star, 0, 4)
    assert subset_certificate(star, 0, 4, size=5)
    rep = verify_lemma("certificate")
    assert rep.details["star_counterexample"]["stated_size_finds_certificate"] is False


def test_gn_part_details():
    rep = verify_targeted("gn-part")
    assert rep.passed
    d = rep.details
    assert d["nonempty_X_reading_mismatches"] > 0
