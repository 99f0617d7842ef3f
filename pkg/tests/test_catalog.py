import json

import pytest

from dposet.catalog import (
    CACHE_ENV, build_catalog, cache_dir, enumerate_level, export, get_catalog, load_cache, save_cache,
)
from dposet.digraph import Digraph, canonical_form
from dposet.errors import CacheError, TooLarge
from dposet.families import family, l_arrow
from dposet.matching import is_embeddable, is_substructure
from oracles import all_matrices

# the ten 2-vertex boxes of the level-2 picture, by adjacency
E2 = Digraph.from_edges(2, [])
P = Digraph.from_edges(2, [(0, 1)])
E2P = Digraph.from_edges(2, [(0, 1), (1, 0)])
A = Digraph.from_edges(2, [(0, 0)])
B = l_arrow()
C = Digraph.from_edges(2, [(0, 0), (1, 0)])
D = Digraph.from_edges(2, [(0, 0), (0, 1), (1, 0)])
LL = family("L", 2)
Q = Digraph.from_edges(2, [(0, 0), (1, 1), (0, 1)])
LP = family("F", 2)


def test_level_sizes_small():
    assert [len(enumerate_level(n)) for n in (1, 2, 3)] == [2, 10, 104]
    for n in (1, 2, 3):
        assert set(enumerate_level(n).members) == {canonical_form(g) for g in all_matrices(n)}


def test_level_properties():
    lv = enumerate_level(3)
    assert list(lv.members) == sorted(set(lv.members))
    assert all(m.startswith("3:") for m in lv.members)
    with pytest.raises(TooLarge):
        enumerate_level(6)
    with pytest.raises(TooLarge):
        enumerate_level(5)


def test_level_two_boxes():
    boxes = [E2, P, E2P, A, B, C, D, LL, Q, LP]
    assert sorted(canonical_form(g) for g in boxes) == list(enumerate_level(2).members)


def test_sub_covers_at_level_two():
    cat = build_catalog(2)
    above = lambda low: {hi for lo, hi in cat.sub_covers if lo == low}
    assert len(cat.sub_covers) == 14
    assert above("1:0") == {canonical_form(g) for g in (E2, P, E2P, A, B, C, D)}
    assert above("1:1") == {canonical_form(g) for g in (A, B, C, D, LL, Q, LP)}


def test_sub_covers_equal_pairwise_computation():
    cat = get_catalog(3)
    pairwise = {
        (a, b) for a, ga in zip(cat.codes, cat.graphs) for b, gb in zip(cat.codes, cat.graphs)
        if gb.n == ga.n + 1 and is_substructure(ga, gb)
    }
    assert set(cat.sub_covers) == pairwise


def test_emb_covers():
    cat = get_catalog(3)
    graphs = dict(zip(cat.codes, cat.graphs))
    for lo, hi in cat.emb_covers:
        assert lo != hi and is_embeddable(graphs[lo], graphs[hi])
        assert graphs[hi].grade == graphs[lo].grade + 1


def test_export_levels_and_hasse():
    cat = get_catalog(2)
    doc = json.loads(export(cat, "levels"))
    assert doc["sizes"] == [2, 10]
    dot = export(cat, "hasse-sub", "dot")
    assert sum(1 for line in dot.splitlines() if "[level=" in line) == 12
    assert export(cat, "hasse-sub", "dot") == dot
    emb = json.loads(export(get_catalog(3), "hasse-emb", "json", 3))
    assert emb["order"] == "embeddability" and not emb["truncated"]
    assert json.loads(export(get_catalog(3), "hasse-emb", "json", 4))["truncated"]
    with pytest.raises(ValueError):
        export(cat, "levels", "xml")


def test_cache_round_trip(tmp_path, monkeypatch):
    cat = build_catalog(3)
    save_cache(cat, tmp_path)
    assert load_cache(tmp_path) == cat
    monkeypatch.setenv(CACHE_ENV, str(tmp_path / "env"))
    assert cache_dir() == tmp_path / "env"
    assert [len(lv) for lv in load_cache(tmp_path).levels] == [2, 10, 104]


def test_cache_errors(tmp_path):
    with pytest.raises(CacheError):
        load_cache(tmp_path)
    save_cache(build_catalog(2), tmp_path)
    path = tmp_path / "level2.txt"
    lines = path.read_text().splitlines()
    lines[3] = "2:01"
    path.write_text("\n".join(lines) + "\n")
    with pytest.raises(CacheError) as info:
        load_cache(tmp_path)
    assert info.value.line == 4
