"""Small fixed digraphs used by the lemma conditions, and degree helpers."""
from __future__ import annotations

from functools import lru_cache
from itertools import combinations, product

from ..digraph import Digraph, canonical_form, complement, induced, loop_free_degree, reverse
from ..families import family, l_arrow, male, male_pair


def d(n: int, edges) -> Digraph:
    return Digraph.from_edges(n, edges)


def canon_set(graphs) -> frozenset[str]:
    return frozenset(canonical_form(g) for g in graphs)


@lru_cache(maxsize=None)
def forked_types() -> tuple[Digraph, ...]:
    """Six three-vertex types: two looped vertices into one plain vertex, or one looped
    vertex out to two plain vertices, with every choice of edges between the pair."""
    out = []
    for ab, ba in ((0, 0), (1, 0), (1, 1)):
        edges = [(0, 0), (1, 1), (0, 2), (1, 2)] + [(0, 1)] * ab + [(1, 0)] * ba
        out.append(d(3, edges))
    for ab, ba in ((0, 0), (1, 0), (1, 1)):
        edges = [(0, 0), (0, 1), (0, 2)] + [(1, 2)] * ab + [(2, 1)] * ba
        out.append(d(3, edges))
    return tuple(out)


def fan_out() -> Digraph:
    """One looped vertex pointing at two plain, mutually non-adjacent vertices."""
    return d(3, [(0, 0), (0, 1), (0, 2)])


@lru_cache(maxsize=None)
def asymmetric_ladders() -> frozenset[str]:
    """Looped a, b and plain c, d with a->c, b->d where the a-b edges differ from the c-d edges."""
    out = []
    for ab, ba, cd, dc in product((0, 1), repeat=4):
        if (ab, ba) == (cd, dc):
            continue
        edges = [(0, 0), (1, 1), (0, 2), (1, 3)]
        edges += [(0, 1)] * ab + [(1, 0)] * ba + [(2, 3)] * cd + [(3, 2)] * dc
        out.append(d(4, edges))
    return canon_set(out)


def looped_path3() -> Digraph:
    """Three looped vertices a <-> b <-> c with a, c non-adjacent."""
    return d(3, [(0, 0), (1, 1), (2, 2), (0, 1), (1, 0), (1, 2), (2, 1)])


def ladder() -> Digraph:
    """Looped a -> b, plain c -> d, and rungs a -> c, b -> d."""
    return d(4, [(0, 0), (1, 1), (0, 1), (2, 3), (0, 2), (1, 3)])


def mixed_pair_types() -> dict[str, Digraph]:
    """Two-vertex types with exactly one loop, named from the looped vertex x to the plain y."""
    return {
        "A": d(2, [(0, 0)]),
        "B": l_arrow(),
        "C": reverse(l_arrow()),
        "D": d(2, [(0, 0), (0, 1), (1, 0)]),
    }


def loop_mixed_forbidden() -> frozenset[str]:
    """L_->, its reverse, and the complement of L_1 + E_1."""
    return canon_set([l_arrow(), reverse(l_arrow()), complement(d(2, [(0, 0)]))])


# gadget neighbourhoods ---------------------------------------------------------


def tail_pattern(i: int, box) -> Digraph:
    """The five vertices of a tailed circle around its attachment point."""
    return induced(male(i, box), [i - 1, 0, 1, i, i + 1])


def link_pattern(i: int, box, j: int, tri, mode: str = "to") -> Digraph:
    """Attachment neighbourhoods of two tailed circles joined at their tips."""
    g = male_pair(i, box, j, tri, mode)
    o = i + 2
    return induced(g, [i - 1, 0, 1, i, i + 1, o + j - 1, o, o + 1, o + j, o + j + 1])


# degrees -------------------------------------------------------------------------


def high_degree_count(g: Digraph, q: int) -> int:
    return sum(1 for v in range(g.n) if loop_free_degree(g, v) >= q)


def degree_caps_ok(g: Digraph, caps) -> bool:
    """``caps``: pairs (p, q) meaning at most p vertices of loop-free degree >= q."""
    return all(high_degree_count(g, q) <= p for p, q in caps)


def subset_certificate(g: Digraph, p: int, q: int, size: int | None = None) -> bool:
    """An induced substructure on at most ``size`` (default (p+1)q) vertices with more
    than p vertices of loop-free degree >= q."""
    limit = min(g.n, (p + 1) * q if size is None else size)
    for k in range(1, limit + 1):
        for sub in combinations(range(g.n), k):
            if high_degree_count(induced(g, sub), q) > p:
                return True
    return False


def empty(n: int) -> Digraph:
    return family("E", n)
