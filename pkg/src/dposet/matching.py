"""Backtracking search for induced copies (substructures) and injective homomorphisms.

Candidate host vertices are carried as bitmasks and filtered by loop bit and
loop-free in/out degree, then by adjacency to already-placed vertices.
"""
from __future__ import annotations

from functools import lru_cache

from .digraph import Digraph, _members, canonical_form


def _degrees(g: Digraph) -> tuple[list[int], list[int]]:
    outs = [(r & ~(1 << i)).bit_count() for i, r in enumerate(g.rows)]
    ins = [(c & ~(1 << i)).bit_count() for i, c in enumerate(g.cols)]
    return outs, ins


def _search_order(p: Digraph) -> list[int]:
    # most constrained first: connectivity to placed vertices, then degree
    outs, ins = _degrees(p)
    deg = [o + i for o, i in zip(outs, ins)]
    nbr = [(p.rows[v] | p.cols[v]) & ~(1 << v) for v in range(p.n)]
    order: list[int] = []
    placed = 0
    remaining = set(range(p.n))
    while remaining:
        v = max(remaining, key=lambda u: ((nbr[u] & placed).bit_count(), deg[u], -u))
        order.append(v)
        placed |= 1 << v
        remaining.discard(v)
    return order


def find_map(pattern: Digraph, host: Digraph, induced: bool = True) -> dict[int, int] | None:
    """Injective map ``pattern -> host`` preserving edges (and non-edges when ``induced``)."""
    k, n = pattern.n, host.n
    if k > n:
        return None
    p_loops, h_loops = pattern.num_loops, host.num_loops
    if p_loops > h_loops:
        return None
    if induced and k - p_loops > n - h_loops:
        return None
    if not induced and pattern.num_edges > host.num_edges:
        return None

    p_out, p_in = _degrees(pattern)
    h_out, h_in = _degrees(host)
    h_loop_mask = host.loop_mask
    all_host = (1 << n) - 1
    order = _search_order(pattern)

    base = []
    for u in order:
        looped = pattern.has_loop(u)
        if induced:
            m = h_loop_mask if looped else all_host & ~h_loop_mask
        else:
            m = h_loop_mask if looped else all_host
        cand = 0
        for v in _members(m):
            if h_out[v] < p_out[u] or h_in[v] < p_in[u]:
                continue
            if induced and (n - 1 - h_out[v] < k - 1 - p_out[u] or n - 1 - h_in[v] < k - 1 - p_in[u]):
                continue
            cand |= 1 << v
        if not cand:
            return None
        base.append(cand)

    # constraints[d]: (earlier depth t, pattern edge u->w_t, pattern edge w_t->u)
    constraints = []
    for d, u in enumerate(order):
        cons = []
        for t in range(d):
            w = order[t]
            ob = (pattern.rows[u] >> w) & 1
            ib = (pattern.rows[w] >> u) & 1
            if induced or ob or ib:
                cons.append((t, ob, ib))
        constraints.append(cons)

    rows, cols = host.rows, host.cols
    image = [0] * k

    def extend(d: int, used: int) -> bool:
        if d == k:
            return True
        cand = base[d] & ~used
        for t, ob, ib in constraints[d]:
            hv = image[t]
            if induced:
                cand &= cols[hv] if ob else ~cols[hv]
                cand &= rows[hv] if ib else ~rows[hv]
            else:
                if ob:
                    cand &= cols[hv]
                if ib:
                    cand &= rows[hv]
            if not cand:
                return False
        while cand:
            low = cand & -cand
            image[d] = low.bit_length() - 1
            if extend(d + 1, used | low):
                return True
            cand ^= low
        return False

    if not extend(0, 0):
        return None
    return {order[d]: image[d] for d in range(k)}


@lru_cache(maxsize=1 << 16)
def _cached(pattern: Digraph, host: Digraph, induced: bool) -> bool:
    return find_map(pattern, host, induced) is not None


def is_substructure(g: Digraph, h: Digraph) -> bool:
    """``g`` is isomorphic to an induced substructure of ``h``."""
    return _cached(g, h, True)


def is_embeddable(g: Digraph, h: Digraph) -> bool:
    """An injective homomorphism ``g -> h`` exists."""
    return _cached(g, h, False)


def is_isomorphic(g: Digraph, h: Digraph) -> bool:
    if g.n != h.n or g.num_edges != h.num_edges or g.num_loops != h.num_loops:
        return False
    if g.n <= 7:
        return canonical_form(g) == canonical_form(h)
    return _cached(g, h, True)
