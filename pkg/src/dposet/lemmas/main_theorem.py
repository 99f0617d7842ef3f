"""Decoding substructures of the edge-supported construct back to digraphs below G."""
from __future__ import annotations

import itertools
import random
import time

from ..catalog import enumerate_level
from ..digraph import Digraph, canonical_form, induced
from ..errors import BadParams, BadSubset
from ..families import SupportSpec, default_support_spec, edge_support, male, male_pair
from ..matching import is_embeddable, is_substructure
from .report import LemmaReport

LOOP_RULE = (
    "a decoded vertex keeps its loop iff its looped tail pattern is present and is "
    "two-way linked to the tail of some support circle (size above every vertex circle)"
)


def _relation(x: Digraph, a: int, ba: bool, b: int, bb: bool) -> str | None:
    """Which single link joins the tips of circles ``a`` and ``b`` inside ``x``."""
    found = []
    if is_substructure(male_pair(a, ba, b, bb, "union"), x):
        found.append("none")
    if is_substructure(male_pair(a, ba, b, bb, "to"), x):
        found.append("to")
    if is_substructure(male_pair(b, bb, a, ba, "to"), x):
        found.append("from")
    if is_substructure(male_pair(a, ba, b, bb, "bi"), x):
        found.append("both")
    return found[0] if len(found) == 1 else None


def _supported(x: Digraph, a: int, ba: bool, b: int, bb: bool, ks) -> bool:
    return any(is_substructure(male_pair(a, ba, k, False, "to"), x)
               and is_substructure(male_pair(k, False, b, bb, "to"), x) for k in ks)


def decode(subset, g: Digraph, spec: SupportSpec | None = None) -> Digraph | None:
    """The digraph ``G_X`` read off the induced substructure of the construct on ``subset``.

    Returns ``None`` when no vertex survives or the substructure matches no
    consistent case.
    """
    spec = default_support_spec(g) if spec is None else spec
    total = edge_support(g, spec).total
    keep = sorted(set(subset))
    if any(not isinstance(v, int) or not 0 <= v < total.n for v in keep):
        raise BadSubset(f"subset must contain vertices 0..{total.n - 1}")
    if not keep:
        return None
    x = induced(total, keep)
    ls = list(spec.l_sizes)
    ks = [k for k in spec.d_sizes if k > max(ls)]
    # circle size carrying G vertex v
    size_of = {spec.alpha[t]: ls[t] for t in range(g.n)}

    alive: list[tuple[int, int, bool]] = []  # (G vertex, circle size, tip loop)
    for v in range(g.n):
        size = size_of[v]
        boxes = [b for b in (False, True) if is_substructure(male(size, b), x)]
        if len(boxes) > 1:
            return None
        if boxes:
            alive.append((v, size, boxes[0]))
    if not alive:
        return None

    rows = [0] * len(alive)
    for a, (_, size, box) in enumerate(alive):
        if box and any(is_substructure(male_pair(size, True, k, False, "bi"), x) for k in ks):
            rows[a] |= 1 << a
    for (a, (_, sa, ba)), (b, (_, sb, bb)) in itertools.combinations(enumerate(alive), 2):
        rel = _relation(x, sa, ba, sb, bb)
        if rel is None:
            return None
        fwd = rel in ("to", "both") and _supported(x, sa, ba, sb, bb, ks)
        back = rel in ("from", "both") and _supported(x, sb, bb, sa, ba, ks)
        if fwd:
            rows[a] |= 1 << b
        if back:
            rows[b] |= 1 << a
    return Digraph(len(alive), rows)


def _units(g: Digraph, spec: SupportSpec):
    s = edge_support(g, spec)
    lay = s.layout
    edge_unit = [
        {lay.support[e], lay.support_pointer[e], *lay.support_circle[e]} for e in range(len(lay.edges))
    ]
    vertex_unit = []
    for v in range(g.n):
        unit = {v, lay.vertex_pointer[v], *lay.vertex_circle[v]}
        for e, (a, b) in enumerate(lay.edges):
            if v in (a, b):
                unit |= edge_unit[e]
        vertex_unit.append(unit)
    return s, vertex_unit, edge_unit


def forward_witness(g: Digraph, spec: SupportSpec, keep_vertices, keep_edges) -> list[int]:
    """Vertex subset of the construct encoding the substructure (S, F) of G."""
    s, vertex_unit, edge_unit = _units(g, spec)
    removed: set[int] = set()
    for v in range(g.n):
        if v not in keep_vertices:
            removed |= vertex_unit[v]
    for e, edge in enumerate(s.layout.edges):
        if edge not in keep_edges:
            removed |= edge_unit[e]
    return [v for v in range(s.total.n) if v not in removed]


def verify_main_theorem(g: Digraph, spec: SupportSpec | None = None, samples: int = 1000,
                        seed: int = 0, max_vertices: int = 2) -> LemmaReport:
    if g.n > max_vertices:
        raise BadParams(f"main-theorem check is limited to {max_vertices} vertices, got {g.n}")
    spec = default_support_spec(g) if spec is None else spec
    spec.check(g)
    params = {"graph": canonical_form(g), "l_sizes": list(spec.l_sizes), "d_sizes": list(spec.d_sizes),
              "samples": samples, "seed": seed}
    rep = LemmaReport("main-theorem", "targeted", params)
    start = time.perf_counter()
    s, vertex_unit, edge_unit = _units(g, spec)
    total = s.total

    # (c) the whole construct decodes to G
    full = decode(range(total.n), g, spec)
    rep.check(full == g, canonical_form(g), note=f"full construct decodes to {full}")

    # (a) completeness over all (S, F)
    edges = s.layout.edges
    reached = set()
    witnesses = 0
    for r in range(1, g.n + 1):
        for keep in itertools.combinations(range(g.n), r):
            inner = [e for e in edges if e[0] in keep and e[1] in keep]
            for t in range(len(inner) + 1):
                for f in itertools.combinations(inner, t):
                    pos = {v: p for p, v in enumerate(keep)}
                    h = Digraph.from_edges(r, [(pos[a], pos[b]) for a, b in f])
                    got = decode(forward_witness(g, spec, set(keep), set(f)), g, spec)
                    witnesses += 1
                    rep.check(got == h, canonical_form(h), note=f"witness for {keep}, {list(f)} decodes to {got}")
                    if got is not None:
                        reached.add(canonical_form(got))
    expected = {c for k in range(1, g.n + 1) for c in enumerate_level(k).members
                if is_embeddable(Digraph.from_code(c), g)}
    rep.check(reached == expected, *sorted(reached ^ expected), note="reached types differ from {H : H <= G}")

    # (b) soundness on seeded random substructures
    rng = random.Random(seed)
    units = vertex_unit + edge_unit
    defined = undefined = 0
    for _ in range(samples):
        if rng.random() < 0.5:
            removed = set().union(*[u for u in units if rng.random() < 0.3]) if units else set()
            for _ in range(rng.randint(0, 2)):
                removed.add(rng.randrange(total.n))
        else:
            p = rng.uniform(0.0, 0.2)
            removed = {v for v in range(total.n) if rng.random() < p}
        subset = [v for v in range(total.n) if v not in removed]
        got = decode(subset, g, spec)
        if got is None:
            undefined += 1
            continue
        defined += 1
        rep.check(is_embeddable(got, g), canonical_form(got), note=f"decoded {got} is not below G")

    rep.details.update(
        completeness_set=sorted(expected), reached=sorted(reached), witnesses=witnesses,
        samples_defined=defined, samples_undefined=undefined, loop_rule=LOOP_RULE,
    )
    rep.elapsed = time.perf_counter() - start
    return rep
