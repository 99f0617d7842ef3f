"""Named digraph families and the composite constructions built from them.

Vertex layouts are fixed so that downstream code (the decoder in particular)
can address the pieces of a construction by index; see :class:`SupportLayout`.
"""
from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Sequence

from .digraph import Digraph, disjoint_union, is_loop_free, is_loop_full, union_all
from .errors import BadCircle, BadSpec, EqualSizes, NotLoopFree, NotLoopFull, UnknownConstant

__all__ = [
    "family", "l_arrow", "arrow_link", "male", "male_pair", "circles",
    "AttachSpec", "SupportSpec", "attach", "edge_support", "default_support_spec",
    "SupportLayout", "named", "NAMED_PATTERN",
]


def family(kind: str, n: int) -> Digraph:
    if n < 1:
        raise ValueError(f"family size must be positive, got {n}")
    if kind == "E":
        return Digraph(n, [0] * n)
    if kind == "F":
        return Digraph(n, [(1 << n) - 1] * n)
    if kind == "L":
        return Digraph(n, [1 << i for i in range(n)])
    if kind == "I":
        return Digraph.from_edges(n, [(i, i + 1) for i in range(n - 1)])
    if kind == "O":
        if n < 3:
            raise BadCircle(f"circles need at least 3 vertices, got {n}")
        return Digraph.from_edges(n, [(i, (i + 1) % n) for i in range(n)])
    raise ValueError(f"unknown family {kind!r}")


def l_arrow() -> Digraph:
    return Digraph.from_edges(2, [(0, 0), (0, 1)])


def arrow_link(g: Digraph, direction: str = "full-to-free") -> Digraph:
    """``G -> l(G)`` (``full-to-free``) or ``l(G) -> G`` (``free-to-full``).

    The original copy occupies vertices ``0..n-1``, the loop-exchanged copy
    ``n..2n-1``, and vertex ``i`` is matched with ``n+i``. For ``free-to-full``
    the matching edges run from the looped copy ``n+i`` to ``i``.
    """
    n = g.n
    if direction == "full-to-free":
        if not is_loop_full(g):
            raise NotLoopFull("G -> l(G) needs a loop-full G")
    elif direction == "free-to-full":
        if not is_loop_free(g):
            raise NotLoopFree("l(G) -> G needs a loop-free G")
    else:
        raise ValueError(f"unknown direction {direction!r}")
    rows = [r for r in g.rows] + [(r ^ (1 << i)) << n for i, r in enumerate(g.rows)]
    for i in range(n):
        if direction == "full-to-free":
            rows[i] |= 1 << (n + i)
        else:
            rows[n + i] |= 1 << i
    return Digraph(2 * n, rows)


def male(i: int, box: bool | str = False) -> Digraph:
    """Circle ``O_i`` (vertices ``0..i-1``) with tail ``0 -> i -> i+1``; loop on ``i+1`` iff ``box``."""
    looped = _box(box)
    if i < 3:
        raise BadCircle(f"circles need at least 3 vertices, got {i}")
    edges = [(k, (k + 1) % i) for k in range(i)] + [(0, i), (i, i + 1)]
    if looped:
        edges.append((i + 1, i + 1))
    return Digraph.from_edges(i + 2, edges)


def _box(box) -> bool:
    if box in (True, "L", "l"):
        return True
    if box in (False, None, "", "0", "-", "∅"):
        return False
    raise ValueError(f"loop flag must be L or empty, not {box!r}")


def male_pair(i: int, box, j: int, tri, mode: str = "union") -> Digraph:
    """Two tailed circles; ``to`` adds ``u2 -> u2'``, ``bi`` adds both directions.

    The first gadget occupies ``0..i+1`` (tip ``i+1``), the second
    ``i+2..i+j+3`` (tip ``i+j+3``).
    """
    if i == j:
        raise EqualSizes(f"gadget circles must differ in size, both are {i}")
    g = disjoint_union(male(i, box), male(j, tri))
    if mode == "union":
        return g
    tip, tip2 = i + 1, i + j + 3
    rows = list(g.rows)
    if mode == "to":
        rows[tip] |= 1 << tip2
    elif mode == "bi":
        rows[tip] |= 1 << tip2
        rows[tip2] |= 1 << tip
    else:
        raise ValueError(f"mode must be union, to or bi, not {mode!r}")
    return Digraph(g.n, rows)


def circles(sizes: Sequence[int]) -> Digraph:
    sizes = list(sizes)
    if not sizes:
        raise BadCircle("need at least one circle")
    if len(set(sizes)) != len(sizes):
        raise BadCircle(f"circle sizes must be distinct: {sizes}")
    return union_all([family("O", k) for k in sizes])


# attachment ------------------------------------------------------------------


@dataclass(frozen=True)
class AttachSpec:
    """Circle sizes and the bijection ``alpha``: circle ``j`` points at vertex ``alpha[j]`` (0-based)."""

    circle_sizes: tuple[int, ...]
    alpha: tuple[int, ...]

    def __init__(self, circle_sizes, alpha=None):
        sizes = tuple(int(k) for k in circle_sizes)
        object.__setattr__(self, "circle_sizes", sizes)
        object.__setattr__(self, "alpha", tuple(range(len(sizes))) if alpha is None else tuple(alpha))

    def check(self, n: int) -> None:
        s = self.circle_sizes
        if any(a >= b for a, b in zip(s, s[1:])):
            raise BadSpec(f"circle sizes must be strictly increasing: {list(s)}")
        if any(k < 3 for k in s):
            raise BadSpec(f"circle sizes must be at least 3: {list(s)}")
        if len(s) != n:
            raise BadSpec(f"{n} vertices need {n} circles, got {len(s)}")
        if sorted(self.alpha) != list(range(n)):
            raise BadSpec(f"alpha {list(self.alpha)} is not a bijection onto the {n} vertices")


def _attach_rows(g_rows: list[int], n_g: int, sizes: Sequence[int], targets: Sequence[int]) -> list[int]:
    # layout: G vertices, then circles in order, then one pointer per circle
    rows = list(g_rows)
    starts = []
    offset = n_g
    for k in sizes:
        starts.append(offset)
        for t in range(k):
            rows.append(1 << (offset + (t + 1) % k))
        offset += k
    for j, start in enumerate(starts):
        w = offset + j
        rows[start] |= 1 << w
        rows.append(1 << targets[j])
    return rows


def attach(g: Digraph, spec: AttachSpec) -> Digraph:
    """``G <-alpha- O*``: circle ``j`` points through a fresh vertex ``w_j`` at ``alpha[j]``."""
    spec.check(g.n)
    rows = _attach_rows(list(g.rows), g.n, spec.circle_sizes, spec.alpha)
    return Digraph(len(rows), rows)


# edge support ----------------------------------------------------------------


@dataclass(frozen=True)
class SupportSpec:
    """Parameters of the edge-supporting construction.

    ``alpha[j]`` is the vertex carried by the circle of size ``l_sizes[j]``;
    ``s_assignment[k]`` is the index (into ``G.edges()``) of the edge whose
    support vertex is carried by the circle of size ``d_sizes[k]``.
    """

    l_sizes: tuple[int, ...]
    d_sizes: tuple[int, ...]
    alpha: tuple[int, ...]
    s_assignment: tuple[int, ...]

    def __init__(self, l_sizes, d_sizes, alpha=None, s_assignment=None):
        l_sizes = tuple(int(k) for k in l_sizes)
        d_sizes = tuple(int(k) for k in d_sizes)
        object.__setattr__(self, "l_sizes", l_sizes)
        object.__setattr__(self, "d_sizes", d_sizes)
        object.__setattr__(self, "alpha", tuple(range(len(l_sizes))) if alpha is None else tuple(alpha))
        object.__setattr__(
            self, "s_assignment",
            tuple(range(len(d_sizes))) if s_assignment is None else tuple(s_assignment),
        )

    def check(self, g: Digraph) -> None:
        n, r = g.n, g.num_edges
        ls, ds = self.l_sizes, self.d_sizes
        if len(ls) != n:
            raise BadSpec(f"{n} vertices need {n} vertex circles, got {len(ls)}")
        if any(a >= b for a, b in zip(ls, ls[1:])) or any(a >= b for a, b in zip(ds, ds[1:])):
            raise BadSpec("circle sizes must be strictly increasing")
        if ls[0] <= n * n + n:
            raise BadSpec(f"smallest vertex circle {ls[0]} must exceed n^2+n = {n * n + n}")
        if len(ds) != r:
            raise BadSpec(f"{r} edges need {r} support circles, got {len(ds)}")
        if ds and ds[0] <= ls[-1]:
            raise BadSpec(f"support circles must exceed the largest vertex circle {ls[-1]}")
        if sorted(self.alpha) != list(range(n)):
            raise BadSpec(f"alpha {list(self.alpha)} is not a bijection onto the vertices")
        if sorted(self.s_assignment) != list(range(r)):
            raise BadSpec(f"s {list(self.s_assignment)} is not a bijection onto the edges")


def default_support_spec(g: Digraph) -> SupportSpec:
    """Smallest admissible sizes, identity bijections."""
    n, r = g.n, g.num_edges
    base = n * n + n
    ls = list(range(base + 1, base + n + 1))
    ds = list(range(ls[-1] + 1, ls[-1] + r + 1))
    return SupportSpec(ls, ds)


@dataclass(frozen=True)
class SupportLayout:
    """Vertex indices of the pieces of ``edge_support(...).total``."""

    n: int
    edges: tuple[tuple[int, int], ...]
    vertex: tuple[int, ...]             # G vertex i
    support: tuple[int, ...]            # support vertex of edge e
    vertex_circle: tuple[tuple[int, ...], ...]   # circle carrying G vertex i
    vertex_pointer: tuple[int, ...]
    vertex_circle_size: tuple[int, ...]
    support_circle: tuple[tuple[int, ...], ...]  # circle carrying edge e's support vertex
    support_pointer: tuple[int, ...]
    support_circle_size: tuple[int, ...]
    size: int = field(default=0)


@dataclass(frozen=True)
class Supported:
    g_s: Digraph
    circles_s: Digraph
    total: Digraph
    layout: SupportLayout

    def __iter__(self):
        return iter((self.g_s, self.circles_s, self.total))


def edge_support(g: Digraph, spec: SupportSpec) -> Supported:
    """``(G <-alpha- O*)_s = G_s <-beta- O*_s``.

    Layout of ``total``: G vertices, support vertices (one per edge in
    ``g.edges()`` order), vertex circles, support circles, then one pointer
    per circle in the same order.
    """
    spec.check(g)
    n = g.n
    edges = g.edges()
    r = len(edges)
    m = n + r
    gs_rows = list(g.rows) + [0] * r
    for e, (a, b) in enumerate(edges):
        sv = n + e
        gs_rows[a] |= 1 << sv
        gs_rows[sv] |= 1 << b
    g_s = Digraph(m, gs_rows)

    sizes = list(spec.l_sizes) + list(spec.d_sizes)
    circles_s = circles(sizes)
    # beta: vertex circles -> alpha, support circles -> s
    targets = list(spec.alpha) + [n + e for e in spec.s_assignment]
    rows = _attach_rows(gs_rows, m, sizes, targets)
    total = Digraph(len(rows), rows)

    starts = []
    offset = m
    for k in sizes:
        starts.append(offset)
        offset += k
    ptr0 = offset
    circ = [tuple(range(s, s + k)) for s, k in zip(starts, sizes)]
    vertex_of_circle = {spec.alpha[j]: j for j in range(n)}
    edge_of_circle = {spec.s_assignment[k]: n + k for k in range(r)}
    layout = SupportLayout(
        n=n,
        edges=tuple(edges),
        vertex=tuple(range(n)),
        support=tuple(n + e for e in range(r)),
        vertex_circle=tuple(circ[vertex_of_circle[i]] for i in range(n)),
        vertex_pointer=tuple(ptr0 + vertex_of_circle[i] for i in range(n)),
        vertex_circle_size=tuple(sizes[vertex_of_circle[i]] for i in range(n)),
        support_circle=tuple(circ[edge_of_circle[e]] for e in range(r)),
        support_pointer=tuple(ptr0 + edge_of_circle[e] for e in range(r)),
        support_circle_size=tuple(sizes[edge_of_circle[e]] for e in range(r)),
        size=total.n,
    )
    return Supported(g_s, circles_s, total, layout)


# named constants -------------------------------------------------------------

NAMED_PATTERN = re.compile(r"^(?:([EFIOL])(\d+)|Larrow|male:(\d+):(0|L))$")


def named(name: str) -> Digraph:
    """Digraph for a vocabulary name: ``E3``, ``O4``, ``Larrow``, ``male:5:L``."""
    m = NAMED_PATTERN.match(name)
    if not m:
        raise UnknownConstant(f"unknown digraph name {name!r}")
    try:
        if m.group(1):
            return family(m.group(1), int(m.group(2)))
        if name == "Larrow":
            return l_arrow()
        return male(int(m.group(3)), m.group(4) == "L")
    except (BadCircle, ValueError) as exc:
        raise UnknownConstant(f"{name!r}: {exc}") from None
