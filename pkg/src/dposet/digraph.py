"""Finite digraphs with loops, stored as row bitmasks.

Vertices are ``0..n-1`` internally. Bit ``j`` of ``rows[i]`` is the edge
``i -> j``; bit ``i`` of ``rows[i]`` is the loop on ``i``. Textual formats
(DGF files, reports) number vertices from 1.
"""
from __future__ import annotations

from functools import lru_cache
from itertools import combinations
from typing import Iterable, Sequence

from .errors import BadGraph, BadSize, EmptySubset, NoDeletion, TooLarge

MAX_VERTICES = 128


def _members(mask: int):
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


class Digraph:
    """Immutable digraph on vertices ``0..n-1``.

    Equality and hashing are by labeled adjacency, not by isomorphism type;
    use :func:`canonical_form` or :func:`~dposet.matching.is_isomorphic`
    for the latter.
    """

    __slots__ = ("n", "rows", "cols", "_hash")

    def __init__(self, n: int, rows: Sequence[int]):
        if n < 1:
            raise BadGraph("a digraph needs at least one vertex")
        if n > MAX_VERTICES:
            raise TooLarge(f"{n} vertices exceeds the capacity of {MAX_VERTICES}")
        rows = tuple(int(r) for r in rows)
        if len(rows) != n:
            raise BadGraph(f"expected {n} rows, got {len(rows)}")
        full = (1 << n) - 1
        for i, r in enumerate(rows):
            if r < 0 or r & ~full:
                raise BadGraph(f"row {i + 1} has entries outside the vertex range")
        cols = [0] * n
        for i, r in enumerate(rows):
            for j in _members(r):
                cols[j] |= 1 << i
        object.__setattr__(self, "n", n)
        object.__setattr__(self, "rows", rows)
        object.__setattr__(self, "cols", tuple(cols))
        object.__setattr__(self, "_hash", hash((n, rows)))

    def __setattr__(self, name, value):
        raise AttributeError("Digraph is immutable")

    def __eq__(self, other):
        if not isinstance(other, Digraph):
            return NotImplemented
        return self.n == other.n and self.rows == other.rows

    def __hash__(self):
        return self._hash

    def __repr__(self):
        return f"Digraph({self.n}, edges={[(i + 1, j + 1) for i, j in self.edges()]})"

    def __reduce__(self):
        return (Digraph, (self.n, self.rows))

    # construction -------------------------------------------------------

    @classmethod
    def from_edges(cls, n: int, edges: Iterable[tuple[int, int]]) -> Digraph:
        rows = [0] * n
        for i, j in edges:
            if not (0 <= i < n and 0 <= j < n):
                raise BadGraph(f"edge ({i}, {j}) out of range for n={n}")
            rows[i] |= 1 << j
        return cls(n, rows)

    @classmethod
    def from_matrix(cls, matrix: Sequence[Sequence[int] | str]) -> Digraph:
        n = len(matrix)
        rows = []
        for i, line in enumerate(matrix):
            if len(line) != n:
                raise BadGraph(f"row {i + 1} has length {len(line)}, expected {n}")
            r = 0
            for j, x in enumerate(line):
                if x in (1, True, "1"):
                    r |= 1 << j
                elif x not in (0, False, "0"):
                    raise BadGraph(f"entry ({i + 1}, {j + 1}) is not 0/1: {x!r}")
            rows.append(r)
        return cls(n, rows)

    @classmethod
    def from_code(cls, code: str) -> Digraph:
        """Inverse of the ``"<n>:<bits>"`` text form (any labeling, not just canonical)."""
        head, sep, bits = code.partition(":")
        if not sep or not head.isdigit():
            raise BadGraph(f"malformed code {code!r}")
        n = int(head)
        if n < 1 or len(bits) != n * n or set(bits) - {"0", "1"}:
            raise BadGraph(f"malformed code {code!r}")
        return cls.from_matrix([bits[i * n:(i + 1) * n] for i in range(n)])

    # queries ------------------------------------------------------------

    def has_edge(self, i: int, j: int) -> bool:
        return bool((self.rows[i] >> j) & 1)

    def has_loop(self, i: int) -> bool:
        return bool((self.rows[i] >> i) & 1)

    @property
    def loop_mask(self) -> int:
        m = 0
        for i, r in enumerate(self.rows):
            if (r >> i) & 1:
                m |= 1 << i
        return m

    @property
    def num_loops(self) -> int:
        return self.loop_mask.bit_count()

    @property
    def num_edges(self) -> int:
        return sum(r.bit_count() for r in self.rows)

    @property
    def grade(self) -> int:
        """Level in the embeddability order: vertices plus edges."""
        return self.n + self.num_edges

    def edges(self) -> list[tuple[int, int]]:
        """All edges, loops included, in row-major order."""
        return [(i, j) for i, r in enumerate(self.rows) for j in range(self.n) if (r >> j) & 1]

    def matrix_bits(self) -> str:
        n = self.n
        return "".join(format(r, f"0{n}b")[::-1] for r in self.rows)

    def code(self) -> str:
        """Text form of this labeled adjacency (not canonical)."""
        return f"{self.n}:{self.matrix_bits()}"

    def relabel(self, perm: Sequence[int]) -> Digraph:
        """Digraph whose vertex ``k`` is this digraph's vertex ``perm[k]``."""
        n = self.n
        pos = [0] * n
        for k, v in enumerate(perm):
            pos[v] = k
        rows = [0] * n
        for k, v in enumerate(perm):
            r = 0
            for j in _members(self.rows[v]):
                r |= 1 << pos[j]
            rows[k] = r
        return Digraph(n, rows)

    def to_dgf(self) -> str:
        return f"{self.n}\n" + "".join(
            format(r, f"0{self.n}b")[::-1] + "\n" for r in self.rows
        )

    @classmethod
    def from_dgf(cls, text: str) -> Digraph:
        lines = text.split("\n")
        if not text.endswith("\n"):
            raise BadGraph("DGF text must be newline-terminated")
        lines = lines[:-1]
        if not lines or not lines[0].isdigit():
            raise BadGraph("first DGF line must be the decimal vertex count")
        n = int(lines[0])
        body = lines[1:]
        if len(body) != n:
            raise BadGraph(f"expected {n} matrix lines, got {len(body)}")
        for k, line in enumerate(body, start=2):
            if len(line) != n or set(line) - {"0", "1"}:
                raise BadGraph(f"line {k}: expected {n} characters from {{0,1}}")
        return cls.from_matrix(body)


def read_dgf(path) -> Digraph:
    with open(path, encoding="ascii") as fh:
        return Digraph.from_dgf(fh.read())


# canonical form -------------------------------------------------------------


def _twin_representatives(g: Digraph) -> list[int]:
    # u, v are twins when the transposition (u v) is an automorphism
    n, rows, cols = g.n, g.rows, g.cols
    rep = list(range(n))
    for v in range(n):
        if rep[v] != v:
            continue
        for u in range(v + 1, n):
            if rep[u] != u:
                continue
            pair = (1 << u) | (1 << v)
            if ((rows[u] >> u) & 1) != ((rows[v] >> v) & 1):
                continue
            if ((rows[u] >> v) & 1) != ((rows[v] >> u) & 1):
                continue
            if rows[u] & ~pair != rows[v] & ~pair or cols[u] & ~pair != cols[v] & ~pair:
                continue
            rep[u] = v
    return rep


def _canonical_search(g: Digraph) -> tuple[int, tuple[int, ...]]:
    """Row-by-row search for the permutation minimising the row-major bit string.

    Returns the minimal matrix as an integer (first bit most significant) and
    one permutation attaining it.
    """
    n, rows = g.n, g.rows
    twin = _twin_representatives(g)
    best: list[int] | None = None
    best_perm: tuple[int, ...] = ()
    cur: list[int] = []
    perm: list[int] = []

    def row_value(v: int, cells: list[int]) -> int:
        r = rows[v]
        val = 0
        for p in perm:
            val = (val << 1) | ((r >> p) & 1)
        val = (val << 1) | ((r >> v) & 1)
        for idx, cell in enumerate(cells):
            if idx == 0:
                cell &= ~(1 << v)
            s = cell.bit_count()
            if not s:
                continue
            t = (r & cell).bit_count()
            val = (val << s) | ((1 << t) - 1)
        return val

    # automorphisms found when a leaf ties the best one; used to skip branches
    # that are images of explored ones under the stabiliser of the current prefix
    autos: list[list[int]] = []

    def orbit_root(parent: list[int], v: int) -> int:
        while parent[v] != v:
            parent[v] = parent[parent[v]]
            v = parent[v]
        return v

    def stabiliser_orbits(k: int) -> list[int]:
        parent = list(range(n))
        for a in autos:
            if all(a[perm[t]] == perm[t] for t in range(k)):
                for v in range(n):
                    ra, rb = orbit_root(parent, v), orbit_root(parent, a[v])
                    if ra != rb:
                        parent[ra] = rb
        return parent

    def dfs(cells: list[int]) -> None:
        nonlocal best, best_perm
        k = len(perm)
        if k == n:
            if best is None or cur < best:
                best = cur.copy()
                best_perm = tuple(perm)
            elif cur == best:
                a = [0] * n
                for t in range(n):
                    a[best_perm[t]] = perm[t]
                autos.append(a)
            return
        seen = set()
        scored = []
        for v in _members(cells[0]):
            t = twin[v]
            if t in seen:
                continue
            seen.add(t)
            scored.append((row_value(v, cells), v))
        m = min(s for s, _ in scored)
        if best is not None:
            prefix = best[:k]
            if cur > prefix or (cur == prefix and m > best[k]):
                return
        explored: list[int] = []
        seen_autos = -1
        parent: list[int] = []
        for s, v in scored:
            if s != m:
                continue
            if explored:
                if len(autos) != seen_autos:
                    parent = stabiliser_orbits(k)
                    seen_autos = len(autos)
                rv = orbit_root(parent, v)
                if any(orbit_root(parent, u) == rv for u in explored):
                    continue
            explored.append(v)
            r = rows[v]
            new_cells = []
            for idx, cell in enumerate(cells):
                if idx == 0:
                    cell &= ~(1 << v)
                lo, hi = cell & ~r, cell & r
                if lo:
                    new_cells.append(lo)
                if hi:
                    new_cells.append(hi)
            perm.append(v)
            cur.append(s)
            dfs(new_cells)
            perm.pop()
            cur.pop()

    dfs([(1 << n) - 1])
    assert best is not None
    total = 0
    for r in best:
        total = (total << n) | r
    return total, best_perm


@lru_cache(maxsize=1 << 18)
def canonical_form(g: Digraph) -> str:
    """``"<n>:<bits>"`` for the lexicographically least adjacency matrix of ``g``."""
    n = g.n
    total, _ = _canonical_search(g)
    return f"{n}:{format(total, f'0{n * n}b')}"


def canonical_labeling(g: Digraph) -> tuple[int, ...]:
    """A permutation ``p`` with ``g.relabel(p).code() == canonical_form(g)``."""
    return _canonical_search(g)[1]


def canonical_digraph(g: Digraph) -> Digraph:
    return Digraph.from_code(canonical_form(g))


# transforms -----------------------------------------------------------------


def induced(g: Digraph, subset: Iterable[int]) -> Digraph:
    verts = sorted(set(subset))
    if not verts:
        raise EmptySubset("induced substructure needs a nonempty vertex set")
    for v in verts:
        if not 0 <= v < g.n:
            raise BadGraph(f"vertex {v} out of range")
    pos = {v: k for k, v in enumerate(verts)}
    rows = []
    for v in verts:
        r = 0
        for j in _members(g.rows[v]):
            k = pos.get(j)
            if k is not None:
                r |= 1 << k
        rows.append(r)
    return Digraph(len(verts), rows)


def induced_mask(g: Digraph, mask: int) -> Digraph:
    return induced(g, _members(mask))


def one_vertex_deletions(g: Digraph) -> set[str]:
    if g.n < 2:
        raise NoDeletion("a one-vertex digraph has no nonempty deletion")
    return {canonical_form(induced(g, [u for u in range(g.n) if u != v])) for v in range(g.n)}


def disjoint_union(g: Digraph, h: Digraph) -> Digraph:
    n = g.n + h.n
    if n > MAX_VERTICES:
        raise TooLarge(f"disjoint union would have {n} vertices")
    return Digraph(n, list(g.rows) + [r << g.n for r in h.rows])


def union_all(parts: Sequence[Digraph]) -> Digraph:
    out = parts[0]
    for p in parts[1:]:
        out = disjoint_union(out, p)
    return out


def loop_exchange(g: Digraph) -> Digraph:
    return Digraph(g.n, [r ^ (1 << i) for i, r in enumerate(g.rows)])


def reverse(g: Digraph) -> Digraph:
    return Digraph(g.n, g.cols)


def complement(g: Digraph) -> Digraph:
    full = (1 << g.n) - 1
    return Digraph(g.n, [~r & full for r in g.rows])


_UNARY = {"loop-exchange": loop_exchange, "reverse": reverse, "complement": complement}


def unary_transform(g: Digraph, kind: str) -> Digraph:
    try:
        return _UNARY[kind](g)
    except KeyError:
        raise ValueError(f"unknown transform {kind!r}; expected one of {sorted(_UNARY)}") from None


def loop_part(g: Digraph, which: str) -> Digraph | None:
    """Induced substructure on the looped (``"full"``) or unlooped (``"free"``) vertices."""
    loops = g.loop_mask
    if which == "full":
        mask = loops
    elif which == "free":
        mask = ((1 << g.n) - 1) & ~loops
    else:
        raise ValueError(f"which must be 'full' or 'free', not {which!r}")
    return induced_mask(g, mask) if mask else None


def is_loop_full(g: Digraph) -> bool:
    return g.num_loops == g.n


def is_loop_free(g: Digraph) -> bool:
    return g.num_loops == 0


def out_degree(g: Digraph, v: int) -> int:
    return (g.rows[v] & ~(1 << v)).bit_count()


def in_degree(g: Digraph, v: int) -> int:
    return (g.cols[v] & ~(1 << v)).bit_count()


def loop_free_degree(g: Digraph, v: int) -> int:
    if not 0 <= v < g.n:
        raise BadGraph(f"vertex {v} out of range")
    return out_degree(g, v) + in_degree(g, v)


def wcc_masks(g: Digraph) -> list[int]:
    """Vertex masks of the weakly connected components, ordered by least vertex."""
    seen = 0
    out = []
    for s in range(g.n):
        if (seen >> s) & 1:
            continue
        comp = frontier = 1 << s
        while frontier:
            nxt = 0
            for v in _members(frontier):
                nxt |= g.rows[v] | g.cols[v]
            frontier = nxt & ~comp
            comp |= frontier
        seen |= comp
        out.append(comp)
    return out


def wccs(g: Digraph) -> list[Digraph]:
    return [induced_mask(g, m) for m in wcc_masks(g)]


def substructure_types(g: Digraph, k: int) -> set[str]:
    if not 1 <= k <= g.n:
        raise BadSize(f"size {k} outside 1..{g.n}")
    return {canonical_form(induced(g, s)) for s in combinations(range(g.n), k)}


def _is_line(g: Digraph) -> bool:
    # I_m: vertices v_0 -> v_1 -> ... -> v_{m-1}, nothing else
    if g.num_loops or g.num_edges != g.n - 1:
        return False
    starts = [v for v in range(g.n) if not g.cols[v]]
    if len(starts) != 1:
        return False
    v, seen = starts[0], 1 << starts[0]
    for _ in range(g.n - 1):
        r = g.rows[v]
        if r.bit_count() != 1 or r & seen:
            return False
        v = r.bit_length() - 1
        seen |= r
    return seen == (1 << g.n) - 1


def _is_circle(g: Digraph) -> bool:
    if g.n < 3 or g.num_loops or g.num_edges != g.n:
        return False
    if any(r.bit_count() != 1 for r in g.rows) or any(c.bit_count() != 1 for c in g.cols):
        return False
    v, steps = 0, 0
    while True:
        v = g.rows[v].bit_length() - 1
        steps += 1
        if v == 0:
            return steps == g.n


def is_line(g: Digraph) -> bool:
    return _is_line(g)


def is_circle(g: Digraph) -> bool:
    return _is_circle(g)


def is_IO(g: Digraph) -> bool:
    """True iff every weakly connected component is a line or a circle."""
    return all(_is_line(c) or _is_circle(c) for c in wccs(g))
