"""Isomorphism-type catalogs, their Hasse diagrams, export and on-disk cache."""
from __future__ import annotations

import json
import os
from dataclasses import dataclass, field
from functools import cached_property
from pathlib import Path

from .digraph import Digraph, _members, canonical_form, induced
from .errors import BadGraph, CacheError, TooLarge

DEFAULT_MAX_N = 4
HARD_MAX_N = 5
CACHE_ENV = "DPOSET_CACHE_DIR"
DEFAULT_CACHE_DIR = "./.dposet-cache"


def _check_bound(n: int, allow_large: bool) -> None:
    limit = HARD_MAX_N if allow_large else DEFAULT_MAX_N
    if n < 1:
        raise ValueError(f"level must be positive, got {n}")
    if n > limit:
        hint = "" if allow_large else " (pass allow_large=True for 5)"
        raise TooLarge(f"level {n} exceeds the configured maximum {limit}{hint}")


@dataclass(frozen=True)
class Level:
    n: int
    members: tuple[str, ...]

    def __len__(self):
        return len(self.members)


def _augment(reps: list[Digraph], n: int) -> set[str]:
    # add vertex n-1 in every way: out-bits, in-bits, loop
    old = n - 1
    found = set()
    for g in reps:
        for out_bits in range(1 << old):
            for in_bits in range(1 << old):
                base = [r | (((in_bits >> i) & 1) << old) for i, r in enumerate(g.rows)]
                for loop in (0, 1):
                    rows = base + [out_bits | (loop << old)]
                    found.add(canonical_form(Digraph(n, rows)))
    return found


_level_memo: dict[int, Level] = {}


def enumerate_level(n: int, allow_large: bool = False) -> Level:
    """One canonical code per isomorphism class of ``n``-vertex digraphs, sorted."""
    _check_bound(n, allow_large)
    if n in _level_memo:
        return _level_memo[n]
    if n == 1:
        codes = {"1:0", "1:1"}
    else:
        prev = enumerate_level(n - 1, allow_large=True)
        codes = _augment([Digraph.from_code(c) for c in prev.members], n)
    level = Level(n, tuple(sorted(codes)))
    _level_memo[n] = level
    return level


@dataclass
class Catalog:
    max_n: int
    levels: tuple[Level, ...]
    sub_covers: tuple[tuple[str, str], ...]
    emb_covers: tuple[tuple[str, str], ...]

    # derived views; not part of equality

    @cached_property
    def codes(self) -> tuple[str, ...]:
        return tuple(c for lv in self.levels for c in lv.members)

    @cached_property
    def index(self) -> dict[str, int]:
        return {c: i for i, c in enumerate(self.codes)}

    @cached_property
    def graphs(self) -> tuple[Digraph, ...]:
        return tuple(Digraph.from_code(c) for c in self.codes)

    @cached_property
    def sizes(self) -> tuple[int, ...]:
        return tuple(g.n for g in self.graphs)

    @cached_property
    def sub_down(self) -> tuple[int, ...]:
        """Bitset over :attr:`codes` of all substructures of each member (itself included)."""
        return _down_sets(self, edges=False)

    @cached_property
    def emb_down(self) -> tuple[int, ...]:
        """Bitset over :attr:`codes` of all members embeddable into each member."""
        return _down_sets(self, edges=True)

    def level(self, n: int) -> Level:
        return self.levels[n - 1]

    def leq(self, a: str, b: str, order: str = "sub") -> bool:
        down = self.sub_down if order == "sub" else self.emb_down
        return bool((down[self.index[b]] >> self.index[a]) & 1)

    def restrict(self, max_n: int) -> Catalog:
        if max_n > self.max_n:
            raise TooLarge(f"catalog only reaches level {self.max_n}")
        keep = {c for lv in self.levels[:max_n] for c in lv.members}
        return Catalog(
            max_n,
            self.levels[:max_n],
            tuple(p for p in self.sub_covers if p[1] in keep),
            tuple(p for p in self.emb_covers if p[1] in keep),
        )


def _down_sets(cat: Catalog, edges: bool) -> tuple[int, ...]:
    index = cat.index
    memo: dict[int, int] = {}
    # members are stored level by level, and every deletion lands in a lower
    # grade, so processing in grade order makes each lookup a hit
    order = sorted(range(len(cat.codes)), key=lambda i: (cat.graphs[i].grade, i))
    for i in order:
        g = cat.graphs[i]
        down = 1 << i
        if g.n > 1:
            for v in range(g.n):
                sub = canonical_form(induced(g, [u for u in range(g.n) if u != v]))
                down |= memo[index[sub]]
        if edges:
            for a, b in g.edges():
                rows = list(g.rows)
                rows[a] &= ~(1 << b)
                down |= memo[index[canonical_form(Digraph(g.n, rows))]]
        memo[i] = down
    return tuple(memo[i] for i in range(len(cat.codes)))


def _sub_covers(levels: tuple[Level, ...]) -> list[tuple[str, str]]:
    from .digraph import one_vertex_deletions

    pairs = []
    for lv in levels[1:]:
        for code in lv.members:
            for low in one_vertex_deletions(Digraph.from_code(code)):
                pairs.append((low, code))
    return sorted(pairs)


def _transitive_reduction(cat: Catalog, down: tuple[int, ...]) -> list[tuple[str, str]]:
    codes = cat.codes
    pairs = []
    for i, d in enumerate(down):
        strict = d & ~(1 << i)
        shadow = 0
        for k in _members(strict):
            shadow |= down[k] & ~(1 << k)
        for k in _members(strict & ~shadow):
            pairs.append((codes[k], codes[i]))
    return sorted(pairs)


_catalog_memo: dict[int, Catalog] = {}


def build_catalog(max_n: int = DEFAULT_MAX_N, allow_large: bool = False) -> Catalog:
    _check_bound(max_n, allow_large)
    if max_n in _catalog_memo:
        return _catalog_memo[max_n]
    levels = tuple(enumerate_level(n, allow_large=True) for n in range(1, max_n + 1))
    cat = Catalog(max_n, levels, tuple(_sub_covers(levels)), ())
    cat.emb_covers = tuple(_transitive_reduction(cat, cat.emb_down))
    _catalog_memo[max_n] = cat
    return cat


# export ----------------------------------------------------------------------


def _label(code: str) -> str:
    return code


def export(catalog: Catalog, what: str, fmt: str = "json", max_level: int | None = None) -> str:
    """Deterministic text for ``levels``, ``hasse-sub`` or ``hasse-emb``.

    ``max_level`` keeps levels up to that bound: vertex count for the
    substructure order, vertices plus edges for the embeddability order.
    """
    if what == "levels":
        levels = catalog.levels if max_level is None else catalog.levels[:max_level]
        if fmt == "json":
            doc = {
                "kind": "levels",
                "max_n": len(levels),
                "sizes": [len(lv) for lv in levels],
                "levels": [{"n": lv.n, "members": list(lv.members)} for lv in levels],
            }
            return json.dumps(doc, indent=2) + "\n"
        if fmt == "dot":
            lines = ["digraph levels {"]
            for lv in levels:
                lines.append(f"  subgraph level{lv.n} {{ rank=same;")
                lines.extend(f'    "{c}";' for c in lv.members)
                lines.append("  }")
            lines.append("}")
            return "\n".join(lines) + "\n"
        raise ValueError(f"unknown format {fmt!r}")

    if what == "hasse-sub":
        top = catalog.max_n if max_level is None else min(max_level, catalog.max_n)
        nodes = [(c, lv.n) for lv in catalog.levels[:top] for c in lv.members]
        keep = {c for c, _ in nodes}
        edges = [p for p in catalog.sub_covers if p[1] in keep]
        header = {
            "order": "substructure",
            "grading": "vertices",
            "max_level": top,
            "truncated": False,
            "note": f"all isomorphism types with at most {top} vertices",
        }
    elif what == "hasse-emb":
        top = catalog.max_n if max_level is None else max_level
        graphs = dict(zip(catalog.codes, catalog.graphs))
        nodes = sorted(
            ((c, graphs[c].grade) for c in catalog.codes if graphs[c].grade <= top),
            key=lambda t: (t[1], t[0]),
        )
        keep = {c for c, _ in nodes}
        edges = [p for p in catalog.emb_covers if p[0] in keep and p[1] in keep]
        exact = min(top, catalog.max_n)
        header = {
            "order": "embeddability",
            "grading": "vertices+edges",
            "max_level": top,
            "truncated": top > catalog.max_n,
            "note": (
                f"computed from digraphs with at most {catalog.max_n} vertices; "
                f"complete through grade {exact}"
            ),
        }
    else:
        raise ValueError(f"unknown export {what!r}")

    if fmt == "json":
        doc = dict(header)
        doc["nodes"] = [{"code": c, "level": lvl} for c, lvl in nodes]
        doc["covers"] = [list(p) for p in edges]
        return json.dumps(doc, indent=2) + "\n"
    if fmt == "dot":
        lines = [f"// {header['order']} order, graded by {header['grading']}; {header['note']}"]
        lines.append("digraph hasse {")
        lines.append("  rankdir=BT;")
        for c, lvl in nodes:
            lines.append(f'  "{c}" [level={lvl}];')
        for lo, hi in edges:
            lines.append(f'  "{lo}" -> "{hi}";')
        lines.append("}")
        return "\n".join(lines) + "\n"
    raise ValueError(f"unknown format {fmt!r}")


# cache -----------------------------------------------------------------------


def cache_dir() -> Path:
    return Path(os.environ.get(CACHE_ENV, DEFAULT_CACHE_DIR))


def save_cache(catalog: Catalog, directory=None) -> Path:
    d = Path(directory) if directory is not None else cache_dir()
    d.mkdir(parents=True, exist_ok=True)
    for stale in d.glob("level*.txt"):
        stale.unlink()
    for lv in catalog.levels:
        (d / f"level{lv.n}.txt").write_text("".join(c + "\n" for c in lv.members))
    (d / "sub_covers.txt").write_text("".join(f"{a}\t{b}\n" for a, b in catalog.sub_covers))
    (d / "emb_covers.txt").write_text("".join(f"{a}\t{b}\n" for a, b in catalog.emb_covers))
    return d


def _read_code(path: Path, lineno: int, text: str, n: int | None = None) -> str:
    try:
        g = Digraph.from_code(text)
    except BadGraph as exc:
        raise CacheError(str(exc), path, lineno) from None
    if n is not None and g.n != n:
        raise CacheError(f"code {text!r} does not have {n} vertices", path, lineno)
    return text


def load_cache(directory=None) -> Catalog:
    d = Path(directory) if directory is not None else cache_dir()
    if not d.is_dir():
        raise CacheError("cache directory does not exist", d)
    levels = []
    n = 1
    while (d / f"level{n}.txt").exists():
        path = d / f"level{n}.txt"
        members = []
        for lineno, line in enumerate(path.read_text().split("\n")[:-1], start=1):
            members.append(_read_code(path, lineno, line, n))
            if len(members) > 1 and members[-2] >= members[-1]:
                raise CacheError("members are not sorted and unique", path, lineno)
        if not members:
            raise CacheError("empty level file", path)
        levels.append(Level(n, tuple(members)))
        n += 1
    if not levels:
        raise CacheError("no level files found", d)

    def pairs(name):
        path = d / name
        if not path.exists():
            raise CacheError("missing cover file", path)
        out = []
        for lineno, line in enumerate(path.read_text().split("\n")[:-1], start=1):
            parts = line.split("\t")
            if len(parts) != 2:
                raise CacheError("expected two tab-separated codes", path, lineno)
            out.append((_read_code(path, lineno, parts[0]), _read_code(path, lineno, parts[1])))
        return tuple(out)

    return Catalog(len(levels), tuple(levels), pairs("sub_covers.txt"), pairs("emb_covers.txt"))


def get_catalog(max_n: int = DEFAULT_MAX_N, use_cache: bool = False, allow_large: bool = False) -> Catalog:
    """Catalog up to ``max_n``, read from / written to the cache directory when asked."""
    _check_bound(max_n, allow_large)
    if max_n in _catalog_memo:
        return _catalog_memo[max_n]
    if use_cache:
        try:
            cached = load_cache()
        except CacheError:
            cached = None
        if cached is not None and cached.max_n >= max_n:
            cat = cached.restrict(max_n)
            _catalog_memo[max_n] = cat
            return cat
    cat = build_catalog(max_n, allow_large=allow_large)
    if use_cache:
        save_cache(cat)
    return cat
