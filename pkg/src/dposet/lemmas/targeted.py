"""Lemmas checked on constructed witnesses, with exhaustive uniqueness search where
the argument claims uniqueness on few vertices."""
from __future__ import annotations

import itertools
from functools import lru_cache

from ..catalog import enumerate_level, get_catalog
from ..digraph import (
    Digraph, canonical_form, disjoint_union, induced, is_IO, is_loop_free, is_loop_full,
    loop_exchange, loop_part, reverse, substructure_types, union_all, wccs,
)
from ..errors import BadParams, BadSpec, EqualSizes
from ..families import (
    AttachSpec, SupportSpec, arrow_link, attach, circles, default_support_spec, edge_support,
    family, l_arrow, male, male_pair,
)
from ..matching import is_embeddable, is_substructure
from .patterns import (
    asymmetric_ladders, canon_set, degree_caps_ok, fan_out, forked_types, ladder,
    link_pattern, looped_path3, loop_mixed_forbidden, mixed_pair_types, tail_pattern,
)
from .report import LemmaReport

sub = is_substructure


def E(n):
    return family("E", n)


def L(n):
    return family("L", n)


def F(n):
    return family("F", n)


def _tag(g: Digraph) -> str:
    """Report label: canonical code for small digraphs, the labeled code for hosts
    too large and symmetric for a quick exact canonical form."""
    return canonical_form(g) if g.n <= 12 else g.code()


def _failed(conds: dict[str, bool]) -> list[str]:
    return [name for name, ok in conds.items() if not ok]


def _loop_full_part_is(z: Digraph, x: Digraph) -> bool:
    p = loop_part(z, "full")
    return p is not None and canonical_form(p) == canonical_form(x)


def _loop_free_part_is(z: Digraph, y: Digraph) -> bool:
    p = loop_part(z, "free")
    return p is not None and canonical_form(p) == canonical_form(y)


def _none_below(patterns, host: Digraph) -> bool:
    return not any(sub(p, host) for p in patterns)


def _types_avoid(host: Digraph, k: int, codes: frozenset[str]) -> bool:
    return host.n < k or not (substructure_types(host, k) & codes)


def _loop_free_labeled(m: int):
    pairs = [(a, b) for a in range(m) for b in range(m) if a != b]
    for bits in range(1 << len(pairs)):
        yield Digraph.from_edges(m, [pairs[t] for t in range(len(pairs)) if bits >> t & 1])


# arrow-rel ------------------------------------------------------------------------


def arrow_conditions(x: Digraph, y: Digraph, z: Digraph) -> list[str]:
    mixed = mixed_pair_types()
    return _failed({
        "parts": _loop_full_part_is(z, x) and _loop_free_part_is(z, y),
        "no-extra-plain": not sub(disjoint_union(x, E(1)), z),
        "no-extra-looped": not sub(disjoint_union(y, L(1)), z),
        "mixed-pairs": _types_avoid(z, 2, canon_set([mixed["C"], mixed["D"]])),
        "no-forks": _none_below(forked_types(), z),
        "symmetric-ladders": _types_avoid(z, 4, asymmetric_ladders()),
    })


def arrow_rel(rep: LemmaReport, max_n: int = 3, budget_bits: int = 14) -> None:
    searched = 0
    for n in range(1, max_n + 1):
        for code in enumerate_level(n).members:
            g0 = Digraph.from_code(code)
            if not is_loop_free(g0):
                continue
            g = loop_exchange(g0)  # loop-full
            z = arrow_link(g, "full-to-free")
            failed = arrow_conditions(g, loop_exchange(g), z)
            rep.check(not failed, canonical_form(g), canonical_form(z), note=f"construction fails {failed}")
            # uniqueness: every Z with loop-full part G whose conditions hold is G -> l(G)
            target = canonical_form(z)
            for m in range(max(1, n - 1), n + 2):
                free_bits = m * (m - 1) + n * m
                ys = list(_loop_free_labeled(m)) if free_bits <= budget_bits else (
                    [loop_exchange(g)] if m == n else [])
                for y in ys:
                    for cross in range(1 << (n * m)):
                        rows = list(g.rows) + [r << n for r in y.rows]
                        for a in range(n):
                            for b in range(m):
                                if cross >> (a * m + b) & 1:
                                    rows[a] |= 1 << (n + b)
                        cand = Digraph(n + m, rows)
                        searched += 1
                        if arrow_conditions(g, y, cand):
                            continue
                        rep.check(canonical_form(cand) == target, canonical_form(g), canonical_form(cand),
                                  note="another digraph satisfies the arrow conditions")
    rep.details.update(
        candidates_searched=searched,
        note="cross pairs range over no edge or looped->plain; the other mixed types are excluded by a listed condition",
    )


# addition ------------------------------------------------------------------------


def addition_conditions(x: Digraph, n: int, m: int) -> tuple[list[str], int | None]:
    free = loop_part(x, "free")
    two = substructure_types(x, 2) if x.n >= 2 else set()
    edge_types = {c for c in two if Digraph.from_code(c).num_edges - Digraph.from_code(c).num_loops > 0}
    i = free.n if free is not None and free.num_edges == 0 else None
    failed = _failed({
        "E_n+L_m": sub(disjoint_union(E(n), L(m)), x),
        "L_m->E_m": sub(arrow_link(L(m)), x),
        "no-fan": not sub(fan_out(), x),
        "E_n+1+L_m": not sub(disjoint_union(E(n + 1), L(m)), x),
        "pairs": edge_types <= {canonical_form(l_arrow())},
        "loop-full-part": _loop_full_part_is(x, L(m)),
        "loop-free-part": i is not None,
    })
    return failed, i


def addition(rep: LemmaReport, n: int = 2, m: int = 3, extra: int = 2) -> None:
    if n < 1 or m < 1:
        raise BadParams("addition needs n, m >= 1")
    x = disjoint_union(E(n), arrow_link(L(m)))
    failed, i = addition_conditions(x, n, m)
    rep.check(not failed, canonical_form(x), note=f"construction fails {failed}")
    rep.check(i == n + m, canonical_form(x), note=f"loop-free part E_{i}, expected E_{n + m}")
    # uniqueness: looped part L_m, plain part E_i, each looped vertex with at most one
    # plain out-neighbour (two would form the forbidden fan)
    found = set()
    searched = 0
    for size in range(1, n + m + extra + 1):
        for f in itertools.product(range(size + 1), repeat=m):
            rows = [1 << a for a in range(m)] + [0] * size
            for a, t in enumerate(f):
                if t < size:
                    rows[a] |= 1 << (m + t)
            cand = Digraph(m + size, rows)
            searched += 1
            bad, i2 = addition_conditions(cand, n, m)
            if not bad:
                found.add((canonical_form(cand), i2))
    rep.check(found == {(canonical_form(x), n + m)}, *sorted(c for c, _ in found),
              note=f"satisfying digraphs: {sorted(found)}")
    rep.details.update(max_loop_free_E=i, candidates_searched=searched, satisfying=len(found))


# multiplication ------------------------------------------------------------------


def multiplication_conditions(x: Digraph, n: int, m: int) -> list[str]:
    return _failed({
        "reflexive": not sub(E(1), x),
        "symmetric": not sub(loop_exchange(family("I", 2)), x),
        "transitive": not sub(looped_path3(), x),
        "classes": sub(L(n), x) and not sub(L(n + 1), x),
        "class-size": sub(F(m), x) and not sub(F(m + 1), x),
    })


def multiplication(rep: LemmaReport, n: int = 2, m: int = 2, extra: int = 2) -> None:
    if n < 1 or m < 1:
        raise BadParams("multiplication needs n, m >= 1")
    found: dict[str, Digraph] = {}
    searched = 0
    for k in range(1, n * m + extra + 1):
        pairs = list(itertools.combinations(range(k), 2))
        for bits in range(1 << len(pairs)):
            rows = [1 << a for a in range(k)]
            for t, (a, b) in enumerate(pairs):
                if bits >> t & 1:
                    rows[a] |= 1 << b
                    rows[b] |= 1 << a
            x = Digraph(k, rows)
            searched += 1
            if not multiplication_conditions(x, n, m):
                found.setdefault(canonical_form(x), x)
    maximal = [c for c, x in found.items()
               if not any(c2 != c and sub(x, x2) for c2, x2 in found.items())]
    expected = canonical_form(union_all([F(m)] * n))
    rep.check(maximal == [expected], expected, *maximal, note=f"maximal satisfying digraphs {maximal}")
    sizes = sorted({found[c].n for c in maximal})
    rep.check(sizes == [n * m], expected, *maximal, note=f"maximal size {sizes}")
    rep.details.update(maximal_size=sizes[0] if len(sizes) == 1 else sizes,
                       satisfying=len(found), candidates_searched=searched)


# io-union ------------------------------------------------------------------------


@lru_cache(maxsize=None)
def _io_union_forbidden(g2: Digraph) -> tuple[Digraph, ...]:
    size = g2.n + 2
    lg2 = loop_exchange(g2)
    out = []
    for code in get_catalog(max(size, 1)).level(size).members:
        y = Digraph.from_code(code)
        if (sub(lg2, y) and sub(family("I", 2), y) and sub(l_arrow(), y)
                and not sub(ladder(), y)):
            out.append(y)
    return tuple(out)


def io_union_conditions(x: Digraph, g1: Digraph, g2: Digraph) -> list[str]:
    lg2 = loop_exchange(g2)
    return _failed({
        "size": x.n == g1.n + 2 * g2.n,
        "G1+l(G2)": sub(disjoint_union(g1, lg2), x),
        "l(G2)->G2": sub(arrow_link(g2, "free-to-full"), x),
        "no-2-cycle": not sub(loop_exchange(F(2)), x),
        "no-cross-edges": _none_below(_io_union_forbidden(g2), x),
    })


def io_union(rep: LemmaReport, max_n: int = 2) -> None:
    io_types = [Digraph.from_code(c) for k in range(1, max_n + 1)
                for c in enumerate_level(k).members if is_IO(Digraph.from_code(c))]
    perturbed = 0
    for g1, g2 in itertools.product(io_types, repeat=2):
        x = disjoint_union(g1, arrow_link(g2, "free-to-full"))
        failed = io_union_conditions(x, g1, g2)
        tag = (canonical_form(g1), canonical_form(g2))
        rep.check(not failed, *tag, note=f"construction fails {failed}")
        rep.check(canonical_form(loop_part(x, "free")) == canonical_form(disjoint_union(g1, g2)), *tag,
                  note="loop-free part is not G1 + G2")
        # perturbations: cross edges between the G1 copy and the plain G2 copy
        n1 = g1.n
        cross = [(a, n1 + b) for a in range(n1) for b in range(g2.n)]
        cross += [(n1 + b, a) for a in range(n1) for b in range(g2.n)]
        for r in (1, 2):
            for extra in itertools.combinations(cross, r):
                rows = list(x.rows)
                for a, b in extra:
                    rows[a] |= 1 << b
                bad = Digraph(x.n, rows)
                perturbed += 1
                rep.check(bool(io_union_conditions(bad, g1, g2)), *tag, canonical_form(bad),
                          note="perturbed digraph passes all conditions")
    rep.details.update(pairs=len(io_types) ** 2, perturbations=perturbed)


# counted-attach ------------------------------------------------------------------


def _circle_sizes(o_star: Digraph) -> list[int]:
    return sorted(c.n for c in wccs(o_star))


def counted_attach_conditions(o_star: Digraph, x: Digraph) -> list[str]:
    sizes = _circle_sizes(o_star)
    i = len(sizes)
    forbidden_mixed = loop_mixed_forbidden()
    y_size = o_star.n + 1
    bad_loop_free = bad_looped = False
    if x.n >= y_size:
        for keep in itertools.combinations(range(x.n), y_size):
            y = induced(x, keep)
            if not sub(o_star, y):
                continue
            if y.num_loops == 0:
                if not is_IO(y):
                    bad_loop_free = True
            elif substructure_types(y, 2) & forbidden_mixed:
                bad_looped = True
            if bad_loop_free and bad_looped:
                break
    return _failed({
        "size": x.n == o_star.n + i,
        "smallest-circle": sizes[0] >= i + 1,
        "smallest-circle-strict": sizes[0] > i * i + i,
        "contains-O*": sub(o_star, x),
        "no-loop-free-non-IO": not bad_loop_free,
        "no-looped-link": not bad_looped,
    })


def counted_attach(rep: LemmaReport, max_n: int = 2) -> None:
    positives = negatives = 0
    for n in range(1, max_n + 1):
        o_star = circles(default_support_spec(E(n)).l_sizes)
        for code in enumerate_level(n).members:
            g = Digraph.from_code(code)
            x = disjoint_union(g, o_star)
            failed = counted_attach_conditions(o_star, x)
            positives += 1
            rep.check(not failed, code, _tag(x), note=f"construction fails {failed}")
            # negative control: an edge from a G vertex into the circle part
            rows = list(x.rows)
            rows[0] |= 1 << n
            bad = Digraph(x.n, rows)
            failed_bad = counted_attach_conditions(o_star, bad)
            expect = "no-looped-link" if g.has_loop(0) else "no-loop-free-non-IO"
            negatives += 1
            rep.check(expect in failed_bad, code, _tag(bad),
                      note=f"injected edge not caught (failed {failed_bad})")
    # non-compliant sizes and wrong vertex count
    small = circles([3, 4])
    negatives += 2
    rep.check("smallest-circle-strict" in counted_attach_conditions(small, disjoint_union(E(2), small)),
              disjoint_union(E(2), small).code(), note="circles too small for two vertices not caught")
    o3 = circles([3])
    rep.check("size" in counted_attach_conditions(o3, disjoint_union(E(2), o3)),
              disjoint_union(E(2), o3).code(), note="size not caught")
    # uniqueness on four vertices: exactly O_3 + E_1 and O_3 + L_1
    found = set()
    for code in enumerate_level(4).members:
        if not counted_attach_conditions(o3, Digraph.from_code(code)):
            found.add(code)
    expected = canon_set([disjoint_union(o3, E(1)), disjoint_union(o3, L(1))])
    rep.check(found == set(expected), *sorted(found ^ expected), note="4-vertex solutions differ")
    rep.details.update(positives=positives, negative_controls=negatives, four_vertex_solutions=sorted(found))


# circle-count ----------------------------------------------------------------------


def _is_acyclic(g: Digraph) -> bool:
    indeg = [bin(g.cols[v] & ~(1 << v)).count("1") for v in range(g.n)]
    stack = [v for v in range(g.n) if indeg[v] == 0]
    seen = 0
    while stack:
        v = stack.pop()
        seen += 1
        for w in range(g.n):
            if w != v and g.rows[v] >> w & 1:
                indeg[w] -= 1
                if indeg[w] == 0:
                    stack.append(w)
    return seen == g.n


def _has_circle(g: Digraph) -> bool:
    # without loops or 2-cycles a shortest directed cycle is an induced circle, so the
    # circle test reduces to acyclicity; otherwise fall back to pattern search
    if g.num_loops == 0 and all(not (g.rows[a] >> b & 1 and g.rows[b] >> a & 1)
                                for a in range(g.n) for b in range(a + 1, g.n)):
        return not _is_acyclic(g)
    return any(sub(family("O", k), g) for k in range(3, g.n + 1))


def circle_free_part(o: Digraph) -> Digraph:
    """A largest induced substructure with no circle substructure."""
    for r in range(o.n):
        for drop in itertools.combinations(range(o.n), r):
            keep = [v for v in range(o.n) if v not in drop]
            if keep:
                h = induced(o, keep)
                if not _has_circle(h):
                    return h
    raise ValueError("no circle-free substructure")


def circle_count(rep: LemmaReport, sizes=(3, 4, 5, 6)) -> None:
    checked = 0
    for r in range(1, len(sizes) + 1):
        for s in itertools.combinations(sizes, r):
            o = circles(s)
            free = circle_free_part(o)
            i = o.n - free.n
            checked += 1
            rep.check(i == len(s), _tag(o), note=f"sizes {s}: derived E_{i}")
    rep.details.update(sets_checked=checked)


# gn-part ---------------------------------------------------------------------------


def gn_direct(g: Digraph, o_star: Digraph) -> Digraph | None:
    parts = [c for c in wccs(g) if not is_embeddable(c, o_star)]
    return union_all(parts) if parts else None


def gn_part(rep: LemmaReport, max_n: int = 4, sizes=(5, 6, 7, 8)) -> None:
    o_star = circles(sizes)
    cat = get_catalog(max_n)
    if cat.max_n != max_n:
        cat = cat.restrict(max_n)
    down = cat.sub_down
    codes, graphs = cat.codes, cat.graphs

    # third condition: no X with |X| < |N| and N a substructure of X + O*.  Such an X
    # can be shrunk to the image of N, a proper substructure of N, or to nothing.
    # ``ok3_strict`` is the reading where X must be nonempty.
    ok3, ok3_strict = [], []
    for idx, nn in enumerate(graphs):
        good = True
        for j in range(len(codes)):
            if down[idx] >> j & 1 and j != idx and sub(nn, disjoint_union(graphs[j], o_star)):
                good = False
                break
        ok3_strict.append(good)
        ok3.append(good and not sub(nn, o_star))

    def maxima(idx, ok):
        cands = [j for j in range(len(codes)) if down[idx] >> j & 1 and ok[j]]
        return [codes[j] for j in cands if not any(k != j and down[k] >> j & 1 for k in cands)]

    degenerate = []
    compared = strict_mismatch = 0
    for idx, g in enumerate(graphs):
        got = maxima(idx, ok3)
        direct = gn_direct(g, o_star)
        if direct is None:
            degenerate.append([codes[idx], got])
            continue
        compared += 1
        want = [canonical_form(direct)]
        rep.check(got == want, codes[idx], *got, note=f"{codes[idx]}: conditions give {got}")
        if maxima(idx, ok3_strict) != want:
            strict_mismatch += 1
    rep.details.update(
        compared=compared, circles=list(sizes),
        nonempty_X_reading_mismatches=strict_mismatch,
        degenerate_count=len(degenerate),
        degenerate_note="every component embeds into O*, so the part is empty and the triple is not in the relation",
        degenerate_examples=degenerate[:5],
    )


# union-with-circles ------------------------------------------------------------------


def io_substructures(g: Digraph) -> list[Digraph]:
    out = {}
    for k in range(1, g.n + 1):
        for s in itertools.combinations(range(g.n), k):
            h = induced(g, s)
            if is_IO(h):
                out.setdefault(canonical_form(h), h)
    return list(out.values())


def union_with_circles(rep: LemmaReport, max_n: int = 2) -> None:
    pairs = 0
    for n in range(1, max_n + 1):
        o_star = circles(default_support_spec(E(n)).l_sizes)
        level = [Digraph.from_code(c) for c in enumerate_level(n).members]
        cond1 = {canonical_form(h): not counted_attach_conditions(o_star, disjoint_union(h, o_star))
                 for h in level}
        nparts = {canonical_form(h): gn_direct(h, o_star) for h in level}
        for g in level:
            gc = canonical_form(g)
            gn = nparts[gc]
            ys = io_substructures(g)
            found = []
            for h in level:
                hc = canonical_form(h)
                x = disjoint_union(h, o_star)
                hn = nparts[hc]
                same_n = (gn is None and hn is None) or (
                    gn is not None and hn is not None and canonical_form(gn) == canonical_form(hn))
                ok = (cond1[hc] and x.n == o_star.n + g.n and same_n
                      and all(sub(disjoint_union(y, o_star), x) for y in ys))
                pairs += 1
                if ok:
                    found.append(hc)
            rep.check(found == [gc], gc, *found, note=f"{gc}: conditions accept {found}")
    rep.details.update(pairs_checked=pairs)


# male-rel ----------------------------------------------------------------------------


def male_conditions(x: Digraph, i: int, box: bool) -> list[str]:
    return _failed({
        "size": x.n == i + 2,
        "circle": sub(family("O", i), x),
        "caps(1,3)": degree_caps_ok(x, [(1, 3)]),
        "caps(0,4)": degree_caps_ok(x, [(0, 4)]),
        "tail": sub(tail_pattern(i, box), x),
        "cover": sub(disjoint_union(family("O", i), L(1) if box else E(1)), x),
    })


def pair_conditions(x: Digraph, i: int, box: bool, j: int, tri: bool, mode: str) -> list[str]:
    conds = {
        "size": x.n == i + j + 4,
        "first": sub(male(i, box), x),
        "second": sub(male(j, tri), x),
        # the two-way link gives both tips degree 3, so its analogue of the (2, 3)
        # cap allows the four vertices of degree 3 that the link forces
        "caps(p,3)": degree_caps_ok(x, [(4 if mode == "bi" else 2, 3)]),
        "caps(0,4)": degree_caps_ok(x, [(0, 4)]),
    }
    oo = disjoint_union(family("O", i), family("O", j))
    if mode == "union":
        if not box and not tri:
            extra = E(2)
        elif box and tri:
            extra = L(2)
        else:
            extra = disjoint_union(E(1), L(1))
        conds["circles+tips"] = sub(disjoint_union(oo, extra), x)
    else:
        conds["link"] = sub(link_pattern(i, box, j, tri, mode), x)
    return _failed(conds)


def _completions(n: int, rows: list[int], free_pairs, free_loops, caps):
    """All ways to add edges from ``free_pairs`` and loops on ``free_loops`` to ``rows``
    keeping every degree cap (p, q) satisfied."""
    deg = [0] * n
    for a in range(n):
        for b in range(n):
            if a != b and rows[a] >> b & 1:
                deg[a] += 1
                deg[b] += 1

    def caps_ok():
        return all(sum(1 for v in deg if v >= q) <= p for p, q in caps)

    def rec(t):
        if t == len(free_pairs):
            for loops in range(1 << len(free_loops)):
                out = list(rows)
                for s, v in enumerate(free_loops):
                    if loops >> s & 1:
                        out[v] |= 1 << v
                yield Digraph(n, out)
            return
        yield from rec(t + 1)
        a, b = free_pairs[t]
        rows[a] |= 1 << b
        deg[a] += 1
        deg[b] += 1
        if caps_ok():
            yield from rec(t + 1)
        rows[a] &= ~(1 << b)
        deg[a] -= 1
        deg[b] -= 1

    yield from rec(0)


def male_uniqueness(i: int) -> dict[bool, set[str]]:
    """Satisfying digraphs on i+2 vertices, for both loop flags, with O_i fixed on 0..i-1."""
    n = i + 2
    rows = [1 << ((k + 1) % i) for k in range(i)] + [0, 0]
    extra = [i, i + 1]
    free_pairs = [(a, b) for a in range(n) for b in range(n) if a != b and (a in extra or b in extra)]
    found = {False: set(), True: set()}
    for x in _completions(n, rows, free_pairs, extra, [(1, 3), (0, 4)]):
        for box in (False, True):
            if not male_conditions(x, i, box):
                found[box].add(canonical_form(x))
    return found


def male_rel(rep: LemmaReport, i: int = 4, j: int = 5, uniqueness_max: int = 6) -> None:
    if i == j:
        raise BadParams(f"male-rel needs i != j, got i = j = {i}")
    if min(i, j) <= 3:
        raise BadParams(f"male-rel needs i, j > 3, got ({i}, {j})")
    modes = ("union", "to", "bi")
    for box in (False, True):
        for size in (i, j):
            g = male(size, box)
            failed = male_conditions(g, size, box)
            rep.check(not failed, canonical_form(g), note=f"male({size},{box}) fails {failed}")
            rep.check(bool(male_conditions(g, size, not box)), canonical_form(g),
                      note=f"male({size},{box}) also satisfies the other loop flag")
    unique = {}
    for size in sorted({i, j}):
        if size + 2 > uniqueness_max:
            continue
        found = male_uniqueness(size)
        for box in (False, True):
            expected = {canonical_form(male(size, box))}
            rep.check(found[box] == expected, *sorted(found[box] ^ expected),
                      note=f"male({size},{box}) is not the unique solution")
            unique[f"{size}:{'L' if box else '0'}"] = sorted(found[box])
    for box, tri in itertools.product((False, True), repeat=2):
        for mode in modes:
            x = male_pair(i, box, j, tri, mode)
            for other in modes:
                failed = pair_conditions(x, i, box, j, tri, other)
                if other == mode:
                    rep.check(not failed, _tag(x), note=f"{mode}{(box, tri)} fails {failed}")
                else:
                    rep.check(bool(failed), _tag(x),
                              note=f"{mode}{(box, tri)} also satisfies the {other} conditions")
    rep.details.update(unique_solutions=unique, uniqueness_max=uniqueness_max)


# attach-rel --------------------------------------------------------------------------


def _sizes_present(o_star: Digraph) -> list[int]:
    return _circle_sizes(o_star)


def attach_conditions(o_star: Digraph, g: Digraph, x: Digraph) -> list[str]:
    sizes = _sizes_present(o_star)
    boxes = (False, True)
    pair_ok = True
    for a, b in itertools.combinations(sizes, 2):
        if not any(sub(male_pair(a, p, b, q, mode), x)
                   for p in boxes for q in boxes for mode in ("union", "to", "bi")) and not any(
                sub(male_pair(b, q, a, p, "to"), x) for p in boxes for q in boxes):
            pair_ok = False
            break
    return _failed({
        "size": x.n == g.n + o_star.n + g.n,
        "contains": sub(disjoint_union(g, o_star), x),
        "tails": all(sub(male(k, False), x) or sub(male(k, True), x) for k in sizes),
        "pairs": pair_ok,
    })


def attach_rel(rep: LemmaReport, graph: str = "E2", sizes=(7, 8)) -> None:
    from ..families import named

    g = named(graph)
    spec = AttachSpec(sizes)
    try:
        spec.check(g.n)
    except BadSpec as exc:
        raise BadParams(str(exc)) from None
    if sizes[0] <= g.n * g.n + g.n:
        raise BadParams(f"smallest circle must exceed n^2+n = {g.n * g.n + g.n}")
    o_star = circles(sizes)
    for alpha in itertools.permutations(range(g.n)):
        x = attach(g, AttachSpec(sizes, alpha))
        failed = attach_conditions(o_star, g, x)
        rep.check(not failed, _tag(x), note=f"alpha {alpha} fails {failed}")
    others = []
    for extra in ("I2", "Larrow", "F2"):
        h = named(extra)
        if h.n == g.n and h != g and sizes[0] > h.n * h.n + h.n:
            x = attach(h, spec)
            others.append(extra)
            rep.check(not attach_conditions(o_star, h, x), _tag(x), note=f"{extra} fails")
    base = attach(g, spec)
    m = g.n + o_star.n
    controls = {}
    # 1. pointers cut loose: circles and w's present, no w -> G edges
    rows = list(base.rows)
    for t in range(g.n):
        rows[m + t] = 0
    controls["pointers-detached"] = Digraph(base.n, rows)
    # 2. every pointer into the first G vertex
    if g.n >= 2:
        rows = list(base.rows)
        for t in range(g.n):
            rows[m + t] = 1
        controls["shared-target"] = Digraph(base.n, rows)
    # 3. pointer edges reversed
    rows = [r & ~sum(1 << (m + t) for t in range(g.n)) for r in base.rows[:m]] + [0] * g.n
    for t in range(g.n):
        rows[spec.alpha[t]] |= 1 << (m + t)
        start = g.n + sum(sizes[:t])
        rows[m + t] |= 1 << start
    controls["reversed-tails"] = Digraph(base.n, rows)
    # 4. an extra isolated vertex
    controls["extra-vertex"] = disjoint_union(base, E(1))
    for name, bad in controls.items():
        rep.check(bool(attach_conditions(o_star, g, bad)), _tag(bad),
                  note=f"negative control {name} passes")
    rep.details.update(graph=graph, sizes=list(sizes), negative_controls=sorted(controls),
                       extra_graphs=others)


# support-rel ---------------------------------------------------------------------------


def support_conditions(g: Digraph, spec: SupportSpec, x3: Digraph, x4: Digraph,
                       circles_s: Digraph, g_s: Digraph) -> list[str]:
    n = g.n
    ls = list(spec.l_sizes)
    all_sizes = _sizes_present(circles_s)
    ln = max(ls)
    ks = [k for k in all_sizes if k > ln]
    boxes = (False, True)
    used = set()

    def extra_ok(k, skip):
        return all(any(sub(male_pair(k, False, l2, d, "union"), x4) for d in boxes)
                   for l2 in all_sizes if l2 not in skip)

    loops_ok = True
    for i in ls:
        if sub(male(i, True), x4):
            hits = [k for k in ks if sub(male_pair(i, True, k, False, "bi"), x4)]
            good = [k for k in hits if extra_ok(k, {i, k})]
            if not good:
                loops_ok = False
            used.update(good)
    to_ok = True
    bi_ok = True
    for i, j in itertools.permutations(ls, 2):
        for p, q in itertools.product(boxes, repeat=2):
            if sub(male_pair(i, p, j, q, "to"), x4):
                good = [k for k in ks
                        if sub(male_pair(i, p, k, False, "to"), x4)
                        and sub(male_pair(k, False, j, q, "to"), x4)
                        and extra_ok(k, {i, j, k})]
                if not good:
                    to_ok = False
                used.update(good)
            if i < j and sub(male_pair(i, p, j, q, "bi"), x4):
                good = []
                for k1, k2 in itertools.permutations(ks, 2):
                    if (sub(male_pair(i, p, k1, False, "to"), x4) and sub(male_pair(k1, False, j, q, "to"), x4)
                            and sub(male_pair(j, q, k2, False, "to"), x4)
                            and sub(male_pair(k2, False, i, p, "to"), x4)
                            and extra_ok(k1, {i, j, k1}) and extra_ok(k2, {i, j, k2})):
                        good.append((k1, k2))
                if not good:
                    bi_ok = False
                for k1, k2 in good:
                    used.update((k1, k2))
    o_star = circles(ls)
    return _failed({
        "attach-G": not attach_conditions(o_star, g, x3),
        "vertex-circles": min(ls) > n * n + n,
        "attach-Gs": not attach_conditions(circles_s, g_s, x4),
        "O*-in-O*s": sub(o_star, circles_s),
        "O*s-sizes": min(all_sizes) >= min(ls),
        "contains-attach": sub(x3, x4),
        "loop-support": loops_ok,
        "edge-support": to_ok,
        "two-way-support": bi_ok,
        "no-idle-support": set(ks) <= used,
    })


def support_instance(rep: LemmaReport, g: Digraph, spec: SupportSpec, label: str) -> None:
    s = edge_support(g, spec)
    x3 = attach(g, AttachSpec(spec.l_sizes, spec.alpha))
    failed = support_conditions(g, spec, x3, s.total, s.circles_s, s.g_s)
    rep.check(not failed, canonical_form(g), note=f"{label} fails {failed}")
    lay = s.layout
    # negative controls on the construct
    for e, (a, b) in enumerate(lay.edges):
        sv = lay.support[e]
        rows = list(s.total.rows)
        if a == b:
            rows[sv] &= ~(1 << b)  # loop support becomes one-way
            name = "loop-support-one-way"
        else:
            rows[a] &= ~(1 << sv)
            rows[sv] &= ~(1 << b)
            rows[b] |= 1 << sv
            rows[sv] |= 1 << a  # support runs against the edge
            name = "support-reversed"
        bad = Digraph(s.total.n, rows)
        rep.check(bool(support_conditions(g, spec, x3, bad, s.circles_s, s.g_s)), canonical_form(g),
                  note=f"{label}: negative control {name} on edge {e} passes")
        rep.details.setdefault("negative_controls", 0)
        rep.details["negative_controls"] += 1


def support_rel(rep: LemmaReport, graphs=("L1",), l_sizes=(3,), d_sizes=(4,), defaults=("E1", "L1", "Larrow")) -> None:
    from ..families import named

    instances = []
    for name in graphs:
        g = named(name)
        spec = SupportSpec(l_sizes, d_sizes)
        try:
            spec.check(g)
        except BadSpec as exc:
            raise BadParams(f"{name}: {exc}") from None
        support_instance(rep, g, spec, f"{name} {list(l_sizes)}/{list(d_sizes)}")
        instances.append([name, list(l_sizes), list(d_sizes)])
    for name in defaults:
        g = named(name)
        spec = default_support_spec(g)
        support_instance(rep, g, spec, f"{name} default")
        instances.append([name, list(spec.l_sizes), list(spec.d_sizes)])
    rep.details["instances"] = instances


TARGETED_CHECKS = {
    "arrow-rel": arrow_rel,
    "addition": addition,
    "multiplication": multiplication,
    "io-union": io_union,
    "counted-attach": counted_attach,
    "circle-count": circle_count,
    "gn-part": gn_part,
    "union-with-circles": union_with_circles,
    "male-rel": male_rel,
    "attach-rel": attach_rel,
    "support-rel": support_rel,
}
