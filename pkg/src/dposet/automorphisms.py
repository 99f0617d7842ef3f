"""Local automorphism rules of the substructure order.

A local rule rewrites each vertex's loop bit and each unordered pair's cross
edges as a function of that pair's labeled type.  Labeled two-vertex types are
indexed by ``la | lb << 1 | ab << 2 | ba << 3`` (loop on a, loop on b, edge a->b,
edge b->a).

Mixed pairs (exactly one loop) are named from the looped vertex x to the plain
vertex y: ``A`` no cross edge, ``B`` x->y, ``C`` y->x, ``D`` both.
"""
from __future__ import annotations

import itertools
import re
from functools import lru_cache
from dataclasses import dataclass, field
from typing import Iterable

from .catalog import get_catalog
from .digraph import Digraph, _members, canonical_form
from .errors import BadPermutation

LETTERS = "ABCD"


def _type(la: int, lb: int, ab: int, ba: int) -> int:
    return la | lb << 1 | ab << 2 | ba << 3


def _bits(p: int) -> tuple[int, int, int, int]:
    return p & 1, p >> 1 & 1, p >> 2 & 1, p >> 3 & 1


def swap_type(p: int) -> int:
    la, lb, ab, ba = _bits(p)
    return _type(lb, la, ba, ab)


def _mixed_letter(p: int) -> str | None:
    la, lb, ab, ba = _bits(p)
    if la == lb:
        return None
    x_to_y, y_to_x = (ab, ba) if la else (ba, ab)
    return LETTERS[x_to_y + 2 * y_to_x]


def _mixed_type(letter: str, looped_first: bool) -> int:
    x_to_y = letter in "BD"
    y_to_x = letter in "CD"
    if looped_first:
        return _type(1, 0, x_to_y, y_to_x)
    return _type(0, 1, y_to_x, x_to_y)


@dataclass(frozen=True)
class LocalRule:
    vmap: tuple[int, int]
    pmap: tuple[int, ...]
    name: str = field(default="", compare=False)

    def __post_init__(self):
        problems = self.violations()
        if problems:
            raise ValueError(f"invalid local rule {self.name or ''}: {problems[0]}")

    @classmethod
    def unchecked(cls, vmap, pmap, name: str = "") -> "LocalRule":
        """Build a rule without invariant checks (for negative controls)."""
        obj = object.__new__(cls)
        object.__setattr__(obj, "vmap", tuple(vmap))
        object.__setattr__(obj, "pmap", tuple(pmap))
        object.__setattr__(obj, "name", name)
        return obj

    def violations(self) -> list[str]:
        out = []
        if sorted(self.vmap) != [0, 1]:
            out.append("vmap is not a bijection")
        if len(self.pmap) != 16 or sorted(self.pmap) != list(range(16)):
            out.append("pmap is not a bijection")
            return out
        for p in range(16):
            if self.pmap[swap_type(p)] != swap_type(self.pmap[p]):
                out.append(f"pmap is not swap-equivariant at type {p}")
                break
        for p in range(16):
            la, lb, _, _ = _bits(p)
            qa, qb, _, _ = _bits(self.pmap[p])
            if (qa, qb) != (self.vmap[la], self.vmap[lb]):
                out.append(f"pmap loop bits disagree with vmap at type {p}")
                break
        return out

    def is_valid(self) -> bool:
        return not self.violations()

    def key(self) -> tuple:
        return self.vmap + self.pmap

    def to_json(self) -> dict:
        return {"name": self.name, "vmap": list(self.vmap), "pmap": list(self.pmap)}


IDENTITY = LocalRule((0, 1), tuple(range(16)), "id")


def identity() -> LocalRule:
    return IDENTITY


def parse_permutation(text: str) -> dict[str, str]:
    """Cycle notation ``(AB)(CD)`` / ``()`` or one-line notation ``BACD``."""
    s = text.replace(" ", "")
    if re.fullmatch(r"(\([ABCD]*\))+", s):
        perm = {c: c for c in LETTERS}
        seen: set[str] = set()
        for cyc in re.findall(r"\(([ABCD]*)\)", s):
            if len(set(cyc)) != len(cyc) or seen & set(cyc):
                raise BadPermutation(f"letters repeat in {text!r}")
            seen |= set(cyc)
            for a, b in zip(cyc, cyc[1:] + cyc[:1]):
                perm[a] = b
        return perm
    if re.fullmatch(r"[ABCD]{4}", s) and len(set(s)) == 4:
        return dict(zip(LETTERS, s))
    raise BadPermutation(f"not a permutation of ABCD: {text!r}")


def perm_name(perm: dict[str, str]) -> str:
    return "".join(perm[c] for c in LETTERS)


def _rule_from_typemap(f, vmap=(0, 1), name="") -> LocalRule:
    return LocalRule(tuple(vmap), tuple(f(p) for p in range(16)), name)


def pi_rule(perm: dict[str, str]) -> LocalRule:
    def f(p):
        letter = _mixed_letter(p)
        if letter is None:
            return p
        return _mixed_type(perm[letter], bool(p & 1))

    return _rule_from_typemap(f, name="pi:" + perm_name(perm))


def rule_of_generator(name: str) -> LocalRule:
    if name == "phi1":
        return _rule_from_typemap(lambda p: p ^ 0b11, vmap=(1, 0), name=name)
    if name in ("phi2", "phi3"):
        loops = 0 if name == "phi2" else 1

        def f(p):
            la, lb, ab, ba = _bits(p)
            if la == lb == loops and ab == ba:
                return _type(la, lb, 1 - ab, 1 - ba)
            return p

        return _rule_from_typemap(f, name=name)
    if name in ("phi4", "phi5"):
        loops = 0 if name == "phi4" else 1

        def f(p):
            la, lb, ab, ba = _bits(p)
            if la == lb == loops and ab != ba:
                return _type(la, lb, ba, ab)
            return p

        return _rule_from_typemap(f, name=name)
    if name.startswith("pi:"):
        return pi_rule(parse_permutation(name[3:]))
    if name.startswith("pi"):
        raise BadPermutation(f"malformed permutation generator {name!r}")
    raise ValueError(f"unknown generator {name!r}")


def all_permutations() -> list[dict[str, str]]:
    return [dict(zip(LETTERS, p)) for p in itertools.permutations(LETTERS)]


def generators() -> list[LocalRule]:
    gens = [rule_of_generator(f"phi{i}") for i in range(1, 6)]
    return gens + [pi_rule(p) for p in all_permutations()]


def apply(r: LocalRule, g: Digraph) -> Digraph:
    """Simultaneous rewrite of every loop and every pair's cross edges."""
    n = g.n
    rows = g.rows
    loops = [rows[i] >> i & 1 for i in range(n)]
    new = [r.vmap[loops[i]] << i for i in range(n)]
    pmap = r.pmap
    for i in range(n):
        ri = rows[i]
        for j in range(i + 1, n):
            q = pmap[loops[i] | loops[j] << 1 | (ri >> j & 1) << 2 | (rows[j] >> i & 1) << 3]
            if q & 4:
                new[i] |= 1 << j
            if q & 8:
                new[j] |= 1 << i
    return Digraph(n, new)


def compose(r1: LocalRule, r2: LocalRule) -> LocalRule:
    """The rule with ``apply(result, G) == apply(r2, apply(r1, G))``.

    Composites of valid rules are valid, so the invariant check is skipped.
    """
    name = f"{r1.name}*{r2.name}" if r1.name and r2.name else ""
    return LocalRule.unchecked(
        tuple(r2.vmap[v] for v in r1.vmap), tuple(r2.pmap[p] for p in r1.pmap), name
    )


def inverse(r: LocalRule) -> LocalRule:
    vinv = [0, 0]
    for a, b in enumerate(r.vmap):
        vinv[b] = a
    pinv = [0] * 16
    for a, b in enumerate(r.pmap):
        pinv[b] = a
    return LocalRule(tuple(vinv), tuple(pinv), f"inv({r.name})" if r.name else "")


def closure(gens: Iterable[LocalRule]) -> frozenset[LocalRule]:
    gens = list(gens)
    if not gens:
        raise ValueError("closure needs at least one generator")
    seen = {IDENTITY.key(): IDENTITY}
    frontier = [IDENTITY]
    while frontier:
        nxt = []
        for a in frontier:
            for g in gens:
                c = compose(a, g)
                k = c.key()
                if k not in seen:
                    seen[k] = LocalRule.unchecked(c.vmap, c.pmap)
                    nxt.append(seen[k])
        frontier = nxt
    return frozenset(seen.values())


def sorted_rules(rules: Iterable[LocalRule]) -> list[LocalRule]:
    return sorted(rules, key=LocalRule.key)


# verification ---------------------------------------------------------------


def _check(name: str, ok: bool, witness=None) -> dict:
    out = {"check": name, "status": "pass" if ok else "fail"}
    if not ok and witness is not None:
        out["witness"] = witness
    return out


def verify_automorphism(r: LocalRule, max_n: int = 3, catalog=None) -> dict:
    """Check that ``r`` permutes every level and preserves the substructure order."""
    cat = catalog if catalog is not None and catalog.max_n >= max_n else get_catalog(max_n)
    if cat.max_n != max_n:
        cat = cat.restrict(max_n)
    checks = []
    image = []
    for i, g in enumerate(cat.graphs):
        image.append(cat.index[canonical_form(apply(r, g))])
    bij_ok, bij_witness = True, None
    first: dict[int, int] = {}
    for i, j in enumerate(image):
        if j in first:
            bij_ok = False
            bij_witness = [cat.codes[first[j]], cat.codes[i], cat.codes[j]]
            break
        first[j] = i
    checks.append(_check("level-bijection", bij_ok, bij_witness))
    ord_ok, ord_witness = True, None
    for b in range(len(cat.codes)):
        mapped = 0
        for a in _members(cat.sub_down[b]):
            mapped |= 1 << image[a]
        diff = mapped ^ cat.sub_down[image[b]]
        if diff:
            fa = (diff & -diff).bit_length() - 1
            a = image.index(fa) if fa in image else None
            ord_ok = False
            if a is not None:
                ord_witness = [cat.codes[a], cat.codes[b]]
            else:
                ord_witness = [None, cat.codes[b]]
            break
    checks.append(_check("order-preservation", ord_ok, ord_witness))
    status = "pass" if all(c["status"] == "pass" for c in checks) else "fail"
    return {"rule": r.to_json(), "max_n": max_n, "status": status, "checks": checks}


def _mul(a: LocalRule, b: LocalRule) -> LocalRule:
    """Group product ``a·b`` acting as ``a(b(G))``."""
    return compose(b, a)


def _power(r: LocalRule, e: int) -> LocalRule:
    return r if e % 2 else IDENTITY


def _compose_perm(p: dict, q: dict) -> dict:
    """``p ∘ q``: apply q first."""
    return {c: p[q[c]] for c in LETTERS}


BC = {"A": "A", "B": "C", "C": "B", "D": "D"}


@lru_cache(maxsize=None)
def _phi(i: int) -> LocalRule:
    return rule_of_generator(f"phi{i}")


def semidirect_element(p, q, r, s, perm, e) -> LocalRule:
    phi = {i: _phi(i) for i in range(1, 6)}
    g = _power(phi[1], e)
    g = _mul(pi_rule(perm), g)
    for gen, exp in ((phi[5], s), (phi[4], r), (phi[3], q), (phi[2], p)):
        g = _mul(_power(gen, exp), g)
    return g


def semidirect_product(x, y):
    p, q, r, s, pi, e = x
    p2, q2, r2, s2, pi2, e2 = y
    if e:
        p2, q2, r2, s2 = q2, p2, s2, r2
        pi2 = _compose_perm(BC, _compose_perm(pi2, BC))
    return ((p + p2) % 2, (q + q2) % 2, (r + r2) % 2, (s + s2) % 2, _compose_perm(pi, pi2), (e + e2) % 2)


def verify_structure(pointwise_max_n: int = 3) -> dict:
    phi = {i: rule_of_generator(f"phi{i}") for i in range(1, 6)}
    perms = all_permutations()
    pis = {perm_name(p): pi_rule(p) for p in perms}
    checks = []

    bad = [f"phi{i}" for i in range(1, 6) if compose(phi[i], phi[i]) != IDENTITY]
    checks.append(_check("involutions", not bad, bad))

    bad = []
    for i, j in itertools.combinations(range(2, 6), 2):
        if compose(phi[i], phi[j]) != compose(phi[j], phi[i]):
            bad.append([f"phi{i}", f"phi{j}"])
    for i in range(2, 6):
        for name, pr in pis.items():
            if compose(phi[i], pr) != compose(pr, phi[i]):
                bad.append([f"phi{i}", f"pi:{name}"])
    checks.append(_check("commuting", not bad, bad[:1]))

    bad = []
    for p in perms:
        for s in perms:
            if _mul(pis[perm_name(p)], pis[perm_name(s)]) != pis[perm_name(_compose_perm(p, s))]:
                bad.append([f"pi:{perm_name(p)}", f"pi:{perm_name(s)}"])
    checks.append(_check("pi-homomorphism", not bad, bad[:1]))

    def conj(x):
        return _mul(phi[1], _mul(x, phi[1]))

    relations = [(f"phi1*phi{a}*phi1=phi{b}", phi[a], phi[b]) for a, b in ((2, 3), (3, 2), (4, 5), (5, 4))]
    for p in perms:
        target = _compose_perm(BC, _compose_perm(p, BC))
        relations.append(
            (f"phi1*pi:{perm_name(p)}*phi1=pi:{perm_name(target)}", pis[perm_name(p)], pis[perm_name(target)])
        )
    bad = [name for name, x, y in relations if conj(x) != y]
    checks.append(_check("conjugation-tables", not bad, bad[:1]))

    cat = get_catalog(max(pointwise_max_n, 1))
    if cat.max_n != pointwise_max_n:
        cat = cat.restrict(pointwise_max_n)
    bad = None
    for name, x, y in relations:
        for g in cat.graphs:
            lhs = apply(phi[1], apply(x, apply(phi[1], g)))
            if lhs != apply(y, g):
                bad = [name, g.code()]
                break
        if bad:
            break
    checks.append(_check(f"conjugation-pointwise-n{pointwise_max_n}", bad is None, bad))

    full = closure(generators())
    sub = closure(generators()[1:])
    checks.append(_check("closure-order-768", len(full) == 768, [len(full)]))
    checks.append(_check("subgroup-order-384", len(sub) == 384, [len(sub)]))
    checks.append(_check("subgroup-index-2", 2 * len(sub) == len(full) and sub <= full, [len(full), len(sub)]))

    tuples = [
        (p, q, r, s, perm, e)
        for p, q, r, s, e in itertools.product((0, 1), repeat=5)
        for perm in perms
    ]
    elems = {}
    for t in tuples:
        key = (t[:4], perm_name(t[4]), t[5])
        elems[key] = semidirect_element(*t)
    image = set(elems.values())
    checks.append(
        _check("semidirect-bijection", len(image) == 768 and image == set(full), [len(image)])
    )

    def tkey(t):
        return (t[:4], perm_name(t[4]), t[5])

    bad = None
    for x in tuples:
        ex = elems[tkey(x)]
        for y in tuples:
            z = semidirect_product(x, y)
            if _mul(ex, elems[tkey(y)]) != elems[tkey(z)]:
                bad = [list(tkey(x)), list(tkey(y))]
                break
        if bad:
            break
    checks.append(_check("semidirect-law", bad is None, bad))

    status = "pass" if all(c["status"] == "pass" for c in checks) else "fail"
    return {"status": status, "checks": checks}
