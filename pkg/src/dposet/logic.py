"""First-order formulas over the poset signature with digraph constants.

Grammar::

    formula := quant | iff
    quant   := ("forall" | "exists") IDENT "." formula
    iff     := imp {"<->" imp}
    imp     := or ["->" imp]
    or      := and {"|" and}
    and     := unary {"&" unary}
    unary   := "~" unary | "(" formula ")" | quant | atom
    atom    := term ("<=" | "=" | "<") term
    term    := IDENT | CONST
    CONST   := "#" code | E<n> | F<n> | I<n> | O<n> | L<n> | Larrow | male:<i>:<0|L>

``a < b`` is read as ``a <= b & ~(a = b)``.
"""
from __future__ import annotations

import re
from dataclasses import dataclass, field
from functools import cached_property
from typing import Mapping, Union

from .catalog import Catalog, get_catalog
from .digraph import Digraph, canonical_form
from .errors import BadArity, BadGraph, FormulaSyntaxError, UnboundVariable, UnknownConstant
from .families import NAMED_PATTERN, named
from .matching import is_embeddable, is_substructure


# syntax tree -------------------------------------------------------------


@dataclass(frozen=True)
class Var:
    name: str


@dataclass(frozen=True)
class Const:
    text: str
    graph: Digraph = field(compare=False, repr=False, hash=False)

    @cached_property
    def code(self) -> str:
        return canonical_form(self.graph)


Term = Union[Var, Const]


@dataclass(frozen=True)
class Leq:
    left: Term
    right: Term


@dataclass(frozen=True)
class Eq:
    left: Term
    right: Term


@dataclass(frozen=True)
class Not:
    body: "Formula"


@dataclass(frozen=True)
class And:
    left: "Formula"
    right: "Formula"


@dataclass(frozen=True)
class Or:
    left: "Formula"
    right: "Formula"


@dataclass(frozen=True)
class Implies:
    left: "Formula"
    right: "Formula"


@dataclass(frozen=True)
class Iff:
    left: "Formula"
    right: "Formula"


@dataclass(frozen=True)
class Forall:
    var: str
    body: "Formula"


@dataclass(frozen=True)
class Exists:
    var: str
    body: "Formula"


Formula = Union[Leq, Eq, Not, And, Or, Implies, Iff, Forall, Exists]
BINARY = {And: "&", Or: "|", Implies: "->", Iff: "<->"}


def free_vars(f) -> frozenset[str]:
    if isinstance(f, Var):
        return frozenset([f.name])
    if isinstance(f, Const):
        return frozenset()
    if isinstance(f, (Leq, Eq)):
        return free_vars(f.left) | free_vars(f.right)
    if isinstance(f, Not):
        return free_vars(f.body)
    if isinstance(f, (Forall, Exists)):
        return free_vars(f.body) - {f.var}
    return free_vars(f.left) | free_vars(f.right)


def resolve_constant(text: str) -> Const:
    if text.startswith("#"):
        try:
            return Const(text, Digraph.from_code(text[1:]))
        except BadGraph as exc:
            raise UnknownConstant(f"{text!r}: {exc}") from None
    return Const(text, named(text))


# lexer / parser -------------------------------------------------------------

_TOKEN = re.compile(
    r"""
    (?P<ws>\s+)
  | (?P<const>\#\d+:[01]*|male:\d+:(?:0|L))
  | (?P<op><->|->|<=|<|=|\||&|~|\(|\)|\.)
  | (?P<word>[A-Za-z_][A-Za-z0-9_']*)
    """,
    re.VERBOSE,
)


@dataclass
class _Tok:
    kind: str  # const, op, ident, kw, end
    text: str
    line: int
    col: int


def _tokenize(text: str) -> list[_Tok]:
    toks = []
    pos, line, line_start = 0, 1, 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m:
            raise FormulaSyntaxError(f"unexpected character {text[pos]!r}", line, pos - line_start + 1)
        kind = m.lastgroup
        s = m.group()
        col = pos - line_start + 1
        if kind == "ws":
            for k, ch in enumerate(s):
                if ch == "\n":
                    line += 1
                    line_start = pos + k + 1
        elif kind == "word":
            if s in ("forall", "exists"):
                toks.append(_Tok("kw", s, line, col))
            elif NAMED_PATTERN.match(s) or re.fullmatch(r"[EFIOL]\d+", s):
                toks.append(_Tok("const", s, line, col))
            else:
                toks.append(_Tok("ident", s, line, col))
        else:
            toks.append(_Tok(kind, s, line, col))
        pos = m.end()
    toks.append(_Tok("end", "", line, pos - line_start + 1))
    return toks


class _Parser:
    def __init__(self, text: str):
        self.toks = _tokenize(text)
        self.i = 0
        self.bound: list[str] = []

    def peek(self) -> _Tok:
        return self.toks[self.i]

    def next(self) -> _Tok:
        t = self.toks[self.i]
        self.i += 1
        return t

    def error(self, msg: str, tok: _Tok | None = None):
        tok = tok or self.peek()
        found = "end of input" if tok.kind == "end" else repr(tok.text)
        raise FormulaSyntaxError(f"{msg}, found {found}", tok.line, tok.col)

    def expect_op(self, op: str) -> None:
        t = self.peek()
        if t.kind != "op" or t.text != op:
            self.error(f"expected {op!r}")
        self.i += 1

    def at_op(self, op: str) -> bool:
        t = self.peek()
        return t.kind == "op" and t.text == op

    def formula(self):
        t = self.peek()
        if t.kind == "kw":
            self.i += 1
            v = self.next()
            if v.kind != "ident":
                self.error("expected a variable after quantifier", v)
            if v.text in self.bound:
                raise FormulaSyntaxError(
                    f"variable {v.text!r} shadows an enclosing binder", v.line, v.col
                )
            self.expect_op(".")
            self.bound.append(v.text)
            body = self.formula()
            self.bound.pop()
            return (Forall if t.text == "forall" else Exists)(v.text, body)
        return self.iff()

    def iff(self):
        left = self.imp()
        while self.at_op("<->"):
            self.i += 1
            left = Iff(left, self.imp())
        return left

    def imp(self):
        left = self.disj()
        if self.at_op("->"):
            self.i += 1
            return Implies(left, self.imp())
        return left

    def disj(self):
        left = self.conj()
        while self.at_op("|"):
            self.i += 1
            left = Or(left, self.conj())
        return left

    def conj(self):
        left = self.unary()
        while self.at_op("&"):
            self.i += 1
            left = And(left, self.unary())
        return left

    def unary(self):
        if self.at_op("~"):
            self.i += 1
            return Not(self.unary())
        if self.at_op("("):
            self.i += 1
            f = self.formula()
            self.expect_op(")")
            return f
        if self.peek().kind == "kw":
            # a quantifier in operand position extends as far right as possible
            return self.formula()
        return self.atom()

    def term(self):
        t = self.next()
        if t.kind == "ident":
            return Var(t.text)
        if t.kind == "const":
            return resolve_constant(t.text)
        self.error("expected a variable or constant", t)

    def atom(self):
        left = self.term()
        t = self.peek()
        if t.kind != "op" or t.text not in ("<=", "=", "<"):
            self.error("expected '<=', '=' or '<'")
        self.i += 1
        right = self.term()
        if t.text == "<=":
            return Leq(left, right)
        if t.text == "=":
            return Eq(left, right)
        return And(Leq(left, right), Not(Eq(left, right)))


def parse(text: str):
    p = _Parser(text)
    f = p.formula()
    if p.peek().kind != "end":
        p.error("expected end of formula")
    return f


def _term_text(t: Term) -> str:
    return t.name if isinstance(t, Var) else t.text


def to_text(f) -> str:
    """Print ``f`` so that ``parse(to_text(f)) == f``."""
    if isinstance(f, Leq):
        return f"{_term_text(f.left)} <= {_term_text(f.right)}"
    if isinstance(f, Eq):
        return f"{_term_text(f.left)} = {_term_text(f.right)}"
    if isinstance(f, (Forall, Exists)):
        kw = "forall" if isinstance(f, Forall) else "exists"
        return f"{kw} {f.var}. {to_text(f.body)}"
    if isinstance(f, Not):
        return "~" + _wrapped(f.body)
    return f"{_wrapped(f.left)} {BINARY[type(f)]} {_wrapped(f.right)}"


def _wrapped(f) -> str:
    if isinstance(f, (Leq, Eq, Not)):
        return to_text(f)
    return f"({to_text(f)})"


# semantics -----------------------------------------------------------------


class Universe:
    """All isomorphism types with at most ``bound`` vertices, ordered by ``sub`` or ``emb``."""

    def __init__(self, bound: int, order: str = "sub", catalog: Catalog | None = None):
        if order not in ("sub", "emb"):
            raise ValueError(f"order must be 'sub' or 'emb', not {order!r}")
        cat = catalog if catalog is not None else get_catalog(bound)
        if cat.max_n != bound:
            cat = cat.restrict(bound)
        self.bound = bound
        self.order = order
        self.catalog = cat
        self.elements = cat.codes
        self.index = cat.index
        self.down = cat.sub_down if order == "sub" else cat.emb_down

    def __len__(self):
        return len(self.elements)

    def __contains__(self, code: str) -> bool:
        return code in self.index

    def external_leq(self, a: Digraph, b: Digraph) -> bool:
        return is_substructure(a, b) if self.order == "sub" else is_embeddable(a, b)


class _Evaluator:
    def __init__(self, u: Universe):
        self.u = u
        self.memo: dict = {}
        self.fv: dict[int, tuple[str, ...]] = {}

    def freevars(self, f) -> tuple[str, ...]:
        key = id(f)
        fv = self.fv.get(key)
        if fv is None:
            fv = self.fv[key] = tuple(sorted(free_vars(f)))
        return fv

    def term(self, t: Term, env):
        # universe index, or the digraph itself for constants outside the universe
        if isinstance(t, Var):
            return env[t.name]
        idx = self.u.index.get(t.code)
        return idx if idx is not None else t.graph

    def graph(self, v) -> Digraph:
        return v if isinstance(v, Digraph) else self.u.catalog.graphs[v]

    def leq(self, a, b) -> bool:
        if isinstance(a, int) and isinstance(b, int):
            return bool((self.u.down[b] >> a) & 1)
        return self.u.external_leq(self.graph(a), self.graph(b))

    def eq(self, a, b) -> bool:
        if isinstance(a, int) and isinstance(b, int):
            return a == b
        ga, gb = self.graph(a), self.graph(b)
        return ga.n == gb.n and canonical_form(ga) == canonical_form(gb)

    def run(self, f, env: dict) -> bool:
        if isinstance(f, (Leq, Eq)):
            return self._run(f, env)
        fv = self.freevars(f)
        key = (id(f), tuple(env[v] for v in fv))
        hit = self.memo.get(key)
        if hit is not None:
            return hit
        val = self._run(f, env)
        self.memo[key] = val
        return val

    def _run(self, f, env) -> bool:
        if isinstance(f, Leq):
            return self.leq(self.term(f.left, env), self.term(f.right, env))
        if isinstance(f, Eq):
            return self.eq(self.term(f.left, env), self.term(f.right, env))
        if isinstance(f, Not):
            return not self.run(f.body, env)
        if isinstance(f, And):
            return self.run(f.left, env) and self.run(f.right, env)
        if isinstance(f, Or):
            return self.run(f.left, env) or self.run(f.right, env)
        if isinstance(f, Implies):
            return (not self.run(f.left, env)) or self.run(f.right, env)
        if isinstance(f, Iff):
            return self.run(f.left, env) == self.run(f.right, env)
        if isinstance(f, (Forall, Exists)):
            want = isinstance(f, Exists)
            inner = dict(env)
            for i in range(len(self.u)):
                inner[f.var] = i
                if self.run(f.body, inner) == want:
                    return want
            return not want
        raise TypeError(f"not a formula node: {f!r}")


def _binding_indices(u: Universe, binding: Mapping[str, str | Digraph]) -> dict[str, int]:
    env = {}
    for var, val in binding.items():
        code = canonical_form(val) if isinstance(val, Digraph) else val
        if code not in u.index:
            raise ValueError(f"value {code!r} for {var!r} is not in the universe of bound {u.bound}")
        env[var] = u.index[code]
    return env


def evaluate(f, u: Universe, binding: Mapping[str, str | Digraph] | None = None) -> bool:
    """Truth of ``f`` with quantifiers ranging over ``u``."""
    binding = binding or {}
    missing = sorted(free_vars(f) - set(binding))
    if missing:
        raise UnboundVariable(f"free variable(s) without a value: {', '.join(missing)}")
    return _Evaluator(u).run(f, _binding_indices(u, binding))


def defined_set(f, u: Universe) -> set[str]:
    """Elements of ``u`` satisfying a formula with exactly one free variable."""
    fv = sorted(free_vars(f))
    if len(fv) != 1:
        raise BadArity(f"expected exactly one free variable, found {len(fv)}: {fv}")
    ev = _Evaluator(u)
    return {code for i, code in enumerate(u.elements) if ev.run(f, {fv[0]: i})}
