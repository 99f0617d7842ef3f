import random

import pytest

from dposet.digraph import Digraph, canonical_form, is_IO
from dposet.errors import BadArity, FormulaSyntaxError, UnboundVariable, UnknownConstant
from dposet.families import family
from dposet.lemmas.universe import io_formula_text
from dposet.logic import (
    And, Const, Eq, Exists, Forall, Implies, Leq, Not, Universe, Var, defined_set, evaluate, free_vars,
    parse, resolve_constant, to_text,
)
from dposet.matching import is_embeddable, is_substructure
from oracles import naive_eval, random_formula


def test_parse_examples():
    f = parse("forall y. (y <= x -> y = x)")
    assert f == Forall("y", Implies(Leq(Var("y"), Var("x")), Eq(Var("y"), Var("x"))))
    assert free_vars(f) == {"x"}
    g = parse("x < E2")
    assert isinstance(g, And) and isinstance(g.right, Not)
    c = parse("#2:0010 <= x").left
    assert isinstance(c, Const) and c.code == "2:0010"
    assert parse("male:5:L <= x").left.graph.n == 7


@pytest.mark.parametrize("text, line, col", [
    ("x <=", 1, 5),
    ("x <= y &", 1, 9),
    ("forall . x = x", 1, 8),
    ("x <= y\n  & $", 2, 5),
    ("(x = y", 1, 7),
    ("x y", 1, 3),
])
def test_syntax_errors_report_position(text, line, col):
    with pytest.raises(FormulaSyntaxError) as info:
        parse(text)
    assert (info.value.line, info.value.column) == (line, col)


def test_shadowing_is_rejected():
    with pytest.raises(FormulaSyntaxError) as info:
        parse("forall y. exists y. y <= y")
    assert info.value.column == 18
    parse("(forall y. y <= y) & exists y. y = y")


def test_unknown_constant():
    with pytest.raises(UnknownConstant):
        parse("x <= O2")
    with pytest.raises(UnknownConstant):
        resolve_constant("#2:011")


def test_round_trip_random_formulas():
    rng = random.Random(5)
    for _ in range(50):
        f = random_formula(rng, free=("x", "v"), depth=4)
        assert parse(to_text(f)) == f


@pytest.mark.parametrize("order", ["sub", "emb"])
def test_evaluator_agrees_with_naive_semantics(order):
    u = Universe(3, order)
    graphs = dict(zip(u.elements, u.catalog.graphs))
    rel = is_substructure if order == "sub" else is_embeddable
    outside = {}

    def graph_of(code):
        if code in graphs:
            return graphs[code]
        return outside.setdefault(code, Digraph.from_code(code))

    leq = lambda a, b: rel(graph_of(a), graph_of(b))
    rng = random.Random(17)
    for _ in range(60):
        f = random_formula(rng, free=("x",), depth=3)
        if "x" not in free_vars(f):
            f = And(f, Eq(Var("x"), Var("x")))
        expect = {c for c in u.elements if naive_eval(f, u.elements, leq, {"x": c})}
        assert defined_set(f, u) == expect


def test_minimal_elements():
    u = Universe(3)
    minimal = defined_set(parse("forall y. (y <= x -> y = x)"), u)
    assert minimal == {"1:0", "1:1"}
    assert defined_set(parse("x = x"), u) == set(u.elements)
    atoms_emb = defined_set(parse("forall y. (y <= x -> y = x)"), Universe(3, "emb"))
    assert atoms_emb == {"1:0"}


def test_evaluate_errors():
    u = Universe(2)
    with pytest.raises(BadArity):
        defined_set(parse("x <= y"), u)
    with pytest.raises(BadArity):
        defined_set(parse("E1 <= E2"), u)
    with pytest.raises(UnboundVariable):
        evaluate(parse("x <= E2"), u)
    assert evaluate(parse("x <= E2"), u, {"x": family("E", 1)})
    assert evaluate(parse("E2 <= O3"), u) is False
    assert evaluate(parse("I2 <= O3"), u) is True
    with pytest.raises(ValueError):
        evaluate(parse("x <= E2"), u, {"x": "3:000000000"})


def test_constants_name_the_same_element():
    u = Universe(3)
    assert defined_set(parse("x = I2"), u) == {canonical_form(family("I", 2))}
    assert defined_set(parse("x = #2:0010"), u) == defined_set(parse("x = I2"), u)
    assert defined_set(parse("x = L1"), u) == {"1:1"}


@pytest.mark.parametrize("margin", [0, 1, 2])
def test_io_formula_is_exact_at_every_margin(margin):
    bound = 4
    u = Universe(bound)
    got = defined_set(parse(io_formula_text()), u)
    graphs = dict(zip(u.elements, u.catalog.graphs))
    top = bound - margin
    inner = lambda s: {c for c in s if graphs[c].n <= top}
    assert inner(got) == {c for c in u.elements if graphs[c].n <= top and is_IO(graphs[c])}
