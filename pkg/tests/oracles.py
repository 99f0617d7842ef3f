"""Independent reference implementations used only by the tests."""
from __future__ import annotations

import itertools
import random

from dposet.digraph import Digraph
from dposet.logic import And, Const, Eq, Exists, Forall, Iff, Implies, Leq, Not, Or, Var


def adjacency(g: Digraph) -> list[list[int]]:
    return [[(g.rows[i] >> j) & 1 for j in range(g.n)] for i in range(g.n)]


def brute_canon(g: Digraph) -> str:
    """Minimum row-major matrix over all n! relabelings."""
    a = adjacency(g)
    best = None
    for p in itertools.permutations(range(g.n)):
        # vertex p[k] becomes position k
        bits = "".join(str(a[p[i]][p[j]]) for i in range(g.n) for j in range(g.n))
        if best is None or bits < best:
            best = bits
    return f"{g.n}:{best}"


def brute_sub(g: Digraph, h: Digraph) -> bool:
    """Some injection preserves edges and non-edges (loops included)."""
    a, b = adjacency(g), adjacency(h)
    for img in itertools.permutations(range(h.n), g.n):
        if all(a[i][j] == b[img[i]][img[j]] for i in range(g.n) for j in range(g.n)):
            return True
    return False


def brute_emb(g: Digraph, h: Digraph) -> bool:
    """Some injection carries every edge to an edge."""
    a, b = adjacency(g), adjacency(h)
    for img in itertools.permutations(range(h.n), g.n):
        if all(b[img[i]][img[j]] for i in range(g.n) for j in range(g.n) if a[i][j]):
            return True
    return False


def all_matrices(n: int):
    for bits in range(1 << (n * n)):
        yield Digraph(n, [(bits >> (i * n)) & ((1 << n) - 1) for i in range(n)])


def naive_eval(f, elements, leq, env) -> bool:
    """Plain recursive Tarskian semantics; ``leq`` and equality act on codes."""
    def val(t):
        return env[t.name] if isinstance(t, Var) else t.code

    if isinstance(f, Leq):
        return leq(val(f.left), val(f.right))
    if isinstance(f, Eq):
        return val(f.left) == val(f.right)
    if isinstance(f, Not):
        return not naive_eval(f.body, elements, leq, env)
    if isinstance(f, And):
        return naive_eval(f.left, elements, leq, env) and naive_eval(f.right, elements, leq, env)
    if isinstance(f, Or):
        return naive_eval(f.left, elements, leq, env) or naive_eval(f.right, elements, leq, env)
    if isinstance(f, Implies):
        return (not naive_eval(f.left, elements, leq, env)) or naive_eval(f.right, elements, leq, env)
    if isinstance(f, Iff):
        return naive_eval(f.left, elements, leq, env) == naive_eval(f.right, elements, leq, env)
    if isinstance(f, Forall):
        return all(naive_eval(f.body, elements, leq, {**env, f.var: e}) for e in elements)
    if isinstance(f, Exists):
        return any(naive_eval(f.body, elements, leq, {**env, f.var: e}) for e in elements)
    raise TypeError(f)


CONSTANTS = ["E1", "L1", "E2", "I2", "F2", "L2", "Larrow", "#2:0110", "#1:1", "I3", "O3", "E3"]


def random_formula(rng: random.Random, free=("x",), depth: int = 3, bound_names=("y", "z", "w")):
    """Random well-scoped formula whose free variables are among ``free``."""
    scope = list(free)

    def term():
        if scope and rng.random() < 0.75:
            return Var(rng.choice(scope))
        from dposet.logic import resolve_constant
        return resolve_constant(rng.choice(CONSTANTS))

    def gen(d):
        r = rng.random()
        if d == 0 or r < 0.25:
            return (Leq if rng.random() < 0.6 else Eq)(term(), term())
        if r < 0.4:
            return Not(gen(d - 1))
        if r < 0.75:
            cls = rng.choice([And, Or, Implies, Iff])
            return cls(gen(d - 1), gen(d - 1))
        unused = [v for v in bound_names if v not in scope]
        if not unused:
            return Not(gen(d - 1))
        v = rng.choice(unused)
        scope.append(v)
        body = gen(d - 1)
        scope.pop()
        return (Forall if rng.random() < 0.5 else Exists)(v, body)

    return gen(depth)
