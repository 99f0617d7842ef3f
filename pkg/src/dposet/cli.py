"""Command-line front end.  Output is JSON on stdout (``--pretty`` for tables).

Exit status: 0 success, 1 verification failure, 2 usage error.
"""
from __future__ import annotations

import argparse
import json
import os
import sys

from . import automorphisms as aut
from .catalog import DEFAULT_MAX_N, HARD_MAX_N, export, get_catalog
from .digraph import Digraph, canonical_form, canonical_labeling, read_dgf
from .errors import DposetError
from .families import SupportSpec
from .lemmas import REGISTRY, graph_arg, mode_of, verify_lemma, verify_main_theorem, verify_targeted
from .logic import Universe, defined_set, evaluate, free_vars, parse
from .matching import is_embeddable, is_isomorphic, is_substructure


class UsageError(Exception):
    """Bad flag value; reported with the flag name and exit status 2."""

    def __init__(self, flag: str, message: str):
        super().__init__(f"{flag}: {message}")


# output --------------------------------------------------------------------------


def _table(rows: list[dict]) -> str:
    keys: list[str] = []
    for r in rows:
        keys.extend(k for k in r if k not in keys)
    cells = [[_scalar(r.get(k, "")) for k in keys] for r in rows]
    widths = [max(len(k), *(len(c[i]) for c in cells)) for i, k in enumerate(keys)]
    lines = ["  ".join(k.ljust(w) for k, w in zip(keys, widths))]
    lines.append("  ".join("-" * w for w in widths))
    lines.extend("  ".join(c.ljust(w) for c, w in zip(row, widths)) for row in cells)
    return "\n".join(lines)


def _scalar(v) -> str:
    return v if isinstance(v, str) else json.dumps(v, sort_keys=True)


def _pretty(doc, indent: str = "") -> str:
    if isinstance(doc, dict):
        out = []
        for k, v in doc.items():
            if isinstance(v, list) and v and all(isinstance(x, dict) for x in v):
                out.append(f"{indent}{k}:")
                out.extend(indent + "  " + line for line in _table(v).split("\n"))
            elif isinstance(v, dict) and v:
                out.append(f"{indent}{k}:")
                out.append(_pretty(v, indent + "  "))
            else:
                out.append(f"{indent}{k}: {_scalar(v)}")
        return "\n".join(out)
    if isinstance(doc, list) and doc and all(isinstance(x, dict) for x in doc):
        return _table(doc)
    return indent + _scalar(doc)


def _emit(doc, args) -> None:
    if getattr(args, "pretty", False):
        print(_pretty(doc))
    else:
        print(json.dumps(doc, sort_keys=False))


def _report_doc(rep, args) -> dict:
    doc = rep.to_json()
    if not args.timing:
        doc.pop("elapsed", None)
    return doc


# argument helpers ------------------------------------------------------------------


def _graph_file(flag: str, value: str) -> Digraph:
    """A DGF file; vocabulary names and codes are accepted when no such file exists."""
    if os.path.exists(value):
        try:
            return read_dgf(value)
        except (DposetError, OSError, UnicodeDecodeError) as exc:
            raise UsageError(flag, f"{value}: {exc}") from None
    try:
        return graph_arg(value)
    except DposetError:
        raise UsageError(flag, f"{value!r} is neither a DGF file nor a digraph name/code") from None


def _int_list(flag: str, value: str | None) -> list[int] | None:
    if value is None:
        return None
    try:
        return [int(t) for t in value.split(",") if t.strip()]
    except ValueError:
        raise UsageError(flag, f"expected comma-separated integers, got {value!r}") from None


def _split_params(text: str) -> list[str]:
    parts, depth, cur = [], 0, ""
    for ch in text:
        if ch in "[(":
            depth += 1
        elif ch in "])":
            depth -= 1
        if ch == "," and depth == 0:
            parts.append(cur)
            cur = ""
        else:
            cur += ch
    if cur:
        parts.append(cur)
    return parts


def _param_value(text: str):
    text = text.strip()
    if text.startswith("(") and text.endswith(")"):
        text = "[" + text[1:-1] + "]"
    try:
        value = json.loads(text)
    except json.JSONDecodeError:
        if text.startswith("["):
            return [t.strip() for t in text[1:-1].split(",") if t.strip()]
        return text
    return value


def _params(flag: str, values: list[str]) -> dict:
    out = {}
    for chunk in values:
        for item in _split_params(chunk):
            if "=" not in item:
                raise UsageError(flag, f"expected key=value, got {item!r}")
            k, v = item.split("=", 1)
            out[k.strip().replace("-", "_")] = _param_value(v)
    return out


# commands ------------------------------------------------------------------------


def cmd_enumerate(args) -> int:
    if not 1 <= args.max_n <= HARD_MAX_N:
        raise UsageError("--max-n", f"must be between 1 and {HARD_MAX_N}")
    cat = get_catalog(args.max_n, allow_large=args.max_n > DEFAULT_MAX_N)
    doc = json.loads(export(cat, "levels"))
    if args.summary:
        doc.pop("levels")
    if args.pretty:
        print(_table([{"n": lv.n, "types": len(lv)} for lv in cat.levels]))
    else:
        print(json.dumps(doc))
    return 0


def cmd_hasse(args) -> int:
    if args.max_level < 1:
        raise UsageError("--max-level", "must be positive")
    bound = min(args.max_level, DEFAULT_MAX_N)
    cat = get_catalog(bound)
    text = export(cat, "hasse-sub" if args.order == "sub" else "hasse-emb", args.format, args.max_level)
    sys.stdout.write(text)
    return 0


def cmd_fo_eval(args) -> int:
    try:
        with open(args.formula, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise UsageError("--formula", str(exc)) from None
    f = parse(text)
    binding = {}
    for item in args.bind:
        if "=" not in item:
            raise UsageError("--bind", f"expected var=CONST, got {item!r}")
        var, const = item.split("=", 1)
        binding[var.strip()] = const.strip()
    if not 1 <= args.universe_n <= DEFAULT_MAX_N:
        raise UsageError("--universe-n", f"must be between 1 and {DEFAULT_MAX_N}")
    u = Universe(args.universe_n, order=args.order)
    resolved = {}
    for var, const in binding.items():
        try:
            resolved[var] = canonical_form(graph_arg(const))
        except DposetError as exc:
            raise UsageError("--bind", str(exc)) from None
    free = sorted(free_vars(f) - set(resolved))
    doc = {"formula": text.strip(), "universe_n": args.universe_n, "order": args.order}
    if not free:
        doc["value"] = evaluate(f, u, resolved)
    elif len(free) == 1 and not resolved:
        doc["free"] = free[0]
        members = sorted(defined_set(f, u), key=lambda c: (int(c.split(":")[0]), c))
        doc["size"] = len(members)
        doc["defined_set"] = members
    else:
        raise UsageError("--bind", f"unbound variables {free}: bind all or leave exactly one free")
    _emit(doc, args)
    return 0


def _rule_label(r) -> str:
    return r.name or f"vmap={list(r.vmap)} pmap={list(r.pmap)}"


def _rules_arg(args):
    if args.rule:
        try:
            return [aut.rule_of_generator(name) for name in args.rule]
        except ValueError as exc:
            raise UsageError("--rule", str(exc)) from None
    if args.scope == "closure":
        return aut.sorted_rules(aut.closure(aut.generators()))
    return aut.generators()


def cmd_aut(args) -> int:
    if args.action == "closure":
        gens = aut.generators()
        full = aut.closure(gens)
        no_phi1 = aut.closure([g for g in gens if g.name != "phi1"])
        pis = aut.closure([g for g in gens if g.name.startswith("pi:")])
        doc = {"generators": [g.name for g in gens], "order": len(full),
               "order_without_phi1": len(no_phi1), "order_pi": len(pis)}
        _emit(doc, args)
        return 0
    if args.action == "identities":
        doc = aut.verify_structure(args.max_n)
        _emit(doc, args)
        return 0 if doc["status"] == "pass" else 1
    if not 1 <= args.max_n <= DEFAULT_MAX_N:
        raise UsageError("--max-n", f"must be between 1 and {DEFAULT_MAX_N}")
    cat = get_catalog(args.max_n)
    results = []
    for r in _rules_arg(args):
        rep = aut.verify_automorphism(r, args.max_n, catalog=cat)
        results.append({"rule": _rule_label(r), "status": rep["status"],
                         **({"failed": [c for c in rep["checks"] if c["status"] != "pass"]}
                            if rep["status"] != "pass" else {})})
    failed = [r for r in results if r["status"] != "pass"]
    doc = {"max_n": args.max_n, "checked": len(results), "failed": len(failed),
           "status": "pass" if not failed else "fail",
           "results": results if args.verbose or failed else []}
    _emit(doc, args)
    return 0 if not failed else 1


def cmd_verify_lemma(args) -> int:
    mode = mode_of(args.id)
    if mode == "universe":
        if args.params:
            raise UsageError("--params", f"{args.id} takes --universe-n and --margin, not --params")
        rep = verify_lemma(args.id, args.universe_n, args.margin)
    else:
        if args.margin is not None or args.universe_n != DEFAULT_MAX_N:
            raise UsageError("--universe-n", f"{args.id} is checked on constructions; use --params")
        rep = verify_targeted(args.id, _params("--params", args.params))
    _emit(_report_doc(rep, args), args)
    return 1 if rep.status == "fail" else 0


def cmd_main_theorem(args) -> int:
    g = _graph_file("--graph", args.graph)
    ls, ds = _int_list("--l-sizes", args.l_sizes), _int_list("--d-sizes", args.d_sizes)
    spec = None
    if ls is not None or ds is not None:
        spec = SupportSpec(ls or [], ds or [])
    if args.samples < 0:
        raise UsageError("--samples", "must be nonnegative")
    rep = verify_main_theorem(g, spec, samples=args.samples, seed=args.seed)
    _emit(_report_doc(rep, args), args)
    return 1 if rep.status == "fail" else 0


def cmd_graph(args) -> int:
    a = _graph_file("--a", args.a)
    if args.op == "canon":
        _emit({"canonical": canonical_form(a), "labeling": [v + 1 for v in canonical_labeling(a)]}, args)
        return 0
    if args.b is None:
        raise UsageError("--b", f"--op {args.op} needs a second digraph")
    b = _graph_file("--b", args.b)
    fn = {"iso": is_isomorphic, "sub": is_substructure, "emb": is_embeddable}[args.op]
    _emit(fn(a, b), args)
    return 0


# parser --------------------------------------------------------------------------


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(2, f"{self.prog}: error: {message}\n")


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="dposet", description="Finite checks on the poset of digraphs.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def common(sp):
        sp.add_argument("--pretty", action="store_true", help="human-readable tables instead of JSON")
        return sp

    s = common(sub.add_parser("enumerate", help="isomorphism types per vertex count"))
    s.add_argument("--max-n", type=int, default=DEFAULT_MAX_N)
    s.add_argument("--summary", action="store_true", help="sizes only, without member codes")
    s.set_defaults(func=cmd_enumerate)

    s = sub.add_parser("hasse", help="cover relation of either order")
    s.add_argument("--order", choices=("sub", "emb"), default="sub")
    s.add_argument("--max-level", type=int, default=2)
    s.add_argument("--format", choices=("dot", "json"), default="json")
    s.set_defaults(func=cmd_hasse)

    s = common(sub.add_parser("fo-eval", help="evaluate a formula over a truncated universe"))
    s.add_argument("--formula", required=True, help="file holding the formula text")
    s.add_argument("--universe-n", type=int, default=3)
    s.add_argument("--order", choices=("sub", "emb"), default="sub")
    s.add_argument("--bind", action="append", default=[], metavar="VAR=CONST")
    s.set_defaults(func=cmd_fo_eval)

    s = common(sub.add_parser("aut", help="local automorphism rules"))
    s.add_argument("--action", choices=("closure", "verify", "identities"), required=True)
    s.add_argument("--max-n", type=int, default=3)
    s.add_argument("--scope", choices=("generators", "closure"), default="generators")
    s.add_argument("--rule", action="append", help="verify only this generator (repeatable)")
    s.add_argument("--verbose", action="store_true", help="list every rule's result")
    s.set_defaults(func=cmd_aut)

    s = common(sub.add_parser("verify-lemma", help="run one lemma check"))
    s.add_argument("--id", required=True, choices=sorted(REGISTRY), metavar="ID")
    s.add_argument("--universe-n", type=int, default=DEFAULT_MAX_N)
    s.add_argument("--margin", type=int)
    s.add_argument("--params", action="append", default=[], metavar="K=V,...")
    s.add_argument("--timing", action="store_true", help="include elapsed seconds")
    s.set_defaults(func=cmd_verify_lemma)

    s = common(sub.add_parser("main-theorem", help="decode pipeline on the edge-supported construct"))
    s.add_argument("--graph", required=True, help="DGF file (or digraph name/code)")
    s.add_argument("--l-sizes")
    s.add_argument("--d-sizes")
    s.add_argument("--samples", type=int, default=1000)
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--timing", action="store_true", help="include elapsed seconds")
    s.set_defaults(func=cmd_main_theorem)

    s = common(sub.add_parser("graph", help="canonical form and order queries"))
    s.add_argument("--op", choices=("canon", "iso", "sub", "emb"), required=True)
    s.add_argument("--a", required=True, help="DGF file (or digraph name/code)")
    s.add_argument("--b")
    s.set_defaults(func=cmd_graph)
    return p


def run(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:  # usage errors (2) and --help (0)
        return exc.code if isinstance(exc.code, int) else 2
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"dposet {args.command}: error: {exc}", file=sys.stderr)
        return 2
    except DposetError as exc:
        print(f"dposet {args.command}: error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 2


def main() -> None:
    sys.exit(run())
