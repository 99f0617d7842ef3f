"""Executable checks of the lemma chain behind the definability results."""
from __future__ import annotations

import inspect
import time

from ..digraph import Digraph
from ..errors import BadParams, BadSpec, DposetError
from ..families import SupportSpec, named
from .main_theorem import LOOP_RULE, decode, forward_witness, verify_main_theorem
from .report import REGISTRY, TARGETED, UNIVERSE, LemmaReport, mode_of
from .targeted import TARGETED_CHECKS
from .universe import DEFAULT_MARGIN, UNIVERSE_CHECKS

__all__ = [
    "REGISTRY", "LemmaReport", "LOOP_RULE", "decode", "forward_witness", "graph_arg",
    "verify_lemma", "verify_main_theorem", "verify_targeted", "mode_of", "default_run",
]


def graph_arg(value) -> Digraph:
    """A digraph given as a Digraph, a vocabulary name (``E2``, ``Larrow``) or a code."""
    if isinstance(value, Digraph):
        return value
    text = str(value)
    if ":" in text and text.split(":", 1)[0].isdigit():
        try:
            return Digraph.from_code(text)
        except (DposetError, ValueError) as exc:
            raise BadParams(f"bad digraph code {text!r}: {exc}") from None
    try:
        return named(text)
    except DposetError as exc:
        raise BadParams(str(exc)) from None


def verify_lemma(lemma_id: str, universe_bound: int = 4, margin: int | None = None) -> LemmaReport:
    """Check a universe-mode lemma against its oracle on the catalog up to ``universe_bound``."""
    mode = mode_of(lemma_id)
    if mode != UNIVERSE:
        raise BadParams(f"{lemma_id} is checked on constructed witnesses; use verify_targeted")
    margin = DEFAULT_MARGIN[lemma_id] if margin is None else margin
    if universe_bound < 1 or margin < 0:
        raise BadParams(f"bound {universe_bound} and margin {margin} must be positive / nonnegative")
    rep = LemmaReport(lemma_id, mode, {"universe_bound": universe_bound, "margin": margin})
    start = time.perf_counter()
    if universe_bound - margin < 1:
        rep.skip(f"bound {universe_bound} with margin {margin} leaves no element to compare")
    else:
        UNIVERSE_CHECKS[lemma_id](rep, universe_bound, margin)
    rep.elapsed = time.perf_counter() - start
    return rep


def _main_theorem(params: dict) -> LemmaReport:
    allowed = {"graph", "l_sizes", "d_sizes", "samples", "seed"}
    unknown = set(params) - allowed
    if unknown:
        raise BadParams(f"unknown main-theorem parameters {sorted(unknown)}")
    g = graph_arg(params.get("graph", "L1"))
    spec = None
    if "l_sizes" in params or "d_sizes" in params:
        spec = SupportSpec(params.get("l_sizes", ()), params.get("d_sizes", ()))
    try:
        return verify_main_theorem(g, spec, samples=int(params.get("samples", 1000)),
                                   seed=int(params.get("seed", 0)))
    except BadSpec as exc:
        raise BadParams(str(exc)) from None


def verify_targeted(lemma_id: str, params: dict | None = None) -> LemmaReport:
    """Check a targeted lemma on its constructed witnesses; ``params`` override the defaults."""
    mode = mode_of(lemma_id)
    if mode != TARGETED:
        raise BadParams(f"{lemma_id} is checked over the catalog; use verify_lemma")
    params = dict(params or {})
    if lemma_id == "main-theorem":
        return _main_theorem(params)
    check = TARGETED_CHECKS[lemma_id]
    accepted = list(inspect.signature(check).parameters)[1:]
    unknown = set(params) - set(accepted)
    if unknown:
        raise BadParams(f"unknown parameters {sorted(unknown)} for {lemma_id}; accepted: {accepted}")
    rep = LemmaReport(lemma_id, mode, params)
    start = time.perf_counter()
    check(rep, **params)
    rep.elapsed = time.perf_counter() - start
    return rep


def default_run(lemma_id: str) -> LemmaReport:
    """The registry entry at its documented defaults."""
    return verify_lemma(lemma_id) if mode_of(lemma_id) == UNIVERSE else verify_targeted(lemma_id)
