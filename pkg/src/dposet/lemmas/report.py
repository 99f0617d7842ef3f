"""Lemma registry and report record."""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any

from ..errors import UnknownLemma

MAX_STORED = 50
UNIVERSE = "universe"
TARGETED = "targeted"

REGISTRY: dict[str, str] = {
    "io-def": UNIVERSE,
    "io-char": UNIVERSE,
    "circles-set": UNIVERSE,
    "loop-parts": UNIVERSE,
    "arrow-rel": TARGETED,
    "addition": TARGETED,
    "same-size": UNIVERSE,
    "multiplication": TARGETED,
    "io-union": TARGETED,
    "distinct-circles": UNIVERSE,
    "counted-attach": TARGETED,
    "circle-count": TARGETED,
    "gn-part": TARGETED,
    "union-with-circles": TARGETED,
    "male-rel": TARGETED,
    "attach-rel": TARGETED,
    "support-rel": TARGETED,
    "certificate": UNIVERSE,
    "main-theorem": TARGETED,
}


def mode_of(lemma_id: str) -> str:
    try:
        return REGISTRY[lemma_id]
    except KeyError:
        raise UnknownLemma(f"unknown lemma id {lemma_id!r}; known: {', '.join(REGISTRY)}") from None


@dataclass
class LemmaReport:
    id: str
    mode: str
    params: dict[str, Any]
    status: str = "pass"
    counterexamples: list[tuple[str, ...]] = field(default_factory=list)
    elapsed: float = 0.0
    reason: str | None = None
    details: dict[str, Any] = field(default_factory=dict)

    def fail(self, *codes: str, note: str | None = None) -> None:
        self.status = "fail"
        self.details["mismatch_count"] = self.details.get("mismatch_count", 0) + 1
        if len(self.counterexamples) < MAX_STORED:
            self.counterexamples.append(tuple(c for c in codes if c is not None) or ("<unnamed>",))
            if note:
                self.details.setdefault("failures", []).append(note)

    def check(self, ok: bool, *codes: str, note: str | None = None) -> bool:
        if not ok:
            self.fail(*codes, note=note)
        return ok

    def skip(self, reason: str) -> None:
        self.status = "skipped"
        self.reason = reason

    @property
    def passed(self) -> bool:
        return self.status == "pass"

    def to_json(self) -> dict[str, Any]:
        out = {
            "id": self.id,
            "mode": self.mode,
            "params": self.params,
            "status": self.status,
            "counterexamples": [list(c) for c in self.counterexamples],
            "elapsed": round(self.elapsed, 3),
        }
        if self.reason is not None:
            out["reason"] = self.reason
        if self.details:
            out["details"] = self.details
        return out
