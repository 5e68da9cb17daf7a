"""Outcome record for a single feasibility or identity test."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any

PASS = "pass"
FAIL = "fail"
INAPPLICABLE = "inapplicable"


@dataclass(frozen=True)
class Verdict:
    test_id: str
    status: str
    witness: Any = None
    citation: str = ""
    note: str = ""

    def __post_init__(self):
        if self.status not in (PASS, FAIL, INAPPLICABLE):
            raise ValueError(f"unknown status {self.status!r}")
        if self.status == FAIL and self.witness is None:
            raise ValueError(f"failing verdict {self.test_id} needs a witness")
        if self.status == INAPPLICABLE and not self.note:
            raise ValueError(f"inapplicable verdict {self.test_id} needs a reason")

    @property
    def passed(self) -> bool:
        return self.status == PASS

    @property
    def failed(self) -> bool:
        return self.status == FAIL

    def to_json(self) -> dict:
        return {
            "test_id": self.test_id,
            "status": self.status,
            "witness": encode_value(self.witness),
            "citation": self.citation,
            "note": self.note,
        }

    @classmethod
    def from_json(cls, doc: dict) -> "Verdict":
        return cls(doc["test_id"], doc["status"], decode_value(doc["witness"]), doc["citation"], doc["note"])


def check(test_id: str, ok: bool, witness=None, citation: str = "", note: str = "") -> Verdict:
    """Pass/fail verdict; a failing one defaults its witness to False."""
    if ok:
        return Verdict(test_id, PASS, witness, citation, note)
    return Verdict(test_id, FAIL, witness if witness is not None else False, citation, note)


def inapplicable(test_id: str, reason: str, citation: str = "") -> Verdict:
    return Verdict(test_id, INAPPLICABLE, None, citation, reason)


def encode_value(x: Any) -> Any:
    """JSON-safe encoding: Fractions become "p/q" strings, containers recurse."""
    if isinstance(x, Fraction):
        return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"
    if isinstance(x, bool) or x is None or isinstance(x, str):
        return x
    if isinstance(x, int):
        return str(x)
    if isinstance(x, (list, tuple)):
        return [encode_value(v) for v in x]
    if isinstance(x, dict):
        return {str(k): encode_value(v) for k, v in x.items()}
    return str(x)


def decode_value(x: Any) -> Any:
    from .rational import parse_rational

    if isinstance(x, str):
        try:
            return parse_rational(x)
        except ValueError:
            return x
    if isinstance(x, list):
        return [decode_value(v) for v in x]
    if isinstance(x, dict):
        return {k: decode_value(v) for k, v in x.items()}
    return x


@dataclass
class Report:
    """Aggregated verdicts for one input."""

    label: str
    verdicts: list[Verdict] = field(default_factory=list)
    data: dict = field(default_factory=dict)
    inconclusive: bool = False

    @property
    def status(self) -> str:
        if any(v.failed for v in self.verdicts):
            return "infeasible"
        if self.inconclusive:
            return "inconclusive"
        return "feasible"

    def failing(self) -> list[Verdict]:
        return [v for v in self.verdicts if v.failed]

    def to_json(self) -> dict:
        return {
            "format": 1,
            "label": self.label,
            "status": self.status,
            "inconclusive": self.inconclusive,
            "verdicts": [v.to_json() for v in self.verdicts],
            "data": encode_value(self.data),
        }

    @classmethod
    def from_json(cls, doc: dict) -> "Report":
        return cls(
            label=doc["label"],
            verdicts=[Verdict.from_json(v) for v in doc["verdicts"]],
            data=decode_value(doc["data"]),
            inconclusive=doc["inconclusive"],
        )
