"""Structured results of axiom checks and theorem verifications.

A CheckReport lists one entry per axiom so differential tests can
compare verdict-for-verdict. Witnesses are basis index tuples; every
checker scans tuples in lexicographic order and records the first
failure, so witnesses are deterministic.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Iterator


class HypothesisError(Exception):
    """A construction's named hypothesis fails on the given instance."""

    def __init__(self, hypothesis: str, detail: str = ""):
        self.hypothesis = hypothesis
        self.detail = detail
        message = hypothesis if not detail else f"{hypothesis}: {detail}"
        super().__init__(message)


class ConclusionError(Exception):
    """A verified theorem conclusion failed; this flags an implementation bug."""


@dataclass(frozen=True)
class AxiomCheck:
    """Outcome of one axiom: identifier, verdict, first failing basis tuple."""

    axiom: str
    ok: bool
    witness: tuple[int, ...] | None = None

    def to_json(self) -> dict:
        data: dict = {"axiom": self.axiom, "ok": self.ok}
        if self.witness is not None:
            data["witness"] = list(self.witness)
        return data

    @classmethod
    def from_json(cls, data: dict) -> "AxiomCheck":
        witness = data.get("witness")
        return cls(data["axiom"], data["ok"], tuple(witness) if witness is not None else None)


class CheckReport:
    """Ordered list of axiom outcomes for one structure."""

    def __init__(self, name: str, checks: Iterable[AxiomCheck]):
        self.name = name
        self.checks = list(checks)

    @property
    def passed(self) -> bool:
        return all(c.ok for c in self.checks)

    def failures(self) -> list[AxiomCheck]:
        return [c for c in self.checks if not c.ok]

    def __iter__(self) -> Iterator[AxiomCheck]:
        return iter(self.checks)

    def __getitem__(self, axiom: str) -> AxiomCheck:
        for c in self.checks:
            if c.axiom == axiom:
                return c
        raise KeyError(axiom)

    def extend(self, checks: Iterable[AxiomCheck]) -> None:
        self.checks.extend(checks)

    def prefixed(self, prefix: str) -> list[AxiomCheck]:
        return [AxiomCheck(f"{prefix}{c.axiom}", c.ok, c.witness) for c in self.checks]

    def to_json(self) -> dict:
        return {"name": self.name, "passed": self.passed, "axioms": [c.to_json() for c in self.checks]}

    @classmethod
    def from_json(cls, data: dict) -> "CheckReport":
        return cls(data["name"], [AxiomCheck.from_json(c) for c in data["axioms"]])

    def __repr__(self) -> str:
        status = "pass" if self.passed else "fail"
        return f"CheckReport({self.name}: {status}, {len(self.checks)} axioms)"


@dataclass
class EquivalenceReport:
    """Two or more verdicts a theorem asserts to be equal.

    ``applicable`` is False when a side condition (for instance, a unit
    that must exist) is absent; then no verdicts are recorded.
    """

    name: str
    verdicts: dict = field(default_factory=dict)
    applicable: bool = True
    reason: str = ""
    extras: dict = field(default_factory=dict)

    @property
    def agree(self) -> bool:
        if not self.applicable:
            return True
        values = list(self.verdicts.values())
        return all(v == values[0] for v in values)

    @property
    def holds(self) -> bool:
        """All verdicts are True (the instance satisfies the theorem's sides)."""
        return self.applicable and all(self.verdicts.values())

    def to_json(self) -> dict:
        return {
            "name": self.name,
            "applicable": self.applicable,
            "reason": self.reason,
            "verdicts": dict(self.verdicts),
            "agree": self.agree,
            "extras": dict(self.extras),
        }

    def __repr__(self) -> str:
        if not self.applicable:
            return f"EquivalenceReport({self.name}: not applicable: {self.reason})"
        verdicts = ", ".join(f"{k}={v}" for k, v in self.verdicts.items())
        return f"EquivalenceReport({self.name}: {verdicts}, agree={self.agree})"
