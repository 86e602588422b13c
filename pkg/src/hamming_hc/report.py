from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any


@dataclass
class VerificationReport:
    """Outcome of one exhaustive or sampled inequality scan.

    ``worst_margin`` is the smallest (rhs - lhs) seen; it is a ``Fraction`` for
    exact scans and a float for numerical ones. Violations are recorded, not
    raised.
    """

    lemma: str
    n: int | None
    params: dict[str, Any]
    cells_checked: int = 0
    violations: list[dict[str, Any]] = field(default_factory=list)
    worst_margin: Fraction | float | None = None
    witness: dict[str, Any] | None = None
    sampled: bool = False
    extra: dict[str, Any] = field(default_factory=dict)

    max_violations_kept = 50

    @property
    def passed(self) -> bool:
        return not self.violations

    def observe(self, margin, cell: dict[str, Any]):
        """Record one checked cell with margin = rhs - lhs (negative means violation)."""
        self.cells_checked += 1
        if self.worst_margin is None or margin < self.worst_margin:
            self.worst_margin = margin
            self.witness = dict(cell)
        if margin < 0 and len(self.violations) < self.max_violations_kept:
            self.violations.append(dict(cell))

    def merge(self, other: VerificationReport) -> VerificationReport:
        self.cells_checked += other.cells_checked
        room = self.max_violations_kept - len(self.violations)
        self.violations.extend(other.violations[: max(room, 0)])
        if other.worst_margin is not None and (
            self.worst_margin is None or other.worst_margin < self.worst_margin
        ):
            self.worst_margin = other.worst_margin
            self.witness = other.witness
        return self

    def to_dict(self) -> dict[str, Any]:
        if self.worst_margin is None:
            num = den = None
            approx = None
        else:
            frac = Fraction(self.worst_margin)
            num, den = frac.numerator, frac.denominator
            approx = float(self.worst_margin)
        return {
            "lemma": self.lemma,
            "n": self.n,
            "params": _jsonable(self.params),
            "cells_checked": self.cells_checked,
            "violations": _jsonable(self.violations),
            "worst_margin_num": num,
            "worst_margin_den": den,
            "worst_margin": approx,
            "witness": _jsonable(self.witness),
            "sampled": self.sampled,
            "passed": self.passed,
            "extra": _jsonable(self.extra),
        }

    def to_json(self) -> str:
        return dumps(self.to_dict())


def _jsonable(obj):
    if isinstance(obj, dict):
        return {str(k): _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, Fraction):
        return str(obj) if obj.denominator != 1 else obj.numerator
    if hasattr(obj, "item"):  # numpy scalars
        return obj.item()
    return obj


def dumps(obj) -> str:
    """Deterministic JSON: sorted keys, shortest round-trip float repr."""
    return json.dumps(_jsonable(obj), sort_keys=True, indent=2, allow_nan=True)
