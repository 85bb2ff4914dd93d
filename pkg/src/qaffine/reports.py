"""Verification report container shared by the sweep operations."""

from __future__ import annotations

import json
from dataclasses import dataclass, field


@dataclass
class Report:
    """Outcome of an exhaustive check: zero failures means the check passed.

    Failures record the offending input together with both evaluated sides,
    already rendered as strings so reports are self-contained.
    """

    check: str
    degree: int
    cases: int = 0
    failures: list = field(default_factory=list)
    seed: int | None = None

    @property
    def ok(self):
        return not self.failures

    def add_case(self):
        self.cases += 1

    def fail(self, input_repr, lhs_repr, rhs_repr):
        self.failures.append({"input": input_repr, "lhs": lhs_repr, "rhs": rhs_repr})

    def merge(self, other):
        self.cases += other.cases
        self.failures.extend(other.failures)
        return self

    def to_dict(self):
        out = {
            "check": self.check,
            "degree": self.degree,
            "cases": self.cases,
            "failures": self.failures,
        }
        if self.seed is not None:
            out["seed"] = self.seed
        return out

    def to_json(self):
        return json.dumps(self.to_dict(), indent=2, sort_keys=False)

    def to_text(self):
        status = "PASS" if self.ok else "FAIL"
        lines = [
            f"{status} {self.check}: degree<={self.degree}, "
            f"{self.cases} cases, {len(self.failures)} failures"
        ]
        for f in self.failures:
            lines.append(f"  input={f['input']}")
            lines.append(f"    lhs={f['lhs']}")
            lines.append(f"    rhs={f['rhs']}")
        return "\n".join(lines)
