"""Residual reports shared by the verification routines."""

from __future__ import annotations

from dataclasses import dataclass, field


@dataclass
class ValidationReport:
    """Named residuals with a common pass threshold.

    ``notes`` carries free-form facts (conventions, counts) that are not
    checked against the tolerance.
    """

    name: str
    tol: float
    residuals: dict[str, float] = field(default_factory=dict)
    notes: dict[str, object] = field(default_factory=dict)

    def add(self, key: str, value: float) -> None:
        value = float(value)
        self.residuals[key] = max(self.residuals.get(key, 0.0), value)

    @property
    def passed(self) -> bool:
        return all(v < self.tol for v in self.residuals.values())

    @property
    def max_residual(self) -> float:
        return max(self.residuals.values(), default=0.0)

    def failures(self) -> list[str]:
        return [k for k, v in self.residuals.items() if not v < self.tol]

    def to_dict(self) -> dict:
        return {
            "name": self.name,
            "passed": self.passed,
            "tol": self.tol,
            "residuals": dict(sorted(self.residuals.items())),
            "notes": self.notes,
        }
