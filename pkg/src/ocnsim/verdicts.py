"""Verdicts and budgets shared by the deciding engines."""

from __future__ import annotations

from dataclasses import dataclass, field

__all__ = ["SIMULATED", "NOT_SIMULATED", "UNKNOWN", "Verdict", "Budget"]

SIMULATED = "Simulated"
NOT_SIMULATED = "NotSimulated"
UNKNOWN = "Unknown"


@dataclass
class Verdict:
    """Outcome of a decision query plus its supporting evidence.

    Simulated verdicts carry a checkable certificate where the engine can
    produce one; NotSimulated verdicts carry a witness that replays in the
    bounded-game oracle (or a rank-free justification past the replay
    budget); Unknown verdicts carry the budget report.
    """

    kind: str
    certificate: object = None
    witness: "dict | None" = None
    budget_report: "dict | None" = None
    stats: dict = field(default_factory=dict)

    @property
    def exit_code(self):
        return {SIMULATED: 0, NOT_SIMULATED: 1, UNKNOWN: 2}[self.kind]

    def __bool__(self):
        return self.kind == SIMULATED

    def __repr__(self):
        return f"Verdict({self.kind})"


@dataclass(frozen=True)
class Budget:
    """Work limits for the escalating engines; scaled by the CLI --budget."""

    escalations: int = 10
    max_cols: int = 1 << 14
    max_value: int = 1 << 22
    max_levels: int = 64
    oracle_rounds: int = 48
    oracle_grid: int = 160

    @classmethod
    def from_units(cls, units):
        """Derive limits from one knob; `units` ~ relative effort."""
        if units < 1:
            raise ValueError("budget must be positive")
        return cls(
            escalations=max(2, min(24, 6 + units.bit_length())),
            max_cols=max(64, min(1 << 18, 64 * units)),
            max_value=max(256, min(1 << 26, 4096 * units)),
            max_levels=max(8, min(512, 16 * units)),
            oracle_rounds=max(8, min(512, 8 * units)),
            oracle_grid=max(24, min(2048, 20 * units)),
        )


DEFAULT_BUDGET = Budget()
