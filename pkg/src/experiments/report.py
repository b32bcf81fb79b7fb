"""
Experiment reports: measured quantities, recomputable verdicts, JSON and CSV.

Every verdict is declared as ``lhs op rhs`` over names in ``measured`` (or a
numeric right-hand side), so the stored booleans can be re-derived from the
stored numbers alone.
"""

from __future__ import annotations

import json
import math
import operator
from dataclasses import dataclass, field
from pathlib import Path

import pandas as pd

from src.config import ENGINE_VERSION
from src.errors import FormatError

OPERATORS = {
    "<=": operator.le,
    ">=": operator.ge,
    "<": operator.lt,
    ">": operator.gt,
    "==": operator.eq,
}


# =======================================
# 1. Verdicts
# =======================================
@dataclass(frozen=True)
class Verdict:
    """``measured[lhs] op rhs`` where ``rhs`` is a measured name or a number."""

    name: str
    lhs: str
    op: str
    rhs: str | float

    def __post_init__(self):
        if self.op not in OPERATORS:
            raise FormatError(f"Unknown verdict operator '{self.op}'")

    def evaluate(self, measured: dict[str, float]) -> bool:
        left = measured[self.lhs]
        right = measured[self.rhs] if isinstance(self.rhs, str) else float(self.rhs)
        if math.isnan(left) or math.isnan(right):
            return False
        return bool(OPERATORS[self.op](left, right))

    def to_dict(self) -> dict:
        return {"lhs": self.lhs, "op": self.op, "rhs": self.rhs}


# =======================================
# 2. ExperimentReport
# =======================================
@dataclass
class ExperimentReport:
    experiment: str
    parameters: dict
    seed: int | None = None
    measured: dict[str, float] = field(default_factory=dict)
    verdicts: dict[str, bool] = field(default_factory=dict)
    rules: list[Verdict] = field(default_factory=list)
    rows: list[dict] = field(default_factory=list)
    columns: list[str] = field(default_factory=list)
    notes: list[str] = field(default_factory=list)
    runtime_s: float = 0.0
    engine_version: str = ENGINE_VERSION

    def measure(self, name: str, value: float) -> float:
        self.measured[name] = float(value)
        return self.measured[name]

    def check(self, name: str, lhs: str, op: str, rhs: str | float) -> bool:
        """Declare a verdict and store its value."""
        rule = Verdict(name, lhs, op, rhs)
        self.rules.append(rule)
        self.verdicts[name] = rule.evaluate(self.measured)
        return self.verdicts[name]

    def add_row(self, **row) -> None:
        for key in row:
            if key not in self.columns:
                self.columns.append(key)
        self.rows.append(row)

    def note(self, text: str) -> None:
        self.notes.append(text)

    @property
    def passed(self) -> bool:
        return all(self.verdicts.values())

    def recheck(self) -> bool:
        """True when every stored verdict matches its re-evaluated inequality."""
        return all(
            rule.evaluate(self.measured) == self.verdicts[rule.name] for rule in self.rules
        )

    # =======================================
    # 3. Serialisation
    # =======================================
    def to_dict(self, include_runtime: bool = False) -> dict:
        payload = {
            "experiment": self.experiment,
            "parameters": self.parameters,
            "seed": self.seed,
            "measured": self.measured,
            "verdicts": self.verdicts,
            "rules": {rule.name: rule.to_dict() for rule in self.rules},
            "columns": self.columns,
            "rows": self.rows,
            "notes": self.notes,
            "engine_version": self.engine_version,
            "passed": self.passed,
        }
        if include_runtime:
            payload["runtime_s"] = self.runtime_s
        return payload

    def to_json(self, include_runtime: bool = False) -> str:
        return json.dumps(
            self.to_dict(include_runtime), indent=2, sort_keys=True, default=_plain
        )

    def rows_frame(self) -> pd.DataFrame:
        return pd.DataFrame(self.rows, columns=self.columns)

    def measured_frame(self) -> pd.DataFrame:
        return pd.DataFrame(
            sorted(self.measured.items()), columns=["metric", "value"]
        )

    def save(
        self, out: Path, csv: bool = False, include_runtime: bool = False
    ) -> list[Path]:
        """
        Write ``out`` (JSON) and, with ``csv``, ``<stem>_rows.csv`` and
        ``<stem>_measured.csv`` beside it.
        """
        out = Path(out)
        out.parent.mkdir(parents=True, exist_ok=True)
        out.write_text(self.to_json(include_runtime) + "\n", encoding="utf-8")
        written = [out]
        if csv:
            rows_file = out.with_name(f"{out.stem}_rows.csv")
            measured_file = out.with_name(f"{out.stem}_measured.csv")
            self.rows_frame().to_csv(rows_file, index=False)
            self.measured_frame().to_csv(measured_file, index=False)
            written += [rows_file, measured_file]
        return written


def _plain(value):
    """numpy scalars and tuples in rows and parameters."""
    if hasattr(value, "item"):
        return value.item()
    if isinstance(value, (set, frozenset)):
        return sorted(value)
    raise TypeError(f"Cannot serialise {type(value).__name__}")
