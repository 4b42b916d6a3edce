# src/cli/report.py
import csv
import math
from pathlib import Path
from typing import Any, Dict, List, Literal, Optional, Sequence

from pydantic import BaseModel, Field, PrivateAttr

from static.constants import logger


class Check(BaseModel):
    """A single thresholded check; passed is value < threshold or value > threshold."""
    name: str
    value: Optional[float]
    threshold: float
    comparison: Literal["below", "above"] = "below"
    passed: bool
    detail: Optional[str] = None


class Table(BaseModel):
    header: List[str]
    rows: List[List[float]]


class Report(BaseModel):
    """
    Run report. Holds no timestamps, so equal inputs give identical files.
    """
    command: str
    seed: int
    step: float
    samples: int
    checks: List[Check] = Field(default_factory=list)
    data: Dict[str, Any] = Field(default_factory=dict)
    sidecars: List[str] = Field(default_factory=list)
    _tables: Dict[str, Table] = PrivateAttr(default_factory=dict)

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def add_check(
        self,
        name: str,
        value: Optional[float],
        threshold: float,
        comparison: Literal["below", "above"] = "below",
        detail: Optional[str] = None,
    ) -> bool:
        if value is None or math.isnan(value):
            passed = False
        elif comparison == "below":
            passed = value < threshold
        else:
            passed = value > threshold
        self.checks.append(Check(
            name=name, value=value, threshold=threshold, comparison=comparison, passed=passed, detail=detail
        ))
        level = logger.info if passed else logger.warning
        level(f"[{'PASS' if passed else 'FAIL'}] {name}: {value} ({comparison} {threshold})")
        return passed

    def fail(self, name: str, detail: str) -> None:
        """Record a check that could not be evaluated."""
        self.checks.append(Check(name=name, value=None, threshold=0.0, passed=False, detail=detail))
        logger.error(f"[FAIL] {name}: {detail}")

    def add_table(self, name: str, header: Sequence[str], rows: Sequence[Sequence[float]]) -> None:
        self._tables[name] = Table(header=list(header), rows=[[float(v) for v in row] for row in rows])

    def merge(self, other: "Report", prefix: str) -> None:
        """Fold a sub-report into this one under a name prefix."""
        for check in other.checks:
            self.checks.append(check.model_copy(update={"name": f"{prefix}.{check.name}"}))
        if other.data:
            self.data[prefix] = other.data
        for name, table in other._tables.items():
            self._tables[f"{prefix}_{name}"] = table

    def write(self, path: str) -> Path:
        """
        Write the JSON document and one CSV sidecar per table next to it.

        Returns:
            Path of the JSON document
        """
        target = Path(path)
        target.parent.mkdir(parents=True, exist_ok=True)
        self.sidecars = []
        for name, table in sorted(self._tables.items()):
            sidecar = target.with_name(f"{target.stem}_{name}.csv")
            with sidecar.open("w", newline="", encoding="utf-8") as handle:
                writer = csv.writer(handle)
                writer.writerow(table.header)
                writer.writerows([[repr(v) for v in row] for row in table.rows])
            self.sidecars.append(sidecar.name)
        target.write_text(self.model_dump_json(indent=2), encoding="utf-8")
        logger.info(f"Report written to {target} ({len(self.checks)} checks, {len(self.sidecars)} sidecars)")
        return target
