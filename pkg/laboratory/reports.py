import dataclasses
import json
import math
from typing import Any, Dict, List, Optional

TIMING_KEY = "wall_time"


@dataclasses.dataclass
class CheckRecord:
    name: str
    parameters: Dict[str, Any]
    residual: float
    tolerance: float
    passed: bool
    wall_time: float
    details: Dict[str, Any] = dataclasses.field(default_factory=dict)
    error: Optional[str] = None

    def to_document(self, include_timing: bool = True) -> Dict[str, Any]:
        document = {
            "name": self.name,
            "parameters": self.parameters,
            "residual": self.residual if math.isfinite(self.residual) else str(self.residual),
            "tolerance": self.tolerance,
            "passed": self.passed,
            "details": self.details,
            "error": self.error,
        }
        if include_timing:
            document[TIMING_KEY] = self.wall_time
        return document


@dataclasses.dataclass
class CheckReport:
    records: List[CheckRecord]
    config: Dict[str, Any]
    lattice: Dict[str, Any]

    @property
    def passed(self) -> bool:
        return all(record.passed for record in self.records)

    @property
    def failures(self) -> List[CheckRecord]:
        return [record for record in self.records if not record.passed]

    def names(self) -> List[str]:
        return [record.name for record in self.records]

    def to_document(self, include_timing: bool = True) -> Dict[str, Any]:
        return {
            "config": self.config,
            "lattice": self.lattice,
            "checks": [record.to_document(include_timing) for record in self.records],
            "passed": self.passed,
        }

    def to_json(self, include_timing: bool = True) -> str:
        return json.dumps(self.to_document(include_timing), sort_keys=True, indent=2, ensure_ascii=False) + "\n"

    def to_table(self) -> str:
        width = max([len("check")] + [len(record.name) for record in self.records])
        lines = [f"{'check':<{width}}  {'residual':>11}  {'tolerance':>11}  {'status':<6}  {'seconds':>8}"]
        for record in self.records:
            status = "PASS" if record.passed else "FAIL"
            lines.append(f"{record.name:<{width}}  {record.residual:>11.3e}  {record.tolerance:>11.3e}  "
                         f"{status:<6}  {record.wall_time:>8.3f}")
            if record.error:
                lines.append(f"{'':<{width}}  error: {record.error}")
        lines.append(f"{len(self.records) - len(self.failures)}/{len(self.records)} checks passed")
        return "\n".join(lines) + "\n"
