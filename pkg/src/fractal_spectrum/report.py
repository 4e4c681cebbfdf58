"""Pass/fail reports shared by the checks and the CLI."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np


def jsonable(obj):
    """Convert numpy scalars/arrays, complex numbers and big ints for JSON."""
    if isinstance(obj, dict):
        return {str(k): jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [jsonable(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return jsonable(obj.tolist())
    if isinstance(obj, (bool, np.bool_)):
        return bool(obj)
    if isinstance(obj, (complex, np.complexfloating)):
        return {"re": float(obj.real), "im": float(obj.imag)}
    if isinstance(obj, np.floating):
        return float(obj)
    if isinstance(obj, (int, np.integer)):
        v = int(obj)
        # frequencies can exceed double precision; keep them as decimal strings
        return v if abs(v) < 2**53 else str(v)
    if hasattr(obj, "to_json_dict"):
        return obj.to_json_dict()
    return obj


@dataclass
class Report:
    name: str
    passed: bool
    metrics: dict = field(default_factory=dict)

    def to_json_dict(self) -> dict:
        return {"name": self.name, "passed": bool(self.passed), **jsonable(self.metrics)}

    def line(self) -> str:
        return f"[{'PASS' if self.passed else 'FAIL'}] {self.name}"
