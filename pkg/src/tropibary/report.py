"""Reports produced by CLI commands and their text/JSON rendering."""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from typing import Any

import numpy as np

from .maxplus import NEG_INF_TOKEN


@dataclass
class Check:
    name: str
    passed: bool
    count: int = 0
    detail: str = ""
    counterexample: Any = None


@dataclass
class Report:
    command: str
    values: dict[str, Any] = field(default_factory=dict)
    checks: list[Check] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def add(self, check: Check) -> Check:
        self.checks.append(check)
        return check


def plain(x: Any) -> Any:
    """Convert numpy values and -inf into JSON-safe data."""
    if isinstance(x, dict):
        return {str(k): plain(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [plain(v) for v in x]
    if isinstance(x, np.ndarray):
        return [plain(v) for v in x.tolist()]
    if isinstance(x, (bool, np.bool_)):
        return bool(x)
    if isinstance(x, (int, np.integer)):
        return int(x)
    if isinstance(x, (float, np.floating)):
        x = float(x)
        if x == -math.inf:
            return NEG_INF_TOKEN
        return x
    return x


def _text(v: Any) -> str:
    v = plain(v)
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, str):
        return v
    if isinstance(v, float):
        return repr(v)
    return json.dumps(v)


def emit_report(report: Report, as_json: bool = False) -> str:
    """Render a report. Output depends only on the report contents."""
    if as_json:
        doc = {
            "command": report.command,
            "values": plain(report.values),
            "checks": [
                {
                    "name": c.name,
                    "passed": c.passed,
                    "count": c.count,
                    "detail": c.detail,
                    "counterexample": plain(c.counterexample),
                }
                for c in report.checks
            ],
            "passed": report.passed,
        }
        return json.dumps(doc, indent=2, sort_keys=True) + "\n"
    lines = [f"tropibary {report.command}"]
    lines += [f"{k}: {_text(v)}" for k, v in report.values.items()]
    failed = 0
    for c in report.checks:
        n = f" (n={c.count})" if c.count else ""
        if c.passed:
            lines.append(f"PASS {c.name}{n}")
        else:
            failed += 1
            lines.append(f"FAIL {c.name}{n}: {c.detail}" if c.detail else f"FAIL {c.name}{n}")
            if c.counterexample is not None:
                lines.append(f"  counterexample: {json.dumps(plain(c.counterexample), sort_keys=True)}")
    if report.checks:
        lines.append(f"{len(report.checks)} checks, {failed} failed")
    else:
        lines.append("0 checks")
    return "\n".join(lines) + "\n"
