"""Reports printed by the cli and aligned text tables."""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Any, Sequence
from typing_extensions import Literal

import numpy as np
import pandas as pd

from trusskit.errors import LabelMismatch
from trusskit.module import TrussModule
from trusskit.truss import FiniteTruss

Format = Literal["text", "json"]


@dataclass
class Report:
    """The outcome of one cli command.

    The text form is `lines`, the json form is the command, status and findings.
    Both are deterministic for the same input and settings.
    """

    command: str
    lines: list[str] = field(default_factory=list)
    findings: dict[str, Any] = field(default_factory=dict)
    status: int = 0

    def add(self, line: str = "", **findings: Any) -> None:
        self.lines.append(line)
        self.findings.update(findings)

    def render(self, format: Format = "text") -> str:
        if format == "text":
            return "\n".join(self.lines)
        if format == "json":
            d = {
                "command": self.command,
                "status": self.status,
                "findings": self.findings,
            }
            return json.dumps(d, sort_keys=True, indent=2, default=_jsonable)
        raise ValueError(f"unknown format `format={format}`")


def _jsonable(o: Any) -> Any:
    if isinstance(o, np.ndarray):
        return o.tolist()
    if isinstance(o, np.integer):
        return int(o)
    if isinstance(o, (set, frozenset, tuple)):
        return sorted(o) if isinstance(o, (set, frozenset)) else list(o)
    return str(o)


def yes_no(flag: bool) -> str:
    return "yes" if flag else "no"


def render_table(
    obj: FiniteTruss | TrussModule,
    labels: Sequence[str] | None = None,
) -> str:
    """The multiplication table of a truss or the action table of a module.

    Args:
        obj: The truss or module
        labels: Names for the elements of the truss, or of the module heap. Rows
            of an action table are always the truss elements by index.

    Returns:
        The table, columns right aligned
    """
    if isinstance(obj, FiniteTruss):
        table, size = obj.mul_table, obj.size
    else:
        table, size = obj.action, obj.size

    names = [str(s) for s in (range(size) if labels is None else labels)]
    if len(names) != size:
        raise LabelMismatch(f"{len(names)} labels for a carrier of size {size}")

    rows = names if isinstance(obj, FiniteTruss) else [str(x) for x in obj.truss]
    entries = [[names[v] for v in row] for row in table.tolist()]
    df = pd.DataFrame(entries, index=rows, columns=names)
    return df.to_string()
