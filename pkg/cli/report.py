# Copyright 2025 Egidio Pulicanò
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#     http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.

import json
from dataclasses import dataclass, field
from typing import Any, Optional, Sequence

REPORT_FORMAT = "logdisks-report/1"


@dataclass(frozen=True)
class Check:
    """One verdict; `detail` holds the identity that was checked."""

    name: str
    passed: bool
    detail: str = ""

    def to_json(self) -> dict:
        return {"name": self.name, "passed": self.passed, "detail": self.detail}


@dataclass(frozen=True)
class Table:
    headers: tuple
    rows: tuple

    @classmethod
    def build(cls, headers: Sequence[str], rows: Sequence[Sequence[Any]]) -> "Table":
        width = len(headers)
        for row in rows:
            if len(row) != width:
                raise ValueError(f"Row {list(row)} does not match headers {list(headers)}")
        return cls(tuple(headers), tuple(tuple(row) for row in rows))

    def to_json(self) -> dict:
        return {"headers": list(self.headers), "rows": [list(row) for row in self.rows]}

    def render(self) -> list[str]:
        cells = [[str(h) for h in self.headers]] + [[_cell(v) for v in row] for row in self.rows]
        widths = [max(len(line[k]) for line in cells) for k in range(len(self.headers))]
        lines = ["  ".join(c.ljust(w) for c, w in zip(line, widths)).rstrip() for line in cells]
        lines.insert(1, "  ".join("-" * w for w in widths))
        return lines


def _cell(value: Any) -> str:
    if isinstance(value, (list, tuple)):
        return "[" + ", ".join(str(v) for v in value) + "]"
    if isinstance(value, bool):
        return "yes" if value else "no"
    return str(value)


@dataclass
class ReportBundle:
    """
    Everything a command produces.

    Attributes:
        command (str): The subcommand echo, e.g. "betti".
        parameters (dict): Resolved arguments.
        checks (list): Verdicts; the bundle passes iff all of them pass.
        tables (dict): Named exact tables, rendered aligned in text mode.
        data (dict): Extra JSON payload that has no tabular form.
        wall_time (Optional[float]): Seconds, only reported on request.
    """

    command: str
    parameters: dict = field(default_factory=dict)
    checks: list = field(default_factory=list)
    tables: dict = field(default_factory=dict)
    data: dict = field(default_factory=dict)
    wall_time: Optional[float] = None

    @property
    def passed(self) -> bool:
        return all(check.passed for check in self.checks)

    def add_check(self, name: str, passed: bool, detail: str = "") -> Check:
        check = Check(name, bool(passed), detail)
        self.checks.append(check)
        return check

    def add_table(self, name: str, headers: Sequence[str], rows: Sequence[Sequence[Any]]) -> Table:
        table = Table.build(headers, rows)
        self.tables[name] = table
        return table

    def failures(self) -> list[Check]:
        return [check for check in self.checks if not check.passed]

    def to_json(self) -> dict:
        out = {
            "format": REPORT_FORMAT,
            "command": self.command,
            "parameters": self.parameters,
            "passed": self.passed,
            "checks": [check.to_json() for check in self.checks],
            "tables": {name: table.to_json() for name, table in self.tables.items()},
            "data": self.data,
        }
        if self.wall_time is not None:
            out["wall_time"] = round(self.wall_time, 3)
        return out

    def dumps(self) -> str:
        return json.dumps(self.to_json(), indent=2, ensure_ascii=False)

    def render_text(self) -> str:
        params = " ".join(f"{k}={_cell(v)}" for k, v in self.parameters.items())
        lines = [f"{self.command} {params}".rstrip()]
        for name, table in self.tables.items():
            lines.append("")
            lines.append(f"{name}:")
            lines.extend("  " + line for line in table.render())
        if self.checks:
            lines.append("")
            width = max(len(check.name) for check in self.checks)
            for check in self.checks:
                verdict = "PASS" if check.passed else "FAIL"
                lines.append(f"{verdict}  {check.name.ljust(width)}  {check.detail}".rstrip())
        lines.append("")
        lines.append(f"verdict: {'PASS' if self.passed else 'FAIL'}")
        if self.wall_time is not None:
            lines.append(f"wall time: {self.wall_time:.3f} s")
        return "\n".join(lines)

    def render(self, output_format: str) -> str:
        if output_format == "json":
            return self.dumps()
        return self.render_text()
