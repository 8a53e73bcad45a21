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

import logging
import re
from typing import Any, Optional, Sequence

import openpyxl
from openpyxl.workbook import Workbook
from openpyxl.worksheet.worksheet import Worksheet

from cli.report import ReportBundle
from utils.file_initializer import ensure_output_path

logger = logging.getLogger(__name__)

CHECKS_SHEET = "checks"
MAX_SHEET_TITLE = 31
_BAD_TITLE_CHARS = re.compile(r"[\[\]:*?/\\]")


def sheet_title(name: str) -> str:
    """Excel-safe sheet title for a table name."""
    title = _BAD_TITLE_CHARS.sub("_", name).strip() or "table"
    return title[:MAX_SHEET_TITLE]


def _cell_value(value: Any) -> Any:
    if isinstance(value, (bool, int, float, str)) or value is None:
        return value
    if isinstance(value, (list, tuple)):
        return ", ".join(str(v) for v in value)
    return str(value)


class ReportSaver:
    """
    Persist a ReportBundle to a `.json` file or an `.xlsx` workbook.

    A JSON target receives the bundle exactly as printed with `--format json`.
    A workbook target gets the verdicts appended to the `checks` sheet and one
    sheet per table, replaced on every save so tables stay exact.

    Attributes:
        file_path (str): Destination path.
        suffix (str): ".json" or ".xlsx".
        wb (Optional[Workbook]): The loaded workbook for `.xlsx` targets.
    """

    def __init__(self, file_path: str) -> None:
        """
        Args:
            file_path (str): Path ending in `.json` or `.xlsx`.

        Raises:
            ValueError: If the suffix is unsupported or the workbook cannot be opened.
        """
        self.suffix = ensure_output_path(file_path)
        self.file_path = file_path
        self.wb: Optional[Workbook] = None
        if self.suffix == ".xlsx":
            try:
                self.wb = openpyxl.load_workbook(file_path)
            except Exception as e:
                raise ValueError(f"Cannot open workbook {file_path!r}: {e}")

    def save(self, bundle: ReportBundle) -> None:
        """
        Write the bundle.

        Raises:
            OSError: If writing to disk fails.
        """
        if self.suffix == ".json":
            try:
                with open(self.file_path, "w", encoding="utf-8") as f:
                    f.write(bundle.dumps())
                    f.write("\n")
            except OSError as e:
                raise OSError(f"Failed to write report {self.file_path!r}: {e}")
        else:
            self._save_sheets(bundle)
        logger.info("Report for %s written to %s", bundle.command, self.file_path)

    def _save_sheets(self, bundle: ReportBundle) -> None:
        checks = self._sheet(CHECKS_SHEET, replace=False)
        for check in bundle.checks:
            row = [f"{bundle.command}: {check.name}", check.passed, check.detail]
            self._validate_row(row)
            checks.append(row)
        for name, table in bundle.tables.items():
            ws = self._sheet(sheet_title(name), replace=True)
            ws.append(list(table.headers))
            for row in table.rows:
                self._validate_row(row)
                ws.append([_cell_value(v) for v in row])
        self._save_workbook()

    def _sheet(self, title: str, replace: bool) -> Worksheet:
        if title in self.wb.sheetnames:
            if not replace:
                return self.wb[title]
            self.wb.remove(self.wb[title])
        ws = self.wb.create_sheet(title)
        if title == CHECKS_SHEET:
            ws.append(["check", "passed", "detail"])
        return ws

    def _validate_row(self, row: Sequence[Any]) -> None:
        """
        Raises:
            ValueError: If row is not a non-empty list or tuple.
        """
        if not isinstance(row, (list, tuple)) or len(row) == 0:
            raise ValueError(f"Row must be a non-empty list or tuple, got {type(row).__name__}")

    def _save_workbook(self) -> None:
        try:
            self.wb.save(self.file_path)
        except OSError as e:
            raise OSError(f"Failed to save workbook {self.file_path!r}: {e}")

    def close(self) -> None:
        if self.wb is None:
            return
        try:
            self.wb.close()
        except Exception:
            pass

    def __enter__(self) -> "ReportSaver":
        return self

    def __exit__(self, exc_type, exc_val, exc_tb) -> None:
        self.close()
