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

import os
from openpyxl import Workbook

SUPPORTED_SUFFIXES = (".json", ".xlsx")


def ensure_output_path(file_path: str) -> str:
    """
    Ensure that a report can be written to the given path.

    Creates missing parent directories and, for workbooks, an empty workbook
    with a header on the `checks` sheet so that later loads never fail.

    Args:
        file_path (str): Destination ending in `.json` or `.xlsx`.

    Returns:
        str: The lower-cased suffix of the path.

    Raises:
        ValueError: If the suffix is not supported.
        OSError: If there is an issue creating the directory or the workbook.
    """
    suffix = os.path.splitext(file_path)[1].lower()
    if suffix not in SUPPORTED_SUFFIXES:
        raise ValueError(f"Unsupported output file {file_path!r}; use one of {SUPPORTED_SUFFIXES}")

    directory = os.path.dirname(os.path.abspath(file_path))
    try:
        os.makedirs(directory, exist_ok=True)
    except OSError as e:
        raise OSError(f"Failed to create directory {directory}: {e}")

    if suffix == ".xlsx" and not os.path.exists(file_path):
        try:
            wb = Workbook()
            ws = wb.active
            ws.title = "checks"
            ws.append(["check", "passed", "detail"])
            wb.save(file_path)
        except OSError as e:
            raise OSError(f"Failed to create file at {file_path}: {e}")
    return suffix
