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
try:
    import tomllib
except ModuleNotFoundError:
    import tomli as tomllib
from dataclasses import dataclass
from pathlib import Path
from typing import Union, Optional

WORKERS_ENV = "LOGDISKS_WORKERS"

DEFAULT_PATH = Path(__file__).resolve().parent.parent / "user_settings" / "settings.toml"


@dataclass(frozen=True)
class RuntimeSettings:
    """Resolved settings used by the command line entry point."""

    workers: int = 1
    log_level: str = "WARNING"
    max_n: int = 5
    output_format: str = "table"


class PreferencesLoader:
    """Loads user preferences from a TOML configuration file."""

    def __init__(self, path: Optional[Union[str, Path]] = None, required: bool = True) -> None:
        """Initializes the PreferencesLoader.

        If no path is provided, it defaults to:
        `<project_root>/user_settings/settings.toml`.

        Args:
            path (Optional[Union[str, Path]]): The path to the TOML configuration file.
                Can be a string or a Path object. If None, the default path is used.
            required (bool): When False, a missing file yields empty preferences
                instead of raising.
        """
        self.path = Path(path) if path else DEFAULT_PATH
        self.required = required
        self.preferences = self.load_preferences()

    def load_preferences(self) -> dict:
        """Reads and parses the TOML configuration file.

        Returns:
            dict: A dictionary containing all user-defined preferences.

        Raises:
            FileNotFoundError: If the configuration file does not exist and is required.
            RuntimeError: If the TOML file has a syntax error.
        """
        try:
            with self.path.open("rb") as f:
                return tomllib.load(f)
        except FileNotFoundError:
            if not self.required:
                return {}
            raise FileNotFoundError(f"Configuration file does not exist: {self.path}")
        except tomllib.TOMLDecodeError as e:
            raise RuntimeError(f"Syntax error in TOML: {e}") from e

    def load_section(self, section: str, required: bool = True) -> dict:
        """Retrieves a specific section from the loaded preferences.

        Args:
            section (str): The name of the section to retrieve.
            required (bool): When False, an absent section yields an empty dict.

        Returns:
            dict: The dictionary corresponding to the requested section.

        Raises:
            KeyError: If the specified section is not found in the preferences.
        """
        try:
            return self.preferences[section]
        except KeyError:
            if not required:
                return {}
            raise KeyError(f"Section '{section}' not found in {self.path}")

    def load_runtime_settings(self) -> RuntimeSettings:
        """Builds the runtime settings, applying the worker override from the environment.

        Returns:
            RuntimeSettings: Settings with defaults filled in for absent keys.

        Raises:
            ValueError: If a value has the wrong type or the override is not an integer.
        """
        runtime = self.load_section("runtime", required=False)
        logging_prefs = self.load_section("logging", required=False)
        verify = self.load_section("verify", required=False)
        output = self.load_section("output", required=False)

        workers = runtime.get("workers", 1)
        override = os.environ.get(WORKERS_ENV)
        if override:
            try:
                workers = int(override)
            except ValueError as e:
                raise ValueError(f"{WORKERS_ENV} must be an integer, got {override!r}") from e
        if not isinstance(workers, int) or workers < 1:
            raise ValueError(f"workers must be a positive integer, got {workers!r}")

        output_format = output.get("format", "table")
        if output_format not in ("table", "json"):
            raise ValueError(f"Unknown output format in {self.path}: {output_format!r}")

        return RuntimeSettings(
            workers=workers,
            log_level=str(logging_prefs.get("level", "WARNING")).upper(),
            max_n=int(verify.get("max_n", 5)),
            output_format=output_format,
        )
