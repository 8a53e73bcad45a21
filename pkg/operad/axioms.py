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

from dataclasses import dataclass, field

# Failures beyond this many are counted but not stored.
MAX_RECORDED_FAILURES = 20


@dataclass
class AxiomReport:
    """
    Tally of an exhaustive identity check.

    Attributes:
        name (str): Short name of the identity family, e.g. "graft.sequential".
        checked (int): Number of instances evaluated.
        failed (int): Number of instances that did not hold.
        failures (list[str]): Descriptions of the first failing instances.
    """

    name: str
    checked: int = 0
    failed: int = 0
    failures: list[str] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return self.failed == 0 and self.checked > 0

    def record(self, holds: bool, description: str) -> None:
        """Count one instance; keep its description if it failed."""
        self.checked += 1
        if not holds:
            self.failed += 1
            if len(self.failures) < MAX_RECORDED_FAILURES:
                self.failures.append(description)

    def merge(self, other: "AxiomReport") -> None:
        self.checked += other.checked
        self.failed += other.failed
        room = MAX_RECORDED_FAILURES - len(self.failures)
        self.failures.extend(other.failures[:max(room, 0)])

    def as_dict(self) -> dict:
        return {
            "name": self.name,
            "checked": self.checked,
            "failed": self.failed,
            "failures": list(self.failures),
        }
