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


class ArityError(ValueError):
    """An arity or mark count is outside the stable range."""


class SlotError(ValueError):
    """A composition slot is out of range for the outer operation."""


class PermutationError(ValueError):
    """A permutation is malformed or moves the output mark 0."""


class StratumError(KeyError):
    """A stratum tag is not part of the descriptor's stratification."""


class BaseMismatchError(ValueError):
    """Two log descriptors live over different underlying schemes."""


class PrimeError(ValueError):
    """A field size is not an admissible prime."""


class RangeError(ValueError):
    """A parameter is outside the supported computational range."""


class MalformedTermError(ValueError):
    """A BV term reuses a generator or has an unknown shape."""


class PurityViolationError(RuntimeError):
    """Two independent Betti computations disagree, or a table is not pure."""


class FreenessViolationError(RuntimeError):
    """A graded quotient is not exact or has a negative coefficient."""


class DimensionMismatchError(RuntimeError):
    """A formal model does not match the homology dimensions it models."""
