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

from typing import Sequence

from sympy import isprime, nextprime

from utils.exceptions import PrimeError

SMALLEST_PRIME = 5


def check_prime(q: int) -> int:
    """
    Validate a field size for point counting.

    Args:
        q (int): Candidate field size.

    Returns:
        int: The same value, for chaining.

    Raises:
        PrimeError: If q is not a prime or is smaller than 5.
    """
    if not isinstance(q, int) or not isprime(q):
        raise PrimeError(f"Field size must be prime, got {q!r}")
    if q < SMALLEST_PRIME:
        raise PrimeError(f"Field size must be at least {SMALLEST_PRIME}, got {q}")
    return q


def interpolation_primes(dim: int, start: int = SMALLEST_PRIME) -> list[int]:
    """
    Return the first dim + 2 primes >= max(start, 5).

    dim + 1 values determine a polynomial of degree dim; the extra prime is the
    redundancy check.

    Args:
        dim (int): Expected degree of the counting polynomial.
        start (int): Lower bound, for counts that need enough rational points.

    Returns:
        list[int]: Ascending primes.
    """
    primes = [int(nextprime(max(start, SMALLEST_PRIME) - 1))]
    while len(primes) < dim + 2:
        primes.append(int(nextprime(primes[-1])))
    return primes


def parse_primes(text: str) -> list[int]:
    """
    Parse a comma separated prime list such as "5,7,11".

    Raises:
        PrimeError: If an entry is not an admissible prime.
    """
    try:
        values = [int(part) for part in text.split(",") if part.strip()]
    except ValueError as e:
        raise PrimeError(f"Cannot parse prime list {text!r}: {e}") from e
    return [check_prime(q) for q in values]


def merge_primes(required: Sequence[int], extra: Sequence[int] = ()) -> list[int]:
    """Union of two prime lists, ascending and without repeats."""
    return sorted(set(required) | set(extra))
