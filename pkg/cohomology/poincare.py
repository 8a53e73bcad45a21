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

from dataclasses import dataclass
from typing import Iterable

from sympy import Poly, Symbol

t = Symbol("t")


@dataclass(frozen=True)
class PoincarePolynomial:
    """
    Generating polynomial of Betti numbers, b_k the coefficient of t^k.

    Coefficients are nonnegative integers; trailing zeros are dropped, and
    the zero polynomial is stored as (0,).

    Raises:
        ValueError: On negative or non-integer coefficients.
    """

    coefficients: tuple = (1,)

    def __post_init__(self) -> None:
        coeffs = [int(c) for c in self.coefficients]
        if any(c != orig for c, orig in zip(coeffs, self.coefficients)):
            raise ValueError(f"Betti numbers must be integers, got {list(self.coefficients)}")
        if any(c < 0 for c in coeffs):
            raise ValueError(f"Betti numbers must be nonnegative, got {coeffs}")
        while len(coeffs) > 1 and coeffs[-1] == 0:
            coeffs.pop()
        object.__setattr__(self, "coefficients", tuple(coeffs) or (0,))

    @classmethod
    def from_poly(cls, poly: Poly) -> "PoincarePolynomial":
        """From a sympy polynomial in t."""
        return cls(tuple(reversed(Poly(poly, t).all_coeffs())))

    @classmethod
    def product(cls, factors: Iterable["PoincarePolynomial"]) -> "PoincarePolynomial":
        out = cls((1,))
        for factor in factors:
            out = out * factor
        return out

    @classmethod
    def linear(cls, k: int) -> "PoincarePolynomial":
        """1 + k t."""
        return cls((1, k))

    def as_poly(self) -> Poly:
        return Poly(list(reversed(self.coefficients)), t)

    def __mul__(self, other: "PoincarePolynomial") -> "PoincarePolynomial":
        return PoincarePolynomial.from_poly(self.as_poly() * other.as_poly())

    def __add__(self, other: "PoincarePolynomial") -> "PoincarePolynomial":
        return PoincarePolynomial.from_poly(self.as_poly() + other.as_poly())

    def __pow__(self, k: int) -> "PoincarePolynomial":
        return PoincarePolynomial.from_poly(self.as_poly() ** k)

    def __getitem__(self, k: int) -> int:
        return self.coefficients[k] if 0 <= k < len(self.coefficients) else 0

    def __len__(self) -> int:
        return len(self.coefficients)

    @property
    def degree(self) -> int:
        return len(self.coefficients) - 1

    def total(self) -> int:
        return sum(self.coefficients)

    def euler(self) -> int:
        return sum((-1) ** k * b for k, b in enumerate(self.coefficients))

    def is_palindromic(self) -> bool:
        return self.coefficients == tuple(reversed(self.coefficients))

    def odd_vanish(self) -> bool:
        return all(b == 0 for b in self.coefficients[1::2])

    def to_list(self) -> list[int]:
        return list(self.coefficients)

    def __str__(self) -> str:
        terms = []
        for k, b in enumerate(self.coefficients):
            if b == 0:
                continue
            if k == 0:
                terms.append(str(b))
            else:
                power = "t" if k == 1 else f"t^{k}"
                terms.append(power if b == 1 else f"{b}{power}")
        return " + ".join(terms) or "0"


def one_plus_t(power: int) -> PoincarePolynomial:
    """(1 + t)^power, the circle factors of a torus."""
    return PoincarePolynomial((1, 1)) ** power
