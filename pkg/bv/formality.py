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
from dataclasses import dataclass, field

from sympy import div, eye, zeros

from bv.algebra import MAX_BASIS_ARITY, bv_dims, ger_dims
from cohomology.betti import flc_top, ld
from cohomology.poincare import PoincarePolynomial, one_plus_t
from utils.exceptions import ArityError, DimensionMismatchError, FreenessViolationError

logger = logging.getLogger(__name__)

OPEN_QUESTIONS = (
    "Is the map from the integral model A^* to integral de Rham cochains C^*_dR,Z(FLC) a quasi-isomorphism?",
    "Does A^* agree with the integral cohomology of the BV operad?",
)


@dataclass(frozen=True)
class FormalCooperadModel:
    """
    H^0 Omega^*(FLC_n) with its (zero) de Rham differential.

    Attributes:
        arity (int): n.
        dims (tuple): Dimension in each cohomological degree 0..2n-1.
        differential (tuple): Matrices d^k: degree k -> degree k + 1.
        morphism (tuple): Degreewise matrices of the formality map, identities.
        cocompositions (tuple): (m, k, dims of H(FLC_m) (x) H(FLC_k)) for m + k - 1 = n.
        complex_length (int): Number of degrees of the integral complex, 2n.
    """

    arity: int
    dims: tuple
    differential: tuple
    morphism: tuple
    cocompositions: tuple = ()
    complex_length: int = 0
    open_questions: tuple = field(default=OPEN_QUESTIONS)

    @property
    def zero_differential(self) -> bool:
        return all(m.is_zero_matrix for m in self.differential)

    @property
    def identity_morphism(self) -> bool:
        return all(m.is_Identity for m in self.morphism if m.rows)

    def to_json(self) -> dict:
        return {
            "arity": self.arity,
            "dims": list(self.dims),
            "zero_differential": self.zero_differential,
            "identity_morphism": self.identity_morphism,
            "cocompositions": [
                {"outer": m, "inner": k, "slots": m, "dims": list(d)} for m, k, d in self.cocompositions
            ],
            "integral_complex_length": self.complex_length,
            "open_questions": list(self.open_questions),
        }


def _cocompositions(n: int) -> tuple:
    out = []
    for m in range(1, n + 1):
        k = n + 1 - m
        out.append((m, k, tuple((flc_top(m) * flc_top(k)).to_list())))
    return tuple(out)


def homology_dims(n: int) -> PoincarePolynomial:
    """Dimensions of BV(n) from the basis up to MAX_BASIS_ARITY, from the fld table above."""
    if n <= MAX_BASIS_ARITY:
        return bv_dims(n)
    return one_plus_t(n) * ld(n)


def assemble_formal_model(n: int) -> FormalCooperadModel:
    """
    Build the formal cooperad model in arity n.

    Dims come from the realization table flc_top(n); every differential is the
    zero matrix and the formality morphism is the identity in each degree.

    Raises:
        ArityError: If n < 1.
        DimensionMismatchError: If the table differs from the dims of BV(n).
    """
    if not isinstance(n, int) or n < 1:
        raise ArityError(f"FLC arities start at 1, got {n!r}")
    table = flc_top(n)
    homology = homology_dims(n)
    if table != homology:
        raise DimensionMismatchError(f"FLC_{n} table {table.to_list()} differs from BV({n}) dims {homology.to_list()}")
    length = 2 * n
    dims = tuple(table[k] for k in range(length))
    differential = tuple(zeros(dims[k + 1], dims[k]) for k in range(length - 1))
    morphism = tuple(eye(d) for d in dims)
    model = FormalCooperadModel(
        arity=n,
        dims=dims,
        differential=differential,
        morphism=morphism,
        cocompositions=_cocompositions(n),
        complex_length=length,
    )
    logger.debug("Formal model for arity %d: dims %s", n, dims)
    return model


def ld_pushout(n: int) -> PoincarePolynomial:
    """
    Graded dimension of H^*(FLD_n) over H^*((S^1)^n): divide the realization
    table of FLC_n by (1 + t)^n.

    The quotient is the graded shadow of the pushout along the circle factors;
    it must be an exact division with nonnegative coefficients and must equal
    the little disks table from configuration counts.

    Raises:
        ArityError: If n < 2.
        FreenessViolationError: If the division is inexact, has a negative
            coefficient or differs from ld(n).
    """
    if not isinstance(n, int) or n < 2:
        raise ArityError(f"The pushout needs n >= 2, got {n!r}")
    numerator = flc_top(n).as_poly()
    quotient, remainder = div(numerator, one_plus_t(n).as_poly())
    if not remainder.is_zero:
        raise FreenessViolationError(f"(1 + t)^{n} does not divide {numerator.as_expr()}: remainder {remainder.as_expr()}")
    coefficients = list(reversed(quotient.all_coeffs()))
    if any(c < 0 for c in coefficients):
        raise FreenessViolationError(f"Quotient {quotient.as_expr()} has a negative coefficient")
    result = PoincarePolynomial(tuple(int(c) for c in coefficients))
    expected = ld(n)
    if result != expected:
        raise FreenessViolationError(f"Quotient {result} differs from the little disks table {expected}")
    return result


@dataclass(frozen=True)
class FormalityReport:
    """Certificate bundle for one arity."""

    arity: int
    model: FormalCooperadModel
    bv: PoincarePolynomial
    ger: PoincarePolynomial
    pushout: PoincarePolynomial

    @property
    def passed(self) -> bool:
        return self.model.zero_differential and self.model.identity_morphism

    def to_json(self) -> dict:
        return {
            "arity": self.arity,
            "passed": self.passed,
            "model": self.model.to_json(),
            "bv_dims": self.bv.to_list(),
            "ger_dims": self.ger.to_list(),
            "pushout": self.pushout.to_list(),
        }


def formality_report(n: int) -> FormalityReport:
    """
    Model, homology dims and pushout for arity n >= 2.

    Raises:
        DimensionMismatchError, FreenessViolationError: If a certificate fails.
    """
    if not isinstance(n, int) or n < 2:
        raise ArityError(f"Formality reports need n >= 2, got {n!r}")
    model = assemble_formal_model(n)
    ger = ger_dims(n) if n <= MAX_BASIS_ARITY else ld(n)
    if ger != ld(n):
        raise DimensionMismatchError(f"Gerstenhaber dims {ger} differ from the little disks table {ld(n)}")
    report = FormalityReport(n, model, homology_dims(n), ger, ld_pushout(n))
    logger.info("Formality report for arity %d: passed=%s", n, report.passed)
    return report
