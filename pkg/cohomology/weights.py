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
from functools import lru_cache
from typing import Optional

from cohomology.betti import (
    betti_from_open_count,
    betti_open,
    count_open,
    counting_polynomial,
    flc_top,
    mbar,
    valence_profiles,
)
from cohomology.poincare import PoincarePolynomial
from utils.exceptions import ArityError, PurityViolationError, RangeError
from utils.primes import interpolation_primes

logger = logging.getLogger(__name__)

# Gysin differentials are not computed; row identities are necessary conditions only.
CERTIFICATE_LEVEL = "consistency-level certificate"
MIN_E1_MARKS = 4
MAX_E1_MARKS = 8
MINUS = "−"


@lru_cache(maxsize=None)
def _mbar_table(marks: int) -> PoincarePolynomial:
    return mbar(marks)


# ----------------------------------------------------------------------
# E1 table
# ----------------------------------------------------------------------


@dataclass(frozen=True)
class E1Table:
    """
    E1 page of the weight spectral sequence of M_{0,n} inside Mbar_{0,n}.

    Entry (p, q) is dim H^(2q - 2p)(D^p), with D^p the disjoint union of the
    closures of the codimension-p strata; it sits in weight 2q. Each closure is
    a product of Mbar_{0,val(v)} over the vertices v of the stratum's tree.

    Attributes:
        marks (int): n, the number of marks.
        dim (int): n - 3.
        entries (dict): (p, q) -> dimension, zero entries omitted.
        census (tuple): Number of strata in each codimension p.
    """

    marks: int
    dim: int
    entries: dict = field(default_factory=dict)
    census: tuple = ()

    def entry(self, p: int, q: int) -> int:
        return self.entries.get((p, q), 0)

    def row(self, q: int) -> list[int]:
        """Weight-2q row indexed by p = 0..dim."""
        return [self.entry(p, q) for p in range(self.dim + 1)]

    def column_total(self, p: int) -> int:
        return sum(self.entry(p, q) for q in range(self.dim + 1))

    def alternating_sum(self, q: int) -> int:
        return sum((-1) ** (q - p) * self.entry(p, q) for p in range(q + 1))

    def euler(self) -> int:
        return sum((-1) ** p * self.column_total(p) for p in range(self.dim + 1))

    def to_json(self) -> dict:
        return {
            "marks": self.marks,
            "census": list(self.census),
            "rows": {str(2 * q): self.row(q) for q in range(self.dim + 1)},
        }


def build_e1(n: int) -> E1Table:
    """
    Build the E1 table for M_{0,n} from the stratum census and Kunneth.

    Raises:
        RangeError: If n is outside 4..8.
    """
    if not isinstance(n, int) or not MIN_E1_MARKS <= n <= MAX_E1_MARKS:
        raise RangeError(f"E1 tables are built for {MIN_E1_MARKS} <= n <= {MAX_E1_MARKS}, got {n!r}")
    dim = n - 3
    columns = [PoincarePolynomial((0,)) for _ in range(dim + 1)]
    census = [0] * (dim + 1)
    for profile, multiplicity in valence_profiles(n - 1):
        p = len(profile) - 1
        closure = PoincarePolynomial.product(_mbar_table(v) for v in profile)
        columns[p] = columns[p] + PoincarePolynomial.product([PoincarePolynomial((multiplicity,)), closure])
        census[p] += multiplicity
    entries = {}
    for p, column in enumerate(columns):
        for q in range(p, dim + 1):
            value = column[2 * (q - p)]
            if value:
                entries[(p, q)] = value
    logger.debug("E1 table for M_0,%d: census %s", n, census)
    return E1Table(n, dim, entries, tuple(census))


@dataclass(frozen=True)
class RowIdentity:
    weight: int
    terms: tuple
    total: int
    betti: int

    @property
    def holds(self) -> bool:
        return self.total == self.betti

    @property
    def text(self) -> str:
        parts = []
        for k, (sign, value) in enumerate(self.terms):
            if k == 0:
                parts.append(f"{MINUS}{value}" if sign < 0 else str(value))
            else:
                parts.append(f"{MINUS if sign < 0 else '+'} {value}")
        return f"{' '.join(parts)} = {self.total}"

    def to_json(self) -> dict:
        return {"weight": self.weight, "identity": self.text, "betti": self.betti, "holds": self.holds}


@dataclass(frozen=True)
class PurityReport:
    marks: int
    rows: tuple
    level: str = CERTIFICATE_LEVEL

    @property
    def passed(self) -> bool:
        return all(row.holds for row in self.rows)

    def to_json(self) -> dict:
        return {"marks": self.marks, "level": self.level, "passed": self.passed, "rows": [r.to_json() for r in self.rows]}


def purity_check(n: int, table: Optional[E1Table] = None) -> PurityReport:
    """
    Check every weight row: sum_p (-1)^(q-p) E1(p, q) = b_q(M_{0,n}).

    Terms are listed from p = q down to p = 0.

    Raises:
        PurityViolationError: If a row identity fails.
    """
    table = table or build_e1(n)
    betti = betti_open(n)
    rows = []
    for q in range(table.dim + 1):
        terms = tuple(((-1) ** (q - p), table.entry(p, q)) for p in range(q, -1, -1) if table.entry(p, q))
        rows.append(RowIdentity(2 * q, terms, table.alternating_sum(q), betti[q]))
    report = PurityReport(n, tuple(rows))
    for row in report.rows:
        if not row.holds:
            raise PurityViolationError(f"M_0,{n} weight {row.weight}: {row.text} but b = {row.betti}")
    return report


# ----------------------------------------------------------------------
# Proper acyclicity
# ----------------------------------------------------------------------


def coherent_p1(k: int) -> tuple[int, int]:
    """(h^0, h^1) of O(k) on P^1; h^1 by Serre duality h^1(O(k)) = h^0(O(-2 - k))."""
    h0 = max(k + 1, 0)
    h1 = max(-k - 1, 0)
    return h0, h1


@dataclass(frozen=True)
class AcyclicityCertificate:
    """
    Dimension-level proper-acyclicity data for one space.

    Attributes:
        space (str): Tag such as "p1(3)" or "flc(2)".
        hodge_dims (tuple): dim H^0 Omega^q for q = 0..log_dim, by purity from point counts.
        betti_dims (tuple): Betti numbers of the Kato-Nakayama realization, same length.
        coherent (tuple): Optional (h^0, h^1) pairs of each Omega^q from coherent cohomology.
        passed (bool): Verdict.
    """

    space: str
    hodge_dims: tuple
    betti_dims: tuple
    coherent: tuple = ()
    passed: bool = False
    level: str = CERTIFICATE_LEVEL

    def to_json(self) -> dict:
        out = {
            "space": self.space,
            "hodge_dims": list(self.hodge_dims),
            "betti_dims": list(self.betti_dims),
            "passed": self.passed,
            "level": self.level,
        }
        if self.coherent:
            out["coherent"] = [{"h0": h0, "h1": h1} for h0, h1 in self.coherent]
        return out


def _padded(poly: PoincarePolynomial, length: int) -> tuple:
    return tuple(poly[k] for k in range(length))


def _certificate(space: str, hodge: PoincarePolynomial, betti: PoincarePolynomial, log_dim: int, coherent=()) -> AcyclicityCertificate:
    length = log_dim + 1
    hodge_dims = _padded(hodge, length)
    betti_dims = _padded(betti, length)
    passed = (
        hodge.degree <= log_dim
        and betti.degree <= log_dim
        and hodge_dims == betti_dims
        and all(h1 == 0 for _, h1 in coherent)
        and (not coherent or tuple(h0 for h0, _ in coherent) == hodge_dims)
    )
    logger.debug("%s: hodge %s betti %s passed=%s", space, hodge_dims, betti_dims, passed)
    return AcyclicityCertificate(space, hodge_dims, betti_dims, tuple(coherent), passed)


def acyclicity_p1(d: int) -> AcyclicityCertificate:
    """
    (P^1, d points)_log.

    Hodge dims come from purity inversion of |P^1 minus d points| = q + 1 - d,
    Betti dims from the sphere with d discs removed, coherent data from
    Omega^0 = O and Omega^1(log D) = O(d - 2).

    Raises:
        ArityError: If d < 1.
    """
    if not isinstance(d, int) or d < 1:
        raise ArityError(f"Need at least one point on P^1, got {d!r}")
    primes = interpolation_primes(1, start=d + 1)
    poly = counting_polynomial({p: p + 1 - d for p in primes}, 1)
    hodge = betti_from_open_count(poly, 1)
    betti = PoincarePolynomial((1, d - 1))
    coherent = (coherent_p1(0), coherent_p1(d - 2))
    return _certificate(f"p1({d})", hodge, betti, 1, coherent)


def acyclicity_flc(n: int) -> AcyclicityCertificate:
    """
    FLC_n.

    Hodge dims come from purity inversion of the torus-bundle count
    (q - 1)^(n+1) |M_{0,n+1}(F_q)|, Betti dims from flc_top.

    Raises:
        ArityError: If n < 1.
    """
    if not isinstance(n, int) or n < 1:
        raise ArityError(f"FLC arities start at 1, got {n!r}")
    log_dim = 2 * n - 1
    primes = interpolation_primes(log_dim)
    if n == 1:
        values = {p: p - 1 for p in primes}
    else:
        values = {p: (p - 1) ** (n + 1) * count_open(n + 1, p) for p in primes}
    hodge = betti_from_open_count(counting_polynomial(values, log_dim), log_dim)
    return _certificate(f"flc({n})", hodge, flc_top(n), log_dim)


def acyclicity_certificate(space: str, value: int) -> AcyclicityCertificate:
    """Dispatch on space "p1" (value = number of points) or "flc" (value = arity)."""
    if space == "p1":
        return acyclicity_p1(value)
    if space == "flc":
        return acyclicity_flc(value)
    raise ValueError(f"Unknown space {space!r}; use 'p1' or 'flc'")
