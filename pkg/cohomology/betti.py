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

import itertools
import logging
import math
from collections import Counter
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from functools import lru_cache
from typing import Callable, Optional, Sequence

from sympy import Poly, Symbol, interpolate

from cohomology.poincare import PoincarePolynomial, one_plus_t
from operad.trees import all_trees
from utils.exceptions import ArityError, PurityViolationError, RangeError
from utils.primes import check_prime, interpolation_primes, merge_primes

logger = logging.getLogger(__name__)

# Spaces here are 2-pure: |U(F_q)| = sum_k (-1)^k b_k q^(dim - k).
q = Symbol("q")

# Brute-force enumeration of M_{0,n} tuples is used up to this many marks.
ENUMERATION_MARKS = 7
MAX_OPEN_MARKS = 9
MAX_BAR_MARKS = 8
# Conf_n(A^1) is enumerated directly up to this many points.
ENUMERATION_CONF = 4


def _check_marks(n: int, low: int, high: int, space: str) -> None:
    if not isinstance(n, int) or n < low:
        raise ArityError(f"{space} needs at least {low} marks, got {n!r}")
    if n > high:
        raise RangeError(f"{space} is supported up to {high} marks, got {n}")


# ----------------------------------------------------------------------
# Point counts
# ----------------------------------------------------------------------


@lru_cache(maxsize=None)
def count_open(n: int, q: int, method: str = "auto") -> int:
    """
    |M_{0,n}(F_q)|: ordered (n - 3)-tuples of distinct elements of F_q minus {0, 1}.

    Marks 0, 1 and infinity are fixed by PGL_2, the remaining n - 3 marks are
    free and pairwise distinct.

    Args:
        n (int): Number of marks, n >= 3.
        q (int): A prime >= 5.
        method (str): "enumerate", "formula" or "auto" (enumerate up to 7 marks).

    Raises:
        PrimeError: If q is not an admissible prime.
        ArityError: If n < 3.
    """
    _check_marks(n, 3, MAX_OPEN_MARKS, "M_{0,n}")
    check_prime(q)
    if method == "auto":
        method = "enumerate" if n <= ENUMERATION_MARKS else "formula"
    if method == "enumerate":
        return sum(1 for _ in itertools.permutations(range(2, q), n - 3))
    if method == "formula":
        return math.prod(q - 2 - k for k in range(n - 3))
    raise ValueError(f"Unknown counting method {method!r}")


@lru_cache(maxsize=None)
def valence_profiles(arity: int) -> tuple:
    """Multiset of vertex valences over all strata of Mbar_{0,arity+1}, with multiplicities."""
    profiles = Counter(tuple(sorted(tree.valences())) for tree in all_trees(arity))
    logger.debug("Arity %d: %d strata in %d valence profiles", arity, sum(profiles.values()), len(profiles))
    return tuple(sorted(profiles.items()))


def count_bar(n: int, q: int) -> int:
    """
    |Mbar_{0,n}(F_q)| as the sum over strata of products of open counts.

    A stratum with dual tree T is isomorphic to the product of M_{0,val(v)}
    over the vertices v of T.
    """
    _check_marks(n, 3, MAX_BAR_MARKS, "Mbar_{0,n}")
    check_prime(q)
    if n == 3:
        return 1
    return sum(
        multiplicity * math.prod(count_open(v, q) for v in profile)
        for profile, multiplicity in valence_profiles(n - 1)
    )


def count_conf(n: int, q: int, method: str = "auto") -> int:
    """
    |Conf_n(A^1)(F_q)|, ordered n-tuples of distinct points of F_q.

    Counted directly for n <= 4, otherwise as q (q - 1) |M_{0,n+1}(F_q)|:
    translations and scalings act freely with quotient M_{0,n+1}.
    """
    if not isinstance(n, int) or n < 1:
        raise ArityError(f"Configuration spaces need n >= 1, got {n!r}")
    check_prime(q)
    if method == "auto":
        method = "enumerate" if n <= ENUMERATION_CONF else "formula"
    if method == "enumerate":
        return sum(1 for _ in itertools.permutations(range(q), n))
    if method == "formula":
        if n == 1:
            return q
        return q * (q - 1) * count_open(n + 1, q)
    raise ValueError(f"Unknown counting method {method!r}")


def count_many(func: Callable[[int, int], int], n: int, primes: Sequence[int], workers: int = 1) -> list[int]:
    """Evaluate func(n, q) over primes, in a process pool when workers > 1. Order follows primes."""
    if workers > 1 and len(primes) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            return list(pool.map(func, [n] * len(primes), primes))
    return [func(n, p) for p in primes]


# ----------------------------------------------------------------------
# Purity inversion
# ----------------------------------------------------------------------


def counting_polynomial(values: dict[int, int], dim: int) -> Poly:
    """
    Interpolate point counts as a polynomial in q of degree at most dim.

    The first dim + 1 primes determine the polynomial; every further prime
    must agree with it.

    Raises:
        PurityViolationError: If the counts are not polynomial of degree <= dim.
    """
    primes = sorted(values)
    if len(primes) < dim + 1:
        raise ValueError(f"Need {dim + 1} primes to determine degree {dim}, got {primes}")
    basis = primes[: dim + 1]
    poly = Poly(interpolate([(p, values[p]) for p in basis], q), q)
    for p in primes[dim + 1:]:
        if poly.eval(p) != values[p]:
            raise PurityViolationError(f"Count {values[p]} at q={p} disagrees with interpolant {poly.as_expr()}")
    if any(not c.is_integer for c in poly.all_coeffs()):
        raise PurityViolationError(f"Counting polynomial {poly.as_expr()} has non-integer coefficients")
    if poly.degree() > dim:
        raise PurityViolationError(f"Counting polynomial {poly.as_expr()} exceeds degree {dim}")
    return poly


def betti_from_open_count(poly: Poly, dim: int) -> PoincarePolynomial:
    """Read b_k from |U(F_q)| = sum_k (-1)^k b_k q^(dim - k)."""
    coeffs = [int(poly.coeff_monomial(q ** (dim - k))) * (-1) ** k for k in range(dim + 1)]
    if any(b < 0 for b in coeffs):
        raise PurityViolationError(f"{poly.as_expr()} has a sign pattern no 2-pure space can have")
    return PoincarePolynomial(tuple(coeffs))


def betti_from_proper_count(poly: Poly, dim: int) -> PoincarePolynomial:
    """Read b_2k from |X(F_q)| = sum_k b_2k q^k; odd Betti numbers vanish."""
    coeffs = []
    for k in range(dim + 1):
        coeffs.extend([int(poly.coeff_monomial(q ** k)), 0])
    coeffs = coeffs[:-1]
    if any(b < 0 for b in coeffs):
        raise PurityViolationError(f"{poly.as_expr()} has negative coefficients")
    return PoincarePolynomial(tuple(coeffs))


def _values(func, n: int, dim: int, primes: Optional[Sequence[int]], workers: int) -> dict[int, int]:
    chosen = merge_primes(interpolation_primes(dim), primes or ())
    counts = count_many(func, n, chosen, workers)
    for p, c in zip(chosen, counts):
        logger.debug("%s(%d, %d) = %d", func.__name__, n, p, c)
    return dict(zip(chosen, counts))


# ----------------------------------------------------------------------
# Betti tables
# ----------------------------------------------------------------------


def betti_open_recursion(n: int) -> PoincarePolynomial:
    """P(M_{0,n}) from the fibrations M_{0,k+1} -> M_{0,k} with fiber P^1 minus k - 1 points."""
    _check_marks(n, 3, MAX_OPEN_MARKS, "M_{0,n}")
    return PoincarePolynomial.product(PoincarePolynomial.linear(k - 1) for k in range(3, n))


def betti_open(n: int, primes: Optional[Sequence[int]] = None, workers: int = 1) -> PoincarePolynomial:
    """
    Poincare polynomial of M_{0,n}, computed by the fibration recursion and by
    purity inversion of point counts, which must agree.

    Raises:
        PurityViolationError: If the two computations disagree.
    """
    recursion = betti_open_recursion(n)
    dim = n - 3
    inverted = betti_from_open_count(counting_polynomial(_values(count_open, n, dim, primes, workers), dim), dim)
    if inverted != recursion:
        raise PurityViolationError(f"M_0,{n}: point counts give {inverted}, fibrations give {recursion}")
    return recursion


def mbar(n: int, primes: Optional[Sequence[int]] = None, workers: int = 1) -> PoincarePolynomial:
    """
    Poincare polynomial of Mbar_{0,n} by purity inversion of the stratified count.

    Raises:
        PurityViolationError: If the table is not palindromic with vanishing odd part.
    """
    _check_marks(n, 3, MAX_BAR_MARKS, "Mbar_{0,n}")
    dim = n - 3
    poly = counting_polynomial(_values(count_bar, n, dim, primes, workers), dim)
    table = betti_from_proper_count(poly, dim)
    if not table.is_palindromic() or not table.odd_vanish():
        raise PurityViolationError(f"Mbar_0,{n} table {table.to_list()} violates Poincare duality or purity")
    return table


def ld(n: int, primes: Optional[Sequence[int]] = None, workers: int = 1) -> PoincarePolynomial:
    """
    H^* of Conf_n(C), the little disks space LD_n, from configuration counts.

    Cross-checked against prod_{k=1}^{n-1} (1 + k t).
    """
    if not isinstance(n, int) or n < 1:
        raise ArityError(f"Little disks arities start at 1, got {n!r}")
    if n > MAX_OPEN_MARKS - 1:
        raise RangeError(f"LD_n is supported up to n = {MAX_OPEN_MARKS - 1}, got {n}")
    inverted = betti_from_open_count(counting_polynomial(_values(count_conf, n, n, primes, workers), n), n)
    expected = PoincarePolynomial.product(PoincarePolynomial.linear(k) for k in range(1, n))
    if inverted != expected:
        raise PurityViolationError(f"Conf_{n}: point counts give {inverted}, expected {expected}")
    return inverted


def fld(n: int, primes: Optional[Sequence[int]] = None, workers: int = 1) -> PoincarePolynomial:
    """Framed little disks: (1 + t)^n times ld(n)."""
    return one_plus_t(n) * ld(n, primes, workers)


def flc_top(n: int, primes: Optional[Sequence[int]] = None, workers: int = 1) -> PoincarePolynomial:
    """
    Betti table of the Kato-Nakayama realization of FLC_n.

    An (S^1)^(n+1)-bundle over M_{0,n+1}; for n = 1 the circle.
    """
    if not isinstance(n, int) or n < 1:
        raise ArityError(f"FLC arities start at 1, got {n!r}")
    if n == 1:
        return one_plus_t(1)
    return one_plus_t(n + 1) * betti_open(n + 1, primes, workers)


@dataclass(frozen=True)
class PoincareTables:
    """
    Betti tables attached to arity n of the operads.

    Attributes:
        arity (int): Operad arity n.
        open (PoincarePolynomial): M_{0,n+1}.
        mbar (PoincarePolynomial): Mbar_{0,n+1}, the base of FLC_n.
        flc_top (PoincarePolynomial): Realization of FLC_n.
        fld (PoincarePolynomial): Framed little disks FLD_n.
        ld (PoincarePolynomial): Little disks LD_n.
    """

    arity: int
    open: PoincarePolynomial
    mbar: PoincarePolynomial
    flc_top: PoincarePolynomial
    fld: PoincarePolynomial
    ld: PoincarePolynomial

    def to_json(self) -> dict:
        return {
            "arity": self.arity,
            "open": self.open.to_list(),
            "mbar": self.mbar.to_list(),
            "flc_top": self.flc_top.to_list(),
            "fld": self.fld.to_list(),
            "ld": self.ld.to_list(),
        }


def poincare_tables(n: int, primes: Optional[Sequence[int]] = None, workers: int = 1) -> PoincareTables:
    """
    All tables for operad arity n >= 2.

    Raises:
        PurityViolationError: If flc_top and fld disagree.
    """
    if not isinstance(n, int) or n < 2:
        raise ArityError(f"Operad tables need arity >= 2, got {n!r}")
    tables = PoincareTables(
        arity=n,
        open=betti_open(n + 1, primes, workers),
        mbar=mbar(n + 1, primes, workers),
        flc_top=flc_top(n, primes, workers),
        fld=fld(n, primes, workers),
        ld=ld(n, primes, workers),
    )
    if tables.flc_top != tables.fld:
        raise PurityViolationError(f"FLC_{n} realization {tables.flc_top} differs from FLD_{n} {tables.fld}")
    logger.info("Tables for arity %d: fld %s", n, tables.fld)
    return tables
