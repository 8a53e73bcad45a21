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
from dataclasses import dataclass
from typing import Callable

from bv.algebra import MAX_BASIS_ARITY, bv_dims, check_bv_operad_axioms, check_bv_relations, ger_dims
from bv.formality import assemble_formal_model, ld_pushout
from cli.report import ReportBundle
from cohomology.betti import MAX_BAR_MARKS, betti_open_recursion, count_many, count_open, fld, flc_top, ld
from cohomology.weights import MAX_E1_MARKS, acyclicity_flc, acyclicity_p1, purity_check
from operad.axioms import AxiomReport
from operad.comm import check_comm_axioms
from operad.flc import check_flc_axioms
from operad.logspace import check_log_maps
from operad.trees import check_graft_axioms, divisor_count, enumerate_trees, strata_by_grafting
from utils.exceptions import DimensionMismatchError, FreenessViolationError, PurityViolationError, RangeError
from utils.primes import interpolation_primes

logger = logging.getLogger(__name__)

MIN_MAX_N = 3
MAX_MAX_N = 6
MAX_TREE_AXIOM_ARITY = 5
MAX_FLC_AXIOM_ARITY = 4
P1_POINTS = 10
LOG_MAP_CASES = 100


@dataclass(frozen=True)
class Bounds:
    """Arity and mark bounds derived from max_n."""

    max_n: int

    @property
    def tree_arity(self) -> int:
        return min(self.max_n, MAX_TREE_AXIOM_ARITY)

    @property
    def flc_arity(self) -> int:
        return min(self.max_n - 1, MAX_FLC_AXIOM_ARITY)

    @property
    def marks(self) -> int:
        return min(self.max_n + 2, MAX_E1_MARKS - 1, MAX_BAR_MARKS - 1)

    @property
    def bv_arity(self) -> int:
        return min(self.max_n, MAX_BASIS_ARITY)


class Verdict:
    """Collects instance results for one criterion."""

    def __init__(self) -> None:
        self.checked = 0
        self.failures: list[str] = []
        self.summary: list[str] = []

    def record(self, holds: bool, description: str) -> None:
        self.checked += 1
        if not holds:
            self.failures.append(description)

    def absorb(self, reports: list[AxiomReport]) -> None:
        for report in reports:
            self.checked += report.checked
            self.failures.extend(f"{report.name}: {f}" for f in report.failures)
            if report.failed and not report.failures:
                self.failures.append(f"{report.name}: {report.failed} failures")
            if not report.checked:
                self.failures.append(f"{report.name}: nothing checked")

    @property
    def passed(self) -> bool:
        return not self.failures and self.checked > 0

    def detail(self) -> str:
        if self.failures:
            return f"{len(self.failures)} of {self.checked} failed; first: {self.failures[0]}"
        notes = "; ".join(self.summary)
        return f"{self.checked} checks" + (f"; {notes}" if notes else "")


def operad_axioms(bounds: Bounds, workers: int, seed: int) -> Verdict:
    verdict = Verdict()
    verdict.absorb(check_graft_axioms(bounds.tree_arity))
    verdict.absorb(check_flc_axioms(bounds.flc_arity, min(bounds.flc_arity, 3)))
    verdict.absorb(check_comm_axioms("free", bounds.flc_arity))
    verdict.summary.append(f"trees <= {bounds.tree_arity}, flc <= {bounds.flc_arity}")
    return verdict


def stratum_census(bounds: Bounds, workers: int, seed: int) -> Verdict:
    verdict = Verdict()
    expected = {(4, 1): 10, (4, 2): 15, (5, 1): 25}
    for (n, c), count in expected.items():
        found = enumerate_trees(n, c)
        verdict.record(len(found) == count, f"arity {n} codim {c}: {len(found)} != {count}")
        verdict.record(set(found) == strata_by_grafting(n, c), f"arity {n} codim {c}: grafting disagrees")
    for n in (4, 5):
        verdict.record(divisor_count(n) == len(enumerate_trees(n, 1)), f"arity {n}: bipartition count")
    verdict.summary.append("Mbar_0,5: 10 divisors, 15 points; Mbar_0,6: 25 divisors")
    return verdict


def purity_identities(bounds: Bounds, workers: int, seed: int) -> Verdict:
    verdict = Verdict()
    for n in range(4, bounds.marks + 1):
        dim = n - 3
        table = betti_open_recursion(n)
        primes = interpolation_primes(dim)
        counts = count_many(count_open, n, primes, workers)
        for p, value in zip(primes, counts):
            expected = sum((-1) ** k * table[k] * p ** (dim - k) for k in range(dim + 1))
            verdict.record(value == expected, f"|M_0,{n}(F_{p})| = {value} but the Betti table gives {expected}")
    verdict.summary.append(f"4 <= n <= {bounds.marks}")
    return verdict


def weight_rows(bounds: Bounds, workers: int, seed: int) -> Verdict:
    verdict = Verdict()
    for n in range(4, bounds.marks + 1):
        report = purity_check(n)
        for row in report.rows:
            verdict.record(row.holds, f"M_0,{n} weight {row.weight}: {row.text} but b = {row.betti}")
        if n == 5:
            verdict.summary.append(", ".join(row.text for row in report.rows[1:]))
    return verdict


def acyclicity(bounds: Bounds, workers: int, seed: int) -> Verdict:
    verdict = Verdict()
    for d in range(1, P1_POINTS + 1):
        cert = acyclicity_p1(d)
        verdict.record(cert.passed and cert.hodge_dims == (1, d - 1), f"p1({d}): hodge {list(cert.hodge_dims)}")
    for n in range(1, bounds.max_n + 1):
        cert = acyclicity_flc(n)
        expected = tuple(flc_top(n)[k] for k in range(2 * n))
        verdict.record(cert.passed and cert.hodge_dims == expected, f"flc({n}): hodge {list(cert.hodge_dims)}")
    verdict.summary.append(f"p1 with 1..{P1_POINTS} points, flc up to {bounds.max_n}")
    return verdict


def formality_dimensions(bounds: Bounds, workers: int, seed: int) -> Verdict:
    verdict = Verdict()
    for n in range(1, bounds.bv_arity + 1):
        verdict.record(bv_dims(n) == fld(n, None, workers), f"BV({n}) dims {bv_dims(n)} != FLD_{n}")
        verdict.record(ger_dims(n) == ld(n, None, workers), f"Ger({n}) dims {ger_dims(n)} != LD_{n}")
        model = assemble_formal_model(n)
        verdict.record(model.zero_differential, f"arity {n}: nonzero differential")
        verdict.record(model.identity_morphism, f"arity {n}: formality map is not the identity")
    verdict.absorb(check_bv_relations(3))
    verdict.absorb(check_bv_operad_axioms(max_arity=2, samples=200, seed=seed, workers=workers))
    verdict.summary.append(f"n <= {bounds.bv_arity}; relations at arity 3")
    return verdict


def pushout(bounds: Bounds, workers: int, seed: int) -> Verdict:
    verdict = Verdict()
    for n in range(2, bounds.marks + 1):
        verdict.record(ld_pushout(n) == ld(n, None, workers), f"FLD_{n} / (1 + t)^{n} != LD_{n}")
    verdict.summary.append(f"2 <= n <= {bounds.marks}")
    return verdict


def log_maps(bounds: Bounds, workers: int, seed: int) -> Verdict:
    verdict = Verdict()
    verdict.absorb(check_log_maps(LOG_MAP_CASES, seed))
    verdict.summary.append(f"{LOG_MAP_CASES} random compositions")
    return verdict


CRITERIA: tuple[tuple[str, Callable[[Bounds, int, int], Verdict]], ...] = (
    ("operad axioms", operad_axioms),
    ("stratum census", stratum_census),
    ("purity identities", purity_identities),
    ("weight rows", weight_rows),
    ("proper acyclicity", acyclicity),
    ("formality dimensions", formality_dimensions),
    ("LD pushout", pushout),
    ("log map classification", log_maps),
)


def verify_all(max_n: int = 5, workers: int = 1, seed: int = 0) -> ReportBundle:
    """
    Run every acceptance criterion; one check per criterion.

    Raises:
        RangeError: If max_n is outside 3..6.
    """
    if not isinstance(max_n, int) or not MIN_MAX_N <= max_n <= MAX_MAX_N:
        raise RangeError(f"verify-all supports {MIN_MAX_N} <= max-n <= {MAX_MAX_N}, got {max_n!r}")
    bounds = Bounds(max_n)
    bundle = ReportBundle("verify-all", {"max_n": max_n, "seed": seed})
    rows = []
    for k, (name, criterion) in enumerate(CRITERIA, start=1):
        logger.info("Criterion %d: %s", k, name)
        try:
            verdict = criterion(bounds, workers, seed)
            passed, detail, checked = verdict.passed, verdict.detail(), verdict.checked
        except (PurityViolationError, FreenessViolationError, DimensionMismatchError) as e:
            passed, detail, checked = False, str(e), 0
        bundle.add_check(f"{k}. {name}", passed, detail)
        rows.append([k, name, checked, passed])
    bundle.add_table("criteria", ["#", "criterion", "checks", "passed"], rows)
    return bundle
