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
from dataclasses import dataclass
from typing import Optional

from operad.axioms import AxiomReport
from operad.comm import comm_compose
from operad.logspace import (
    LogStructureMap,
    NCLogDescriptor,
    TreePoset,
    direct_sum,
    identity_map,
    normal_label,
    product,
    ptlog,
    pullback_along_stratum,
)
from operad.trees import (
    StableTree,
    adjacent_transpositions,
    all_permutations,
    all_trees,
    corolla,
    double,
    double_clade,
    doubled_marks,
    enumerate_trees,
    forget,
    graft,
    inner_induced_permutation,
    inverse_permutation,
    outer_induced_permutation,
    sigma_act,
    strata_by_grafting,
)
from utils.exceptions import ArityError, SlotError

logger = logging.getLogger(__name__)

PTLOG_LABEL = "L"


def cotangent_label(k: int) -> str:
    return f"L{k}"


@dataclass(frozen=True)
class FLCSpace:
    """Arity n of FLC together with its descriptor."""

    arity: int
    descriptor: NCLogDescriptor

    def dims(self) -> tuple[int, int, int]:
        return self.descriptor.dims()

    def strata(self) -> list[StableTree]:
        if self.arity == 1:
            return []
        return all_trees(self.arity)

    def to_json(self) -> dict:
        return {"arity": self.arity, **self.descriptor.to_json()}


def _check_arity(n: int) -> None:
    if not isinstance(n, int) or n < 1:
        raise ArityError(f"FLC arities start at 1, got {n!r}")


def flc_space(n: int) -> FLCSpace:
    """
    FLC_n.

    Raises:
        ArityError: If n <= 0.
    """
    _check_arity(n)
    if n == 1:
        return FLCSpace(1, ptlog(1, (PTLOG_LABEL,)))
    descriptor = NCLogDescriptor(
        f"Mbar_0,{n + 1}",
        n - 2,
        TreePoset(n),
        tuple(cotangent_label(k) for k in range(n + 1)),
    )
    return FLCSpace(n, descriptor)


def flc_chart(n: int, tree: Optional[StableTree] = None) -> NCLogDescriptor:
    """
    FLC_n restricted to the closure of the stratum of `tree` (the open chart if None).

    Raises:
        ArityError: If the tree has another arity or n = 1 is given a tree.
    """
    space = flc_space(n)
    if tree is None:
        return space.descriptor
    if n == 1 or tree.arity != n:
        raise ArityError(f"Tree of arity {tree.arity} does not index a stratum of FLC_{n}")
    return pullback_along_stratum(space.descriptor, tree.clades)


def _tree_or_corolla(n: int, tree: Optional[StableTree]) -> Optional[StableTree]:
    if n == 1:
        return None
    return tree if tree is not None else corolla(n)


def flc_comp(
    m: int,
    n: int,
    i: int,
    outer_tree: Optional[StableTree] = None,
    inner_tree: Optional[StableTree] = None,
    tags: tuple[str, str] = ("a", "b"),
) -> LogStructureMap:
    """
    Insert FLC_m into slot i of FLC_n.

    The source is the product of the outer chart (tag tags[0]) and the inner
    chart (tag tags[1]); the target is the chart of the grafted stratum. Target
    labels are matched as follows, with a = tags[0], b = tags[1]:

        L_k      -> a:L_k            k < i
        L_k      -> b:L_(k-i+1)      i <= k <= i+m-1
        L_k      -> a:L_(k-m+1)      k >= i+m
        N[block] -> a:L_i * b:L0     the new node
        N[C]     -> a:N[C'] or b:N[C'] for clades inherited from either factor

    FLC_1 factors act through the monoid structure of the log point.

    Raises:
        SlotError: If i is not in 1..n.
        ArityError: If an arity is below 1 or a tree has the wrong arity.
    """
    _check_arity(m)
    _check_arity(n)
    if not 1 <= i <= n:
        raise SlotError(f"Slot {i} out of range 1..{n}")
    a, b = tags
    s = _tree_or_corolla(n, outer_tree)
    t = _tree_or_corolla(m, inner_tree)
    source = product([(a, flc_chart(n, s)), (b, flc_chart(m, t))])

    matching: dict[str, dict[str, int]] = {}
    if n == 1 and m == 1:
        image = None
        target = flc_chart(1)
        matching[PTLOG_LABEL] = {f"{a}:{PTLOG_LABEL}": 1, f"{b}:{PTLOG_LABEL}": 1}
    elif m == 1:
        image = s
        target = flc_chart(n, s)
        for label in target.bundles:
            matching[label] = {f"{a}:{label}": 1}
        matching[cotangent_label(i)][f"{b}:{PTLOG_LABEL}"] = 1
    elif n == 1:
        image = t
        target = flc_chart(m, t)
        for label in target.bundles:
            matching[label] = {f"{b}:{label}": 1}
        matching[cotangent_label(0)][f"{a}:{PTLOG_LABEL}"] = 1
    else:
        image = graft(s, t, i)
        target = flc_chart(n + m - 1, image)
        block = frozenset(range(i, i + m))
        for k in range(n + m):
            if k < i:
                matching[cotangent_label(k)] = {f"{a}:{cotangent_label(k)}": 1}
            elif k <= i + m - 1:
                matching[cotangent_label(k)] = {f"{b}:{cotangent_label(k - i + 1)}": 1}
            else:
                matching[cotangent_label(k)] = {f"{a}:{cotangent_label(k - m + 1)}": 1}
        for clade in image.clades:
            if clade == block:
                row = {f"{a}:{cotangent_label(i)}": 1, f"{b}:{cotangent_label(0)}": 1}
            elif clade < block:
                row = {f"{b}:{normal_label(frozenset(k - i + 1 for k in clade))}": 1}
            else:
                pre = {k if k < i else k - m + 1 for k in clade - block}
                if block <= clade:
                    pre.add(i)
                row = {f"{a}:{normal_label(frozenset(pre))}": 1}
            matching[normal_label(clade)] = row
    return LogStructureMap.from_matching(source, target, matching, stratum_image=image)


def relabel_map(tree: StableTree, p) -> LogStructureMap:
    """
    The isomorphism chart(tree) -> chart(sigma_act(p, tree)).

    Target L_p(k) pulls back to L_k and N[p(C)] to N[C].
    """
    moved = sigma_act(p, tree)
    source = flc_chart(tree.arity, tree)
    target = flc_chart(tree.arity, moved)
    matching = {cotangent_label(p[k]): {cotangent_label(k): 1} for k in range(tree.arity + 1)}
    for clade in tree.clades:
        matching[normal_label(frozenset(p[k] for k in clade))] = {normal_label(clade): 1}
    return LogStructureMap.from_matching(source, target, matching, stratum_image=moved)


def sigma_map(p, tree: Optional[StableTree] = None) -> LogStructureMap:
    """
    Right action of p on FLC_n charts: chart(tree) -> chart(p^-1 tree).

    With this convention theta_log(n, i) after sigma_map(p) is theta_log(n, p(i)).
    """
    n = len(p) - 1
    tree = _tree_or_corolla(n, tree)
    return relabel_map(tree, inverse_permutation(p))


def _doubled_coordinate(tree: StableTree, divisor: frozenset) -> str:
    n = tree.arity
    if divisor == frozenset(range(2, 2 * n + 2)):
        return cotangent_label(0)
    for k in range(1, n + 1):
        if divisor == frozenset(doubled_marks(k)):
            return cotangent_label(k)
    for clade in tree.clades:
        if divisor == double_clade(clade):
            return normal_label(clade)
    raise ValueError(f"{sorted(divisor)} is not a divisor of the doubled tree")


def theta_log(n: int, i: int, tree: Optional[StableTree] = None) -> LogStructureMap:
    """
    The forgetful map FLC_n -> pt_log remembering input i, on the chart of `tree`.

    Obtained from the doubled curve: keep the marks (x0, y0, xi, yi) and pull
    back the log point along the boundary point where they split as
    {x0 y0 | xi yi}. Every divisor of the doubled tree that restricts to that
    split contributes its coordinate, which gives L0 * Li * prod N[C] over the
    clades C containing i.

    Raises:
        SlotError: If i is not in 1..n.
    """
    _check_arity(n)
    if not 1 <= i <= n:
        raise SlotError(f"Slot {i} out of range 1..{n}")
    target = flc_chart(1)
    if n == 1:
        return identity_map(target)
    tree = _tree_or_corolla(n, tree)
    doubled = double(tree)
    xi, yi = doubled_marks(i)
    keep = frozenset({0, 1, xi, yi})
    split = forget(doubled, keep)
    if split.clades != frozenset({frozenset({2, 3})}):
        raise RuntimeError(f"Doubled tree of {tree} forgets to {split}, not the boundary point")
    row = {}
    for divisor in doubled.clades:
        if divisor & keep == frozenset({xi, yi}):
            row[_doubled_coordinate(tree, divisor)] = 1
    return LogStructureMap.from_matching(flc_chart(n, tree), target, {PTLOG_LABEL: row})


# ----------------------------------------------------------------------
# Axiom checks
# ----------------------------------------------------------------------


def _trees_for(n: int, with_strata: bool) -> list[Optional[StableTree]]:
    if n == 1:
        return [None]
    return all_trees(n) if with_strata else [corolla(n)]


def _image_tree(n: int, tree: Optional[StableTree]) -> Optional[StableTree]:
    return None if n == 1 else tree


def _sequential_pair(na, nb, nc, s, t, u, i, j):
    st = flc_comp(nb, na, i, s, t, tags=("a", "b"))
    left = direct_sum([("x", st), ("z", identity_map(flc_chart(nc, u)))]).then(
        flc_comp(nc, na + nb - 1, j, st.stratum_image, u, tags=("x", "z"))
    )
    tu = flc_comp(nc, nb, j - i + 1, t, u, tags=("a", "b"))
    right = direct_sum([("x", identity_map(flc_chart(na, s))), ("z", tu)]).then(
        flc_comp(nb + nc - 1, na, i, s, tu.stratum_image, tags=("x", "z"))
    )
    lhs = left.renamed_sources([("x:a:", "A:"), ("x:b:", "B:"), ("z:", "C:")])
    rhs = right.renamed_sources([("x:", "A:"), ("z:a:", "B:"), ("z:b:", "C:")])
    return left.target.bundles == right.target.bundles and lhs == rhs


def _parallel_pair(na, nb, nc, s, t, u, i, j):
    st = flc_comp(nb, na, i, s, t, tags=("a", "b"))
    left = direct_sum([("x", st), ("z", identity_map(flc_chart(nc, u)))]).then(
        flc_comp(nc, na + nb - 1, j, st.stratum_image, u, tags=("x", "z"))
    )
    if j < i:
        slot_u, slot_t = j, i + nc - 1
    else:
        slot_u, slot_t = j - nb + 1, i
    su = flc_comp(nc, na, slot_u, s, u, tags=("a", "b"))
    right = direct_sum([("x", su), ("z", identity_map(flc_chart(nb, t)))]).then(
        flc_comp(nb, na + nc - 1, slot_t, su.stratum_image, t, tags=("x", "z"))
    )
    lhs = left.renamed_sources([("x:a:", "A:"), ("x:b:", "B:"), ("z:", "C:")])
    rhs = right.renamed_sources([("x:a:", "A:"), ("x:b:", "C:"), ("z:", "B:")])
    return left.target.bundles == right.target.bundles and lhs == rhs


def _permutations_for(n: int) -> list:
    return list(all_permutations(n)) if n <= 3 else adjacent_transpositions(n)


def check_flc_axioms(max_arity: int = 4, strata_arity: int = 3) -> list[AxiomReport]:
    """
    Check the operad identities for flc_comp.

    Associativity runs over all arity triples up to max_arity on open charts,
    and over every stratum chart for arities up to strata_arity. Equivariance
    uses every pair of stratum charts whose composite has arity at most
    max_arity + 1, and open charts beyond that. Also checks divisor
    coverage by translates of comp_1, codimension of the images, fiber
    bookkeeping and compatibility of theta_log with Comm^{pt_log}.
    """
    sequential = AxiomReport("flc.sequential")
    parallel = AxiomReport("flc.parallel")
    outer_eq = AxiomReport("flc.equivariance.outer")
    inner_eq = AxiomReport("flc.equivariance.inner")
    fibers = AxiomReport("flc.fiber_bookkeeping")
    theta = AxiomReport("flc.theta_compatibility")
    theta_sigma = AxiomReport("flc.theta_equivariance")
    coverage = AxiomReport("flc.divisor_coverage")

    arities = range(1, max_arity + 1)
    for na, nb, nc in itertools.product(arities, repeat=3):
        with_strata = max(na, nb, nc) <= strata_arity
        for s in _trees_for(na, with_strata):
            for t in _trees_for(nb, with_strata):
                for u in _trees_for(nc, with_strata):
                    for i in range(1, na + 1):
                        for j in range(1, na + nb):
                            where = f"arities {(na, nb, nc)} slots {(i, j)} trees {(str(s), str(t), str(u))}"
                            if i <= j <= i + nb - 1:
                                sequential.record(_sequential_pair(na, nb, nc, s, t, u, i, j), where)
                            else:
                                parallel.record(_parallel_pair(na, nb, nc, s, t, u, i, j), where)
        logger.debug("flc associativity done for arities %s", (na, nb, nc))

    for na, nb in itertools.product(arities, repeat=2):
        pair_strata = na + nb - 1 <= max_arity + 1
        for s in _trees_for(na, pair_strata):
            for t in _trees_for(nb, pair_strata):
                for i in range(1, na + 1):
                    f = flc_comp(nb, na, i, s, t)
                    fibers.record(
                        f.source.fiber_dim == f.target.fiber_dim + 1
                        and (f.stratum_image is None or f.stratum_image.codim >= 1 or na == 1 or nb == 1),
                        f"arities {(na, nb)} slot {i}",
                    )
                    for k in range(1, na + nb):
                        _record_theta(theta, f, na, nb, s, t, i, k)
                    if na >= 2:
                        for p in _permutations_for(na):
                            lhs = direct_sum([("a", relabel_map(s, p)), ("b", identity_map(flc_chart(nb, t)))]).then(
                                flc_comp(nb, na, p[i], sigma_act(p, s), t)
                            )
                            induced = outer_induced_permutation(p, i, nb) if nb >= 2 else p
                            rhs = f.then(relabel_map(f.stratum_image, induced))
                            outer_eq.record(lhs == rhs, f"p={p} arities {(na, nb)} slot {i} {s}")
                    if nb >= 2:
                        for q in _permutations_for(nb):
                            lhs = direct_sum([("a", identity_map(flc_chart(na, s))), ("b", relabel_map(t, q))]).then(
                                flc_comp(nb, na, i, s, sigma_act(q, t))
                            )
                            induced = inner_induced_permutation(q, i, na) if na >= 2 else q
                            rhs = f.then(relabel_map(f.stratum_image, induced))
                            inner_eq.record(lhs == rhs, f"q={q} arities {(na, nb)} slot {i} {t}")

    for n in range(2, max_arity + 1):
        for tree in all_trees(n):
            for p in all_permutations(n):
                moved = sigma_act(inverse_permutation(p), tree)
                for i in range(1, n + 1):
                    lhs = sigma_map(p, tree).then(theta_log(n, i, moved))
                    theta_sigma.record(lhs == theta_log(n, p[i], tree), f"p={p} i={i} {tree}")
        coverage.record(
            strata_by_grafting(n, 1) == set(enumerate_trees(n, 1)),
            f"codimension-one strata of arity {n}",
        )

    reports = [sequential, parallel, outer_eq, inner_eq, fibers, theta, theta_sigma, coverage]
    for report in reports:
        logger.info("%s: %d checked, %d failed", report.name, report.checked, report.failed)
    return reports


def _theta_tuple(n: int, tree: Optional[StableTree], tag: str) -> tuple:
    return tuple(
        {f"{tag}:{label}": e for label, e in theta_log(n, k, tree).monomial(PTLOG_LABEL).items()}
        for k in range(1, n + 1)
    )


def _record_theta(report: AxiomReport, f: LogStructureMap, na: int, nb: int, s, t, i: int, k: int) -> None:
    # theta_k after the composition equals the Comm^{pt_log} insertion of the thetas.
    expected = comm_compose("log-point", _theta_tuple(na, s, "a"), _theta_tuple(nb, t, "b"), i)[k - 1]
    n = na + nb - 1
    got = f.then(theta_log(n, k, _image_tree(n, f.stratum_image))).monomial(PTLOG_LABEL)
    report.record(got == expected, f"theta_{k} after comp_{i} arities {(na, nb)}")
