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
from functools import lru_cache
from typing import Iterable, Iterator, Sequence, Union

from sympy.utilities.iterables import multiset_partitions

from operad.axioms import AxiomReport
from utils.exceptions import ArityError, PermutationError, SlotError

logger = logging.getLogger(__name__)

Clade = frozenset
Permutation = tuple[int, ...]
Nested = Union[int, tuple]


def compatible(a: frozenset, b: frozenset) -> bool:
    """Two clades can coexist in one tree when nested or disjoint."""
    return a <= b or b <= a or not (a & b)


def _clade_key(clade: frozenset) -> tuple:
    return (len(clade), tuple(sorted(clade)))


@dataclass(frozen=True)
class StableTree:
    """
    Dual tree of a stable genus-zero curve with marks 0..arity.

    Attributes:
        arity (int): Number of input marks n >= 2.
        clades (frozenset[frozenset[int]]): One leaf set per internal edge.

    Raises:
        ArityError: If arity < 2.
        ValueError: If a clade is unstable, out of range or crosses another.
    """

    arity: int
    clades: frozenset = frozenset()

    def __post_init__(self) -> None:
        if not isinstance(self.arity, int) or self.arity < 2:
            raise ArityError(f"Stable trees need arity >= 2, got {self.arity!r}")
        clades = frozenset(frozenset(c) for c in self.clades)
        object.__setattr__(self, "clades", clades)
        for clade in clades:
            if not 2 <= len(clade) <= self.arity - 1:
                raise ValueError(f"Unstable clade {sorted(clade)} for arity {self.arity}")
            if not clade <= frozenset(range(1, self.arity + 1)):
                raise ValueError(f"Clade {sorted(clade)} uses marks outside 1..{self.arity}")
        for a, b in itertools.combinations(clades, 2):
            if not compatible(a, b):
                raise ValueError(f"Clades {sorted(a)} and {sorted(b)} cross")

    @classmethod
    def _trusted(cls, arity: int, clades: frozenset) -> "StableTree":
        # Skips validation; callers guarantee a well-formed clade set.
        tree = object.__new__(cls)
        object.__setattr__(tree, "arity", arity)
        object.__setattr__(tree, "clades", clades)
        return tree

    # ------------------------------------------------------------------
    # Shape
    # ------------------------------------------------------------------

    @property
    def codim(self) -> int:
        return len(self.clades)

    @property
    def leaf_set(self) -> frozenset:
        return frozenset(range(1, self.arity + 1))

    def sorted_clades(self) -> list[frozenset]:
        return sorted(self.clades, key=_clade_key)

    def vertices(self) -> list[frozenset]:
        """
        Vertices in depth-first preorder of the canonical form.

        A vertex is identified with the leaf set below it; the root vertex is
        the full leaf set 1..n.
        """
        order: list[frozenset] = []

        def visit(vertex: frozenset) -> None:
            order.append(vertex)
            for child in self.children(vertex):
                if isinstance(child, frozenset):
                    visit(child)

        visit(self.leaf_set)
        return order

    def children(self, vertex: frozenset) -> list[Union[frozenset, int]]:
        """Maximal subclades and uncovered leaves of a vertex, sorted by minimal leaf."""
        inside = [c for c in self.clades if c < vertex]
        maximal = [c for c in inside if not any(c < d for d in inside)]
        covered = frozenset().union(*maximal) if maximal else frozenset()
        items: list[Union[frozenset, int]] = list(maximal)
        items.extend(k for k in vertex if k not in covered)
        return sorted(items, key=lambda item: min(item) if isinstance(item, frozenset) else item)

    def valence(self, vertex: frozenset) -> int:
        """Number of special points on the component: children plus the edge towards the root."""
        return len(self.children(vertex)) + 1

    def valences(self) -> list[int]:
        return [self.valence(v) for v in self.vertices()]

    def parent(self, vertex: frozenset) -> frozenset:
        """Smallest vertex strictly containing the given one."""
        if vertex == self.leaf_set:
            raise ValueError("The root vertex has no parent")
        above = [c for c in self.clades if vertex < c]
        return min(above, key=len) if above else self.leaf_set

    def edges(self) -> list[tuple[frozenset, frozenset]]:
        return [(self.parent(v), v) for v in self.vertices()[1:]]

    def leaf_vertex(self, mark: int) -> frozenset:
        """Vertex carrying a mark; mark 0 sits on the root."""
        if mark == 0:
            return self.leaf_set
        holders = [c for c in self.clades if mark in c]
        return min(holders, key=len) if holders else self.leaf_set

    # ------------------------------------------------------------------
    # Canonical forms and serialization
    # ------------------------------------------------------------------

    def canonical(self) -> Nested:
        """Nested tuple of leaves, children ordered by minimal leaf."""

        def build(vertex: frozenset) -> tuple:
            return tuple(
                build(child) if isinstance(child, frozenset) else child
                for child in self.children(vertex)
            )

        return build(self.leaf_set)

    def __str__(self) -> str:
        def render(node: Nested) -> str:
            if isinstance(node, int):
                return str(node)
            return "(" + " ".join(render(child) for child in node) + ")"

        return render(self.canonical())

    def sort_key(self) -> tuple:
        return (self.codim, [tuple(sorted(c)) for c in self.sorted_clades()])

    def to_json(self) -> dict:
        """
        Serialize with vertices numbered in canonical preorder.

        Field order is fixed: leaves, vertices, edges, labels.
        """
        vertices = self.vertices()
        index = {v: k for k, v in enumerate(vertices)}
        return {
            "leaves": self.arity + 1,
            "vertices": len(vertices),
            "edges": [[index[p], index[c]] for p, c in self.edges()],
            "labels": {str(mark): index[self.leaf_vertex(mark)] for mark in range(self.arity + 1)},
        }

    @classmethod
    def from_json(cls, data: dict) -> "StableTree":
        """
        Rebuild a tree from `to_json` output.

        Raises:
            ValueError: If the payload is not a rooted tree on marks 0..n.
        """
        try:
            arity = int(data["leaves"]) - 1
            count = int(data["vertices"])
            edges = [(int(p), int(c)) for p, c in data["edges"]]
            labels = {int(k): int(v) for k, v in data["labels"].items()}
        except (KeyError, TypeError, ValueError) as e:
            raise ValueError(f"Malformed tree payload: {e}") from e
        if sorted(labels) != list(range(arity + 1)) or labels[0] != 0:
            raise ValueError("Tree labels must cover marks 0..n with mark 0 on vertex 0")
        if len(edges) != count - 1:
            raise ValueError(f"{count} vertices need {count - 1} edges, got {len(edges)}")

        if any(not 0 <= v < count for v in labels.values()):
            raise ValueError(f"Tree labels must name vertices 0..{count - 1}")

        below: dict[int, list[int]] = {v: [] for v in range(count)}
        parent: dict[int, int] = {}
        for p, c in edges:
            if not (0 <= p < count and 1 <= c < count) or c in parent:
                raise ValueError(f"Edge {[p, c]} does not fit a tree rooted at vertex 0")
            parent[c] = p
            below[p].append(c)

        for v in range(count):
            valence = sum(1 for holder in labels.values() if holder == v) + len(below[v])
            if v:
                valence += 1
            if valence < 3:
                raise ValueError(f"Unstable vertex {v}: valence {valence}")

        def leaves_under(v: int, depth: int = 0) -> frozenset:
            if depth > count:
                raise ValueError("Tree payload contains a cycle")
            own = frozenset(m for m, holder in labels.items() if holder == v and m != 0)
            return own.union(*(leaves_under(c, depth + 1) for c in below[v]))

        clades = [leaves_under(v) for v in range(1, count)]
        if len(set(clades)) != len(clades):
            raise ValueError("Tree payload repeats a clade")
        return cls(arity, frozenset(clades))


def corolla(n: int) -> StableTree:
    """The open stratum of M_{0,n+1}: one vertex, no internal edge."""
    if not isinstance(n, int) or n < 2:
        raise ArityError(f"A corolla needs arity >= 2, got {n!r}")
    return StableTree._trusted(n, frozenset())


def graft(s: StableTree, t: StableTree, i: int) -> StableTree:
    """
    Plug the root of t into input i of s.

    Inputs of t occupy marks i..i+m-1 of the result; inputs of s after i shift
    up by m - 1. The new internal edge has clade {i, ..., i+m-1}.

    Raises:
        SlotError: If i is not in 1..arity(s).
    """
    n, m = s.arity, t.arity
    if not 1 <= i <= n:
        raise SlotError(f"Slot {i} out of range 1..{n}")
    block = frozenset(range(i, i + m))

    def outer(k: int) -> int:
        return k if k < i else k + m - 1

    clades = {block}
    for clade in s.clades:
        image = {outer(k) for k in clade if k != i}
        if i in clade:
            image |= block
        clades.add(frozenset(image))
    for clade in t.clades:
        clades.add(frozenset(j + i - 1 for j in clade))
    return StableTree._trusted(n + m - 1, frozenset(clades))


# ----------------------------------------------------------------------
# Permutations
# ----------------------------------------------------------------------


def check_permutation(p: Sequence[int], n: int) -> Permutation:
    """
    Validate a permutation of marks 0..n that fixes the root.

    Raises:
        PermutationError: If p has the wrong length, is not a bijection or moves 0.
    """
    p = tuple(p)
    if len(p) != n + 1 or sorted(p) != list(range(n + 1)):
        raise PermutationError(f"{list(p)} is not a permutation of 0..{n}")
    if p[0] != 0:
        raise PermutationError(f"Permutations must fix the root mark 0, got p(0) = {p[0]}")
    return p


def identity_permutation(n: int) -> Permutation:
    return tuple(range(n + 1))


def all_permutations(n: int) -> Iterator[Permutation]:
    for rest in itertools.permutations(range(1, n + 1)):
        yield (0,) + rest


def adjacent_transpositions(n: int) -> list[Permutation]:
    """Generators (k k+1) of the symmetric group on 1..n."""
    gens = []
    for k in range(1, n):
        p = list(range(n + 1))
        p[k], p[k + 1] = p[k + 1], p[k]
        gens.append(tuple(p))
    return gens


def compose_permutations(p: Sequence[int], q: Sequence[int]) -> Permutation:
    """(p o q)[k] = p[q[k]]."""
    return tuple(p[k] for k in q)


def inverse_permutation(p: Sequence[int]) -> Permutation:
    inverse = [0] * len(p)
    for k, image in enumerate(p):
        inverse[image] = k
    return tuple(inverse)


def sigma_act(p: Sequence[int], t: StableTree) -> StableTree:
    """
    Relabel mark k of t as p[k].

    Raises:
        PermutationError: If p is not a permutation of 0..n fixing 0.
    """
    p = check_permutation(p, t.arity)
    return StableTree._trusted(t.arity, frozenset(frozenset(p[k] for k in c) for c in t.clades))


def block_position(k: int, i: int, m: int) -> int:
    """Mark of outer input k after grafting an arity-m tree at slot i (k != i)."""
    return k if k < i else k + m - 1


def outer_induced_permutation(p: Sequence[int], i: int, m: int) -> Permutation:
    """
    Permutation of the composite induced by p acting on the outer factor.

    graft(sigma_act(p, s), t, p[i]) == sigma_act(result, graft(s, t, i)).
    """
    n = len(p) - 1
    p = check_permutation(p, n)
    target = p[i]
    induced = [0] * (n + m)
    for k in range(1, n + 1):
        if k == i:
            continue
        induced[block_position(k, i, m)] = block_position(p[k], target, m)
    for j in range(1, m + 1):
        induced[i + j - 1] = target + j - 1
    return tuple(induced)


def inner_induced_permutation(q: Sequence[int], i: int, n: int) -> Permutation:
    """
    Permutation of the composite induced by q acting on the inner factor.

    graft(s, sigma_act(q, t), i) == sigma_act(result, graft(s, t, i)).
    """
    m = len(q) - 1
    q = check_permutation(q, m)
    induced = list(range(n + m))
    for j in range(1, m + 1):
        induced[i + j - 1] = i + q[j] - 1
    return tuple(induced)


# ----------------------------------------------------------------------
# Enumeration
# ----------------------------------------------------------------------


@lru_cache(maxsize=None)
def _rooted_families(leaves: frozenset) -> tuple[frozenset, ...]:
    # Clade families of all trees whose root sees exactly `leaves`.
    ordered = sorted(leaves)
    families: list[frozenset] = []
    for parts in range(2, len(ordered) + 1):
        for partition in multiset_partitions(ordered, parts):
            options = []
            for block in partition:
                block = frozenset(block)
                if len(block) == 1:
                    options.append((frozenset(),))
                else:
                    options.append(tuple(f | {block} for f in _rooted_families(block)))
            for choice in itertools.product(*options):
                families.append(frozenset().union(*choice))
    return tuple(families)


@lru_cache(maxsize=None)
def _trees_by_codim(n: int) -> dict[int, tuple[StableTree, ...]]:
    grouped: dict[int, list[StableTree]] = {}
    for family in _rooted_families(frozenset(range(1, n + 1))):
        tree = StableTree._trusted(n, family)
        grouped.setdefault(tree.codim, []).append(tree)
    logger.debug("Enumerated %d trees of arity %d", sum(map(len, grouped.values())), n)
    return {c: tuple(sorted(trees, key=StableTree.sort_key)) for c, trees in sorted(grouped.items())}


def enumerate_trees(n: int, c: int) -> list[StableTree]:
    """
    One tree per boundary stratum of codimension c in Mbar_{0,n+1}.

    Trees are returned sorted by their clade lists, so the order is stable.

    Raises:
        ArityError: If n < 2.
        ValueError: If c < 0.
    """
    if not isinstance(n, int) or n < 2:
        raise ArityError(f"Stable trees need arity >= 2, got {n!r}")
    if c < 0:
        raise ValueError(f"Codimension must be >= 0, got {c}")
    return list(_trees_by_codim(n).get(c, ()))


def all_trees(n: int) -> list[StableTree]:
    """Every stratum of Mbar_{0,n+1}, by codimension."""
    return [t for c in range(n - 1) for t in enumerate_trees(n, c)]


def divisor_count(n: int) -> int:
    """
    Brute-force count of the boundary divisors of Mbar_{0,n+1}.

    Counts subsets S of marks 0..n avoiding 0 with 2 <= |S| <= n - 1, one per
    bipartition of the marks.
    """
    return sum(
        1
        for size in range(2, n)
        for _ in itertools.combinations(range(1, n + 1), size)
    )


def strata_by_grafting(n: int, c: int) -> set[StableTree]:
    """
    Codimension-c trees of arity n built as Sigma-translates of iterated grafts of c + 1 corollas.

    Independent of `enumerate_trees`; used to cross-check it.
    """
    if c == 0:
        return {corolla(n)}
    found: set[StableTree] = set()
    for m in range(2, n):
        for s in strata_by_grafting(n - m + 1, c - 1):
            grafted = graft(s, corolla(m), 1)
            found.update(sigma_act(p, grafted) for p in all_permutations(n))
    return found


def orbits(trees: Iterable[StableTree]) -> list[list[StableTree]]:
    """Partition trees into symmetric-group orbits."""
    remaining = set(trees)
    result = []
    while remaining:
        seed = min(remaining, key=StableTree.sort_key)
        orbit = {sigma_act(p, seed) for p in all_permutations(seed.arity)}
        result.append(sorted(orbit & remaining, key=StableTree.sort_key))
        remaining -= orbit
    return result


# ----------------------------------------------------------------------
# Forgetful and doubling maps
# ----------------------------------------------------------------------


def forget(t: StableTree, keep: Iterable[int]) -> StableTree:
    """
    Forget every mark outside `keep` and stabilize.

    Kept marks are relabelled in increasing order, so the k-th smallest kept
    mark becomes mark k. A clade C survives as C & keep when that set still
    has between 2 and |keep| - 2 marks.

    Raises:
        ValueError: If `keep` misses mark 0, leaves fewer than 3 marks or
            names marks outside 0..n.
    """
    kept = sorted(set(keep))
    if not kept or kept[0] != 0:
        raise ValueError("The kept marks must include the root mark 0")
    if kept[-1] > t.arity:
        raise ValueError(f"Kept marks {kept} exceed arity {t.arity}")
    if len(kept) < 3:
        raise ArityError(f"Forgetting down to {len(kept)} marks leaves an unstable curve")
    relabel = {mark: k for k, mark in enumerate(kept)}
    kept_set = frozenset(kept)
    clades = set()
    for clade in t.clades:
        restricted = clade & kept_set
        if 2 <= len(restricted) <= len(kept) - 2:
            clades.add(frozenset(relabel[k] for k in restricted))
    return StableTree._trusted(len(kept) - 1, frozenset(clades))


def doubled_marks(k: int) -> tuple[int, int]:
    """Marks (x_k, y_k) replacing mark k in the doubled tree."""
    return 2 * k, 2 * k + 1


def double_clade(clade: frozenset) -> frozenset:
    return frozenset(m for k in clade for m in doubled_marks(k))


def double(t: StableTree) -> StableTree:
    """
    Attach a three-pointed component at every mark.

    Mark k becomes the pair (2k, 2k + 1); the result has arity 2n + 1. Its
    clades are the doubled clades of t, a tail {2k, 2k + 1} for each input k,
    and the root tail {2, ..., 2n + 1}.
    """
    n = t.arity
    clades = {double_clade(c) for c in t.clades}
    clades.update(frozenset(doubled_marks(k)) for k in range(1, n + 1))
    clades.add(frozenset(range(2, 2 * n + 2)))
    return StableTree._trusted(2 * n + 1, frozenset(clades))


# ----------------------------------------------------------------------
# Operad axioms
# ----------------------------------------------------------------------


def _arity_triples(limit: int) -> Iterator[tuple[int, int, int]]:
    for a in range(2, limit + 1):
        for b in range(2, limit + 1):
            for c in range(2, limit + 1):
                if a + b + c - 2 <= limit:
                    yield a, b, c


def check_graft_axioms(max_arity: int = 5) -> list[AxiomReport]:
    """
    Exhaustively check the operad identities for `graft`.

    Associativity runs over every triple of trees whose composite has arity at
    most max_arity + 2. Equivariance runs over every pair with composite arity
    at most max_arity + 1, using all permutations up to arity 3 and the
    adjacent transpositions above that; with the action law those generate
    everything.
    """
    sequential = AxiomReport("graft.sequential")
    parallel = AxiomReport("graft.parallel")
    outer_eq = AxiomReport("graft.equivariance.outer")
    inner_eq = AxiomReport("graft.equivariance.inner")
    action = AxiomReport("sigma.action_law")

    for na, nb, nc in _arity_triples(max_arity + 2):
        for s in all_trees(na):
            for t in all_trees(nb):
                for u in all_trees(nc):
                    for i in range(1, na + 1):
                        st = graft(s, t, i)
                        for j in range(1, na + nb):
                            lhs = graft(st, u, j)
                            if i <= j <= i + nb - 1:
                                rhs = graft(s, graft(t, u, j - i + 1), i)
                                sequential.record(lhs == rhs, f"{s} o{i} {t} o{j} {u}")
                            elif j < i:
                                rhs = graft(graft(s, u, j), t, i + nc - 1)
                                parallel.record(lhs == rhs, f"{s} o{i} {t} o{j} {u}")
                            else:
                                rhs = graft(graft(s, u, j - nb + 1), t, i)
                                parallel.record(lhs == rhs, f"{s} o{i} {t} o{j} {u}")
        logger.debug("graft associativity done for arities %s", (na, nb, nc))

    def perms(n: int) -> list[Permutation]:
        return list(all_permutations(n)) if n <= 3 else adjacent_transpositions(n)

    for na in range(2, max_arity + 1):
        for nb in range(2, max_arity + 2 - na + 1):
            for s in all_trees(na):
                for t in all_trees(nb):
                    for i in range(1, na + 1):
                        st = graft(s, t, i)
                        for p in perms(na):
                            lhs = graft(sigma_act(p, s), t, p[i])
                            rhs = sigma_act(outer_induced_permutation(p, i, nb), st)
                            outer_eq.record(lhs == rhs, f"p={p} on {s} o{i} {t}")
                        for q in perms(nb):
                            lhs = graft(s, sigma_act(q, t), i)
                            rhs = sigma_act(inner_induced_permutation(q, i, na), st)
                            inner_eq.record(lhs == rhs, f"q={q} on {s} o{i} {t}")

    for n in range(2, min(max_arity, 4) + 1):
        group = list(all_permutations(n))
        for t in all_trees(n):
            action.record(sigma_act(identity_permutation(n), t) == t, f"id on {t}")
            for p in group:
                for q in group:
                    lhs = sigma_act(compose_permutations(p, q), t)
                    action.record(lhs == sigma_act(p, sigma_act(q, t)), f"{p} o {q} on {t}")

    reports = [sequential, parallel, outer_eq, inner_eq, action]
    for report in reports:
        logger.info("%s: %d checked, %d failed", report.name, report.checked, report.failed)
    return reports
