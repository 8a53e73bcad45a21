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
import random
from dataclasses import dataclass, field
from typing import Any, Hashable, Mapping, Optional, Sequence, Union

from sympy import ImmutableMatrix

from operad.axioms import AxiomReport
from operad.trees import all_trees, compatible
from utils.exceptions import BaseMismatchError, StratumError

logger = logging.getLogger(__name__)

Tag = Hashable
Stratum = frozenset
Monomial = dict[str, int]


# ----------------------------------------------------------------------
# Component tags
# ----------------------------------------------------------------------


def tag_key(tag: Tag) -> tuple:
    """Total order on component tags of mixed kinds."""
    if isinstance(tag, frozenset):
        return (0, len(tag), tuple(sorted(tag)))
    if isinstance(tag, tuple):
        return (2, str(tag[0]), tag_key(tag[1]))
    return (1, str(tag))


def tag_str(tag: Tag) -> str:
    if isinstance(tag, frozenset):
        return ",".join(str(k) for k in sorted(tag))
    if isinstance(tag, tuple):
        return f"{tag[0]}:{tag_str(tag[1])}"
    return str(tag)


def normal_label(tag: Tag) -> str:
    """Label of the normal bundle of a divisor component, e.g. `N[1,2]` or `a:N[1,2]`."""
    if isinstance(tag, tuple):
        return f"{tag[0]}:{normal_label(tag[1])}"
    return f"N[{tag_str(tag)}]"


def sort_tags(tags) -> list:
    return sorted(tags, key=tag_key)


# ----------------------------------------------------------------------
# Stratifications
# ----------------------------------------------------------------------


@dataclass(frozen=True)
class ExplicitPoset:
    """
    A stratification given by listing its strata.

    Each stratum is the set of divisor components containing it; the empty
    set is the open stratum.
    """

    components: frozenset
    strata_set: frozenset

    @classmethod
    def disjoint_points(cls, tags: Sequence[Tag]) -> "ExplicitPoset":
        """Components that never meet, such as points on a curve."""
        return cls(frozenset(tags), frozenset([frozenset()] + [frozenset([t]) for t in tags]))

    def contains(self, stratum: Stratum) -> bool:
        return stratum in self.strata_set

    def strata(self) -> list[Stratum]:
        return sorted(self.strata_set, key=lambda s: (len(s), [tag_key(t) for t in sort_tags(s)]))

    def restrict(self, stratum: Stratum) -> "ExplicitPoset":
        inside = frozenset(z - stratum for z in self.strata_set if stratum <= z)
        return ExplicitPoset(frozenset().union(*inside) if inside else frozenset(), inside)


@dataclass(frozen=True)
class TreePoset:
    """
    Boundary stratification of Mbar_{0,n+1}, or of a stratum closure in it.

    Components are clades; a set of clades is a stratum when the clades are
    pairwise compatible. `locus` holds the clades already cut down to.
    """

    arity: int
    locus: frozenset = frozenset()

    @property
    def components(self) -> frozenset:
        return frozenset(
            c
            for size in range(2, self.arity)
            for c in map(frozenset, itertools.combinations(range(1, self.arity + 1), size))
            if c not in self.locus and all(compatible(c, d) for d in self.locus)
        )

    def contains(self, stratum: Stratum) -> bool:
        if not all(isinstance(c, frozenset) for c in stratum):
            return False
        if stratum & self.locus:
            return False
        full = list(stratum | self.locus)
        for c in stratum:
            if not 2 <= len(c) <= self.arity - 1 or not c <= frozenset(range(1, self.arity + 1)):
                return False
        return all(compatible(a, b) for a, b in itertools.combinations(full, 2))

    def strata(self) -> list[Stratum]:
        found = [
            t.clades - self.locus
            for t in all_trees(self.arity)
            if self.locus <= t.clades
        ]
        return sorted(found, key=lambda s: (len(s), [tag_key(t) for t in sort_tags(s)]))

    def restrict(self, stratum: Stratum) -> "TreePoset":
        return TreePoset(self.arity, self.locus | stratum)


@dataclass(frozen=True)
class ProductPoset:
    """Stratification of a product; component tags are (factor tag, component)."""

    factors: tuple

    @property
    def components(self) -> frozenset:
        return frozenset((tag, c) for tag, poset in self.factors for c in poset.components)

    def _split(self, stratum: Stratum) -> Optional[dict]:
        parts = {tag: set() for tag, _ in self.factors}
        for item in stratum:
            if not isinstance(item, tuple) or item[0] not in parts:
                return None
            parts[item[0]].add(item[1])
        return {tag: frozenset(part) for tag, part in parts.items()}

    def contains(self, stratum: Stratum) -> bool:
        parts = self._split(stratum)
        if parts is None:
            return False
        return all(poset.contains(parts[tag]) for tag, poset in self.factors)

    def strata(self) -> list[Stratum]:
        per_factor = [[frozenset((tag, c) for c in s) for s in poset.strata()] for tag, poset in self.factors]
        return [frozenset().union(*combo) for combo in itertools.product(*per_factor)]

    def restrict(self, stratum: Stratum) -> "ProductPoset":
        parts = self._split(stratum)
        if parts is None:
            raise StratumError(f"Stratum {sorted(map(tag_str, stratum))} is not a product stratum")
        return ProductPoset(tuple((tag, poset.restrict(parts[tag])) for tag, poset in self.factors))


Poset = Union[ExplicitPoset, TreePoset, ProductPoset]


# ----------------------------------------------------------------------
# Descriptors
# ----------------------------------------------------------------------


@dataclass(frozen=True)
class NCLogDescriptor:
    """
    A strict normal-crossings log space (X, D, L)_log.

    Attributes:
        base (str): Tag of the underlying scheme X.
        base_dim (int): Geometric dimension of X.
        poset (Poset): Stratification of the divisor D.
        bundles (tuple[str, ...]): Ordered line-bundle labels L.
        locus (frozenset): Components X has been cut down to by pullbacks.
    """

    base: str
    base_dim: int
    poset: Any
    bundles: tuple = ()
    locus: frozenset = field(default=frozenset())

    def __post_init__(self) -> None:
        if self.base_dim < 0:
            raise ValueError(f"Geometric dimension must be >= 0, got {self.base_dim}")
        if len(set(self.bundles)) != len(self.bundles):
            raise ValueError(f"Bundle labels must be distinct: {list(self.bundles)}")

    @property
    def components(self) -> frozenset:
        return self.poset.components

    @property
    def log_dim(self) -> int:
        return self.base_dim + len(self.bundles)

    @property
    def fiber_dim(self) -> int:
        return len(self.bundles)

    def dims(self) -> tuple[int, int, int]:
        return dims(self)

    def contains_stratum(self, stratum: Stratum) -> bool:
        return self.poset.contains(frozenset(stratum))

    def strata(self) -> list[Stratum]:
        return self.poset.strata()

    def is_ptlog_power(self) -> bool:
        return self.base == PT and self.base_dim == 0 and not self.components

    def to_json(self) -> dict:
        return {
            "base": self.base,
            "dims": list(self.dims()),
            "bundles": list(self.bundles),
            "locus": [tag_str(t) for t in sort_tags(self.locus)],
        }


PT = "pt"
P1 = "P1"


def dims(desc: NCLogDescriptor) -> tuple[int, int, int]:
    """Geometric, log and fiber dimension."""
    return desc.base_dim, desc.log_dim, desc.fiber_dim


def ptlog(d: int = 1, labels: Optional[Sequence[str]] = None) -> NCLogDescriptor:
    """
    The d-th power of the log point.

    Labels default to `L` for d = 1 and `L1..Ld` otherwise.
    """
    if d < 0:
        raise ValueError(f"Power of the log point must be >= 0, got {d}")
    if labels is None:
        labels = ("L",) if d == 1 else tuple(f"L{k}" for k in range(1, d + 1))
    if len(labels) != d:
        raise ValueError(f"Expected {d} labels, got {list(labels)}")
    return NCLogDescriptor(PT, 0, ExplicitPoset(frozenset(), frozenset([frozenset()])), tuple(labels))


def p1_with_points(d: int) -> NCLogDescriptor:
    """(P^1, D)_log with D a set of d distinct points s1..sd and no bundle decorations."""
    if d < 0:
        raise ValueError(f"Number of points must be >= 0, got {d}")
    tags = [f"s{k}" for k in range(1, d + 1)]
    return NCLogDescriptor(P1, 1, ExplicitPoset.disjoint_points(tags), ())


def pullback_along_stratum(desc: NCLogDescriptor, stratum: Sequence[Tag]) -> NCLogDescriptor:
    """
    Restrict a descriptor to the closure of a stratum.

    The stratum is given by the divisor components containing it. Geometric
    dimension drops by the codimension, and one normal-bundle label per
    component is appended in component order, so log dimension is preserved.

    Raises:
        StratumError: If the components do not meet in a stratum of desc.
    """
    y = frozenset(stratum)
    if not desc.contains_stratum(y):
        raise StratumError(f"{sorted(map(tag_str, y))} is not a stratum of {desc.base}")
    if not y:
        return desc
    normals = tuple(normal_label(t) for t in sort_tags(y))
    logger.debug("Pulling back %s along %s", desc.base, normals)
    return NCLogDescriptor(
        desc.base,
        desc.base_dim - len(y),
        desc.poset.restrict(y),
        desc.bundles + normals,
        desc.locus | y,
    )


def product(factors: Sequence[tuple[str, NCLogDescriptor]]) -> NCLogDescriptor:
    """Product of descriptors; labels and components are prefixed with the factor tag."""
    tags = [tag for tag, _ in factors]
    if len(set(tags)) != len(tags):
        raise ValueError(f"Factor tags must be distinct: {tags}")
    return NCLogDescriptor(
        " x ".join(f"{tag}:{d.base}" for tag, d in factors),
        sum(d.base_dim for _, d in factors),
        ProductPoset(tuple((tag, d.poset) for tag, d in factors)),
        tuple(f"{tag}:{label}" for tag, d in factors for label in d.bundles),
        frozenset((tag, c) for tag, d in factors for c in d.locus),
    )


def same_space(a: NCLogDescriptor, b: NCLogDescriptor) -> bool:
    return a.base == b.base and a.locus == b.locus and a.bundles == b.bundles


# ----------------------------------------------------------------------
# Maps of log structures
# ----------------------------------------------------------------------


@dataclass(frozen=True)
class LogStructureMap:
    """
    A homogeneous map of log structures from `source` to `target`.

    Every target bundle label is sent to a monomial in source labels. Rows are
    kept in target bundle order, each as (label, ((source label, exponent), ...))
    with zero exponents dropped.

    Attributes:
        source (NCLogDescriptor): Domain.
        target (NCLogDescriptor): Codomain.
        rows (tuple): The bundle matching.
        stratum_image (Any): Where the underlying map lands, if recorded. Not
            part of equality.
    """

    source: NCLogDescriptor
    target: NCLogDescriptor
    rows: tuple
    stratum_image: Any = field(default=None, compare=False)

    @classmethod
    def from_matching(
        cls,
        source: NCLogDescriptor,
        target: NCLogDescriptor,
        matching: Mapping[str, Mapping[str, int]],
        stratum_image: Any = None,
    ) -> "LogStructureMap":
        """
        Build a map from a dict target label -> {source label: exponent}.

        Raises:
            ValueError: If a label is unknown, a target label is missing or an
                exponent is not a nonnegative integer.
        """
        missing = [label for label in target.bundles if label not in matching]
        if missing:
            raise ValueError(f"No monomial given for target labels {missing}")
        extra = [label for label in matching if label not in target.bundles]
        if extra:
            raise ValueError(f"Unknown target labels {extra}")
        order = {label: k for k, label in enumerate(source.bundles)}
        rows = []
        for label in target.bundles:
            monomial = matching[label]
            for src, exponent in monomial.items():
                if src not in order:
                    raise ValueError(f"Unknown source label {src!r} in the row of {label!r}")
                if not isinstance(exponent, int) or exponent < 0:
                    raise ValueError(f"Exponent of {src!r} in {label!r} must be a nonnegative integer, got {exponent!r}")
            entries = tuple(sorted(((s, e) for s, e in monomial.items() if e), key=lambda item: order[item[0]]))
            rows.append((label, entries))
        return cls(source, target, tuple(rows), stratum_image)

    @classmethod
    def from_matrix(cls, source: NCLogDescriptor, target: NCLogDescriptor, matrix: Sequence[Sequence[int]]) -> "LogStructureMap":
        """Rows index target labels, columns source labels."""
        matrix = [list(row) for row in matrix]
        if len(matrix) != len(target.bundles) or any(len(row) != len(source.bundles) for row in matrix):
            raise ValueError(
                f"Exponent matrix must be {len(target.bundles)}x{len(source.bundles)}, got "
                f"{len(matrix)}x{len(matrix[0]) if matrix else 0}"
            )
        matching = {
            t: {s: int(e) for s, e in zip(source.bundles, row)}
            for t, row in zip(target.bundles, matrix)
        }
        return cls.from_matching(source, target, matching)

    @property
    def matching(self) -> dict[str, Monomial]:
        return {label: dict(entries) for label, entries in self.rows}

    def monomial(self, label: str) -> Monomial:
        for name, entries in self.rows:
            if name == label:
                return dict(entries)
        raise KeyError(f"{label!r} is not a target label")

    @property
    def exponent_matrix(self) -> ImmutableMatrix:
        matching = self.matching
        return ImmutableMatrix(
            len(self.target.bundles),
            len(self.source.bundles),
            lambda r, c: matching[self.target.bundles[r]].get(self.source.bundles[c], 0),
        )

    def then(self, other: "LogStructureMap") -> "LogStructureMap":
        """
        Composite `other` after `self`.

        Raises:
            BaseMismatchError: If self.target is not other.source.
        """
        if not same_space(self.target, other.source):
            raise BaseMismatchError(
                f"Cannot compose: target {self.target.base} does not match source {other.source.base}"
            )
        inner = self.matching
        composite = {}
        for label, entries in other.rows:
            monomial: Monomial = {}
            for middle, exponent in entries:
                for src, e in inner[middle].items():
                    monomial[src] = monomial.get(src, 0) + e * exponent
            composite[label] = monomial
        return LogStructureMap.from_matching(self.source, other.target, composite, other.stratum_image)

    def renamed_sources(self, renames: Sequence[tuple[str, str]]) -> dict[str, Monomial]:
        """Matching with source label prefixes rewritten by the first matching rule."""

        def rename(label: str) -> str:
            for old, new in renames:
                if label.startswith(old):
                    return new + label[len(old):]
            return label

        return {t: {rename(s): e for s, e in entries} for t, entries in self.rows}

    def to_json(self) -> dict:
        return {
            "source": self.source.to_json(),
            "target": self.target.to_json(),
            "matching": {label: dict(entries) for label, entries in self.rows},
            "exponent_matrix": [
                [dict(entries).get(s, 0) for s in self.source.bundles] for _, entries in self.rows
            ],
        }


def compose(first: LogStructureMap, second: LogStructureMap) -> LogStructureMap:
    """`second` after `first`; exponent matrices multiply as M(second) * M(first)."""
    return first.then(second)


def identity_map(desc: NCLogDescriptor) -> LogStructureMap:
    return LogStructureMap.from_matching(desc, desc, {label: {label: 1} for label in desc.bundles})


def direct_sum(parts: Sequence[tuple[str, LogStructureMap]]) -> LogStructureMap:
    """Product of maps, tagged factor by factor like `product`."""
    source = product([(tag, f.source) for tag, f in parts])
    target = product([(tag, f.target) for tag, f in parts])
    matching = {}
    for tag, f in parts:
        for label, entries in f.rows:
            matching[f"{tag}:{label}"] = {f"{tag}:{s}": e for s, e in entries}
    return LogStructureMap.from_matching(source, target, matching)


@dataclass(frozen=True)
class EmptyMapFamily:
    """No map exists; `reason` names the obstruction."""

    source: NCLogDescriptor
    target: NCLogDescriptor
    reason: str

    @property
    def is_empty(self) -> bool:
        return True

    def to_json(self) -> dict:
        return {"empty": True, "reason": self.reason}


@dataclass(frozen=True)
class MapFamily:
    """
    All homogeneous maps source -> target over the identity of the base.

    Members are exponent matrices with nonnegative entries; between powers of
    the log point every entry must be at least 1.
    """

    source: NCLogDescriptor
    target: NCLogDescriptor
    positive: bool

    @property
    def is_empty(self) -> bool:
        return False

    @property
    def shape(self) -> tuple[int, int]:
        return len(self.target.bundles), len(self.source.bundles)

    def member(self, exponents: Union[Sequence[Sequence[int]], Mapping[str, Mapping[str, int]]]) -> LogStructureMap:
        """
        The family member with the given exponent data.

        Raises:
            ValueError: If the data has the wrong shape or violates positivity.
        """
        if isinstance(exponents, Mapping):
            f = LogStructureMap.from_matching(self.source, self.target, exponents)
        else:
            f = LogStructureMap.from_matrix(self.source, self.target, exponents)
        if self.positive and any(entry < 1 for entry in f.exponent_matrix):
            raise ValueError("Maps between powers of the log point need positive exponents")
        return f

    def to_json(self) -> dict:
        return {"empty": False, "rows": self.shape[0], "columns": self.shape[1], "positive": self.positive}


def classify_maps(src: NCLogDescriptor, dst: NCLogDescriptor) -> Union[EmptyMapFamily, MapFamily]:
    """
    Classify maps of log structures between descriptors over one base.

    Raises:
        BaseMismatchError: If the descriptors live over different schemes.
    """
    if src.base != dst.base or src.base_dim != dst.base_dim or src.locus != dst.locus:
        raise BaseMismatchError(f"Descriptors live over {src.base!r} and {dst.base!r}")
    if not dst.components <= src.components:
        extra = sort_tags(dst.components - src.components)
        return EmptyMapFamily(src, dst, f"target divisor not contained in source: {[tag_str(t) for t in extra]}")
    return MapFamily(src, dst, positive=src.is_ptlog_power() and dst.is_ptlog_power())


def _points_on_p1(tags: Sequence[str]) -> NCLogDescriptor:
    return NCLogDescriptor(P1, 1, ExplicitPoset.disjoint_points(list(tags)), ())


def check_log_maps(cases: int = 100, seed: int = 0) -> list[AxiomReport]:
    """
    Randomized composition of pt_log power maps against matrix products, and
    the Empty verdict for every pair of point sets on P^1 with four points.
    """
    products = AxiomReport("logmap.composition")
    empty = AxiomReport("logmap.classification")
    rng = random.Random(seed)
    for _ in range(cases):
        a, b, c = (rng.randint(1, 4) for _ in range(3))
        f = classify_maps(ptlog(a), ptlog(b)).member([[rng.randint(1, 4) for _ in range(a)] for _ in range(b)])
        g = classify_maps(ptlog(b), ptlog(c)).member([[rng.randint(1, 4) for _ in range(b)] for _ in range(c)])
        products.record(
            compose(f, g).exponent_matrix == g.exponent_matrix * f.exponent_matrix,
            f"{f.exponent_matrix.tolist()} then {g.exponent_matrix.tolist()}",
        )

    points = ("s1", "s2", "s3", "s4")
    subsets = [combo for size in range(len(points) + 1) for combo in itertools.combinations(points, size)]
    for src in subsets:
        for dst in subsets:
            family = classify_maps(_points_on_p1(src), _points_on_p1(dst))
            empty.record(family.is_empty == (not set(dst) <= set(src)), f"{list(src)} -> {list(dst)}")

    for report in (products, empty):
        logger.info("%s: %d checked, %d failed", report.name, report.checked, report.failed)
    return [products, empty]
