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
from collections import Counter, defaultdict
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Callable, Iterable, Iterator, Mapping, Optional

from sympy.utilities.iterables import multiset_partitions

from cohomology.poincare import PoincarePolynomial
from operad.axioms import AxiomReport
from operad.trees import (
    adjacent_transpositions,
    all_permutations,
    check_permutation,
    inner_induced_permutation,
    outer_induced_permutation,
)
from utils.exceptions import ArityError, MalformedTermError, RangeError, SlotError

logger = logging.getLogger(__name__)

# A basis monomial is a product of blocks sorted by smallest generator. A block is a
# left-normed bracket whose first letter holds its smallest generator; any letter
# may carry a Delta. Generators sit in degree 0; Delta and the bracket add 1.
# The bracket is graded Lie for the shifted degree |a| + 1, so [x1, x2] = [x2, x1].
# Delta(a R) = Delta(a) R + (-1)^|a| a Delta(R) + (-1)^|a| [a, R].
Letter = tuple[int, bool]
Word = tuple[Letter, ...]
Monomial = tuple[Word, ...]

# Basis enumeration is supported up to this arity.
MAX_BASIS_ARITY = 5
DELTA = "Δ"


def _sign(exponent: int) -> int:
    return -1 if exponent % 2 else 1


def letter_degree(letter: Letter) -> int:
    return 1 if letter[1] else 0


def word_degree(word: Word) -> int:
    return len(word) - 1 + sum(1 for _, decorated in word if decorated)


def monomial_degree(monomial: Monomial) -> int:
    return sum(word_degree(w) for w in monomial)


def _shifted_parity(word: Word) -> int:
    # Sum of |l| + 1 over the letters; equals the shifted degree of the block.
    return (len(word) + sum(1 for _, decorated in word if decorated)) % 2


def _clean(combination: Mapping) -> dict:
    return {key: c for key, c in combination.items() if c}


# ----------------------------------------------------------------------
# Tensor level: blocks as Lie elements
# ----------------------------------------------------------------------


def _commutator(u: Mapping[Word, int], v: Mapping[Word, int]) -> dict[Word, int]:
    # uv - (-1)^(|u| |v|) vu with shifted parities; u and v are homogeneous.
    twist = 1 if _shifted_parity(next(iter(u))) and _shifted_parity(next(iter(v))) else -1
    out: dict[Word, int] = defaultdict(int)
    for a, ca in u.items():
        for b, cb in v.items():
            out[a + b] += ca * cb
            out[b + a] += twist * ca * cb
    return _clean(out)


@lru_cache(maxsize=None)
def _expand(word: Word) -> tuple[tuple[Word, int], ...]:
    """Tensor expansion of a left-normed bracket."""
    if len(word) == 1:
        return ((word, 1),)
    return tuple(_commutator(dict(_expand(word[:-1])), {word[-1:]: 1}).items())


def _leading(tensor: Mapping[Word, int]) -> dict[Word, int]:
    tensor = _clean(tensor)
    if not tensor:
        return {}
    low = min(g for g, _ in next(iter(tensor)))
    return {w: c for w, c in tensor.items() if w[0][0] == low}


@lru_cache(maxsize=None)
def _word_bracket(a: Word, b: Word) -> tuple[tuple[Word, int], ...]:
    tensor = _commutator(dict(_expand(a)), dict(_expand(b)))
    return tuple(sorted(_leading(tensor).items()))


@lru_cache(maxsize=None)
def _word_delta(word: Word) -> tuple[tuple[Word, int], ...]:
    out: dict[Word, int] = defaultdict(int)
    for w, c in _expand(word):
        sign = 1
        for k, (g, decorated) in enumerate(w):
            if not decorated:
                out[w[:k] + ((g, True),) + w[k + 1:]] += sign * c
                # an undecorated letter has odd shifted degree
                sign = -sign
    return tuple(sorted(_leading(out).items()))


# ----------------------------------------------------------------------
# Monomial level
# ----------------------------------------------------------------------


def _merge(m1: Monomial, m2: Monomial) -> tuple[int, Monomial]:
    """Koszul sign and normal form of the product m1 m2."""
    blocks = list(m1 + m2)
    sign = 1
    for i in range(1, len(blocks)):
        j = i
        while j > 0 and blocks[j - 1][0][0] > blocks[j][0][0]:
            if word_degree(blocks[j - 1]) % 2 and word_degree(blocks[j]) % 2:
                sign = -sign
            blocks[j - 1], blocks[j] = blocks[j], blocks[j - 1]
            j -= 1
    return sign, tuple(blocks)


def _times(left: Mapping[Monomial, int], right: Mapping[Monomial, int]) -> dict[Monomial, int]:
    out: dict[Monomial, int] = defaultdict(int)
    for a, ca in left.items():
        for b, cb in right.items():
            sign, m = _merge(a, b)
            out[m] += sign * ca * cb
    return _clean(out)


def _accumulate(target: dict, source: Mapping, factor: int = 1) -> None:
    for key, c in source.items():
        target[key] = target.get(key, 0) + factor * c


@lru_cache(maxsize=None)
def _monomial_bracket(m1: Monomial, m2: Monomial) -> tuple[tuple[Monomial, int], ...]:
    if not m1 or not m2:
        return ()
    if len(m1) > 1:
        head, rest = m1[:1], m1[1:]
        # [a R, C] = a [R, C] + (-1)^(|R| (|C| + 1)) [a, C] R
        out = _times({head: 1}, dict(_monomial_bracket(rest, m2)))
        twist = _sign(monomial_degree(rest) * (monomial_degree(m2) + 1))
        _accumulate(out, _times(dict(_monomial_bracket(head, m2)), {rest: 1}), twist)
    elif len(m2) > 1:
        head, rest = m2[:1], m2[1:]
        # [a, c R] = [a, c] R + (-1)^((|a| + 1) |c|) c [a, R]
        out = _times(dict(_monomial_bracket(m1, head)), {rest: 1})
        twist = _sign((monomial_degree(m1) + 1) * monomial_degree(head))
        _accumulate(out, _times({head: 1}, dict(_monomial_bracket(m1, rest))), twist)
    else:
        out = {(w,): c for w, c in _word_bracket(m1[0], m2[0])}
    return tuple(sorted(_clean(out).items()))


@lru_cache(maxsize=None)
def _monomial_delta(monomial: Monomial) -> tuple[tuple[Monomial, int], ...]:
    if not monomial:
        return ()
    if len(monomial) == 1:
        return tuple(((w,), c) for w, c in _word_delta(monomial[0]))
    head, rest = monomial[:1], monomial[1:]
    twist = _sign(monomial_degree(head))
    out = _times(dict(_monomial_delta(head)), {rest: 1})
    _accumulate(out, _times({head: 1}, dict(_monomial_delta(rest))), twist)
    _accumulate(out, dict(_monomial_bracket(head, rest)), twist)
    return tuple(sorted(_clean(out).items()))


# ----------------------------------------------------------------------
# Elements
# ----------------------------------------------------------------------


def letter_str(letter: Letter) -> str:
    return f"{DELTA if letter[1] else ''}x{letter[0]}"


def word_str(word: Word) -> str:
    text = letter_str(word[0])
    for letter in word[1:]:
        text = f"[{text},{letter_str(letter)}]"
    return text


def monomial_str(monomial: Monomial) -> str:
    return "·".join(word_str(w) for w in monomial) or "1"


@dataclass(frozen=True)
class BVElement:
    """
    Exact rational combination of basis monomials on a fixed set of generators.

    Attributes:
        generators (frozenset): Generator indices; each monomial uses each exactly once.
        terms (tuple): Sorted (monomial, Fraction) pairs with nonzero coefficients.
    """

    generators: frozenset
    terms: tuple = ()

    @classmethod
    def build(cls, generators: Iterable[int], coefficients: Mapping[Monomial, object]) -> "BVElement":
        items = sorted((m, Fraction(c)) for m, c in coefficients.items() if c)
        return cls(frozenset(generators), tuple(items))

    @property
    def coefficients(self) -> dict[Monomial, Fraction]:
        return dict(self.terms)

    @property
    def arity(self) -> int:
        return len(self.generators)

    @property
    def is_zero(self) -> bool:
        return not self.terms

    def degrees(self) -> list[int]:
        return sorted({monomial_degree(m) for m, _ in self.terms})

    @property
    def degree(self) -> Optional[int]:
        """Degree of a homogeneous element, None for zero."""
        degrees = self.degrees()
        if len(degrees) > 1:
            raise ValueError(f"{self} is not homogeneous: degrees {degrees}")
        return degrees[0] if degrees else None

    def components(self) -> dict[int, "BVElement"]:
        parts: dict[int, dict] = defaultdict(dict)
        for m, c in self.terms:
            parts[monomial_degree(m)][m] = c
        return {d: BVElement.build(self.generators, part) for d, part in sorted(parts.items())}

    def __add__(self, other: "BVElement") -> "BVElement":
        _same_generators(self, other)
        out = self.coefficients
        _accumulate(out, other.coefficients)
        return BVElement.build(self.generators, out)

    def __neg__(self) -> "BVElement":
        return BVElement.build(self.generators, {m: -c for m, c in self.terms})

    def __sub__(self, other: "BVElement") -> "BVElement":
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, BVElement):
            return multiply(self, other)
        return BVElement.build(self.generators, {m: c * Fraction(other) for m, c in self.terms})

    def __rmul__(self, scalar):
        return self * scalar

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for k, (m, c) in enumerate(self.terms):
            sign = "-" if c < 0 else "+"
            size = abs(c)
            body = monomial_str(m) if size == 1 else f"{size} {monomial_str(m)}"
            if k == 0:
                parts.append(f"-{body}" if c < 0 else body)
            else:
                parts.append(f"{sign} {body}")
        return " ".join(parts)


def _same_generators(a: BVElement, b: BVElement) -> None:
    if a.generators != b.generators:
        raise MalformedTermError(f"Cannot add elements on generators {sorted(a.generators)} and {sorted(b.generators)}")


def _disjoint_generators(a: BVElement, b: BVElement, operation: str) -> None:
    shared = a.generators & b.generators
    if shared:
        raise MalformedTermError(f"{operation} reuses generators {sorted(shared)}")


def generator(k: int, decorated: bool = False) -> BVElement:
    """x_k, or Delta x_k when decorated."""
    return BVElement.build({k}, {(((k, decorated),),): 1})


def basis_element(monomial: Monomial) -> BVElement:
    return BVElement.build((g for w in monomial for g, _ in w), {monomial: 1})


def zero(generators: Iterable[int]) -> BVElement:
    return BVElement.build(generators, {})


def _bilinear(a: BVElement, b: BVElement, table: Callable) -> BVElement:
    out: dict[Monomial, Fraction] = defaultdict(Fraction)
    for m1, c1 in a.terms:
        for m2, c2 in b.terms:
            for m, c in table(m1, m2):
                out[m] += c1 * c2 * c
    return BVElement.build(a.generators | b.generators, out)


def _merged(m1: Monomial, m2: Monomial) -> tuple[tuple[Monomial, int], ...]:
    sign, m = _merge(m1, m2)
    return ((m, sign),)


def multiply(a: BVElement, b: BVElement) -> BVElement:
    """
    Graded commutative product.

    Raises:
        MalformedTermError: If a and b share a generator.
    """
    _disjoint_generators(a, b, "product")
    return _bilinear(a, b, _merged)


def bracket(a: BVElement, b: BVElement) -> BVElement:
    """
    Degree one bracket, extended to products by the Leibniz rule.

    Raises:
        MalformedTermError: If a and b share a generator.
    """
    _disjoint_generators(a, b, "bracket")
    return _bilinear(a, b, _monomial_bracket)


def delta(a: BVElement) -> BVElement:
    """The BV operator; square zero, degree one."""
    out: dict[Monomial, Fraction] = defaultdict(Fraction)
    for m, c in a.terms:
        for image, k in _monomial_delta(m):
            out[image] += c * k
    return BVElement.build(a.generators, out)


def linear_sum(generators: Iterable[int], parts: Iterable[tuple[Fraction, BVElement]]) -> BVElement:
    out: dict[Monomial, Fraction] = defaultdict(Fraction)
    for factor, element in parts:
        for m, c in element.terms:
            out[m] += factor * c
    return BVElement.build(generators, out)


def evaluate_monomial(monomial: Monomial, image: Callable[[Letter], BVElement]) -> BVElement:
    """Rebuild a monomial from the images of its letters with brackets and products."""
    product = None
    for word in monomial:
        block = image(word[0])
        for letter in word[1:]:
            block = bracket(block, image(letter))
        product = block if product is None else multiply(product, block)
    return product


def relabel(a: BVElement, mapping: Mapping[int, int]) -> BVElement:
    """
    Rename generator k as mapping[k] and rewrite to normal form.

    Raises:
        MalformedTermError: If two generators get the same name.
    """
    targets = frozenset(mapping[g] for g in a.generators)
    if len(targets) != len(a.generators):
        raise MalformedTermError(f"Relabelling {dict(mapping)} is not injective on {sorted(a.generators)}")
    ordered = sorted(a.generators)
    if all(mapping[x] < mapping[y] for x, y in zip(ordered, ordered[1:])):
        renamed = {tuple(tuple((mapping[g], d) for g, d in w) for w in m): c for m, c in a.terms}
        return BVElement.build(targets, renamed)
    parts = (
        (c, evaluate_monomial(m, lambda letter: generator(mapping[letter[0]], letter[1])))
        for m, c in a.terms
    )
    return linear_sum(targets, parts)


def _check_operation(a: BVElement) -> int:
    n = a.arity
    if n < 1 or a.generators != frozenset(range(1, n + 1)):
        raise ArityError(f"An operation of BV(n) uses generators 1..n, got {sorted(a.generators)}")
    return n


def act(p: tuple, a: BVElement) -> BVElement:
    """Symmetric group action: generator k becomes p[k]."""
    n = _check_operation(a)
    p = check_permutation(p, n)
    return relabel(a, {k: p[k] for k in range(1, n + 1)})


def _left_degree(monomial: Monomial, i: int) -> int:
    # Degree written to the left of x_i in infix notation, Delta on x_i included.
    total = 0
    for word in monomial:
        gens = [g for g, _ in word]
        if i in gens:
            p = gens.index(i)
            return total + sum(letter_degree(l) for l in word[:p]) + p + letter_degree(word[p])
        total += word_degree(word)
    raise KeyError(f"Generator {i} does not occur in {monomial_str(monomial)}")


def bv_compose(a: BVElement, b: BVElement, i: int) -> BVElement:
    """
    Operadic insertion a o_i b in BV(n + m - 1).

    Generators of b become i..i+m-1, those of a after i shift by m - 1. Each
    basis monomial of a is rebuilt with x_i replaced by b (Delta x_i by
    Delta b); moving b of degree |b| past the degree r written left of x_i
    costs (-1)^(|b| r).

    Raises:
        SlotError: If i is not in 1..n.
        ArityError: If a or b does not use generators 1..arity.
    """
    n = _check_operation(a)
    m = _check_operation(b)
    if not isinstance(i, int) or not 1 <= i <= n:
        raise SlotError(f"Slot {i!r} out of range 1..{n}")
    inner = relabel(b, {j: i + j - 1 for j in range(1, m + 1)})
    generators = range(1, n + m)

    def outer(k: int) -> int:
        return k if k < i else k + m - 1

    parts = []
    for degree, piece in inner.components().items():
        decorated = delta(piece)

        def image(letter: Letter, piece=piece, decorated=decorated) -> BVElement:
            g, d = letter
            if g == i:
                return decorated if d else piece
            return generator(outer(g), d)

        for monomial, c in a.terms:
            sign = _sign(degree * _left_degree(monomial, i))
            parts.append((sign * c, evaluate_monomial(monomial, image)))
    return linear_sum(generators, parts)


# ----------------------------------------------------------------------
# Basis and dimensions
# ----------------------------------------------------------------------


@lru_cache(maxsize=None)
def basis(n: int, decorated: bool = True) -> tuple[Monomial, ...]:
    """
    Normal-form basis of BV(n), or of the Gerstenhaber suboperad when not decorated.

    Raises:
        ArityError: If n < 1.
    """
    if not isinstance(n, int) or n < 1:
        raise ArityError(f"BV arities start at 1, got {n!r}")
    marks = (False, True) if decorated else (False,)
    out = []
    for partition in multiset_partitions(list(range(1, n + 1))):
        options = []
        for block in partition:
            block = sorted(block)
            words = []
            for order in itertools.permutations(block[1:]):
                gens = (block[0],) + order
                for flags in itertools.product(marks, repeat=len(gens)):
                    words.append(tuple(zip(gens, flags)))
            options.append(words)
        for choice in itertools.product(*options):
            out.append(tuple(sorted(choice, key=lambda w: w[0][0])))
    return tuple(sorted(out))


def basis_elements(n: int, decorated: bool = True) -> list[BVElement]:
    return [basis_element(m) for m in basis(n, decorated)]


def _dims(n: int, decorated: bool) -> PoincarePolynomial:
    if not isinstance(n, int) or n < 1:
        raise ArityError(f"BV arities start at 1, got {n!r}")
    if n > MAX_BASIS_ARITY:
        raise RangeError(f"Basis enumeration is supported up to arity {MAX_BASIS_ARITY}, got {n}")
    counts = Counter(monomial_degree(m) for m in basis(n, decorated))
    return PoincarePolynomial(tuple(counts.get(k, 0) for k in range(max(counts) + 1)))


def bv_dims(n: int) -> PoincarePolynomial:
    """Graded dimension of BV(n) = H_*(FLD_n), counted on the normal-form basis."""
    return _dims(n, True)


def ger_dims(n: int) -> PoincarePolynomial:
    """Graded dimension of the Gerstenhaber suboperad, H_*(LD_n)."""
    return _dims(n, False)


# ----------------------------------------------------------------------
# Relation and operad suites
# ----------------------------------------------------------------------


def _elements_on(generators: tuple) -> list[BVElement]:
    mapping = {k + 1: g for k, g in enumerate(sorted(generators))}
    return [relabel(e, mapping) for e in basis_elements(len(generators))]


def _disjoint_sets(ground: range, parts: int) -> Iterator[list[tuple]]:
    for assignment in itertools.product(range(parts + 1), repeat=len(ground)):
        blocks = [tuple(g for g, a in zip(ground, assignment) if a == k) for k in range(1, parts + 1)]
        if all(blocks):
            yield blocks


def check_bv_relations(max_arity: int = 3) -> list[AxiomReport]:
    """
    Check the BV algebra relations on every basis element over disjoint
    generator sets inside 1..max_arity.
    """
    commutativity = AxiomReport("bv.commutativity")
    associativity = AxiomReport("bv.associativity")
    antisymmetry = AxiomReport("bv.antisymmetry")
    jacobi = AxiomReport("bv.jacobi")
    leibniz = AxiomReport("bv.leibniz")
    square = AxiomReport("bv.delta_square")
    bv_relation = AxiomReport("bv.bracket_from_delta")
    seven_term = AxiomReport("bv.seven_term")
    ground = range(1, max_arity + 1)

    for sets in _disjoint_sets(ground, 2):
        for u in _elements_on(sets[0]):
            for v in _elements_on(sets[1]):
                du, dv = u.degree, v.degree
                label = f"u={u} v={v}"
                commutativity.record(u * v == _sign(du * dv) * (v * u), label)
                antisymmetry.record(bracket(u, v) == -_sign((du + 1) * (dv + 1)) * bracket(v, u), label)
                deviation = delta(u * v) - delta(u) * v - _sign(du) * (u * delta(v))
                bv_relation.record(bracket(u, v) == _sign(du) * deviation, label)

    for sets in _disjoint_sets(ground, 3):
        for u in _elements_on(sets[0]):
            for v in _elements_on(sets[1]):
                for w in _elements_on(sets[2]):
                    du, dv = u.degree, v.degree
                    label = f"u={u} v={v} w={w}"
                    associativity.record((u * v) * w == u * (v * w), label)
                    rhs = bracket(bracket(u, v), w) + _sign((du + 1) * (dv + 1)) * bracket(v, bracket(u, w))
                    jacobi.record(bracket(u, bracket(v, w)) == rhs, label)
                    rhs = bracket(u, v) * w + _sign((du + 1) * dv) * (v * bracket(u, w))
                    leibniz.record(bracket(u, v * w) == rhs, label)
                    rhs = (
                        delta(u * v) * w
                        + _sign(du) * (u * delta(v * w))
                        + _sign((du + 1) * dv) * (v * delta(u * w))
                        - delta(u) * v * w
                        - _sign(du) * (u * delta(v) * w)
                        - _sign(du + dv) * (u * v * delta(w))
                    )
                    seven_term.record(delta(u * v * w) == rhs, label)

    for n in ground:
        for e in basis_elements(n):
            square.record(delta(delta(e)).is_zero, f"{e}")

    reports = [commutativity, associativity, antisymmetry, jacobi, leibniz, square, bv_relation, seven_term]
    for report in reports:
        logger.info("%s: %d checked, %d failed", report.name, report.checked, report.failed)
    return reports


def _record_associativity(
    sequential: AxiomReport, parallel: AxiomReport, a: BVElement, b: BVElement, c: BVElement, i: int, j: int
) -> None:
    nb, nc = b.arity, c.arity
    label = f"({a}) o{i} ({b}) o{j} ({c})"
    lhs = bv_compose(bv_compose(a, b, i), c, j)
    twist = _sign(b.degree * c.degree)
    if i <= j <= i + nb - 1:
        sequential.record(lhs == bv_compose(a, bv_compose(b, c, j - i + 1), i), label)
    elif j < i:
        parallel.record(lhs == twist * bv_compose(bv_compose(a, c, j), b, i + nc - 1), label)
    else:
        parallel.record(lhs == twist * bv_compose(bv_compose(a, c, j - nb + 1), b, i), label)


def _associativity_for(arities: tuple[int, int, int]) -> tuple[AxiomReport, AxiomReport]:
    na, nb, nc = arities
    sequential = AxiomReport("bv.sequential")
    parallel = AxiomReport("bv.parallel")
    for a in basis_elements(na):
        for b in basis_elements(nb):
            for c in basis_elements(nc):
                for i in range(1, na + 1):
                    for j in range(1, na + nb):
                        _record_associativity(sequential, parallel, a, b, c, i, j)
    logger.debug("BV associativity done for arities %s", arities)
    return sequential, parallel


def check_bv_operad_axioms(
    max_arity: int = 3, samples: int = 200, seed: int = 0, workers: int = 1
) -> list[AxiomReport]:
    """
    Operad identities for bv_compose on basis monomials.

    Associativity is exhaustive for composites of arity at most max_arity and
    sampled with a seeded generator at arity max_arity + 1. Equivariance is
    exhaustive for composites of arity at most max_arity, with all permutations
    up to arity 3 and adjacent transpositions above that.
    """
    sequential = AxiomReport("bv.sequential")
    parallel = AxiomReport("bv.parallel")
    outer_eq = AxiomReport("bv.equivariance.outer")
    inner_eq = AxiomReport("bv.equivariance.inner")
    unit = AxiomReport("bv.unit")

    triples = [
        (na, nb, nc)
        for na in range(1, max_arity + 1)
        for nb in range(1, max_arity + 1)
        for nc in range(1, max_arity + 1)
        if na + nb + nc - 2 <= max_arity
    ]
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(_associativity_for, triples))
    else:
        results = [_associativity_for(t) for t in triples]
    for seq, par in results:
        sequential.merge(seq)
        parallel.merge(par)

    rng = random.Random(seed)
    wide = [
        (na, nb, nc)
        for na in range(1, max_arity + 2)
        for nb in range(1, max_arity + 2)
        for nc in range(1, max_arity + 2)
        if na + nb + nc - 2 == max_arity + 1 and max(na, nb, nc) <= MAX_BASIS_ARITY
    ]
    for _ in range(samples if wide else 0):
        na, nb, nc = rng.choice(wide)
        a, b, c = (basis_element(rng.choice(basis(k))) for k in (na, nb, nc))
        i = rng.randint(1, na)
        j = rng.randint(1, na + nb - 1)
        _record_associativity(sequential, parallel, a, b, c, i, j)

    def perms(n: int) -> list[tuple]:
        return list(all_permutations(n)) if n <= 3 else adjacent_transpositions(n)

    for n in range(1, max_arity + 1):
        for m in range(1, max_arity + 2 - n):
            for a in basis_elements(n):
                for b in basis_elements(m):
                    for i in range(1, n + 1):
                        composite = bv_compose(a, b, i)
                        label = f"({a}) o{i} ({b})"
                        for p in perms(n):
                            lhs = bv_compose(act(p, a), b, p[i])
                            outer_eq.record(lhs == act(outer_induced_permutation(p, i, m), composite), f"p={p} {label}")
                        for q in perms(m):
                            lhs = bv_compose(a, act(q, b), i)
                            inner_eq.record(lhs == act(inner_induced_permutation(q, i, n), composite), f"q={q} {label}")

    identity = generator(1)
    for n in range(1, max_arity + 1):
        for a in basis_elements(n):
            unit.record(bv_compose(identity, a, 1) == a, f"x1 o1 ({a})")
            for i in range(1, n + 1):
                unit.record(bv_compose(a, identity, i) == a, f"({a}) o{i} x1")

    reports = [sequential, parallel, outer_eq, inner_eq, unit]
    for report in reports:
        logger.info("%s: %d checked, %d failed", report.name, report.checked, report.failed)
    return reports
