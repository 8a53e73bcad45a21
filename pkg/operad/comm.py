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
from fractions import Fraction
from typing import Any, Callable, Sequence

from operad.axioms import AxiomReport
from operad.logspace import NCLogDescriptor, ptlog
from utils.exceptions import SlotError

logger = logging.getLogger(__name__)


def _monomial_product(a: dict, b: dict) -> dict:
    out = dict(a)
    for label, e in b.items():
        out[label] = out.get(label, 0) + e
    return {label: e for label, e in out.items() if e}


@dataclass(frozen=True)
class Monoid:
    """A monoid by tag, unit and multiplication."""

    tag: str
    unit: Any
    multiply: Callable[[Any, Any], Any]
    description: str


MONOIDS: dict[str, Monoid] = {
    "trivial": Monoid("trivial", (), lambda a, b: (), "the one-point monoid; Comm^G is Comm"),
    "circle": Monoid("circle", Fraction(0), lambda a, b: (a + b) % 1, "S^1 as angles in [0, 1)"),
    "reals": Monoid("reals", Fraction(0), lambda a, b: a + b, "(R, +)"),
    "log-point": Monoid("log-point", {}, _monomial_product, "monomials in bundle labels"),
    "free": Monoid("free", (), lambda a, b: tuple(a) + tuple(b), "words under concatenation"),
}


def monoid(tag: str) -> Monoid:
    try:
        return MONOIDS[tag]
    except KeyError:
        raise KeyError(f"Unknown monoid {tag!r}; choose one of {sorted(MONOIDS)}")


def comm_compose(tag: str, g: Sequence[Any], h: Sequence[Any], i: int) -> tuple:
    """
    Insert h into slot i of g in Comm^G.

        (g1, ..., gn) o_i (h1, ..., hk) = (g1, ..., gi h1, ..., gi hk, ..., gn)

    Raises:
        SlotError: If i is not in 1..len(g).
        KeyError: If the monoid tag is unknown.
    """
    G = monoid(tag)
    if not 1 <= i <= len(g):
        raise SlotError(f"Slot {i} out of range 1..{len(g)}")
    gi = g[i - 1]
    return tuple(g[: i - 1]) + tuple(G.multiply(gi, x) for x in h) + tuple(g[i:])


def unit_tuple(tag: str, n: int) -> tuple:
    return tuple(monoid(tag).unit for _ in range(n))


def unit_inclusion(n: int) -> tuple:
    """Comm -> Comm^{S^1}: the point of arity n goes to (1, ..., 1), angle 0 in every slot."""
    return unit_tuple("circle", n)


def exp_map(g: Sequence[Fraction]) -> tuple:
    """Comm^R -> Comm^{S^1}, r -> exp(2 pi i r) recorded as the angle r mod 1."""
    return tuple(Fraction(r) % 1 for r in g)


@dataclass(frozen=True)
class CommGOperad:
    """Comm^G for one of the monoids in MONOIDS."""

    tag: str

    def __post_init__(self) -> None:
        monoid(self.tag)

    def compose(self, g: Sequence[Any], h: Sequence[Any], i: int) -> tuple:
        return comm_compose(self.tag, g, h, i)

    def space(self, n: int) -> NCLogDescriptor:
        """Arity-n space; only the log point has a log descriptor, pt_log^n."""
        if self.tag != "log-point":
            raise ValueError(f"Comm^{self.tag} has no log descriptor")
        return ptlog(n)

    def act(self, p: Sequence[int], g: Sequence[Any]) -> tuple:
        """Permute entries: slot p[k] of the result holds g[k]."""
        out = [None] * len(g)
        for k in range(1, len(g) + 1):
            out[p[k] - 1] = g[k - 1]
        return tuple(out)


def _symbols(prefix: str, n: int) -> tuple:
    return tuple((f"{prefix}{k}",) for k in range(1, n + 1))


def check_comm_axioms(tag: str = "free", max_arity: int = 4) -> list[AxiomReport]:
    """
    Associativity of Comm^G composition on generic elements.

    With tag "free" the entries are distinct one-letter words, which is the
    universal case: an identity holding there holds for every monoid.
    """
    if tag != "free":
        raise ValueError("Generic checks need the free monoid")
    sequential = AxiomReport("comm.sequential")
    parallel = AxiomReport("comm.parallel")
    arities = range(1, max_arity + 1)
    for na, nb, nc in itertools.product(arities, repeat=3):
        g, h, u = _symbols("g", na), _symbols("h", nb), _symbols("u", nc)
        for i in range(1, na + 1):
            gh = comm_compose(tag, g, h, i)
            for j in range(1, na + nb):
                lhs = comm_compose(tag, gh, u, j)
                if i <= j <= i + nb - 1:
                    rhs = comm_compose(tag, g, comm_compose(tag, h, u, j - i + 1), i)
                    sequential.record(lhs == rhs, f"arities {(na, nb, nc)} slots {(i, j)}")
                elif j < i:
                    rhs = comm_compose(tag, comm_compose(tag, g, u, j), h, i + nc - 1)
                    parallel.record(lhs == rhs, f"arities {(na, nb, nc)} slots {(i, j)}")
                else:
                    rhs = comm_compose(tag, comm_compose(tag, g, u, j - nb + 1), h, i)
                    parallel.record(lhs == rhs, f"arities {(na, nb, nc)} slots {(i, j)}")
    logger.info("Comm^%s associativity: %d instances", tag, sequential.checked + parallel.checked)
    return [sequential, parallel]
