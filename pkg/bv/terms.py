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

import json
import logging
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path
from typing import Any, Union

from bv.algebra import (
    BVElement,
    bracket,
    delta,
    evaluate_monomial,
    generator,
    linear_sum,
    monomial_degree,
    monomial_str,
    multiply,
)
from utils.exceptions import MalformedTermError

logger = logging.getLogger(__name__)

KINDS = ("gen", "delta", "mul", "bracket", "sum", "scale")


@dataclass(frozen=True)
class Term:
    """Parsed expression tree; `value` holds the generator index or the scale factor."""

    kind: str
    args: tuple = ()
    value: Any = None

    def generators(self) -> frozenset:
        """
        Generators used by the term.

        Raises:
            MalformedTermError: If a product or bracket reuses a generator, or
                the summands of a sum use different generators.
        """
        if self.kind == "gen":
            return frozenset({self.value})
        if self.kind in ("delta", "scale"):
            return self.args[0].generators()
        sets = [arg.generators() for arg in self.args]
        if self.kind == "sum":
            if any(s != sets[0] for s in sets):
                raise MalformedTermError(f"Summands use different generators: {[sorted(s) for s in sets]}")
            return sets[0]
        seen: set = set()
        for s in sets:
            if seen & s:
                raise MalformedTermError(f"Generator reuse {sorted(seen & s)} in {self.kind}")
            seen |= s
        return frozenset(seen)


def parse_term(data: Any) -> Term:
    """
    Parse the JSON form of a term.

    Kinds: {"gen": 2}, {"delta": T}, {"mul": [T, ...]}, {"bracket": [T1, T2]},
    {"sum": [T, ...]} and {"scale": "-1/2", "term": T}. A payload wrapped as
    {"arity": n, "term": T} must use generators 1..n exactly.

    Raises:
        MalformedTermError: On unknown keys, wrong shapes or bad generator indices.
    """
    if not isinstance(data, dict) or len(set(data) & set(KINDS)) != 1:
        raise MalformedTermError(f"Expected exactly one of {KINDS}, got {data!r}")
    if "gen" in data:
        k = data["gen"]
        if not isinstance(k, int) or isinstance(k, bool) or k < 1:
            raise MalformedTermError(f"Generator index must be a positive integer, got {k!r}")
        return Term("gen", value=k)
    if "delta" in data:
        return Term("delta", (parse_term(data["delta"]),))
    if "scale" in data:
        if "term" not in data:
            raise MalformedTermError(f"'scale' needs a 'term': {data!r}")
        try:
            factor = Fraction(str(data["scale"]))
        except (ValueError, ZeroDivisionError) as e:
            raise MalformedTermError(f"Bad scale factor {data['scale']!r}: {e}") from e
        return Term("scale", (parse_term(data["term"]),), factor)
    kind = next(k for k in ("mul", "bracket", "sum") if k in data)
    args = data[kind]
    if not isinstance(args, list) or not args:
        raise MalformedTermError(f"'{kind}' needs a nonempty list, got {args!r}")
    if kind == "bracket" and len(args) != 2:
        raise MalformedTermError(f"'bracket' takes two terms, got {len(args)}")
    return Term(kind, tuple(parse_term(a) for a in args))


def evaluate(term: Term) -> BVElement:
    """Rewrite a term to its normal form."""
    generators = term.generators()
    if term.kind == "gen":
        return generator(term.value)
    if term.kind == "delta":
        return delta(evaluate(term.args[0]))
    if term.kind == "scale":
        return evaluate(term.args[0]) * term.value
    parts = [evaluate(arg) for arg in term.args]
    if term.kind == "sum":
        return linear_sum(generators, ((1, p) for p in parts))
    result = parts[0]
    for part in parts[1:]:
        result = multiply(result, part) if term.kind == "mul" else bracket(result, part)
    return result


def load_element(data: Any) -> BVElement:
    """
    Parse and normalize a term, checking the optional arity wrapper.

    Raises:
        MalformedTermError: If the term is malformed or its generators are not 1..arity.
    """
    arity = None
    if isinstance(data, dict) and "arity" in data:
        arity = data["arity"]
        data = data.get("term")
    element = evaluate(parse_term(data))
    if arity is not None and element.generators != frozenset(range(1, arity + 1)):
        raise MalformedTermError(f"Term uses generators {sorted(element.generators)}, expected 1..{arity}")
    logger.debug("Loaded %s", element)
    return element


def read_element(path: Union[str, Path]) -> BVElement:
    """
    Load a term from a JSON file.

    Raises:
        FileNotFoundError: If the file does not exist.
        MalformedTermError: If the JSON is invalid or the term malformed.
    """
    path = Path(path)
    if not path.exists():
        raise FileNotFoundError(f"Term file not found: {path}")
    try:
        data = json.loads(path.read_text(encoding="utf-8"))
    except json.JSONDecodeError as e:
        raise MalformedTermError(f"Invalid JSON in {path}: {e}") from e
    return load_element(data)


def _word_term(word) -> dict:
    def letter(l) -> dict:
        g, decorated = l
        return {"delta": {"gen": g}} if decorated else {"gen": g}

    term = letter(word[0])
    for l in word[1:]:
        term = {"bracket": [term, letter(l)]}
    return term


def element_to_term(element: BVElement) -> dict:
    """JSON term whose evaluation is the element; the inverse of load_element."""
    summands = []
    for monomial, c in element.terms:
        words = [_word_term(w) for w in monomial]
        body = words[0] if len(words) == 1 else {"mul": words}
        summands.append(body if c == 1 else {"scale": str(c), "term": body})
    if not summands:
        return {"arity": element.arity, "term": {"scale": "0", "term": _zero_body(element)}}
    return {"arity": element.arity, "term": summands[0] if len(summands) == 1 else {"sum": summands}}


def _zero_body(element: BVElement) -> dict:
    gens = sorted(element.generators)
    factors = [{"gen": g} for g in gens]
    return factors[0] if len(factors) == 1 else {"mul": factors}


def element_to_json(element: BVElement) -> dict:
    return {
        "arity": element.arity,
        "text": str(element),
        "terms": [
            {"monomial": monomial_str(m), "coefficient": str(c), "degree": monomial_degree(m)}
            for m, c in element.terms
        ],
        "term": element_to_term(element)["term"],
    }


def bv_normal_form(expr: Union[Term, BVElement, dict]) -> BVElement:
    """
    Normal form of a term, a JSON term or an element.

    Idempotent: an element in normal form is rebuilt monomial by monomial and
    comes back unchanged.

    Raises:
        MalformedTermError: If a generator is reused.
    """
    if isinstance(expr, Term):
        return evaluate(expr)
    if isinstance(expr, dict):
        return load_element(expr)
    parts = (
        (c, evaluate_monomial(m, lambda letter: generator(letter[0], letter[1])))
        for m, c in expr.terms
    )
    return linear_sum(expr.generators, parts)
