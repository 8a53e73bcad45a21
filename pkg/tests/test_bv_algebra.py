"""
Unit tests for the BV rewriting engine.

Core claims:
    - normal forms are unique: commutativity, bracket symmetry on degree 0 generators
    - the bracket is the deviation of Delta from being a derivation
    - bv_compose inserts with Leibniz rewriting and Koszul signs
    - basis counts give fld(n) and ld(n)
    - relation and operad suites pass exhaustively at small arity
"""

import random

import pytest

from bv.algebra import (
    act,
    basis,
    basis_element,
    bracket,
    bv_compose,
    bv_dims,
    check_bv_operad_axioms,
    check_bv_relations,
    delta,
    generator,
    ger_dims,
    linear_sum,
    multiply,
)
from bv.terms import bv_normal_form, element_to_term, load_element, parse_term
from cohomology.betti import fld, ld
from utils.exceptions import ArityError, MalformedTermError, RangeError, SlotError


# -- Helpers ------------------------------------------------------------------

def x(k):
    return generator(k)

def dx(k):
    return generator(k, decorated=True)

def term(data):
    return bv_normal_form(data)


# == 1. Normal forms ==========================================================

class TestNormalForm:
    def test_product_commutes(self):
        assert term({"mul": [{"gen": 2}, {"gen": 1}]}) == multiply(x(1), x(2))
        assert str(multiply(x(2), x(1))) == "x1·x2"

    def test_bracket_symmetric_in_degree_zero(self):
        assert bracket(x(2), x(1)) == bracket(x(1), x(2))

    def test_bracket_antisymmetric_on_odd(self):
        assert bracket(dx(2), dx(1)) == -bracket(dx(1), dx(2))

    def test_odd_product_anticommutes(self):
        assert multiply(dx(2), dx(1)) == -multiply(dx(1), dx(2))

    def test_bracket_is_delta_deviation(self):
        data = {"sum": [
            {"delta": {"mul": [{"gen": 1}, {"gen": 2}]}},
            {"scale": -1, "term": {"mul": [{"delta": {"gen": 1}}, {"gen": 2}]}},
            {"scale": -1, "term": {"mul": [{"gen": 1}, {"delta": {"gen": 2}}]}},
        ]}
        assert term(data) == bracket(x(1), x(2))
        assert str(term(data)) == "[x1,x2]"

    def test_delta_squares_to_zero(self):
        e = multiply(multiply(x(1), x(2)), x(3))
        assert delta(delta(e)).is_zero

    def test_delta_of_bracket(self):
        assert delta(bracket(x(1), x(2))) == bracket(dx(1), x(2)) - bracket(x(1), dx(2))

    def test_idempotent(self):
        rng = random.Random(7)
        monomials = basis(3)
        for _ in range(20):
            parts = [(rng.randint(-3, 3), basis_element(rng.choice(monomials))) for _ in range(4)]
            e = linear_sum(range(1, 4), parts)
            assert bv_normal_form(e) == e

    def test_degrees(self):
        e = bracket(dx(1), x(2))
        assert e.degree == 2
        mixed = term({"sum": [{"mul": [{"gen": 1}, {"gen": 2}]}, {"bracket": [{"gen": 1}, {"gen": 2}]}]})
        assert sorted(mixed.components()) == [0, 1]
        with pytest.raises(ValueError):
            mixed.degree


class TestTerms:
    def test_generator_reuse(self):
        with pytest.raises(MalformedTermError):
            term({"mul": [{"gen": 1}, {"gen": 1}]})

    def test_bracket_reuse(self):
        with pytest.raises(MalformedTermError):
            bracket(x(1), dx(1))

    def test_sum_needs_same_generators(self):
        with pytest.raises(MalformedTermError):
            term({"sum": [{"gen": 1}, {"gen": 2}]})

    def test_unknown_kind(self):
        with pytest.raises(MalformedTermError):
            parse_term({"wedge": [{"gen": 1}]})

    def test_arity_wrapper(self):
        with pytest.raises(MalformedTermError):
            load_element({"arity": 3, "term": {"mul": [{"gen": 1}, {"gen": 2}]}})

    def test_term_form_reloads(self):
        e = bracket(x(1), x(3)) * x(2) - 2 * multiply(x(1), bracket(dx(2), x(3)))
        assert load_element(element_to_term(e)) == e

    def test_fraction_scale(self):
        e = term({"scale": "1/2", "term": {"gen": 1}})
        assert str(e) == "1/2 x1"


# == 2. Composition ===========================================================

class TestCompose:
    def test_product_associative(self):
        xy = multiply(x(1), x(2))
        assert bv_compose(xy, xy, 1) == multiply(xy, x(3))

    def test_leibniz_example(self):
        a = bracket(x(1), x(2))
        b = multiply(x(1), x(2))
        expected = multiply(bracket(x(1), x(3)), x(2)) + multiply(x(1), bracket(x(2), x(3)))
        assert bv_compose(a, b, 1) == expected

    def test_delta_insertion_decorates(self):
        xy = multiply(x(1), x(2))
        assert bv_compose(xy, dx(1), 1) == multiply(dx(1), x(2))
        assert bv_compose(xy, dx(1), 2) == multiply(x(1), dx(2))

    def test_delta_insertion_koszul_sign(self):
        assert bv_compose(bracket(x(1), x(2)), dx(1), 2) == -bracket(x(1), dx(2))

    def test_outer_delta_applies_delta(self):
        assert bv_compose(dx(1), multiply(x(1), x(2)), 1) == delta(multiply(x(1), x(2)))

    def test_unit(self):
        a = bracket(dx(1), x(2))
        assert bv_compose(x(1), a, 1) == a
        assert bv_compose(a, x(1), 2) == a

    def test_degree_adds(self):
        a = bracket(dx(1), x(2))
        b = multiply(dx(1), x(2))
        assert bv_compose(a, b, 2).degree == 3

    def test_slot_error(self):
        with pytest.raises(SlotError):
            bv_compose(multiply(x(1), x(2)), x(1), 3)

    def test_operands_use_leading_generators(self):
        with pytest.raises(ArityError):
            bv_compose(multiply(x(1), x(3)), x(1), 1)

    def test_action_relabels(self):
        assert act((0, 2, 1), bracket(x(1), dx(2))) == -bracket(dx(1), x(2))


# == 3. Dimensions ============================================================

class TestDims:
    def test_bv_two(self):
        assert bv_dims(2).to_list() == [1, 3, 3, 1]

    def test_ger_three(self):
        assert ger_dims(3).to_list() == [1, 3, 2]

    def test_bv_three_total(self):
        assert bv_dims(3).total() == 48

    @pytest.mark.parametrize("n", [1, 2, 3, 4, 5])
    def test_match_betti(self, n):
        assert bv_dims(n) == fld(n)
        assert ger_dims(n) == ld(n)

    def test_range(self):
        with pytest.raises(RangeError):
            bv_dims(6)
        with pytest.raises(ArityError):
            ger_dims(0)


# == 4. Suites ================================================================

class TestSuites:
    def test_relations(self):
        for report in check_bv_relations(3):
            assert report.passed, (report.name, report.failures)

    def test_operad_axioms_small(self):
        for report in check_bv_operad_axioms(max_arity=2, samples=30, seed=1):
            assert report.passed, (report.name, report.failures)

    @pytest.mark.slow
    def test_operad_axioms(self):
        for report in check_bv_operad_axioms(max_arity=3, samples=100, seed=0):
            assert report.passed, (report.name, report.failures)
