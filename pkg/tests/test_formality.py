"""
Unit tests for the formal cooperad model and the little disks pushout.

Core claims:
    - the model has zero differential and dims equal to flc_top(n)
    - (1+t)^n divides the FLC table exactly, with quotient ld(n)
"""

import pytest

from bv.formality import OPEN_QUESTIONS, assemble_formal_model, formality_report, ld_pushout
from cohomology.betti import flc_top, ld
from utils.exceptions import ArityError


class TestModel:
    def test_arity_two(self):
        model = assemble_formal_model(2)
        assert model.dims == (1, 3, 3, 1)
        assert model.zero_differential
        assert model.identity_morphism

    def test_arity_one(self):
        assert assemble_formal_model(1).dims == (1, 1)

    @pytest.mark.parametrize("n", [1, 2, 3, 4, 5])
    def test_dims_match(self, n):
        model = assemble_formal_model(n)
        assert list(model.dims) == flc_top(n).to_list()
        assert model.zero_differential
        assert model.complex_length == 2 * n

    def test_cocompositions(self):
        entries = {(m, k): d for m, k, d in assemble_formal_model(2).cocompositions}
        assert entries[(1, 2)] == (1, 4, 6, 4, 1)
        assert set(entries) == {(1, 2), (2, 1)}

    def test_bad_arity(self):
        with pytest.raises(ArityError):
            assemble_formal_model(0)


class TestPushout:
    def test_two(self):
        assert ld_pushout(2).to_list() == [1, 1]

    def test_three(self):
        assert ld_pushout(3).to_list() == [1, 3, 2]

    def test_four(self):
        assert ld_pushout(4).to_list() == [1, 6, 11, 6]

    @pytest.mark.parametrize("n", range(2, 8))
    def test_equals_ld(self, n):
        assert ld_pushout(n) == ld(n)

    def test_needs_two(self):
        with pytest.raises(ArityError):
            ld_pushout(1)


class TestReport:
    def test_report(self):
        data = formality_report(3).to_json()
        assert data["passed"]
        assert data["bv_dims"] == flc_top(3).to_list()
        assert data["ger_dims"] == [1, 3, 2]
        assert data["model"]["integral_complex_length"] == 6
        assert data["model"]["open_questions"] == list(OPEN_QUESTIONS)
