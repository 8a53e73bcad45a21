"""
Unit tests for point counts and Betti tables.

Core claims:
    - brute-force counts of M_{0,n} and stratified counts of Mbar_{0,n}
    - fibration recursion and purity inversion agree for 3 <= n <= 7
    - Mbar tables are palindromic with vanishing odd part
    - fld = (1+t)^n ld, flc_top = fld, ld = (1+t) P(M_{0,n+1})
"""

import pytest
from sympy import Poly

from cohomology.betti import (
    betti_open,
    betti_open_recursion,
    count_bar,
    count_conf,
    count_many,
    count_open,
    counting_polynomial,
    fld,
    flc_top,
    ld,
    mbar,
    poincare_tables,
    q,
)
from cohomology.poincare import PoincarePolynomial, one_plus_t
from utils.exceptions import ArityError, PrimeError, PurityViolationError
from utils.primes import interpolation_primes


# == 1. Counts ================================================================

class TestCounts:
    @pytest.mark.parametrize("n,p,expected", [(4, 7, 5), (5, 7, 20), (3, 5, 1), (3, 11, 1), (6, 11, 504)])
    def test_open(self, n, p, expected):
        assert count_open(n, p) == expected

    @pytest.mark.parametrize("n,p,expected", [(4, 7, 8), (5, 7, 85), (5, 11, 177), (3, 7, 1)])
    def test_bar(self, n, p, expected):
        assert count_bar(n, p) == expected

    @pytest.mark.parametrize("p", [4, 2, 3, 9])
    def test_bad_field(self, p):
        with pytest.raises(PrimeError):
            count_open(5, p)

    def test_too_few_marks(self):
        with pytest.raises(ArityError):
            count_open(2, 7)

    def test_methods_agree(self):
        for n in range(3, 8):
            for p in (5, 7, 11, 13):
                assert count_open(n, p, "enumerate") == count_open(n, p, "formula")

    def test_conf_methods_agree(self):
        for n in range(1, 5):
            for p in (5, 7, 11):
                assert count_conf(n, p, "enumerate") == count_conf(n, p, "formula")

    def test_bar_matches_closed_form(self):
        for p in (5, 7, 11, 13):
            assert count_bar(5, p) == p ** 2 + 5 * p + 1

    def test_pool_keeps_order(self):
        primes = [5, 7, 11, 13]
        assert count_many(count_open, 5, primes, workers=2) == [count_open(5, p) for p in primes]


# == 2. Purity inversion ======================================================

class TestBettiOpen:
    @pytest.mark.parametrize("n,expected", [
        (3, [1]),
        (4, [1, 2]),
        (5, [1, 5, 6]),
        (6, [1, 9, 26, 24]),
    ])
    def test_tables(self, n, expected):
        assert betti_open(n).to_list() == expected

    @pytest.mark.parametrize("n", [4, 5, 6, 7])
    def test_counts_are_signed_betti(self, n):
        b = betti_open_recursion(n)
        dim = n - 3
        for p in interpolation_primes(dim):
            assert count_open(n, p) == sum((-1) ** k * b[k] * p ** (dim - k) for k in range(dim + 1))

    def test_extra_primes(self):
        assert betti_open(5, primes=[23, 29]).to_list() == [1, 5, 6]

    def test_inconsistent_counts(self):
        with pytest.raises(PurityViolationError):
            counting_polynomial({5: 1, 7: 2, 11: 9}, 1)


# == 3. Compactifications and operad tables ==================================

class TestTables:
    @pytest.mark.parametrize("n,expected", [(3, [1]), (4, [1, 0, 1]), (5, [1, 0, 5, 0, 1]), (6, [1, 0, 16, 0, 16, 0, 1])])
    def test_mbar(self, n, expected):
        assert mbar(n).to_list() == expected

    def test_mbar_euler_is_count_at_one(self):
        for n in range(4, 8):
            poly = counting_polynomial({p: count_bar(n, p) for p in interpolation_primes(n - 3)}, n - 3)
            assert mbar(n).euler() == poly.eval(1)

    def test_fld_two(self):
        assert fld(2).to_list() == [1, 3, 3, 1]

    def test_ld_three(self):
        assert ld(3).to_list() == [1, 3, 2]

    def test_ld_four(self):
        expected = PoincarePolynomial.product(PoincarePolynomial.linear(k) for k in (1, 2, 3))
        assert ld(4) == expected

    @pytest.mark.parametrize("n", [2, 3, 4, 5])
    def test_fiber_square_shadow(self, n):
        assert fld(n) == one_plus_t(n) * ld(n)
        assert flc_top(n) == fld(n)
        assert ld(n) == one_plus_t(1) * betti_open(n + 1)

    def test_flc_one(self):
        assert flc_top(1).to_list() == [1, 1]

    def test_poincare_tables(self):
        tables = poincare_tables(3)
        assert tables.mbar.to_list() == [1, 0, 1]
        assert tables.fld.to_list() == [1, 6, 14, 16, 9, 2]
        assert tables.to_json()["ld"] == [1, 3, 2]

    def test_poincare_tables_arity(self):
        with pytest.raises(ArityError):
            poincare_tables(1)


class TestPoincarePolynomial:
    def test_str(self):
        assert str(PoincarePolynomial((1, 5, 6))) == "1 + 5t + 6t^2"

    def test_trailing_zeros(self):
        assert PoincarePolynomial((1, 0, 0)).to_list() == [1]

    def test_negative_rejected(self):
        with pytest.raises(ValueError):
            PoincarePolynomial((1, -1))

    def test_from_poly(self):
        from cohomology.poincare import t
        assert PoincarePolynomial.from_poly(Poly((1 + t) ** 2, t)).to_list() == [1, 2, 1]
