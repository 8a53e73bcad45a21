"""
Unit tests for E1 tables, purity rows and acyclicity certificates.

Core claims:
    - E1 entries come from the stratum census and Kunneth over vertex tables
    - every weight row's alternating sum is the open Betti number
    - column 0 is Mbar_{0,n}; the table's Euler characteristic is chi(M_{0,n})
    - P^1 with d points and FLC_n certificates pass with the expected dims
"""

import pytest

from cohomology.betti import betti_open, flc_top, mbar
from cohomology.weights import (
    CERTIFICATE_LEVEL,
    acyclicity_certificate,
    acyclicity_flc,
    acyclicity_p1,
    build_e1,
    coherent_p1,
    purity_check,
)
from utils.exceptions import ArityError, RangeError


# == 1. E1 tables =============================================================

class TestE1:
    def test_four_marks(self):
        table = build_e1(4)
        assert table.census == (1, 3)
        assert table.row(1) == [1, 3]
        assert table.row(0) == [1, 0]

    def test_five_marks(self):
        table = build_e1(5)
        assert table.census == (1, 10, 15)
        assert table.row(1) == [5, 10, 0]
        assert table.row(2) == [1, 10, 15]

    def test_entries_below_diagonal_vanish(self):
        table = build_e1(6)
        for p in range(table.dim + 1):
            for q in range(p):
                assert table.entry(p, q) == 0

    @pytest.mark.parametrize("n", [4, 5, 6, 7])
    def test_column_zero_is_mbar(self, n):
        assert build_e1(n).column_total(0) == mbar(n).total()

    @pytest.mark.parametrize("n", [4, 5, 6, 7])
    def test_euler(self, n):
        assert build_e1(n).euler() == betti_open(n).euler()

    @pytest.mark.parametrize("n", [3, 9])
    def test_range(self, n):
        with pytest.raises(RangeError):
            build_e1(n)


# == 2. Purity rows ===========================================================

class TestPurity:
    def test_four_marks(self):
        report = purity_check(4)
        assert report.rows[1].text == "3 − 1 = 2"
        assert report.passed
        assert report.level == CERTIFICATE_LEVEL

    def test_five_marks(self):
        report = purity_check(5)
        assert [row.text for row in report.rows] == ["1 = 1", "10 − 5 = 5", "15 − 10 + 1 = 6"]

    @pytest.mark.parametrize("n", [4, 5, 6, 7])
    def test_all_rows_hold(self, n):
        report = purity_check(n)
        assert [row.total for row in report.rows] == betti_open(n).to_list()


# == 3. Acyclicity ============================================================

class TestAcyclicity:
    @pytest.mark.parametrize("d", range(1, 11))
    def test_p1(self, d):
        cert = acyclicity_p1(d)
        assert cert.passed
        assert cert.hodge_dims == (1, d - 1)
        assert all(h1 == 0 for _, h1 in cert.coherent)

    def test_p1_three_points(self):
        cert = acyclicity_certificate("p1", 3)
        assert cert.hodge_dims == (1, 2)
        assert cert.coherent == ((1, 0), (2, 0))

    @pytest.mark.parametrize("n", range(1, 6))
    def test_flc(self, n):
        cert = acyclicity_flc(n)
        assert cert.passed
        assert len(cert.hodge_dims) == 2 * n
        assert cert.hodge_dims[-1] == flc_top(n).to_list()[-1]

    def test_flc_two(self):
        assert acyclicity_flc(2).hodge_dims == (1, 3, 3, 1)

    def test_flc_one(self):
        assert acyclicity_flc(1).hodge_dims == (1, 1)

    def test_coherent(self):
        assert coherent_p1(-2) == (0, 1)
        assert coherent_p1(3) == (4, 0)

    def test_bad_inputs(self):
        with pytest.raises(ArityError):
            acyclicity_p1(0)
        with pytest.raises(ValueError):
            acyclicity_certificate("torus", 2)
