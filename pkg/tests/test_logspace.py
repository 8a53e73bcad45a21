"""
Unit tests for log descriptors and maps of log structures.

Core claims:
    - dims follow (geometric, geometric + bundles, bundles)
    - pullback trades geometric dimension for normal-bundle labels one for one
    - iterated pullback equals direct pullback up to label order
    - classify_maps returns Empty exactly when the target divisor is not contained
    - composition of pt_log power maps is exponent-matrix multiplication
"""

import random

import pytest
from sympy import ImmutableMatrix

from operad.flc import flc_space
from operad.logspace import (
    ExplicitPoset,
    LogStructureMap,
    NCLogDescriptor,
    check_log_maps,
    classify_maps,
    compose,
    dims,
    direct_sum,
    identity_map,
    p1_with_points,
    product,
    ptlog,
    pullback_along_stratum,
)
from operad.trees import all_trees, enumerate_trees
from utils.exceptions import BaseMismatchError, StratumError


# -- Helpers -----------------------------------------------------------------

def _random_positive(rng, rows, cols):
    return [[rng.randint(1, 4) for _ in range(cols)] for _ in range(rows)]


def _curve(components):
    poset = ExplicitPoset.disjoint_points(list(components))
    return NCLogDescriptor("X", 1, poset, ("L",))


# == 1. Dimensions ============================================================

class TestDims:
    def test_general(self):
        desc = NCLogDescriptor("X", 3, ExplicitPoset(frozenset(), frozenset([frozenset()])), ("A", "B"))
        assert dims(desc) == (3, 5, 2)

    def test_ptlog(self):
        assert dims(ptlog()) == (0, 1, 1)

    def test_flc3(self):
        assert dims(flc_space(3).descriptor) == (1, 5, 4)

    def test_p1(self):
        assert dims(p1_with_points(3)) == (1, 1, 0)


# == 2. Pullback ==============================================================

class TestPullback:
    def test_codim_one(self):
        desc = flc_space(4).descriptor
        for tree in enumerate_trees(4, 1):
            pulled = pullback_along_stratum(desc, tree.clades)
            assert pulled.base_dim == desc.base_dim - 1
            assert len(pulled.bundles) == len(desc.bundles) + 1
            assert pulled.log_dim == desc.log_dim

    def test_open_stratum_is_identity(self):
        desc = flc_space(4).descriptor
        assert pullback_along_stratum(desc, ()) == desc

    def test_unknown_stratum(self):
        desc = flc_space(4).descriptor
        with pytest.raises(StratumError):
            pullback_along_stratum(desc, [frozenset({1, 2}), frozenset({2, 3})])
        with pytest.raises(StratumError):
            pullback_along_stratum(p1_with_points(2), ["s3"])

    def test_iterated_equals_direct(self):
        desc = flc_space(4).descriptor
        for tree in enumerate_trees(4, 2):
            first, second = tree.sorted_clades()
            for a, b in ((first, second), (second, first)):
                iterated = pullback_along_stratum(pullback_along_stratum(desc, [a]), [b])
                direct = pullback_along_stratum(desc, tree.clades)
                assert iterated.base_dim == direct.base_dim
                assert iterated.locus == direct.locus
                assert sorted(iterated.bundles) == sorted(direct.bundles)
                assert iterated.poset == direct.poset

    def test_fiber_dim_grows_by_codim(self):
        desc = flc_space(5).descriptor
        for tree in all_trees(5):
            pulled = pullback_along_stratum(desc, tree.clades)
            assert pulled.fiber_dim - desc.fiber_dim == tree.codim
            assert pulled.log_dim == desc.log_dim

    def test_restricted_strata(self):
        desc = flc_space(4).descriptor
        tree = enumerate_trees(4, 1)[0]
        pulled = pullback_along_stratum(desc, tree.clades)
        assert all(len(s) <= 1 for s in pulled.strata())

    def test_p1_point(self):
        pulled = pullback_along_stratum(p1_with_points(3), ["s2"])
        assert dims(pulled) == (0, 1, 1)
        assert pulled.bundles == ("N[s2]",)


# == 3. Classification ========================================================

class TestClassify:
    def test_ptlog_family_is_positive(self):
        family = classify_maps(ptlog(), ptlog())
        assert not family.is_empty
        assert family.positive
        assert family.member([[2]]).exponent_matrix == ImmutableMatrix([[2]])
        with pytest.raises(ValueError):
            family.member([[0]])

    def test_target_divisor_not_contained(self):
        assert classify_maps(_curve([]), _curve(["s"])).is_empty

    def test_divisor_contained(self):
        family = classify_maps(_curve(["s", "t"]), _curve(["s"]))
        assert not family.is_empty
        assert not family.positive
        assert family.member([[0]]).matching == {"L": {}}

    def test_base_mismatch(self):
        with pytest.raises(BaseMismatchError):
            classify_maps(ptlog(), p1_with_points(1))

    def test_shape_checked(self):
        with pytest.raises(ValueError):
            classify_maps(ptlog(2), ptlog(1)).member([[1], [1]])


# == 4. Composition ===========================================================

class TestCompose:
    def test_two_then_three(self):
        f = classify_maps(ptlog(), ptlog()).member([[2]])
        g = classify_maps(ptlog(), ptlog()).member([[3]])
        assert compose(f, g).exponent_matrix == ImmutableMatrix([[6]])

    def test_random_matrix_products(self):
        rng = random.Random(2024)
        for _ in range(100):
            a, b, c = rng.randint(1, 4), rng.randint(1, 4), rng.randint(1, 4)
            f = classify_maps(ptlog(a), ptlog(b)).member(_random_positive(rng, b, a))
            g = classify_maps(ptlog(b), ptlog(c)).member(_random_positive(rng, c, b))
            assert compose(f, g).exponent_matrix == g.exponent_matrix * f.exponent_matrix

    def test_associative(self):
        rng = random.Random(5)
        f = LogStructureMap.from_matrix(ptlog(2), ptlog(3), _random_positive(rng, 3, 2))
        g = LogStructureMap.from_matrix(ptlog(3), ptlog(2), _random_positive(rng, 2, 3))
        h = LogStructureMap.from_matrix(ptlog(2), ptlog(1), _random_positive(rng, 1, 2))
        assert f.then(g).then(h) == f.then(g.then(h))

    def test_identity(self):
        f = LogStructureMap.from_matrix(ptlog(2), ptlog(3), [[1, 2], [3, 4], [5, 6]])
        assert identity_map(ptlog(2)).then(f) == f
        assert f.then(identity_map(ptlog(3))) == f

    def test_mismatch(self):
        f = LogStructureMap.from_matrix(ptlog(2), ptlog(3), [[1, 1], [1, 1], [1, 1]])
        with pytest.raises(BaseMismatchError):
            f.then(f)

    def test_direct_sum_prefixes(self):
        f = LogStructureMap.from_matrix(ptlog(1), ptlog(1), [[2]])
        total = direct_sum([("a", f), ("b", identity_map(ptlog(1)))])
        assert total.matching == {"a:L": {"a:L": 2}, "b:L": {"b:L": 1}}
        assert total.source == product([("a", ptlog(1)), ("b", ptlog(1))])

    def test_unknown_label(self):
        with pytest.raises(ValueError):
            LogStructureMap.from_matching(ptlog(), ptlog(), {"L": {"M": 1}})


# == 5. Randomized suite ======================================================

class TestCheckLogMaps:
    def test_passes(self):
        products, empty = check_log_maps(cases=100, seed=0)
        assert products.checked == 100
        assert products.passed
        assert empty.checked == 16 * 16
        assert empty.passed

    def test_seeded(self):
        first = check_log_maps(cases=10, seed=3)
        second = check_log_maps(cases=10, seed=3)
        assert [r.as_dict() for r in first] == [r.as_dict() for r in second]
