import itertools
from fractions import Fraction

import pytest

from betadim.errors import NotAdmissible, PreconditionViolated
from betadim.exact import QuadNum
from betadim.numerics import GOLDEN, eval_word, make_beta
from betadim.cylinders import (
    CensusRecord,
    cylinder,
    find_full_in_interval,
    full_census,
    fullness_two_ways,
    is_full,
    iter_cylinders,
    length_by_partition,
    successor,
)
from betadim.words import enumerate_admissible, is_admissible

PHI = GOLDEN
BETAS = ["golden", "1.8", "2.5", "2"]


def extension_full_oracle(word, system, depth=4):
    """Independent fullness oracle: every admissible continuation of length
    <= depth keeps the concatenation admissible."""
    for m in range(1, depth + 1):
        for u in enumerate_admissible(m, system):
            if not is_admissible(tuple(word) + u, system):
                return False
    return True


class TestCylinderBasics:
    def test_golden_order2_partition(self):
        b = make_beta("golden")
        c00 = cylinder((0, 0), b)
        c01 = cylinder((0, 1), b)
        c10 = cylinder((1, 0), b)
        assert c00.left == 0 and c00.length == PHI ** -2 and c00.is_full
        assert c01.left == PHI ** -2 and c01.length == PHI ** -3
        assert not c01.is_full
        # the periodic quasi-greedy block makes (1, 0) a maximal-length word
        assert c10.left == PHI - 1 and c10.length == PHI ** -2 and c10.is_full
        assert c10.right == 1

    def test_dyadic(self):
        b = make_beta("2")
        c = cylinder((1, 0, 1), b)
        assert c.left == Fraction(5, 8)
        assert c.length == Fraction(1, 8)
        assert c.is_full

    def test_not_admissible_raises(self):
        b = make_beta("golden")
        with pytest.raises(NotAdmissible):
            cylinder((1, 1), b)


class TestSuccessorAndPartition:
    def test_successor_golden(self):
        b = make_beta("golden")
        assert successor((0, 0), b) == (0, 1)
        assert successor((0, 1), b) == (1, 0)
        assert successor((1, 0), b) is None

    def test_partition_sums_to_one_exactly(self):
        for spec in BETAS:
            b = make_beta(spec)
            for n in (1, 2, 3, 5):
                total = sum(c.length for c in iter_cylinders(n, b))
                assert total == 1, (spec, n)

    def test_tiling_left_to_right(self):
        for spec in ("golden", "2.5"):
            b = make_beta(spec)
            prev_right = Fraction(0)
            for c in iter_cylinders(4, b):
                assert c.left == prev_right
                prev_right = c.right
            assert prev_right == 1

    def test_fast_length_equals_partition_length(self):
        for spec in BETAS:
            b = make_beta(spec)
            for n in (1, 2, 4):
                for w in enumerate_admissible(n, b):
                    assert cylinder(w, b).length == length_by_partition(w, b), (spec, w)


class TestFullness:
    def test_two_routes_agree_everywhere(self):
        for spec in BETAS:
            b = make_beta(spec)
            for n in (1, 2, 3, 5):
                for w in enumerate_admissible(n, b):
                    fast, exact = fullness_two_ways(w, b)
                    assert fast == exact, (spec, w)

    def test_against_extension_oracle(self):
        for spec in ("golden", "2.5", "1.8"):
            b = make_beta(spec)
            for w in enumerate_admissible(3, b):
                assert is_full(w, b) == extension_full_oracle(w, b), (spec, w)

    def test_spec_cases(self):
        bg = make_beta("golden")
        assert is_full((1, 0, 0), bg)          # one, then the zero run + 1
        assert is_full((1, 0), bg)             # periodic block: maximal length
        assert not is_full((0, 1), bg)
        b2 = make_beta("2")
        for w in itertools.product((0, 1), repeat=5):
            assert is_full(w, b2)

    def test_full_multiplicativity(self):
        # length(w . u) == length(w) * length(u) whenever w is full
        for spec in ("golden", "2.5"):
            b = make_beta(spec)
            fulls = [w for w in enumerate_admissible(3, b) if is_full(w, b)]
            for w in fulls[:4]:
                for u in enumerate_admissible(2, b):
                    combined = w + u
                    assert is_admissible(combined, b)
                    assert cylinder(combined, b).length == \
                        cylinder(w, b).length * cylinder(u, b).length

    def test_zero_words_are_full(self):
        for spec in BETAS:
            b = make_beta(spec)
            assert is_full((0,) * 4, b)


class TestCensus:
    def test_dyadic(self):
        rec = full_census(4, make_beta("2"))
        assert rec == CensusRecord("2", 4, 16, 16, 0)

    def test_golden_order2(self):
        rec = full_census(2, make_beta("golden"))
        assert rec.count_admissible == 3
        assert rec.count_full == 2          # (0,0) and (1,0)
        assert rec.max_gap == 1

    def test_gap_bound_grid(self):
        for spec in BETAS:
            b = make_beta(spec)
            for n in range(1, 7):
                rec = full_census(n, b)
                assert rec.max_gap <= n

    def test_golden_order6(self):
        rec = full_census(6, make_beta("golden"))
        assert rec.max_gap <= 6
        assert rec.count_admissible == 21  # fib(8)


class TestFindFull:
    def test_dyadic_example(self):
        b = make_beta("2")
        w = find_full_in_interval(Fraction(3, 10), Fraction(9, 10), 4, b)
        assert w == (0, 1, 0, 1)
        assert eval_word(w, b) == Fraction(5, 16)

    def test_golden_whole_interval(self):
        b = make_beta("golden")
        # n = 2 fails the size precondition ((n+1) * phi**-2 > 1); n = 3 is
        # the smallest order with a guaranteed full cylinder in (0, 1)
        with pytest.raises(PreconditionViolated):
            find_full_in_interval(Fraction(0), Fraction(1), 2, b)
        assert find_full_in_interval(Fraction(0), Fraction(1), 3, b) == (0, 0, 0)

    def test_too_small_interval(self):
        b = make_beta("2")
        with pytest.raises(PreconditionViolated):
            find_full_in_interval(Fraction(1, 10), Fraction(2, 10), 4, b)

    def test_strict_containment(self):
        b = make_beta("2")
        w = find_full_in_interval(Fraction(5, 16), Fraction(9, 10), 4, b,
                                  strict=True)
        left = eval_word(w, b)
        assert left > Fraction(5, 16)
        assert left + Fraction(1, 16) < Fraction(9, 10)

    def test_result_is_full_and_inside(self):
        for spec, orders in (("golden", (5, 6)), ("2.5", (3, 4))):
            b = make_beta(spec)
            lo, hi = Fraction(1, 7), Fraction(6, 7)
            for n in orders:
                w = find_full_in_interval(lo, hi, n, b)
                assert is_full(w, b)
                c = cylinder(w, b)
                assert c.left >= lo and c.right <= hi

    def test_quadnum_endpoints(self):
        b = make_beta("golden")
        w = find_full_in_interval(PHI ** -3, 1 - PHI ** -4, 5, b, strict=True)
        c = cylinder(w, b)
        assert c.left > PHI ** -3
        assert c.left + b.pow(-5) < 1 - PHI ** -4
