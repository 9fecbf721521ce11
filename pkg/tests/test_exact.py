import math
import random
from fractions import Fraction

import mpmath
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from betadim.errors import PrecisionExhausted
from betadim.exact import (
    CertifiedReal,
    LogValue,
    QuadNum,
    iroot,
    ln_interval,
    pow_interval,
    root_interval,
)

PHI = QuadNum(Fraction(1, 2), Fraction(1, 2), 5)


class TestQuadNum:
    def test_golden_ratio_identities(self):
        assert PHI * PHI == PHI + 1
        assert 1 / PHI == PHI - 1
        assert PHI ** 2 - PHI - 1 == 0
        assert PHI ** -2 == 1 - (PHI - 1)

    def test_floor_and_sign(self):
        assert math.floor(PHI) == 1
        assert math.floor(PHI ** 3) == 4  # phi^3 = 2phi + 1 ~ 4.236
        assert (PHI - 2).sign() == -1
        assert (PHI - 1).sign() == 1
        assert QuadNum(Fraction(3, 2)).sign() == 1

    def test_mixed_arithmetic_with_rationals(self):
        x = PHI + Fraction(1, 3)
        assert x - Fraction(1, 3) == PHI
        assert (PHI * 2) / 2 == PHI
        assert 2 - PHI == -(PHI - 2)

    def test_mixed_radicands_rejected(self):
        r2 = QuadNum(0, 1, 2)
        with pytest.raises(ValueError):
            _ = PHI + r2

    def test_enclosure_contains_value(self):
        lo, hi = PHI.enclosure(100)
        assert hi - lo <= Fraction(1, 2 ** 100)
        # check against 60-digit mpmath value
        with mpmath.workdps(60):
            val = (1 + mpmath.sqrt(5)) / 2
            assert mpmath.mpf(lo.numerator) / lo.denominator <= val
            assert mpmath.mpf(hi.numerator) / hi.denominator >= val

    @given(st.fractions(), st.fractions(), st.fractions(), st.fractions())
    @settings(max_examples=100)
    def test_field_axioms_sample(self, a1, b1, a2, b2):
        x = QuadNum(a1, b1, 5)
        y = QuadNum(a2, b2, 5)
        assert (x + y) - y == x
        assert x * y == y * x
        if y != 0:
            assert (x / y) * y == x

    def test_ordering_matches_floats(self):
        rng = random.Random(7)
        for _ in range(200):
            x = QuadNum(Fraction(rng.randint(-50, 50), rng.randint(1, 9)),
                        Fraction(rng.randint(-50, 50), rng.randint(1, 9)), 5)
            y = QuadNum(Fraction(rng.randint(-50, 50), rng.randint(1, 9)),
                        Fraction(rng.randint(-50, 50), rng.randint(1, 9)), 5)
            fx = float(x.a) + float(x.b) * math.sqrt(5)
            fy = float(y.a) + float(y.b) * math.sqrt(5)
            if abs(fx - fy) > 1e-9:
                assert (x < y) == (fx < fy)


class TestIntegerRoots:
    @given(st.integers(min_value=0, max_value=10 ** 30),
           st.integers(min_value=1, max_value=12))
    @settings(max_examples=200)
    def test_iroot_floor_property(self, n, k):
        r = iroot(n, k)
        assert r ** k <= n < (r + 1) ** k

    def test_root_interval_brackets(self):
        for x in (Fraction(2), Fraction(10, 7), Fraction(1, 3), Fraction(98, 5)):
            for k in (2, 3, 5):
                lo, hi = root_interval(x, k, 80)
                assert lo ** k <= x <= hi ** k
                assert hi - lo <= Fraction(1, 2 ** 80)

    def test_pow_interval_rational_exponent(self):
        lo, hi = pow_interval(Fraction(2), Fraction(-3, 2), 64)
        with mpmath.workdps(40):
            val = mpmath.power(2, mpmath.mpf(-3) / 2)
            assert mpmath.mpf(lo.numerator) / lo.denominator <= val
            assert mpmath.mpf(hi.numerator) / hi.denominator >= val


class TestLn:
    def test_ln_known_values(self):
        for x in (Fraction(2), Fraction(1, 2), Fraction(3), Fraction(10, 7),
                  Fraction(1), Fraction(1000000), Fraction(1, 977)):
            lo, hi = ln_interval(x, 96)
            assert hi - lo <= Fraction(1, 2 ** 90)
            with mpmath.workdps(60):
                val = mpmath.ln(mpmath.mpf(x.numerator) / x.denominator)
                assert mpmath.mpf(lo.numerator) / lo.denominator <= val
                assert mpmath.mpf(hi.numerator) / hi.denominator >= val

    @given(st.fractions(min_value=Fraction(1, 10 ** 6), max_value=10 ** 6))
    @settings(max_examples=100)
    def test_ln_product_rule(self, x):
        if x <= 0:
            return
        lo1, hi1 = ln_interval(x, 80)
        lo2, hi2 = ln_interval(x * x, 80)
        # ln(x^2) = 2 ln(x) up to interval slack
        assert lo2 <= 2 * hi1 and hi2 >= 2 * lo1

    def test_ln_quadnum(self):
        lo, hi = ln_interval(PHI, 80)
        with mpmath.workdps(40):
            val = mpmath.ln((1 + mpmath.sqrt(5)) / 2)
            assert mpmath.mpf(lo.numerator) / lo.denominator <= val
            assert mpmath.mpf(hi.numerator) / hi.denominator >= val

    def test_logvalue_sign_with_huge_coefficients(self):
        # 10^11 * ln(golden) vs (10^11 * log2(golden)) * ln 2: tiny but sure gap
        n = 10 ** 11
        v = LogValue.of(PHI, n) - LogValue.of(Fraction(2), int(n * 0.69424191363))
        assert v.sign() == 1

    def test_logvalue_exact_zero(self):
        v = LogValue.of(Fraction(8), 1) - LogValue.of(Fraction(2), 3)
        with pytest.raises(PrecisionExhausted):
            v.sign()  # genuinely zero: certified sign must refuse, not guess


class TestCertifiedReal:
    def test_exact_floor(self):
        assert CertifiedReal.from_exact(Fraction(7, 2)).floor() == 3
        assert CertifiedReal.from_exact(PHI).floor() == 1

    def test_interval_floor_decides(self):
        x = CertifiedReal.from_interval(Fraction(199, 100), Fraction(1999, 1000))
        assert x.floor() == 1

    def test_interval_floor_exhausts(self):
        x = CertifiedReal.from_interval(Fraction(999, 1000), Fraction(1001, 1000))
        with pytest.raises(PrecisionExhausted):
            x.floor()

    def test_arithmetic_mixes_exact_and_interval(self):
        a = CertifiedReal.from_exact(Fraction(1, 3))
        b = CertifiedReal.from_interval(Fraction(1, 4), Fraction(26, 100))
        c = a + b
        lo, hi = c.enclosure(64)
        assert lo <= Fraction(1, 3) + Fraction(1, 4)
        assert hi >= Fraction(1, 3) + Fraction(26, 100)
        d = a * b - b
        lo, hi = d.enclosure(64)
        assert lo <= Fraction(1, 3) * Fraction(1, 4) - Fraction(26, 100)

    def test_cmp_certified(self):
        a = CertifiedReal.from_exact(PHI)          # 1.618...
        b = CertifiedReal.from_exact(Fraction(13, 8))  # 1.625
        assert a.cmp(b) == -1
        assert b.cmp(a) == 1
        assert a.cmp(PHI) == 0

    def test_refinable_comparison(self):
        # sqrt(2) as a refinable enclosure vs exact 1.41421356...
        def refiner(bits):
            s = math.isqrt(2 << (2 * bits))
            return Fraction(s, 1 << bits), Fraction(s + 1, 1 << bits)

        r = CertifiedReal.from_refiner(refiner)
        assert r.cmp(Fraction(141421356, 100000000)) == 1
        assert r.cmp(Fraction(141421357, 100000000)) == -1
