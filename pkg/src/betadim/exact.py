"""Exact and certified real arithmetic.

Three layers live here:

* ``QuadNum`` -- exact elements a + b*sqrt(d) of a real quadratic field,
  with exact comparisons and floors.  Rationals are the b == 0 case; the
  golden ratio is QuadNum(1/2, 1/2, 5).
* ``CertifiedReal`` -- a real number known either exactly (Fraction or
  QuadNum core) or through a rational interval enclosure that may or may
  not be refinable.  Floor decisions are made only when both endpoints
  agree; otherwise the precision ladder doubles the working precision up
  to a hard cap and then raises ``PrecisionExhausted``.
* enclosure utilities -- integer k-th roots, rational b-th root
  enclosures, and rigorously bounded natural logarithms.  All enclosure
  widths are honest upper bounds, never float estimates.
"""

from __future__ import annotations

import math
from fractions import Fraction
from typing import Callable, Union

from .errors import PrecisionExhausted

#: Precision ladder defaults (bits of enclosure width).
PRECISION_START = 128
PRECISION_CAP = 8192

Exact = Union[int, Fraction, "QuadNum"]


def _is_square(n: int) -> bool:
    if n < 0:
        return False
    r = math.isqrt(n)
    return r * r == n


def iroot(n: int, k: int) -> int:
    """Floor of the k-th root of a non-negative integer."""
    if n < 0:
        raise ValueError("iroot needs n >= 0")
    if k < 1:
        raise ValueError("iroot needs k >= 1")
    if n in (0, 1) or k == 1:
        return n
    if k == 2:
        return math.isqrt(n)
    x = 1 << ((n.bit_length() - 1) // k + 1)
    while True:
        y = ((k - 1) * x + n // x ** (k - 1)) // k
        if y >= x:
            return x
        x = y


class QuadNum:
    """Exact number a + b*sqrt(d) with rational a, b and nonsquare d >= 2.

    Arithmetic stays inside one quadratic field; mixing two different
    nonzero radicands raises.  Rationals (b == 0) mix with everything.
    """

    __slots__ = ("a", "b", "d")

    def __init__(self, a, b=0, d: int = 0):
        a = a if isinstance(a, Fraction) else Fraction(a)
        b = b if isinstance(b, Fraction) else Fraction(b)
        if b != 0:
            if d < 2 or _is_square(d):
                raise ValueError("radicand must be a nonsquare integer >= 2")
        else:
            d = 0
        self.a = a
        self.b = b
        self.d = d

    # -- helpers ---------------------------------------------------------

    @staticmethod
    def _coerce(x) -> "QuadNum":
        if isinstance(x, QuadNum):
            return x
        if isinstance(x, (int, Fraction)):
            return QuadNum(Fraction(x))
        raise TypeError(f"cannot coerce {type(x)!r} to QuadNum")

    def _join_d(self, other: "QuadNum") -> int:
        if self.d and other.d and self.d != other.d:
            raise ValueError("mixed radicands")
        return self.d or other.d

    @property
    def is_rational(self) -> bool:
        return self.b == 0

    def as_fraction(self) -> Fraction:
        if not self.is_rational:
            raise ValueError("not a rational number")
        return self.a

    # -- ring operations -------------------------------------------------

    def __add__(self, other):
        try:
            o = self._coerce(other)
        except TypeError:
            return NotImplemented
        return QuadNum(self.a + o.a, self.b + o.b, self._join_d(o))

    __radd__ = __add__

    def __neg__(self):
        return QuadNum(-self.a, -self.b, self.d)

    def __sub__(self, other):
        try:
            o = self._coerce(other)
        except TypeError:
            return NotImplemented
        return QuadNum(self.a - o.a, self.b - o.b, self._join_d(o))

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        try:
            o = self._coerce(other)
        except TypeError:
            return NotImplemented
        d = self._join_d(o)
        a = self.a * o.a + self.b * o.b * d
        b = self.a * o.b + self.b * o.a
        return QuadNum(a, b, d)

    __rmul__ = __mul__

    def inverse(self) -> "QuadNum":
        norm = self.a * self.a - self.b * self.b * self.d
        if norm == 0:
            raise ZeroDivisionError("QuadNum division by zero")
        return QuadNum(self.a / norm, -self.b / norm, self.d)

    def __truediv__(self, other):
        try:
            o = self._coerce(other)
        except TypeError:
            return NotImplemented
        return self * o.inverse()

    def __rtruediv__(self, other):
        return self._coerce(other) * self.inverse()

    def __pow__(self, k: int):
        if not isinstance(k, int):
            return NotImplemented
        if k < 0:
            return self.inverse() ** (-k)
        result = QuadNum(1)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    # -- exact order -----------------------------------------------------

    def sign(self) -> int:
        """Exact sign of a + b*sqrt(d)."""
        a, b = self.a, self.b
        if b == 0:
            return (a > 0) - (a < 0)
        if a == 0:
            return 1 if b > 0 else -1
        if a > 0 and b > 0:
            return 1
        if a < 0 and b < 0:
            return -1
        # opposite signs: compare a^2 with b^2 d (equality impossible,
        # d nonsquare and a, b nonzero)
        lhs = a * a
        rhs = b * b * self.d
        if lhs > rhs:
            return 1 if a > 0 else -1
        return 1 if b > 0 else -1

    def _cmp(self, other) -> int:
        return (self - self._coerce(other)).sign()

    def __eq__(self, other):
        if isinstance(other, (int, Fraction, QuadNum)):
            return self._cmp(other) == 0
        return NotImplemented

    def __hash__(self):
        if self.is_rational:
            return hash(self.a)
        return hash((self.a, self.b, self.d))

    def __lt__(self, other):
        return self._cmp(other) < 0

    def __le__(self, other):
        return self._cmp(other) <= 0

    def __gt__(self, other):
        return self._cmp(other) > 0

    def __ge__(self, other):
        return self._cmp(other) >= 0

    # -- floor and enclosure ---------------------------------------------

    def __floor__(self) -> int:
        if self.is_rational:
            return self.a.numerator // self.a.denominator
        lo, hi = self.enclosure(PRECISION_START)
        bits = PRECISION_START
        while True:
            flo = lo.numerator // lo.denominator
            fhi = hi.numerator // hi.denominator
            if flo == fhi:
                return flo
            bits *= 2
            if bits > PRECISION_CAP:  # pragma: no cover - irrational never ties
                raise PrecisionExhausted("floor of quadratic number undecided")
            lo, hi = self.enclosure(bits)

    def enclosure(self, bits: int) -> tuple[Fraction, Fraction]:
        """Rational interval containing the value, width <= 2**-bits."""
        if self.is_rational:
            return self.a, self.a
        k = bits + max(0, self.b.numerator.bit_length()
                       - self.b.denominator.bit_length()) + 2
        s = math.isqrt(self.d << (2 * k))
        root_lo = Fraction(s, 1 << k)
        root_hi = Fraction(s + 1, 1 << k)
        if self.b > 0:
            return self.a + self.b * root_lo, self.a + self.b * root_hi
        return self.a + self.b * root_hi, self.a + self.b * root_lo

    def __float__(self) -> float:
        lo, hi = self.enclosure(64)
        return float((lo + hi) / 2)

    def __repr__(self):
        if self.is_rational:
            return f"QuadNum({self.a})"
        return f"QuadNum({self.a} + {self.b}*sqrt({self.d}))"


def exact_floor(x: Exact) -> int:
    if isinstance(x, int):
        return x
    if isinstance(x, Fraction):
        return x.numerator // x.denominator
    return math.floor(x)


def exact_ceil(x: Exact) -> int:
    return -exact_floor(-x if not isinstance(x, int) else -x)


def exact_sign(x: Exact) -> int:
    if isinstance(x, QuadNum):
        return x.sign()
    return (x > 0) - (x < 0)


def exact_enclosure(x: Exact, bits: int) -> tuple[Fraction, Fraction]:
    if isinstance(x, QuadNum):
        return x.enclosure(bits)
    f = Fraction(x)
    return f, f


# ---------------------------------------------------------------------------
# Certified reals
# ---------------------------------------------------------------------------

Refiner = Callable[[int], tuple[Fraction, Fraction]]


class CertifiedReal:
    """A real known exactly or through a (possibly refinable) enclosure.

    Invariants: lo <= hi always; refinement never widens the cached
    interval; floor/comparison decisions are made only from certified
    enclosures or exact cores.
    """

    __slots__ = ("exact", "_refiner", "_lo", "_hi", "_bits")

    def __init__(self, exact: Exact | None, refiner: Refiner | None,
                 lo: Fraction | None = None, hi: Fraction | None = None,
                 bits: int = 0):
        self.exact = exact
        self._refiner = refiner
        self._lo = lo
        self._hi = hi
        self._bits = bits

    # -- constructors ------------------------------------------------------

    @classmethod
    def from_exact(cls, value: Exact) -> "CertifiedReal":
        if isinstance(value, int):
            value = Fraction(value)
        if isinstance(value, QuadNum) and value.is_rational:
            value = value.as_fraction()
        return cls(value, None)

    @classmethod
    def from_interval(cls, lo, hi) -> "CertifiedReal":
        lo, hi = Fraction(lo), Fraction(hi)
        if lo > hi:
            raise ValueError("interval endpoints out of order")
        return cls(None, None, lo, hi, bits=0)

    @classmethod
    def from_refiner(cls, refiner: Refiner) -> "CertifiedReal":
        return cls(None, refiner)

    # -- enclosure ---------------------------------------------------------

    def enclosure(self, bits: int) -> tuple[Fraction, Fraction]:
        if self.exact is not None:
            return exact_enclosure(self.exact, bits)
        if self._refiner is not None and (self._lo is None or bits > self._bits):
            lo, hi = self._refiner(bits)
            if self._lo is not None:
                lo, hi = max(lo, self._lo), min(hi, self._hi)
            self._lo, self._hi, self._bits = lo, hi, bits
        if self._lo is None:
            raise ValueError("interval real with no enclosure")
        return self._lo, self._hi

    @property
    def refinable(self) -> bool:
        return self.exact is not None or self._refiner is not None

    def width_bits(self) -> int | None:
        """bits b such that current width <= 2**-b, None if exact."""
        if self.exact is not None:
            return None
        lo, hi = self.enclosure(self._bits or PRECISION_START)
        w = hi - lo
        if w == 0:
            return None
        return -(w.numerator.bit_length() - w.denominator.bit_length()) - 1

    # -- arithmetic ----------------------------------------------------------

    @staticmethod
    def _wrap(x) -> "CertifiedReal":
        if isinstance(x, CertifiedReal):
            return x
        return CertifiedReal.from_exact(x)

    def _combine(self, other, exact_op, interval_op) -> "CertifiedReal":
        o = self._wrap(other)
        if self.exact is not None and o.exact is not None:
            try:
                return CertifiedReal.from_exact(exact_op(self.exact, o.exact))
            except ValueError:
                pass  # mixed radicands: fall through to intervals
        a, b = self, o

        def refiner(bits: int) -> tuple[Fraction, Fraction]:
            return interval_op(a.enclosure(bits + 2), b.enclosure(bits + 2))

        out = CertifiedReal.from_refiner(refiner)
        if not (a.refinable and b.refinable):
            # at least one side is a fixed interval: result cannot refine
            # beyond what both sides currently know
            lo, hi = interval_op(a.enclosure(PRECISION_CAP), b.enclosure(PRECISION_CAP))
            return CertifiedReal.from_interval(lo, hi)
        return out

    def __add__(self, other):
        return self._combine(other, lambda x, y: x + y,
                             lambda i, j: (i[0] + j[0], i[1] + j[1]))

    __radd__ = __add__

    def __neg__(self):
        if self.exact is not None:
            return CertifiedReal.from_exact(-self.exact)
        if self._refiner is None:
            return CertifiedReal.from_interval(-self._hi, -self._lo)
        inner = self

        def refiner(bits):
            lo, hi = inner.enclosure(bits)
            return -hi, -lo

        return CertifiedReal.from_refiner(refiner)

    def __sub__(self, other):
        return self + (-self._wrap(other))

    def __rsub__(self, other):
        return (-self) + other

    @staticmethod
    def _imul(i, j):
        prods = [i[0] * j[0], i[0] * j[1], i[1] * j[0], i[1] * j[1]]
        return min(prods), max(prods)

    def __mul__(self, other):
        return self._combine(other, lambda x, y: x * y, self._imul)

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._wrap(other)
        if o.exact is not None:
            if exact_sign(o.exact) == 0:
                raise ZeroDivisionError
            if isinstance(o.exact, QuadNum):
                return self * o.exact.inverse()
            return self * (1 / o.exact)

        def inv(j):
            lo, hi = j
            if lo <= 0 <= hi:
                raise ZeroDivisionError("interval straddles zero")
            return 1 / hi, 1 / lo

        a = self

        def refiner(bits):
            return CertifiedReal._imul(a.enclosure(bits + 2), inv(o.enclosure(bits + 2)))

        return CertifiedReal.from_refiner(refiner) if (a.refinable and o.refinable) \
            else CertifiedReal.from_interval(*CertifiedReal._imul(
                a.enclosure(PRECISION_CAP), inv(o.enclosure(PRECISION_CAP))))

    # -- decisions -----------------------------------------------------------

    def _ladder(self):
        bits = PRECISION_START
        while bits <= PRECISION_CAP:
            yield bits
            bits *= 2

    def floor(self) -> int:
        """Certified floor; raises PrecisionExhausted on persistent ties."""
        if self.exact is not None:
            return exact_floor(self.exact)
        for bits in self._ladder():
            lo, hi = self.enclosure(bits)
            flo = lo.numerator // lo.denominator
            fhi = hi.numerator // hi.denominator
            if flo == fhi:
                return flo
            if self._refiner is None:
                break
        raise PrecisionExhausted("floor undecided at precision cap")

    def cmp(self, other) -> int:
        """Certified three-way comparison; 0 only for provable equality."""
        o = self._wrap(other)
        if self.exact is not None and o.exact is not None:
            try:
                return exact_sign(self.exact - o.exact)
            except ValueError:
                pass
        for bits in self._ladder():
            alo, ahi = self.enclosure(bits)
            blo, bhi = o.enclosure(bits)
            if ahi < blo:
                return -1
            if alo > bhi:
                return 1
            if alo == ahi == blo == bhi:
                return 0
            if not (self.refinable or o.refinable):
                break
        raise PrecisionExhausted("comparison undecided at precision cap")

    def __float__(self):
        if self.exact is not None:
            if isinstance(self.exact, QuadNum):
                return float(self.exact)
            return float(self.exact)
        lo, hi = self.enclosure(64)
        return float((lo + hi) / 2)

    def __repr__(self):
        if self.exact is not None:
            return f"CertifiedReal({self.exact!r})"
        if self._lo is not None:
            return f"CertifiedReal([{float(self._lo)}, {float(self._hi)}])"
        return "CertifiedReal(<lazy>)"


# ---------------------------------------------------------------------------
# Root and logarithm enclosures
# ---------------------------------------------------------------------------


def root_interval(x: Fraction, k: int, bits: int) -> tuple[Fraction, Fraction]:
    """Enclosure of x**(1/k) for rational x > 0, width <= 2**-bits."""
    if x <= 0:
        raise ValueError("root of non-positive number")
    prec = bits + 2
    scaled = (x.numerator << (k * prec)) // x.denominator
    r = iroot(scaled, k)
    return Fraction(r, 1 << prec), Fraction(r + 2, 1 << prec)


def pow_interval(x: Fraction, e: Fraction, bits: int) -> tuple[Fraction, Fraction]:
    """Enclosure of x**e for rational x > 0 and rational exponent e."""
    if e.denominator == 1:
        v = x ** e.numerator
        return v, v
    base = x ** e.numerator  # exact rational
    return root_interval(base, e.denominator, bits)


_LN2_CACHE: dict[int, tuple[int, int]] = {}


def _ln2_fixed(w: int) -> tuple[int, int]:
    """Integer bounds [lo, hi] with ln 2 * 2**w in [lo, hi]."""
    if w in _LN2_CACHE:
        return _LN2_CACHE[w]
    total = 0
    kmax = w + 2
    for k in range(1, kmax + 1):
        total += (1 << w) // (k << k)
    lo = total
    hi = total + kmax + 2  # floor losses + series tail
    _LN2_CACHE[w] = (lo, hi)
    return lo, hi


def _ln_mantissa_fixed(mn: int, w: int) -> tuple[int, int]:
    """Bounds on ln(mn / 2**w) * 2**w for 2**w <= mn < 2**(w+1).

    atanh series at z = (m-1)/(m+1) in [0, 1/3), two-sided integer interval
    arithmetic throughout: floors for lower bounds, ceilings for upper.
    """
    one = 1 << w
    num = mn - one
    if num == 0:
        return 0, 2
    den = mn + one
    z_lo = (num << w) // den
    z_hi = z_lo + 1
    z2_lo = (z_lo * z_lo) >> w
    z2_hi = (z_hi * z_hi + one - 1) >> w
    p_lo, p_hi = z_lo, z_hi
    s_lo, s_hi = z_lo, z_hi
    i = 1
    while True:
        p_lo = (p_lo * z2_lo) >> w
        p_hi = (p_hi * z2_hi + one - 1) >> w
        k = 2 * i + 1
        if p_hi < k:
            # remaining terms sum below p_hi * 9/8 ulps; pad generously
            s_hi += 2 * p_hi + 2
            break
        s_lo += p_lo // k
        s_hi += p_hi // k + 1
        i += 1
    return 2 * s_lo, 2 * s_hi


def _log2_floor_fraction(x: Fraction) -> int:
    """Largest e with 2**e <= x, for rational x > 0."""
    e = x.numerator.bit_length() - x.denominator.bit_length()
    if Fraction(2) ** e > x:
        e -= 1
    if Fraction(2) ** (e + 1) <= x:
        e += 1
    return e


def ln_interval(x, bits: int) -> tuple[Fraction, Fraction]:
    """Rigorous enclosure of ln(x) for x rational, QuadNum, or CertifiedReal."""
    if isinstance(x, CertifiedReal):
        lo, hi = x.enclosure(bits + 4)
        if lo <= 0:
            raise ValueError("log of non-positive value")
        return ln_interval(lo, bits + 2)[0], ln_interval(hi, bits + 2)[1]
    if isinstance(x, QuadNum):
        lo, hi = x.enclosure(bits + 4)
        if lo <= 0:
            raise ValueError("log of non-positive value")
        return ln_interval(lo, bits + 2)[0], ln_interval(hi, bits + 2)[1]
    x = Fraction(x)
    if x <= 0:
        raise ValueError("log of non-positive value")
    e = _log2_floor_fraction(x)
    w = bits + 24 + abs(e).bit_length()
    m = x / Fraction(2) ** e  # in [1, 2)
    mn = (m.numerator << w) // m.denominator  # 1 ulp low
    mlo_lo, mlo_hi = _ln_mantissa_fixed(mn, w)
    # mantissa rounding: m in [mn/2^w, (mn+1)/2^w]; ln slope <= 1 on [1,2]
    mlo_hi += 2
    l2lo, l2hi = _ln2_fixed(w)
    if e >= 0:
        lo = Fraction(e * l2lo + mlo_lo, 1 << w)
        hi = Fraction(e * l2hi + mlo_hi, 1 << w)
    else:
        lo = Fraction(e * l2hi + mlo_lo, 1 << w)
        hi = Fraction(e * l2lo + mlo_hi, 1 << w)
    return lo, hi


def log_ratio_floor(num_log: "LogValue", den_log: "LogValue") -> int:
    """Largest integer m with m * den <= num, via certified refinement."""
    for bits in (128, 256, 512, 1024, 2048, 4096, PRECISION_CAP):
        nlo, nhi = num_log.enclosure(bits)
        dlo, dhi = den_log.enclosure(bits)
        if dlo <= 0:
            raise ValueError("denominator log must be positive")
        m_lo = exact_floor(nlo / dhi)
        m_hi = exact_floor(nhi / dlo)
        if m_lo == m_hi:
            return m_lo
    raise PrecisionExhausted("log ratio floor undecided")


class LogValue:
    """Exact linear combination sum(coef * ln(base)) with certified enclosure.

    Coefficients are Fractions (often huge integers); bases are exact
    positive numbers.  Enclosures account for coefficient magnitude so the
    requested bits survive the scaling.
    """

    __slots__ = ("terms",)

    def __init__(self, terms=()):
        self.terms = tuple((Fraction(c), b) for c, b in terms if c != 0)

    @classmethod
    def of(cls, base, coef=1) -> "LogValue":
        return cls([(Fraction(coef), base)])

    def __add__(self, other: "LogValue") -> "LogValue":
        return LogValue(self.terms + other.terms)

    def __neg__(self) -> "LogValue":
        return LogValue([(-c, b) for c, b in self.terms])

    def __sub__(self, other: "LogValue") -> "LogValue":
        return self + (-other)

    def scale(self, f) -> "LogValue":
        f = Fraction(f)
        return LogValue([(c * f, b) for c, b in self.terms])

    def enclosure(self, bits: int) -> tuple[Fraction, Fraction]:
        lo = Fraction(0)
        hi = Fraction(0)
        for coef, base in self.terms:
            mag = abs(coef.numerator).bit_length() + coef.denominator.bit_length()
            blo, bhi = ln_interval(base, bits + mag + 4)
            if coef >= 0:
                lo += coef * blo
                hi += coef * bhi
            else:
                lo += coef * bhi
                hi += coef * blo
        return lo, hi

    def sign(self) -> int:
        """Certified sign; raises PrecisionExhausted on persistent ties."""
        bits = PRECISION_START
        while bits <= PRECISION_CAP:
            lo, hi = self.enclosure(bits)
            if lo > 0:
                return 1
            if hi < 0:
                return -1
            if lo == hi == 0:
                return 0
            bits *= 2
        raise PrecisionExhausted("log-linear sign undecided")

    def __float__(self) -> float:
        lo, hi = self.enclosure(64)
        return float((lo + hi) / 2)
