"""Base systems for beta-expansions with certified arithmetic.

A ``BetaSystem`` packages a base beta > 1 together with the machinery the
rest of the package rests on: the digit alphabet, the expansion of 1, its
quasi-greedy (always infinite) completion, and exact power caches.

Beta specifications (the ``make_beta`` grammar):

* ``"2"`` or ``"9/5"`` or ``"1.8"``  -- exact rationals
* ``"golden"``                        -- (1 + sqrt(5)) / 2, exact
* ``"quad:(a+b*sqrt(D))/c"``          -- exact quadratic irrational
* ``"dec:<digits>@<bits>"``           -- a real known only to +-2**-bits
  around the given decimal; floor decisions may exhaust precision.

All operations are pure; digit streams memoize behind a lock and systems
are safe to share across threads.
"""

from __future__ import annotations

import re
import threading
from fractions import Fraction
from typing import Iterator, Sequence, Union

from .errors import InvalidBeta, PrecisionExhausted, PreconditionViolated, ProbeExhausted
from .exact import CertifiedReal, Exact, QuadNum, exact_ceil, exact_floor, exact_sign

Word = tuple[int, ...]
Real = Union[int, Fraction, QuadNum, CertifiedReal]

GOLDEN = QuadNum(Fraction(1, 2), Fraction(1, 2), 5)

_QUAD_RE = re.compile(
    r"^quad:\((-?\d+)\+(-?\d+)\*sqrt\((\d+)\)\)/(-?\d+)$")
_DEC_RE = re.compile(r"^dec:(\d+(?:\.\d+)?)@(\d+)$")


def parse_beta_spec(spec: str) -> tuple[Exact | None, tuple[Fraction, Fraction] | None]:
    """Parse a beta specification into an exact value or a fixed interval."""
    spec = spec.strip()
    if spec == "golden":
        return GOLDEN, None
    m = _QUAD_RE.match(spec)
    if m:
        a, b, d, c = (int(g) for g in m.groups())
        if c == 0:
            raise InvalidBeta("zero denominator in quadratic spec")
        try:
            q = QuadNum(Fraction(a, c), Fraction(b, c), d)
        except ValueError as exc:
            raise InvalidBeta(str(exc)) from None
        if q.is_rational:
            return q.as_fraction(), None
        return q, None
    m = _DEC_RE.match(spec)
    if m:
        center = Fraction(m.group(1))
        bits = int(m.group(2))
        eps = Fraction(1, 2 ** bits)
        return None, (center - eps, center + eps)
    try:
        return Fraction(spec), None
    except (ValueError, ZeroDivisionError):
        raise InvalidBeta(f"cannot parse beta spec {spec!r}") from None


def _minimal_period(block: Sequence[int]) -> int:
    """Smallest p such that the block is (block[:p]) repeated."""
    m = len(block)
    fail = [0] * (m + 1)
    k = 0
    for i in range(1, m):
        while k and block[i] != block[k]:
            k = fail[k]
        if block[i] == block[k]:
            k += 1
        fail[i + 1] = k
    p = m - fail[m]
    return p if m % p == 0 else m


class _OneExpansion:
    """Memoized digit stream of the expansion of 1 under x -> beta*x - floor."""

    def __init__(self, system: "BetaSystem"):
        self._sys = system
        self._digits: list[int] = []
        self._state: Real = 1  # value before the next step
        self._finite_length: int | None = None
        self._lock = threading.Lock()

    @property
    def finite_length(self) -> int | None:
        return self._finite_length

    def digit(self, i: int) -> int:
        """1-indexed digit of the expansion of 1 (0 beyond a finite end)."""
        if i < 1:
            raise ValueError("digit index starts at 1")
        self.extend_to(i)
        if i <= len(self._digits):
            return self._digits[i - 1]
        return 0  # finite expansion continued by zeros

    def extend_to(self, n: int) -> None:
        if len(self._digits) >= n or self._finite_length is not None:
            return
        with self._lock:
            while len(self._digits) < n and self._finite_length is None:
                d, nxt = _step(self._state, self._sys)
                self._digits.append(d)
                self._state = nxt
                if _is_exact_zero(nxt):
                    self._finite_length = len(self._digits)


class StarExpansion:
    """The quasi-greedy expansion of 1: always an infinite sequence.

    Equal to the expansion of 1 when that is infinite; when the expansion
    of 1 is finite of length m, it is the periodic completion obtained by
    decrementing the last digit and repeating the block forever.
    """

    def __init__(self, one: _OneExpansion):
        self._one = one
        self._cached_block: list[int] | None = None

    def _block(self) -> list[int] | None:
        if self._cached_block is not None:
            return self._cached_block
        m = self._one.finite_length
        if m is None:
            return None
        block = [self._one.digit(i) for i in range(1, m + 1)]
        block[-1] -= 1
        self._cached_block = block
        return block

    @property
    def periodic_block(self) -> tuple[int, ...] | None:
        b = self._block()
        return tuple(b) if b is not None else None

    @property
    def period(self) -> int | None:
        b = self._block()
        return _minimal_period(b) if b is not None else None

    def digit(self, i: int) -> int:
        if i < 1:
            raise ValueError("digit index starts at 1")
        one = self._one
        if one.finite_length is None:
            d = one.digit(i)  # may discover a finite end
            if one.finite_length is None:
                return d
        block = self._block()
        assert block is not None
        return block[(i - 1) % len(block)]

    def prefix(self, n: int) -> Word:
        return tuple(self.digit(i) for i in range(1, n + 1))

    def __iter__(self) -> Iterator[int]:
        i = 1
        while True:
            yield self.digit(i)
            i += 1


class BetaSystem:
    """A base beta > 1 with exact or declared-precision arithmetic."""

    def __init__(self, spec: str, probe_depth: int = 64):
        self.spec = spec
        exact, interval = parse_beta_spec(spec)
        self.beta_exact: Exact | None = exact
        self._interval = interval
        if exact is not None:
            if not exact > 1:
                raise InvalidBeta(f"beta must exceed 1, got spec {spec!r}")
            self.beta = CertifiedReal.from_exact(exact)
            ceil_b = exact_ceil(exact)
        else:
            lo, hi = interval
            if hi <= 1:
                raise InvalidBeta(f"beta must exceed 1, got spec {spec!r}")
            if lo <= 1:
                raise PrecisionExhausted(
                    "declared precision cannot separate beta from 1")
            self.beta = CertifiedReal.from_interval(lo, hi)
            clo = -((-lo.numerator) // lo.denominator)
            chi = -((-hi.numerator) // hi.denominator)
            if clo != chi:
                raise PrecisionExhausted(
                    "declared precision straddles an integer boundary")
            ceil_b = clo
        self.alphabet_max = ceil_b - 1
        self.probe_depth = probe_depth
        self._pow_cache: dict[int, Exact] = {}
        self._pow_lock = threading.Lock()
        self._star_value_cache: list[Exact] = []
        self._star_value_lock = threading.Lock()
        self.one_expansion = _OneExpansion(self)
        self.star = StarExpansion(self.one_expansion)
        # simple Parry detection, attempted up to the probe depth
        try:
            self.one_expansion.extend_to(probe_depth)
        except PrecisionExhausted:
            pass
        self.is_simple_parry = self.one_expansion.finite_length is not None

    # -- basic properties --------------------------------------------------

    @property
    def is_exact(self) -> bool:
        return self.beta_exact is not None

    @property
    def is_integer(self) -> bool:
        return (self.beta_exact is not None
                and isinstance(self.beta_exact, Fraction)
                and self.beta_exact.denominator == 1)

    def __repr__(self):
        return f"BetaSystem({self.spec!r})"

    def require_exact(self, what: str) -> Exact:
        if self.beta_exact is None:
            raise PrecisionExhausted(
                f"{what} requires an exactly specified beta, not {self.spec!r}")
        return self.beta_exact

    # -- exact powers --------------------------------------------------------

    def pow(self, k: int) -> Exact:
        """Exact beta**k (k may be negative); cached."""
        b = self.require_exact("beta power")
        with self._pow_lock:
            v = self._pow_cache.get(k)
        if v is not None:
            return v
        v = b ** k if isinstance(b, QuadNum) else Fraction(b) ** k
        with self._pow_lock:
            self._pow_cache[k] = v
        return v

    # -- quasi-greedy prefix values -------------------------------------------

    def star_prefix_value(self, n: int) -> Exact:
        """Exact value of the first n quasi-greedy digits of 1."""
        self.require_exact("quasi-greedy prefix value")
        with self._star_value_lock:
            cache = self._star_value_cache
            if not cache:
                cache.append(Fraction(0))
            while len(cache) <= n:
                i = len(cache)
                cache.append(cache[i - 1] + self.star.digit(i) * self.pow(-i))
            return cache[n]

    def tail_sup(self, state: int) -> Exact:
        """Supremum beta**state * (1 - star_prefix_value(state)) of
        continuation values after a maximal quasi-greedy match of length
        ``state``; equals 1 exactly on full states."""
        return self.pow(state) * (1 - self.star_prefix_value(state))

    def is_full_state(self, state: int) -> bool:
        """Whether the shifted quasi-greedy sequence equals itself at this
        offset (continuation supremum 1)."""
        if state == 0:
            return True
        if self.is_simple_parry:
            return state % self.star.period == 0
        return False

    def zero_run_after(self, n: int, probe: int | None = None) -> int:
        """Longest run of zero quasi-greedy digits right after position n."""
        if n < 1:
            raise ValueError("position starts at 1")
        cap = probe if probe is not None else max(self.probe_depth, 4096)
        if self.is_simple_parry:
            cap = max(cap, n + self.star.period + 1)
        i = 0
        while i < cap:
            if self.star.digit(n + 1 + i) != 0:
                return i
            i += 1
        raise ProbeExhausted(
            f"zero run after position {n} exceeds probe depth {cap}")


# ---------------------------------------------------------------------------
# The expansion map
# ---------------------------------------------------------------------------


def _is_exact_zero(x: Real) -> bool:
    if isinstance(x, CertifiedReal):
        return x.exact is not None and exact_sign(x.exact) == 0
    return exact_sign(x) == 0


def _step(x: Real, system: BetaSystem) -> tuple[int, Real]:
    """One application of x -> beta*x - floor(beta*x), with certified floor."""
    if isinstance(x, CertifiedReal) or not system.is_exact:
        cx = x if isinstance(x, CertifiedReal) else CertifiedReal.from_exact(x)
        y = system.beta * cx
        d = y.floor()
        return d, y - d
    b = system.beta_exact
    y = b * x if isinstance(b, QuadNum) or isinstance(x, QuadNum) else b * Fraction(x)
    d = exact_floor(y)
    return d, y - d


def _check_unit_interval(x: Real) -> None:
    if isinstance(x, CertifiedReal):
        if x.cmp(0) < 0 or x.cmp(1) >= 0:
            raise PreconditionViolated("point must lie in [0, 1)")
        return
    if not (x >= 0 and x < 1):
        raise PreconditionViolated("point must lie in [0, 1)")


def t_beta_step(x: Real, system: BetaSystem) -> tuple[int, Real]:
    """One expansion step: returns (digit, next point).

    The digit is floor(beta * x), decided certifiably; raises
    PrecisionExhausted when an interval input straddles an integer.
    """
    _check_unit_interval(x)
    d, nxt = _step(x, system)
    if d < 0 or d > system.alphabet_max:
        raise PreconditionViolated(
            f"digit {d} outside alphabet 0..{system.alphabet_max}")
    return d, nxt


def orbit(x: Real, system: BetaSystem, n: int) -> Iterator[tuple[int, Real]]:
    """Yield (digit_i, T^i x) for i = 1..n."""
    _check_unit_interval(x)
    cur = x
    for _ in range(n):
        d, cur = _step(cur, system)
        yield d, cur


def expand(x: Real, system: BetaSystem, n: int) -> Word:
    """First n digits of the greedy expansion of x in base beta."""
    if n < 1:
        raise ValueError("need at least one digit")
    return tuple(d for d, _ in orbit(x, system, n))


def eval_word(word: Sequence[int], system: BetaSystem) -> Exact:
    """Exact value sum(word[i] * beta**-(i+1)); the order-n truncation of
    any point whose expansion starts with this word."""
    b = system.require_exact("word evaluation")
    if not word:
        return Fraction(0)
    if isinstance(b, Fraction):
        p, q = b.numerator, b.denominator
        acc = 0
        qi = 1
        for d in word:
            qi *= q
            acc = acc * p + d * qi
        return Fraction(acc, p ** len(word))
    if b == GOLDEN:
        # integer Horner in Z[phi]: (a + b*phi + d) * phi^-1 with
        # phi^-1 = phi - 1, so (a, b) -> (b - a, a) after adding the digit
        a, bb = 0, 0
        for d in reversed(word):
            a += d
            a, bb = bb - a, a
        return QuadNum(Fraction(a) + Fraction(bb, 2), Fraction(bb, 2), 5)
    binv = b.inverse()
    acc: Exact = Fraction(0)
    for d in reversed(word):
        acc = (acc + d) * binv
    return acc


def eval_word_certified(word: Sequence[int], system: BetaSystem) -> CertifiedReal:
    """Word value for systems that may only have an interval for beta."""
    if system.is_exact:
        return CertifiedReal.from_exact(eval_word(word, system))
    acc: CertifiedReal = CertifiedReal.from_exact(Fraction(0))
    binv = CertifiedReal.from_exact(Fraction(1)) / system.beta
    for d in reversed(word):
        acc = (acc + d) * binv
    return acc


def make_beta(spec: str, probe_depth: int = 64) -> BetaSystem:
    """Build a BetaSystem from a specification string."""
    return BetaSystem(spec, probe_depth=probe_depth)
