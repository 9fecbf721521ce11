"""Admissible digit words: lexicographic order, the Parry criterion,
enumeration and counting.

The workhorse is a deterministic automaton whose state after reading a
word w is the length of the longest suffix of w equal to a prefix of the
quasi-greedy expansion of 1.  A word is admissible iff the walk never
dies; the classical domination property (shifts of the quasi-greedy
sequence never exceed it) makes the longest match the only constraint
that needs checking.
"""

from __future__ import annotations

from fractions import Fraction
from itertools import zip_longest
from typing import Iterable, Iterator, Sequence

from .errors import CapExceeded, ProbeExhausted
from .exact import QuadNum
from .numerics import BetaSystem, Word

DEFAULT_ENUM_CAP = 10 ** 8

LESS, EQUAL, GREATER = -1, 0, 1


def lex_compare(a: Iterable[int], b: Iterable[int], horizon: int = 10 ** 6) -> int:
    """Lexicographic comparison with zero padding for finite inputs.

    Returns -1, 0, or 1.  Iterables are consumed lazily; two streams that
    agree past ``horizon`` positions raise ProbeExhausted rather than
    guessing.
    """
    seen = 0
    for x, y in zip_longest(iter(a), iter(b), fillvalue=0):
        if x != y:
            return LESS if x < y else GREATER
        seen += 1
        if seen > horizon:
            raise ProbeExhausted(f"sequences agree beyond horizon {horizon}")
    return EQUAL


class ParryAutomaton:
    """Follower automaton of the admissible words of one base.

    States are maximal quasi-greedy-prefix match lengths; reading digit d
    from state s dies iff d exceeds the (s+1)-st quasi-greedy digit,
    advances to s+1 on equality, and otherwise falls back through the
    prefix-function chain.
    """

    def __init__(self, system: BetaSystem):
        self.system = system
        self._star: list[int] = [0]  # 1-indexed; index 0 unused
        self._fail: list[int] = [0, 0]

    def _ensure(self, n: int) -> None:
        star, fail = self._star, self._fail
        while len(star) <= n:
            i = len(star)
            star.append(self.system.star.digit(i))
            if i == 1:
                continue
            k = fail[i - 1]
            while k and star[i] != star[k + 1]:
                k = fail[k]
            if star[i] == star[k + 1]:
                k += 1
            fail.append(k)

    def star_digit(self, i: int) -> int:
        self._ensure(i)
        return self._star[i]

    def max_digit(self, state: int) -> int:
        """Largest digit readable from this state without dying."""
        return self.star_digit(state + 1)

    def step(self, state: int, digit: int) -> int | None:
        """Next state, or None when the word becomes inadmissible."""
        if digit < 0:
            raise ValueError("digits are non-negative")
        if digit > self.star_digit(state + 1):
            return None
        while True:
            if digit == self.star_digit(state + 1):
                return state + 1
            if state == 0:
                return 0
            self._ensure(state)
            state = self._fail[state]

    def walk(self, word: Sequence[int]) -> int | None:
        state = 0
        for d in word:
            state = self.step(state, d)
            if state is None:
                return None
        return state

    def transition_table(self, n: int) -> tuple[list[list[int]], list[int]]:
        """Dense tables (trans[state][digit], max_digit[state]) for states
        0..n; trans rows only cover digits 0..max_digit[state]."""
        self._ensure(n + 1)
        maxd = [self.star_digit(s + 1) for s in range(n + 1)]
        trans = [[self.step(s, d) for d in range(maxd[s] + 1)]
                 for s in range(n + 1)]
        return trans, maxd


_AUTOMATA: dict[int, ParryAutomaton] = {}


def automaton(system: BetaSystem) -> ParryAutomaton:
    """Per-system automaton cache (systems are immutable)."""
    key = id(system)
    auto = _AUTOMATA.get(key)
    if auto is None or auto.system is not system:
        auto = ParryAutomaton(system)
        _AUTOMATA[key] = auto
    return auto


def is_admissible(word: Sequence[int], system: BetaSystem) -> bool:
    """Parry criterion: every suffix stays lexicographically at or below
    the quasi-greedy prefix of its own length."""
    return automaton(system).walk(word) is not None


def _upper_count_bound(system: BetaSystem, n: int) -> Fraction:
    b = system.beta_exact
    if b is None:
        lo, _ = system.beta.enclosure(64)
        return Fraction(lo) ** (n + 1) / (lo - 1)
    v = system.pow(n + 1) / (b - 1)
    if isinstance(v, QuadNum):
        return v.enclosure(32)[1]
    return v


def words_with_states(system: BetaSystem, n: int) -> Iterator[tuple[Word, int]]:
    """All admissible length-n words in lexicographic order with their
    final automaton state."""
    if n < 1:
        raise ValueError("order must be >= 1")
    trans, maxd = automaton(system).transition_table(n)
    digits = [-1] * (n + 1)
    states = [0] * (n + 1)
    i = 1
    while i >= 1:
        d = digits[i] + 1
        if d > maxd[states[i - 1]]:
            digits[i] = -1
            i -= 1
            continue
        digits[i] = d
        states[i] = trans[states[i - 1]][d]
        if i == n:
            yield tuple(digits[1:]), states[n]
        else:
            i += 1


def enumerate_admissible(n: int, system: BetaSystem,
                         cap: int = DEFAULT_ENUM_CAP) -> Iterator[Word]:
    """Stream the set of admissible length-n words, sorted, no duplicates."""
    if _upper_count_bound(system, n) > cap:
        raise CapExceeded(
            f"order-{n} enumeration may exceed cap {cap} for beta {system.spec!r}")
    return (w for w, _ in words_with_states(system, n))


def count_admissible(n: int, system: BetaSystem) -> int:
    """Number of admissible words of length n, by dynamic programming over
    automaton states; certified against the classical bounds
    beta**n <= count <= beta**(n+1)/(beta-1)."""
    if n < 1:
        raise ValueError("order must be >= 1")
    trans, maxd = automaton(system).transition_table(n)
    counts = {0: 1}
    for _ in range(n):
        nxt: dict[int, int] = {}
        for s, c in counts.items():
            row = trans[s]
            for d in range(maxd[s] + 1):
                t = row[d]
                nxt[t] = nxt.get(t, 0) + c
        counts = nxt
    total = sum(counts.values())
    _assert_renyi(total, n, system)
    return total


def _assert_renyi(count: int, n: int, system: BetaSystem) -> None:
    if not system.is_exact:
        return
    lower = system.pow(n)
    upper = system.pow(n + 1) / (system.beta_exact - 1)
    if not (lower <= count and count <= upper):
        raise AssertionError(
            f"count {count} violates growth bounds for beta {system.spec!r}, n={n}")


def renyi_bounds(n: int, system: BetaSystem):
    """The exact pair (beta**n, beta**(n+1)/(beta-1))."""
    return system.pow(n), system.pow(n + 1) / (system.beta_exact - 1)


def zero_run(n: int, system: BetaSystem, probe: int | None = None) -> int:
    """Longest run of zero quasi-greedy digits after position n."""
    return system.zero_run_after(n, probe)


# ---------------------------------------------------------------------------
# Text format: compact digit string for one-char alphabets, else CSV
# ---------------------------------------------------------------------------


def format_word(word: Sequence[int], system: BetaSystem | None = None) -> str:
    wide = (system.alphabet_max > 9) if system is not None else any(d > 9 for d in word)
    if wide:
        return ",".join(str(d) for d in word)
    return "".join(str(d) for d in word)


def parse_word(text: str) -> Word:
    text = text.strip()
    if not text:
        return ()
    if "," in text:
        return tuple(int(p) for p in text.split(","))
    return tuple(int(c) for c in text)
