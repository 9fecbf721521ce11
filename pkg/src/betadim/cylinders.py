"""Exact geometry of order-n cylinders.

A cylinder is the set of points whose expansion starts with a fixed
admissible word; it is a half-open interval.  Its length admits two
independent computations that must agree:

* partition route: left endpoint of the lexicographic successor minus the
  own left endpoint (the last word's right endpoint is 1);
* follower route: beta**-n times the continuation supremum of the final
  automaton state (length beta**-n exactly on full words).

The follower route is the fast path; the partition route is the
definitional one and is kept as a cross-check.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator, Sequence

from .errors import (CapExceeded, InvariantFailure, NotAdmissible,
                     PreconditionViolated)
from .exact import CertifiedReal, Exact
from .numerics import BetaSystem, Word, eval_word, expand
from .words import DEFAULT_ENUM_CAP, automaton, words_with_states


@dataclass(frozen=True)
class CylinderInterval:
    """Half-open interval [left, left + length) of one admissible word."""

    word: Word
    left: Exact
    length: Exact
    is_full: bool

    @property
    def order(self) -> int:
        return len(self.word)

    @property
    def right(self) -> Exact:
        return self.left + self.length


def _final_state(word: Sequence[int], system: BetaSystem) -> int:
    state = automaton(system).walk(word)
    if state is None:
        raise NotAdmissible(f"word {tuple(word)} is not admissible for beta "
                            f"{system.spec!r}")
    return state


def cylinder(word: Sequence[int], system: BetaSystem) -> CylinderInterval:
    """Exact cylinder of an admissible word (follower-route length)."""
    state = _final_state(word, system)
    n = len(word)
    length = system.pow(-n) * system.tail_sup(state)
    return CylinderInterval(tuple(word), eval_word(word, system), length,
                            system.is_full_state(state))


def is_full(word: Sequence[int], system: BetaSystem) -> bool:
    """Maximal-length test via the follower state; equivalent to: every
    admissible continuation keeps the word admissible."""
    return system.is_full_state(_final_state(word, system))


def successor(word: Sequence[int], system: BetaSystem) -> Word | None:
    """Next admissible word of the same length, or None at the end."""
    auto = automaton(system)
    states = [0]
    for d in word:
        s = auto.step(states[-1], d)
        if s is None:
            raise NotAdmissible(f"word {tuple(word)} is not admissible")
        states.append(s)
    n = len(word)
    for i in range(n, 0, -1):
        base = states[i - 1]
        if word[i - 1] < auto.max_digit(base):
            return tuple(word[:i - 1]) + (word[i - 1] + 1,) + (0,) * (n - i)
    return None


def length_by_partition(word: Sequence[int], system: BetaSystem) -> Exact:
    """Definitional length: distance to the next left endpoint."""
    nxt = successor(word, system)
    left = eval_word(word, system)
    if nxt is None:
        return 1 - left
    return eval_word(nxt, system) - left


def fullness_two_ways(word: Sequence[int], system: BetaSystem) -> tuple[bool, bool]:
    """(follower-route fullness, exact-length fullness); must agree."""
    fast = is_full(word, system)
    exact = length_by_partition(word, system) == system.pow(-len(word))
    return fast, exact


@dataclass(frozen=True)
class CensusRecord:
    beta_spec: str
    order: int
    count_admissible: int
    count_full: int
    max_gap: int

    def csv_row(self) -> str:
        return (f"{self.beta_spec},{self.order},{self.count_admissible},"
                f"{self.count_full},{self.max_gap}")


CENSUS_CSV_HEADER = "beta,n,count_admissible,count_full,max_gap"


def full_census(n: int, system: BetaSystem,
                cap: int = DEFAULT_ENUM_CAP) -> CensusRecord:
    """Counts and the maximal run of consecutive non-full cylinders.

    The full ones recur with gaps at most n: among any n+1 consecutive
    order-n cylinders at least one is full.
    """
    from .words import _upper_count_bound  # local: shares the cap policy

    if _upper_count_bound(system, n) > cap:
        raise CapExceeded(f"census at order {n} may exceed cap {cap}")
    count = 0
    count_full = 0
    gap = 0
    max_gap = 0
    for _, state in words_with_states(system, n):
        count += 1
        if system.is_full_state(state):
            count_full += 1
            gap = 0
        else:
            gap += 1
            if gap > max_gap:
                max_gap = gap
    if max_gap > n:
        raise InvariantFailure(
            f"non-full run {max_gap} exceeds order {n} for beta {system.spec!r}")
    return CensusRecord(system.spec, n, count, count_full, max_gap)


def iter_cylinders(n: int, system: BetaSystem,
                   cap: int = DEFAULT_ENUM_CAP) -> Iterator[CylinderInterval]:
    from .words import _upper_count_bound

    if _upper_count_bound(system, n) > cap:
        raise CapExceeded(f"cylinder sweep at order {n} may exceed cap {cap}")
    pm = system.pow(-n)
    for w, state in words_with_states(system, n):
        yield CylinderInterval(w, eval_word(w, system),
                               pm * system.tail_sup(state),
                               system.is_full_state(state))


def _cmp(a, b) -> int:
    """Three-way compare for mixed Exact / CertifiedReal operands."""
    if isinstance(a, CertifiedReal) or isinstance(b, CertifiedReal):
        ca = a if isinstance(a, CertifiedReal) else CertifiedReal.from_exact(a)
        return ca.cmp(b if not isinstance(b, CertifiedReal) else b)
    d = a - b
    if isinstance(d, Fraction) or isinstance(d, int):
        return (d > 0) - (d < 0)
    return d.sign()


def find_full_in_interval(lo, hi, n: int, system: BetaSystem,
                          strict: bool = False) -> Word:
    """Leftmost full order-n cylinder inside the interval (lo, hi).

    With ``strict`` the cylinder's closed hull must lie strictly inside;
    otherwise endpoint contact is allowed.  Requires
    (n+1) * beta**-n < hi - lo, which guarantees existence in the
    non-strict case.
    """
    pm = system.pow(-n)
    if _cmp((n + 1) * pm, hi - lo) >= 0:
        raise PreconditionViolated(
            f"interval too small for a guaranteed full cylinder of order {n}")

    # first cylinder whose left endpoint can satisfy the containment
    lo_clamped = lo if _cmp(lo, 0) > 0 else Fraction(0)
    if _cmp(lo_clamped, 1) >= 0:
        raise PreconditionViolated("interval lies outside [0, 1)")
    word = expand(lo_clamped, system, n)

    need = 1 if strict else 0
    auto = automaton(system)
    w: Word | None = word
    while w is not None:
        left = eval_word(w, system)
        if _cmp(left, hi) >= 0:
            break
        if (_cmp(left, lo) >= need
                and _cmp(left + pm, hi) <= -need
                and system.is_full_state(auto.walk(w))):
            return w
        w = successor(w, system)
    raise InvariantFailure(
        f"no full order-{n} cylinder found inside the interval")
