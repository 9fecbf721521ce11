"""Approximation speeds and convergent errors.

The scaled error of the order-n truncation is the orbit point itself:
beta**n * (x - value(first n digits)) = T^n(x).  Hits of a speed function
psi are the n with T^n(x) < psi(n); a point approximable to order psi but
to no better order c*psi (0 < c < 1) shows hits of psi and no hits of any
c*psi.  Desk-scale runs can only certify finite-horizon evidence of that,
and every report says so explicitly.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from .errors import PreconditionViolated
from .exact import (CertifiedReal, Exact, LogValue, QuadNum, exact_sign,
                    pow_interval)
from .numerics import BetaSystem, Real, eval_word, orbit


# ---------------------------------------------------------------------------
# Speed functions
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class PsiFunction:
    """A non-increasing approximation speed tied to one base.

    Families:
      exponential  psi(n) = c * beta**(-alpha*n)
      tempered     psi(n) = c * n**(-p) * beta**(-alpha*n)
      table        explicit positive values psi(1), psi(2), ...
    """

    system: BetaSystem
    family: str
    alpha: Fraction = Fraction(0)
    c: Fraction = Fraction(1)
    p: Fraction = Fraction(0)
    table: tuple[Fraction, ...] = ()

    def __post_init__(self):
        if self.family not in ("exponential", "tempered", "table"):
            raise ValueError(f"unknown psi family {self.family!r}")
        if self.family == "table":
            if not self.table:
                raise ValueError("table psi needs values")
            if any(v <= 0 for v in self.table):
                raise ValueError("psi must be positive")
            if any(a < b for a, b in zip(self.table, self.table[1:])):
                raise ValueError("psi must be non-increasing")
        else:
            if self.c <= 0:
                raise ValueError("psi must be positive")
            if self.alpha < 0 or self.p < 0:
                raise ValueError("psi must be non-increasing")

    def describe(self) -> str:
        if self.family == "table":
            return f"table[{len(self.table)}]"
        parts = []
        if self.c != 1:
            parts.append(f"{self.c}*")
        if self.family == "tempered" and self.p:
            parts.append(f"n^-{self.p}*")
        parts.append(f"beta^-{self.alpha}n")
        return "".join(parts)

    def max_index(self) -> int | None:
        return len(self.table) if self.family == "table" else None

    def value_exact(self, n: int) -> Exact | None:
        """Exact value when representable in the base's field, else None."""
        if self.family == "table":
            if n > len(self.table):
                raise PreconditionViolated(f"table psi has no index {n}")
            return self.table[n - 1]
        e = self.alpha * n
        if e.denominator != 1 or not self.system.is_exact:
            return None
        v = self.c * self.system.pow(-int(e))
        if self.family == "tempered" and self.p:
            if self.p.denominator != 1:
                return None
            v = v * Fraction(1, n ** int(self.p))
        return v

    def value(self, n: int) -> CertifiedReal:
        """The value as a certified real (exact core when possible)."""
        if n < 1:
            raise PreconditionViolated("psi is indexed from 1")
        exact = self.value_exact(n)
        if exact is not None:
            return CertifiedReal.from_exact(exact)
        alpha, c, p, system = self.alpha, self.c, self.p, self.system
        fam = self.family

        def refiner(bits: int):
            e = -alpha * n
            if isinstance(system.beta_exact, Fraction):
                lo, hi = pow_interval(system.beta_exact, e, bits + 8)
            else:
                blo, bhi = system.beta.enclosure(bits + 8)
                if e >= 0:  # x**e increasing in x on (1, inf)
                    lo = pow_interval(blo, e, bits + 8)[0]
                    hi = pow_interval(bhi, e, bits + 8)[1]
                else:
                    lo = pow_interval(bhi, e, bits + 8)[0]
                    hi = pow_interval(blo, e, bits + 8)[1]
            lo, hi = lo * c, hi * c
            if fam == "tempered" and p:
                plo, phi = pow_interval(Fraction(n), -p, bits + 8)
                lo, hi = lo * plo, hi * phi
            return lo, hi

        return CertifiedReal.from_refiner(refiner)

    def log_value(self, n: int) -> LogValue:
        """ln psi(n) as an exact log-linear combination (for huge n)."""
        if self.family == "table":
            return LogValue.of(self.table[n - 1])
        beta = self.system.require_exact("symbolic psi logarithm")
        terms = [(-self.alpha * n, beta)]
        if self.c != 1:
            terms.append((Fraction(1), self.c))
        if self.family == "tempered" and self.p and n > 1:
            terms.append((-self.p, Fraction(n)))
        return LogValue(terms)


def psi_exponential(system: BetaSystem, alpha, c=1) -> PsiFunction:
    return PsiFunction(system, "exponential", alpha=Fraction(alpha), c=Fraction(c))


def psi_tempered(system: BetaSystem, alpha, p, c=1) -> PsiFunction:
    return PsiFunction(system, "tempered", alpha=Fraction(alpha),
                       p=Fraction(p), c=Fraction(c))


def psi_table(system: BetaSystem, values: Sequence) -> PsiFunction:
    return PsiFunction(system, "table", table=tuple(Fraction(v) for v in values))


@dataclass(frozen=True)
class AlphaEstimate:
    value: Fraction | float
    exact: bool
    horizon: int

    def __float__(self):
        return float(self.value)


def alpha_of(psi: PsiFunction, horizon: int = 64) -> AlphaEstimate:
    """Decay exponent liminf -log_beta psi(n) / n.

    Exact for the parametric families (the constant and polynomial factors
    vanish in the limit); for tables, the minimum over the horizon with the
    horizon reported.
    """
    if horizon < 1:
        raise PreconditionViolated("horizon must be >= 1")
    if psi.family in ("exponential", "tempered"):
        return AlphaEstimate(psi.alpha, True, horizon)
    import math

    beta = float(psi.system.beta)
    n_max = min(horizon, len(psi.table))
    best = min(-math.log(float(psi.table[n - 1]), beta) / n
               for n in range(1, n_max + 1))
    return AlphaEstimate(best, False, n_max)


# ---------------------------------------------------------------------------
# Errors and hits
# ---------------------------------------------------------------------------


def approx_error(x: Real, system: BetaSystem, n: int) -> Real:
    """|x - order-n truncation| as an exact/certified value: T^n(x)/beta^n."""
    last: Real = x
    for _, t in orbit(x, system, n):
        last = t
    if not isinstance(last, CertifiedReal):
        return last * system.pow(-n)
    if system.is_exact:
        return last * CertifiedReal.from_exact(system.pow(-n))
    return last / _beta_pow_certified(system, n)


def _beta_pow_certified(system: BetaSystem, n: int) -> CertifiedReal:
    acc = CertifiedReal.from_exact(Fraction(1))
    for _ in range(n):
        acc = acc * system.beta
    return acc


def scaled_errors(x: Real, system: BetaSystem, horizon: int) -> list[Real]:
    """[T^1(x), ..., T^horizon(x)] = beta**n (x - truncation_n) for each n."""
    return [t for _, t in orbit(x, system, horizon)]


def _lt(a: Real, b) -> bool:
    """Certified strict less-than between orbit values and psi values."""
    if isinstance(a, CertifiedReal) or isinstance(b, CertifiedReal):
        ca = a if isinstance(a, CertifiedReal) else CertifiedReal.from_exact(a)
        return ca.cmp(b) < 0
    d = a - b
    return (d.sign() if isinstance(d, QuadNum) else exact_sign(d)) < 0


@dataclass
class HitRecord:
    """Indices n <= horizon where the truncation beats psi(n)/beta^n."""

    x_text: str
    beta_spec: str
    psi_text: str
    horizon: int
    hits: list[dict] = field(default_factory=list)

    def hit_indices(self) -> list[int]:
        return [h["n"] for h in self.hits]

    def to_json(self) -> str:
        return json.dumps({
            "x": self.x_text, "beta": self.beta_spec, "psi": self.psi_text,
            "horizon": self.horizon, "hits": self.hits,
        }, sort_keys=True)


def detect_hits(x: Real, system: BetaSystem, psi: PsiFunction,
                horizon: int) -> HitRecord:
    cap = psi.max_index()
    if cap is not None:
        horizon = min(horizon, cap)
    rec = HitRecord(str(x), system.spec, psi.describe(), horizon)
    for n, err in enumerate(scaled_errors(x, system, horizon), start=1):
        pv = psi.value(n)
        if _lt(err, pv):
            fpv = float(pv)
            rec.hits.append({
                "n": n,
                "scaled_error": float(err),
                "psi": fpv,
                "ratio": (float(err) / fpv) if fpv else float("inf"),
            })
    return rec


@dataclass
class EvidenceReport:
    """Finite-horizon evidence for exact-order approximation.

    Consistency at a constant c means: at least one hit of psi and no hit
    of c*psi up to the horizon.  This is evidence only; membership is an
    infinite condition that no finite run can certify.
    """

    x_text: str
    beta_spec: str
    psi_text: str
    horizon: int
    c_values: list[float]
    hits: list[int]
    violations: dict[float, list[int]]

    def consistent(self, c: float) -> bool:
        return bool(self.hits) and not self.violations[c]

    def to_json(self) -> str:
        return json.dumps({
            "x": self.x_text, "beta": self.beta_spec, "psi": self.psi_text,
            "horizon": self.horizon,
            "finite_horizon_only": True,
            "hits": self.hits,
            "violations": {str(c): v for c, v in self.violations.items()},
            "consistent": {str(c): self.consistent(c) for c in self.c_values},
        }, sort_keys=True)


DEFAULT_C_GRID = (Fraction(9, 10), Fraction(99, 100))


def exactness_evidence(x: Real, system: BetaSystem, psi: PsiFunction,
                       c_values: Sequence = DEFAULT_C_GRID,
                       horizon: int = 64) -> EvidenceReport:
    """Partition n <= horizon into hits of psi and violations of c*psi."""
    cs = [Fraction(c) for c in c_values]
    if any(not (0 < c < 1) for c in cs):
        raise PreconditionViolated("constants must lie in (0, 1)")
    cap = psi.max_index()
    if cap is not None:
        horizon = min(horizon, cap)
    hits: list[int] = []
    violations: dict[float, list[int]] = {float(c): [] for c in cs}
    for n, err in enumerate(scaled_errors(x, system, horizon), start=1):
        pv = psi.value(n)
        if _lt(err, pv):
            hits.append(n)
        for c in cs:
            if _lt(err, pv * CertifiedReal.from_exact(c)):
                violations[float(c)].append(n)
    return EvidenceReport(str(x), system.spec, psi.describe(), horizon,
                          [float(c) for c in cs], hits, violations)


def error_two_ways(x: Real, system: BetaSystem, n: int) -> tuple[Real, Real]:
    """(x - value(prefix), T^n(x) * beta**-n): must agree exactly."""
    digits = []
    last: Real = x
    for d, t in orbit(x, system, n):
        digits.append(d)
        last = t
    direct = x - eval_word(digits, system)
    via_orbit = last * system.pow(-n)
    return direct, via_orbit
