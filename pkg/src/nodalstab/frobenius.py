"""Slope and degree bounds for subsheaves of Frobenius pushforwards.

Everything returns exact rationals. Integer conclusions of the form
"deg < B, hence deg <= B'" are computed separately by
:func:`largest_integer_below`, so strictness is explicit.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence


def is_prime(n: int) -> bool:
    """Deterministic trial division."""
    if not isinstance(n, int) or n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    k = 3
    while k * k <= n:
        if n % k == 0:
            return False
        k += 2
    return True


def _require_prime(p: int):
    if not is_prime(p):
        raise ValueError(f"{p} is not prime")


def largest_integer_below(x: Fraction) -> int:
    """Largest integer strictly smaller than ``x``."""
    x = Fraction(x)
    return math.ceil(x) - 1


# --- Riemann-Roch conversions on a smooth curve of genus g -------------------


def euler_from_degree(deg, rank: int, g: int) -> Fraction:
    return Fraction(deg) + rank * (1 - g)


def slope_from_degree(deg, rank: int, g: int) -> Fraction:
    """``mu = chi / rk = deg / rk + (1 - g)``."""
    return euler_from_degree(deg, rank, g) / rank


def degree_from_slope(mu, rank: int, g: int) -> Fraction:
    return (Fraction(mu) - (1 - g)) * rank


# --- rank sequences ---------------------------------------------------------


@dataclass(frozen=True)
class RankSequence:
    ranks: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "ranks", tuple(self.ranks))

    @property
    def m(self) -> int:
        """Largest index with a non-zero rank."""
        nz = [i for i, r in enumerate(self.ranks) if r != 0]
        return nz[-1] if nz else -1

    @property
    def total(self) -> int:
        return sum(self.ranks)

    @property
    def weighted_sum(self) -> int:
        """``2 * sum(l * r_l)``."""
        return 2 * sum(i * r for i, r in enumerate(self.ranks))


@dataclass(frozen=True)
class RankSequenceReport:
    valid: bool
    m: int
    checks: dict[str, bool]
    weighted_sum: int

    def to_json(self) -> dict:
        return {
            "valid": self.valid,
            "m": self.m,
            "weighted_sum": self.weighted_sum,
            "checks": dict(sorted(self.checks.items())),
        }


def validate_rank_sequence(s: RankSequence, rk: int, p: int) -> RankSequenceReport:
    r = s.ranks
    m = s.m
    checks = {
        "positive": bool(r) and all(x >= 1 for x in r),
        "weakly_decreasing": all(x >= y for x, y in zip(r, r[1:])),
        "sums_to_rank": s.total == rk,
        "m_bound": m <= min(rk - 1, p - 1),
        "weighted_bound": s.weighted_sum <= rk * m,
    }
    return RankSequenceReport(all(checks.values()), m, checks, s.weighted_sum)


def weakly_decreasing_compositions(h: int) -> list[tuple[int, ...]]:
    """All weakly decreasing sequences of positive integers summing to ``h``."""
    out = []

    def rec(left, cap, acc):
        if left == 0:
            out.append(tuple(acc))
            return
        for x in range(min(left, cap), 0, -1):
            acc.append(x)
            rec(left - x, x, acc)
            acc.pop()

    rec(h, h, [])
    return out


# --- slope bounds -------------------------------------------------------------


def slope_bound_single(mu0, m: int, g: int) -> Fraction:
    """Bound on the slope of a Frobenius pullback with ``m + 1`` graded pieces."""
    if m < 0 or g < 1:
        raise ValueError("need m >= 0 and g >= 1")
    return Fraction(mu0) + m * (g - 1)


@dataclass(frozen=True)
class BoundParams:
    p: int
    g: int
    r: int
    n: int = 1
    mu0: Fraction = field(default=Fraction(0))

    def __post_init__(self):
        object.__setattr__(self, "mu0", Fraction(self.mu0))
        _require_prime(self.p)
        if self.g < 1:
            raise ValueError("genus must be >= 1")
        if self.r < 1:
            raise ValueError("rank must be >= 1")
        if self.n < 0:
            raise ValueError("n must be >= 0")


def geometric_sum(p: int, n: int) -> int:
    """``sum_{j < n} p^j`` by accumulation."""
    total = 0
    for j in range(n):
        total += p**j
    return total


def geometric_closed(p: int, n: int) -> Fraction:
    return Fraction(p**n - 1, p - 1)


def slope_bound_iterated(b: BoundParams) -> Fraction:
    """``mu0 + (p^n - 1)/(p - 1) * (r - 1)(g - 1)``."""
    if b.r > b.p:
        raise ValueError("the iterated bound requires r <= p")
    closed = geometric_closed(b.p, b.n)
    if closed != geometric_sum(b.p, b.n):
        raise ArithmeticError("geometric sum mismatch")
    return b.mu0 + closed * (b.r - 1) * (b.g - 1)


@dataclass(frozen=True)
class DegreeBound:
    exact: Fraction
    uniform: Fraction
    deg_conclusion: int
    # informational: the same bound for a subsheaf of rank h, before h <= r is used
    by_rank: dict[int, Fraction]

    def to_json(self) -> dict:
        return {
            "exact": _frac(self.exact),
            "uniform": _frac(self.uniform),
            "deg_conclusion": self.deg_conclusion,
            "by_rank": {str(h): _frac(x) for h, x in sorted(self.by_rank.items())},
        }


def degree_bound(b: BoundParams) -> DegreeBound:
    """Degree bound for ``mu0 = 1 - g``, ``g > 1``, ``r > 1``."""
    if b.mu0 != 1 - b.g:
        raise ValueError("degree bound requires mu0 = 1 - g")
    if b.g <= 1 or b.r <= 1:
        raise ValueError("degree bound requires g > 1 and r > 1")
    if b.r > b.p:
        raise ValueError("the iterated bound requires r <= p")
    p, n, r, g = b.p, b.n, b.r, b.g
    coeff = Fraction(p**n - 1, p**n * (p - 1))
    exact = coeff * r * (r - 1) * (g - 1)
    uniform = Fraction(r * (r - 1) * (g - 1), p - 1)
    by_rank = {h: coeff * h * (r - 1) * (g - 1) for h in range(1, r + 1)}
    return DegreeBound(exact, uniform, largest_integer_below(uniform), by_rank)


def invariant_mu0(mu_prime, deg_xi: int, g: int) -> Fraction:
    """Slope bound for invariants of a pushforward along a Galois cover of degree ``deg_xi``."""
    if deg_xi < 1:
        raise ValueError("deg_xi must be >= 1")
    return Fraction(mu_prime) / deg_xi + (1 - g)


def p1_degree_check(h: int, n: int, p: int, d: int) -> bool:
    """``p^n d <= h`` for a line subbundle ``O(d)`` of ``phi^n_*(E_0)`` on P^1."""
    if n < 0:
        raise ValueError("n must be >= 0")
    _require_prime(p)
    return p**n * d <= h


def p1_trivial_case(n: int, p: int, d: int) -> bool:
    """Specialization ``h = 0``: holds iff ``d <= 0``."""
    return p1_degree_check(0, n, p, d)


@dataclass(frozen=True)
class AssumptionReport:
    p: int
    r: int
    g: int
    threshold: int
    holds: bool
    specialization: str | None = None

    def to_json(self) -> dict:
        out = {"p": self.p, "r": self.r, "g": self.g, "threshold": self.threshold, "holds": self.holds}
        if self.specialization:
            out["specialization"] = self.specialization
        return out


def assumption_check(p: int, r: int, g: int) -> AssumptionReport:
    """``p > r(r-1)(g-1)``."""
    _require_prime(p)
    if r < 1 or g < 1:
        raise ValueError("need r >= 1 and g >= 1")
    threshold = r * (r - 1) * (g - 1)
    spec = f"rank 2: p > 2g - 2 = {2 * g - 2}" if r == 2 else None
    return AssumptionReport(p, r, g, threshold, p > threshold, spec)


@dataclass(frozen=True)
class ChainLink:
    label: str
    lhs: int
    rhs: int
    holds: bool

    def to_json(self) -> dict:
        return {"label": self.label, "lhs": self.lhs, "rhs": self.rhs, "holds": self.holds}


@dataclass(frozen=True)
class ChainReport:
    p: int
    m: int
    d: int
    g: int
    links: tuple[ChainLink, ...]
    assumption: AssumptionReport

    @property
    def all_links_hold(self) -> bool:
        return all(link.holds for link in self.links)

    @property
    def assumption_violated(self) -> bool:
        return not self.assumption.holds

    def to_json(self) -> dict:
        return {
            "p": self.p,
            "m": self.m,
            "d": self.d,
            "g": self.g,
            "links": [link.to_json() for link in self.links],
            "all_links_hold": self.all_links_hold,
            "assumption": self.assumption.to_json(),
            "assumption_violated": self.assumption_violated,
        }


def hw_chain_check(p: int, m: int, d: int) -> ChainReport:
    """Evaluate the genus chain for rank-2 bundles on the Fermat curve of degree ``d``.

    ``g = (d-1)(d-2)/2`` and the links
    ``2(g-1) >= 2p^m(2p^m-1) - 2 >= 4p^2 - 2p - 2 >= p`` are each checked.
    """
    _require_prime(p)
    if m < 1:
        raise ValueError("m must be >= 1")
    q = p**m
    if not 2 * q < d < 3 * q:
        raise ValueError(f"d must satisfy {2 * q} < d < {3 * q}")
    if d % p == 0:
        raise ValueError("d must be prime to p")
    g = (d - 1) * (d - 2) // 2
    a = 2 * (g - 1)
    b = 2 * q * (2 * q - 1) - 2
    c = 4 * p * p - 2 * p - 2
    links = (
        ChainLink("2(g-1) >= 2p^m(2p^m-1)-2", a, b, a >= b),
        ChainLink("2p^m(2p^m-1)-2 >= 4p^2-2p-2", b, c, b >= c),
        ChainLink("4p^2-2p-2 >= p", c, p, c >= p),
    )
    return ChainReport(p, m, d, g, links, assumption_check(p, 2, g))


def _frac(x: Fraction) -> str:
    x = Fraction(x)
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


def check_weighted_bounds(seq: Sequence[int]) -> tuple[bool, bool]:
    """``(2 sum l r_l <= h m, 2 sum l r_l <= h (h - 1))`` for a rank sequence."""
    s = RankSequence(tuple(seq))
    h = s.total
    return s.weighted_sum <= h * s.m, s.weighted_sum <= h * (h - 1)
