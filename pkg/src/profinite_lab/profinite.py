"""Exact profinite metric on the integers.

Norm values live in ``{0} | {1/n : n >= 1}`` and are returned as
:class:`fractions.Fraction`.  Balls of the metric are residue classes
``c + M*Z`` and are represented by :class:`Progression`.
"""

from __future__ import annotations

import enum
import functools
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Iterator, Sequence


class Undetermined(enum.Enum):
    """Non-answer returned by budgeted decision procedures."""

    BUDGET_EXHAUSTED = "budget-exhausted"

    def __str__(self) -> str:
        return self.value


BUDGET_EXHAUSTED = Undetermined.BUDGET_EXHAUSTED


def _is_prime(p: int) -> bool:
    if p < 2:
        return False
    if p % 2 == 0:
        return p == 2
    d = 3
    while d * d <= p:
        if p % d == 0:
            return False
        d += 2
    return True


def primes() -> Iterator[int]:
    """Yield 2, 3, 5, 7, ... indefinitely."""
    yield 2
    p = 3
    while True:
        if _is_prime(p):
            yield p
        p += 2


def _prime_powers() -> Iterator[int]:
    # ascending order: 2, 3, 4, 5, 7, 8, 9, 11, ...
    q = 2
    while True:
        n, p = q, None
        for d in range(2, math.isqrt(n) + 1):
            if n % d == 0:
                p = d
                break
        if p is None:
            yield q
        else:
            while n % p == 0:
                n //= p
            if n == 1:
                yield q
        q += 1


@functools.lru_cache(maxsize=None)
def theta(n: int) -> int:
    """Return lcm(1, 2, ..., n) as a product of maximal prime powers."""
    if n < 1:
        raise ValueError(f"theta needs n >= 1, got {n}")
    result = 1
    for p in primes():
        if p > n:
            break
        q = p
        while q * p <= n:
            q *= p
        result *= q
    return result


def norm(x: int) -> Fraction:
    """Profinite norm: 0 for x == 0, else 1/n with n maximal s.t. 1..n all divide x.

    The smallest integer not dividing a nonzero x is always a prime power,
    so only prime powers are scanned.
    """
    if x == 0:
        return Fraction(0)
    for q in _prime_powers():
        if x % q:
            return Fraction(1, q - 1)
    raise AssertionError("unreachable")


def dist(x: int, y: int) -> Fraction:
    return norm(x - y)


def as_radius(r: Fraction | int | str) -> Fraction:
    """Coerce to an exact positive rational radius."""
    value = Fraction(r)
    if value <= 0:
        raise ValueError(f"radius must be positive, got {value}")
    return value


@dataclass(frozen=True, order=True)
class Progression:
    """The residue class ``residue + modulus * Z``, stored with 0 <= residue < modulus."""

    residue: int
    modulus: int

    def __post_init__(self) -> None:
        if self.modulus < 1:
            raise ValueError(f"modulus must be positive, got {self.modulus}")
        if not 0 <= self.residue < self.modulus:
            object.__setattr__(self, "residue", self.residue % self.modulus)

    def __contains__(self, x: int) -> bool:
        return (x - self.residue) % self.modulus == 0

    def __str__(self) -> str:
        return f"{self.residue} + {self.modulus}Z"

    def intersects(self, other: Progression) -> bool:
        g = math.gcd(self.modulus, other.modulus)
        return (self.residue - other.residue) % g == 0

    def density_in(self, other: Progression) -> Fraction:
        """Fraction of ``other`` lying in ``self`` (0 if disjoint)."""
        if not self.intersects(other):
            return Fraction(0)
        return Fraction(other.modulus, math.lcm(self.modulus, other.modulus))

    def split(self, factor: int) -> list[Progression]:
        """Partition into ``factor`` classes modulo ``factor * modulus``."""
        big = self.modulus * factor
        return [Progression(self.residue + i * self.modulus, big) for i in range(factor)]


def closed_ball(x: int, n: int) -> Progression:
    """Closed ball of radius 1/n around x."""
    if n < 1:
        raise ValueError(f"closed_ball needs n >= 1, got {n}")
    return Progression(x, theta(n))


def open_threshold(r: Fraction | int | str) -> int:
    """Smallest s with 1/s < r; then ||z|| < r iff theta(s) divides z."""
    r = as_radius(r)
    return math.floor(1 / r) + 1


def open_ball(x: int, r: Fraction | int | str) -> Progression:
    """Open ball {y : dist(x, y) < r}."""
    return Progression(x, theta(open_threshold(r)))


def progression_contains(p: Progression, x: int) -> bool:
    return x in p


def progression_subset(p: Progression, q: Progression) -> bool:
    """True iff p is contained in q."""
    return p.modulus % q.modulus == 0 and (p.residue - q.residue) % q.modulus == 0


def _smallest_factor(n: int, limit: int = 10_000) -> int:
    for d in range(2, min(limit, math.isqrt(n)) + 1):
        if n % d == 0:
            return d
    return n


def find_uncovered(
    p: Progression, qs: Iterable[Progression], budget: int
) -> Progression | None | Undetermined:
    """Return a residue class inside ``p`` that meets none of ``qs``.

    ``None`` means ``p`` is covered by the union of ``qs``.  The search
    refines ``p`` one prime factor at a time; every class visited counts
    against ``budget``.  When the relative densities of the ``qs`` inside a
    class sum to less than one, the class cannot be covered and only its
    sparsest child is followed.
    """
    if budget < 1:
        raise ValueError("budget must be positive")
    qs = list(qs)
    visited = 0
    stack = [p]
    while stack:
        cls = stack.pop()
        visited += 1
        if visited > budget:
            return BUDGET_EXHAUSTED
        live = [q for q in qs if q.intersects(cls)]
        if any(progression_subset(cls, q) for q in live):
            continue
        if not live:
            return cls
        # live classes that do not contain cls have modulus not dividing cls.modulus
        ratio = min(q.modulus // math.gcd(q.modulus, cls.modulus) for q in live)
        factor = _smallest_factor(ratio)
        if visited + factor > budget:
            return BUDGET_EXHAUSTED
        children = cls.split(factor)
        if sum(q.density_in(cls) for q in live) < 1:
            # uncovered mass survives in the sparsest child
            stack.append(min(children, key=lambda c: sum(q.density_in(c) for q in live)))
        else:
            stack.extend(reversed(children))
    return None


def progression_covered_by(
    p: Progression, qs: Sequence[Progression], budget: int = 10**6
) -> bool | Undetermined:
    """Decide whether ``p`` is contained in the union of ``qs``."""
    found = find_uncovered(p, qs, budget)
    if found is BUDGET_EXHAUSTED:
        return BUDGET_EXHAUSTED
    return found is None
