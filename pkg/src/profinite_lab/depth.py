"""Depth-function experiments on L(A) at the level of moduli.

Adding a^N = a^^N = 1 to L(A) identifies u_x with u_{x+kN}, so u_x u^_x^-1
survives the quotient exactly when the whole class x + N*Z stays inside B.
The growth of the smallest surviving N with the halting time of the
relevant machine is what these reports show.
"""

from __future__ import annotations

from dataclasses import dataclass

from .halting_set import COVER_BUDGET, HaltingSet, UnknownWithinBudget, covered_by_b, known_b_balls
from .profinite import BUDGET_EXHAUSTED, Progression, find_uncovered, theta


@dataclass(frozen=True)
class QuotientVerdict:
    x: int
    modulus: int
    identity_in_quotient: bool
    # some k with x + k*modulus in A, when identity_in_quotient
    shift: int | None = None


@dataclass(frozen=True)
class DepthRow:
    x: int
    word_length: int
    witness_modulus: int | None
    certificate: str


def word_length(x: int) -> int:
    """Length of u_x u^_x^-1 as a word in a, a^, e, e^."""
    return 4 * abs(x) + 2


def default_schedule(limit: int = 20) -> list[int]:
    """Distinct values of theta(s), s = 1..limit, ascending."""
    return sorted({theta(s) for s in range(1, limit + 1)})


def quotient_kill_shifts(hs: HaltingSet, x: int, modulus: int, budget: int) -> QuotientVerdict | object:
    """Does u_x u^_x^-1 become trivial once a^N and a^^N are killed?

    Returns BUDGET_EXHAUSTED when neither a shift into A nor a covering of
    x + N*Z by B can be exhibited with ``budget`` simulated steps.
    """
    if modulus < 1:
        raise ValueError(f"modulus must be positive, got {modulus}")
    if hs.member_a(x):
        return QuotientVerdict(x, modulus, True, 0)
    cls = Progression(x, modulus)
    known, complete = known_b_balls(hs, cls, budget)
    hole = find_uncovered(cls, known, COVER_BUDGET)
    if hole is None:
        return QuotientVerdict(x, modulus, False)
    if not (isinstance(hole, Progression) and complete):
        # anything outside every closed ball t_n + m_n*Z is in A
        shells = [hs.xn_params(n).closed_ball for n in range(1, len(hs.registry) + 1)]
        hole = find_uncovered(cls, shells, COVER_BUDGET)
    if isinstance(hole, Progression):
        return QuotientVerdict(x, modulus, True, (hole.residue - x) // modulus)
    for k in _alternating(budget):
        if hs.member_a(x + k * modulus):
            return QuotientVerdict(x, modulus, True, k)
    return BUDGET_EXHAUSTED


def _alternating(bound: int):
    for k in range(1, bound + 1):
        yield k
        yield -k


def depth_table(
    hs: HaltingSet, xs: list[int], schedule: list[int] | None = None, budget: int = 10**4
) -> list[DepthRow]:
    """Smallest schedule modulus N with x + N*Z verified inside B, per x in B."""
    if schedule is None:
        schedule = default_schedule()
    if not schedule:
        raise ValueError("schedule must not be empty")
    schedule = sorted(set(schedule))
    rows = []
    for x in xs:
        length = word_length(x)
        answer = hs.member_b(x)
        if not answer.verdict:
            rows.append(DepthRow(x, length, None, "skipped: x in A, u_x u^_x^-1 is trivial"))
            continue
        if isinstance(hs.openness_witness(x, budget), UnknownWithinBudget):
            rows.append(DepthRow(x, length, None, f"unknown: no witness within {budget} steps"))
            continue
        for modulus in schedule:
            if covered_by_b(hs, Progression(x, modulus), budget) is True:
                rows.append(DepthRow(x, length, modulus, f"{x} + {modulus}Z covered by B"))
                break
        else:
            rows.append(DepthRow(x, length, None, "no schedule modulus is covered"))
    return rows
