"""Lamplighter group arithmetic and the word problem for the amalgam L(A).

Elements of L = Z wr Z/2 are pairs ``(lamps, shift)`` read as
``(prod of u_i for i in lamps) * a**shift`` with u_i = a^i e a^-i.  L(A)
glues L to a second copy L^ along u_i = u^_i for i in A; words are written
with the ASCII aliases a, A (a^-1), e, b (a^), B (a^^-1), f (e^).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Iterable, Sequence

L, LHAT = "L", "L^"

FACTOR_OF = {"a": L, "A": L, "e": L, "b": LHAT, "B": LHAT, "f": LHAT}
INVERSE_TOKEN = {"a": "A", "A": "a", "e": "e", "b": "B", "B": "b", "f": "f"}
HAT = {"a": "b", "A": "B", "e": "f"}
UNHAT = {v: k for k, v in HAT.items()}


class WordSyntaxError(ValueError):
    def __init__(self, char: str, position: int):
        self.char = char
        self.position = position
        super().__init__(f"unknown generator {char!r} at position {position}")


@dataclass(frozen=True)
class LampElement:
    lamps: frozenset[int] = frozenset()
    shift: int = 0

    def __mul__(self, other: LampElement) -> LampElement:
        moved = frozenset(i + self.shift for i in other.lamps)
        return LampElement(self.lamps ^ moved, self.shift + other.shift)

    def inverse(self) -> LampElement:
        return LampElement(frozenset(i - self.shift for i in self.lamps), -self.shift)

    def is_identity(self) -> bool:
        return not self.lamps and self.shift == 0

    def __str__(self) -> str:
        lamps = ", ".join(map(str, sorted(self.lamps)))
        return f"({{{lamps}}}, {self.shift})"


IDENTITY = LampElement()
GENERATORS = {
    "a": LampElement(shift=1),
    "A": LampElement(shift=-1),
    "e": LampElement(frozenset({0})),
}


def lamp(i: int) -> LampElement:
    """u_i: a single lit lamp at position i."""
    return LampElement(frozenset({i}))


def parse_word(text: str) -> tuple[str, ...]:
    tokens = []
    for pos, ch in enumerate(text):
        if ch.isspace():
            continue
        if ch not in FACTOR_OF:
            raise WordSyntaxError(ch, pos)
        tokens.append(ch)
    return tuple(tokens)


def inverse_word(tokens: Sequence[str]) -> tuple[str, ...]:
    return tuple(INVERSE_TOKEN[t] for t in reversed(tokens))


def hat_word(tokens: Iterable[str]) -> tuple[str, ...]:
    """Copy of an L-word in the hatted factor."""
    return tuple(HAT[t] for t in tokens)


def lamp_word(i: int) -> tuple[str, ...]:
    """The word a^i e a^-i (length 2|i| + 1)."""
    up, down = ("a", "A") if i >= 0 else ("A", "a")
    return (up,) * abs(i) + ("e",) + (down,) * abs(i)


def eval_factor(tokens: Sequence[str]) -> LampElement:
    """Evaluate a word whose letters all come from one factor."""
    factors = {FACTOR_OF[t] for t in tokens}
    if len(factors) > 1:
        raise ValueError("word mixes letters of L and L^")
    result = IDENTITY
    for t in tokens:
        result = result * GENERATORS[UNHAT.get(t, t)]
    return result


@dataclass(frozen=True)
class Syllable:
    factor: str
    element: LampElement

    def __str__(self) -> str:
        return f"{self.factor}{self.element}"


class Amalgam:
    """L(A) for a set A given by a membership oracle on integers."""

    def __init__(self, in_a: Callable[[int], bool]):
        self.in_a = in_a

    def in_amalgamated_subgroup(self, x: LampElement) -> bool:
        return x.shift == 0 and all(self.in_a(i) for i in x.lamps)

    def syllables(self, tokens: Sequence[str]) -> list[Syllable]:
        """Evaluate maximal single-factor runs of a word."""
        out, run = [], []
        for t in tokens:
            if run and FACTOR_OF[t] != FACTOR_OF[run[-1]]:
                out.append(Syllable(FACTOR_OF[run[0]], eval_factor(run)))
                run = []
            run.append(t)
        if run:
            out.append(Syllable(FACTOR_OF[run[0]], eval_factor(run)))
        return out

    def normal_form(self, tokens: Sequence[str], strategy: str = "leftmost") -> list[Syllable]:
        """Reduce to an alternating sequence of syllables outside the subgroup.

        Rewrites, applied one at a time until none applies: drop an identity
        syllable, multiply two neighbours from the same factor, move a
        subgroup syllable into the other factor.  ``strategy`` picks the
        leftmost or rightmost applicable position.
        """
        if strategy not in ("leftmost", "rightmost"):
            raise ValueError(f"unknown strategy {strategy!r}")
        syls = self.syllables(tokens)
        while self._rewrite(syls, strategy == "rightmost"):
            pass
        if len(syls) == 1 and syls[0].factor == LHAT and self.in_amalgamated_subgroup(syls[0].element):
            syls[0] = Syllable(L, syls[0].element)
        return syls

    def _rewrite(self, syls: list[Syllable], from_right: bool) -> bool:
        positions = range(len(syls) - 1, -1, -1) if from_right else range(len(syls))
        for i in positions:
            s = syls[i]
            if s.element.is_identity():
                del syls[i]
                return True
            j = i - 1 if from_right else i + 1
            if 0 <= j < len(syls) and syls[j].factor == s.factor:
                lo = min(i, j)
                syls[lo : lo + 2] = [Syllable(s.factor, syls[lo].element * syls[lo + 1].element)]
                return True
            if len(syls) > 1 and self.in_amalgamated_subgroup(s.element):
                other = LHAT if s.factor == L else L
                syls[i] = Syllable(other, s.element)
                return True
        return False

    def is_trivial(self, tokens: Sequence[str], strategy: str = "leftmost") -> bool:
        return not self.normal_form(tokens, strategy)


def defining_relators(in_a: Callable[[int], bool], bound: int) -> Iterable[tuple[str, tuple[str, ...]]]:
    """Relators of the presentation of L(A) with indices in [-bound, bound]."""
    for hat in (False, True):
        wrap = hat_word if hat else tuple
        name = "e^" if hat else "e"
        yield f"{name}^2", wrap(("e", "e"))
        for i in range(-bound, bound + 1):
            u = lamp_word(i)
            yield f"[{name}, u_{i}]", wrap(("e",) + u + ("e",) + inverse_word(u))
    for j in range(-bound, bound + 1):
        if in_a(j):
            yield f"u_{j} = u^_{j}", identification_word(j)


def identification_word(j: int) -> tuple[str, ...]:
    """u_j (u^_j)^-1."""
    u = lamp_word(j)
    return u + inverse_word(hat_word(u))
