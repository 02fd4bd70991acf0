"""Reduced words in a free product of two groups amalgamated over a common subgroup.

Words are read left to right as products; acting on points, the rightmost
letter is applied first.
"""

from __future__ import annotations

import logging
from abc import ABC, abstractmethod
from dataclasses import dataclass
from typing import Generic, Iterable, Iterator, List, Optional, Sequence, Tuple, TypeVar

from domain.errors import InvalidElementError, NotCommutingError, ZeroInputError

LOGGER = logging.getLogger("sim.amalgam")

E = TypeVar("E")


class FactorGroup(ABC, Generic[E]):
    """Capabilities the word engine needs from each factor."""

    tag: str

    @abstractmethod
    def compose(self, a: E, b: E) -> E:
        """The product ``a * b``."""

    @abstractmethod
    def invert(self, a: E) -> E: ...

    @abstractmethod
    def identity(self) -> E: ...

    @abstractmethod
    def is_identity(self, a: E) -> bool: ...

    @abstractmethod
    def is_in_amalgam(self, a: E) -> bool:
        """Membership in the subgroup shared with the other factor."""

    @abstractmethod
    def transfer(self, a: E) -> object:
        """Re-express an amalgam member as an element of the other factor."""

    def describe(self, a: E) -> str:
        return f"{self.tag}({a})"


@dataclass(frozen=True)
class Letter:
    tag: str
    elem: object


@dataclass(frozen=True)
class Word:
    letters: Tuple[Letter, ...] = ()

    def __len__(self) -> int:
        return len(self.letters)

    def __iter__(self) -> Iterator[Letter]:
        return iter(self.letters)

    @property
    def first(self) -> Letter:
        return self.letters[0]

    @property
    def last(self) -> Letter:
        return self.letters[-1]

    def tags(self) -> Tuple[str, ...]:
        return tuple(letter.tag for letter in self.letters)


EMPTY_WORD = Word()


@dataclass(frozen=True)
class ParityReport:
    length_first: int
    length_second: int
    same_parity: bool


class AmalgamatedProduct:
    """Word engine for ``first *_C second`` over the two factor interfaces."""

    def __init__(self, first: FactorGroup, second: FactorGroup) -> None:
        if first.tag == second.tag:
            raise ValueError(f"factor tags must differ, both are {first.tag!r}")
        self._factors = {first.tag: first, second.tag: second}
        self.first = first
        self.second = second

    # ------------------------------------------------------------------
    # Letters and words
    # ------------------------------------------------------------------
    def letter_factor(self, tag: str) -> FactorGroup:
        try:
            return self._factors[tag]
        except KeyError as exc:
            raise InvalidElementError(f"unknown factor tag {tag!r}") from exc

    def letter(self, tag: str, elem: object) -> Letter:
        self.letter_factor(tag)
        return Letter(tag, elem)

    def word(self, *letters: Letter) -> Word:
        for letter in letters:
            self.letter_factor(letter.tag)
        return Word(tuple(letters))

    def describe(self, w: Word) -> str:
        if not w.letters:
            return "1"
        return " * ".join(self.letter_factor(l.tag).describe(l.elem) for l in w.letters)

    # ------------------------------------------------------------------
    # Reduction
    # ------------------------------------------------------------------
    def reduce(self, w: Word) -> Word:
        stack: List[Letter] = []
        for incoming in w.letters:
            current: Optional[Letter] = incoming
            while current is not None:
                factor = self.letter_factor(current.tag)
                if factor.is_identity(current.elem):
                    current = None
                    break
                if not stack:
                    stack.append(current)
                    break
                top = stack[-1]
                if top.tag == current.tag:
                    stack.pop()
                    current = Letter(current.tag, factor.compose(top.elem, current.elem))
                    continue
                if factor.is_in_amalgam(current.elem):
                    current = Letter(top.tag, factor.transfer(current.elem))
                    continue
                top_factor = self.letter_factor(top.tag)
                if top_factor.is_in_amalgam(top.elem):
                    stack.pop()
                    moved = top_factor.transfer(top.elem)
                    current = Letter(current.tag, factor.compose(moved, current.elem))
                    continue
                stack.append(current)
                break
        return Word(tuple(stack))

    def length(self, w: Word) -> int:
        return len(self.reduce(w))

    def max_length(self, words: Iterable[Word]) -> int:
        """Largest reduced length over ``words``; 0 for an empty collection."""

        return max((self.length(w) for w in words), default=0)

    def is_identity(self, w: Word) -> bool:
        return self.length(w) == 0

    def equal(self, u: Word, v: Word) -> bool:
        return self.is_identity(self.multiply(u, self.inverse(v)))

    # ------------------------------------------------------------------
    # Group operations
    # ------------------------------------------------------------------
    def multiply(self, *words: Word) -> Word:
        letters: Tuple[Letter, ...] = ()
        for w in words:
            letters += w.letters
        return self.reduce(Word(letters))

    def inverse(self, w: Word) -> Word:
        return Word(
            tuple(
                Letter(l.tag, self.letter_factor(l.tag).invert(l.elem))
                for l in reversed(w.letters)
            )
        )

    def power(self, w: Word, n: int) -> Word:
        base = w if n >= 0 else self.inverse(w)
        result = EMPTY_WORD
        for _ in range(abs(n)):
            result = self.multiply(result, base)
        return result

    def commutator(self, u: Word, v: Word) -> Word:
        return self.multiply(u, v, self.inverse(u), self.inverse(v))

    # ------------------------------------------------------------------
    # Cyclic structure
    # ------------------------------------------------------------------
    def is_cyclically_reduced(self, w: Word) -> bool:
        reduced = self.reduce(w)
        return len(reduced) <= 1 or reduced.first.tag != reduced.last.tag

    def cyclic_reduce(self, w: Word) -> Tuple[Word, Word]:
        """Return ``(c, core)`` with ``w = c * core * c^-1`` and ``core`` cyclically reduced."""

        conjugator = EMPTY_WORD
        core = self.reduce(w)
        while len(core) >= 2 and core.first.tag == core.last.tag:
            head = Word((core.first,))
            conjugator = self.multiply(conjugator, head)
            core = self.multiply(self.inverse(head), core, head)
        LOGGER.debug(
            "cyclic_reduce: length %d -> core %d, conjugator %d",
            len(w),
            len(core),
            len(conjugator),
        )
        return conjugator, core

    def conjugate_into_factor(self, w: Word) -> Optional[Tuple[Word, Optional[Letter]]]:
        """Conjugate ``w`` into a single factor when possible.

        Returns ``(c, letter)`` with ``c^-1 * w * c`` equal to ``letter`` (``None`` for
        the identity), or ``None`` when the cyclic core has length at least 2.
        """

        conjugator, core = self.cyclic_reduce(w)
        if len(core) > 1:
            return None
        return conjugator, (core.first if core.letters else None)

    def parity_check(self, g1: Word, g2: Word) -> ParityReport:
        if not self.is_identity(self.commutator(g1, g2)):
            raise NotCommutingError("parity_check needs commuting words")
        length_first = self.length(g1)
        length_second = self.length(g2)
        if length_first == 0 or length_second == 0:
            raise ZeroInputError("parity_check needs words of length at least 1")
        return ParityReport(
            length_first=length_first,
            length_second=length_second,
            same_parity=length_first % 2 == length_second % 2,
        )


def alternating_tags(first: str, second: str, length: int) -> Sequence[str]:
    return [first if index % 2 == 0 else second for index in range(length)]


__all__ = [
    "FactorGroup",
    "Letter",
    "Word",
    "EMPTY_WORD",
    "ParityReport",
    "AmalgamatedProduct",
    "alternating_tags",
]
