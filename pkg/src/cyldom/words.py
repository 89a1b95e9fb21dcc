"""Correct words: ternary column states with no ``02`` or ``20`` factor.

Digit meaning for one column of a border strip, top row first:

* ``0`` -- the vertex belongs to the set,
* ``1`` -- the vertex is dominated from its own column or the previous one,
* ``2`` -- the vertex still waits for a dominator in the next column.

Words are stored packed as base-3 integers with row 0 as the most significant
digit. For a fixed length this makes numeric order equal lexicographic order.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from typing import Iterator, Sequence, Union

import numpy as np

from .errors import BoundsError, DimensionError

MAX_ENUM_ROWS = 20

_FORBIDDEN = {(0, 2), (2, 0)}


@dataclass(frozen=True)
class CorrectWord:
    digits: tuple[int, ...]

    def __post_init__(self):
        digits = tuple(int(d) for d in self.digits)
        object.__setattr__(self, "digits", digits)
        if not digits:
            raise ValueError("a correct word needs at least one digit")
        for d in digits:
            if d not in (0, 1, 2):
                raise ValueError(f"digit {d!r} not in {{0, 1, 2}}")
        for a, b in zip(digits, digits[1:]):
            if (a, b) in _FORBIDDEN:
                raise ValueError(f"word {self._text(digits)} contains factor {a}{b}")

    @staticmethod
    def _text(digits) -> str:
        return "".join(str(d) for d in digits)

    @classmethod
    def parse(cls, text: str) -> "CorrectWord":
        return cls(tuple(int(c) for c in text.strip()))

    @property
    def r(self) -> int:
        return len(self.digits)

    @property
    def code(self) -> int:
        value = 0
        for d in self.digits:
            value = value * 3 + d
        return value

    def __len__(self) -> int:
        return len(self.digits)

    def __getitem__(self, i):
        return self.digits[i]

    def __iter__(self):
        return iter(self.digits)

    def __str__(self) -> str:
        return self._text(self.digits)


WordLike = Union[CorrectWord, Sequence[int], str]


def as_word(w: WordLike) -> CorrectWord:
    if isinstance(w, CorrectWord):
        return w
    if isinstance(w, str):
        return CorrectWord.parse(w)
    return CorrectWord(tuple(w))


def is_correct(digits: Sequence[int]) -> bool:
    """Plain predicate version of the :class:`CorrectWord` invariants."""
    if not digits or any(d not in (0, 1, 2) for d in digits):
        return False
    return all((a, b) not in _FORBIDDEN for a, b in zip(digits, digits[1:]))


def count_correct_words(r: int) -> int:
    """Number of correct words of length ``r`` via alpha(r) = 2 alpha(r-1) + alpha(r-2)."""
    if r < 0:
        raise BoundsError(f"word length must be nonnegative, got {r}")
    prev, cur = 1, 3  # alpha(0), alpha(1)
    if r == 0:
        return prev
    for _ in range(r - 1):
        prev, cur = cur, 2 * cur + prev
    return cur


def word_zeros(w: WordLike) -> int:
    return sum(1 for d in as_word(w) if d == 0)


def _decode_codes(codes: np.ndarray, r: int) -> np.ndarray:
    digits = np.empty((codes.shape[0], r), dtype=np.uint8)
    rest = codes.copy()
    for i in range(r - 1, -1, -1):
        digits[:, i] = rest % 3
        rest //= 3
    return digits


class WordTable:
    """All correct words of one length, in lexicographic order.

    ``codes`` is the sorted int64 array of packed words; ``digits`` is the
    matching ``(alpha, r)`` uint8 array, built on first access.
    """

    def __init__(self, r: int, codes: np.ndarray):
        self.r = r
        self.codes = codes
        self.codes.setflags(write=False)

    @cached_property
    def digits(self) -> np.ndarray:
        out = _decode_codes(self.codes, self.r)
        out.setflags(write=False)
        return out

    def __len__(self) -> int:
        return int(self.codes.shape[0])

    def __getitem__(self, i: int) -> CorrectWord:
        if not -len(self) <= i < len(self):
            raise IndexError(i)
        return CorrectWord(tuple(int(d) for d in _decode_codes(self.codes[[i]], self.r)[0]))

    def __iter__(self) -> Iterator[CorrectWord]:
        for i in range(len(self)):
            yield self[i]

    def strings(self) -> Iterator[str]:
        for row in self.digits:
            yield "".join(map(str, row))

    def index(self, w: WordLike) -> int:
        word = as_word(w)
        if word.r != self.r:
            raise DimensionError(f"word of length {word.r} in table of length {self.r}")
        code = word.code
        pos = int(np.searchsorted(self.codes, code))
        if pos >= len(self) or int(self.codes[pos]) != code:
            raise KeyError(str(word))
        return pos

    def __contains__(self, w) -> bool:
        try:
            self.index(w)
        except (KeyError, ValueError):
            return False
        return True

    def __repr__(self) -> str:
        return f"WordTable(r={self.r}, size={len(self)})"


def enumerate_correct_words(r: int) -> WordTable:
    """Build the lexicographically ordered table of correct words of length ``r``."""
    if not 1 <= r <= MAX_ENUM_ROWS:
        raise BoundsError(
            f"word length must be in [1, {MAX_ENUM_ROWS}], got {r} "
            f"(alpha({MAX_ENUM_ROWS}) = {count_correct_words(MAX_ENUM_ROWS)} states)"
        )
    codes = np.arange(3, dtype=np.int64)
    last = codes.copy()
    for _ in range(r - 1):
        parts = []
        for d in range(3):
            if d == 0:
                keep = last != 2
            elif d == 2:
                keep = last != 0
            else:
                keep = np.ones_like(last, dtype=bool)
            parts.append(codes[keep] * 3 + d)
        codes = np.sort(np.concatenate(parts))
        last = codes % 3
    return WordTable(r, codes)

