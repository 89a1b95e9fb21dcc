"""Transfer digraph on correct words and its (min, +) adjacency matrix.

A word ``p`` can follow ``q`` when ``p`` is a legal labelling of the column
after ``q``. The arc label ``5 * zeros(p) - nd(q, p)`` charges each chosen
vertex five units and refunds one per vertex it dominates first, so the label
sum around a closed walk is the wasted domination of the encoded set.
"""

from __future__ import annotations

from dataclasses import dataclass

import numba
import numpy as np

from .errors import BoundsError, DimensionError, RelationError
from .tropical import DTYPE, INF, TropicalMatrix
from .words import WordLike, as_word, count_correct_words, enumerate_correct_words, word_zeros

MIN_ROWS = 2
MAX_MATRIX_ROWS = 13
DEFAULT_MAX_BYTES = 4 << 30

PREV, SELF, NEXT, BELOW = "prev", "self", "next", "below"


@dataclass(frozen=True)
class NewlyDominatedResult:
    count: int
    cells: frozenset  # of (row, offset) with offset in PREV/SELF/NEXT/BELOW


def _pair(q: WordLike, p: WordLike):
    q, p = as_word(q), as_word(p)
    if q.r != p.r:
        raise DimensionError(f"word lengths differ: {q.r} vs {p.r}")
    if q.r < MIN_ROWS:
        raise BoundsError(f"follow rules need at least {MIN_ROWS} rows, got {q.r}")
    return q.digits, p.digits


def _follows(y, x) -> bool:
    r = len(y)
    for i in range(r):
        if y[i] == 0:
            if x[i] == 2:
                return False
        elif y[i] == 1 or i == r - 1:
            # rule 2, and rule 4 on the last row: a 1 needs a 0 above or below
            if x[i] == 1 and not ((i > 0 and x[i - 1] == 0) or (i < r - 1 and x[i + 1] == 0)):
                return False
        elif x[i] != 0:
            return False
    return True


def can_follow(q: WordLike, p: WordLike) -> bool:
    """True when column word ``p`` may come right after column word ``q``."""
    y, x = _pair(q, p)
    return _follows(y, x)


def newly_dominated(q: WordLike, p: WordLike) -> NewlyDominatedResult:
    """Vertices first dominated when column ``p`` is appended after ``q``.

    ``prev`` cells sit in the column of ``q``, ``self`` cells in the column of
    ``p``, ``next`` cells in the column after ``p`` and ``below`` is the outer
    row under the last row of ``p``.
    """
    y, x = _pair(q, p)
    if not _follows(y, x):
        raise RelationError(f"{''.join(map(str, x))} cannot follow {''.join(map(str, y))}")
    r = len(y)
    cells = set()
    for i in range(r):
        if x[i] == 0 and y[i] == 2:
            cells.add((i, PREV))
        if x[i] <= 1 and y[i] >= 1:
            cells.add((i, SELF))
        if x[i] == 0:
            cells.add((i, NEXT))
    if x[r - 1] == 0:
        cells.add((r - 1, BELOW))
    return NewlyDominatedResult(len(cells), frozenset(cells))


def arc_label(q: WordLike, p: WordLike) -> int:
    return 5 * word_zeros(p) - newly_dominated(q, p).count


@numba.njit(parallel=True, cache=True)
def _fill(digits, out):
    n, r = digits.shape
    for a in numba.prange(n):
        y = digits[a]
        for b in range(n):
            x = digits[b]
            ok = True
            for i in range(r):
                yi = y[i]
                xi = x[i]
                if yi == 0:
                    if xi == 2:
                        ok = False
                        break
                elif yi == 1 or i == r - 1:
                    if xi == 1:
                        up = i > 0 and x[i - 1] == 0
                        down = i < r - 1 and x[i + 1] == 0
                        if not (up or down):
                            ok = False
                            break
                elif xi != 0:
                    ok = False
                    break
            if not ok:
                continue
            zeros = 0
            nd = 0
            for i in range(r):
                yi = y[i]
                xi = x[i]
                if xi == 0:
                    zeros += 1
                    nd += 1
                    if yi == 2:
                        nd += 1
                if xi <= 1 and yi >= 1:
                    nd += 1
            if x[r - 1] == 0:
                nd += 1
            out[a, b] = 5 * zeros - nd


def matrix_bytes(r: int) -> int:
    alpha = count_correct_words(r)
    return alpha * alpha * np.dtype(DTYPE).itemsize


def build_transfer_matrix(r: int, max_bytes: int = DEFAULT_MAX_BYTES) -> TropicalMatrix:
    """Dense (min, +) adjacency matrix of the transfer digraph, indexed in word-table order."""
    if not MIN_ROWS <= r <= MAX_MATRIX_ROWS:
        raise BoundsError(
            f"rows must be in [{MIN_ROWS}, {MAX_MATRIX_ROWS}], got {r} "
            f"(dense matrix would need {matrix_bytes(max(r, 1)) / 2**20:.0f} MiB)"
        )
    need = matrix_bytes(r)
    if need > max_bytes:
        raise BoundsError(
            f"rows={r} needs a {count_correct_words(r)}-square matrix of "
            f"{need / 2**20:.0f} MiB, above the {max_bytes / 2**20:.0f} MiB budget"
        )
    table = enumerate_correct_words(r)
    out = np.full((len(table), len(table)), INF, dtype=DTYPE)
    _fill(np.ascontiguousarray(table.digits), out)
    return TropicalMatrix(out, r=r, power=1)


def successors(q: WordLike) -> list:
    """All words that can follow ``q``, in lexicographic order."""
    q = as_word(q)
    return [p for p in enumerate_correct_words(q.r) if can_follow(q, p)]
