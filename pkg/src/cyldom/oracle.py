"""Brute-force ground truth on small cylinders.

Everything here works on explicit vertex sets and raw subset enumeration. The
wasted-domination search deliberately shares no code with the transfer
matrix, so agreement between the two is a real check.

Vertices are ``(row, column)`` pairs. Columns wrap modulo ``cols``; rows do
not. A border strip of ``rows`` rows sits inside an outer cylinder with one
extra row underneath, and its inner cylinder is the first ``rows - 1`` rows.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from typing import Iterable, Iterator, Sequence

from .errors import BoundsError, EncodingError

GAMMA_LIMIT = 24
WASTED_LIMIT = 18


@dataclass(frozen=True)
class CylinderDims:
    """``P_m x C_n``: ``m`` rows (path direction) and ``n`` columns (cycle direction)."""

    m: int
    n: int

    def __post_init__(self):
        if self.m < 2 or self.n < 3:
            raise BoundsError(f"cylinder needs m >= 2 and n >= 3, got m={self.m}, n={self.n}")

    @property
    def order(self) -> int:
        return self.m * self.n


@dataclass(frozen=True)
class VertexSet:
    rows: int
    cols: int
    members: frozenset

    def __post_init__(self):
        members = frozenset((int(i), int(j)) for i, j in self.members)
        object.__setattr__(self, "members", members)
        for i, j in members:
            if not (0 <= i < self.rows and 0 <= j < self.cols):
                raise ValueError(f"vertex ({i}, {j}) outside {self.rows}x{self.cols}")

    @classmethod
    def of(cls, rows: int, cols: int, members: Iterable) -> "VertexSet":
        return cls(rows, cols, frozenset(members))

    def __len__(self) -> int:
        return len(self.members)

    def __iter__(self):
        return iter(sorted(self.members))

    def __contains__(self, v) -> bool:
        return tuple(v) in self.members


@dataclass(frozen=True)
class WastedResult:
    set: VertexSet
    closed_neighborhood_size: int
    wasted: int


def _closed(i: int, j: int, rows: int, cols: int, depth: int) -> list:
    """Closed neighbourhood of ``(i, j)`` among rows ``0..depth-1``."""
    out = [(i, j), (i, (j - 1) % cols), (i, (j + 1) % cols)]
    if i > 0:
        out.append((i - 1, j))
    if i + 1 < depth:
        out.append((i + 1, j))
    return out


def closed_neighborhood(s: VertexSet, outer: bool = False) -> VertexSet:
    """``N[S]``; with ``outer`` the row under the set's last row is included."""
    depth = s.rows + 1 if outer else s.rows
    found = set()
    for i, j in s.members:
        found.update(_closed(i, j, s.rows, s.cols, depth))
    return VertexSet(depth, s.cols, frozenset(found))


def is_dominating(s: VertexSet) -> bool:
    return len(closed_neighborhood(s)) == s.rows * s.cols


def wasted(s: VertexSet) -> int:
    """``5|S| - |N[S]|`` with the neighbourhood taken in the same cylinder."""
    return 5 * len(s) - len(closed_neighborhood(s))


def _vertex_index(rows: int, cols: int) -> list:
    return [(i, j) for i in range(rows) for j in range(cols)]


def brute_force_gamma(dims: CylinderDims) -> int:
    """Exact domination number, trying cardinalities upward."""
    m, n = dims.m, dims.n
    if m * n > GAMMA_LIMIT:
        raise BoundsError(f"brute force needs m*n <= {GAMMA_LIMIT}, got {m * n}")
    verts = _vertex_index(m, n)
    pos = {v: k for k, v in enumerate(verts)}
    masks = []
    for i, j in verts:
        bits = 0
        for u in _closed(i, j, m, n, m):
            bits |= 1 << pos[u]
        masks.append(bits)
    full = (1 << (m * n)) - 1
    for size in range(1, m * n + 1):
        for combo in combinations(masks, size):
            covered = 0
            for b in combo:
                covered |= b
            if covered == full:
                return size
    return m * n  # unreachable: the whole vertex set dominates


def brute_force_wasted_min(r: int, n: int) -> WastedResult:
    """Minimum ``w(R)`` over almost-dominating sets ``R`` of the strip ``P_r x C_n``.

    ``R`` must dominate rows ``0..r-2``; ``N[R]`` is counted in the outer
    cylinder with ``r + 1`` rows. Ties go to the lexicographically smallest
    sorted vertex list.
    """
    if r < 2 or n < 3:
        raise BoundsError(f"strip needs r >= 2 and n >= 3, got r={r}, n={n}")
    if r * n > WASTED_LIMIT:
        raise BoundsError(f"brute force needs r*n <= {WASTED_LIMIT}, got {r * n}")
    verts = _vertex_index(r, n)
    outer_pos = {v: k for k, v in enumerate(_vertex_index(r + 1, n))}
    nbr = []
    for i, j in verts:
        bits = 0
        for u in _closed(i, j, r, n, r + 1):
            bits |= 1 << outer_pos[u]
        nbr.append(bits)
    inner = (1 << ((r - 1) * n)) - 1  # rows 0..r-2 are the low bits

    size = len(verts)
    cover = [0] * (1 << size)
    best = None
    best_key = None
    for mask in range(1, 1 << size):
        low = (mask & -mask).bit_length() - 1
        cover[mask] = cover[mask & (mask - 1)] | nbr[low]
        if cover[mask] & inner != inner:
            continue
        w = 5 * mask.bit_count() - cover[mask].bit_count()
        if best is not None and w > best:
            continue
        key = tuple(verts[k] for k in range(size) if mask >> k & 1)
        if best is None or w < best or key < best_key:
            best, best_key = w, key
    witness = VertexSet(r, n, frozenset(best_key))
    return WastedResult(witness, 5 * len(witness) - best, best)


def is_almost_dominating(s: VertexSet) -> bool:
    inner = s.rows - 1
    covered = closed_neighborhood(s).members
    return all((i, j) in covered for i in range(inner) for j in range(s.cols))


def almost_dominating_sets(r: int, n: int) -> Iterator[VertexSet]:
    """Every almost-dominating set of the strip ``P_r x C_n`` (exhaustive)."""
    if r * n > WASTED_LIMIT:
        raise BoundsError(f"enumeration needs r*n <= {WASTED_LIMIT}, got {r * n}")
    verts = _vertex_index(r, n)
    for mask in range(1 << len(verts)):
        s = VertexSet(r, n, frozenset(v for k, v in enumerate(verts) if mask >> k & 1))
        if is_almost_dominating(s):
            yield s


def outer_neighborhood_size(s: VertexSet) -> int:
    return len(closed_neighborhood(s, outer=True))


def outer_wasted(s: VertexSet) -> int:
    return 5 * len(s) - outer_neighborhood_size(s)


def encode_words(s: VertexSet) -> list:
    """Label every strip vertex 0/1/2 and return the ``n`` column words.

    0: in the set; 1: has a set neighbour in its own column or in the previous
    column; 2: otherwise.
    """
    from .words import CorrectWord

    r, n, members = s.rows, s.cols, s.members
    cols = []
    for j in range(n):
        col = []
        for i in range(r):
            if (i, j) in members:
                col.append(0)
            elif (i - 1, j) in members or (i + 1, j) in members or (i, (j - 1) % n) in members:
                col.append(1)
            else:
                if i < r - 1 and (i, (j + 1) % n) not in members:
                    raise EncodingError(f"vertex ({i}, {j}) of the inner cylinder is not dominated (column {j})")
                col.append(2)
        cols.append(CorrectWord(tuple(col)))
    return cols


def decode_words(words: Sequence) -> VertexSet:
    """Inverse of :func:`encode_words`; consecutive words must satisfy the follow rules."""
    from .transfer import can_follow
    from .words import as_word

    words = [as_word(w) for w in words]
    if len(words) < 3:
        raise EncodingError(f"need at least 3 columns, got {len(words)}")
    r = words[0].r
    n = len(words)
    for j, w in enumerate(words):
        if w.r != r:
            raise EncodingError(f"column {j} has length {w.r}, expected {r}")
    for j in range(n):
        if not can_follow(words[j], words[(j + 1) % n]):
            raise EncodingError(f"column {(j + 1) % n} cannot follow column {j}")
    members = frozenset((i, j) for j, w in enumerate(words) for i, d in enumerate(w) if d == 0)
    return VertexSet(r, n, members)
