"""Lower and upper bounds for the domination number of ``P_m x C_n``.

All arithmetic is exact integer or :class:`fractions.Fraction`; ceilings and
floors go through integer division.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional

from .errors import BoundsError, ConstructionError, PartitionError
from .oracle import CylinderDims, VertexSet, is_dominating
from .scan import LTable

__all__ = [
    "BoundReport",
    "CylinderDims",
    "EXCEPTIONAL_N",
    "bound_report",
    "construction_upper_bound",
    "construction_upper_bound_exact",
    "diagonal_pattern_dominating_set",
    "grid_lower_bound",
    "grid_upper_bound",
    "known_gamma",
    "lower_bound_from_L",
    "theorem_bound",
]

# cycle lengths n >= 30 where two depth-10 border strips waste n + 1 instead of n
EXCEPTIONAL_N = frozenset({32, 33, 37, 38, 42, 43, 47, 48, 53, 58, 63})

# Known domination numbers for 16 <= m <= 22 and n >= m:
# gamma = ceil((m + 2) n / 5) + offset[n mod 5].
KNOWN_OFFSETS = {
    16: {0: 0, 1: 0, 2: 0, 3: 1, 4: 0},
    17: {0: 0, 1: 1, 2: 0, 3: 1, 4: 0},
    18: {0: 0, 1: 1, 2: 1, 3: 1, 4: 1},
    19: {0: 0, 1: 0, 2: 0, 3: 1, 4: 1},
    20: {0: 0, 1: 1, 2: 1, 3: 1, 4: 1},
    21: {0: 0, 1: 1, 2: 0, 3: 2, 4: 1},
    22: {0: 0, 1: 1, 2: 1, 3: 2, 4: 1},
}


def _ceil_div(a: int, b: int) -> int:
    return -(-a // b)


def _dims(dims) -> CylinderDims:
    if isinstance(dims, CylinderDims):
        return dims
    m, n = dims
    return CylinderDims(m, n)


def lower_bound_from_L(dims, ltable: LTable) -> int:
    """``ceil((2 L(n) + m n) / 5)`` using two border strips of depth ``ltable.r``."""
    d = _dims(dims)
    if d.m < 2 * ltable.r:
        raise PartitionError(f"m={d.m} cannot hold two disjoint strips of {ltable.r} rows")
    waste = 2 * ltable[d.n]
    return _ceil_div(waste + d.m * d.n, 5)


def theorem_bound(dims) -> int:
    d = _dims(dims)
    if d.m < 20 or d.n < 30:
        raise BoundsError(f"closed-form lower bound needs m >= 20 and n >= 30, got m={d.m}, n={d.n}")
    extra = 2 if d.n in EXCEPTIONAL_N else 0
    return _ceil_div(d.n * (d.m + 2) + extra, 5)


def construction_upper_bound_exact(dims) -> Fraction:
    """Size of the regular-pattern dominating sets, by ``n mod 5`` (requires m >= n)."""
    d = _dims(dims)
    if d.m < d.n:
        raise BoundsError(f"pattern upper bound is stated for m >= n, got m={d.m}, n={d.n}")
    k, res = divmod(d.n, 5)
    w = d.m + 2
    if res == 0:
        return Fraction(w * k)
    if res == 1:
        return Fraction(w * (8 * k + 3), 8)
    if res == 2:
        return Fraction(w * (2 * k + 1), 2)
    return Fraction(w * (k + 1))


def construction_upper_bound(dims) -> int:
    """Integer form of :func:`construction_upper_bound_exact` (ceiling when fractional)."""
    exact = construction_upper_bound_exact(dims)
    return _ceil_div(exact.numerator, exact.denominator)


def grid_upper_bound(dims) -> int:
    d = _dims(dims)
    if d.m < 16 or d.n < 16:
        raise BoundsError(f"grid upper bound needs m, n >= 16, got m={d.m}, n={d.n}")
    return (d.m + 2) * (d.n + 2) // 5 - 4


def grid_lower_bound(dims) -> int:
    d = _dims(dims)
    if d.m < 18 or d.n < 18:
        raise BoundsError(f"grid lower bound needs m, n >= 18, got m={d.m}, n={d.n}")
    return (d.m + 2) * d.n // 5 - 4


def known_gamma(dims) -> Optional[int]:
    d = _dims(dims)
    offsets = KNOWN_OFFSETS.get(d.m)
    if offsets is None or d.n < d.m:
        return None
    return _ceil_div((d.m + 2) * d.n, 5) + offsets[d.n % 5]


def diagonal_pattern_dominating_set(dims) -> VertexSet:
    """Dominating set of ``(m + 2) n / 5`` vertices for ``n`` divisible by 5.

    Row ``i`` takes the columns ``j`` with ``2 i + j = 0 (mod 5)``; the
    vertices that rows ``-1`` and ``m`` would contribute are pulled into the
    first and last row.
    """
    d = _dims(dims)
    m, n = d.m, d.n
    if n % 5 or n < 5:
        raise BoundsError(f"diagonal pattern needs n divisible by 5, got n={n}")
    members = {(i, j) for i in range(m) for j in range(n) if (2 * i + j) % 5 == 0}
    members |= {(0, j) for j in range(n) if (j - 2) % 5 == 0}
    members |= {(m - 1, j) for j in range(n) if (2 * m + j) % 5 == 0}
    s = VertexSet(m, n, frozenset(members))
    if len(s) != (m + 2) * n // 5 or not is_dominating(s):
        raise ConstructionError(f"diagonal pattern failed verification for m={m}, n={n}")
    return s


@dataclass
class BoundReport:
    dims: CylinderDims
    lower_new: int
    lower_grid: Optional[int] = None
    upper_construction: Optional[int] = None
    upper_grid: Optional[int] = None
    known_gamma: Optional[int] = None
    flags: list = field(default_factory=list)

    @property
    def residue(self) -> int:
        return self.dims.n % 5

    @property
    def k(self) -> int:
        return self.dims.n // 5

    def lowers(self) -> list:
        return [v for v in (self.lower_new, self.lower_grid) if v is not None]

    def uppers(self) -> list:
        return [v for v in (self.upper_construction, self.upper_grid) if v is not None]

    def consistent(self) -> bool:
        lo, up = self.lowers(), self.uppers()
        if up and max(lo) > min(up):
            return False
        if self.known_gamma is not None:
            return max(lo) <= self.known_gamma <= min(up, default=self.known_gamma)
        return True

    def to_dict(self) -> dict:
        return {
            "m": self.dims.m,
            "n": self.dims.n,
            "residue": self.residue,
            "k": self.k,
            "lower_new": self.lower_new,
            "lower_grid": self.lower_grid,
            "upper_construction": self.upper_construction,
            "upper_grid": self.upper_grid,
            "known_gamma": self.known_gamma,
            "flags": list(self.flags),
        }


def bound_report(dims, ltable: Optional[LTable] = None) -> BoundReport:
    """Collect every bound that applies to ``dims``.

    ``lower_new`` comes from ``ltable`` when given, otherwise from the bundled
    depth-10 table when ``m >= 20`` and ``n`` is covered; failing both, it is the
    waste-free count ``ceil(m n / 5)`` and the report is flagged.
    """
    from .scan import reference_table

    d = _dims(dims)
    flags = []
    lower = None
    table = ltable
    if table is None and d.m >= 20:
        table = reference_table()
    if table is not None:
        try:
            lower = lower_bound_from_L(d, table)
            if table.irregular(d.n):
                flags.append("irregular_L")
        except (PartitionError, BoundsError):
            if ltable is not None:
                raise
            flags.append("l_table_not_applicable")
    if lower is None:
        lower = _ceil_div(d.m * d.n, 5)
        flags.append("lower_new_trivial")

    report = BoundReport(d, lower)
    if d.m >= 18 and d.n >= 18:
        report.lower_grid = grid_lower_bound(d)
    if d.m >= d.n:
        exact = construction_upper_bound_exact(d)
        report.upper_construction = construction_upper_bound(d)
        if exact.denominator != 1:
            flags.append("construction_rounded")
    else:
        flags.append("construction_needs_m_ge_n")
    if d.m >= 16 and d.n >= 16:
        report.upper_grid = grid_upper_bound(d)
    report.known_gamma = known_gamma(d)
    report.flags = flags
    if not report.consistent():
        report.flags.append("inconsistent")
    return report
