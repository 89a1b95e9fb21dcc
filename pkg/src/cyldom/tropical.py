"""Dense matrices over the (min, +) semiring of nonnegative integers with infinity.

Entries are ``uint32``; the all-ones value :data:`INF` is the absorbing
infinity. Products run in a numba kernel over contiguous row panels of the
output, so every output entry is written by exactly one worker and the
result does not depend on the thread count or the panel size.
"""

from __future__ import annotations

import hashlib
import math
import os
import struct
import zlib
from pathlib import Path
from typing import Optional, Sequence

import numba
import numpy as np

from .errors import DimensionError, FormatError, TropicalOverflowError

if "NUMBA_THREADING_LAYER" not in os.environ:
    numba.config.THREADING_LAYER_PRIORITY = ["omp", "tbb", "workqueue"]

DTYPE = np.uint32
INF = 0xFFFFFFFF

DEFAULT_PANEL = 32
DEFAULT_KBLOCK = 256
DEFAULT_JBLOCK = 2048


class TropicalMatrix:
    """Square tropical matrix plus optional provenance (source word length, power)."""

    __hash__ = None

    def __init__(self, entries: np.ndarray, r: Optional[int] = None, power: Optional[int] = None):
        entries = np.asarray(entries)
        if entries.ndim != 2 or entries.shape[0] != entries.shape[1] or entries.shape[0] == 0:
            raise DimensionError(f"expected a nonempty square matrix, got shape {entries.shape}")
        if entries.dtype != DTYPE:
            raise TypeError(f"entries must be {np.dtype(DTYPE).name}, got {entries.dtype}")
        entries = np.ascontiguousarray(entries)
        entries.setflags(write=False)
        self.entries = entries
        self.r = r
        self.power = power

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence], **meta) -> "TropicalMatrix":
        """Build from nested lists; ``None``, ``math.inf`` and :data:`INF` all mean infinity."""
        out = []
        for row in rows:
            cooked = []
            for x in row:
                if x is None or x == INF or (isinstance(x, float) and math.isinf(x)):
                    cooked.append(INF)
                else:
                    x = int(x)
                    if not 0 <= x < INF:
                        raise ValueError(f"entry {x} outside [0, {INF})")
                    cooked.append(x)
            out.append(cooked)
        return cls(np.array(out, dtype=DTYPE), **meta)

    @property
    def dim(self) -> int:
        return int(self.entries.shape[0])

    def tolist(self) -> list:
        return [[math.inf if v == INF else int(v) for v in row] for row in self.entries]

    def __getitem__(self, idx):
        v = self.entries[idx]
        if np.ndim(v) == 0:
            return math.inf if v == INF else int(v)
        return v

    def __eq__(self, other):
        if not isinstance(other, TropicalMatrix):
            return NotImplemented
        return self.entries.shape == other.entries.shape and bool(
            np.array_equal(self.entries, other.entries)
        )

    def __matmul__(self, other: "TropicalMatrix") -> "TropicalMatrix":
        return tropical_matmul(self, other)

    def __repr__(self) -> str:
        return f"TropicalMatrix(dim={self.dim}, r={self.r}, power={self.power})"


def identity(dim: int) -> TropicalMatrix:
    """0 on the diagonal, infinity elsewhere."""
    e = np.full((dim, dim), INF, dtype=DTYPE)
    np.fill_diagonal(e, 0)
    return TropicalMatrix(e)


def max_finite(a: TropicalMatrix) -> int:
    """Largest finite entry, or -1 when every entry is infinite."""
    finite = a.entries[a.entries != INF]
    return int(finite.max()) if finite.size else -1


def set_threads(k: Optional[int]) -> int:
    """Set the numba worker count (``None`` keeps the current setting)."""
    if k is not None:
        if k < 1:
            raise ValueError(f"thread count must be positive, got {k}")
        numba.set_num_threads(min(k, numba.config.NUMBA_NUM_THREADS))
    return numba.get_num_threads()


@numba.njit(inline="always")
def _relax_row(out_row, b_row, av):
    # saturating: min(b, INF - a) + a never wraps, and INF stays INF
    lim = np.uint32(0xFFFFFFFF) - av
    for j in range(out_row.shape[0]):
        out_row[j] = min(out_row[j], np.uint32(min(b_row[j], lim) + av))


@numba.njit(parallel=True, cache=True, nogil=True)
def _minplus_panels(a, b, out, bmax, panel, kblock, jblock):
    n = a.shape[0]
    inf = np.uint32(0xFFFFFFFF)
    npanels = (n + panel - 1) // panel
    overflow = np.zeros(npanels, dtype=np.bool_)
    for p in numba.prange(npanels):
        i0 = p * panel
        i1 = min(i0 + panel, n)
        out[i0:i1, :] = inf
        for k0 in range(0, n, kblock):
            k1 = min(k0 + kblock, n)
            for j0 in range(0, n, jblock):
                j1 = min(j0 + jblock, n)
                for i in range(i0, i1):
                    out_row = out[i, j0:j1]
                    for k in range(k0, k1):
                        av = a[i, k]
                        if av == inf:
                            continue
                        if bmax[k] >= 0 and np.int64(av) + bmax[k] >= np.int64(inf):
                            overflow[p] = True
                            continue
                        _relax_row(out_row, b[k, j0:j1], av)
    return overflow


def _row_max_finite(b: np.ndarray) -> np.ndarray:
    masked = np.where(b == INF, np.int64(-1), b.astype(np.int64))
    return masked.max(axis=1)


def tropical_matmul(
    a: TropicalMatrix,
    b: TropicalMatrix,
    panel: int = DEFAULT_PANEL,
    kblock: int = DEFAULT_KBLOCK,
    jblock: int = DEFAULT_JBLOCK,
) -> TropicalMatrix:
    """(min, +) product ``c[i, j] = min_k a[i, k] + b[k, j]``.

    Infinite entries of ``a`` are skipped, so a sparse left operand costs only
    its finite entries times ``dim``. Raises :class:`TropicalOverflowError` if
    any finite sum would reach the sentinel.
    """
    if a.dim != b.dim:
        raise DimensionError(f"dimension mismatch: {a.dim} vs {b.dim}")
    if min(panel, kblock, jblock) < 1:
        raise ValueError("block sizes must be positive")
    out = np.empty((a.dim, a.dim), dtype=DTYPE)
    flags = _minplus_panels(a.entries, b.entries, out, _row_max_finite(b.entries), panel, kblock, jblock)
    if flags.any():
        raise TropicalOverflowError("finite tropical sum reached the infinity sentinel")
    power = a.power + b.power if a.power and b.power and a.r == b.r else None
    return TropicalMatrix(out, r=a.r if a.r == b.r else None, power=power)


def reference_matmul(a: TropicalMatrix, b: TropicalMatrix) -> TropicalMatrix:
    """Unblocked product by broadcasting in int64, used to check the kernel."""
    if a.dim != b.dim:
        raise DimensionError(f"dimension mismatch: {a.dim} vs {b.dim}")
    big = np.int64(1) << 40
    x = np.where(a.entries == INF, big, a.entries.astype(np.int64))
    y = np.where(b.entries == INF, big, b.entries.astype(np.int64))
    sums = x[:, :, None] + y[None, :, :]
    if ((sums >= INF) & (sums < big)).any():
        raise TropicalOverflowError("finite tropical sum reached the infinity sentinel")
    c = sums.min(axis=1)
    c[c >= big] = INF
    return TropicalMatrix(c.astype(DTYPE))


def scalar_shift(c: int, a: TropicalMatrix) -> TropicalMatrix:
    """Add ``c`` to every finite entry; infinity stays infinity."""
    if c < 0:
        raise ValueError(f"shift must be nonnegative, got {c}")
    if c and max_finite(a) + c >= INF:
        raise TropicalOverflowError(f"shifting by {c} reaches the infinity sentinel")
    e = a.entries.copy()
    e[e != INF] += DTYPE(c)
    return TropicalMatrix(e, r=a.r, power=a.power)


def min_diagonal(a: TropicalMatrix) -> float | int:
    """Smallest diagonal entry; ``math.inf`` if the whole diagonal is infinite."""
    v = int(np.diagonal(a.entries).min())
    return math.inf if v == INF else v


def matrix_equal_shifted(a: TropicalMatrix, b: TropicalMatrix, chunk_rows: int = 512) -> Optional[int]:
    """Return ``c >= 0`` with ``b == c (x) a`` entrywise, else ``None``.

    Infinite entries must coincide; ``c`` is read off the first finite pair.
    """
    if a.dim != b.dim:
        raise DimensionError(f"dimension mismatch: {a.dim} vs {b.dim}")
    c = None
    for r0 in range(0, a.dim, chunk_rows):
        ea = a.entries[r0 : r0 + chunk_rows]
        eb = b.entries[r0 : r0 + chunk_rows]
        finite = ea != INF
        if not np.array_equal(finite, eb != INF):
            return None
        if not finite.any():
            continue
        diff = eb[finite].astype(np.int64) - ea[finite].astype(np.int64)
        if c is None:
            c = int(diff[0])
            if c < 0:
                return None
        if not bool((diff == c).all()):
            return None
    return 0 if c is None else c


def shift_fingerprint(a: TropicalMatrix) -> tuple:
    """``(offset, digest)`` where ``digest`` hashes ``a`` minus its smallest finite entry.

    Two matrices differ by a constant shift exactly when their digests agree
    (up to hash collisions); the shift is then the difference of offsets.
    """
    e = a.entries
    finite = e != INF
    if not finite.any():
        return 0, hashlib.blake2b(e.tobytes(), digest_size=32).hexdigest()
    offset = int(e[finite].min())
    norm = e - DTYPE(offset)
    norm[~finite] = INF
    return offset, hashlib.blake2b(norm.tobytes(), digest_size=32).hexdigest()


def matrix_power(a: TropicalMatrix, n: int, **kernel) -> TropicalMatrix:
    """``a`` to the ``n``-th (min, +) power by repeated squaring."""
    if n < 1:
        raise ValueError(f"power must be >= 1, got {n}")
    result = None
    base = a
    while n:
        if n & 1:
            result = base if result is None else tropical_matmul(result, base, **kernel)
        n >>= 1
        if n:
            base = tropical_matmul(base, base, **kernel)
    return result


# .tmx file format (little endian):
#   magic "TMX1", version u32, dim u32, entry width u32, flags u32,
#   meta r u32 (0 = absent), meta power u64 (0 = absent),
#   dim*dim u32 entries row-major, crc32 of payload u32.
TMX_MAGIC = b"TMX1"
TMX_VERSION = 1
_HEADER = struct.Struct("<4sIIIIIQ")


def tmx_size(dim: int) -> int:
    return _HEADER.size + dim * dim * 4 + 4


def write_matrix(a: TropicalMatrix, path) -> None:
    path = Path(path)
    payload = a.entries.astype("<u4", copy=False)
    header = _HEADER.pack(TMX_MAGIC, TMX_VERSION, a.dim, 4, 0, a.r or 0, a.power or 0)
    tmp = path.with_name(path.name + ".part")
    with open(tmp, "wb") as fh:
        fh.write(header)
        payload.tofile(fh)
        fh.write(struct.pack("<I", zlib.crc32(memoryview(payload).cast("B")) & 0xFFFFFFFF))
    os.replace(tmp, path)


def read_matrix(path) -> TropicalMatrix:
    path = Path(path)
    with open(path, "rb") as fh:
        head = fh.read(_HEADER.size)
        if len(head) < _HEADER.size:
            raise FormatError(f"{path}: truncated header")
        magic, version, dim, width, _flags, r, power = _HEADER.unpack(head)
        if magic != TMX_MAGIC:
            raise FormatError(f"{path}: bad magic {magic!r}")
        if version != TMX_VERSION:
            raise FormatError(f"{path}: unsupported version {version}")
        if width != 4:
            raise FormatError(f"{path}: unsupported entry width {width}")
        if dim == 0:
            raise FormatError(f"{path}: zero dimension")
        count = dim * dim
        payload = np.fromfile(fh, dtype="<u4", count=count)
        if payload.size != count:
            raise FormatError(f"{path}: truncated payload ({payload.size} of {count} entries)")
        tail = fh.read(4)
        if len(tail) != 4:
            raise FormatError(f"{path}: missing checksum")
        if fh.read(1):
            raise FormatError(f"{path}: trailing bytes after checksum")
    (crc,) = struct.unpack("<I", tail)
    if zlib.crc32(memoryview(payload).cast("B")) & 0xFFFFFFFF != crc:
        raise FormatError(f"{path}: checksum mismatch")
    return TropicalMatrix(
        payload.astype(DTYPE, copy=False).reshape(dim, dim),
        r=r or None,
        power=power or None,
    )
