"""Minimum wasted domination of border strips for every cycle length.

``L(n)`` is the smallest diagonal entry of ``A^n``, where ``A`` is the transfer
matrix for strips of ``r`` rows. Powers are produced one at a time as
``A (x) A^n`` (the sparse transfer matrix on the left keeps each step cheap).
Once ``A^(n0+1) = c (x) A^n0`` holds and is confirmed on the next powers, every
later value follows as ``L(n0) + c (n - n0)`` and the iteration stops.

Some strip depths only settle into a longer cycle, ``A^(n0+p) = c (x) A^n0``
with ``p > 1``; pass ``max_period`` to look for those as well. Period one is
checked entrywise; longer periods compare shift-normalised digests.
"""

from __future__ import annotations

import csv
import io
import json
import logging
import math
import time
from collections import deque
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path
from typing import Callable, Optional

from .errors import BoundsError, FormatError, ResumeError
from .transfer import build_transfer_matrix
from .tropical import (
    TropicalMatrix,
    matrix_equal_shifted,
    min_diagonal,
    read_matrix,
    shift_fingerprint,
    tropical_matmul,
    write_matrix,
)

log = logging.getLogger(__name__)

N_MIN = 3
CONFIRMATIONS = 2
IRREGULAR_BELOW = {10: 30}

COMPUTED, EXTENDED = "computed", "extended"


@dataclass(frozen=True)
class Recurrence:
    """``A^(n0 + period) = shift (x) A^n0``, hence ``L(n + period) = L(n) + shift`` for ``n >= n0``."""

    n0: int
    shift: int
    period: int = 1


@dataclass
class LTable:
    r: int
    values: dict = field(default_factory=dict)
    sources: dict = field(default_factory=dict)
    recurrence: Optional[Recurrence] = None

    def __getitem__(self, n: int) -> int:
        if n not in self.values:
            lo, hi = self.n_range
            raise BoundsError(f"n={n} outside table range [{lo}, {hi}] for r={self.r}")
        return self.values[n]

    def __contains__(self, n) -> bool:
        return n in self.values

    @property
    def n_range(self) -> tuple:
        return (min(self.values), max(self.values)) if self.values else (N_MIN, N_MIN - 1)

    @property
    def horizon(self) -> int:
        return self.n_range[1]

    def irregular(self, n: int) -> bool:
        return n < IRREGULAR_BELOW.get(self.r, 0)

    def check(self) -> None:
        """Raise ``ValueError`` when the recorded values break the table invariants."""
        for n, v in self.values.items():
            if v < 0:
                raise ValueError(f"negative L({n}) = {v}")
        rec = self.recurrence
        if rec:
            for n, v in self.values.items():
                back = n - rec.period
                if back >= rec.n0 and back in self.values and v != self.values[back] + rec.shift:
                    raise ValueError(f"L({n}) = {v} breaks the recurrence {rec}")

    def to_csv(self) -> str:
        buf = io.StringIO()
        rec = self.recurrence
        head = f"# r={self.r}"
        if rec:
            head += f" recurrence_n0={rec.n0} recurrence_shift={rec.shift}"
            if rec.period != 1:
                head += f" recurrence_period={rec.period}"
        else:
            head += " recurrence=none"
        buf.write(head + "\n")
        if self.r in IRREGULAR_BELOW:
            buf.write(f"# irregular_below={IRREGULAR_BELOW[self.r]}\n")
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["n", "L", "source"])
        for n in sorted(self.values):
            w.writerow([n, self.values[n], self.sources.get(n, COMPUTED)])
        return buf.getvalue()

    def write_csv(self, path) -> None:
        Path(path).write_text(self.to_csv())

    @classmethod
    def from_csv(cls, text: str) -> "LTable":
        lines = text.splitlines()
        meta = {}
        body = []
        for line in lines:
            if line.startswith("#"):
                for tok in line[1:].split():
                    key, _, val = tok.partition("=")
                    meta[key] = val
            elif line.strip():
                body.append(line)
        if "r" not in meta:
            raise FormatError("L-table is missing the '# r=' header")
        rows = list(csv.DictReader(body))
        if not rows or set(rows[0]) != {"n", "L", "source"}:
            raise FormatError("L-table needs columns n,L,source")
        table = cls(int(meta["r"]))
        for row in rows:
            n = int(row["n"])
            table.values[n] = int(row["L"])
            table.sources[n] = row["source"]
        if "recurrence_n0" in meta:
            table.recurrence = Recurrence(
                int(meta["recurrence_n0"]), int(meta["recurrence_shift"]), int(meta.get("recurrence_period", 1))
            )
        try:
            table.check()
        except ValueError as exc:
            raise FormatError(f"inconsistent L-table: {exc}") from exc
        return table

    @classmethod
    def read_csv(cls, path) -> "LTable":
        return cls.from_csv(Path(path).read_text())


def reference_table() -> LTable:
    """The bundled table for ``r = 10`` produced by :func:`scan_L` up to n = 125."""
    text = resources.files("cyldom").joinpath("data", "ltable_r10.csv").read_text()
    return LTable.from_csv(text)


# checkpoints: power_<n>.tmx holds A^n, state_<n>.json the scan state after
# step n. The json is written second, so its presence marks a complete pair.


def _state_name(n: int) -> str:
    return f"state_{n:06d}.json"


def _power_name(n: int) -> str:
    return f"power_{n:06d}.tmx"


def _write_checkpoint(directory: Path, n: int, power: TropicalMatrix, state: dict, keep: int) -> None:
    directory.mkdir(parents=True, exist_ok=True)
    write_matrix(power, directory / _power_name(n))
    tmp = directory / (_state_name(n) + ".part")
    tmp.write_text(json.dumps(state, sort_keys=True))
    tmp.replace(directory / _state_name(n))
    done = sorted(directory.glob("state_*.json"))
    for old in done[:-keep] if keep > 0 else []:
        step = int(old.stem.split("_")[1])
        old.unlink(missing_ok=True)
        (directory / _power_name(step)).unlink(missing_ok=True)


def latest_checkpoint(directory) -> Optional[int]:
    steps = sorted(int(p.stem.split("_")[1]) for p in Path(directory).glob("state_*.json"))
    return steps[-1] if steps else None


def _load_checkpoint(directory: Path, r: int):
    step = latest_checkpoint(directory)
    if step is None:
        raise ResumeError(f"no checkpoint found in {directory}")
    try:
        state = json.loads((directory / _state_name(step)).read_text())
        power = read_matrix(directory / _power_name(step))
    except (OSError, ValueError, FormatError) as exc:
        raise ResumeError(f"cannot read checkpoint {step} in {directory}: {exc}") from exc
    if state.get("r") != r or state.get("n") != step:
        raise ResumeError(f"checkpoint {step} in {directory} is for r={state.get('r')}, not r={r}")
    if power.power not in (None, step) or power.r not in (None, r):
        raise ResumeError(f"checkpoint matrix {step} does not match its state file")
    return state, power


def scan_L(
    r: int,
    horizon: int,
    checkpoint_dir=None,
    *,
    resume: bool = False,
    checkpoint_every: int = 10,
    keep: int = 2,
    max_period: int = 1,
    progress: Optional[Callable[[int, Optional[int], float], None]] = None,
    **kernel,
) -> LTable:
    """Compute ``L(n)`` for ``3 <= n <= horizon`` for strips of ``r`` rows.

    With ``checkpoint_dir`` the current power is saved every
    ``checkpoint_every`` steps (the ``keep`` newest are retained); with
    ``resume`` the scan restarts from the newest checkpoint there and yields
    the same table as an uninterrupted run.
    """
    if horizon < N_MIN:
        raise BoundsError(f"horizon must be >= {N_MIN}, got {horizon}")
    if checkpoint_every < 1:
        raise ValueError(f"checkpoint_every must be positive, got {checkpoint_every}")
    if max_period < 1:
        raise ValueError(f"max_period must be positive, got {max_period}")
    if resume and checkpoint_dir is None:
        raise ResumeError("resume requested without a checkpoint directory")
    directory = Path(checkpoint_dir) if checkpoint_dir is not None else None

    a = build_transfer_matrix(r)
    values: dict = {}
    candidate = None  # [n0, period, shift, confirmations]
    # (offset, digest) of the powers n, n-1, ... for period > 1 detection
    history: deque = deque(maxlen=max_period)
    n, power = 1, a
    if resume:
        state, power = _load_checkpoint(directory, r)
        n = state["n"]
        power = TropicalMatrix(power.entries, r=r, power=n)
        values = {int(k): v for k, v in state["values"].items()}
        candidate = state["candidate"]
        history.extend(tuple(h) for h in state.get("history", []))
        log.info("resuming r=%d scan at n=%d", r, n)
    elif max_period > 1:
        history.appendleft(shift_fingerprint(power))

    start = time.monotonic()
    while True:
        if candidate and candidate[3] >= CONFIRMATIONS:
            break
        if n >= horizon and not candidate:
            break
        nxt = tropical_matmul(a, power, **kernel)
        nxt = TropicalMatrix(nxt.entries, r=r, power=n + 1)
        low = min_diagonal(nxt)
        if N_MIN <= n + 1 <= horizon:
            values[n + 1] = low

        # relation A^(n+1) = c (x) A^(n+1-p), smallest p first
        hit = None
        c = matrix_equal_shifted(power, nxt)
        if c is not None:
            hit = (1, c)
        elif max_period > 1:
            fp = shift_fingerprint(nxt)
            for p in range(2, len(history) + 1):
                offset, digest = history[p - 1]
                if digest == fp[1] and fp[0] >= offset:
                    hit = (p, fp[0] - offset)
                    break
        if max_period > 1:
            history.appendleft(fp if c is None else shift_fingerprint(nxt))

        if candidate and hit == (candidate[1], candidate[2]):
            candidate[3] += 1
        elif hit:
            candidate = [n + 1 - hit[0], hit[0], hit[1], 0]
        else:
            candidate = None
        power, n = nxt, n + 1
        if progress:
            progress(n, None if math.isinf(low) else low, time.monotonic() - start)
        if directory is not None and n % checkpoint_every == 0:
            state = {
                "r": r,
                "n": n,
                "values": {str(k): v for k, v in values.items()},
                "candidate": candidate,
                "history": [list(h) for h in history],
            }
            _write_checkpoint(directory, n, power, state, keep)

    table = LTable(r, dict(values), {k: COMPUTED for k in values})
    if candidate and candidate[3] >= CONFIRMATIONS:
        n0, period, shift, _ = candidate
        table.recurrence = Recurrence(n0, shift, period)
        for m in range(max(N_MIN, n + 1), horizon + 1):
            table.values[m] = table.values[m - period] + shift
            table.sources[m] = EXTENDED
    table.check()
    return table
