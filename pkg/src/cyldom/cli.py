"""Command-line entry point: ``cyldom <command> ...``.

Data goes to stdout or the ``--out`` file, diagnostics and progress to stderr.
Exit status: 0 on success, 1 on a domain or validation error, 2 on an I/O or
file-format error.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import logging
import os
import sys
from dataclasses import dataclass
from pathlib import Path
from typing import Optional

from . import __version__
from .errors import CylDomError, DataFileError

THREADS_ENV = "CYLDOM_THREADS"

log = logging.getLogger("cyldom")


@dataclass
class RunConfig:
    threads: int
    checkpoint_every: int = 10
    fmt: Optional[str] = None  # csv | json; None picks each command's natural format
    verbosity: int = 1

    def __post_init__(self):
        if self.threads < 1:
            raise ValueError(f"threads must be >= 1, got {self.threads}")


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(1, f"{self.prog}: error: {message}\n")


def _range(text: str) -> range:
    lo, sep, hi = text.partition("..")
    if not sep:
        raise argparse.ArgumentTypeError(f"expected A..B, got {text!r}")
    lo, hi = int(lo), int(hi)
    if hi < lo:
        raise argparse.ArgumentTypeError(f"empty range {text!r}")
    return range(lo, hi + 1)


def _globals() -> argparse.ArgumentParser:
    g = argparse.ArgumentParser(add_help=False)
    g.add_argument("--threads", type=int, default=argparse.SUPPRESS,
                   help=f"worker threads (default: ${THREADS_ENV} or all cores)")
    g.add_argument("--format", dest="fmt", choices=("csv", "json"), default=argparse.SUPPRESS)
    g.add_argument("--quiet", action="store_true", default=argparse.SUPPRESS)
    g.add_argument("-v", "--verbose", action="count", default=argparse.SUPPRESS)
    return g


def build_parser() -> argparse.ArgumentParser:
    common = _globals()
    p = _Parser(prog="cyldom", description=__doc__.splitlines()[0], parents=[common])
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    s = sub.add_parser("words", parents=[common], help="count (and list) correct words")
    s.add_argument("--rows", type=int, required=True)
    s.add_argument("--list", action="store_true")

    m = sub.add_parser("matrix", parents=[common], help="transfer matrix files (.tmx)")
    msub = m.add_subparsers(dest="action", required=True, parser_class=_Parser)
    s = msub.add_parser("build", parents=[common], help="write the transfer matrix")
    s.add_argument("--rows", type=int, required=True)
    s.add_argument("--out", type=Path, required=True)
    s = msub.add_parser("pow", parents=[common], help="(min,+) power by repeated squaring")
    s.add_argument("--in", dest="inp", type=Path, required=True)
    s.add_argument("--n", type=int, required=True)
    s.add_argument("--out", type=Path, required=True)
    s = msub.add_parser("mul", parents=[common], help="(min,+) product of two matrices")
    s.add_argument("--a", type=Path, required=True)
    s.add_argument("--b", type=Path, required=True)
    s.add_argument("--out", type=Path, required=True)

    s = sub.add_parser("scan", parents=[common], help="minimum wasted domination table L(n)")
    s.add_argument("--rows", type=int, required=True)
    s.add_argument("--max-n", type=int, required=True)
    s.add_argument("--checkpoint", type=Path)
    s.add_argument("--resume", type=Path)
    s.add_argument("--checkpoint-every", type=int, default=10)
    s.add_argument("--max-period", type=int, default=1,
                   help="also detect A^(n0+p) = c (x) A^n0 for p up to this value")
    s.add_argument("--out", type=Path)

    s = sub.add_parser("bound", parents=[common], help="all bounds for one cylinder, as JSON")
    s.add_argument("--m", type=int, required=True)
    s.add_argument("--n", type=int, required=True)
    s.add_argument("--l-table", type=Path)

    s = sub.add_parser("bound-table", parents=[common], help="bounds over a grid of sizes")
    s.add_argument("--m-range", type=_range, required=True)
    s.add_argument("--n-range", type=_range, required=True)
    s.add_argument("--l-table", type=Path)
    s.add_argument("--out", type=Path)

    o = sub.add_parser("oracle", parents=[common], help="brute-force ground truth")
    osub = o.add_subparsers(dest="action", required=True, parser_class=_Parser)
    s = osub.add_parser("gamma", parents=[common], help="exact domination number")
    s.add_argument("--m", type=int, required=True)
    s.add_argument("--n", type=int, required=True)
    s = osub.add_parser("wasted", parents=[common], help="minimum wasted domination of a strip")
    s.add_argument("--rows", type=int, required=True)
    s.add_argument("--cols", type=int, required=True)
    s = osub.add_parser("verify", parents=[common], help="transfer matrix vs oracle properties")
    s.add_argument("--rows", type=int, required=True)
    s.add_argument("--cols", type=int, required=True)

    s = sub.add_parser("pattern", parents=[common], help="diagonal dominating set for n = 0 mod 5")
    s.add_argument("--m", type=int, required=True)
    s.add_argument("--n", type=int, required=True)
    return p


def _config(args) -> RunConfig:
    threads = getattr(args, "threads", None)
    if threads is None and os.environ.get(THREADS_ENV):
        threads = int(os.environ[THREADS_ENV])
    if threads is None:
        threads = os.cpu_count() or 1
    verbosity = 0 if getattr(args, "quiet", False) else 1 + getattr(args, "verbose", 0)
    return RunConfig(
        threads=threads,
        checkpoint_every=getattr(args, "checkpoint_every", 10),
        fmt=getattr(args, "fmt", None),
        verbosity=verbosity,
    )


def _emit(text: str, out: Optional[Path]) -> None:
    if out is None:
        sys.stdout.write(text)
    else:
        out.write_text(text)


def _json(obj) -> str:
    return json.dumps(obj, indent=2) + "\n"


def _cmd_words(args, cfg):
    from .words import count_correct_words, enumerate_correct_words

    alpha = count_correct_words(args.rows)
    words = list(enumerate_correct_words(args.rows).strings()) if args.list else None
    if cfg.fmt == "json":
        payload = {"rows": args.rows, "alpha": alpha}
        if words is not None:
            payload["words"] = words
        sys.stdout.write(_json(payload))
        return
    sys.stdout.write(f"alpha({args.rows}) = {alpha}\n")
    for w in words or ():
        sys.stdout.write(w + "\n")


def _cmd_matrix(args, cfg):
    from .transfer import build_transfer_matrix
    from .tropical import TropicalMatrix, matrix_power, read_matrix, tropical_matmul, write_matrix

    if args.action == "build":
        a = build_transfer_matrix(args.rows)
        write_matrix(a, args.out)
        log.info("wrote %d x %d transfer matrix to %s", a.dim, a.dim, args.out)
    elif args.action == "pow":
        a = read_matrix(args.inp)
        p = matrix_power(a, args.n)
        power = a.power * args.n if a.power else None
        write_matrix(TropicalMatrix(p.entries, r=a.r, power=power), args.out)
    else:
        c = tropical_matmul(read_matrix(args.a), read_matrix(args.b))
        write_matrix(c, args.out)


def _scan_json(table) -> str:
    rec = table.recurrence
    return _json({
        "r": table.r,
        "recurrence": None if rec is None else {"n0": rec.n0, "shift": rec.shift, "period": rec.period},
        "values": [
            {"n": n, "L": table.values[n], "source": table.sources[n]} for n in sorted(table.values)
        ],
    })


def _cmd_scan(args, cfg):
    from .scan import scan_L

    def progress(n, value, elapsed):
        if cfg.verbosity:
            print(f"n={n} L={value} elapsed={elapsed:.1f}s", file=sys.stderr, flush=True)

    directory = args.resume or args.checkpoint
    table = scan_L(
        args.rows,
        args.max_n,
        directory,
        resume=args.resume is not None,
        checkpoint_every=cfg.checkpoint_every,
        max_period=args.max_period,
        progress=progress,
    )
    _emit(_scan_json(table) if cfg.fmt == "json" else table.to_csv(), args.out)


def _load_table(path):
    from .scan import LTable

    return LTable.read_csv(path) if path else None


def _cmd_bound(args, cfg):
    from .bounds import bound_report

    report = bound_report((args.m, args.n), _load_table(args.l_table))
    sys.stdout.write(_json(report.to_dict()))


_TABLE_KEYS = ["m", "n", "residue", "k", "lower_new", "lower_grid", "upper_construction",
               "upper_grid", "known_gamma", "flags"]


def _cmd_bound_table(args, cfg):
    from .bounds import bound_report

    table = _load_table(args.l_table)
    rows = [bound_report((m, n), table).to_dict() for m in args.m_range for n in args.n_range]
    if cfg.fmt == "json":
        _emit(_json(rows), args.out)
        return
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(_TABLE_KEYS)
    for row in rows:
        w.writerow(["" if row[k] is None else (";".join(row[k]) if k == "flags" else row[k]) for k in _TABLE_KEYS])
    _emit(buf.getvalue(), args.out)


def _cmd_oracle(args, cfg):
    from .oracle import CylinderDims, brute_force_gamma, brute_force_wasted_min

    if args.action == "gamma":
        value = brute_force_gamma(CylinderDims(args.m, args.n))
        out = {"m": args.m, "n": args.n, "gamma": value}
        sys.stdout.write(_json(out) if cfg.fmt == "json" else f"gamma(P_{args.m} x C_{args.n}) = {value}\n")
    elif args.action == "wasted":
        res = brute_force_wasted_min(args.rows, args.cols)
        out = {
            "rows": args.rows,
            "cols": args.cols,
            "wasted": res.wasted,
            "closed_neighborhood_size": res.closed_neighborhood_size,
            "witness": [list(v) for v in res.set],
        }
        if cfg.fmt == "json":
            sys.stdout.write(_json(out))
        else:
            sys.stdout.write(f"min wasted = {res.wasted}, |N[R]| = {res.closed_neighborhood_size}, "
                             f"witness = {[list(v) for v in res.set]}\n")
    else:
        from .verify import verify_properties

        results = verify_properties(args.rows, args.cols)
        for name, ok in results.items():
            sys.stdout.write(f"{'PASS' if ok else 'FAIL'} {name}\n")
        return 0 if all(results.values()) else 1


def _cmd_pattern(args, cfg):
    from .bounds import diagonal_pattern_dominating_set

    s = diagonal_pattern_dominating_set((args.m, args.n))
    if cfg.fmt == "json":
        sys.stdout.write(_json({"m": args.m, "n": args.n, "size": len(s), "vertices": [list(v) for v in s]}))
        return
    sys.stdout.write(f"# {len(s)} vertices, verified dominating\n")
    for i in range(args.m):
        sys.stdout.write("".join("#" if (i, j) in s else "." for j in range(args.n)) + "\n")


_COMMANDS = {
    "words": _cmd_words,
    "matrix": _cmd_matrix,
    "scan": _cmd_scan,
    "bound": _cmd_bound,
    "bound-table": _cmd_bound_table,
    "oracle": _cmd_oracle,
    "pattern": _cmd_pattern,
}


def dispatch(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        cfg = _config(args)
    except ValueError as exc:
        print(f"cyldom: error: {exc}", file=sys.stderr)
        return 1
    logging.basicConfig(
        level=[logging.WARNING, logging.INFO, logging.DEBUG][min(cfg.verbosity, 2)],
        format="%(levelname)s %(name)s: %(message)s",
        stream=sys.stderr,
    )
    from .tropical import set_threads

    set_threads(cfg.threads)
    try:
        return _COMMANDS[args.command](args, cfg) or 0
    except (DataFileError, OSError) as exc:
        print(f"cyldom: error: {exc}", file=sys.stderr)
        return 2
    except (CylDomError, ValueError) as exc:
        print(f"cyldom: error: {exc}", file=sys.stderr)
        return 1


def main() -> None:
    sys.exit(dispatch())
