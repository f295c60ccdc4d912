"""Decimal text output shared by the CSV, JSON and DOT writers.

Every number leaving the CLI goes through :func:`fmt_sig` so the bytes are
identical across platforms: the exact binary value of the float is rounded
to a fixed number of significant digits with round-half-even.
"""
from __future__ import annotations

import errno
import os
import tempfile
from decimal import ROUND_HALF_EVEN, Decimal, localcontext
from pathlib import Path

DEFAULT_DIGITS = 6


def round_sig(x: float, digits: int = DEFAULT_DIGITS) -> Decimal:
    with localcontext() as ctx:
        ctx.prec = digits
        ctx.rounding = ROUND_HALF_EVEN
        d = +Decimal(float(x))
    if d == 0:
        return Decimal(0)
    return d.normalize()


def fmt_sig(x: float, digits: int = DEFAULT_DIGITS) -> str:
    """Text for ``x`` at ``digits`` significant digits, no exponent for usual magnitudes."""
    d = round_sig(x, digits)
    if d == 0:
        return "0"
    if -7 < d.adjusted() < 16:
        return format(d, "f")
    return str(d)


def json_number(x: float, digits: int = DEFAULT_DIGITS) -> float:
    """Float whose ``repr`` is the rounded decimal (for ``json.dumps``)."""
    return float(round_sig(x, digits))


def atomic_write_text(path: str | os.PathLike, text: str) -> None:
    """Write via a sibling temp file and ``os.replace``."""
    path = Path(path)
    parent = path.parent if str(path.parent) else Path(".")
    if not parent.is_dir():
        raise FileNotFoundError(errno.ENOENT, "output directory does not exist", str(parent))
    fd, tmp = tempfile.mkstemp(dir=path.parent or ".", prefix=f".{path.name}.", suffix=".tmp")
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise
