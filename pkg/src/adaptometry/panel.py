"""Time-series panel: data model, CSV ingestion and lagged windows.

A panel holds ``n`` labelled parameter series over ``T`` contiguous integer
ticks (months).  Values are stored parameter-major, ``values[i, c]`` being
parameter ``i`` at ``ticks[c]``.
"""
from __future__ import annotations

import csv
import io
import math
import os
from dataclasses import dataclass, field
from enum import IntEnum
from typing import BinaryIO, Iterable, Sequence

import numpy as np

from .errors import DataError, FormatError, InsufficientHistory, InvalidDepth

MIN_DEPTH = 3


class Block(IntEnum):
    """Business-plan blocks a parameter can belong to."""

    UNASSIGNED = -1
    ENVIRONMENT = 0
    INVESTMENT = 1
    EQUIPMENT = 2
    DEPRECIATION = 3
    PRODUCTS = 4
    LOGISTICS = 5
    STAFFING = 6
    FINANCE = 7
    ECOLOGY = 8
    ENGINEERING = 9


@dataclass(frozen=True)
class ParameterMeta:
    index: int  # 1-based ordinal
    label: str
    block: Block = Block.UNASSIGNED

    def __post_init__(self):
        if not self.label:
            raise DataError("parameter label must be non-empty")
        if self.index < 1:
            raise DataError(f"parameter index must be >= 1, got {self.index}")


def _frozen(a: np.ndarray) -> np.ndarray:
    a = np.array(a, copy=True)
    a.setflags(write=False)
    return a


@dataclass(frozen=True)
class TimeSeriesPanel:
    """Validated, immutable ``n x T`` panel."""

    meta: tuple[ParameterMeta, ...]
    ticks: np.ndarray
    values: np.ndarray

    def __post_init__(self):
        meta = tuple(self.meta)
        ticks = np.asarray(self.ticks)
        values = np.asarray(self.values, dtype=np.float64)
        if ticks.ndim != 1 or ticks.size < 1:
            raise DataError("panel needs at least one tick")
        if not np.issubdtype(ticks.dtype, np.integer):
            if not np.all(ticks == np.round(ticks)):
                raise DataError("ticks must be integers")
            ticks = ticks.astype(np.int64)
        if ticks.size > 1 and not np.all(np.diff(ticks) == 1):
            raise DataError("non-contiguous ticks: ticks must increase by exactly 1")
        n = len(meta)
        if n < 2:
            raise DataError(f"panel needs at least 2 parameters, got {n}")
        if values.shape != (n, ticks.size):
            raise DataError(f"values shape {values.shape} does not match (n={n}, T={ticks.size})")
        if [m.index for m in meta] != list(range(1, n + 1)):
            raise DataError("parameter indices must be contiguous 1..n")
        labels = [m.label for m in meta]
        if len(set(labels)) != n:
            dup = sorted({x for x in labels if labels.count(x) > 1})
            raise DataError(f"duplicate labels: {', '.join(dup)}")
        if not np.all(np.isfinite(values)):
            i, c = np.argwhere(~np.isfinite(values))[0]
            raise DataError(f"non-finite value for {labels[i]!r} at tick {int(ticks[c])}")
        object.__setattr__(self, "meta", meta)
        object.__setattr__(self, "ticks", _frozen(ticks.astype(np.int64)))
        object.__setattr__(self, "values", _frozen(values))

    @classmethod
    def from_arrays(cls, labels: Sequence[str], ticks: Iterable[int], values,
                    blocks: Sequence[Block] | None = None) -> "TimeSeriesPanel":
        blocks = blocks if blocks is not None else [Block.UNASSIGNED] * len(labels)
        meta = tuple(ParameterMeta(i + 1, str(lab), Block(b))
                     for i, (lab, b) in enumerate(zip(labels, blocks)))
        return cls(meta, np.asarray(list(ticks)), np.asarray(values, dtype=np.float64))

    @property
    def n(self) -> int:
        return len(self.meta)

    @property
    def T(self) -> int:
        return int(self.ticks.size)

    @property
    def labels(self) -> list[str]:
        return [m.label for m in self.meta]

    @property
    def first_tick(self) -> int:
        return int(self.ticks[0])

    @property
    def last_tick(self) -> int:
        return int(self.ticks[-1])

    def column(self, label: str) -> np.ndarray:
        return self.values[self.labels.index(label)]

    def tick_position(self, t: int) -> int:
        pos = int(t) - self.first_tick
        if not 0 <= pos < self.T:
            raise DataError(f"tick {t} outside panel range {self.first_tick}..{self.last_tick}")
        return pos


@dataclass(frozen=True)
class WindowMatrix:
    """``k x n`` lagged slice; row ``l-1`` holds the state at ``anchor_t - l``."""

    anchor_t: int
    depth_k: int
    rows: np.ndarray
    standardized: bool = False
    degenerate: np.ndarray = field(default=None)  # bool mask over columns, set by standardize

    def __post_init__(self):
        rows = np.asarray(self.rows, dtype=np.float64)
        if rows.ndim != 2 or rows.shape[0] != self.depth_k:
            raise DataError(f"window rows must be {self.depth_k} x n, got {rows.shape}")
        object.__setattr__(self, "rows", _frozen(rows))
        if self.degenerate is not None:
            object.__setattr__(self, "degenerate", _frozen(np.asarray(self.degenerate, dtype=bool)))

    @property
    def n(self) -> int:
        return int(self.rows.shape[1])


# ---------------------------------------------------------------------------
# CSV ingestion


def _read_text(source) -> str:
    if isinstance(source, (bytes, bytearray)):
        raw = bytes(source)
    elif isinstance(source, (str, os.PathLike)):
        with open(source, "rb") as fh:
            raw = fh.read()
    else:
        raw = source.read()
        if isinstance(raw, str):
            return raw
    try:
        return raw.decode("utf-8-sig")
    except UnicodeDecodeError as exc:
        raise FormatError(f"panel CSV is not valid UTF-8: {exc}") from None


def load_panel(source: BinaryIO | bytes | str | os.PathLike) -> TimeSeriesPanel:
    """Parse a panel CSV (``t,<label1>,...,<labeln>`` then one row per tick).

    ``source`` may be a binary stream, raw bytes or a filesystem path.
    Locations in error messages are 1-based ``(row, column)`` with the header
    as row 1 and the tick column as column 1.
    """
    text = _read_text(source)
    reader = csv.reader(io.StringIO(text))
    try:
        header = next(reader)
    except StopIteration:
        raise FormatError("empty panel CSV") from None
    header = [h.strip() for h in header]
    if not header or header[0] != "t":
        raise FormatError("first header cell must be 't'")
    labels = header[1:]
    if len(labels) < 2:
        raise FormatError(f"panel needs at least 2 parameter columns, got {len(labels)}")
    for c, lab in enumerate(labels, start=2):
        if not lab:
            raise FormatError(f"empty label in header column {c}")
    seen: set[str] = set()
    for lab in labels:
        if lab in seen:
            raise DataError(f"duplicate labels: {lab}")
        seen.add(lab)

    n = len(labels)
    ticks: list[int] = []
    cols: list[list[float]] = []
    for row_no, row in enumerate(reader, start=2):
        if not row or all(not cell.strip() for cell in row):
            continue
        if len(row) > n + 1:
            raise DataError(f"row {row_no}: expected {n + 1} cells, got {len(row)}")
        cells = [cell.strip() for cell in row] + [""] * (n + 1 - len(row))
        try:
            tick = int(cells[0])
        except ValueError:
            raise DataError(f"non-integer tick {cells[0]!r} at (row {row_no}, column 1)") from None
        vals = []
        for col_no, cell in enumerate(cells[1:], start=2):
            if not cell:
                raise DataError(f"missing value at (row {row_no}, column {col_no})")
            try:
                v = float(cell)
            except ValueError:
                raise DataError(f"non-numeric value {cell!r} at (row {row_no}, column {col_no})") from None
            if not math.isfinite(v):
                raise DataError(f"non-finite value {cell!r} at (row {row_no}, column {col_no})")
            vals.append(v)
        if ticks and tick != ticks[-1] + 1:
            raise DataError(f"non-contiguous ticks: {ticks[-1]} followed by {tick} at row {row_no}")
        ticks.append(tick)
        cols.append(vals)
    if not ticks:
        raise DataError("panel CSV has no data rows")
    values = np.array(cols, dtype=np.float64).T
    return TimeSeriesPanel.from_arrays(labels, ticks, values)


def format_panel(panel: TimeSeriesPanel, digits: int | None = None) -> str:
    """Panel CSV text.

    With ``digits=None`` values use the shortest round-tripping repr, so
    ``load_panel(format_panel(p))`` is lossless.  Otherwise values are rounded
    to ``digits`` significant digits (half-even).
    """
    from .formatting import fmt_sig

    if digits is None:
        fmt = repr
    else:
        def fmt(x):
            return fmt_sig(x, digits)
    out = io.StringIO()
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(["t", *panel.labels])
    vals = panel.values.tolist()
    for c, t in enumerate(panel.ticks.tolist()):
        writer.writerow([str(t), *(fmt(float(col[c])) for col in vals)])
    return out.getvalue()


def write_panel(panel: TimeSeriesPanel, dest, digits: int | None = None) -> None:
    """Write the panel CSV to a path (atomically) or a text/binary stream."""
    text = format_panel(panel, digits)
    if isinstance(dest, (str, os.PathLike)):
        from .formatting import atomic_write_text

        atomic_write_text(dest, text)
    elif isinstance(dest, io.TextIOBase):
        dest.write(text)
    else:
        dest.write(text.encode("utf-8"))


# ---------------------------------------------------------------------------
# Windows


def check_depth(k: int) -> int:
    if int(k) != k or k < MIN_DEPTH:
        raise InvalidDepth(f"window depth k must be an integer >= {MIN_DEPTH}, got {k}")
    return int(k)


def window_slice(panel: TimeSeriesPanel, t: int, k: int) -> WindowMatrix:
    """Rows ``x(t-1), x(t-2), ..., x(t-k)``, most recent first."""
    k = check_depth(k)
    t = int(t)
    if t - k < panel.first_tick:
        raise InsufficientHistory(
            f"tick {t} with depth {k} needs tick {t - k}, panel starts at {panel.first_tick}")
    if t - 1 > panel.last_tick:
        raise InsufficientHistory(f"tick {t} needs tick {t - 1}, panel ends at {panel.last_tick}")
    stop = t - 1 - panel.first_tick  # position of tick t-1
    cols = panel.values[:, stop - k + 1: stop + 1]
    return WindowMatrix(anchor_t=t, depth_k=k, rows=cols[:, ::-1].T)


def standardize(window: WindowMatrix) -> WindowMatrix:
    """Center each column and scale to unit sample sd (``1/(k-1)`` convention).

    Constant columns cannot be scaled; they become all-zero and are flagged in
    ``degenerate``.
    """
    x = window.rows
    k = window.depth_k
    degenerate = np.all(x == x[0], axis=0)
    mean = x.mean(axis=0)
    centered = x - mean
    sd = np.sqrt(np.sum(centered * centered, axis=0) / (k - 1))
    degenerate |= ~(sd > 0)
    safe_sd = np.where(degenerate, 1.0, sd)
    z = np.where(degenerate, 0.0, centered / safe_sd)
    return WindowMatrix(anchor_t=window.anchor_t, depth_k=k, rows=z,
                        standardized=True, degenerate=degenerate)
