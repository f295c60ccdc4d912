"""Windowed Pearson correlation matrices."""
from __future__ import annotations

import io
import csv
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import DataError
from .formatting import DEFAULT_DIGITS, fmt_sig
from .panel import MIN_DEPTH, WindowMatrix, standardize

_CHUNK = 512  # rows per temporary outer-product block


@dataclass(frozen=True)
class CorrelationMatrix:
    anchor_t: int
    depth_k: int
    entries: np.ndarray
    degenerate: np.ndarray

    @property
    def n(self) -> int:
        return int(self.entries.shape[0])


def correlation_matrix(window: WindowMatrix) -> CorrelationMatrix:
    """``R = Z^T Z / (k - 1)`` over the standardized window ``Z``.

    Lag rows are accumulated one at a time in ascending-lag order so the
    result does not depend on BLAS threading.  The upper triangle is mirrored
    onto the lower one and entries are clamped to [-1, 1].
    """
    if not window.standardized:
        window = standardize(window)
    z = window.rows
    n = z.shape[1]
    acc = np.zeros((n, n))
    for lo in range(0, n, _CHUNK):
        part = acc[lo:lo + _CHUNK]
        for row in z:
            part += np.multiply.outer(row[lo:lo + _CHUNK], row)
    acc /= window.depth_k - 1
    iu = np.triu_indices(n, 1)
    acc.T[iu] = acc[iu]
    np.clip(acc, -1.0, 1.0, out=acc)
    acc[window.degenerate, :] = 0.0
    acc[:, window.degenerate] = 0.0
    acc.setflags(write=False)
    return CorrelationMatrix(window.anchor_t, window.depth_k, acc, window.degenerate)


def pairwise_r(a: Sequence[float], b: Sequence[float]) -> float:
    """Textbook Pearson coefficient of two raw series.

    Returns 0.0 when either series is constant (check :func:`is_degenerate_pair`
    to tell that apart from a genuine zero).
    """
    a = [float(x) for x in a]
    b = [float(x) for x in b]
    if len(a) != len(b):
        raise DataError(f"series lengths differ: {len(a)} vs {len(b)}")
    if len(a) < MIN_DEPTH:
        raise DataError(f"need at least {MIN_DEPTH} observations, got {len(a)}")
    if is_degenerate_pair(a, b):
        return 0.0
    ma = sum(a) / len(a)
    mb = sum(b) / len(b)
    sab = sum((x - ma) * (y - mb) for x, y in zip(a, b))
    saa = sum((x - ma) ** 2 for x in a)
    sbb = sum((y - mb) ** 2 for y in b)
    r = sab / (saa ** 0.5 * sbb ** 0.5)
    return max(-1.0, min(1.0, r))


def is_degenerate_pair(a: Sequence[float], b: Sequence[float]) -> bool:
    return len(set(a)) == 1 or len(set(b)) == 1


def format_matrix(R: CorrelationMatrix, labels: Sequence[str], digits: int = DEFAULT_DIGITS) -> str:
    """Matrix dump: header of labels, then ``n`` rows of ``n`` decimals."""
    if len(labels) != R.n:
        raise DataError(f"{len(labels)} labels for a {R.n}x{R.n} matrix")
    out = io.StringIO()
    w = csv.writer(out, lineterminator="\n")
    w.writerow(labels)
    for row in R.entries.tolist():
        w.writerow([fmt_sig(v, digits) for v in row])
    return out.getvalue()
