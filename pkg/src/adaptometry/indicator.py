"""Significance threshold, per-parameter weights G_i(t), integral indicator G.

The weight of parameter ``i`` at tick ``t`` is the sum of ``|r_ij(t)|`` over
partners ``j != i`` whose correlation magnitude reaches the critical value.
The integral indicator is the double sum of these weights over parameters and
analysed ticks.
"""
from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import dataclass, field
from typing import Literal, Sequence

import numpy as np
from scipy import stats

from .correlation import CorrelationMatrix, correlation_matrix
from .errors import ConfigError, DataError
from .formatting import DEFAULT_DIGITS, fmt_sig, json_number
from .panel import MIN_DEPTH, TimeSeriesPanel, check_depth, standardize, window_slice

MODES = ("raw", "per_tick", "per_cell")
CRITICAL_R_CAP = 1.0 - 1e-9


@dataclass(frozen=True)
class ThresholdSpec:
    mode: Literal["fixed", "significance"] = "significance"
    fixed_r: float | None = None
    alpha: float | None = 0.05

    def __post_init__(self):
        if self.mode == "fixed":
            if self.fixed_r is None or not 0.0 <= self.fixed_r <= 1.0:
                raise ConfigError(f"threshold must lie in [0,1], got {self.fixed_r}")
        elif self.mode == "significance":
            if self.alpha is None or not 0.0 < self.alpha < 1.0:
                raise ConfigError(f"alpha must lie in (0,1), got {self.alpha}")
        else:
            raise ConfigError(f"unknown threshold mode {self.mode!r}")

    @classmethod
    def fixed(cls, r: float) -> "ThresholdSpec":
        return cls(mode="fixed", fixed_r=r, alpha=None)

    @classmethod
    def significance(cls, alpha: float = 0.05) -> "ThresholdSpec":
        return cls(mode="significance", fixed_r=None, alpha=alpha)


def critical_r(k: int, spec: ThresholdSpec) -> float:
    """Critical |r| at window depth ``k``.

    In significance mode this is the two-sided Pearson bound
    ``t* / sqrt(k - 2 + t*^2)`` with ``t*`` the Student-t quantile at
    ``1 - alpha/2`` on ``k - 2`` degrees of freedom.
    """
    if not isinstance(spec, ThresholdSpec):
        raise ConfigError(f"expected ThresholdSpec, got {type(spec).__name__}")
    if spec.mode == "fixed":
        return float(spec.fixed_r)
    if k < MIN_DEPTH:
        raise ConfigError(f"significance threshold needs k >= {MIN_DEPTH}, got {k}")
    df = k - 2
    t_star = float(stats.t.isf(spec.alpha / 2.0, df))
    if not math.isfinite(t_star):
        return CRITICAL_R_CAP
    r = t_star / math.sqrt(df + t_star * t_star)
    return min(r, CRITICAL_R_CAP)


def weight_indicator(R: CorrelationMatrix, i: int, r_sign: float) -> float:
    """G_i for the parameter at 0-based position ``i``."""
    if not 0 <= i < R.n:
        raise IndexError(f"parameter position {i} out of range for n={R.n}")
    if R.degenerate[i]:
        return 0.0
    row = np.abs(R.entries[i])
    keep = row >= r_sign
    keep[i] = False
    return float(np.sum(np.where(keep, row, 0.0)))


def weights(R: CorrelationMatrix, r_sign: float) -> np.ndarray:
    """All G_i at once; equals ``[weight_indicator(R, i, r_sign) for i]``."""
    a = np.abs(R.entries)
    keep = a >= r_sign
    np.fill_diagonal(keep, False)
    g = np.sum(np.where(keep, a, 0.0), axis=1)
    g[R.degenerate] = 0.0
    return g


@dataclass(frozen=True)
class IndicatorResult:
    labels: tuple[str, ...]
    ticks: np.ndarray  # analysed ticks, ascending
    gi_surface: np.ndarray  # (n, len(ticks))
    g_per_tick: np.ndarray
    g_total: dict[str, float]
    k: int
    threshold: ThresholdSpec
    threshold_used: dict[int, float] = field(default_factory=dict)

    @property
    def n(self) -> int:
        return len(self.labels)

    def g_at(self, t: int) -> float:
        return float(self.g_per_tick[int(t) - int(self.ticks[0])])


def g_totals(g_per_tick: np.ndarray, n: int) -> dict[str, float]:
    raw = 0.0
    for g in g_per_tick.tolist():  # ascending-tick reduction order
        raw += g
    T = len(g_per_tick)
    return {
        "raw": raw,
        "per_tick": raw / T if T else 0.0,
        "per_cell": raw / (n * T) if T else 0.0,
    }


def analysed_ticks(panel: TimeSeriesPanel, k: int) -> range:
    return range(panel.first_tick + k, panel.last_tick + 1)


def indicator_series(panel: TimeSeriesPanel, k: int = 12,
                     spec: ThresholdSpec | None = None) -> IndicatorResult:
    """G_i(t) for every tick with ``k`` ticks of history, plus the aggregates."""
    k = check_depth(k)
    spec = spec or ThresholdSpec.significance()
    if panel.T < k + 1:
        raise DataError(f"panel has {panel.T} ticks, depth {k} needs at least {k + 1}")
    r_sign = critical_r(k, spec)
    ticks = np.array(list(analysed_ticks(panel, k)), dtype=np.int64)
    surface = np.zeros((panel.n, ticks.size))
    for c, t in enumerate(ticks.tolist()):
        R = correlation_matrix(standardize(window_slice(panel, t, k)))
        surface[:, c] = weights(R, r_sign)
    g = surface.sum(axis=0)
    surface.setflags(write=False)
    g.setflags(write=False)
    return IndicatorResult(
        labels=tuple(panel.labels),
        ticks=ticks,
        gi_surface=surface,
        g_per_tick=g,
        g_total=g_totals(g, panel.n),
        k=k,
        threshold=spec,
        threshold_used={int(t): r_sign for t in ticks.tolist()},
    )


# ---------------------------------------------------------------------------
# Correlation graphs


@dataclass(frozen=True)
class CorrelationGraph:
    anchor_t: int
    nodes: tuple[str, ...]
    edges: tuple[tuple[int, int, float], ...]  # (i, j, r_ij), 0-based, i < j

    def edge_labels(self) -> list[tuple[str, str, float]]:
        return [(self.nodes[i], self.nodes[j], r) for i, j, r in self.edges]


def correlation_graph(R: CorrelationMatrix, r_sign: float, labels: Sequence[str]) -> CorrelationGraph:
    """Pairs with ``|r_ij| >= r_sign``; every parameter is a node."""
    if len(labels) != R.n:
        raise DataError(f"{len(labels)} labels for a {R.n}x{R.n} matrix")
    ok = ~np.asarray(R.degenerate, dtype=bool)
    keep = (np.abs(R.entries) >= r_sign) & ok[:, None] & ok[None, :]
    ii, jj = np.nonzero(np.triu(keep, 1))
    edges = tuple((int(i), int(j), float(R.entries[i, j])) for i, j in zip(ii, jj))
    return CorrelationGraph(R.anchor_t, tuple(labels), edges)


def graph_at(panel: TimeSeriesPanel, t: int, k: int, spec: ThresholdSpec) -> CorrelationGraph:
    R = correlation_matrix(standardize(window_slice(panel, t, k)))
    return correlation_graph(R, critical_r(k, spec), panel.labels)


# ---------------------------------------------------------------------------
# Exports


def _quote(label: str) -> str:
    return '"' + label.replace("\\", "\\\\").replace('"', '\\"') + '"'


def graph_to_dot(graph: CorrelationGraph) -> str:
    lines = ["graph {"]
    lines += [f"  {_quote(lab)};" for lab in graph.nodes]
    for a, b, r in graph.edge_labels():
        lines.append(f"  {_quote(a)} -- {_quote(b)} [weight={r:.2f}];")
    lines.append("}")
    return "\n".join(lines) + "\n"


def gi_surface_csv(result: IndicatorResult, digits: int = DEFAULT_DIGITS) -> str:
    out = io.StringIO()
    w = csv.writer(out, lineterminator="\n")
    w.writerow(["t", *result.labels])
    for c, t in enumerate(result.ticks.tolist()):
        w.writerow([str(t), *(fmt_sig(v, digits) for v in result.gi_surface[:, c].tolist())])
    return out.getvalue()


def dynamics_csv(result: IndicatorResult, digits: int = DEFAULT_DIGITS) -> str:
    lines = ["t,G"]
    lines += [f"{t},{fmt_sig(g, digits)}" for t, g in zip(result.ticks.tolist(), result.g_per_tick.tolist())]
    return "\n".join(lines) + "\n"


def report_dict(result: IndicatorResult, scenario_id, mode: str = "per_tick",
                digits: int = DEFAULT_DIGITS) -> dict:
    """JSON report; ``mode`` records the normalisation chosen for display."""
    if mode not in MODES:
        raise ConfigError(f"unknown normalisation mode {mode!r}; expected one of {MODES}")
    value_at_k = next(iter(result.threshold_used.values())) if result.threshold_used else None
    return {
        "scenario_id": scenario_id,
        "n": result.n,
        "ticks_analyzed": int(result.ticks.size),
        "k": result.k,
        "threshold": {
            "mode": result.threshold.mode,
            "value_at_k": None if value_at_k is None else json_number(value_at_k, digits),
        },
        "g_total": {m: json_number(result.g_total[m], digits) for m in MODES},
        "per_tick": [{"t": t, "G": json_number(g, digits)}
                     for t, g in zip(result.ticks.tolist(), result.g_per_tick.tolist())],
        "mode": mode,
    }


def report_json(result: IndicatorResult, scenario_id, mode: str = "per_tick",
                digits: int = DEFAULT_DIGITS) -> str:
    return json.dumps(report_dict(result, scenario_id, mode, digits), indent=2) + "\n"


def dynamics_svg(ticks: Sequence[int], g: Sequence[float], width: int = 640, height: int = 320,
                 title: str = "G(t)") -> str:
    """Polyline plot of G(t) with min/max tick and value labels."""
    ticks = [int(t) for t in ticks]
    g = [float(v) for v in g]
    pad = 40
    t0, t1 = (ticks[0], ticks[-1]) if ticks else (0, 1)
    lo, hi = (min(g), max(g)) if g else (0.0, 1.0)
    if t1 == t0:
        t1 = t0 + 1
    if hi == lo:
        hi = lo + 1.0

    def sx(t):
        return pad + (t - t0) * (width - 2 * pad) / (t1 - t0)

    def sy(v):
        return height - pad - (v - lo) * (height - 2 * pad) / (hi - lo)

    pts = " ".join(f"{sx(t):.2f},{sy(v):.2f}" for t, v in zip(ticks, g))
    return (
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" '
        f'viewBox="0 0 {width} {height}">\n'
        f'  <rect width="{width}" height="{height}" fill="white"/>\n'
        f'  <text x="{pad}" y="{pad / 2:.0f}" font-size="14">{title}</text>\n'
        f'  <line x1="{pad}" y1="{height - pad}" x2="{width - pad}" y2="{height - pad}" stroke="black"/>\n'
        f'  <line x1="{pad}" y1="{pad}" x2="{pad}" y2="{height - pad}" stroke="black"/>\n'
        f'  <text x="{pad}" y="{height - pad / 3:.0f}" font-size="11">{t0}</text>\n'
        f'  <text x="{width - pad}" y="{height - pad / 3:.0f}" font-size="11" text-anchor="end">{ticks[-1] if ticks else t1}</text>\n'
        f'  <text x="{pad - 4}" y="{pad}" font-size="11" text-anchor="end">{fmt_sig(hi, 4)}</text>\n'
        f'  <text x="{pad - 4}" y="{height - pad}" font-size="11" text-anchor="end">{fmt_sig(lo, 4)}</text>\n'
        f'  <polyline fill="none" stroke="steelblue" stroke-width="1.5" points="{pts}"/>\n'
        "</svg>\n"
    )
