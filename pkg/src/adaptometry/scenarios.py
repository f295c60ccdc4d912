"""Cross-scenario comparison: ranking by integral indicator and regime phases.

Lower G is not assumed to be better.  The objective is always explicit and
reports carry the ranking under both directions.
"""
from __future__ import annotations

import json
from dataclasses import dataclass
from enum import Enum
from typing import Iterable, Mapping, Sequence

import numpy as np

from .errors import ConfigError, DataError
from .formatting import DEFAULT_DIGITS, json_number
from .indicator import MODES, IndicatorResult

OBJECTIVES = ("min", "max")


class Regime(str, Enum):
    STABLE = "stable"
    STRESS_GROWTH = "stress_growth"
    ADAPTATION = "adaptation"
    NON_ADAPTATION = "non_adaptation"


@dataclass(frozen=True)
class ScenarioScore:
    """Integral indicator of one control option under every normalisation."""

    option_id: int | str
    g_total: Mapping[str, float]
    per_tick: tuple[tuple[int, float], ...] = ()
    mode: str | None = None  # normalisation the producing report was asked to display

    def __post_init__(self):
        for m, v in self.g_total.items():
            if not v >= 0:
                raise DataError(f"option {self.option_id}: g_total[{m}] must be >= 0, got {v}")
        if self.mode is not None and self.mode not in MODES:
            raise ConfigError(f"unknown normalisation mode {self.mode!r}")
        object.__setattr__(self, "g_total", dict(self.g_total))
        object.__setattr__(self, "per_tick", tuple((int(t), float(g)) for t, g in self.per_tick))

    @classmethod
    def from_result(cls, option_id, result: IndicatorResult, mode: str | None = None) -> "ScenarioScore":
        pairs = zip(result.ticks.tolist(), result.g_per_tick.tolist())
        return cls(option_id, dict(result.g_total), tuple(pairs), mode)

    @classmethod
    def from_report(cls, doc: Mapping) -> "ScenarioScore":
        """Inverse of :func:`adaptometry.indicator.report_dict`."""
        try:
            per_tick = tuple((row["t"], row["G"]) for row in doc.get("per_tick", ()))
            return cls(doc["scenario_id"], dict(doc["g_total"]), per_tick, doc.get("mode"))
        except (KeyError, TypeError) as exc:
            raise DataError(f"malformed indicator report: missing {exc}") from None

    def ticks(self) -> np.ndarray:
        return np.array([t for t, _ in self.per_tick], dtype=np.int64)

    def series(self) -> np.ndarray:
        return np.array([g for _, g in self.per_tick], dtype=np.float64)


@dataclass(frozen=True)
class Ranking:
    mode: str
    objective: str
    order: tuple[ScenarioScore, ...]

    @property
    def ids(self) -> list:
        return [s.option_id for s in self.order]

    def rank_of(self, option_id) -> int:
        for pos, s in enumerate(self.order, start=1):
            if s.option_id == option_id:
                return pos
        raise KeyError(option_id)


def _id_key(option_id):
    # numeric ids compare as numbers, anything else falls back to text
    try:
        return (0, float(option_id), "")
    except (TypeError, ValueError):
        return (1, 0.0, str(option_id))


def resolve_mode(scores: Sequence[ScenarioScore], mode: str | None = None) -> str:
    """The normalisation to rank by: ``mode`` if given, else the one all scores agree on."""
    if mode is not None:
        if mode not in MODES:
            raise ConfigError(f"unknown normalisation mode {mode!r}; expected one of {MODES}")
        return mode
    seen = sorted({s.mode for s in scores if s.mode is not None})
    if len(seen) > 1:
        raise ConfigError(f"scores use mixed normalisation modes {seen}; pass an explicit mode")
    return seen[0] if seen else "per_tick"


def rank_options(scores: Iterable[ScenarioScore], objective: str = "min",
                 mode: str | None = None) -> Ranking:
    """Order options by ``g_total[mode]``; ties go to the smaller option id."""
    scores = list(scores)
    if not scores:
        raise ConfigError("nothing to rank: no scenario scores given")
    if objective not in OBJECTIVES:
        raise ConfigError(f"objective must be 'min' or 'max', got {objective!r}")
    mode = resolve_mode(scores, mode)
    for s in scores:
        if mode not in s.g_total:
            raise ConfigError(f"option {s.option_id} has no g_total for mode {mode!r}")
    sign = 1.0 if objective == "min" else -1.0
    order = sorted(scores, key=lambda s: (sign * s.g_total[mode], _id_key(s.option_id)))
    return Ranking(mode, objective, tuple(order))


@dataclass(frozen=True)
class RegimePhase:
    start: int  # first tick, inclusive
    end: int  # last tick, inclusive
    cls: Regime

    def intersects(self, lo: int, hi: int) -> bool:
        return self.start <= hi and lo <= self.end

    def as_dict(self) -> dict:
        return {"from": self.start, "to": self.end, "class": self.cls.value}


def smoothed(g: np.ndarray, window_w: int) -> np.ndarray:
    """Trailing moving mean; the first ``window_w - 1`` points average what exists."""
    c = np.cumsum(np.concatenate([[0.0], g]))
    idx = np.arange(1, g.size + 1)
    lo = np.maximum(idx - window_w, 0)
    return (c[idx] - c[lo]) / (idx - lo)


def detect_regimes(g_series, window_w: int = 4, rel_eps: float = 0.02, min_phase: int = 2,
                   ticks: Sequence[int] | None = None) -> list[RegimePhase]:
    """Split G(t) into stable, stress-growth and adaptation phases.

    Each tick is classified by the slope of the trailing ``window_w`` moving
    mean against ``rel_eps`` times the smoothed level.  Runs shorter than
    ``min_phase`` ticks are absorbed by their predecessor.  Growth that lasts
    to the end of the series becomes ``non_adaptation``.

    ``g_series`` may be an :class:`IndicatorResult`, a :class:`ScenarioScore`
    or a plain sequence (ticks then default to 0, 1, ...).
    """
    if isinstance(g_series, IndicatorResult):
        ticks = g_series.ticks if ticks is None else ticks
        g = np.asarray(g_series.g_per_tick, dtype=np.float64)
    elif isinstance(g_series, ScenarioScore):
        ticks = g_series.ticks() if ticks is None else ticks
        g = g_series.series()
    else:
        g = np.asarray(g_series, dtype=np.float64)
    if int(window_w) != window_w or window_w < 1:
        raise ConfigError(f"window_w must be a positive integer, got {window_w}")
    if not rel_eps >= 0:
        raise ConfigError(f"rel_eps must be >= 0, got {rel_eps}")
    if min_phase < 1:
        raise ConfigError(f"min_phase must be >= 1, got {min_phase}")
    if g.ndim != 1 or g.size < 2 * window_w:
        raise DataError(f"series of {g.size} ticks is shorter than 2*window_w = {2 * window_w}")
    ticks = np.arange(g.size) if ticks is None else np.asarray(ticks, dtype=np.int64)
    if ticks.size != g.size:
        raise DataError(f"{ticks.size} ticks for a series of {g.size} values")

    s = smoothed(g, int(window_w))
    slope = np.diff(s, prepend=s[0])
    slope[0] = slope[1]
    band = rel_eps * np.abs(s)
    labels = np.where(slope > band, 1, np.where(slope < -band, -1, 0))

    runs: list[list[int]] = []  # [label, start_pos, end_pos]
    for pos, lab in enumerate(labels.tolist()):
        if runs and runs[-1][0] == lab:
            runs[-1][2] = pos
        else:
            runs.append([lab, pos, pos])
    merged: list[list[int]] = []
    for run in runs:
        if merged and run[2] - run[1] + 1 < min_phase:
            merged[-1][2] = run[2]
        elif merged and merged[-1][0] == run[0]:
            merged[-1][2] = run[2]
        else:
            merged.append(list(run))
    # a short leading run cannot merge backwards; fold it forward instead
    if len(merged) > 1 and merged[0][2] - merged[0][1] + 1 < min_phase:
        merged[1][1] = merged[0][1]
        merged.pop(0)

    names = {1: Regime.STRESS_GROWTH, -1: Regime.ADAPTATION, 0: Regime.STABLE}
    phases = [RegimePhase(int(ticks[a]), int(ticks[b]), names[lab]) for lab, a, b in merged]
    if phases[-1].cls is Regime.STRESS_GROWTH:
        last = phases[-1]
        phases[-1] = RegimePhase(last.start, last.end, Regime.NON_ADAPTATION)
    return phases


def compare_report(scores: Sequence[ScenarioScore], ranking: Ranking,
                   regimes: Mapping[object, Sequence[RegimePhase]] | None = None,
                   mode: str | None = None, digits: int = DEFAULT_DIGITS) -> dict:
    """Comparison document: per-option total, rank, delta to the best and phases.

    ``delta`` is measured from the smallest total whatever the objective and
    is ``None`` when there is only one option.  ``rank_opposite`` is the rank
    under the reverse objective.
    """
    mode = ranking.mode if mode is None else mode
    if mode != ranking.mode:
        raise ConfigError(f"ranking was computed for mode {ranking.mode!r}, report asked for {mode!r}")
    ids = [s.option_id for s in scores]
    if sorted(map(str, ids)) != sorted(map(str, ranking.ids)):
        raise ConfigError("ranking and scores refer to different options")
    opposite = rank_options(scores, "max" if ranking.objective == "min" else "min", mode)
    regimes = regimes or {}
    totals = {s.option_id: json_number(s.g_total[mode], digits) for s in scores}
    floor = min(totals.values())
    options = []
    for s in ranking.order:
        g = totals[s.option_id]
        options.append({
            "id": s.option_id,
            "g_total": g,
            "rank": ranking.rank_of(s.option_id),
            "rank_opposite": opposite.rank_of(s.option_id),
            "delta": json_number(g - floor, digits) if len(scores) > 1 else None,
            "regimes": [p.as_dict() for p in regimes.get(s.option_id, ())],
        })
    return {"mode": mode, "objective": ranking.objective, "options": options}


def compare_json(doc: Mapping) -> str:
    return json.dumps(doc, indent=2) + "\n"
