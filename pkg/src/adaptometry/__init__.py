"""Correlation adaptometry for enterprise parameter panels.

Windowed Pearson correlations between parameters are thresholded at a
critical value and summed into per-parameter weights ``G_i(t)``, the
dynamics ``G(t)`` and an integral indicator used to compare control options.
"""

__version__ = "0.1.0"

from .correlation import CorrelationMatrix, correlation_matrix, format_matrix, pairwise_r
from .errors import (AdaptometryError, ConfigError, DataError, FormatError, InsufficientHistory,
                     InvalidDepth)
from .indicator import (CorrelationGraph, IndicatorResult, ThresholdSpec, correlation_graph, critical_r,
                        graph_at, graph_to_dot, indicator_series, weight_indicator, weights)
from .panel import (Block, ParameterMeta, TimeSeriesPanel, WindowMatrix, format_panel, load_panel,
                    standardize, window_slice, write_panel)
from .scenarios import (Ranking, Regime, RegimePhase, ScenarioScore, compare_report, detect_regimes,
                        rank_options)
from .simulate import ControlOption, SimConfig, builtin_options, environment_timeline, get_option, simulate

__all__ = [
    "AdaptometryError", "Block", "ConfigError", "ControlOption", "CorrelationGraph", "CorrelationMatrix",
    "DataError", "FormatError", "IndicatorResult", "InsufficientHistory", "InvalidDepth",
    "ParameterMeta", "Ranking", "Regime", "RegimePhase", "ScenarioScore", "SimConfig",
    "ThresholdSpec", "TimeSeriesPanel", "WindowMatrix", "builtin_options", "compare_report",
    "correlation_graph", "correlation_matrix", "critical_r", "detect_regimes", "environment_timeline",
    "format_matrix", "format_panel", "get_option", "graph_at", "graph_to_dot", "indicator_series",
    "load_panel", "pairwise_r", "rank_options", "simulate", "standardize", "weight_indicator",
    "weights", "window_slice", "write_panel",
]
