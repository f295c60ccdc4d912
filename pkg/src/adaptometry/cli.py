"""Command-line interface: ``adaptometry simulate|analyze|graph|compare|replay``.

Exit codes: 0 success, 1 usage or configuration error, 2 data or I/O error.
Every command writes a JSON manifest next to its outputs recording the argv,
every resolved setting and the tool version, so ``replay`` can regenerate the
same bytes.
"""
from __future__ import annotations

import argparse
import datetime as _dt
import json
import sys
from pathlib import Path
from typing import Sequence

from . import __version__
from .errors import ConfigError, DataError, FormatError
from .formatting import DEFAULT_DIGITS, atomic_write_text
from .indicator import (MODES, ThresholdSpec, critical_r, dynamics_csv, dynamics_svg, gi_surface_csv,
                        graph_at, graph_to_dot, indicator_series, report_json)
from .panel import check_depth, load_panel, write_panel
from .scenarios import OBJECTIVES, ScenarioScore, compare_json, compare_report, detect_regimes, rank_options
from .simulate import SimConfig, as_dict, get_option, load_scenario_config, resolve, simulate

EXIT_OK, EXIT_USAGE, EXIT_DATA = 0, 1, 2


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    # argparse exits with 2 on bad usage; 2 is reserved for data errors here
    def error(self, message):
        self.print_usage(sys.stderr)
        raise UsageError(f"{self.prog}: error: {message}")


def _manifest_path(out: Path, is_dir: bool) -> Path:
    return out / "manifest.json" if is_dir else out.with_name(out.name + ".manifest.json")


def _write_manifest(path: Path, command: str, argv: Sequence[str], config: dict,
                    inputs: dict, outputs: dict, seed=None) -> None:
    doc = {
        "tool": "adaptometry",
        "version": __version__,
        "command": command,
        "argv": list(argv),
        "config": config,
        "inputs": inputs,
        "outputs": outputs,
        "seed": seed,
        "timestamp": _dt.datetime.now(_dt.timezone.utc).isoformat(timespec="seconds"),
    }
    atomic_write_text(path, json.dumps(doc, indent=2) + "\n")


def _threshold(args) -> ThresholdSpec:
    if args.threshold is not None:
        return ThresholdSpec.fixed(args.threshold)
    return ThresholdSpec.significance(0.05 if args.alpha is None else args.alpha)


def _threshold_config(spec: ThresholdSpec, k: int) -> dict:
    return {"mode": spec.mode, "alpha": spec.alpha, "fixed_r": spec.fixed_r,
            "value_at_k": critical_r(k, spec)}


# ---------------------------------------------------------------------------
# Commands


def cmd_simulate(args, argv) -> int:
    values = load_scenario_config(args.config) if args.config else {}
    option = get_option(args.option) if args.option is not None else None
    option, config = resolve(values, option)
    overrides = {"seed": args.seed, "n_parameters": args.n, "horizon_T": args.horizon}
    config = SimConfig(**{**as_dict(config), **{k: v for k, v in overrides.items() if v is not None}})
    panel = simulate(option, config)
    out = Path(args.out)
    write_panel(panel, out, digits=args.digits)
    _write_manifest(_manifest_path(out, False), "simulate", argv,
                    {"option": as_dict(option), "sim": as_dict(config), "digits": args.digits},
                    {"config": args.config}, {"panel": str(out)}, seed=config.seed)
    return EXIT_OK


def _scenario_id(panel_path: Path):
    manifest = _manifest_path(panel_path, False)
    if manifest.exists():
        try:
            doc = json.loads(manifest.read_text(encoding="utf-8"))
            return doc["config"]["option"]["id"]
        except (ValueError, KeyError, TypeError):
            pass
    return panel_path.stem


def cmd_analyze(args, argv) -> int:
    k = check_depth(args.window)
    spec = _threshold(args)
    panel_path = Path(args.panel)
    panel = load_panel(panel_path)
    result = indicator_series(panel, k, spec)
    scenario_id = args.id if args.id is not None else _scenario_id(panel_path)
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    files = {
        "report": out / "report.json",
        "dynamics": out / "g_dynamics.csv",
        "surface": out / "gi_surface.csv",
    }
    atomic_write_text(files["report"], report_json(result, scenario_id, args.mode, args.digits))
    atomic_write_text(files["dynamics"], dynamics_csv(result, args.digits))
    atomic_write_text(files["surface"], gi_surface_csv(result, args.digits))
    if args.svg:
        files["svg"] = out / "g_dynamics.svg"
        atomic_write_text(files["svg"], dynamics_svg(result.ticks, result.g_per_tick,
                                                     title=f"G(t), scenario {scenario_id}"))
    _write_manifest(_manifest_path(out, True), "analyze", argv,
                    {"window": k, "threshold": _threshold_config(spec, k), "mode": args.mode,
                     "digits": args.digits, "scenario_id": scenario_id},
                    {"panel": str(panel_path)}, {k_: str(v) for k_, v in files.items()})
    return EXIT_OK


def cmd_graph(args, argv) -> int:
    k = check_depth(args.window)
    spec = _threshold(args)
    panel = load_panel(args.panel)
    graph = graph_at(panel, args.t, k, spec)
    out = Path(args.out)
    atomic_write_text(out, graph_to_dot(graph))
    _write_manifest(_manifest_path(out, False), "graph", argv,
                    {"t": args.t, "window": k, "threshold": _threshold_config(spec, k),
                     "edges": len(graph.edges)},
                    {"panel": str(args.panel)}, {"dot": str(out)})
    return EXIT_OK


def _read_report(path: str) -> ScenarioScore:
    try:
        doc = json.loads(Path(path).read_text(encoding="utf-8"))
    except ValueError as exc:
        raise DataError(f"{path}: not valid JSON ({exc})") from None
    return ScenarioScore.from_report(doc)


def cmd_compare(args, argv) -> int:
    scores = [_read_report(p) for p in args.reports]
    ranking = rank_options(scores, args.objective, args.mode)
    regimes = {}
    for s in scores:
        if len(s.per_tick) >= 2 * args.regime_window:
            regimes[s.option_id] = detect_regimes(s, args.regime_window, args.rel_eps)
    doc = compare_report(scores, ranking, regimes, digits=args.digits)
    out = Path(args.out)
    atomic_write_text(out, compare_json(doc))
    _write_manifest(_manifest_path(out, False), "compare", argv,
                    {"objective": args.objective, "mode": ranking.mode,
                     "regime_window": args.regime_window, "rel_eps": args.rel_eps,
                     "digits": args.digits},
                    {"reports": list(args.reports)}, {"comparison": str(out)})
    return EXIT_OK


def cmd_replay(args, argv) -> int:
    try:
        doc = json.loads(Path(args.manifest).read_text(encoding="utf-8"))
        recorded = doc["argv"]
    except (ValueError, KeyError, TypeError) as exc:
        raise DataError(f"{args.manifest}: not a run manifest ({exc})") from None
    if recorded and recorded[0] == "replay":
        raise ConfigError("a replay manifest cannot be replayed")
    return main(recorded)


# ---------------------------------------------------------------------------
# Parser


def _add_threshold(p: argparse.ArgumentParser) -> None:
    g = p.add_mutually_exclusive_group()
    g.add_argument("--alpha", type=float, default=None,
                   help="two-sided significance level for the critical r (default 0.05)")
    g.add_argument("--threshold", type=float, default=None, help="fixed critical |r| in [0,1]")


def _add_digits(p: argparse.ArgumentParser) -> None:
    p.add_argument("--digits", type=int, default=DEFAULT_DIGITS,
                   help="significant digits in written numbers (default %(default)s)")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="adaptometry",
                     description="Correlation adaptometry of enterprise parameter panels.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("simulate", help="generate a synthetic panel for a control option")
    p.add_argument("--option", type=int, help="control option 1..6")
    p.add_argument("--config", help="scenario config file (key = value lines)")
    p.add_argument("--seed", type=int)
    p.add_argument("--n", type=int, help="number of parameters (default 200)")
    p.add_argument("--horizon", type=int, help="number of monthly ticks (default 62)")
    p.add_argument("--out", required=True, help="panel CSV to write")
    _add_digits(p)
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("analyze", help="compute G_i(t), G(t) and the integral indicator")
    p.add_argument("--panel", required=True)
    p.add_argument("--window", type=int, default=12, help="window depth k (default 12)")
    _add_threshold(p)
    p.add_argument("--mode", choices=MODES, default="per_tick",
                   help="normalisation shown in the report (default per_tick)")
    p.add_argument("--id", help="scenario id for the report (default: from the panel manifest)")
    p.add_argument("--svg", action="store_true", help="also write g_dynamics.svg")
    p.add_argument("--out", required=True, help="output directory")
    _add_digits(p)
    p.set_defaults(func=cmd_analyze)

    p = sub.add_parser("graph", help="export the correlation graph at one tick as DOT")
    p.add_argument("--panel", required=True)
    p.add_argument("--t", type=int, required=True, help="anchor tick")
    p.add_argument("--window", type=int, default=12)
    _add_threshold(p)
    p.add_argument("--out", required=True, help="DOT file to write")
    p.set_defaults(func=cmd_graph)

    p = sub.add_parser("compare", help="rank analysed options by integral indicator")
    p.add_argument("--reports", nargs="+", required=True, help="report.json files from analyze")
    p.add_argument("--objective", choices=OBJECTIVES, default="min")
    p.add_argument("--mode", choices=MODES, default=None,
                   help="normalisation to rank by (required when reports disagree)")
    p.add_argument("--regime-window", type=int, default=4)
    p.add_argument("--rel-eps", type=float, default=0.02)
    p.add_argument("--out", required=True)
    _add_digits(p)
    p.set_defaults(func=cmd_compare)

    p = sub.add_parser("replay", help="re-run the command recorded in a manifest")
    p.add_argument("--manifest", required=True)
    p.set_defaults(func=cmd_replay)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        return args.func(args, argv)
    except UsageError as exc:
        print(exc, file=sys.stderr)
        return EXIT_USAGE
    except SystemExit as exc:  # --help / --version
        return EXIT_OK if exc.code in (0, None) else EXIT_USAGE
    except ConfigError as exc:
        print(f"adaptometry: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (DataError, FormatError) as exc:
        print(f"adaptometry: error: {exc}", file=sys.stderr)
        return EXIT_DATA
    except OSError as exc:
        print(f"adaptometry: error: {exc.strerror or exc}: {exc.filename or ''}".rstrip(": "),
              file=sys.stderr)
        return EXIT_DATA


if __name__ == "__main__":
    sys.exit(main())
