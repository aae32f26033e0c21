"""Command-line interface: ingestion, reports, statistics and serving.

Every query subcommand supports ``--json``, which prints exactly the
payload the HTTP scoreboard would put in its envelope's ``data`` field,
rendered by the same canonical serializer.  Exit codes: 0 success, 1 domain
error (printed to stderr as ``code: message``), 2 usage error.

The store directory comes from ``--store`` or, when the flag is absent,
from the ``RELQUANT_STORE`` environment variable.
"""

from __future__ import annotations

import argparse
import os
import signal
import sys
from typing import Optional, Sequence

from . import serialize
from .decay import DEFAULT_DEVIATION_K, fit_decay
from .errors import RelquantError
from .indicators import (
    INDICATOR_NAMES,
    INDICATOR_UNITS,
    IndicatorValue,
    compute_indicator_set,
    indicator_series,
)
from .reports import (
    anomaly_distribution,
    board_report,
    default_week_span,
    render_board_table,
    render_weekly_table,
    weekly_new_counts,
    weekly_trend,
)
from .service import SnapshotHolder, create_app
from .stats import evaluate
from .store import Dataset, load, load_store, parse_instant, save

STORE_ENV_VAR = "RELQUANT_STORE"

_STAT_COMMANDS = {
    "mean": "mean",
    "stddev": "stddev",
    "corr": "correlation",
    "reg": "regression",
}


def _add_store_option(parser: argparse.ArgumentParser) -> None:
    default = os.environ.get(STORE_ENV_VAR)
    parser.add_argument(
        "--store",
        default=default,
        required=default is None,
        help=f"store directory (default: ${STORE_ENV_VAR})",
    )


def _add_json_option(parser: argparse.ArgumentParser) -> None:
    parser.add_argument(
        "--json", action="store_true", help="print the canonical wire payload"
    )


def _add_as_of_option(parser: argparse.ArgumentParser) -> None:
    parser.add_argument(
        "--as-of",
        dest="as_of",
        default=None,
        help="evaluation instant (YYYY-MM-DD or YYYY-MM-DDTHH:MM:SSZ); "
        "defaults to the data horizon",
    )


def _resolve_as_of(args: argparse.Namespace, dataset: Dataset):
    if args.as_of is None:
        return dataset.loaded_at
    return parse_instant(args.as_of)


def _emit(args: argparse.Namespace, payload, text: str) -> int:
    if args.json:
        print(serialize.canonical_json(payload))
    else:
        print(text)
    return 0


def _format_value(value: IndicatorValue) -> str:
    if value.applicable:
        return format(value.value, ".6g")
    return f"n/a ({value.na_reason.value})"


# --- subcommands -----------------------------------------------------------

def _cmd_ingest(args: argparse.Namespace) -> int:
    dataset = load(args.releases, args.anomalies)
    save(dataset, args.out)
    payload = serialize.ingest_summary_payload(dataset)
    text = (
        f"ingested {payload['releases']} releases, {payload['anomalies']} anomalies "
        f"(components: {', '.join(payload['components'])}) into {args.out}"
    )
    return _emit(args, payload, text)


def _cmd_export(args: argparse.Namespace) -> int:
    dataset = load_store(args.store)
    releases_path, anomalies_path = save(dataset, args.out)
    print(f"wrote {releases_path}\nwrote {anomalies_path}")
    return 0


def _cmd_indicators(args: argparse.Namespace) -> int:
    dataset = load_store(args.store)
    release = dataset.release(args.release)
    as_of = _resolve_as_of(args, dataset)
    indicator_set = compute_indicator_set(
        release, dataset.release_anomalies(release.id), as_of
    )
    payload = serialize.indicator_set_payload(indicator_set, as_of)
    values = indicator_set.values()
    lines = [f"indicators for {release.id} as of {payload['as_of']}"]
    lines.append(f"{'indicator':<13} {'value':<20} unit")
    for name in INDICATOR_NAMES:
        lines.append(
            f"{name:<13} {_format_value(values[name]):<20} {INDICATOR_UNITS[name]}"
        )
    return _emit(args, payload, "\n".join(lines))


def _cmd_series(args: argparse.Namespace) -> int:
    dataset = load_store(args.store)
    as_of = _resolve_as_of(args, dataset)
    points = indicator_series(dataset, args.component, args.indicator, as_of)
    payload = serialize.series_payload(args.indicator, args.component, points, as_of)
    lines = [
        f"{args.indicator} [{INDICATOR_UNITS[args.indicator]}] across "
        f"{args.component or 'all components'}"
    ]
    lines.append(f"{'release':<12} {'version':<10} {'released':<12} value")
    for release, value in points:
        lines.append(
            f"{release.id:<12} {release.version:<10} "
            f"{release.released_at.isoformat():<12} {_format_value(value)}"
        )
    return _emit(args, payload, "\n".join(lines))


def _cmd_report_weekly(args: argparse.Namespace) -> int:
    dataset = load_store(args.store)
    start, end = args.from_week, args.to_week
    if start is None or end is None:
        span = default_week_span(dataset, args.platform)
        if span is None:
            return _emit(args, serialize.weekly_payload([], args.platform), "no anomalies")
        start = start or str(span[0])
        end = end or str(span[1])
    reports = weekly_trend(dataset, start, end, args.platform)
    payload = serialize.weekly_payload(reports, args.platform)
    return _emit(args, payload, render_weekly_table(reports))


def _cmd_report_board(args: argparse.Namespace) -> int:
    dataset = load_store(args.store)
    report = board_report(dataset, _resolve_as_of(args, dataset))
    return _emit(args, serialize.board_payload(report), render_board_table(report))


def _cmd_distribution(args: argparse.Namespace) -> int:
    dataset = load_store(args.store)
    result = anomaly_distribution(dataset, args.release, _resolve_as_of(args, dataset))
    text = (
        f"release {result.release_id}: new={result.new} "
        f"inherited={result.inherited} solved={result.solved}"
    )
    return _emit(args, serialize.distribution_payload(result), text)


def _cmd_decay(args: argparse.Namespace) -> int:
    dataset = load_store(args.store)
    points = weekly_new_counts(dataset, args.release)
    fit = fit_decay(points, release_id=args.release, deviation_k=args.k)
    payload = serialize.decay_payload(fit, args.k)
    lines = [
        f"decay fit for {args.release}: "
        f"N(t) = {fit.floor:.4g} + {fit.amplitude:.4g}*exp(-{fit.rate:.4g}*t), "
        f"rmse {fit.rmse:.4g}"
    ]
    lines.append(f"{'week':>4} {'observed':>9} {'predicted':>10} flag")
    for deviation in fit.deviations:
        mark = "DEVIATES" if deviation.flagged else ""
        lines.append(
            f"{deviation.week:>4} {deviation.observed:>9.6g} "
            f"{deviation.predicted:>10.6g} {mark}"
        )
    return _emit(args, payload, "\n".join(lines))


def _cmd_stats(args: argparse.Namespace) -> int:
    dataset = load_store(args.store)
    operation = _STAT_COMMANDS[args.stat_command]
    result = evaluate(
        dataset,
        operation,
        args.x,
        getattr(args, "y", None),
        args.component,
        _resolve_as_of(args, dataset),
    )
    parts = " ".join(f"{key}={value:.10g}" for key, value in result.values.items())
    text = f"{result.operation}({', '.join(result.inputs)}): {parts} n={result.n}"
    return _emit(args, serialize.stat_payload(result), text)


def _cmd_serve(args: argparse.Namespace) -> int:
    import uvicorn

    holder = SnapshotHolder.from_store(args.store)
    app = create_app(holder)

    def _reload_handler(signum, frame) -> None:
        try:
            snapshot = holder.reload()
            print(
                f"store reloaded: {len(snapshot.releases)} releases, "
                f"{len(snapshot.anomalies)} anomalies",
                file=sys.stderr,
            )
        except RelquantError as exc:
            print(f"reload failed: {exc.code}: {exc.message}", file=sys.stderr)

    if hasattr(signal, "SIGHUP"):
        signal.signal(signal.SIGHUP, _reload_handler)
    uvicorn.run(app, host=args.host, port=args.port)
    return 0


# --- parser ----------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="relquant",
        description="Release quality indicators, anomaly reports and statistics.",
    )
    commands = parser.add_subparsers(dest="command", required=True)

    p = commands.add_parser("ingest", help="validate and store a file pair")
    p.add_argument("--releases", required=True, help="releases file to ingest")
    p.add_argument("--anomalies", required=True, help="anomalies file to ingest")
    p.add_argument("--out", required=True, help="store directory to write")
    _add_json_option(p)
    p.set_defaults(func=_cmd_ingest)

    p = commands.add_parser("export", help="write the canonical file pair")
    _add_store_option(p)
    p.add_argument("--out", required=True, help="directory for the exported pair")
    p.set_defaults(func=_cmd_export)

    p = commands.add_parser("indicators", help="indicator set for one release")
    _add_store_option(p)
    p.add_argument("--release", required=True, help="release id")
    _add_as_of_option(p)
    _add_json_option(p)
    p.set_defaults(func=_cmd_indicators)

    p = commands.add_parser("series", help="one indicator across releases")
    _add_store_option(p)
    p.add_argument("--indicator", required=True, choices=INDICATOR_NAMES)
    p.add_argument("--component", default=None, help="restrict to one component")
    _add_as_of_option(p)
    _add_json_option(p)
    p.set_defaults(func=_cmd_series)

    p = commands.add_parser("report", help="weekly trend and board reports")
    report_commands = p.add_subparsers(dest="report_command", required=True)

    weekly = report_commands.add_parser("weekly", help="weekly anomaly trend")
    _add_store_option(weekly)
    weekly.add_argument("--from", dest="from_week", default=None, help="first ISO week")
    weekly.add_argument("--to", dest="to_week", default=None, help="last ISO week")
    weekly.add_argument("--platform", default=None, help="restrict to one platform")
    _add_json_option(weekly)
    weekly.set_defaults(func=_cmd_report_weekly)

    board = report_commands.add_parser("board", help="board meeting agenda")
    _add_store_option(board)
    _add_as_of_option(board)
    _add_json_option(board)
    board.set_defaults(func=_cmd_report_board)

    p = commands.add_parser("distribution", help="new/inherited/solved counts")
    _add_store_option(p)
    p.add_argument("--release", required=True, help="release id")
    _add_as_of_option(p)
    _add_json_option(p)
    p.set_defaults(func=_cmd_distribution)

    p = commands.add_parser("decay", help="weekly decay trend fit")
    _add_store_option(p)
    p.add_argument("--release", required=True, help="release id")
    p.add_argument(
        "--k",
        type=float,
        default=DEFAULT_DEVIATION_K,
        help="deviation threshold in residual errors",
    )
    _add_json_option(p)
    p.set_defaults(func=_cmd_decay)

    p = commands.add_parser("stats", help="on-demand statistics over series")
    stat_commands = p.add_subparsers(dest="stat_command", required=True)
    for name, operation in _STAT_COMMANDS.items():
        sp = stat_commands.add_parser(name, help=f"{operation} over a series")
        _add_store_option(sp)
        sp.add_argument("--x", required=True, help="series name")
        if name in ("corr", "reg"):
            sp.add_argument("--y", required=True, help="second series name")
        sp.add_argument("--component", default=None)
        _add_as_of_option(sp)
        _add_json_option(sp)
        sp.set_defaults(func=_cmd_stats)

    p = commands.add_parser("serve", help="run the HTTP scoreboard")
    _add_store_option(p)
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--port", type=int, default=8000)
    p.set_defaults(func=_cmd_serve)

    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.func(args)
    except RelquantError as exc:
        print(f"error: {exc.code}: {exc.message}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
