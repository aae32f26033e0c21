"""Canonical wire format shared by the CLI and the HTTP scoreboard.

Every payload that can leave the system is built here, and both the CLI's
``--json`` mode and the HTTP service serialize these exact dictionaries with
:func:`canonical_json`.  That single code path is what guarantees
byte-identical output for identical queries, whichever door they come in
through.
"""

from __future__ import annotations

import json
from datetime import date, datetime
from typing import Any, Optional

from .decay import DecayFit
from .domain import UTC, Anomaly, Release
from .indicators import INDICATOR_UNITS, IndicatorSet, IndicatorValue
from .reports import (
    AnomalyDistribution,
    BoardEntry,
    BoardReport,
    WeeklyAnomalyReport,
)
from .stats import StatResult
from .store import Dataset


def canonical_json(payload: Any) -> str:
    """One canonical rendering per payload: sorted keys, no whitespace."""
    return json.dumps(payload, sort_keys=True, separators=(",", ":"), ensure_ascii=False)


def format_timestamp(value: datetime) -> str:
    return value.astimezone(UTC).strftime("%Y-%m-%dT%H:%M:%SZ")


def format_date(value: Optional[date]) -> Optional[str]:
    return None if value is None else value.isoformat()


def envelope_ok(data: Any, generated_at: datetime) -> dict[str, Any]:
    return {
        "status": "ok",
        "data": data,
        "generated_at": format_timestamp(generated_at),
    }


def envelope_error(
    code: str, message: str, detail: dict[str, Any], generated_at: datetime
) -> dict[str, Any]:
    safe_detail = {
        key: value if isinstance(value, (str, int, float, bool, list)) or value is None
        else str(value)
        for key, value in detail.items()
    }
    return {
        "status": "error",
        "error": {"code": code, "message": message, "detail": safe_detail},
        "generated_at": format_timestamp(generated_at),
    }


# --- payload builders ------------------------------------------------------

def release_to_dict(release: Release) -> dict[str, Any]:
    """Flat mirror of the releases file schema, one key per column."""
    return {
        "release_id": release.id,
        "component": release.component,
        "version": release.version,
        "released_at": release.released_at.isoformat(),
        "production": release.production,
        "dev_start": release.phases.dev_start.isoformat(),
        "dev_end": release.phases.dev_end.isoformat(),
        "test_start": release.phases.test_start.isoformat(),
        "test_end": release.phases.test_end.isoformat(),
        "life_end": format_date(release.life_end),
        "test_hours": release.test_hours,
        "new_lines": release.size.new_lines,
        "changed_lines": release.size.changed_lines,
        "deleted_lines": release.size.deleted_lines,
        "total_product_loc": release.size.total_product_loc,
        "dev_effort_pd": release.dev_effort_pd,
        "test_effort_pd": release.test_effort_pd,
    }


def releases_payload(releases: list[Release]) -> dict[str, Any]:
    return {"releases": [release_to_dict(r) for r in releases]}


def indicator_value_to_dict(value: IndicatorValue) -> dict[str, Any]:
    if value.applicable:
        return {"value": value.value}
    return {"not_applicable": value.na_reason.value}


def indicator_set_payload(
    indicator_set: IndicatorSet, as_of: datetime
) -> dict[str, Any]:
    return {
        "release_id": indicator_set.release_id,
        "as_of": format_timestamp(as_of),
        "indicators": {
            name: indicator_value_to_dict(value)
            for name, value in indicator_set.values().items()
        },
    }


def series_payload(
    indicator: str,
    component: Optional[str],
    series: list[tuple[Release, IndicatorValue]],
    as_of: datetime,
) -> dict[str, Any]:
    return {
        "indicator": indicator,
        "unit": INDICATOR_UNITS[indicator],
        "component": component,
        "as_of": format_timestamp(as_of),
        "points": [
            {
                "release_id": release.id,
                "version": release.version,
                "released_at": release.released_at.isoformat(),
                **indicator_value_to_dict(value),
            }
            for release, value in series
        ],
    }


def weekly_payload(
    reports: list[WeeklyAnomalyReport], platform: Optional[str]
) -> dict[str, Any]:
    weeks = []
    for report in reports:
        weeks.append(
            {
                "week": str(report.week),
                "platforms": {
                    name: {
                        "opened": counts.opened,
                        "closed": counts.closed,
                        "backlog": counts.backlog,
                    }
                    for name, counts in report.platforms.items()
                },
                "overall": {
                    "opened": report.overall.opened,
                    "closed": report.overall.closed,
                    "backlog": report.overall.backlog,
                },
                "severity_opened": {
                    severity.value: count
                    for severity, count in report.severity_breakdown.items()
                },
            }
        )
    return {"platform": platform, "weeks": weeks}


def _anomaly_to_dict(anomaly: Anomaly) -> dict[str, Any]:
    return {
        "anomaly_id": anomaly.id,
        "component": anomaly.component,
        "release_id": anomaly.release_id,
        "severity": anomaly.severity.value,
        "environment": anomaly.environment.value,
        "opened_at": format_timestamp(anomaly.opened_at),
        "closed_at": None
        if anomaly.closed_at is None
        else format_timestamp(anomaly.closed_at),
        "title": anomaly.title,
    }


def _board_entry_to_dict(entry: BoardEntry) -> dict[str, Any]:
    payload = _anomaly_to_dict(entry.anomaly)
    payload["age_hours"] = entry.age_hours
    return payload


def board_payload(report: BoardReport) -> dict[str, Any]:
    return {
        "as_of": format_timestamp(report.as_of),
        "newly_opened": [_board_entry_to_dict(e) for e in report.newly_opened],
        "still_open": [_board_entry_to_dict(e) for e in report.still_open],
    }


def distribution_payload(distribution: AnomalyDistribution) -> dict[str, Any]:
    return {
        "release_id": distribution.release_id,
        "new": distribution.new,
        "inherited": distribution.inherited,
        "solved": distribution.solved,
    }


def breakdown_payload(release_id: str, counts: dict) -> dict[str, Any]:
    """Severity or environment counts for one release; enum keys become
    their wire values."""
    return {
        "release_id": release_id,
        "counts": {key.value: count for key, count in counts.items()},
    }


def decay_payload(fit: DecayFit, deviation_k: float) -> dict[str, Any]:
    return {
        "release_id": fit.release_id,
        "floor": fit.floor,
        "amplitude": fit.amplitude,
        "rate": fit.rate,
        "rmse": fit.rmse,
        "deviation_k": deviation_k,
        "weeks": [
            {
                "week": deviation.week,
                "observed": deviation.observed,
                "predicted": deviation.predicted,
                "flagged": deviation.flagged,
            }
            for deviation in fit.deviations
        ],
    }


def stat_payload(result: StatResult) -> dict[str, Any]:
    return {
        "operation": result.operation,
        "inputs": list(result.inputs),
        "values": dict(result.values),
        "n": result.n,
    }


def ingest_summary_payload(dataset: Dataset) -> dict[str, Any]:
    return {
        "releases": len(dataset.releases),
        "anomalies": len(dataset.anomalies),
        "components": dataset.components(),
        "loaded_at": format_timestamp(dataset.loaded_at),
    }
