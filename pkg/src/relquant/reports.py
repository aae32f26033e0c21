"""Anomaly reports: weekly trends, board-meeting summaries, distributions.

Weekly aggregation uses ISO weeks (Monday start).  An anomaly counts as
opened or closed in the week containing the respective timestamp, and the
backlog of a week is the number of anomalies still open at its end, which
satisfies the recurrence

    backlog(w) = backlog(w - 1) + opened(w) - closed(w)

for every platform.  All functions are pure over a snapshot; generating
reports for different ranges in parallel is safe.
"""

from __future__ import annotations

from dataclasses import dataclass
from datetime import datetime, timedelta
from typing import Optional, Tuple, Union

from .domain import (
    SEVERITY_ORDER,
    Anomaly,
    DetectionEnvironment,
    Release,
    Severity,
    anomaly_age,
    day_start,
)
from .errors import BadRange, NotYetReleased, UnknownComponent
from .store import Dataset
from .weeks import Week, as_week, week_range

BOARD_WINDOW_HOURS = 7 * 24


@dataclass(frozen=True)
class WeeklyCounts:
    """Opened/closed events of one week and the backlog at its end."""

    opened: int
    closed: int
    backlog: int


@dataclass(frozen=True)
class WeeklyAnomalyReport:
    """One week's anomaly activity, split by platform."""

    week: Week
    platforms: dict[str, WeeklyCounts]
    overall: WeeklyCounts
    severity_breakdown: dict[Severity, int]


@dataclass(frozen=True)
class AnomalyDistribution:
    """New, inherited and solved anomaly counts for one release."""

    release_id: str
    new: int
    inherited: int
    solved: int


@dataclass(frozen=True)
class BoardEntry:
    """An anomaly on the board agenda together with its age."""

    anomaly: Anomaly
    age_hours: float


@dataclass(frozen=True)
class BoardReport:
    """Agenda for the weekly anomaly review meeting."""

    as_of: datetime
    newly_opened: Tuple[BoardEntry, ...]
    still_open: Tuple[BoardEntry, ...]


def _zero_severities() -> dict[Severity, int]:
    return {severity: 0 for severity in SEVERITY_ORDER}


def _filtered_anomalies(dataset: Dataset, platform: Optional[str]) -> list[Anomaly]:
    anomalies = dataset.anomalies.values()
    if platform is None:
        return list(anomalies)
    known = {r.component for r in dataset.releases.values()}
    known.update(a.component for a in anomalies)
    if platform not in known:
        raise UnknownComponent(f"unknown platform {platform!r}", component=platform)
    return [a for a in anomalies if a.component == platform]


def weekly_trend(
    dataset: Dataset,
    from_week: Union[Week, str],
    to_week: Union[Week, str],
    platform: Optional[str] = None,
) -> list[WeeklyAnomalyReport]:
    """One report per ISO week in the inclusive range.  Weeks without
    activity appear with zero counts and the carried backlog; activity
    before the range still feeds the backlog."""
    start = as_week(from_week)
    end = as_week(to_week)
    anomalies = _filtered_anomalies(dataset, platform)

    platform_names = sorted({a.component for a in anomalies})
    opened_by_week: dict[tuple[Week, str], int] = {}
    closed_by_week: dict[tuple[Week, str], int] = {}
    severity_by_week: dict[tuple[Week, Severity], int] = {}
    for anomaly in anomalies:
        opened_week = Week.of(anomaly.opened_at)
        opened_by_week[(opened_week, anomaly.component)] = (
            opened_by_week.get((opened_week, anomaly.component), 0) + 1
        )
        severity_by_week[(opened_week, anomaly.severity)] = (
            severity_by_week.get((opened_week, anomaly.severity), 0) + 1
        )
        if anomaly.closed_at is not None:
            closed_week = Week.of(anomaly.closed_at)
            closed_by_week[(closed_week, anomaly.component)] = (
                closed_by_week.get((closed_week, anomaly.component), 0) + 1
            )

    # Backlog carried into the range: all events in weeks before the start.
    carried: dict[str, int] = {name: 0 for name in platform_names}
    for (week, name), count in opened_by_week.items():
        if week < start:
            carried[name] += count
    for (week, name), count in closed_by_week.items():
        if week < start:
            carried[name] -= count

    reports = []
    running = dict(carried)
    for week in week_range(start, end):
        per_platform: dict[str, WeeklyCounts] = {}
        total_opened = total_closed = total_backlog = 0
        for name in platform_names:
            opened = opened_by_week.get((week, name), 0)
            closed = closed_by_week.get((week, name), 0)
            running[name] += opened - closed
            per_platform[name] = WeeklyCounts(
                opened=opened, closed=closed, backlog=running[name]
            )
            total_opened += opened
            total_closed += closed
            total_backlog += running[name]
        severities = _zero_severities()
        for severity in SEVERITY_ORDER:
            severities[severity] = severity_by_week.get((week, severity), 0)
        reports.append(
            WeeklyAnomalyReport(
                week=week,
                platforms=per_platform,
                overall=WeeklyCounts(
                    opened=total_opened, closed=total_closed, backlog=total_backlog
                ),
                severity_breakdown=severities,
            )
        )
    return reports


def default_week_span(
    dataset: Dataset, platform: Optional[str] = None
) -> Optional[tuple[Week, Week]]:
    """Natural report range: first week with an anomaly event through the
    last, or None when there are no (matching) anomalies."""
    anomalies = _filtered_anomalies(dataset, platform)
    if not anomalies:
        return None
    opened = [Week.of(a.opened_at) for a in anomalies]
    closed = [Week.of(a.closed_at) for a in anomalies if a.closed_at is not None]
    return min(opened), max(opened + closed)


def severity_breakdown(
    dataset: Dataset,
    from_week: Union[Week, str],
    to_week: Union[Week, str],
    platform: Optional[str] = None,
) -> dict[Severity, int]:
    """Severity counts of anomalies opened within the week range."""
    start = as_week(from_week)
    end = as_week(to_week)
    if start > end:
        raise BadRange(f"week range start {start} after end {end}")
    counts = _zero_severities()
    for anomaly in _filtered_anomalies(dataset, platform):
        if start <= Week.of(anomaly.opened_at) <= end:
            counts[anomaly.severity] += 1
    return counts


def _release_or_raise(dataset: Dataset, release_id: str) -> Release:
    return dataset.release(release_id)


def severity_breakdown_for_release(
    dataset: Dataset, release_id: str
) -> dict[Severity, int]:
    """Severity counts over all anomalies attributed to one release."""
    _release_or_raise(dataset, release_id)
    counts = _zero_severities()
    for anomaly in dataset.release_anomalies(release_id):
        counts[anomaly.severity] += 1
    return counts


def environment_breakdown(
    dataset: Dataset, release_id: str
) -> dict[DetectionEnvironment, int]:
    """Detection-environment counts over one release's anomalies."""
    _release_or_raise(dataset, release_id)
    counts = {environment: 0 for environment in DetectionEnvironment}
    for anomaly in dataset.release_anomalies(release_id):
        counts[anomaly.environment] += 1
    return counts


def _production_successor(dataset: Dataset, release: Release) -> Optional[Release]:
    """Next production release of the same component, by date then version."""
    key = (release.released_at, release.version)
    candidates = [
        r
        for r in dataset.releases.values()
        if r.production
        and r.component == release.component
        and r.id != release.id
        and (r.released_at, r.version) > key
    ]
    if not candidates:
        return None
    return min(candidates, key=lambda r: (r.released_at, r.version))


def anomaly_distribution(
    dataset: Dataset, release_id: str, as_of: Optional[datetime] = None
) -> AnomalyDistribution:
    """Count how many anomalies a release introduced, how many it inherited
    from its predecessors, and how many of those were solved while it was
    the current release.

    New: anomalies detected in this release.  Inherited: same-component
    anomalies found against earlier releases and still open when this one
    shipped.  Solved: members of either group closed between this release
    date and the next production release of the component (or ``as_of``,
    whichever is earlier; the closing bound is exclusive).
    """
    release = _release_or_raise(dataset, release_id)
    if as_of is None:
        as_of = dataset.loaded_at
    released = day_start(release.released_at)
    if as_of < released:
        raise NotYetReleased(
            f"release {release_id} not yet released at {as_of.isoformat()}",
            release_id=release_id,
        )
    successor = _production_successor(dataset, release)
    window_end = as_of
    if successor is not None:
        window_end = min(window_end, day_start(successor.released_at))

    new = []
    inherited = []
    for anomaly in dataset.anomalies.values():
        if anomaly.release_id == release.id:
            new.append(anomaly)
        elif (
            anomaly.component == release.component
            and anomaly.opened_at < released
            and (anomaly.closed_at is None or anomaly.closed_at >= released)
        ):
            inherited.append(anomaly)
    solved = sum(
        1
        for anomaly in new + inherited
        if anomaly.closed_at is not None and released <= anomaly.closed_at < window_end
    )
    return AnomalyDistribution(
        release_id=release.id, new=len(new), inherited=len(inherited), solved=solved
    )


def board_report(dataset: Dataset, as_of: Optional[datetime] = None) -> BoardReport:
    """Agenda for the anomaly board: everything opened in the last seven
    days, and everything still open, most severe and oldest first."""
    if as_of is None:
        as_of = dataset.loaded_at
    window_start = as_of - timedelta(hours=BOARD_WINDOW_HOURS)

    newly_opened = []
    still_open = []
    for anomaly in dataset.anomalies.values():
        if anomaly.opened_at > as_of:
            continue
        entry = BoardEntry(anomaly=anomaly, age_hours=anomaly_age(anomaly, as_of))
        if anomaly.opened_at >= window_start:
            newly_opened.append(entry)
        if anomaly.closed_at is None or anomaly.closed_at > as_of:
            still_open.append(entry)

    def order(entry: BoardEntry) -> tuple:
        return (-entry.anomaly.severity.rank, -entry.age_hours, entry.anomaly.id)

    return BoardReport(
        as_of=as_of,
        newly_opened=tuple(sorted(newly_opened, key=order)),
        still_open=tuple(sorted(still_open, key=order)),
    )


def weekly_new_counts(dataset: Dataset, release_id: str) -> list[tuple[int, int]]:
    """Weekly counts of a release's anomalies by opening week, as (week
    index, count) pairs from the first to the last active week.  This is
    the input series for the decay fit."""
    _release_or_raise(dataset, release_id)
    anomalies = dataset.release_anomalies(release_id)
    if not anomalies:
        return []
    weeks = [Week.of(a.opened_at) for a in anomalies]
    first = min(weeks)
    last = max(weeks)
    counts = {week: 0 for week in week_range(first, last)}
    for week in weeks:
        counts[week] += 1
    return [(index, counts[week]) for index, week in enumerate(week_range(first, last))]


# --- plain-text rendering -------------------------------------------------

def render_weekly_table(reports: list[WeeklyAnomalyReport]) -> str:
    """Fixed-width table: one row per week and platform plus the overall
    row, with the severity split of opened anomalies."""
    lines = [
        f"{'week':<9} {'platform':<10} {'opened':>6} {'closed':>6} {'backlog':>7}   severity of opened"
    ]
    for report in reports:
        severities = " ".join(
            f"{severity.value}={report.severity_breakdown[severity]}"
            for severity in SEVERITY_ORDER
        )
        for name in sorted(report.platforms):
            counts = report.platforms[name]
            lines.append(
                f"{str(report.week):<9} {name:<10} {counts.opened:>6} "
                f"{counts.closed:>6} {counts.backlog:>7}"
            )
        lines.append(
            f"{str(report.week):<9} {'ALL':<10} {report.overall.opened:>6} "
            f"{report.overall.closed:>6} {report.overall.backlog:>7}   {severities}"
        )
    return "\n".join(lines)


def render_board_table(report: BoardReport) -> str:
    """Two agenda sections, each ordered most severe then oldest first."""

    def section(title: str, entries: Tuple[BoardEntry, ...]) -> list[str]:
        lines = [f"{title} ({len(entries)})"]
        lines.append(f"  {'id':<12} {'severity':<9} {'platform':<10} {'age_h':>8}  title")
        for entry in entries:
            a = entry.anomaly
            lines.append(
                f"  {a.id:<12} {a.severity.value:<9} {a.component:<10} "
                f"{entry.age_hours:>8.1f}  {a.title}"
            )
        return lines

    lines = [f"board report as of {report.as_of.strftime('%Y-%m-%dT%H:%M:%SZ')}"]
    lines += section("newly opened (last 7 days)", report.newly_opened)
    lines += section("still open", report.still_open)
    return "\n".join(lines)
