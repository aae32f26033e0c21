"""Core domain records for releases and anomalies.

All values are immutable after construction and validated in
``__post_init__``; every operation here is a pure function, so the whole
layer is safe for unrestricted parallel use.  Durations are expressed in
hours throughout, and bare dates expand to 00:00 UTC.
"""

from __future__ import annotations

from dataclasses import dataclass
from datetime import date, datetime, timezone
from enum import Enum
from typing import Iterable, Optional

from .errors import (
    ForeignAnomaly,
    FutureAnomaly,
    InvalidRecord,
    NotInProduction,
    NotYetReleased,
)

UTC = timezone.utc


class Severity(str, Enum):
    """Anomaly severity with the total order blocking > high > medium > low."""

    BLOCKING = "blocking"
    HIGH = "high"
    MEDIUM = "medium"
    LOW = "low"

    @property
    def rank(self) -> int:
        """Position in the severity order; higher means more severe."""
        return _SEVERITY_RANK[self]

    def __lt__(self, other: object) -> bool:
        if isinstance(other, Severity):
            return self.rank < other.rank
        return NotImplemented

    def __le__(self, other: object) -> bool:
        if isinstance(other, Severity):
            return self.rank <= other.rank
        return NotImplemented

    def __gt__(self, other: object) -> bool:
        if isinstance(other, Severity):
            return self.rank > other.rank
        return NotImplemented

    def __ge__(self, other: object) -> bool:
        if isinstance(other, Severity):
            return self.rank >= other.rank
        return NotImplemented


_SEVERITY_RANK = {
    Severity.LOW: 0,
    Severity.MEDIUM: 1,
    Severity.HIGH: 2,
    Severity.BLOCKING: 3,
}

#: Severities from most to least severe, the order used in reports.
SEVERITY_ORDER = (Severity.BLOCKING, Severity.HIGH, Severity.MEDIUM, Severity.LOW)


class DetectionEnvironment(str, Enum):
    """Where an anomaly surfaced.  Exactly these three values exist."""

    INTERNAL_TEST = "internal_test"
    EXTERNAL_TEST = "external_test"
    PRODUCTION = "production"


def day_start(d: date) -> datetime:
    """Expand a bare date to 00:00 UTC."""
    return datetime(d.year, d.month, d.day, tzinfo=UTC)


def hours_between(start: datetime, end: datetime) -> float:
    return (end - start).total_seconds() / 3600.0


def _require_utc(value: datetime, what: str) -> datetime:
    if value.tzinfo is None:
        raise InvalidRecord(f"{what} must be timezone-aware UTC", field=what)
    return value.astimezone(UTC)


@dataclass(frozen=True)
class Anomaly:
    """One reported defect against a specific release."""

    id: str
    component: str
    release_id: str
    severity: Severity
    environment: DetectionEnvironment
    opened_at: datetime
    closed_at: Optional[datetime]
    title: str

    def __post_init__(self) -> None:
        object.__setattr__(self, "opened_at", _require_utc(self.opened_at, "opened_at"))
        if self.closed_at is not None:
            object.__setattr__(self, "closed_at", _require_utc(self.closed_at, "closed_at"))
            if self.closed_at < self.opened_at:
                raise InvalidRecord(
                    f"anomaly {self.id}: closed_at precedes opened_at",
                    anomaly_id=self.id,
                )
        if not self.id:
            raise InvalidRecord("anomaly id must be non-empty")

    @property
    def is_open(self) -> bool:
        return self.closed_at is None


@dataclass(frozen=True)
class SizeDelta:
    """Code-size change of a release plus the total product size."""

    new_lines: int
    changed_lines: int
    deleted_lines: int
    total_product_loc: int

    def __post_init__(self) -> None:
        for name in ("new_lines", "changed_lines", "deleted_lines", "total_product_loc"):
            if getattr(self, name) < 0:
                raise InvalidRecord(f"size field {name} must be >= 0", field=name)

    @property
    def changed_total(self) -> int:
        return self.new_lines + self.changed_lines + self.deleted_lines


@dataclass(frozen=True)
class PhaseSpan:
    """Development and test calendar spans.  Phases may overlap each other,
    but each phase must start no later than it ends."""

    dev_start: date
    dev_end: date
    test_start: date
    test_end: date

    def __post_init__(self) -> None:
        if self.dev_start > self.dev_end:
            raise InvalidRecord("dev phase start after end", field="dev_start")
        if self.test_start > self.test_end:
            raise InvalidRecord("test phase start after end", field="test_start")


@dataclass(frozen=True)
class Release:
    """One software release of a component/platform."""

    id: str
    component: str
    version: str
    released_at: date
    production: bool
    phases: PhaseSpan
    life_end: Optional[date]
    test_hours: float
    size: SizeDelta
    dev_effort_pd: float
    test_effort_pd: float

    def __post_init__(self) -> None:
        if not self.id:
            raise InvalidRecord("release id must be non-empty")
        if self.life_end is not None and self.life_end < self.released_at:
            raise InvalidRecord(
                f"release {self.id}: life_end precedes released_at", release_id=self.id
            )
        if self.test_hours < 0:
            raise InvalidRecord(f"release {self.id}: test_hours must be >= 0")
        if self.dev_effort_pd < 0 or self.test_effort_pd < 0:
            raise InvalidRecord(f"release {self.id}: efforts must be >= 0")
        if self.production and self.size.total_product_loc <= 0:
            raise InvalidRecord(
                f"release {self.id}: production release needs total_product_loc > 0",
                release_id=self.id,
            )


@dataclass(frozen=True)
class FailureCounts:
    """Failures split into during-life (la) and during-test (ta)."""

    la: int
    ta: int
    tna: int

    def __post_init__(self) -> None:
        if self.la < 0 or self.ta < 0:
            raise InvalidRecord("failure counts must be >= 0")
        if self.tna != self.la + self.ta:
            raise InvalidRecord("tna must equal la + ta")


def life_time(release: Release, as_of: datetime) -> float:
    """Hours the release has lived in production, from its release date at
    00:00 UTC up to the earlier of its supersession date and ``as_of``.

    Raises NotInProduction for releases never used in production, and
    NotYetReleased when ``as_of`` precedes an open-ended release.
    """
    if not release.production:
        raise NotInProduction(
            f"release {release.id} was never used in production", release_id=release.id
        )
    start = day_start(release.released_at)
    as_of = _require_utc(as_of, "as_of")
    if release.life_end is None:
        if as_of < start:
            raise NotYetReleased(
                f"release {release.id} not yet released at {as_of.isoformat()}",
                release_id=release.id,
            )
        end = as_of
    else:
        end = min(day_start(release.life_end), as_of)
    return max(0.0, hours_between(start, end))


def classify_failures(release: Release, anomalies: Iterable[Anomaly]) -> FailureCounts:
    """Split a release's anomalies into during-test (internal test) and
    during-life (external test or production) failures."""
    la = 0
    ta = 0
    for anomaly in anomalies:
        if anomaly.release_id != release.id:
            raise ForeignAnomaly(
                f"anomaly {anomaly.id} belongs to release {anomaly.release_id}, "
                f"not {release.id}",
                anomaly_id=anomaly.id,
            )
        if anomaly.environment is DetectionEnvironment.INTERNAL_TEST:
            ta += 1
        else:
            la += 1
    return FailureCounts(la=la, ta=ta, tna=la + ta)


def anomaly_age(anomaly: Anomaly, as_of: datetime) -> float:
    """Hours the anomaly has been (or stayed) open at ``as_of``; frozen at
    its closure time once closed."""
    as_of = _require_utc(as_of, "as_of")
    if as_of < anomaly.opened_at:
        raise FutureAnomaly(
            f"anomaly {anomaly.id} not yet opened at {as_of.isoformat()}",
            anomaly_id=anomaly.id,
        )
    end = as_of if anomaly.closed_at is None else min(anomaly.closed_at, as_of)
    return hours_between(anomaly.opened_at, end)
