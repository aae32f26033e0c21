"""Semicolon-delimited flat-file store.

The canonical store is a pair of plain ASCII files with ``;`` separators and
exact one-line headers; there is no quoting convention, so no field may
contain a separator or a line break.  Dates are ``YYYY-MM-DD`` and
timestamps ``YYYY-MM-DDTHH:MM:SSZ`` (whole seconds, UTC).  Export sorts rows
by id so output is byte-stable, and saving writes each file to a temporary
name first and renames it into place, so a reader never observes a torn
file.

A loaded :class:`Dataset` is an immutable snapshot; its ``loaded_at`` is the
latest instant mentioned anywhere in the data (the data horizon), which
makes every computation that defaults to it reproducible across runs.
"""

from __future__ import annotations

import os
import re
import tempfile
from dataclasses import dataclass, field, replace
from datetime import date, datetime
from pathlib import Path
from typing import IO, Iterable, Mapping, Optional, Union

from .domain import (
    UTC,
    Anomaly,
    DetectionEnvironment,
    PhaseSpan,
    Release,
    Severity,
    SizeDelta,
    day_start,
)
from .errors import (
    BadDate,
    BadEnum,
    BadNumber,
    DuplicateId,
    FieldCount,
    HeaderMismatch,
    IntegrityError,
    InvalidRecord,
    IoError,
    UnknownRelease,
)

RELEASES_HEADER = (
    "release_id;component;version;released_at;production;dev_start;dev_end;"
    "test_start;test_end;life_end;test_hours;new_lines;changed_lines;"
    "deleted_lines;total_product_loc;dev_effort_pd;test_effort_pd"
)
ANOMALIES_HEADER = (
    "anomaly_id;component;release_id;severity;environment;opened_at;closed_at;title"
)

RELEASES_FILENAME = "releases.csv"
ANOMALIES_FILENAME = "anomalies.csv"

SEPARATOR = ";"
EPOCH = datetime(1970, 1, 1, tzinfo=UTC)

_DATE_RE = re.compile(r"^\d{4}-\d{2}-\d{2}$")
_TS_RE = re.compile(r"^\d{4}-\d{2}-\d{2}T\d{2}:\d{2}:\d{2}Z$")

Source = Union[str, Path, IO[str]]


@dataclass(frozen=True)
class Dataset:
    """Immutable snapshot of releases and anomalies with referential
    integrity guaranteed."""

    releases: Mapping[str, Release] = field(default_factory=dict)
    anomalies: Mapping[str, Anomaly] = field(default_factory=dict)
    loaded_at: datetime = EPOCH

    def release(self, release_id: str) -> Release:
        try:
            return self.releases[release_id]
        except KeyError:
            raise UnknownRelease(
                f"unknown release {release_id!r}", release_id=release_id
            ) from None

    def release_anomalies(self, release_id: str) -> list[Anomaly]:
        return [a for a in self.anomalies.values() if a.release_id == release_id]

    def components(self) -> list[str]:
        return sorted({r.component for r in self.releases.values()})


def build_dataset(
    releases: Iterable[Release],
    anomalies: Iterable[Anomaly],
    loaded_at: Optional[datetime] = None,
) -> Dataset:
    """Assemble a validated snapshot.  ``loaded_at`` defaults to the data
    horizon so that identical files always yield identical snapshots."""
    release_map: dict[str, Release] = {}
    for release in releases:
        if release.id in release_map:
            raise DuplicateId(f"duplicate release id {release.id}", id=release.id)
        _check_text_fields(release.id, release.component, release.version)
        release_map[release.id] = release

    anomaly_map: dict[str, Anomaly] = {}
    for anomaly in anomalies:
        if anomaly.id in anomaly_map:
            raise DuplicateId(f"duplicate anomaly id {anomaly.id}", id=anomaly.id)
        if anomaly.release_id not in release_map:
            raise IntegrityError(
                f"anomaly {anomaly.id} references unknown release {anomaly.release_id}",
                anomaly_id=anomaly.id,
                release_id=anomaly.release_id,
            )
        _check_text_fields(anomaly.id, anomaly.component, anomaly.title)
        _check_whole_seconds(anomaly.id, anomaly.opened_at, anomaly.closed_at)
        anomaly_map[anomaly.id] = anomaly

    if loaded_at is None:
        loaded_at = data_horizon(release_map.values(), anomaly_map.values())
    return Dataset(releases=release_map, anomalies=anomaly_map, loaded_at=loaded_at)


def data_horizon(releases: Iterable[Release], anomalies: Iterable[Anomaly]) -> datetime:
    """Latest instant mentioned anywhere in the data; epoch when empty."""
    horizon = EPOCH
    for release in releases:
        horizon = max(horizon, day_start(release.released_at))
        if release.life_end is not None:
            horizon = max(horizon, day_start(release.life_end))
    for anomaly in anomalies:
        horizon = max(horizon, anomaly.opened_at)
        if anomaly.closed_at is not None:
            horizon = max(horizon, anomaly.closed_at)
    return horizon


def _check_text_fields(*values: str) -> None:
    for value in values:
        if SEPARATOR in value or "\n" in value or "\r" in value:
            raise InvalidRecord(
                f"text field {value!r} contains a separator or line break"
            )


def _check_whole_seconds(anomaly_id: str, *stamps: Optional[datetime]) -> None:
    for stamp in stamps:
        if stamp is not None and stamp.microsecond != 0:
            raise InvalidRecord(
                f"anomaly {anomaly_id}: timestamps must be whole seconds",
                anomaly_id=anomaly_id,
            )


# --- parsing --------------------------------------------------------------

def _content_lines(source: Union[str, IO[str]]) -> list[str]:
    """Lines of the given content; a plain string IS the content here."""
    text = source if isinstance(source, str) else source.read()
    return text.splitlines()


def _read_source(source: Source) -> str:
    """Content of a path-like or stream source; a plain string is a path."""
    if isinstance(source, (str, Path)):
        try:
            return Path(source).read_text(encoding="utf-8")
        except OSError as exc:
            raise IoError(f"cannot read {source}: {exc}") from exc
    return source.read()


def _parse_date(raw: str, row: int, field_name: str) -> date:
    if not _DATE_RE.match(raw):
        raise BadDate(
            f"row {row}: field {field_name} is not a YYYY-MM-DD date: {raw!r}",
            row=row,
            field=field_name,
        )
    try:
        return date.fromisoformat(raw)
    except ValueError:
        raise BadDate(
            f"row {row}: field {field_name} is not a valid date: {raw!r}",
            row=row,
            field=field_name,
        ) from None


def _parse_timestamp(raw: str, row: int, field_name: str) -> datetime:
    if not _TS_RE.match(raw):
        raise BadDate(
            f"row {row}: field {field_name} is not a YYYY-MM-DDTHH:MM:SSZ "
            f"timestamp: {raw!r}",
            row=row,
            field=field_name,
        )
    try:
        return datetime.strptime(raw, "%Y-%m-%dT%H:%M:%SZ").replace(tzinfo=UTC)
    except ValueError:
        raise BadDate(
            f"row {row}: field {field_name} is not a valid timestamp: {raw!r}",
            row=row,
            field=field_name,
        ) from None


def parse_instant(raw: str) -> datetime:
    """Parse a user-supplied instant: either a full ``YYYY-MM-DDTHH:MM:SSZ``
    timestamp or a bare ``YYYY-MM-DD`` date, which expands to 00:00 UTC."""
    try:
        if _TS_RE.match(raw):
            return datetime.strptime(raw, "%Y-%m-%dT%H:%M:%SZ").replace(tzinfo=UTC)
        if _DATE_RE.match(raw):
            return day_start(date.fromisoformat(raw))
    except ValueError:
        raise BadDate(f"invalid instant {raw!r}", field="as_of") from None
    raise BadDate(
        f"expected YYYY-MM-DD or YYYY-MM-DDTHH:MM:SSZ, got {raw!r}", field="as_of"
    )


def _parse_int(raw: str, row: int, field_name: str) -> int:
    try:
        return int(raw)
    except ValueError:
        raise BadNumber(
            f"row {row}: field {field_name} is not an integer: {raw!r}",
            row=row,
            field=field_name,
        ) from None


def _parse_float(raw: str, row: int, field_name: str) -> float:
    try:
        value = float(raw)
    except ValueError:
        raise BadNumber(
            f"row {row}: field {field_name} is not a number: {raw!r}",
            row=row,
            field=field_name,
        ) from None
    if value != value or value in (float("inf"), float("-inf")):
        raise BadNumber(
            f"row {row}: field {field_name} is not finite: {raw!r}",
            row=row,
            field=field_name,
        )
    return value


def _parse_flag(raw: str, row: int, field_name: str) -> bool:
    if raw == "1":
        return True
    if raw == "0":
        return False
    raise BadNumber(
        f"row {row}: field {field_name} must be 0 or 1: {raw!r}",
        row=row,
        field=field_name,
    )


def _parse_enum(enum_cls, raw: str, row: int, field_name: str):
    try:
        return enum_cls(raw)
    except ValueError:
        allowed = "|".join(member.value for member in enum_cls)
        raise BadEnum(
            f"row {row}: field {field_name} must be one of {allowed}: {raw!r}",
            row=row,
            field=field_name,
        ) from None


def _split_row(line: str, row: int, expected: int) -> list[str]:
    parts = line.split(SEPARATOR)
    if len(parts) != expected:
        raise FieldCount(
            f"row {row}: expected {expected} fields, found {len(parts)}", row=row
        )
    return parts


def parse_releases(source: Union[str, IO[str]]) -> list[Release]:
    """Parse releases file content into records, preserving row order."""
    lines = _content_lines(source)
    if not lines or lines[0] != RELEASES_HEADER:
        raise HeaderMismatch("releases file header does not match the schema")
    releases: list[Release] = []
    seen: set[str] = set()
    for row, line in enumerate(lines[1:], start=2):
        f = _split_row(line, row, 17)
        release_id = f[0]
        if release_id in seen:
            raise DuplicateId(f"duplicate release id {release_id}", id=release_id)
        seen.add(release_id)
        life_end = None if f[9] == "" else _parse_date(f[9], row, "life_end")
        try:
            release = Release(
                id=release_id,
                component=f[1],
                version=f[2],
                released_at=_parse_date(f[3], row, "released_at"),
                production=_parse_flag(f[4], row, "production"),
                phases=PhaseSpan(
                    dev_start=_parse_date(f[5], row, "dev_start"),
                    dev_end=_parse_date(f[6], row, "dev_end"),
                    test_start=_parse_date(f[7], row, "test_start"),
                    test_end=_parse_date(f[8], row, "test_end"),
                ),
                life_end=life_end,
                test_hours=_parse_float(f[10], row, "test_hours"),
                size=SizeDelta(
                    new_lines=_parse_int(f[11], row, "new_lines"),
                    changed_lines=_parse_int(f[12], row, "changed_lines"),
                    deleted_lines=_parse_int(f[13], row, "deleted_lines"),
                    total_product_loc=_parse_int(f[14], row, "total_product_loc"),
                ),
                dev_effort_pd=_parse_float(f[15], row, "dev_effort_pd"),
                test_effort_pd=_parse_float(f[16], row, "test_effort_pd"),
            )
        except InvalidRecord as exc:
            raise InvalidRecord(f"row {row}: {exc.message}", row=row, **exc.detail) from None
        releases.append(release)
    return releases


def parse_anomalies(source: Union[str, IO[str]]) -> list[Anomaly]:
    """Parse anomalies file content into records, preserving row order.  An
    empty ``closed_at`` field means the anomaly is still open."""
    lines = _content_lines(source)
    if not lines or lines[0] != ANOMALIES_HEADER:
        raise HeaderMismatch("anomalies file header does not match the schema")
    anomalies: list[Anomaly] = []
    seen: set[str] = set()
    for row, line in enumerate(lines[1:], start=2):
        f = _split_row(line, row, 8)
        anomaly_id = f[0]
        if anomaly_id in seen:
            raise DuplicateId(f"duplicate anomaly id {anomaly_id}", id=anomaly_id)
        seen.add(anomaly_id)
        closed_at = None if f[6] == "" else _parse_timestamp(f[6], row, "closed_at")
        try:
            anomaly = Anomaly(
                id=anomaly_id,
                component=f[1],
                release_id=f[2],
                severity=_parse_enum(Severity, f[3], row, "severity"),
                environment=_parse_enum(DetectionEnvironment, f[4], row, "environment"),
                opened_at=_parse_timestamp(f[5], row, "opened_at"),
                closed_at=closed_at,
                title=f[7],
            )
        except InvalidRecord as exc:
            raise InvalidRecord(f"row {row}: {exc.message}", row=row, **exc.detail) from None
        anomalies.append(anomaly)
    return anomalies


# --- formatting -----------------------------------------------------------

def _format_number(value: float) -> str:
    return repr(value)


def _format_timestamp(value: datetime) -> str:
    return value.astimezone(UTC).strftime("%Y-%m-%dT%H:%M:%SZ")


def _release_row(r: Release) -> str:
    return SEPARATOR.join(
        [
            r.id,
            r.component,
            r.version,
            r.released_at.isoformat(),
            "1" if r.production else "0",
            r.phases.dev_start.isoformat(),
            r.phases.dev_end.isoformat(),
            r.phases.test_start.isoformat(),
            r.phases.test_end.isoformat(),
            "" if r.life_end is None else r.life_end.isoformat(),
            _format_number(r.test_hours),
            str(r.size.new_lines),
            str(r.size.changed_lines),
            str(r.size.deleted_lines),
            str(r.size.total_product_loc),
            _format_number(r.dev_effort_pd),
            _format_number(r.test_effort_pd),
        ]
    )


def _anomaly_row(a: Anomaly) -> str:
    return SEPARATOR.join(
        [
            a.id,
            a.component,
            a.release_id,
            a.severity.value,
            a.environment.value,
            _format_timestamp(a.opened_at),
            "" if a.closed_at is None else _format_timestamp(a.closed_at),
            a.title,
        ]
    )


def export(dataset: Dataset) -> tuple[str, str]:
    """Render the dataset back to file content.  Rows are sorted by id so
    the same dataset always produces the same bytes, and re-parsing the
    output yields an equal dataset."""
    release_lines = [RELEASES_HEADER]
    release_lines += [_release_row(dataset.releases[k]) for k in sorted(dataset.releases)]
    anomaly_lines = [ANOMALIES_HEADER]
    anomaly_lines += [_anomaly_row(dataset.anomalies[k]) for k in sorted(dataset.anomalies)]
    return "\n".join(release_lines) + "\n", "\n".join(anomaly_lines) + "\n"


# --- dataset-level operations ---------------------------------------------

def production_view(dataset: Dataset) -> Dataset:
    """Restrict the snapshot to production releases; anomalies attached to
    excluded releases are dropped.  Idempotent."""
    releases = {k: r for k, r in dataset.releases.items() if r.production}
    anomalies = {
        k: a for k, a in dataset.anomalies.items() if a.release_id in releases
    }
    return replace(dataset, releases=releases, anomalies=anomalies)


def load(releases_source: Source, anomalies_source: Source) -> Dataset:
    """Parse and cross-validate both files into one consistent snapshot.
    Plain strings are paths here; pass streams for in-memory content."""
    releases = parse_releases(_read_source(releases_source))
    anomalies = parse_anomalies(_read_source(anomalies_source))
    return build_dataset(releases, anomalies)


def load_store(store_dir: Union[str, Path]) -> Dataset:
    """Load the canonical file pair from a store directory."""
    store = Path(store_dir)
    releases_path = store / RELEASES_FILENAME
    anomalies_path = store / ANOMALIES_FILENAME
    for path in (releases_path, anomalies_path):
        if not path.is_file():
            raise IoError(f"store file missing: {path}", path=str(path))
    return load(releases_path, anomalies_path)


def _atomic_write(path: Path, content: str) -> None:
    fd, tmp_name = tempfile.mkstemp(dir=path.parent, prefix=path.name, suffix=".tmp")
    try:
        with os.fdopen(fd, "w", encoding="utf-8") as handle:
            handle.write(content)
        os.replace(tmp_name, path)
    except OSError as exc:
        raise IoError(f"cannot write {path}: {exc}") from exc
    finally:
        if os.path.exists(tmp_name):
            os.unlink(tmp_name)


def save(dataset: Dataset, store_dir: Union[str, Path]) -> tuple[Path, Path]:
    """Write the canonical file pair into ``store_dir`` (created if needed).
    Each file is written to a temporary name and renamed into place."""
    store = Path(store_dir)
    try:
        store.mkdir(parents=True, exist_ok=True)
    except OSError as exc:
        raise IoError(f"cannot create store directory {store}: {exc}") from exc
    releases_text, anomalies_text = export(dataset)
    releases_path = store / RELEASES_FILENAME
    anomalies_path = store / ANOMALIES_FILENAME
    _atomic_write(releases_path, releases_text)
    _atomic_write(anomalies_path, anomalies_text)
    return releases_path, anomalies_path
