"""Read-only HTTP scoreboard over an immutable dataset snapshot.

The service owns no state beyond a :class:`SnapshotHolder`; every request
reads the holder once and computes against that snapshot, so a concurrent
reload never changes a response half-way through.  Responses are rendered
with the canonical serializer, which makes identical queries against an
unchanged store byte-identical, and ``generated_at`` always carries the
snapshot's data horizon.

Errors map to envelopes, never bare HTTP bodies: domain validation problems
are 400 with the typed error code, unknown releases/indicators/components
are 404, and malformed requests (bad query values, invalid JSON bodies,
unknown routes) are enveloped as well.
"""

from __future__ import annotations

import math
import threading
from datetime import datetime
from pathlib import Path
from typing import Any, Optional, Union

from fastapi import FastAPI, Query, Response
from fastapi.exceptions import RequestValidationError
from starlette.exceptions import HTTPException as StarletteHTTPException
from starlette.requests import Request

from . import serialize
from .decay import DEFAULT_DEVIATION_K, fit_decay
from .errors import (
    BadNumber,
    InvalidParams,
    IoError,
    RelquantError,
    UnknownComponent,
)
from .indicators import compute_indicator_set, indicator_series
from .reports import (
    anomaly_distribution,
    board_report,
    default_week_span,
    environment_breakdown,
    severity_breakdown_for_release,
    weekly_new_counts,
    weekly_trend,
)
from .stats import evaluate
from .store import Dataset, load_store, parse_instant

#: Error codes that indicate a missing resource rather than a bad request.
NOT_FOUND_CODES = frozenset({"UnknownRelease", "UnknownIndicator", "UnknownComponent"})

_STATS_KEYS = frozenset({"op", "x", "y", "filter"})
_FILTER_KEYS = frozenset({"component", "as_of"})


class SnapshotHolder:
    """Current dataset snapshot with atomic swap on reload.

    Requests read :attr:`dataset` exactly once; reloading replaces the
    reference in a single assignment, so in-flight requests finish on the
    snapshot they started with.
    """

    def __init__(self, dataset: Dataset, store_dir: Union[str, Path, None] = None):
        self._dataset = dataset
        self._store_dir = None if store_dir is None else Path(store_dir)
        self._lock = threading.Lock()

    @classmethod
    def from_store(cls, store_dir: Union[str, Path]) -> "SnapshotHolder":
        return cls(load_store(store_dir), store_dir=store_dir)

    @property
    def dataset(self) -> Dataset:
        return self._dataset

    def reload(self) -> Dataset:
        """Re-read the store directory and swap the snapshot in atomically."""
        if self._store_dir is None:
            raise IoError("snapshot holder has no store directory to reload from")
        with self._lock:
            self._dataset = load_store(self._store_dir)
            return self._dataset


# --- request-parameter parsing --------------------------------------------

def _blank_to_none(value: Optional[str]) -> Optional[str]:
    return None if value is None or value == "" else value


def _parse_optional_instant(raw: Optional[str], fallback: datetime) -> datetime:
    raw = _blank_to_none(raw)
    return fallback if raw is None else parse_instant(raw)


def _parse_flag_param(raw: Optional[str], name: str) -> bool:
    raw = _blank_to_none(raw)
    if raw is None or raw in ("false", "0"):
        return False
    if raw in ("true", "1"):
        return True
    raise InvalidParams(
        f"query parameter {name!r} must be true or false, got {raw!r}", parameter=name
    )


def _parse_float_param(raw: str, name: str) -> float:
    try:
        value = float(raw)
    except ValueError:
        raise BadNumber(
            f"query parameter {name!r} is not a number: {raw!r}", parameter=name
        ) from None
    if not math.isfinite(value):
        raise BadNumber(
            f"query parameter {name!r} must be finite: {raw!r}", parameter=name
        )
    return value


def _string_field(body: dict, key: str, required: bool) -> Optional[str]:
    value = body.get(key)
    if value is None:
        if required:
            raise InvalidParams(f"stats request needs a string field {key!r}", field=key)
        return None
    if not isinstance(value, str):
        raise InvalidParams(f"stats field {key!r} must be a string", field=key)
    return value


def _json_response(payload: Any, status_code: int = 200) -> Response:
    return Response(
        content=serialize.canonical_json(payload),
        status_code=status_code,
        media_type="application/json",
    )


def create_app(source: Union[Dataset, SnapshotHolder]) -> FastAPI:
    """Build the scoreboard app over a snapshot or a reloadable holder."""
    holder = source if isinstance(source, SnapshotHolder) else SnapshotHolder(source)
    app = FastAPI(title="relquant scoreboard", docs_url=None, redoc_url=None)
    app.state.holder = holder

    def _ok(data: Any, snapshot: Dataset) -> Response:
        return _json_response(serialize.envelope_ok(data, snapshot.loaded_at))

    @app.exception_handler(RelquantError)
    async def _domain_error(request: Request, exc: RelquantError) -> Response:
        status = 404 if exc.code in NOT_FOUND_CODES else 400
        envelope = serialize.envelope_error(
            exc.code, exc.message, exc.detail, holder.dataset.loaded_at
        )
        return _json_response(envelope, status)

    @app.exception_handler(RequestValidationError)
    async def _validation_error(request: Request, exc: RequestValidationError) -> Response:
        errors = [
            {
                "loc": ".".join(str(part) for part in error.get("loc", ())),
                "msg": str(error.get("msg", "")),
                "type": str(error.get("type", "")),
            }
            for error in exc.errors()
        ]
        envelope = serialize.envelope_error(
            "InvalidParams",
            "malformed request",
            {"errors": errors},
            holder.dataset.loaded_at,
        )
        return _json_response(envelope, 400)

    @app.exception_handler(StarletteHTTPException)
    async def _http_error(request: Request, exc: StarletteHTTPException) -> Response:
        code = {404: "NotFound", 405: "MethodNotAllowed"}.get(exc.status_code, "HttpError")
        envelope = serialize.envelope_error(
            code, str(exc.detail), {}, holder.dataset.loaded_at
        )
        return _json_response(envelope, exc.status_code)

    @app.get("/api/releases")
    def list_releases(
        component: Optional[str] = None, production_only: Optional[str] = None
    ) -> Response:
        snapshot = holder.dataset
        name = _blank_to_none(component)
        if name is not None and name not in snapshot.components():
            raise UnknownComponent(f"unknown component {name!r}", component=name)
        only_production = _parse_flag_param(production_only, "production_only")
        releases = sorted(
            snapshot.releases.values(), key=lambda r: (r.released_at, r.version)
        )
        if name is not None:
            releases = [r for r in releases if r.component == name]
        if only_production:
            releases = [r for r in releases if r.production]
        return _ok(serialize.releases_payload(releases), snapshot)

    @app.get("/api/releases/{release_id}/indicators")
    def release_indicators(release_id: str, as_of: Optional[str] = None) -> Response:
        snapshot = holder.dataset
        release = snapshot.release(release_id)
        when = _parse_optional_instant(as_of, snapshot.loaded_at)
        indicator_set = compute_indicator_set(
            release, snapshot.release_anomalies(release_id), when
        )
        return _ok(serialize.indicator_set_payload(indicator_set, when), snapshot)

    @app.get("/api/series")
    def series(
        indicator: Optional[str] = None,
        component: Optional[str] = None,
        as_of: Optional[str] = None,
    ) -> Response:
        snapshot = holder.dataset
        name = _blank_to_none(indicator)
        if name is None:
            raise InvalidParams(
                "query parameter 'indicator' is required", parameter="indicator"
            )
        when = _parse_optional_instant(as_of, snapshot.loaded_at)
        points = indicator_series(snapshot, _blank_to_none(component), name, when)
        payload = serialize.series_payload(name, _blank_to_none(component), points, when)
        return _ok(payload, snapshot)

    @app.get("/api/weekly")
    def weekly(
        from_week: Optional[str] = Query(default=None, alias="from"),
        to_week: Optional[str] = Query(default=None, alias="to"),
        platform: Optional[str] = None,
    ) -> Response:
        snapshot = holder.dataset
        name = _blank_to_none(platform)
        start = _blank_to_none(from_week)
        end = _blank_to_none(to_week)
        if start is None or end is None:
            span = default_week_span(snapshot, name)
            if span is None:
                return _ok(serialize.weekly_payload([], name), snapshot)
            start = start or str(span[0])
            end = end or str(span[1])
        reports = weekly_trend(snapshot, start, end, name)
        return _ok(serialize.weekly_payload(reports, name), snapshot)

    @app.get("/api/board")
    def board(as_of: Optional[str] = None) -> Response:
        snapshot = holder.dataset
        when = _parse_optional_instant(as_of, snapshot.loaded_at)
        return _ok(serialize.board_payload(board_report(snapshot, when)), snapshot)

    @app.get("/api/releases/{release_id}/distribution")
    def distribution(release_id: str, as_of: Optional[str] = None) -> Response:
        snapshot = holder.dataset
        when = _parse_optional_instant(as_of, snapshot.loaded_at)
        result = anomaly_distribution(snapshot, release_id, when)
        return _ok(serialize.distribution_payload(result), snapshot)

    @app.get("/api/releases/{release_id}/severity")
    def severity(release_id: str) -> Response:
        snapshot = holder.dataset
        counts = severity_breakdown_for_release(snapshot, release_id)
        return _ok(serialize.breakdown_payload(release_id, counts), snapshot)

    @app.get("/api/releases/{release_id}/environment")
    def environment(release_id: str) -> Response:
        snapshot = holder.dataset
        counts = environment_breakdown(snapshot, release_id)
        return _ok(serialize.breakdown_payload(release_id, counts), snapshot)

    @app.get("/api/releases/{release_id}/decay")
    def decay(release_id: str, k: Optional[str] = None) -> Response:
        snapshot = holder.dataset
        raw_k = _blank_to_none(k)
        deviation_k = (
            DEFAULT_DEVIATION_K if raw_k is None else _parse_float_param(raw_k, "k")
        )
        if deviation_k < 0:
            raise InvalidParams(
                f"query parameter 'k' must be >= 0, got {deviation_k}", parameter="k"
            )
        points = weekly_new_counts(snapshot, release_id)
        fit = fit_decay(points, release_id=release_id, deviation_k=deviation_k)
        return _ok(serialize.decay_payload(fit, deviation_k), snapshot)

    @app.post("/api/stats")
    def stats_endpoint(body: dict) -> Response:
        snapshot = holder.dataset
        unknown = set(body) - _STATS_KEYS
        if unknown:
            raise InvalidParams(
                f"unknown stats request fields: {sorted(unknown)}",
                fields=sorted(unknown),
            )
        operation = _string_field(body, "op", required=True)
        x = _string_field(body, "x", required=True)
        y = _string_field(body, "y", required=False)
        filters = body.get("filter")
        if filters is None:
            filters = {}
        if not isinstance(filters, dict):
            raise InvalidParams("stats field 'filter' must be an object", field="filter")
        unknown = set(filters) - _FILTER_KEYS
        if unknown:
            raise InvalidParams(
                f"unknown stats filter fields: {sorted(unknown)}",
                fields=sorted(unknown),
            )
        component = _blank_to_none(_string_field(filters, "component", required=False))
        as_of_raw = _string_field(filters, "as_of", required=False)
        when = _parse_optional_instant(as_of_raw, snapshot.loaded_at)
        result = evaluate(snapshot, operation, x, y, component, when)
        return _ok(serialize.stat_payload(result), snapshot)

    return app
