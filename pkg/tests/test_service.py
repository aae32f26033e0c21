"""Tests for the HTTP scoreboard: envelopes, status codes and payloads."""

from __future__ import annotations

from datetime import datetime, timedelta, timezone

import pytest
from fastapi.testclient import TestClient

from relquant.domain import Anomaly, DetectionEnvironment, Severity
from relquant.errors import IoError
from relquant.service import SnapshotHolder, create_app
from relquant.store import build_dataset, save

HORIZON = "1997-07-30T00:00:00Z"


@pytest.fixture(scope="module")
def client(dataset) -> TestClient:
    return TestClient(create_app(dataset), raise_server_exceptions=False)


def get_ok(client: TestClient, url: str) -> dict:
    response = client.get(url)
    assert response.status_code == 200, response.text
    envelope = response.json()
    assert envelope["status"] == "ok"
    assert envelope["generated_at"] == HORIZON
    return envelope["data"]


def expect_error(response, status: int, code: str) -> dict:
    assert response.status_code == status, response.text
    envelope = response.json()
    assert envelope["status"] == "error"
    assert envelope["error"]["code"] == code
    assert envelope["generated_at"] == HORIZON
    return envelope["error"]


def test_release_listing_is_date_ordered_with_filters(client) -> None:
    data = get_ok(client, "/api/releases")
    assert [r["release_id"] for r in data["releases"]] == ["R1", "R3", "R2", "R4", "R5"]
    assert data["releases"][0]["released_at"] == "1997-01-01"
    assert data["releases"][0]["test_hours"] == 160.0

    mtp = get_ok(client, "/api/releases?component=MTP")
    assert [r["release_id"] for r in mtp["releases"]] == ["R1", "R2", "R4"]

    production = get_ok(client, "/api/releases?production_only=true")
    assert [r["release_id"] for r in production["releases"]] == ["R1", "R3", "R2", "R5"]

    both = get_ok(client, "/api/releases?component=MTP&production_only=1")
    assert [r["release_id"] for r in both["releases"]] == ["R1", "R2"]


def test_release_listing_rejects_bad_filters(client) -> None:
    expect_error(client.get("/api/releases?component=NOPE"), 404, "UnknownComponent")
    expect_error(client.get("/api/releases?production_only=banana"), 400, "InvalidParams")


def test_indicator_payload_matches_the_golden_values(client, golden) -> None:
    for release_id in ("R1", "R2", "R3", "R5"):
        data = get_ok(client, f"/api/releases/{release_id}/indicators")
        assert data["release_id"] == release_id
        assert data["as_of"] == HORIZON
        expected = golden["indicators"][release_id]
        assert set(data["indicators"]) == set(expected)
        for name, entry in expected.items():
            actual = data["indicators"][name]
            if "value" in entry:
                assert actual["value"] == pytest.approx(entry["value"], rel=1e-12), name
            else:
                assert actual == entry, name


def test_indicators_honour_the_as_of_parameter(client) -> None:
    data = get_ok(client, "/api/releases/R1/indicators?as_of=1997-01-20")
    assert data["as_of"] == "1997-01-20T00:00:00Z"
    # 456 life hours by then, two field failures (M-001, M-003) and four
    # closures (M-001, M-002, M-003, M-006) averaging 82.5 hours.
    assert data["indicators"]["mttf"]["value"] == pytest.approx(228.0)
    assert data["indicators"]["mttr"]["value"] == pytest.approx(82.5)


def test_indicator_errors(client) -> None:
    expect_error(client.get("/api/releases/NOPE/indicators"), 404, "UnknownRelease")
    expect_error(client.get("/api/releases/R4/indicators"), 400, "NotInProduction")
    expect_error(
        client.get("/api/releases/R1/indicators?as_of=not-a-date"), 400, "BadDate"
    )


def test_series_endpoint_walks_production_releases(client) -> None:
    data = get_ok(client, "/api/series?indicator=mttf")
    assert data["indicator"] == "mttf"
    assert data["unit"] == "hours"
    assert data["component"] is None
    points = data["points"]
    assert [p["release_id"] for p in points] == ["R1", "R3", "R2", "R5"]
    assert points[0]["value"] == pytest.approx(288.0)
    assert points[3] == {
        "release_id": "R5",
        "version": "1.1",
        "released_at": "1997-07-20",
        "not_applicable": "no_failures",
    }

    scoped = get_ok(client, "/api/series?indicator=mttf&component=MTP")
    assert [p["release_id"] for p in scoped["points"]] == ["R1", "R2"]


def test_series_endpoint_errors(client) -> None:
    expect_error(client.get("/api/series"), 400, "InvalidParams")
    expect_error(client.get("/api/series?indicator=bogus"), 404, "UnknownIndicator")
    expect_error(
        client.get("/api/series?indicator=mttf&component=NOPE"), 404, "UnknownComponent"
    )


def test_weekly_endpoint_counts_and_defaults(client) -> None:
    data = get_ok(client, "/api/weekly?from=1996-W51&to=1997-W02")
    assert data["platform"] is None
    weeks = data["weeks"]
    assert [w["week"] for w in weeks] == [
        "1996-W51",
        "1996-W52",
        "1997-W01",
        "1997-W02",
    ]
    assert weeks[3]["overall"] == {"opened": 2, "closed": 1, "backlog": 2}
    assert weeks[3]["severity_opened"] == {
        "blocking": 1,
        "high": 0,
        "medium": 0,
        "low": 1,
    }
    assert set(weeks[0]["platforms"]) == {"EAS", "MTP"}

    full = get_ok(client, "/api/weekly")
    assert full["weeks"][0]["week"] == "1996-W51"
    assert full["weeks"][-1]["week"] == "1997-W31"

    scoped = get_ok(client, "/api/weekly?platform=EAS")
    assert scoped["platform"] == "EAS"
    assert scoped["weeks"][0]["week"] == "1997-W02"
    assert scoped["weeks"][-1]["week"] == "1997-W10"


def test_weekly_endpoint_errors(client) -> None:
    expect_error(client.get("/api/weekly?from=garbage&to=1997-W02"), 400, "BadRange")
    expect_error(
        client.get("/api/weekly?from=1997-W10&to=1997-W01"), 400, "BadRange"
    )
    expect_error(client.get("/api/weekly?platform=NOPE"), 404, "UnknownComponent")


def test_board_endpoint_orders_open_anomalies(client) -> None:
    data = get_ok(client, "/api/board")
    assert data["as_of"] == HORIZON
    assert [a["anomaly_id"] for a in data["newly_opened"]] == ["M-106"]
    assert [a["anomaly_id"] for a in data["still_open"]] == [
        "M-103",
        "M-005",
        "M-007",
        "E-003",
        "M-008",
        "M-202",
        "M-106",
    ]
    assert data["still_open"][-1]["age_hours"] == 0.0
    assert data["still_open"][0]["severity"] == "blocking"


def test_board_endpoint_respects_as_of(client) -> None:
    data = get_ok(client, "/api/board?as_of=1997-01-16")
    assert data["as_of"] == "1997-01-16T00:00:00Z"
    assert [a["anomaly_id"] for a in data["newly_opened"]] == ["M-003", "E-002"]
    expect_error(client.get("/api/board?as_of=yesterday"), 400, "BadDate")


def test_distribution_endpoint_matches_the_golden_values(client, golden) -> None:
    for release_id, expected in golden["distribution"].items():
        data = get_ok(client, f"/api/releases/{release_id}/distribution")
        assert data == {"release_id": release_id, **expected}

    early = get_ok(client, "/api/releases/R2/distribution?as_of=1997-04-01")
    assert (early["new"], early["inherited"], early["solved"]) == (6, 3, 2)

    expect_error(client.get("/api/releases/NOPE/distribution"), 404, "UnknownRelease")
    expect_error(
        client.get("/api/releases/R5/distribution?as_of=1997-01-01"),
        400,
        "NotYetReleased",
    )


def test_breakdown_endpoints_match_the_golden_values(client, golden) -> None:
    for release_id in ("R1", "R2", "R3", "R4", "R5"):
        severity = get_ok(client, f"/api/releases/{release_id}/severity")
        assert severity["counts"] == golden["severity"][release_id]
        environment = get_ok(client, f"/api/releases/{release_id}/environment")
        assert environment["counts"] == golden["environment"][release_id]
    expect_error(client.get("/api/releases/NOPE/severity"), 404, "UnknownRelease")


def test_decay_endpoint_fits_the_weekly_counts(client) -> None:
    data = get_ok(client, "/api/releases/R1/decay")
    assert data["release_id"] == "R1"
    assert data["deviation_k"] == 2.0
    assert len(data["weeks"]) == 10
    assert [w["week"] for w in data["weeks"]] == list(range(10))
    assert data["floor"] >= 0.0 and data["amplitude"] >= 0.0 and data["rate"] >= 0.0

    relaxed = get_ok(client, "/api/releases/R1/decay?k=3.5")
    assert relaxed["deviation_k"] == 3.5


def test_decay_endpoint_errors(client) -> None:
    expect_error(client.get("/api/releases/R4/decay"), 400, "TooFewPoints")
    expect_error(client.get("/api/releases/NOPE/decay"), 404, "UnknownRelease")
    expect_error(client.get("/api/releases/R1/decay?k=-1"), 400, "InvalidParams")
    expect_error(client.get("/api/releases/R1/decay?k=abc"), 400, "BadNumber")


def test_stats_endpoint_runs_each_operation(client, golden) -> None:
    response = client.post("/api/stats", json={"op": "mean", "x": "mttf"})
    assert response.status_code == 200
    data = response.json()["data"]
    assert data["operation"] == "mean"
    assert data["values"]["mean"] == pytest.approx(golden["stats"]["mean_mttf"]["value"])
    assert data["n"] == 3

    response = client.post(
        "/api/stats",
        json={"op": "regression", "x": "mttr", "y": "dev_effort_pd"},
    )
    data = response.json()["data"]
    expected = golden["stats"]["regression_mttr_dev_effort_pd"]
    assert data["values"]["slope"] == pytest.approx(expected["slope"], rel=1e-12)
    assert data["inputs"] == ["mttr", "dev_effort_pd"]

    response = client.post(
        "/api/stats",
        json={"op": "mean", "x": "mttf", "filter": {"component": "EAS"}},
    )
    data = response.json()["data"]
    assert data["n"] == 1
    assert data["values"]["mean"] == pytest.approx(2148.0)


def test_stats_endpoint_rejects_malformed_bodies(client) -> None:
    post = lambda body: client.post("/api/stats", json=body)  # noqa: E731
    expect_error(post({"op": "median", "x": "mttf"}), 400, "InvalidParams")
    expect_error(post({"op": "correlation", "x": "mttf"}), 400, "InvalidParams")
    expect_error(post({"op": "mean", "x": "mttf", "bogus": 1}), 400, "InvalidParams")
    expect_error(post({"op": "mean"}), 400, "InvalidParams")
    expect_error(post({"op": 5, "x": "mttf"}), 400, "InvalidParams")
    expect_error(
        post({"op": "mean", "x": "mttf", "filter": {"weird": 1}}), 400, "InvalidParams"
    )
    expect_error(post({"op": "mean", "x": "mttf", "filter": []}), 400, "InvalidParams")
    expect_error(post({"op": "mean", "x": "nonsense"}), 404, "UnknownIndicator")
    expect_error(post([1, 2, 3]), 400, "InvalidParams")

    raw = client.post(
        "/api/stats",
        content="{not json",
        headers={"Content-Type": "application/json"},
    )
    error = expect_error(raw, 400, "InvalidParams")
    assert error["message"] == "malformed request"


def test_unknown_routes_and_methods_are_enveloped(client) -> None:
    expect_error(client.get("/api/nonsense"), 404, "NotFound")
    expect_error(client.post("/api/board"), 405, "MethodNotAllowed")


def test_identical_requests_return_identical_bytes(client) -> None:
    for url in (
        "/api/releases",
        "/api/releases/R1/indicators",
        "/api/series?indicator=quality",
        "/api/weekly",
        "/api/board",
        "/api/releases/R2/distribution",
        "/api/releases/R1/decay",
    ):
        first = client.get(url)
        second = client.get(url)
        assert first.status_code == 200
        assert first.content == second.content
        assert first.headers["content-type"] == "application/json"


def test_snapshot_holder_reload_swaps_the_dataset(dataset, store_dir) -> None:
    holder = SnapshotHolder.from_store(store_dir)
    client = TestClient(create_app(holder))
    assert get_ok(client, "/api/board")["as_of"] == HORIZON

    extra = Anomaly(
        id="E-999",
        component="EAS",
        release_id="R5",
        severity=Severity.LOW,
        environment=DetectionEnvironment.PRODUCTION,
        opened_at=datetime(1997, 8, 2, 10, 0, tzinfo=timezone.utc),
        closed_at=None,
        title="late arrival",
    )
    updated = build_dataset(
        list(dataset.releases.values()), list(dataset.anomalies.values()) + [extra]
    )
    save(updated, store_dir)
    reloaded = holder.reload()
    assert reloaded.loaded_at == datetime(1997, 8, 2, 10, 0, tzinfo=timezone.utc)

    envelope = client.get("/api/board").json()
    assert envelope["generated_at"] == "1997-08-02T10:00:00Z"
    open_ids = [a["anomaly_id"] for a in envelope["data"]["still_open"]]
    assert "E-999" in open_ids


def test_snapshot_holder_without_store_cannot_reload(dataset) -> None:
    holder = SnapshotHolder(dataset)
    with pytest.raises(IoError):
        holder.reload()
