"""Shared fixtures: the committed dataset pair, its golden values, and a
seeded random dataset generator used by the property suites."""

from __future__ import annotations

import json
import random
from datetime import date, timedelta
from pathlib import Path

import pytest

from relquant.domain import (
    Anomaly,
    DetectionEnvironment,
    PhaseSpan,
    Release,
    Severity,
    SizeDelta,
    day_start,
)
from relquant.store import Dataset, build_dataset, load, save

DATA_DIR = Path(__file__).parent / "data"


@pytest.fixture(scope="session")
def dataset() -> Dataset:
    return load(DATA_DIR / "releases.csv", DATA_DIR / "anomalies.csv")


@pytest.fixture(scope="session")
def golden() -> dict:
    return json.loads((DATA_DIR / "golden_indicators.json").read_text())


@pytest.fixture()
def store_dir(tmp_path, dataset) -> Path:
    save(dataset, tmp_path)
    return tmp_path


def random_dataset(
    rng: random.Random,
    n_components: int = 2,
    n_releases: int = 5,
    n_anomalies: int = 60,
    span_days: int = 210,
) -> Dataset:
    """A structurally valid random snapshot for property tests."""
    base = date(1996, 6, 3)  # a Monday
    releases = []
    for i in range(n_releases):
        released = base + timedelta(days=rng.randrange(span_days))
        dev_start = released - timedelta(days=rng.randrange(40, 90))
        dev_end = dev_start + timedelta(days=rng.randrange(10, 30))
        test_start = dev_end + timedelta(days=1)
        life_end = None
        if rng.random() < 0.4:
            life_end = released + timedelta(days=rng.randrange(200))
        releases.append(
            Release(
                id=f"REL-{i}",
                component=f"P{rng.randrange(n_components)}",
                version=f"{i}.{rng.randrange(9)}",
                released_at=released,
                production=rng.random() < 0.85,
                phases=PhaseSpan(
                    dev_start=dev_start,
                    dev_end=dev_end,
                    test_start=test_start,
                    test_end=test_start + timedelta(days=rng.randrange(5, 20)),
                ),
                life_end=life_end,
                test_hours=round(rng.uniform(0.0, 300.0), 1),
                size=SizeDelta(
                    new_lines=rng.randrange(20000),
                    changed_lines=rng.randrange(8000),
                    deleted_lines=rng.randrange(3000),
                    total_product_loc=rng.randrange(1, 3_000_000),
                ),
                dev_effort_pd=round(rng.uniform(1.0, 400.0), 1),
                test_effort_pd=round(rng.uniform(1.0, 120.0), 1),
            )
        )

    severities = list(Severity)
    environments = list(DetectionEnvironment)
    anomalies = []
    for j in range(n_anomalies):
        release = rng.choice(releases)
        opened = day_start(release.released_at) + timedelta(
            hours=rng.randrange(-24 * 30, 24 * 120),
            minutes=rng.randrange(60),
            seconds=rng.randrange(60),
        )
        closed = None
        if rng.random() < 0.7:
            closed = opened + timedelta(
                hours=rng.randrange(24 * 40),
                minutes=rng.randrange(60),
                seconds=rng.randrange(60),
            )
        anomalies.append(
            Anomaly(
                id=f"AN-{j}",
                component=release.component,
                release_id=release.id,
                severity=rng.choice(severities),
                environment=rng.choice(environments),
                opened_at=opened,
                closed_at=closed,
                title=f"random anomaly {j}",
            )
        )
    return build_dataset(releases, anomalies)
