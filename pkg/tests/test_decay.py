"""Tests for the weekly anomaly decay fit and deviation flags."""

from __future__ import annotations

import math
import random

import pytest

from relquant.decay import (
    DEFAULT_DEVIATION_K,
    MIN_POINTS,
    DecayFit,
    detect_deviation,
    fit_decay,
)
from relquant.errors import TooFewPoints
from relquant.reports import weekly_new_counts


def decay_series(floor: float, amplitude: float, rate: float, n: int):
    return [(t, floor + amplitude * math.exp(-rate * t)) for t in range(n)]


def test_rejects_fewer_than_four_points() -> None:
    series = decay_series(1.0, 20.0, 0.4, MIN_POINTS)
    for n in range(MIN_POINTS):
        with pytest.raises(TooFewPoints):
            fit_decay(series[:n])
    fit_decay(series)  # exactly four points is enough


def test_recovers_parameters_from_clean_series() -> None:
    rng = random.Random(1202)
    for _ in range(20):
        floor = rng.uniform(0.5, 5.0)
        amplitude = rng.uniform(5.0, 50.0)
        rate = rng.uniform(0.05, 1.0)
        n = rng.randrange(12, 27)
        fit = fit_decay(decay_series(floor, amplitude, rate, n))
        assert fit.floor == pytest.approx(floor, rel=0.05)
        assert fit.amplitude == pytest.approx(amplitude, rel=0.05)
        assert fit.rate == pytest.approx(rate, rel=0.05)
        assert fit.rmse <= 0.01 * amplitude


def test_flat_series_predicts_the_constant_and_flags_nothing() -> None:
    fit = fit_decay([(t, 3.0) for t in range(8)])
    for t in range(8):
        assert fit.predict(t) == pytest.approx(3.0, abs=1e-6)
    assert fit.rmse == pytest.approx(0.0, abs=1e-6)
    assert fit.flagged_weeks == ()


def test_predictions_fall_monotonically_towards_the_floor() -> None:
    fit = fit_decay(decay_series(2.0, 30.0, 0.3, 16))
    previous = fit.predict(0)
    for t in range(1, 40):
        current = fit.predict(t)
        assert current <= previous + 1e-12
        previous = current
    assert fit.predict(1000.0) == pytest.approx(fit.floor, abs=1e-9)


def test_parameters_stay_non_negative_on_noisy_series() -> None:
    rng = random.Random(77)
    for _ in range(50):
        n = rng.randrange(MIN_POINTS, 30)
        points = [(t, max(0.0, rng.uniform(-2.0, 25.0))) for t in range(n)]
        fit = fit_decay(points)
        assert fit.floor >= 0.0
        assert fit.amplitude >= 0.0
        assert fit.rate >= 0.0
        assert fit.rmse >= 0.0 and math.isfinite(fit.rmse)
        assert [d.week for d in fit.deviations] == [p[0] for p in points]


def test_flags_a_burst_above_the_error_band() -> None:
    clean = decay_series(1.0, 40.0, 0.5, 12)
    fit = fit_decay(clean)
    bumped = [(t, y + 5.0) if t == 6 else (t, y) for t, y in clean]
    rows = detect_deviation(fit, bumped, k=DEFAULT_DEVIATION_K)
    flagged = [row.week for row in rows if row.flagged]
    assert flagged == [6]


def test_flags_any_later_week_above_the_initial_peak() -> None:
    # A huge rmse keeps the error band out of the way: only the rule
    # "no week may exceed the release-week spike" can fire.
    fit = DecayFit(
        release_id=None,
        floor=1.0,
        amplitude=10.0,
        rate=0.4,
        rmse=1e9,
        deviations=(),
    )
    observed = [(0, 11.0), (1, 8.0), (2, 12.0), (3, 5.0)]
    rows = detect_deviation(fit, observed, k=DEFAULT_DEVIATION_K)
    assert [row.flagged for row in rows] == [False, False, True, False]


def test_threshold_k_widens_or_narrows_the_band() -> None:
    rng = random.Random(5)
    clean = decay_series(2.0, 25.0, 0.35, 14)
    noisy = [(t, y + rng.gauss(0.0, 1.0)) for t, y in clean]
    fit = fit_decay(noisy)
    generous = detect_deviation(fit, noisy, k=1e9)
    assert all(not row.flagged or row.week > 0 for row in generous)
    strict = detect_deviation(fit, noisy, k=0.0)
    loose = detect_deviation(fit, noisy, k=3.0)
    strict_count = sum(row.flagged for row in strict)
    loose_count = sum(row.flagged for row in loose)
    assert strict_count >= loose_count


def test_detect_deviation_on_an_empty_series_returns_nothing() -> None:
    fit = fit_decay(decay_series(1.0, 20.0, 0.4, 10))
    assert detect_deviation(fit, [], k=2.0) == ()


def test_fit_carries_the_flags_for_its_own_series() -> None:
    points = decay_series(1.5, 18.0, 0.25, 10)
    fit = fit_decay(points, release_id="R1", deviation_k=1.5)
    assert fit.release_id == "R1"
    assert fit.deviations == detect_deviation(fit, points, k=1.5)


def test_fixture_release_series_fits_and_the_beta_is_too_short(dataset) -> None:
    points = weekly_new_counts(dataset, "R1")
    fit = fit_decay(points, release_id="R1")
    assert fit.release_id == "R1"
    assert len(fit.deviations) == len(points)
    assert fit.floor >= 0.0 and fit.amplitude >= 0.0 and fit.rate >= 0.0
    with pytest.raises(TooFewPoints):
        fit_decay(weekly_new_counts(dataset, "R4"), release_id="R4")
