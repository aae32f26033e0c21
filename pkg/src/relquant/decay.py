"""Post-release anomaly trend: exponential decay towards a floor.

Weekly new-anomaly counts for a healthy release spike when the code
ships and then fall off towards a residual level.  The model fitted here is

    N(t) = floor + amplitude * exp(-rate * t)

over week indexes t = 0, 1, 2, ...  Fitting profiles the nonlinear rate
over a coarse grid (the floor/amplitude pair is linear once the rate is
fixed, solved by least squares with a non-negativity clamp) and then
polishes the best candidates with a damped Gauss-Newton iteration bounded
to non-negative parameters.  Weeks whose observed count rises well above
the fitted curve, or above the initial peak, are flagged for
investigation.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional, Sequence, Tuple

import numpy as np

from .errors import FitDiverged, TooFewPoints

MIN_POINTS = 4
DEFAULT_DEVIATION_K = 2.0

_RATE_GRID = np.geomspace(1e-3, 4.0, 80)
_POLISH_CANDIDATES = 3
_MAX_ITERATIONS = 100


@dataclass(frozen=True)
class Deviation:
    """One week compared against the fitted curve."""

    week: int
    observed: float
    predicted: float
    flagged: bool


@dataclass(frozen=True)
class DecayFit:
    """Fitted trend parameters with per-week deviation flags."""

    release_id: Optional[str]
    floor: float
    amplitude: float
    rate: float
    rmse: float
    deviations: Tuple[Deviation, ...]

    def predict(self, t: float) -> float:
        return self.floor + self.amplitude * math.exp(-self.rate * t)

    @property
    def flagged_weeks(self) -> Tuple[int, ...]:
        return tuple(d.week for d in self.deviations if d.flagged)


Points = Sequence[Tuple[int, float]]


def _model(t: np.ndarray, c: float, a: float, b: float) -> np.ndarray:
    return c + a * np.exp(-b * t)


def _sse(t: np.ndarray, y: np.ndarray, c: float, a: float, b: float) -> float:
    r = _model(t, c, a, b) - y
    return float(r @ r)


def _linear_solve(t: np.ndarray, y: np.ndarray, b: float) -> tuple[float, float]:
    """Best non-negative (floor, amplitude) for a fixed rate."""
    basis = np.column_stack([np.ones_like(t, dtype=float), np.exp(-b * t)])
    (c, a), *_ = np.linalg.lstsq(basis, y, rcond=None)
    if c >= 0 and a >= 0:
        return float(c), float(a)
    # Clamp against each axis and keep whichever fits better.
    candidates = []
    e = basis[:, 1]
    a_only = max(0.0, float((e @ y) / (e @ e)))
    candidates.append((0.0, a_only))
    c_only = max(0.0, float(np.mean(y)))
    candidates.append((c_only, 0.0))
    return min(candidates, key=lambda p: _sse(t, y, p[0], p[1], b))


def _gauss_newton(
    t: np.ndarray, y: np.ndarray, c: float, a: float, b: float
) -> tuple[float, float, float]:
    """Damped Gauss-Newton polish, parameters projected onto >= 0."""
    params = np.array([c, a, b], dtype=float)
    best = _sse(t, y, *params)
    for _ in range(_MAX_ITERATIONS):
        c, a, b = params
        e = np.exp(-b * t)
        residual = c + a * e - y
        jacobian = np.column_stack([np.ones_like(t, dtype=float), e, -a * t * e])
        step, *_ = np.linalg.lstsq(jacobian, -residual, rcond=None)
        improved = False
        scale = 1.0
        for _ in range(25):
            trial = np.maximum(params + scale * step, 0.0)
            trial_sse = _sse(t, y, *trial)
            if trial_sse < best:
                params, best = trial, trial_sse
                improved = True
                break
            scale *= 0.5
        if not improved or best <= 1e-24:
            break
    if not np.all(np.isfinite(params)):
        raise FitDiverged("trend fit produced non-finite parameters")
    return float(params[0]), float(params[1]), float(params[2])


def fit_decay(
    points: Points,
    release_id: Optional[str] = None,
    deviation_k: float = DEFAULT_DEVIATION_K,
) -> DecayFit:
    """Least-squares fit of the decay model to weekly counts.

    ``points`` are (week index, count) pairs; at least four are required.
    The returned fit carries the deviation flags for the same series at
    threshold ``deviation_k``.
    """
    if len(points) < MIN_POINTS:
        raise TooFewPoints(
            f"decay fit needs at least {MIN_POINTS} weekly points, got {len(points)}"
        )
    t = np.array([p[0] for p in points], dtype=float)
    y = np.array([p[1] for p in points], dtype=float)

    graded = []
    for b in _RATE_GRID:
        c, a = _linear_solve(t, y, float(b))
        graded.append((_sse(t, y, c, a, float(b)), c, a, float(b)))
    graded.sort(key=lambda item: item[0])

    best: Optional[tuple[float, float, float]] = None
    best_sse = math.inf
    for _, c, a, b in graded[:_POLISH_CANDIDATES]:
        c, a, b = _gauss_newton(t, y, c, a, b)
        sse = _sse(t, y, c, a, b)
        if sse < best_sse:
            best, best_sse = (c, a, b), sse
    assert best is not None
    c, a, b = best
    rmse = math.sqrt(best_sse / len(points))
    fit = DecayFit(
        release_id=release_id,
        floor=c,
        amplitude=a,
        rate=b,
        rmse=rmse,
        deviations=(),
    )
    deviations = detect_deviation(fit, points, k=deviation_k)
    return DecayFit(
        release_id=release_id,
        floor=c,
        amplitude=a,
        rate=b,
        rmse=rmse,
        deviations=deviations,
    )


def detect_deviation(
    fit: DecayFit, observed: Points, k: float = DEFAULT_DEVIATION_K
) -> Tuple[Deviation, ...]:
    """Compare an observed series against the fitted curve.

    A week is flagged when its count exceeds the prediction by more than
    ``k`` times the fit's residual error, or when any week after the first
    exceeds the initial peak.
    """
    if not observed:
        return ()
    first_week = min(p[0] for p in observed)
    peak = next(float(p[1]) for p in observed if p[0] == first_week)
    rows = []
    for week, count in observed:
        predicted = fit.predict(week)
        above_band = count > predicted + k * fit.rmse
        above_peak = week > first_week and count > peak
        rows.append(
            Deviation(
                week=int(week),
                observed=float(count),
                predicted=predicted,
                flagged=bool(above_band or above_peak),
            )
        )
    return tuple(rows)
