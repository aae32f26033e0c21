"""On-demand statistics over release series.

Mean, standard deviation, Pearson correlation and ordinary least squares
regression, computed over indicator series or raw release columns aligned
by release.  Not-applicable entries are skipped (pairwise for the
two-series operations) so sparse early releases do not poison long series;
the reported ``n`` is the number of points actually used.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from datetime import datetime
from typing import Optional, Sequence, Union

from .errors import ConstantSeries, InvalidParams, TooFewPoints, UnknownIndicator
from .indicators import (
    INDICATOR_NAMES,
    FpParameters,
    DEFAULT_FP_PARAMETERS,
    IndicatorValue,
    compute_indicator_set,
    production_releases,
)
from .store import Dataset

#: Raw release columns that can serve as a series next to the indicators.
RELEASE_FIELDS = (
    "test_hours",
    "dev_effort_pd",
    "test_effort_pd",
    "new_lines",
    "changed_lines",
    "deleted_lines",
    "total_product_loc",
)

STAT_OPERATIONS = ("mean", "stddev", "correlation", "regression")

Entry = Union[float, int, None, IndicatorValue]


@dataclass(frozen=True)
class StatResult:
    """Outcome of one statistics request."""

    operation: str
    inputs: tuple[str, ...]
    values: dict[str, float]
    n: int


def _as_number(entry: Entry) -> Optional[float]:
    if entry is None:
        return None
    if isinstance(entry, IndicatorValue):
        return entry.value
    return float(entry)


def _clean(series: Sequence[Entry]) -> list[float]:
    return [v for v in (_as_number(e) for e in series) if v is not None]


def _clean_pairs(
    xs: Sequence[Entry], ys: Sequence[Entry]
) -> tuple[list[float], list[float]]:
    cleaned_x, cleaned_y = [], []
    for x_entry, y_entry in zip(xs, ys):
        x, y = _as_number(x_entry), _as_number(y_entry)
        if x is not None and y is not None:
            cleaned_x.append(x)
            cleaned_y.append(y)
    return cleaned_x, cleaned_y


def _is_constant(values: Sequence[float]) -> bool:
    return max(values) == min(values)


def mean(series: Sequence[Entry], descriptor: str = "series") -> StatResult:
    values = _clean(series)
    if len(values) < 1:
        raise TooFewPoints("mean needs at least one applicable point")
    return StatResult(
        operation="mean",
        inputs=(descriptor,),
        values={"mean": sum(values) / len(values)},
        n=len(values),
    )


def stddev(series: Sequence[Entry], descriptor: str = "series") -> StatResult:
    values = _clean(series)
    if len(values) < 2:
        raise TooFewPoints("stddev needs at least two applicable points")
    if _is_constant(values):
        raise ConstantSeries("stddev of a constant series is degenerate")
    centre = sum(values) / len(values)
    variance = sum((v - centre) ** 2 for v in values) / (len(values) - 1)
    return StatResult(
        operation="stddev",
        inputs=(descriptor,),
        values={"stddev": math.sqrt(variance)},
        n=len(values),
    )


def pearson(
    xs: Sequence[Entry],
    ys: Sequence[Entry],
    descriptors: tuple[str, str] = ("x", "y"),
) -> StatResult:
    """Pearson correlation over pairs where both sides are applicable."""
    x, y = _clean_pairs(xs, ys)
    if len(x) < 2:
        raise TooFewPoints("correlation needs at least two complete pairs")
    if _is_constant(x) or _is_constant(y):
        raise ConstantSeries("correlation is undefined for a constant series")
    n = len(x)
    mx = sum(x) / n
    my = sum(y) / n
    sxy = sum((a - mx) * (b - my) for a, b in zip(x, y))
    sxx = sum((a - mx) ** 2 for a in x)
    syy = sum((b - my) ** 2 for b in y)
    r = sxy / math.sqrt(sxx * syy)
    r = max(-1.0, min(1.0, r))
    return StatResult(
        operation="correlation", inputs=descriptors, values={"r": r}, n=n
    )


def linreg(
    xs: Sequence[Entry],
    ys: Sequence[Entry],
    descriptors: tuple[str, str] = ("x", "y"),
) -> StatResult:
    """Ordinary least squares of y on x over complete pairs."""
    x, y = _clean_pairs(xs, ys)
    if len(x) < 2:
        raise TooFewPoints("regression needs at least two complete pairs")
    if _is_constant(x):
        raise ConstantSeries("regression is undefined for a constant x series")
    n = len(x)
    mx = sum(x) / n
    my = sum(y) / n
    sxy = sum((a - mx) * (b - my) for a, b in zip(x, y))
    sxx = sum((a - mx) ** 2 for a in x)
    slope = sxy / sxx
    intercept = my - slope * mx
    ss_res = sum((b - (intercept + slope * a)) ** 2 for a, b in zip(x, y))
    ss_tot = sum((b - my) ** 2 for b in y)
    if ss_tot == 0:
        r_squared = 1.0 if ss_res == 0 else 0.0
    else:
        r_squared = 1.0 - ss_res / ss_tot
    return StatResult(
        operation="regression",
        inputs=descriptors,
        values={"slope": slope, "intercept": intercept, "r_squared": r_squared},
        n=n,
    )


# --- series extraction ----------------------------------------------------

def series_names() -> tuple[str, ...]:
    return INDICATOR_NAMES + RELEASE_FIELDS


def release_series(
    dataset: Dataset,
    name: str,
    component: Optional[str] = None,
    as_of: Optional[datetime] = None,
    fp_params: FpParameters = DEFAULT_FP_PARAMETERS,
) -> list[tuple[str, Optional[float]]]:
    """Series of (release id, value) for an indicator or release column,
    over production releases in date order.  Not-applicable indicator
    entries appear as None."""
    if name not in series_names():
        raise UnknownIndicator(f"unknown series name {name!r}", indicator=name)
    if as_of is None:
        as_of = dataset.loaded_at
    releases = production_releases(dataset, component)
    series: list[tuple[str, Optional[float]]] = []
    for release in releases:
        if name in RELEASE_FIELDS:
            if name in ("test_hours", "dev_effort_pd", "test_effort_pd"):
                value: Optional[float] = float(getattr(release, name))
            else:
                value = float(getattr(release.size, name))
        else:
            indicator_set = compute_indicator_set(
                release, dataset.release_anomalies(release.id), as_of, fp_params
            )
            value = indicator_set.values()[name].value
        series.append((release.id, value))
    return series


def evaluate(
    dataset: Dataset,
    operation: str,
    x: str,
    y: Optional[str] = None,
    component: Optional[str] = None,
    as_of: Optional[datetime] = None,
) -> StatResult:
    """Run one statistics request against a snapshot.  Two-series
    operations align x and y by release id before pairwise cleaning."""
    if operation not in STAT_OPERATIONS:
        raise InvalidParams(
            f"unknown statistics operation {operation!r}", operation=operation
        )
    x_series = release_series(dataset, x, component, as_of)
    if operation in ("mean", "stddev"):
        values = [value for _, value in x_series]
        return mean(values, x) if operation == "mean" else stddev(values, x)
    if y is None:
        raise InvalidParams(f"operation {operation} needs both x and y series")
    y_series = release_series(dataset, y, component, as_of)
    by_release = dict(y_series)
    xs = [value for _, value in x_series]
    ys = [by_release.get(release_id) for release_id, _ in x_series]
    if operation == "correlation":
        return pearson(xs, ys, (x, y))
    return linreg(xs, ys, (x, y))
