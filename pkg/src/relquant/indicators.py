"""Release quality, process and size indicators.

Every operation is a pure function over pre-computed scalars.  Division by a
degenerate denominator never produces infinity: it yields a typed
not-applicable value carrying the reason, and binary combiners propagate the
left operand's reason first.  KLOC values are line counts divided by 1000.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from datetime import datetime
from enum import Enum
from typing import Iterable, Optional, Union

from .domain import (
    Anomaly,
    Release,
    SizeDelta,
    classify_failures,
    hours_between,
    life_time,
)
from .errors import ForeignAnomaly, InvalidParams, UnknownComponent, UnknownIndicator
from .store import Dataset


class NaReason(str, Enum):
    """Why an indicator is not applicable for a release."""

    NO_FAILURES = "no_failures"
    NO_CHANGED_CODE = "no_changed_code"
    NO_TEST_ANOMALIES = "no_test_anomalies"
    NO_CLOSED_ANOMALIES = "no_closed_anomalies"
    ZERO_LIFE = "zero_life"


@dataclass(frozen=True)
class IndicatorValue:
    """Either a finite number or a not-applicable marker, never both."""

    value: Optional[float] = None
    na_reason: Optional[NaReason] = None

    def __post_init__(self) -> None:
        if (self.value is None) == (self.na_reason is None):
            raise ValueError("exactly one of value/na_reason must be set")
        if self.value is not None and not math.isfinite(self.value):
            raise ValueError(f"indicator value must be finite, got {self.value!r}")

    @classmethod
    def of(cls, value: float) -> "IndicatorValue":
        return cls(value=float(value))

    @classmethod
    def na(cls, reason: NaReason) -> "IndicatorValue":
        return cls(na_reason=reason)

    @property
    def applicable(self) -> bool:
        return self.value is not None


Scalar = Union[IndicatorValue, float, int]


def _as_indicator(value: Scalar) -> IndicatorValue:
    if isinstance(value, IndicatorValue):
        return value
    return IndicatorValue.of(value)


#: Canonical indicator names, the vocabulary of the CLI, API and dashboard.
INDICATOR_NAMES = (
    "mttf",
    "mttr",
    "mtbf",
    "tf_per_kloc",
    "fr",
    "quality",
    "av",
    "ed",
    "ifr",
    "tqi",
    "mtt_per_kloc",
    "pcr",
    "klcc",
    "fp",
)

INDICATOR_UNITS = {
    "mttf": "hours",
    "mttr": "hours",
    "mtbf": "hours",
    "tf_per_kloc": "failures/KLOC",
    "fr": "failures/hour",
    "quality": "defects/KLOC",
    "av": "percent",
    "ed": "1/hour",
    "ifr": "failures/hour",
    "tqi": "ratio",
    "mtt_per_kloc": "hours/KLOC",
    "pcr": "ratio",
    "klcc": "KLOC",
    "fp": "function points",
}


@dataclass(frozen=True)
class FpParameters:
    """Backfiring parameters: average lines per function point for the
    implementation language, and a complexity adjustment factor."""

    loc_per_fp: float = 120.0
    baf: float = 1.30

    def __post_init__(self) -> None:
        if self.loc_per_fp <= 0 or self.baf <= 0:
            raise InvalidParams(
                f"function point parameters must be > 0, "
                f"got loc_per_fp={self.loc_per_fp}, baf={self.baf}"
            )


DEFAULT_FP_PARAMETERS = FpParameters()


@dataclass(frozen=True)
class IndicatorSet:
    """The full indicator vector for one release."""

    release_id: str
    mttf: IndicatorValue
    mttr: IndicatorValue
    mtbf: IndicatorValue
    tf_per_kloc: IndicatorValue
    fr: IndicatorValue
    quality: IndicatorValue
    av_percent: IndicatorValue
    ed: IndicatorValue
    ifr: IndicatorValue
    tqi: IndicatorValue
    mtt_per_kloc: IndicatorValue
    pcr: IndicatorValue
    klcc: IndicatorValue
    fp: IndicatorValue

    def values(self) -> dict[str, IndicatorValue]:
        """Indicator values keyed by canonical name."""
        return {
            "mttf": self.mttf,
            "mttr": self.mttr,
            "mtbf": self.mtbf,
            "tf_per_kloc": self.tf_per_kloc,
            "fr": self.fr,
            "quality": self.quality,
            "av": self.av_percent,
            "ed": self.ed,
            "ifr": self.ifr,
            "tqi": self.tqi,
            "mtt_per_kloc": self.mtt_per_kloc,
            "pcr": self.pcr,
            "klcc": self.klcc,
            "fp": self.fp,
        }


# --- single-formula operations --------------------------------------------

def klcc(size: SizeDelta) -> float:
    """KLOC changed: new, changed and deleted lines summed, in thousands."""
    return size.changed_total / 1000.0


def mttf(tl: float, la: int) -> IndicatorValue:
    """Mean time to failure: life hours per during-life failure."""
    if la == 0:
        return IndicatorValue.na(NaReason.NO_FAILURES)
    return IndicatorValue.of(tl / la)


def mttr(anomalies: Iterable[Anomaly], as_of: datetime) -> IndicatorValue:
    """Mean time to repair: mean open-to-close duration over the anomalies
    already closed at ``as_of``.  Open anomalies have no repair duration yet
    and are excluded; with none closed the indicator is not applicable."""
    durations = []
    release_ids = set()
    for anomaly in anomalies:
        release_ids.add(anomaly.release_id)
        if anomaly.opened_at > as_of:
            continue
        if anomaly.closed_at is not None and anomaly.closed_at <= as_of:
            durations.append(hours_between(anomaly.opened_at, anomaly.closed_at))
    if len(release_ids) > 1:
        raise ForeignAnomaly(
            f"anomalies span several releases: {sorted(release_ids)}"
        )
    if not durations:
        return IndicatorValue.na(NaReason.NO_CLOSED_ANOMALIES)
    return IndicatorValue.of(sum(durations) / len(durations))


def mtbf(mttf_value: Scalar, mttr_value: Scalar) -> IndicatorValue:
    """Mean time between failures: MTTF plus MTTR."""
    left = _as_indicator(mttf_value)
    right = _as_indicator(mttr_value)
    if not left.applicable:
        return left
    if not right.applicable:
        return right
    return IndicatorValue.of(left.value + right.value)


def total_failures_per_kloc(la: int, klcc_value: float) -> IndicatorValue:
    """During-life failures normalized by KLOC changed."""
    if klcc_value == 0:
        return IndicatorValue.na(NaReason.NO_CHANGED_CODE)
    return IndicatorValue.of(la / klcc_value)


def failure_rate(la: int, tl: float) -> IndicatorValue:
    """During-life failures per hour of life."""
    if tl == 0:
        return IndicatorValue.na(NaReason.ZERO_LIFE)
    return IndicatorValue.of(la / tl)


def quality_index(defects: int, klcc_value: float) -> IndicatorValue:
    """Defects (all anomalies of the release) per KLOC changed."""
    if klcc_value == 0:
        return IndicatorValue.na(NaReason.NO_CHANGED_CODE)
    return IndicatorValue.of(defects / klcc_value)


def availability(mttf_value: Scalar, mttr_value: Scalar) -> IndicatorValue:
    """Up-time percentage between failures.  With no repairs on record the
    product was always up, so the limit value 100 is returned."""
    left = _as_indicator(mttf_value)
    right = _as_indicator(mttr_value)
    if not left.applicable:
        return left
    if not right.applicable:
        return IndicatorValue.of(100.0)
    return IndicatorValue.of(100.0 * left.value / (left.value + right.value))


def efficiency_degree(pcr_value: Scalar, tl: float) -> IndicatorValue:
    """Product change rate per hour of life; smaller means maintenance
    achieved more per unit of change."""
    left = _as_indicator(pcr_value)
    if not left.applicable:
        return left
    if tl == 0:
        return IndicatorValue.na(NaReason.ZERO_LIFE)
    return IndicatorValue.of(left.value / tl)


def integration_failure_rate(ta: int, test_hours: float) -> IndicatorValue:
    """During-test failures per hour of test."""
    if test_hours == 0:
        return IndicatorValue.na(NaReason.ZERO_LIFE)
    return IndicatorValue.of(ta / test_hours)


def test_quality_index(la: int, ta: int) -> IndicatorValue:
    """During-life failures per during-test failure; lower means the test
    process caught more before release."""
    if ta == 0:
        return IndicatorValue.na(NaReason.NO_TEST_ANOMALIES)
    return IndicatorValue.of(la / ta)


def maintenance_test_time_per_kloc(test_hours: float, klcc_value: float) -> IndicatorValue:
    """Test hours spent per KLOC changed."""
    if klcc_value == 0:
        return IndicatorValue.na(NaReason.NO_CHANGED_CODE)
    return IndicatorValue.of(test_hours / klcc_value)


def product_change_rate(klcc_value: float, tpkl: float) -> IndicatorValue:
    """KLOC changed relative to total product KLOC."""
    if tpkl == 0:
        return IndicatorValue.na(NaReason.NO_CHANGED_CODE)
    return IndicatorValue.of(klcc_value / tpkl)


def function_points(loc: int, params: FpParameters = DEFAULT_FP_PARAMETERS) -> float:
    """Function points backfired from lines of code."""
    return loc / (params.loc_per_fp * params.baf)


# --- composition ----------------------------------------------------------

def compute_indicator_set(
    release: Release,
    anomalies: Iterable[Anomaly],
    as_of: datetime,
    fp_params: FpParameters = DEFAULT_FP_PARAMETERS,
) -> IndicatorSet:
    """Compute the full indicator vector for one production release.

    Only anomalies already opened at ``as_of`` are counted, so a snapshot
    computed for a past instant reproduces what was known then.
    """
    anomalies = [a for a in anomalies if a.opened_at <= as_of]
    counts = classify_failures(release, anomalies)
    tl = life_time(release, as_of)
    klcc_value = klcc(release.size)
    tpkl = release.size.total_product_loc / 1000.0

    mttf_value = mttf(tl, counts.la)
    mttr_value = mttr(anomalies, as_of)
    pcr_value = product_change_rate(klcc_value, tpkl)
    return IndicatorSet(
        release_id=release.id,
        mttf=mttf_value,
        mttr=mttr_value,
        mtbf=mtbf(mttf_value, mttr_value),
        tf_per_kloc=total_failures_per_kloc(counts.la, klcc_value),
        fr=failure_rate(counts.la, tl),
        quality=quality_index(counts.tna, klcc_value),
        av_percent=availability(mttf_value, mttr_value),
        ed=efficiency_degree(pcr_value, tl),
        ifr=integration_failure_rate(counts.ta, release.test_hours),
        tqi=test_quality_index(counts.la, counts.ta),
        mtt_per_kloc=maintenance_test_time_per_kloc(release.test_hours, klcc_value),
        pcr=pcr_value,
        klcc=IndicatorValue.of(klcc_value),
        fp=IndicatorValue.of(function_points(release.size.total_product_loc, fp_params)),
    )


def production_releases(dataset: Dataset, component: Optional[str] = None) -> list[Release]:
    """Production releases, optionally restricted to one component, in
    release-date order with ties broken by version."""
    if component is not None:
        known = {r.component for r in dataset.releases.values()}
        if component not in known:
            raise UnknownComponent(f"unknown component {component!r}", component=component)
    selected = [
        r
        for r in dataset.releases.values()
        if r.production and (component is None or r.component == component)
    ]
    return sorted(selected, key=lambda r: (r.released_at, r.version))


def indicator_series(
    dataset: Dataset,
    component: str,
    indicator: str,
    as_of: Optional[datetime] = None,
    fp_params: FpParameters = DEFAULT_FP_PARAMETERS,
) -> list[tuple[Release, IndicatorValue]]:
    """One indicator across a component's production releases in date order.
    Not-applicable values stay in the series; they are never dropped."""
    if indicator not in INDICATOR_NAMES:
        raise UnknownIndicator(f"unknown indicator {indicator!r}", indicator=indicator)
    if as_of is None:
        as_of = dataset.loaded_at
    series = []
    for release in production_releases(dataset, component):
        indicator_set = compute_indicator_set(
            release, dataset.release_anomalies(release.id), as_of, fp_params
        )
        series.append((release, indicator_set.values()[indicator]))
    return series
