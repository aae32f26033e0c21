"""Release quality indicators, anomaly reports and an HTTP scoreboard.

relquant turns two flat files — releases and anomalies — into the numbers a
maintenance organization steers by: reliability and process indicators per
release, weekly anomaly trend and board reports, decay-curve fits over
post-release anomaly influx, and on-demand statistics across releases.  The
same snapshot feeds the library API, the command line and the read-only
HTTP service, which all produce identical numbers by construction.
"""

from __future__ import annotations

from .decay import DecayFit, Deviation, detect_deviation, fit_decay
from .domain import (
    SEVERITY_ORDER,
    Anomaly,
    DetectionEnvironment,
    FailureCounts,
    PhaseSpan,
    Release,
    Severity,
    SizeDelta,
    anomaly_age,
    classify_failures,
    life_time,
)
from .errors import RelquantError
from .indicators import (
    DEFAULT_FP_PARAMETERS,
    INDICATOR_NAMES,
    INDICATOR_UNITS,
    FpParameters,
    IndicatorSet,
    IndicatorValue,
    NaReason,
    compute_indicator_set,
    function_points,
    indicator_series,
    production_releases,
)
from .reports import (
    AnomalyDistribution,
    BoardReport,
    WeeklyAnomalyReport,
    anomaly_distribution,
    board_report,
    severity_breakdown,
    weekly_trend,
)
from .service import SnapshotHolder, create_app
from .stats import StatResult, evaluate, linreg, mean, pearson, stddev
from .store import (
    Dataset,
    build_dataset,
    export,
    load,
    load_store,
    parse_anomalies,
    parse_releases,
    production_view,
    save,
)
from .weeks import Week, week_range

__version__ = "0.1.0"

__all__ = [
    "Anomaly",
    "AnomalyDistribution",
    "BoardReport",
    "Dataset",
    "DecayFit",
    "DEFAULT_FP_PARAMETERS",
    "DetectionEnvironment",
    "Deviation",
    "FailureCounts",
    "FpParameters",
    "INDICATOR_NAMES",
    "INDICATOR_UNITS",
    "IndicatorSet",
    "IndicatorValue",
    "NaReason",
    "PhaseSpan",
    "Release",
    "RelquantError",
    "SEVERITY_ORDER",
    "Severity",
    "SizeDelta",
    "SnapshotHolder",
    "StatResult",
    "Week",
    "WeeklyAnomalyReport",
    "anomaly_age",
    "anomaly_distribution",
    "board_report",
    "build_dataset",
    "classify_failures",
    "compute_indicator_set",
    "create_app",
    "detect_deviation",
    "evaluate",
    "export",
    "fit_decay",
    "function_points",
    "indicator_series",
    "life_time",
    "linreg",
    "load",
    "load_store",
    "mean",
    "parse_anomalies",
    "parse_releases",
    "pearson",
    "production_releases",
    "production_view",
    "save",
    "severity_breakdown",
    "stddev",
    "week_range",
    "weekly_trend",
]
