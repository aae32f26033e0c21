"""Typed error taxonomy.

Every failure mode surfaces as a subclass of :class:`RelquantError` whose
class name doubles as the stable error code used by the CLI (exit status 1,
code printed to stderr) and the HTTP API (``error.code`` in the response
envelope).  Context that callers may want to act on (row number, field name,
offending id) travels in ``detail``.
"""

from __future__ import annotations


class RelquantError(Exception):
    """Base class for all domain errors raised by this package."""

    def __init__(self, message: str, **detail: object) -> None:
        super().__init__(message)
        self.message = message
        self.detail = detail

    @property
    def code(self) -> str:
        return type(self).__name__


# --- domain layer ---------------------------------------------------------

class NotInProduction(RelquantError):
    """Life-time asked for a release that never ran in production."""


class NotYetReleased(RelquantError):
    """Reference time lies before the release date of an open-ended release."""


class ForeignAnomaly(RelquantError):
    """An anomaly in the input is attributed to a different release."""


class FutureAnomaly(RelquantError):
    """Reference time lies before the anomaly was opened."""


# --- store layer ----------------------------------------------------------

class HeaderMismatch(RelquantError):
    """First line of a delimited file is not the exact expected header."""


class FieldCount(RelquantError):
    """A data row has the wrong number of semicolon-separated fields."""


class BadDate(RelquantError):
    """A date or timestamp field does not parse in the canonical format."""


class BadNumber(RelquantError):
    """A numeric field does not parse, or a flag is not 0/1."""


class BadEnum(RelquantError):
    """A severity or detection-environment field holds an unknown value."""


class DuplicateId(RelquantError):
    """The same id appears on more than one row."""


class InvalidRecord(RelquantError):
    """A parsed row violates a record invariant (ordering, sign, separator)."""


class IntegrityError(RelquantError):
    """An anomaly references a release id that is not in the dataset."""


class IoError(RelquantError):
    """Reading or writing the store failed at the OS level."""


# --- indicator engine -----------------------------------------------------

class UnknownIndicator(RelquantError):
    """Requested indicator name is not one of the canonical names."""


class UnknownComponent(RelquantError):
    """No release in the dataset belongs to the requested component."""


class UnknownRelease(RelquantError):
    """Requested release id is not in the dataset."""


class InvalidParams(RelquantError):
    """Function-point parameters must be strictly positive."""


# --- reports, trend fitting, statistics -----------------------------------

class BadRange(RelquantError):
    """Malformed week id, or range start after range end."""


class TooFewPoints(RelquantError):
    """Not enough data points for the requested computation."""


class FitDiverged(RelquantError):
    """Trend fit failed to converge to finite parameters."""


class ConstantSeries(RelquantError):
    """A series with zero variance cannot support the requested statistic."""
