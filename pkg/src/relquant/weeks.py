"""ISO-8601 week ids (``1997-W12``) and week arithmetic.

Weeks start on Monday.  A timestamp belongs to the ISO week of its calendar
date, so an event at Monday 00:00 UTC already falls in the new week.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from datetime import date, datetime, timedelta
from typing import Union

from .errors import BadRange

_WEEK_RE = re.compile(r"^(\d{4})-W(\d{2})$")


@dataclass(frozen=True, order=True)
class Week:
    """One ISO week, ordered chronologically."""

    year: int
    week: int

    @classmethod
    def parse(cls, text: str) -> "Week":
        m = _WEEK_RE.match(text)
        if not m:
            raise BadRange(f"malformed week id {text!r}, expected YYYY-Wnn", week=text)
        year, week = int(m.group(1)), int(m.group(2))
        try:
            date.fromisocalendar(year, week, 1)
        except ValueError as exc:
            raise BadRange(f"invalid week id {text!r}: {exc}", week=text) from None
        return cls(year, week)

    @classmethod
    def of(cls, moment: Union[date, datetime]) -> "Week":
        if isinstance(moment, datetime):
            moment = moment.date()
        iso = moment.isocalendar()
        return cls(iso[0], iso[1])

    def monday(self) -> date:
        return date.fromisocalendar(self.year, self.week, 1)

    def sunday(self) -> date:
        return self.monday() + timedelta(days=6)

    def next(self) -> "Week":
        return Week.of(self.monday() + timedelta(days=7))

    def __str__(self) -> str:
        return f"{self.year:04d}-W{self.week:02d}"


def as_week(value: Union[Week, str]) -> Week:
    return value if isinstance(value, Week) else Week.parse(value)


def week_range(start: Week, end: Week) -> list[Week]:
    """Every week from ``start`` to ``end`` inclusive."""
    if start > end:
        raise BadRange(f"week range start {start} after end {end}")
    weeks = []
    current = start
    while current <= end:
        weeks.append(current)
        current = current.next()
    return weeks
