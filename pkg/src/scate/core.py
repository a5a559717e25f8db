"""Timestamps, calendar units and half-open intervals.

Timestamps are naive :class:`datetime.datetime` values at second precision on
the proleptic Gregorian calendar.  Intervals are half-open ``[start, end)``
spans whose endpoints may be absent, meaning unbounded on that side.
"""
from __future__ import annotations

import calendar
import dataclasses
import datetime
import enum

from .errors import InvalidDateError, OrderingError, OutOfRangeError

Timestamp = datetime.datetime

UNBOUNDED = "..."


class Unit(enum.Enum):
    SECOND = 1
    MINUTE = 2
    HOUR = 3
    DAY = 4
    WEEK = 5
    MONTH = 6
    YEAR = 7
    CENTURY = 8

    @property
    def rank(self) -> int:
        return self.value

    def __lt__(self, other):
        if isinstance(other, Unit):
            return self.value < other.value
        return NotImplemented

    def __le__(self, other):
        if isinstance(other, Unit):
            return self.value <= other.value
        return NotImplemented

    def __gt__(self, other):
        if isinstance(other, Unit):
            return self.value > other.value
        return NotImplemented

    def __ge__(self, other):
        if isinstance(other, Unit):
            return self.value >= other.value
        return NotImplemented

    def __repr__(self):
        return self.name

    # members are singletons; identity hashing skips Enum's per-call name hash
    __hash__ = object.__hash__

    def truncate(self, ts: Timestamp) -> Timestamp:
        return truncate(ts, self)

    def advance(self, ts: Timestamp, n: int) -> Timestamp:
        return advance(ts, self, n)


SECOND, MINUTE, HOUR, DAY, WEEK, MONTH, YEAR, CENTURY = Unit

_EXACT = {
    Unit.SECOND: datetime.timedelta(seconds=1),
    Unit.MINUTE: datetime.timedelta(minutes=1),
    Unit.HOUR: datetime.timedelta(hours=1),
    Unit.DAY: datetime.timedelta(days=1),
    Unit.WEEK: datetime.timedelta(weeks=1),
}
_MONTHS = {Unit.MONTH: 1, Unit.YEAR: 12, Unit.CENTURY: 1200}


def truncate(ts: Timestamp, unit: Unit) -> Timestamp:
    """Return the largest timestamp <= `ts` that starts a `unit`."""
    ts = ts.replace(microsecond=0)
    if unit is Unit.SECOND:
        return ts
    if unit is Unit.MINUTE:
        return ts.replace(second=0)
    if unit is Unit.HOUR:
        return ts.replace(minute=0, second=0)
    day = ts.replace(hour=0, minute=0, second=0)
    if unit is Unit.DAY:
        return day
    if unit is Unit.WEEK:
        monday = day.toordinal() - day.weekday()
        if monday < 1:
            raise OutOfRangeError(f"no week start before {ts.isoformat()}")
        return datetime.datetime.fromordinal(monday)
    if unit is Unit.MONTH:
        return day.replace(day=1)
    if unit is Unit.YEAR:
        return day.replace(month=1, day=1)
    # there is no year 0, so the first century starts in year 1
    return datetime.datetime(max(ts.year // 100 * 100, datetime.MINYEAR), 1, 1)


def advance(ts: Timestamp, unit: Unit, n: int) -> Timestamp:
    """Move `ts` by `n` units (negative `n` moves backward).

    Calendar units (MONTH, YEAR, CENTURY) keep the day of month when it exists
    in the target month and clamp it to the month's last day otherwise.
    """
    try:
        if unit in _EXACT:
            return ts + n * _EXACT[unit]
        months = ts.year * 12 + (ts.month - 1) + n * _MONTHS[unit]
        year, month = divmod(months, 12)
        month += 1
        if not datetime.MINYEAR <= year <= datetime.MAXYEAR:
            raise OverflowError
        day = min(ts.day, calendar.monthrange(year, month)[1])
        return ts.replace(year=year, month=month, day=day)
    except OverflowError:
        raise OutOfRangeError(f"moving {ts.isoformat()} by {n} {unit.name} leaves the calendar") from None


def format_timestamp(ts: Timestamp | None) -> str:
    return UNBOUNDED if ts is None else ts.isoformat(timespec="seconds")


def parse_timestamp(text: str) -> Timestamp | None:
    if text == UNBOUNDED:
        return None
    try:
        ts = datetime.datetime.fromisoformat(text)
    except ValueError as e:
        raise InvalidDateError(f"bad ISO timestamp {text!r}: {e}") from None
    if ts.tzinfo is not None or ts.microsecond:
        raise InvalidDateError(f"timestamps must be naive with second precision, got {text!r}")
    return ts


@dataclasses.dataclass(frozen=True)
class Interval:
    """
    A span of the timeline, from `start` (inclusive) to `end` (exclusive).
    A ``None`` endpoint is unbounded on that side.  For example, the year 1990::

        Interval.of(1990)   # [1990-01-01T00:00:00, 1991-01-01T00:00:00)
    """
    start: Timestamp | None
    end: Timestamp | None

    def __post_init__(self):
        for ts in (self.start, self.end):
            if ts is not None and (ts.tzinfo is not None or ts.microsecond):
                raise InvalidDateError(f"timestamps must be naive with second precision, got {ts!r}")
        if self.start is not None and self.end is not None and not self.start < self.end:
            raise OrderingError(f"interval start {self.start.isoformat()} is not before end {self.end.isoformat()}")

    @classmethod
    def of(cls, year: int, month: int | None = None, day: int | None = None,
           hour: int | None = None, minute: int | None = None, second: int | None = None) -> Interval:
        """The interval covering one calendar unit, at the finest granularity given."""
        return interval_of(year, month, day, hour, minute, second)

    @classmethod
    def fromisoformat(cls, text: str) -> Interval:
        return interval_from_iso(text)

    @property
    def is_bounded(self) -> bool:
        return self.start is not None and self.end is not None

    def isoformat(self) -> str:
        return f"{format_timestamp(self.start)} {format_timestamp(self.end)}"

    def __str__(self):
        return self.isoformat()

    def contains(self, other: Interval) -> bool:
        """True when `other` lies entirely inside this interval."""
        starts_ok = self.start is None or (other.start is not None and self.start <= other.start)
        ends_ok = self.end is None or (other.end is not None and other.end <= self.end)
        return starts_ok and ends_ok


_COMPONENT_UNITS = (Unit.YEAR, Unit.MONTH, Unit.DAY, Unit.HOUR, Unit.MINUTE, Unit.SECOND)


def interval_of(year: int, month: int | None = None, day: int | None = None,
                hour: int | None = None, minute: int | None = None, second: int | None = None) -> Interval:
    components = [year, month, day, hour, minute, second]
    given = 0
    for i, value in enumerate(components):
        if value is None:
            break
        given = i + 1
    if any(v is not None for v in components[given:]):
        raise InvalidDateError(f"calendar components must form a prefix, got {components!r}")
    for value in components[:given]:
        if isinstance(value, bool) or not isinstance(value, int):
            raise InvalidDateError(f"calendar components must be integers, got {value!r}")
    defaults = [year, 1, 1, 0, 0, 0]
    defaults[:given] = components[:given]
    try:
        start = datetime.datetime(*defaults)
    except (ValueError, OverflowError) as e:
        raise InvalidDateError(f"invalid date {components[:given]!r}: {e}") from None
    return Interval(start, advance(start, _COMPONENT_UNITS[given - 1], 1))


def interval_from_iso(text: str) -> Interval:
    """Parse ``"<start> <end>"``, where either side may be ``...``."""
    if not isinstance(text, str):
        raise InvalidDateError(f"expected a string, got {text!r}")
    parts = text.split(" ")
    if len(parts) != 2 or not all(parts):
        raise InvalidDateError(f"expected two ISO timestamps separated by one space, got {text!r}")
    start, end = (parse_timestamp(p) for p in parts)
    return Interval(start, end)


def interval_overlap(a: Interval, b: Interval) -> Interval | None:
    """The common part of two intervals, or None when they do not overlap."""
    if a.start is None:
        start = b.start
    elif b.start is None:
        start = a.start
    else:
        start = max(a.start, b.start)
    if a.end is None:
        end = b.end
    elif b.end is None:
        end = a.end
    else:
        end = min(a.end, b.end)
    if start is not None and end is not None and start >= end:
        return None
    return Interval(start, end)
