"""Shifts: amounts of time and calendar-anchored repeating intervals.

Every shift exposes two lazy streams around an anchor timestamp:

* ``following(anchor)`` yields instances starting at or after the anchor, in
  increasing order;
* ``preceding(anchor)`` yields instances ending at or before the anchor, most
  recent first.

An instance that straddles the anchor appears in neither stream.
"""
from __future__ import annotations

import abc
import contextlib
import contextvars
import dataclasses
import heapq
import itertools
from collections.abc import Iterator
from typing import ClassVar

from .core import Interval, Timestamp, Unit, advance, truncate
from .errors import InvalidArgumentError, OutOfRangeError, UnanchorableError

DEFAULT_INSTANCE_BUDGET = 10_000


class InstanceBudget:
    """Caps the number of stream elements one evaluation may consume."""

    def __init__(self, limit: int = DEFAULT_INSTANCE_BUDGET):
        self.limit = limit
        self.used = 0

    def charge(self, n: int = 1):
        self.used += n
        if self.used > self.limit:
            raise OutOfRangeError(f"gave up after scanning {self.limit} intervals")


_budget: contextvars.ContextVar[InstanceBudget | None] = contextvars.ContextVar("scate_budget", default=None)


@contextlib.contextmanager
def instance_budget(limit: int = DEFAULT_INSTANCE_BUDGET):
    budget = InstanceBudget(limit)
    token = _budget.set(budget)
    try:
        yield budget
    finally:
        _budget.reset(token)


def _charged(stream: Iterator[Interval]) -> Iterator[Interval]:
    for interval in stream:
        budget = _budget.get()
        if budget is not None:
            budget.charge()
        yield interval


def take(stream: Iterator[Interval], k: int) -> list[Interval]:
    return list(itertools.islice(stream, k))


class Shift(abc.ABC):
    """Something that can be added to or subtracted from a point on the timeline."""

    is_period: ClassVar[bool] = False
    is_repeating: ClassVar[bool] = False

    @abc.abstractmethod
    def following(self, anchor: Timestamp) -> Iterator[Interval]:
        ...

    @abc.abstractmethod
    def preceding(self, anchor: Timestamp) -> Iterator[Interval]:
        ...


def _check_int(value, name: str, minimum: int | None = None):
    if isinstance(value, bool) or not isinstance(value, int):
        raise InvalidArgumentError(f"{name} must be an integer, got {value!r}")
    if minimum is not None and value < minimum:
        raise InvalidArgumentError(f"{name} must be >= {minimum}, got {value!r}")


def _check_unit(value, name: str):
    if not isinstance(value, Unit):
        raise InvalidArgumentError(f"{name} must be a Unit, got {value!r}")


# ---------------------------------------------------------------------------
# periods


class PeriodShift(Shift):
    is_period = True

    @abc.abstractmethod
    def shift(self, ts: Timestamp, k: int) -> Timestamp:
        """`ts` moved by `k` whole copies of this period (negative `k` moves back)."""

    @property
    @abc.abstractmethod
    def is_anchorable(self) -> bool:
        ...

    def _require_count(self):
        if not self.is_anchorable:
            raise UnanchorableError(f"{self} has no count and cannot be placed on the timeline")

    def following(self, anchor: Timestamp) -> Iterator[Interval]:
        self._require_count()

        def chunks():
            for k in itertools.count():
                yield Interval(self.shift(anchor, k), self.shift(anchor, k + 1))
        return _charged(chunks())

    def preceding(self, anchor: Timestamp) -> Iterator[Interval]:
        self._require_count()

        def chunks():
            for k in itertools.count():
                yield Interval(self.shift(anchor, -k - 1), self.shift(anchor, -k))
        return _charged(chunks())


@dataclasses.dataclass(frozen=True)
class Period(PeriodShift):
    """
    A count of one time unit, independent of the timeline.  "three months"::

        Period(MONTH, 3)

    ``n=None`` stands for an unspecified amount, as in "recent years".
    """
    unit: Unit
    n: int | None = None

    def __post_init__(self):
        _check_unit(self.unit, "unit")
        if self.n is not None:
            _check_int(self.n, "n", 1)

    @property
    def is_anchorable(self) -> bool:
        return self.n is not None

    def shift(self, ts: Timestamp, k: int) -> Timestamp:
        self._require_count()
        return advance(ts, self.unit, k * self.n)


@dataclasses.dataclass(frozen=True)
class PeriodSum(PeriodShift):
    """
    Several periods added together.  "two years and a day"::

        PeriodSum([Period(YEAR, 2), Period(DAY, 1)])
    """
    periods: tuple[Period, ...]

    def __post_init__(self):
        periods = tuple(self.periods) if isinstance(self.periods, (list, tuple)) else None
        if periods is None or len(periods) < 2:
            raise InvalidArgumentError(f"PeriodSum needs a list of at least two periods, got {self.periods!r}")
        for p in periods:
            if not isinstance(p, Period):
                raise InvalidArgumentError(f"PeriodSum can only add Periods, got {p!r}")
        object.__setattr__(self, "periods", periods)

    @property
    def is_anchorable(self) -> bool:
        return all(p.is_anchorable for p in self.periods)

    def shift(self, ts: Timestamp, k: int) -> Timestamp:
        self._require_count()
        sign = 1 if k >= 0 else -1
        for _ in range(abs(k)):
            for p in self.periods:
                ts = advance(ts, p.unit, sign * p.n)
        return ts


def apply_period(ts: Timestamp, period: PeriodShift, direction: str = "forward") -> Timestamp:
    """Add (``"forward"``) or subtract (``"backward"``) a period from a timestamp."""
    if direction not in ("forward", "backward"):
        raise ValueError(f"direction must be 'forward' or 'backward', got {direction!r}")
    return period.shift(ts, 1 if direction == "forward" else -1)


# ---------------------------------------------------------------------------
# repeating intervals


class RepeatingShift(Shift):
    """Base for shifts whose instances are fixed by the calendar."""

    is_repeating = True

    @property
    @abc.abstractmethod
    def duration_unit(self) -> Unit:
        ...

    @property
    @abc.abstractmethod
    def range_unit(self) -> Unit:
        ...

    @abc.abstractmethod
    def instance_containing(self, interval: Interval) -> Interval | None:
        """The instance of this shift that contains `interval`, if any."""


class CalendarRepeating(RepeatingShift):
    """A repeating interval with at most one instance starting in each range-unit instance."""

    @abc.abstractmethod
    def candidate(self, range_start: Timestamp) -> Interval | None:
        """The instance attributed to the range instance starting at `range_start`."""

    def _next_range(self, range_start: Timestamp, k: int) -> Timestamp:
        return truncate(advance(range_start, self.range_unit, k), self.range_unit)

    def following(self, anchor: Timestamp) -> Iterator[Interval]:
        def scan():
            range_start = truncate(anchor, self.range_unit)
            while True:
                instance = self.candidate(range_start)
                if instance is not None and instance.start >= anchor:
                    yield instance
                range_start = self._next_range(range_start, 1)
        return _charged(scan())

    def preceding(self, anchor: Timestamp) -> Iterator[Interval]:
        def scan():
            range_start = truncate(anchor, self.range_unit)
            while True:
                instance = self.candidate(range_start)
                if instance is not None and instance.end <= anchor:
                    yield instance
                range_start = self._next_range(range_start, -1)
        return _charged(scan())

    def instance_containing(self, interval: Interval) -> Interval | None:
        range_start = truncate(interval.start, self.range_unit)
        starts = [range_start]
        with contextlib.suppress(OutOfRangeError):
            starts.append(self._next_range(range_start, -1))
        for start in starts:
            instance = self.candidate(start)
            if instance is not None and instance.contains(interval):
                return instance
        return None


# (duration unit, range unit) -> valid values; the first value is the offset base
REPEATING_VALUES = {
    (Unit.MONTH, Unit.YEAR): range(1, 13),
    (Unit.DAY, Unit.MONTH): range(1, 32),
    (Unit.DAY, Unit.WEEK): range(0, 7),
    (Unit.HOUR, Unit.DAY): range(0, 24),
    (Unit.MINUTE, Unit.HOUR): range(0, 60),
    (Unit.SECOND, Unit.MINUTE): range(0, 60),
}


@dataclasses.dataclass(frozen=True)
class Repeating(CalendarRepeating):
    """
    Calendar units repeating along the timeline.  All Februaries::

        Repeating(MONTH, YEAR, value=2)

    Days of the week count from Monday as 0, so every Thursday is
    ``Repeating(DAY, WEEK, value=3)``.  Without a value every unit repeats:
    ``Repeating(DAY)`` is every day.
    """
    unit: Unit
    range: Unit | None = None
    value: int | None = None

    def __post_init__(self):
        _check_unit(self.unit, "unit")
        if self.range is None:
            object.__setattr__(self, "range", self.unit)
        _check_unit(self.range, "range")
        if self.value is None:
            if self.range is not self.unit:
                raise InvalidArgumentError(f"Repeating({self.unit!r}, {self.range!r}) needs a value")
            return
        valid = REPEATING_VALUES.get((self.unit, self.range))
        if valid is None:
            raise InvalidArgumentError(f"unsupported repeating unit pair ({self.unit!r}, {self.range!r})")
        _check_int(self.value, "value")
        if self.value not in valid:
            raise InvalidArgumentError(
                f"value for ({self.unit!r}, {self.range!r}) must be in {valid.start}..{valid.stop - 1}, got {self.value}")

    @property
    def duration_unit(self) -> Unit:
        return self.unit

    @property
    def range_unit(self) -> Unit:
        return self.range

    def candidate(self, range_start: Timestamp) -> Interval | None:
        if self.value is None:
            return Interval(range_start, self._next_range(range_start, 1))
        offset = self.value - REPEATING_VALUES[self.unit, self.range].start
        start = advance(range_start, self.unit, offset)
        # e.g. day 31 of a 30-day month spills into the next month
        if truncate(start, self.range) != range_start:
            return None
        return Interval(start, advance(start, self.unit, 1))


class NamedRepeating(CalendarRepeating):
    """A repeating interval with fixed boundaries inside each range unit."""

    range_unit: ClassVar[Unit]
    duration_unit: ClassVar[Unit]
    offset: ClassVar[tuple[Unit, int]]
    length: ClassVar[tuple[Unit, int]]

    def candidate(self, range_start: Timestamp) -> Interval:
        start = advance(range_start, self.offset[0], self.offset[1])
        return Interval(start, advance(start, self.length[0], self.length[1]))

    def __repr__(self):
        return f"{type(self).__name__}()"


def _named(name: str, range_unit: Unit, duration_unit: Unit,
           offset: tuple[Unit, int], length: tuple[Unit, int], doc: str):
    attrs = dict(range_unit=range_unit, duration_unit=duration_unit, offset=offset, length=length, __doc__=doc)
    return dataclasses.dataclass(frozen=True, repr=False)(type(name, (NamedRepeating,), attrs))


# meteorological seasons; winter belongs to the year of its December
Spring = _named("Spring", Unit.YEAR, Unit.MONTH, (Unit.MONTH, 2), (Unit.MONTH, 3), "March 1 until June 1.")
Summer = _named("Summer", Unit.YEAR, Unit.MONTH, (Unit.MONTH, 5), (Unit.MONTH, 3), "June 1 until September 1.")
Fall = _named("Fall", Unit.YEAR, Unit.MONTH, (Unit.MONTH, 8), (Unit.MONTH, 3), "September 1 until December 1.")
Winter = _named("Winter", Unit.YEAR, Unit.MONTH, (Unit.MONTH, 11), (Unit.MONTH, 3),
                "December 1 until March 1 of the next year.")
Morning = _named("Morning", Unit.DAY, Unit.HOUR, (Unit.HOUR, 6), (Unit.HOUR, 6), "06:00 until 12:00.")
Noon = _named("Noon", Unit.DAY, Unit.MINUTE, (Unit.HOUR, 12), (Unit.MINUTE, 1), "12:00 until 12:01.")
Afternoon = _named("Afternoon", Unit.DAY, Unit.HOUR, (Unit.HOUR, 12), (Unit.HOUR, 6), "12:00 until 18:00.")
Evening = _named("Evening", Unit.DAY, Unit.HOUR, (Unit.HOUR, 18), (Unit.HOUR, 3), "18:00 until 21:00.")
Night = _named("Night", Unit.DAY, Unit.HOUR, (Unit.HOUR, 21), (Unit.HOUR, 3), "21:00 until midnight.")

NAMED_REPEATINGS = {cls.__name__: cls for cls in (Spring, Summer, Fall, Winter,
                                                   Morning, Noon, Afternoon, Evening, Night)}


def _repeating_shifts(shifts, owner: str, allowed: tuple[type, ...]) -> tuple:
    if not isinstance(shifts, (list, tuple)):
        raise InvalidArgumentError(f"{owner} needs a list of shifts, got {shifts!r}")
    shifts = tuple(shifts)
    for s in shifts:
        if not isinstance(s, allowed):
            raise InvalidArgumentError(f"{owner} cannot combine {s!r}")
    return shifts


@dataclasses.dataclass(frozen=True)
class ShiftUnion(RepeatingShift):
    """
    All instances of any of several repeating intervals.  "Mondays and Fridays"::

        ShiftUnion([Repeating(DAY, WEEK, value=0), Repeating(DAY, WEEK, value=4)])
    """
    shifts: tuple[RepeatingShift, ...]

    def __post_init__(self):
        shifts = _repeating_shifts(self.shifts, "ShiftUnion", (RepeatingShift,))
        if len(shifts) < 2:
            raise InvalidArgumentError("ShiftUnion needs at least two shifts")
        object.__setattr__(self, "shifts", shifts)

    @property
    def duration_unit(self) -> Unit:
        return min(s.duration_unit for s in self.shifts)

    @property
    def range_unit(self) -> Unit:
        return max(s.range_unit for s in self.shifts)

    def following(self, anchor: Timestamp) -> Iterator[Interval]:
        merged = heapq.merge(*(s.following(anchor) for s in self.shifts), key=lambda i: (i.start, i.end))
        return _dedup(merged)

    def preceding(self, anchor: Timestamp) -> Iterator[Interval]:
        merged = heapq.merge(*(s.preceding(anchor) for s in self.shifts),
                             key=lambda i: (i.end, i.start), reverse=True)
        return _dedup(merged)

    def instance_containing(self, interval: Interval) -> Interval | None:
        for s in self.shifts:
            instance = s.instance_containing(interval)
            if instance is not None:
                return instance
        return None


def _dedup(stream: Iterator[Interval]) -> Iterator[Interval]:
    previous = None
    for interval in stream:
        if interval != previous:
            yield interval
        previous = interval


@dataclasses.dataclass(frozen=True)
class RepeatingIntersection(RepeatingShift):
    """
    Instances of the finest repeating interval that fall inside all the others.
    "Saturdays in March"::

        RepeatingIntersection([Repeating(DAY, WEEK, value=5), Repeating(MONTH, YEAR, value=3)])
    """
    shifts: tuple[CalendarRepeating, ...]

    def __post_init__(self):
        shifts = _repeating_shifts(self.shifts, "RepeatingIntersection", (CalendarRepeating, RepeatingIntersection))
        flat = []
        for s in shifts:
            flat.extend(s.shifts if isinstance(s, RepeatingIntersection) else [s])
        if len(flat) < 2:
            raise InvalidArgumentError("RepeatingIntersection needs at least two repeating intervals")
        object.__setattr__(self, "shifts", shifts)
        object.__setattr__(self, "_flat", tuple(flat))

    @property
    def base(self) -> CalendarRepeating:
        """The finest component; ties prefer plain Repeating over named ones."""
        return min(self._flat, key=lambda s: (s.duration_unit.rank, isinstance(s, NamedRepeating)))

    @property
    def duration_unit(self) -> Unit:
        return self.base.duration_unit

    @property
    def range_unit(self) -> Unit:
        return max(s.range_unit for s in self._flat)

    def _scan(self, anchor: Timestamp, forward: bool) -> Iterator[Interval]:
        # Walk the base stream; when a candidate falls outside some other
        # component, restart the base stream at that component's next
        # instance instead of testing every base instance in between.
        base = self.base
        others = [s for s in self._flat if s is not base]
        misses = 0
        cursor = anchor
        while True:
            stream = base.following(cursor) if forward else base.preceding(cursor)
            for instance in stream:
                missing = next((s for s in others if s.instance_containing(instance) is None), None)
                if missing is None:
                    misses = 0
                    yield instance
                    continue
                misses += 1
                if misses > DEFAULT_INSTANCE_BUDGET:
                    raise OutOfRangeError(f"no instance of {self!r} within {DEFAULT_INSTANCE_BUDGET} candidates")
                if forward:
                    target = next(missing.following(instance.start)).start
                    if target > instance.start:
                        cursor = target
                        break
                else:
                    target = next(missing.preceding(instance.end)).end
                    if target < instance.end:
                        cursor = target
                        break

    def following(self, anchor: Timestamp) -> Iterator[Interval]:
        return self._scan(anchor, forward=True)

    def preceding(self, anchor: Timestamp) -> Iterator[Interval]:
        return self._scan(anchor, forward=False)

    def instance_containing(self, interval: Interval) -> Interval | None:
        instance = self.base.instance_containing(interval)
        if instance is None:
            return None
        others = [s for s in self._flat if s is not self.base]
        if all(s.instance_containing(instance) is not None for s in others):
            return instance
        return None


def following(shift: Shift, anchor: Timestamp) -> Iterator[Interval]:
    return shift.following(anchor)


def preceding(shift: Shift, anchor: Timestamp) -> Iterator[Interval]:
    return shift.preceding(anchor)


__all__ = [
    "DEFAULT_INSTANCE_BUDGET", "InstanceBudget", "instance_budget", "take",
    "Shift", "PeriodShift", "Period", "PeriodSum", "apply_period",
    "RepeatingShift", "CalendarRepeating", "Repeating", "REPEATING_VALUES", "NamedRepeating",
    "Spring", "Summer", "Fall", "Winter", "Morning", "Noon", "Afternoon", "Evening", "Night",
    "NAMED_REPEATINGS", "ShiftUnion", "RepeatingIntersection", "following", "preceding",
]
