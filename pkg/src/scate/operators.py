"""Temporal operators.

Each operator maps anchor intervals and shifts to an :class:`Interval` or to
a list of intervals.  They are plain functions over immutable values; the
expression evaluator in :mod:`scate.dsl` calls them.
"""
from __future__ import annotations

import datetime
from collections.abc import Iterable, Iterator

from .core import Interval, advance, interval_overlap, truncate
from .errors import (AmbiguityError, EmptyIntersectionError, InvalidArgumentError, OrderingError,
                     OutOfRangeError, PreconditionError)
from .shifts import PeriodShift, RepeatingShift, Shift, take


def _check_interval(value, name: str = "interval") -> Interval:
    if not isinstance(value, Interval):
        raise InvalidArgumentError(f"{name} must be an Interval, got {value!r}")
    return value


def _check_shift(value, name: str = "shift") -> Shift:
    if not isinstance(value, Shift):
        raise InvalidArgumentError(f"{name} must be a Period or repeating interval, got {value!r}")
    return value


def _check_count(n, name: str) -> int:
    if isinstance(n, bool) or not isinstance(n, int):
        raise InvalidArgumentError(f"{name} must be an integer, got {n!r}")
    if n < 1:
        raise PreconditionError(f"{name} must be at least 1, got {n}")
    return n


def _require(ts: datetime.datetime | None, what: str) -> datetime.datetime:
    if ts is None:
        raise PreconditionError(f"the anchor interval has no {what}")
    return ts


def _require_bounded(anchor: Interval) -> Interval:
    if not anchor.is_bounded:
        raise PreconditionError(f"the anchor interval {anchor} must have both endpoints")
    return anchor


def _nth(stream: Iterator[Interval], n: int) -> Interval:
    found = take(stream, n)
    if len(found) < n:
        raise OutOfRangeError(f"fewer than {n} instances available")
    return found[-1]


def last_eval(anchor: Interval, shift: Shift | None = None) -> Interval:
    """The closest instance of `shift` that ends at or before the anchor starts."""
    start = _require(_check_interval(anchor).start, "start")
    if shift is None:
        return Interval(None, start)
    _check_shift(shift)
    if isinstance(shift, PeriodShift):
        if not shift.is_anchorable:
            return Interval(None, start)
        return Interval(shift.shift(start, -1), start)
    return _nth(shift.preceding(start), 1)


def next_eval(anchor: Interval, shift: Shift | None = None) -> Interval:
    """The closest instance of `shift` that starts at or after the anchor ends."""
    end = _require(_check_interval(anchor).end, "end")
    if shift is None:
        return Interval(end, None)
    _check_shift(shift)
    if isinstance(shift, PeriodShift):
        if not shift.is_anchorable:
            return Interval(end, None)
        return Interval(end, shift.shift(end, 1))
    return _nth(shift.following(end), 1)


def _translate(anchor: Interval, period: PeriodShift, k: int) -> Interval:
    period._require_count()
    _require_bounded(anchor)
    start, end = anchor.start, anchor.end
    step = 1 if k > 0 else -1
    for _ in range(abs(k)):
        start, end = period.shift(start, step), period.shift(end, step)
    return Interval(start, end)


def before_eval(anchor: Interval, shift: Shift, n: int = 1) -> Interval:
    """
    Move the anchor earlier.  A period translates both endpoints back `n`
    times; a repeating interval picks its `n`-th instance before the anchor.
    """
    _check_interval(anchor)
    _check_shift(shift)
    _check_count(n, "n")
    if isinstance(shift, PeriodShift):
        return _translate(anchor, shift, -n)
    return _nth(shift.preceding(_require(anchor.start, "start")), n)


def after_eval(anchor: Interval, shift: Shift, n: int = 1) -> Interval:
    """Mirror of :func:`before_eval`, moving later."""
    _check_interval(anchor)
    _check_shift(shift)
    _check_count(n, "n")
    if isinstance(shift, PeriodShift):
        return _translate(anchor, shift, n)
    return _nth(shift.following(_require(anchor.end, "end")), n)


def nth_eval(anchor: Interval, shift: Shift, index: int, from_end: bool = False) -> Interval:
    """The `index`-th (1-based) instance of `shift` inside the anchor."""
    _require_bounded(_check_interval(anchor))
    _check_shift(shift)
    _check_count(index, "index")
    if not isinstance(from_end, bool):
        raise InvalidArgumentError(f"from_end must be True or False, got {from_end!r}")
    if isinstance(shift, PeriodShift):
        stream = shift.preceding(anchor.end) if from_end else shift.following(anchor.start)
        chunk = _nth(stream, index)
        if not anchor.contains(chunk):
            raise OutOfRangeError(f"{anchor} holds fewer than {index} chunks of {shift!r}")
        return chunk
    seen = 0
    if from_end:
        for instance in shift.preceding(anchor.end):
            if instance.end <= anchor.start:
                break
            if instance.start >= anchor.start:
                seen += 1
                if seen == index:
                    return instance
    else:
        for instance in shift.following(anchor.start):
            if instance.start >= anchor.end:
                break
            if instance.end <= anchor.end:
                seen += 1
                if seen == index:
                    return instance
    raise OutOfRangeError(f"{anchor} contains only {seen} instances of {shift!r}, not {index}")


def this_eval(anchor: Interval, shift: Shift) -> Interval:
    """
    The instance of `shift` for the current range.  A repeating interval is
    looked up inside the range-unit instance (year for "this January")
    containing the anchor's start; a period is centered on the anchor.
    """
    _require_bounded(_check_interval(anchor))
    _check_shift(shift)
    if isinstance(shift, PeriodShift):
        shift._require_count()
        mid = anchor.start + (anchor.end - anchor.start) // 2
        width = shift.shift(mid, 1) - mid
        start = mid - width // 2
        start -= datetime.timedelta(microseconds=start.microsecond)
        return Interval(start, shift.shift(start, 1))
    range_unit = shift.range_unit
    range_start = truncate(anchor.start, range_unit)
    container = Interval(range_start, truncate(advance(range_start, range_unit, 1), range_unit))
    found = these_eval(container, shift)
    if len(found) != 1:
        raise AmbiguityError(f"{len(found)} instances of {shift!r} in {container}, expected exactly one")
    return found[0]


def between_eval(start_interval: Interval, end_interval: Interval,
                 start_included: bool = False, end_included: bool = False) -> Interval:
    """The span from one interval to another, excluding both unless asked otherwise."""
    _check_interval(start_interval, "start_interval")
    _check_interval(end_interval, "end_interval")
    for flag in (start_included, end_included):
        if not isinstance(flag, bool):
            raise InvalidArgumentError(f"inclusion flags must be True or False, got {flag!r}")
    start = start_interval.start if start_included else start_interval.end
    end = end_interval.end if end_included else end_interval.start
    if start is None or end is None:
        raise PreconditionError("Between needs bounded start and end boundaries")
    if start >= end:
        raise OrderingError(f"Between start {start.isoformat()} is not before end {end.isoformat()}")
    return Interval(start, end)


def intersection_eval(intervals: Iterable[Interval]) -> Interval:
    """The overlap of all the intervals."""
    if not isinstance(intervals, (list, tuple)):
        raise InvalidArgumentError(f"Intersection needs a list of intervals, got {intervals!r}")
    if not intervals:
        raise PreconditionError("Intersection needs at least one interval")
    result = _check_interval(intervals[0])
    for other in intervals[1:]:
        result = interval_overlap(result, _check_interval(other))
        if result is None:
            raise EmptyIntersectionError(f"the intervals {[str(i) for i in intervals]} do not overlap")
    return result


def _repeating(shift, operator: str) -> RepeatingShift:
    _check_shift(shift)
    if not isinstance(shift, RepeatingShift):
        raise PreconditionError(f"{operator} needs a repeating interval, got {shift!r}")
    return shift


def these_eval(anchor: Interval, shift: Shift) -> list[Interval]:
    """Every instance of `shift` that starts inside the anchor."""
    _require_bounded(_check_interval(anchor))
    result = []
    for instance in _repeating(shift, "These").following(anchor.start):
        if instance.start >= anchor.end:
            break
        result.append(instance)
    return result


def last_n_eval(anchor: Interval, shift: Shift, n: int) -> list[Interval]:
    """The `n` closest instances before the anchor, in timeline order."""
    start = _require(_check_interval(anchor).start, "start")
    _check_shift(shift)
    _check_count(n, "n")
    found = take(shift.preceding(start), n)
    if len(found) < n:
        raise OutOfRangeError(f"fewer than {n} instances of {shift!r} before {anchor}")
    return found[::-1]


def next_n_eval(anchor: Interval, shift: Shift, n: int) -> list[Interval]:
    """The `n` closest instances after the anchor, in timeline order."""
    end = _require(_check_interval(anchor).end, "end")
    _check_shift(shift)
    _check_count(n, "n")
    found = take(shift.following(end), n)
    if len(found) < n:
        raise OutOfRangeError(f"fewer than {n} instances of {shift!r} after {anchor}")
    return found
