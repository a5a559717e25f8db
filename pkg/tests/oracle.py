"""Brute-force reference enumeration of repeating intervals.

Walks the timeline one calendar unit at a time and tests a membership
predicate on every unit.  It deliberately shares no code with the stream
implementation in ``scate.shifts``: alignment and stepping are written out
here again with plain ``datetime`` arithmetic.
"""
import datetime

from scate import shifts
from scate.core import Interval, Unit

_DELTA = {
    Unit.SECOND: datetime.timedelta(seconds=1),
    Unit.MINUTE: datetime.timedelta(minutes=1),
    Unit.HOUR: datetime.timedelta(hours=1),
    Unit.DAY: datetime.timedelta(days=1),
    Unit.WEEK: datetime.timedelta(days=7),
}


def align(t, unit):
    if unit is Unit.SECOND:
        return t
    if unit is Unit.MINUTE:
        return datetime.datetime(t.year, t.month, t.day, t.hour, t.minute)
    if unit is Unit.HOUR:
        return datetime.datetime(t.year, t.month, t.day, t.hour)
    if unit is Unit.DAY:
        return datetime.datetime(t.year, t.month, t.day)
    if unit is Unit.WEEK:
        d = datetime.datetime(t.year, t.month, t.day)
        return d - datetime.timedelta(days=d.weekday())
    if unit is Unit.MONTH:
        return datetime.datetime(t.year, t.month, 1)
    if unit is Unit.YEAR:
        return datetime.datetime(t.year, 1, 1)
    raise ValueError(unit)


def step(t, unit, sign=1):
    if unit in _DELTA:
        return t + sign * _DELTA[unit]
    if unit is Unit.MONTH:
        m = t.year * 12 + t.month - 1 + sign
        return datetime.datetime(m // 12, m % 12 + 1, 1)
    if unit is Unit.YEAR:
        return datetime.datetime(t.year + sign, 1, 1)
    raise ValueError(unit)


# (unit, range) -> predicate over a unit-aligned timestamp
_VALUED = {
    (Unit.DAY, Unit.WEEK): lambda t, v: t.weekday() == v,
    (Unit.MONTH, Unit.YEAR): lambda t, v: t.month == v,
    (Unit.DAY, Unit.MONTH): lambda t, v: t.day == v,
    (Unit.HOUR, Unit.DAY): lambda t, v: t.hour == v,
    (Unit.MINUTE, Unit.HOUR): lambda t, v: t.minute == v,
    (Unit.SECOND, Unit.MINUTE): lambda t, v: t.second == v,
}

_NAMED = {
    "Spring": (Unit.MONTH, lambda t: t.month in (3, 4, 5)),
    "Summer": (Unit.MONTH, lambda t: t.month in (6, 7, 8)),
    "Fall": (Unit.MONTH, lambda t: t.month in (9, 10, 11)),
    "Winter": (Unit.MONTH, lambda t: t.month in (12, 1, 2)),
    "Morning": (Unit.HOUR, lambda t: 6 <= t.hour < 12),
    "Noon": (Unit.MINUTE, lambda t: t.hour == 12 and t.minute == 0),
    "Afternoon": (Unit.HOUR, lambda t: 12 <= t.hour < 18),
    "Evening": (Unit.HOUR, lambda t: 18 <= t.hour < 21),
    "Night": (Unit.HOUR, lambda t: 21 <= t.hour),
}


def describe(shift):
    """(granularity, predicate, merge_runs) for a Repeating, named repeating or intersection."""
    if isinstance(shift, shifts.Repeating):
        if shift.value is None:
            return shift.unit, lambda t: True, False
        test = _VALUED[shift.unit, shift.range]
        return shift.unit, lambda t: test(t, shift.value), False
    if isinstance(shift, shifts.NamedRepeating):
        gran, test = _NAMED[type(shift).__name__]
        return gran, test, True
    if isinstance(shift, shifts.RepeatingIntersection):
        parts = [describe(s) for s in shift._flat]
        gran = min(p[0] for p in parts)
        finest = [p for p in parts if p[0] == gran]
        tests = tuple(p[1] for p in parts)

        def member(t):
            for f in tests:
                if not f(t):
                    return False
            return True
        return gran, member, all(p[2] for p in finest)
    raise TypeError(shift)


def instances_in(shift, lo, hi):
    """All instances lying strictly inside the window [lo, hi)."""
    if isinstance(shift, shifts.ShiftUnion):
        found = set()
        for s in shift.shifts:
            found.update(instances_in(s, lo, hi))
        return sorted(found, key=lambda i: (i.start, i.end))
    gran, member, runs = describe(shift)
    if gran in _DELTA:
        delta = _DELTA[gran]
        forward = lambda t: t + delta  # noqa: E731
    else:
        forward = lambda t: step(t, gran)  # noqa: E731
    t = align(lo, gran)
    out = []
    run_start = None
    while t < hi:
        nxt = forward(t)
        if member(t):
            if not runs:
                out.append((t, nxt))
            elif run_start is None:
                run_start = t
        elif run_start is not None:
            out.append((run_start, t))
            run_start = None
        t = nxt
    # a run still open at the right edge (or touching the left edge) may be truncated
    first = align(lo, gran)
    if runs:
        out = [(s, e) for s, e in out if s != first]
    return [Interval(s, e) for s, e in out if s >= lo and e <= hi]


# nominal length of one range instance; also an upper bound on instance length
_SCALE = {
    Unit.SECOND: datetime.timedelta(seconds=1),
    Unit.MINUTE: datetime.timedelta(minutes=1),
    Unit.HOUR: datetime.timedelta(hours=1),
    Unit.DAY: datetime.timedelta(days=1),
    Unit.WEEK: datetime.timedelta(days=7),
    Unit.MONTH: datetime.timedelta(days=31),
    Unit.YEAR: datetime.timedelta(days=366),
}


def _window(shift):
    if isinstance(shift, shifts.RepeatingIntersection):
        return max(_window(s) for s in shift._flat)
    return _SCALE[shift.range_unit]


def _union(results, key, k, latest_first=False):
    merged = sorted({i for r in results for i in r}, key=key, reverse=latest_first)
    return merged[:k]


def oracle_following(shift, anchor, k):
    """The first `k` instances starting at or after `anchor`."""
    if isinstance(shift, shifts.ShiftUnion):
        return _union([oracle_following(s, anchor, k) for s in shift.shifts],
                      lambda i: (i.start, i.end), k)
    scale = _window(shift)
    width = scale * (k + 2)
    while True:
        lo, hi = anchor - scale * 2, anchor + width
        # an instance starting near the right edge may have been cut off, so
        # only trust those that start at least one instance length before it
        found = [i for i in instances_in(shift, lo, hi) if i.start >= anchor and i.start < hi - scale]
        if len(found) >= k:
            return found[:k]
        width *= 2


def oracle_preceding(shift, anchor, k):
    """The first `k` instances ending at or before `anchor`, latest first."""
    if isinstance(shift, shifts.ShiftUnion):
        return _union([oracle_preceding(s, anchor, k) for s in shift.shifts],
                      lambda i: (i.end, i.start), k, latest_first=True)
    scale = _window(shift)
    width = scale * (k + 2)
    while True:
        lo, hi = anchor - width, anchor + scale * 2
        found = [i for i in instances_in(shift, lo, hi) if i.end <= anchor and i.end > lo + scale]
        if len(found) >= k:
            return sorted(found, key=lambda i: (i.end, i.start), reverse=True)[:k]
        width *= 2


def day_intervals(*dates):
    """Day-long intervals for (year, month, day) triples."""
    out = []
    for y, m, d in dates:
        start = datetime.datetime(y, m, d)
        out.append(Interval(start, start + datetime.timedelta(days=1)))
    return out
