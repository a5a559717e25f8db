"""
Intervals, periods and repeating intervals
==========================================

A tour of the time algebra underneath the expression language.
"""

import datetime

from scate import (DAY, MONTH, WEEK, YEAR, Interval, Period, Repeating, RepeatingIntersection,
                   ShiftUnion, Summer, advance, following, interval_of, preceding, take, truncate)

# Intervals are half-open; ``interval_of`` builds the calendar unit named by its fields
print(interval_of(2025, 1))
print(interval_of(1979, 1, 24, 6))

# Calendar arithmetic clamps to the end of shorter months
t = datetime.datetime(2024, 1, 31, 13, 5)
print(truncate(t, WEEK), advance(t, MONTH, 1))

# A repeating interval yields instances on either side of an anchor
anchor = datetime.datetime(1912, 2, 14)
show = lambda label, xs: print(label, ", ".join(str(x) for x in xs))
show("summers before:", take(preceding(Summer(), anchor), 2))
show("Aprils after:", take(following(Repeating(MONTH, YEAR, value=4), anchor), 3))

# Unions merge their members in time order, intersections keep what all members share
weekend = ShiftUnion([Repeating(DAY, WEEK, value=5), Repeating(DAY, WEEK, value=6)])
show("next weekend days:", take(following(weekend, anchor), 4))
march_saturdays = RepeatingIntersection([Repeating(DAY, WEEK, value=5), Repeating(MONTH, YEAR, value=3)])
show("Saturdays in March:", take(following(march_saturdays, anchor), 5))

# Periods are plain durations
print(Period(WEEK, 2))
