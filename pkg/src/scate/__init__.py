"""Executable temporal semantics: intervals, periods, repeating intervals and operators."""

from .core import (CENTURY, DAY, HOUR, MINUTE, MONTH, SECOND, WEEK, YEAR, Interval, Unit, advance,
                   interval_from_iso, interval_of, interval_overlap, truncate)
from .dsl import evaluate, execute, format, parse, serialize_value, to_code, values_equal
from .errors import ScateError
from .operators import (after_eval, before_eval, between_eval, intersection_eval, last_eval, last_n_eval,
                        next_eval, next_n_eval, nth_eval, these_eval, this_eval)
from .shifts import (Afternoon, Evening, Fall, Morning, Night, Noon, Period, PeriodSum, Repeating,
                     RepeatingIntersection, ShiftUnion, Spring, Summer, Winter, apply_period, following,
                     preceding, take)

__version__ = "0.1.0"
