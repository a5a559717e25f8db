"""
Writing and running expressions
===============================

Expressions are text; parsing gives a tree, executing gives intervals.
"""

from scate import evaluate, execute, format, parse, to_code
from scate import ScateError

# An anchor plus a shift: the next six Fridays after 22 December 1714
code = "NextN(Interval.of(1714, 12, 22), Repeating(DAY, WEEK, value=4), n=6)"
for friday in execute(code):
    print(friday)

# The canonical form orders keyword arguments and normalizes spacing
tree = parse("Last(shift=Period(unit=YEAR, n=None),   interval=Interval.of(1998, 2, 13))")
print(format(tree))
print(evaluate(tree))

# Values print back as code that reproduces them
print(to_code(execute("This(Interval.of(1037, 11, 10), Repeating(MONTH, YEAR, value=1))")))

# Failures are categorized so that callers can count them
for bad in ["Interval.of(2024, 2, 30)", "Year(", "Tomorrow()"]:
    try:
        execute(bad)
    except ScateError as err:
        print(f"{bad!r}: {err.category}")
