"""Hand-built gold/prediction record sets with known verdicts."""
import random

from scate.annotations import AnnotationItem, AnnotationRecord
from scate.dsl import execute

RECENT_YEARS = "Last(interval=Interval.of(1998, 2, 13), shift=Period(unit=YEAR, n=None))"


def _record(i, *items):
    return AnnotationRecord(f"s{i:02d}", f"sentence {i}", tuple(AnnotationItem(t, c) for t, c in items))


def metrics_fixture():
    """
    Ten sentences; 4 gold expressions, 5 predictions, 3 of them correct.

    s01-s03 are correct (s02 writes the same year differently), s04 has the
    right span but the wrong granularity, s05 predicts an expression that is
    not in the gold, and s06-s10 have nothing on either side.
    """
    gold = [
        _record(1, ("recent years", RECENT_YEARS)),
        _record(2, ("1990", "Year(1990)")),
        _record(3, ("this January", "This(Interval.of(1037, 11, 10), Repeating(MONTH, YEAR, value=1))")),
        _record(4, ("11/02/89", "Interval.of(1989, 11, 2)")),
    ] + [_record(i) for i in range(5, 11)]
    pred = [
        _record(1, ("recent years", RECENT_YEARS)),
        _record(2, ("1990", "Interval.of(1990)")),
        _record(3, ("this  January", "This(Interval.of(1037, 2, 1), Repeating(MONTH, YEAR, value=1))")),
        _record(4, ("11/02/89", "Year(1989)")),
        _record(5, ("yesterday", "Last(Interval.of(2000, 1, 2), Repeating(DAY))")),
    ] + [_record(i) for i in range(6, 11)]
    return gold, pred


_TEMPLATES = [
    ("this year", "This(Interval.of({y}, {m}, {d}), Repeating(YEAR))"),
    ("next Friday", "Next(Interval.of({y}, {m}, {d}), Repeating(DAY, WEEK, value=4))"),
    ("last summer", "Last(Interval.of({y}, {m}, {d}), Summer())"),
    ("three Aprils later", "After(Interval.of({y}, {m}, {d}), Repeating(MONTH, YEAR, value=4), n=3)"),
    ("since {y}", "Between(Year({y}), Interval.of({y2}, 1, 9))"),
    ("the Tuesdays of that month", "These(Interval.of({y}, {m}), Repeating(DAY, WEEK, value=1))"),
    ("two weeks before", "Before(Interval.of({y}, {m}, {d}), Period(WEEK, 2))"),
    ("recent years", "Last(Interval.of({y}, {m}, {d}), Period(YEAR, None))"),
    ("every March", "Repeating(MONTH, YEAR, value=3)"),
    ("the next six Fridays", "NextN(Interval.of({y}, {m}, {d}), Repeating(DAY, WEEK, value=4), 6)"),
    ("that morning", "This(Interval.of({y}, {m}, {d}, 9), Morning())"),
    ("Saturdays in March", "These(Year({y}), RepeatingIntersection([Repeating(DAY, WEEK, value=5), "
                           "Repeating(MONTH, YEAR, value=3)]))"),
]


def synthetic_gold(n_records=50, seed=0):
    """`n_records` gold records whose expressions all execute."""
    rng = random.Random(seed)
    records = []
    for i in range(n_records):
        items = []
        for j in range(rng.randint(1, 3)):
            text, code = rng.choice(_TEMPLATES)
            y = rng.randint(1900, 2100)
            values = dict(y=y, y2=y + rng.randint(1, 30), m=rng.randint(1, 12), d=rng.randint(1, 28))
            items.append(AnnotationItem(f"{text.format(**values)} #{j}", code.format(**values)))
        records.append(AnnotationRecord(f"syn-{i:04d}", f"synthetic sentence {i}", tuple(items)))
    for r in records:
        for item in r.items:
            execute(item.scate)
    return records
