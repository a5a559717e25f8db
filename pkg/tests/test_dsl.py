import datetime

import pytest
from hypothesis import given, settings, strategies as st

from scate import dsl
from scate.core import Interval, Unit, interval_of
from scate.dsl import (BoolLit, Call, EnumRef, IntLit, ListLit, NoneLit, StrLit, evaluate, execute, format, parse,
                       serialize_value, to_code, tokenize, values_equal)
from scate.errors import ExprSyntaxError, LexicalError, ScateError
from scate.shifts import Period, PeriodSum, Repeating, RepeatingIntersection, ShiftUnion, Summer, Winter

dt = datetime.datetime


def test_parse_keyword_call():
    assert parse("Period(unit=YEAR, n=None)") == Call("Period", (), {"unit": EnumRef("YEAR"), "n": NoneLit()})


def test_parse_empty_list():
    assert parse("[ ]") == ListLit(())


def test_parse_nested_call():
    node = parse("Nth(Year(2024), Repeating(DAY, WEEK, value=6), index=3, from_end=True)")
    assert node == Call("Nth", (Call("Year", (IntLit(2024),)),
                                Call("Repeating", (EnumRef("DAY"), EnumRef("WEEK")), {"value": IntLit(6)})),
                        {"index": IntLit(3), "from_end": BoolLit(True)})


def test_parse_literals_and_dotted_names():
    assert parse("Interval.fromisoformat('a \\'b\\' \"c\" \\\\')") == \
        Call("Interval.fromisoformat", (StrLit("a 'b' \"c\" \\"),))
    assert parse("F(-12, 0, False,)") == Call("F", (IntLit(-12), IntLit(0), BoolLit(False)))
    assert parse("  [1,\n 2 ,]  ") == ListLit((IntLit(1), IntLit(2)))


@pytest.mark.parametrize("text, offset", [
    ("Year(2024) $", 11),
    ('Year("2024)', 5),
    ("Year('a\\n')", 7),
    ('Year("é") ?', 11),
    ("Ünïcode(1)", 0),
])
def test_lexical_errors(text, offset):
    with pytest.raises(LexicalError) as err:
        parse(text)
    assert err.value.offset == offset
    assert err.value.category == "lexical"


@pytest.mark.parametrize("text, offset", [
    ("Year(2024", 9),
    ("Year(2024))", 10),
    ("Last(shift=Summer(), Year(2024))", 21),
    ("F(a=1, a=2)", 7),
    ("Interval.of", 11),
    ("F(1 2)", 4),
    ("", 0),
    ("[1,,]", 3),
    ('F("é"))', 7),
])
def test_syntax_errors(text, offset):
    with pytest.raises(ExprSyntaxError) as err:
        parse(text)
    assert err.value.offset == offset
    assert err.value.category == "syntax"
    assert not isinstance(err.value, LexicalError)


def test_tokens_carry_positions():
    kinds = [(t.kind, t.pos) for t in tokenize("F(x=1)")]
    assert kinds == [("IDENT", 0), ("LPAREN", 1), ("IDENT", 2), ("EQUALS", 3), ("INT", 4), ("RPAREN", 5), ("EOF", 6)]


def test_deep_nesting_is_a_syntax_error():
    with pytest.raises(ExprSyntaxError):
        parse("[" * 5000 + "]" * 5000)


def test_format_examples():
    assert format(parse("Period( unit=YEAR,n=3 )")) == "Period(unit=YEAR, n=3)"
    text = "ShiftUnion([Repeating(DAY, WEEK, value=0), Repeating(DAY, WEEK, value=4)])"
    assert format(parse(text)) == text
    # keyword arguments come out in declaration order
    assert format(parse("Nth(from_end=True, index=3, shift=Summer(), interval=Year(2000))")) == \
        "Nth(interval=Year(2000), shift=Summer(), index=3, from_end=True)"


@pytest.mark.parametrize("text, expected", [
    ("Interval.of(1990)", interval_of(1990)),
    ("Last(Interval.of(1912, 2, 14), Summer())", Interval(dt(1911, 6, 1), dt(1911, 9, 1))),
    ("Last(interval=Interval.of(1998, 2, 13), shift=Period(unit=YEAR, n=None))", Interval(None, dt(1998, 2, 13))),
    ("Interval.fromisoformat('1990-01-01T00:00:00 1994-01-01T00:00:00')", Interval(dt(1990, 1, 1), dt(1994, 1, 1))),
    ("Period(YEAR, 3)", Period(Unit.YEAR, 3)),
    ("PeriodSum([Period(YEAR, 2), Period(DAY, 1)])", PeriodSum([Period(Unit.YEAR, 2), Period(Unit.DAY, 1)])),
    ("Winter()", Winter()),
    ("These(Interval.of(2025, 1), Repeating(DAY, WEEK, value=1))",
     [interval_of(2025, 1, d) for d in (7, 14, 21, 28)]),
    ("Between(Year(1994), Interval.of(2007, 1, 9), start_included=True)", Interval(dt(1994, 1, 1), dt(2007, 1, 9))),
])
def test_evaluate(text, expected):
    assert execute(text) == expected


@pytest.mark.parametrize("text, category", [
    ("Nope()", "unknown-constructor"),
    ("Year()", "arity-mismatch"),
    ("Year(1, 2)", "arity-mismatch"),
    ("Year(digits=1, digitz=2)", "arity-mismatch"),
    ("Year(1999, digits=1999)", "arity-mismatch"),
    ("Interval.of(2024, 2, 30)", "invalid-argument-value"),
    ("Period(FORTNIGHT, 1)", "invalid-argument-value"),
    ("Period(YEAR, 0)", "invalid-argument-value"),
    ("Year('1990')", "invalid-argument-value"),
    ("Repeating(WEEK, MONTH, value=1)", "invalid-argument-value"),
    ("[Year(1990)]", "invalid-argument-value"),
    ("3", "invalid-argument-value"),
    ("Between(Year(2000), Year(1990))", "invalid-argument-value"),
    ("Next(Interval.fromisoformat('2000-01-01T00:00:00 ...'), Summer())", "operator-precondition"),
    ("These(Year(2000), Period(DAY, 1))", "operator-precondition"),
    ("This(Interval.of(2024, 4, 3), Repeating(DAY, MONTH, value=31))", "operator-precondition"),
    ("Intersection([Year(2000), Year(2002)])", "empty-intersection"),
    ("Nth(Interval.of(2024, 1), Repeating(DAY, WEEK, value=0), index=6)", "out-of-range"),
    ("Next(Year(2000), RepeatingIntersection([Repeating(DAY, MONTH, value=31), Repeating(MONTH, YEAR, value=2)]))",
     "out-of-range"),
    ("After(Year(9999), Period(YEAR, 1))", "out-of-range"),
    ("Nth(Year(2000), Period(DAY), index=1)", "unanchorable"),
])
def test_error_categories(text, category):
    with pytest.raises(ScateError) as err:
        execute(text)
    assert err.value.category == category


def test_registry_covers_every_constructor_name():
    expected = {"Interval.of", "Interval.fromisoformat", "Year", "Period", "PeriodSum", "Repeating",
                "Spring", "Summer", "Fall", "Winter", "Morning", "Noon", "Afternoon", "Evening", "Night",
                "Last", "Next", "Before", "After", "Nth", "This", "Between", "Intersection", "These", "LastN",
                "NextN", "ShiftUnion", "RepeatingIntersection"}
    assert set(dsl.CONSTRUCTORS) == expected


def test_positional_and_keyword_forms_agree():
    assert execute("After(Interval.of(1993, 1, 23), Repeating(MONTH, YEAR, value=4), 3)") == \
        execute("After(interval=Interval.of(1993, 1, 23), shift=Repeating(unit=MONTH, range=YEAR, value=4), n=3)")


def test_budget_is_per_expression():
    assert execute("NextN(Year(2000), Repeating(DAY), 50)", budget=100)
    with pytest.raises(ScateError) as err:
        execute("NextN(Year(2000), Repeating(DAY), 50)", budget=20)
    assert err.value.category == "out-of-range"


def test_serialize_and_compare_values():
    assert serialize_value(execute("Last(Interval.of(1998, 2, 13), Period(YEAR, None))")) == \
        {"kind": "interval", "value": "... 1998-02-13T00:00:00"}
    assert serialize_value(Repeating(Unit.DAY, Unit.WEEK, value=4)) == \
        {"kind": "repeating", "value": "Repeating(DAY, WEEK, value=4)"}
    assert serialize_value(Period(Unit.YEAR, 3))["value"] == "Period(YEAR, 3)"
    assert serialize_value([interval_of(2000)]) == {"kind": "intervals", "value": ["2000-01-01T00:00:00 2001-01-01T00:00:00"]}
    assert values_equal(execute("Year(1989)"), execute("Interval.of(1989)"))
    assert not values_equal(execute("Year(1989)"), execute("Interval.of(1989, 11, 2)"))
    assert not values_equal(execute("Period(YEAR, 1)"), execute("Year(1989)"))
    assert values_equal(execute("Repeating(unit=DAY, range=WEEK, value=4)"), execute("Repeating(DAY, WEEK, value=4)"))


@pytest.mark.parametrize("value", [
    Period(Unit.YEAR), PeriodSum([Period(Unit.YEAR, 2), Period(Unit.DAY, 1)]), Repeating(Unit.MONTH),
    Repeating(Unit.DAY, Unit.MONTH, value=13), Summer(),
    ShiftUnion([Summer(), Repeating(Unit.DAY, Unit.WEEK, value=0)]),
    RepeatingIntersection([Repeating(Unit.DAY, Unit.WEEK, value=5), Repeating(Unit.MONTH, Unit.YEAR, value=3)]),
    Interval(None, dt(2000, 1, 1)),
])
def test_to_code_round_trips(value):
    assert execute(to_code(value)) == value


# generated syntax trees

_RESERVED = {"None", "True", "False"}
identifiers = st.from_regex(r"[A-Za-z_][A-Za-z0-9_]{0,8}", fullmatch=True).filter(lambda s: s not in _RESERVED)
dotted = st.lists(identifiers, min_size=1, max_size=3).map(".".join)
leaves = st.one_of(
    st.integers(-10**12, 10**12).map(IntLit),
    st.text(max_size=12).map(StrLit),
    st.booleans().map(BoolLit),
    st.just(NoneLit()),
    identifiers.map(EnumRef),
)


def _extend(children):
    calls = st.builds(
        lambda name, args, kwargs: Call(name, tuple(args), kwargs),
        dotted, st.lists(children, max_size=3), st.dictionaries(identifiers, children, max_size=3))
    return st.one_of(calls, st.lists(children, max_size=4).map(lambda xs: ListLit(tuple(xs))))


syntax_trees = st.recursive(leaves, _extend, max_leaves=20)


@settings(max_examples=300, deadline=None)
@given(syntax_trees)
def test_parse_format_round_trip(node):
    text = format(node)
    assert parse(text) == node
    assert format(parse(text)) == text
