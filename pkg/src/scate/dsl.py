"""Parser, formatter and evaluator for SCATE expressions.

Expressions are constructor calls written exactly as in annotations::

    >>> execute("Last(Interval.of(1912, 2, 14), Summer())")
    Interval(start=datetime.datetime(1911, 6, 1, 0, 0), end=datetime.datetime(1911, 9, 1, 0, 0))

Grammar::

    expr   := call | list | INT | STRING | "None" | "True" | "False" | IDENT
    call   := dotted "(" [arg ("," arg)* [","]] ")"
    dotted := IDENT ("." IDENT)*
    arg    := [IDENT "="] expr
    list   := "[" [expr ("," expr)* [","]] "]"

Bare identifiers name time units (``YEAR``); there are no variables,
statements or arithmetic.
"""
from __future__ import annotations

import dataclasses
import re
from collections.abc import Callable
from typing import Any

from . import operators as ops
from .core import Interval, Unit, interval_from_iso, interval_of
from .errors import (ArityError, ExprSyntaxError, InvalidArgumentError, LexicalError, OutOfRangeError,
                     UnknownConstructorError)
from .shifts import (DEFAULT_INSTANCE_BUDGET, NAMED_REPEATINGS, NamedRepeating, Period, PeriodShift, PeriodSum,
                     Repeating, RepeatingIntersection, RepeatingShift, ShiftUnion, instance_budget)

# ---------------------------------------------------------------------------
# syntax tree


class Node:
    """Base class of syntax tree nodes."""


@dataclasses.dataclass(frozen=True)
class Call(Node):
    name: str
    args: tuple = ()
    kwargs: dict = dataclasses.field(default_factory=dict)


@dataclasses.dataclass(frozen=True)
class ListLit(Node):
    elements: tuple = ()


@dataclasses.dataclass(frozen=True)
class IntLit(Node):
    value: int


@dataclasses.dataclass(frozen=True)
class StrLit(Node):
    value: str


@dataclasses.dataclass(frozen=True)
class BoolLit(Node):
    value: bool


@dataclasses.dataclass(frozen=True)
class NoneLit(Node):
    pass


@dataclasses.dataclass(frozen=True)
class EnumRef(Node):
    name: str


# ---------------------------------------------------------------------------
# lexer

@dataclasses.dataclass(frozen=True)
class Token:
    kind: str
    text: str
    value: Any
    pos: int


_IDENT = re.compile(r"[A-Za-z_][A-Za-z0-9_]*")
_INT = re.compile(r"-?[0-9]+")
_PUNCT = {"(": "LPAREN", ")": "RPAREN", "[": "LBRACK", "]": "RBRACK", ",": "COMMA", "=": "EQUALS", ".": "DOT"}
_ESCAPES = {'"': '"', "'": "'", "\\": "\\"}


def _byte_offset(text: str, pos: int) -> int:
    return len(text[:pos].encode("utf-8"))


def tokenize(text: str) -> list[Token]:
    tokens = []
    pos = 0
    while pos < len(text):
        c = text[pos]
        if c.isspace():
            pos += 1
        elif c in _PUNCT:
            tokens.append(Token(_PUNCT[c], c, None, pos))
            pos += 1
        elif c in "\"'":
            chars = []
            i = pos + 1
            while True:
                if i >= len(text):
                    raise LexicalError("unterminated string", _byte_offset(text, pos))
                ch = text[i]
                if ch == c:
                    break
                if ch == "\\":
                    if i + 1 >= len(text) or text[i + 1] not in _ESCAPES:
                        raise LexicalError("unsupported escape sequence", _byte_offset(text, i))
                    chars.append(_ESCAPES[text[i + 1]])
                    i += 2
                else:
                    chars.append(ch)
                    i += 1
            tokens.append(Token("STRING", text[pos:i + 1], "".join(chars), pos))
            pos = i + 1
        elif m := _INT.match(text, pos):
            tokens.append(Token("INT", m.group(), int(m.group()), pos))
            pos = m.end()
        elif m := _IDENT.match(text, pos):
            tokens.append(Token("IDENT", m.group(), m.group(), pos))
            pos = m.end()
        else:
            raise LexicalError(f"unexpected character {c!r}", _byte_offset(text, pos))
    tokens.append(Token("EOF", "", None, len(text)))
    return tokens


# ---------------------------------------------------------------------------
# parser

_LITERALS = {"None": NoneLit(), "True": BoolLit(True), "False": BoolLit(False)}


class _Parser:

    def __init__(self, text: str):
        self.text = text
        self.tokens = tokenize(text)
        self.i = 0

    @property
    def tok(self) -> Token:
        return self.tokens[self.i]

    def error(self, message: str, token: Token | None = None):
        token = token or self.tok
        found = "end of input" if token.kind == "EOF" else repr(token.text)
        return ExprSyntaxError(f"{message}, found {found}", _byte_offset(self.text, token.pos))

    def expect(self, kind: str, what: str) -> Token:
        if self.tok.kind != kind:
            raise self.error(f"expected {what}")
        token = self.tok
        self.i += 1
        return token

    def parse(self) -> Node:
        node = self.expr()
        if self.tok.kind != "EOF":
            raise self.error("expected end of input")
        return node

    def expr(self) -> Node:
        tok = self.tok
        if tok.kind == "INT":
            self.i += 1
            return IntLit(tok.value)
        if tok.kind == "STRING":
            self.i += 1
            return StrLit(tok.value)
        if tok.kind == "LBRACK":
            return self.list()
        if tok.kind == "IDENT":
            if tok.text in _LITERALS:
                self.i += 1
                return _LITERALS[tok.text]
            return self.call_or_enum()
        raise self.error("expected an expression")

    def list(self) -> ListLit:
        self.expect("LBRACK", "'['")
        elements = []
        while self.tok.kind != "RBRACK":
            elements.append(self.expr())
            if self.tok.kind == "COMMA":
                self.i += 1
            elif self.tok.kind != "RBRACK":
                raise self.error("expected ',' or ']'")
        self.i += 1
        return ListLit(tuple(elements))

    def call_or_enum(self) -> Node:
        first = self.expect("IDENT", "an identifier")
        parts = [first.text]
        while self.tok.kind == "DOT":
            self.i += 1
            parts.append(self.expect("IDENT", "an identifier after '.'").text)
        if self.tok.kind != "LPAREN":
            if len(parts) > 1:
                raise self.error("expected '(' after a dotted name")
            return EnumRef(first.text)
        self.i += 1
        args, kwargs = [], {}
        while self.tok.kind != "RPAREN":
            if self.tok.kind == "IDENT" and self.tokens[self.i + 1].kind == "EQUALS":
                key = self.tok
                self.i += 2
                if key.text in kwargs:
                    raise self.error(f"duplicate keyword argument {key.text!r}", key)
                kwargs[key.text] = self.expr()
            else:
                if kwargs:
                    raise self.error("positional argument after keyword argument")
                args.append(self.expr())
            if self.tok.kind == "COMMA":
                self.i += 1
            elif self.tok.kind != "RPAREN":
                raise self.error("expected ',' or ')'")
        self.i += 1
        return Call(".".join(parts), tuple(args), kwargs)


def parse(text: str) -> Node:
    """Parse expression text into a syntax tree.

    Raises :class:`LexicalError` or :class:`ExprSyntaxError`, both of which
    carry the byte offset of the problem.
    """
    if not isinstance(text, str):
        raise TypeError(f"expected str, got {type(text).__name__}")
    try:
        return _Parser(text).parse()
    except RecursionError:
        raise ExprSyntaxError("expression nested too deeply", 0) from None


# ---------------------------------------------------------------------------
# constructor registry

_REQUIRED = object()


@dataclasses.dataclass(frozen=True)
class Constructor:
    name: str
    params: tuple[tuple[str, Any], ...]
    build: Callable[..., Any]

    @property
    def param_names(self) -> list[str]:
        return [p for p, _ in self.params]

    def bind(self, args: list, kwargs: dict) -> list:
        """Match call arguments to parameters; returns values in declaration order."""
        if len(args) > len(self.params):
            raise ArityError(f"{self.name} takes at most {len(self.params)} positional arguments, got {len(args)}")
        bound = dict(zip(self.param_names, args))
        for key, value in kwargs.items():
            if key not in self.param_names:
                raise ArityError(f"{self.name} got an unexpected keyword argument {key!r}")
            if key in bound:
                raise ArityError(f"{self.name} got multiple values for argument {key!r}")
            bound[key] = value
        for key, default in self.params:
            if key not in bound:
                if default is _REQUIRED:
                    raise ArityError(f"{self.name} is missing required argument {key!r}")
                bound[key] = default
        return [bound[key] for key in self.param_names]


def _int_arg(value, name: str):
    if isinstance(value, bool) or not isinstance(value, int):
        raise InvalidArgumentError(f"{name} must be an integer, got {value!r}")
    return value


def _str_arg(value, name: str):
    if not isinstance(value, str):
        raise InvalidArgumentError(f"{name} must be a string, got {value!r}")
    return value


def _year(digits):
    return interval_of(_int_arg(digits, "digits"))


def _constructors() -> dict[str, Constructor]:
    R = _REQUIRED
    table = [
        Constructor("Interval.of", (("year", R), ("month", None), ("day", None),
                                    ("hour", None), ("minute", None), ("second", None)), interval_of),
        Constructor("Interval.fromisoformat", (("string", R),),
                    lambda string: interval_from_iso(_str_arg(string, "string"))),
        Constructor("Year", (("digits", R),), _year),
        Constructor("Period", (("unit", R), ("n", None)), Period),
        Constructor("PeriodSum", (("periods", R),), PeriodSum),
        Constructor("Repeating", (("unit", R), ("range", None), ("value", None)), Repeating),
        Constructor("Last", (("interval", R), ("shift", None)), ops.last_eval),
        Constructor("Next", (("interval", R), ("shift", None)), ops.next_eval),
        Constructor("Before", (("interval", R), ("shift", R), ("n", 1)), ops.before_eval),
        Constructor("After", (("interval", R), ("shift", R), ("n", 1)), ops.after_eval),
        Constructor("Nth", (("interval", R), ("shift", R), ("index", R), ("from_end", False)), ops.nth_eval),
        Constructor("This", (("interval", R), ("shift", R)), ops.this_eval),
        Constructor("Between", (("start_interval", R), ("end_interval", R),
                                ("start_included", False), ("end_included", False)), ops.between_eval),
        Constructor("Intersection", (("intervals", R),), ops.intersection_eval),
        Constructor("These", (("interval", R), ("shift", R)), ops.these_eval),
        Constructor("LastN", (("interval", R), ("shift", R), ("n", R)), ops.last_n_eval),
        Constructor("NextN", (("interval", R), ("shift", R), ("n", R)), ops.next_n_eval),
        Constructor("ShiftUnion", (("shifts", R),), ShiftUnion),
        Constructor("RepeatingIntersection", (("shifts", R),), RepeatingIntersection),
    ]
    table += [Constructor(name, (), cls) for name, cls in NAMED_REPEATINGS.items()]
    return {c.name: c for c in table}


CONSTRUCTORS = _constructors()


# ---------------------------------------------------------------------------
# evaluation


def _evaluate(node: Node):
    if isinstance(node, Call):
        constructor = CONSTRUCTORS.get(node.name)
        if constructor is None:
            raise UnknownConstructorError(f"unknown constructor {node.name!r}")
        args = [_evaluate(a) for a in node.args]
        kwargs = {k: _evaluate(v) for k, v in node.kwargs.items()}
        return constructor.build(*constructor.bind(args, kwargs))
    if isinstance(node, ListLit):
        return [_evaluate(e) for e in node.elements]
    if isinstance(node, (IntLit, StrLit, BoolLit)):
        return node.value
    if isinstance(node, NoneLit):
        return None
    if isinstance(node, EnumRef):
        try:
            return Unit[node.name]
        except KeyError:
            raise InvalidArgumentError(f"unknown time unit {node.name!r}") from None
    raise TypeError(f"not a syntax tree node: {node!r}")


def evaluate(node: Node, budget: int = DEFAULT_INSTANCE_BUDGET):
    """
    Execute a syntax tree.

    Returns an :class:`Interval`, a list of intervals, or an unanchored
    period or repeating interval.  Any failure is a
    :class:`~scate.errors.ScateError` with a ``category``.
    """
    with instance_budget(budget):
        try:
            value = _evaluate(node)
        except (OverflowError, RecursionError) as e:
            raise OutOfRangeError(f"evaluation left the representable range: {e}") from None
    # a bare list literal is not a value; lists only come from collection operators
    if isinstance(value, list) and isinstance(node, Call):
        return value
    if isinstance(value, (Interval, PeriodShift, RepeatingShift)):
        return value
    raise InvalidArgumentError(f"expression does not denote a time value: {value!r}")


def execute(text: str, budget: int = DEFAULT_INSTANCE_BUDGET):
    """Parse and evaluate expression text."""
    return evaluate(parse(text), budget)


# ---------------------------------------------------------------------------
# formatting


def _quote(value: str) -> str:
    return '"' + value.replace("\\", "\\\\").replace('"', '\\"') + '"'


def format(node: Node) -> str:
    """Canonical single-line text of a syntax tree."""
    if isinstance(node, Call):
        parts = [format(a) for a in node.args]
        constructor = CONSTRUCTORS.get(node.name)
        order = constructor.param_names if constructor else []
        keys = [k for k in order if k in node.kwargs] + [k for k in node.kwargs if k not in order]
        parts += [f"{k}={format(node.kwargs[k])}" for k in keys]
        return f"{node.name}({', '.join(parts)})"
    if isinstance(node, ListLit):
        return "[" + ", ".join(format(e) for e in node.elements) + "]"
    if isinstance(node, BoolLit):
        return "True" if node.value else "False"
    if isinstance(node, IntLit):
        return str(node.value)
    if isinstance(node, StrLit):
        return _quote(node.value)
    if isinstance(node, NoneLit):
        return "None"
    if isinstance(node, EnumRef):
        return node.name
    raise TypeError(f"not a syntax tree node: {node!r}")


def to_node(value) -> Node:
    """Syntax tree that evaluates back to `value` (a shift or an interval)."""
    if isinstance(value, Period):
        return Call("Period", (EnumRef(value.unit.name), NoneLit() if value.n is None else IntLit(value.n)))
    if isinstance(value, PeriodSum):
        return Call("PeriodSum", (ListLit(tuple(to_node(p) for p in value.periods)),))
    if isinstance(value, Repeating):
        args = (EnumRef(value.unit.name),)
        if value.range is not value.unit:
            args += (EnumRef(value.range.name),)
        kwargs = {} if value.value is None else {"value": IntLit(value.value)}
        return Call("Repeating", args, kwargs)
    if isinstance(value, NamedRepeating):
        return Call(type(value).__name__)
    if isinstance(value, (ShiftUnion, RepeatingIntersection)):
        return Call(type(value).__name__, (ListLit(tuple(to_node(s) for s in value.shifts)),))
    if isinstance(value, Interval):
        return Call("Interval.fromisoformat", (StrLit(value.isoformat()),))
    raise TypeError(f"cannot express {value!r}")


def to_code(value) -> str:
    return format(to_node(value))


# ---------------------------------------------------------------------------
# normalized values

def value_kind(value) -> str:
    if isinstance(value, Interval):
        return "interval"
    if isinstance(value, list):
        return "intervals"
    if isinstance(value, PeriodShift):
        return "period"
    if isinstance(value, RepeatingShift):
        return "repeating"
    raise TypeError(f"not a normalized value: {value!r}")


def serialize_value(value) -> dict:
    """``{"kind": ..., "value": ...}`` form used in record files and reports."""
    kind = value_kind(value)
    if kind == "interval":
        payload = value.isoformat()
    elif kind == "intervals":
        payload = [i.isoformat() for i in value]
    else:
        payload = to_code(value)
    return {"kind": kind, "value": payload}


def values_equal(a, b) -> bool:
    """Exact equality of two normalized values of the same kind."""
    try:
        return serialize_value(a) == serialize_value(b)
    except TypeError:
        return False
