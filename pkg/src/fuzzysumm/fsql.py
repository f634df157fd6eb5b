"""Parser for the flexible-query dialect.

Grammar (keywords case-insensitive, identifiers may contain hyphens)::

    SELECT [INT [REAL]] ( '*' | ident (',' ident)* )
    FROM ident
    [WHERE cond (AND cond)*] [';']

    cond     := ident comparator labelset [THOLD REAL]
    labelset := '$'ident | '(' '$'ident (',' '$'ident)* ')'

The optional SELECT numbers are the top-k count and a query-level
threshold override.  Attribute and label names are resolved against the
schema here, so downstream code never sees unknown names.
"""

from __future__ import annotations

import re
from dataclasses import dataclass

from .errors import ParseError, SemanticError

FUZZY_COMPARATORS = ("FEQ", "FGT", "FGEQ", "FLT", "FLEQ", "MGT", "MLT")
NECESSITY_COMPARATORS = tuple("N" + c for c in FUZZY_COMPARATORS)
COMPARATORS = FUZZY_COMPARATORS + NECESSITY_COMPARATORS

_KEYWORDS = {"SELECT", "FROM", "WHERE", "AND", "THOLD"}

_TOKEN_RE = re.compile(
    r"""
    (?P<ws>\s+)
  | (?P<number>\d+\.\d*|\.\d+|\d+)
  | (?P<ident>[A-Za-z_][A-Za-z0-9_\-]*)
  | (?P<dollar>\$)
  | (?P<lparen>\()
  | (?P<rparen>\))
  | (?P<comma>,)
  | (?P<semi>;)
  | (?P<star>\*)
""",
    re.VERBOSE,
)


@dataclass(frozen=True)
class Token:
    kind: str  # NUMBER | IDENT | KEYWORD | COMPARATOR | $ ( ) , ; * | EOF
    text: str
    line: int
    column: int


def tokenize(text: str) -> list[Token]:
    tokens = []
    pos = 0
    line = 1
    line_start = 0
    while pos < len(text):
        match = _TOKEN_RE.match(text, pos)
        if match is None:
            raise ParseError(
                f"unexpected character {text[pos]!r}", line, pos - line_start + 1
            )
        column = pos - line_start + 1
        kind = match.lastgroup
        lexeme = match.group()
        if kind == "ws":
            newlines = lexeme.count("\n")
            if newlines:
                line += newlines
                line_start = pos + lexeme.rindex("\n") + 1
        elif kind == "number":
            tokens.append(Token("NUMBER", lexeme, line, column))
        elif kind == "ident":
            upper = lexeme.upper()
            if upper in _KEYWORDS:
                tokens.append(Token("KEYWORD", upper, line, column))
            elif upper in COMPARATORS:
                tokens.append(Token("COMPARATOR", upper, line, column))
            else:
                tokens.append(Token("IDENT", lexeme, line, column))
        else:
            symbol = {"dollar": "$", "lparen": "(", "rparen": ")", "comma": ",",
                      "semi": ";", "star": "*"}[kind]
            tokens.append(Token(symbol, symbol, line, column))
        pos = match.end()
    tokens.append(Token("EOF", "", line, len(text) - line_start + 1))
    return tokens


@dataclass(frozen=True)
class Condition:
    attribute: str
    comparator: str
    labels: tuple[str, ...]
    thold: float | None = None

    def render(self) -> str:
        labels = ", ".join(f"${name}" for name in self.labels)
        if len(self.labels) > 1:
            labels = f"({labels})"
        out = f"{self.attribute} {self.comparator} {labels}"
        if self.thold is not None:
            out += f" THOLD {_fmt(self.thold)}"
        return out


@dataclass(frozen=True)
class Query:
    relation: str
    projection: tuple[str, ...] | None  # None means '*'
    conditions: tuple[Condition, ...]
    k: int | None = None
    alpha_override: float | None = None
    text: str = ""

    def render(self) -> str:
        head = "Select"
        if self.k is not None:
            head += f" {self.k}"
            if self.alpha_override is not None:
                head += f" {_fmt(self.alpha_override)}"
        head += " " + ("*" if self.projection is None else ", ".join(self.projection))
        out = f"{head} From {self.relation}"
        if self.conditions:
            out += " Where " + " And ".join(c.render() for c in self.conditions)
        return out + ";"


def _fmt(value: float) -> str:
    return f"{value:g}"


class _Parser:
    def __init__(self, tokens: list[Token]):
        self.tokens = tokens
        self.pos = 0

    @property
    def current(self) -> Token:
        return self.tokens[self.pos]

    def advance(self) -> Token:
        token = self.current
        self.pos += 1
        return token

    def fail(self, expected: str):
        tok = self.current
        shown = tok.text or "end of input"
        raise ParseError(f"expected {expected}, found {shown!r}", tok.line, tok.column)

    def expect(self, kind: str, expected: str | None = None) -> Token:
        if self.current.kind != kind:
            self.fail(expected or kind)
        return self.advance()

    def keyword(self, word: str) -> Token:
        if self.current.kind != "KEYWORD" or self.current.text != word:
            self.fail(word)
        return self.advance()

    def at_keyword(self, word: str) -> bool:
        return self.current.kind == "KEYWORD" and self.current.text == word

    def number(self, what: str) -> tuple[float, bool]:
        token = self.expect("NUMBER", what)
        return float(token.text), "." in token.text

    def parse(self) -> Query:
        self.keyword("SELECT")
        k = None
        alpha = None
        if self.current.kind == "NUMBER":
            tok = self.current
            value, is_real = self.number("top-k count")
            if is_real:
                raise ParseError("top-k count must be an integer", tok.line, tok.column)
            k = int(value)
            if k < 1:
                raise ParseError("top-k count must be >= 1", tok.line, tok.column)
            if self.current.kind == "NUMBER":
                tok = self.current
                alpha, _ = self.number("threshold")
                if not (0.0 <= alpha <= 1.0):
                    raise ParseError("threshold must lie in [0,1]", tok.line, tok.column)

        if self.current.kind == "*":
            self.advance()
            projection = None
        else:
            names = [self.expect("IDENT", "attribute name").text]
            while self.current.kind == ",":
                self.advance()
                names.append(self.expect("IDENT", "attribute name").text)
            projection = tuple(names)

        self.keyword("FROM")
        relation = self.expect("IDENT", "relation name").text

        conditions = []
        if self.at_keyword("WHERE"):
            self.advance()
            conditions.append(self.condition())
            while self.at_keyword("AND"):
                self.advance()
                conditions.append(self.condition())

        if self.current.kind == ";":
            self.advance()
        self.expect("EOF", "end of query")
        return Query(
            relation=relation,
            projection=projection,
            conditions=tuple(conditions),
            k=k,
            alpha_override=alpha,
        )

    def condition(self) -> Condition:
        attribute = self.expect("IDENT", "attribute name").text
        if self.current.kind != "COMPARATOR":
            self.fail("fuzzy comparator")
        comparator = self.advance().text
        labels = self.labelset()
        thold = None
        if self.at_keyword("THOLD"):
            self.advance()
            tok = self.current
            thold, _ = self.number("threshold")
            if not (0.0 <= thold <= 1.0):
                raise ParseError("THOLD must lie in [0,1]", tok.line, tok.column)
        return Condition(attribute, comparator, labels, thold)

    def labelset(self) -> tuple[str, ...]:
        if self.current.kind == "(":
            self.advance()
            names = [self.label()]
            while self.current.kind == ",":
                self.advance()
                names.append(self.label())
            self.expect(")", "')'")
            return tuple(names)
        return (self.label(),)

    def label(self) -> str:
        self.expect("$", "'$'-prefixed label")
        return self.expect("IDENT", "label name").text


def parse_query(text: str, schema) -> Query:
    """Parse and resolve a query against the schema.

    Raises ParseError (with line/column) on bad syntax and SemanticError on
    unknown attributes/labels or a duplicated condition attribute.
    """
    query = _Parser(tokenize(text)).parse()
    by_name = {attr.name: attr for attr in schema}

    if query.projection is not None:
        for name in query.projection:
            if name not in by_name:
                raise SemanticError(f"unknown attribute {name!r} in projection")

    seen = set()
    for cond in query.conditions:
        attr = by_name.get(cond.attribute)
        if attr is None:
            raise SemanticError(f"unknown attribute {cond.attribute!r} in condition")
        if cond.attribute in seen:
            raise SemanticError(f"attribute {cond.attribute!r} constrained twice")
        seen.add(cond.attribute)
        for label in cond.labels:
            if not attr.has_label(label):
                raise SemanticError(
                    f"attribute {cond.attribute!r} has no label {label!r}"
                )
    return Query(
        relation=query.relation,
        projection=query.projection,
        conditions=query.conditions,
        k=query.k,
        alpha_override=query.alpha_override,
        text=text.strip(),
    )
