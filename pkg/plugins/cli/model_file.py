"""
Model File Module

Reads and writes the line-oriented model format:

    # comment
    name nonformal_wedge
    generator a 3
    generator b 3
    generator u 5
    d u = a*b
    truncate 9
    relation e^2
    formal

Polynomials accept rationals p/q, identifiers (trailing primes allowed), `*`,
`+`, `-`, `^` with non-negative integer exponents and parentheses.
"""
import logging
import re
from dataclasses import dataclass, field
from typing import Dict, List, NamedTuple, Optional
import sys
import os

sys.path.insert(0, os.path.dirname(os.path.dirname(os.path.abspath(__file__))))
sys.path.insert(0, os.path.dirname(os.path.dirname(os.path.dirname(os.path.abspath(__file__)))))

from sympy import QQ

from config.config import MAX_DEGREE
from errors import ParseError
from graded.algebra import Algebra, Element, Generator, IdealSpec

logger = logging.getLogger(__name__)

KEYWORDS = ("name", "generator", "d", "truncate", "relation", "formal")

TOKEN_RE = re.compile(
    r"(?P<space>\s+)"
    r"|(?P<number>\d+)"
    r"|(?P<ident>[A-Za-z_][A-Za-z0-9_]*'*)"
    r"|(?P<op>[-+*/^()=])"
)


class Token(NamedTuple):
    kind: str
    text: str
    column: int


def tokenize(text: str, line: int = 1, offset: int = 0) -> List[Token]:
    """Split text into tokens; columns are 1-based and shifted by offset."""
    tokens = []
    position = 0
    while position < len(text):
        match = TOKEN_RE.match(text, position)
        if match is None:
            raise ParseError(f"unexpected character {text[position]!r}", line, offset + position + 1)
        if match.lastgroup != "space":
            tokens.append(Token(match.lastgroup, match.group(), offset + position + 1))
        position = match.end()
    tokens.append(Token("end", "", offset + len(text) + 1))
    return tokens


class _PolynomialParser:
    """Recursive descent over one token list into elements of a fixed algebra."""

    def __init__(self, tokens: List[Token], algebra: Algebra, line: int):
        self.tokens = tokens
        self.algebra = algebra
        self.line = line
        self.position = 0

    @property
    def current(self) -> Token:
        return self.tokens[self.position]

    def error(self, message: str, token: Optional[Token] = None) -> ParseError:
        token = token or self.current
        return ParseError(message, self.line, token.column)

    def advance(self) -> Token:
        token = self.current
        self.position += 1
        return token

    def expect(self, text: str) -> Token:
        if self.current.text != text:
            raise self.error(f"expected {text!r}, found {self.current.text or 'end of line'!r}")
        return self.advance()

    def parse(self) -> Element:
        value = self.expression()
        if self.current.kind != "end":
            raise self.error(f"unexpected {self.current.text!r}")
        return value

    def expression(self) -> Element:
        value = self.term()
        while self.current.text in ("+", "-"):
            operator = self.advance().text
            right = self.term()
            value = value + right if operator == "+" else value - right
        return value

    def term(self) -> Element:
        sign = 1
        while self.current.text in ("+", "-"):
            if self.advance().text == "-":
                sign = -sign
        value = self.factor()
        while self.current.text == "*":
            self.advance()
            value = value * self.factor()
        return value if sign == 1 else -value

    def factor(self) -> Element:
        start = self.current
        base = self.atom()
        if self.current.text != "^":
            return base
        self.advance()
        exponent_token = self.current
        if exponent_token.kind != "number":
            raise self.error("exponent must be a non-negative integer")
        self.advance()
        exponent = int(exponent_token.text)
        if exponent > 1 and base.degree is not None and base.degree % 2:
            what = f"generator {start.text}" if start.kind == "ident" else f"element ({base})"
            raise self.error(f"odd {what} raised to power {exponent}", exponent_token)
        return base ** exponent

    def atom(self) -> Element:
        token = self.current
        if token.kind == "number":
            self.advance()
            numerator = int(token.text)
            if self.current.text != "/":
                return self.algebra.scalar(numerator)
            self.advance()
            if self.current.kind != "number":
                raise self.error(f"malformed rational {token.text}/{self.current.text}", token)
            denominator = int(self.advance().text)
            if denominator == 0:
                raise self.error(f"malformed rational {token.text}/0 (zero denominator)", token)
            return self.algebra.scalar(QQ(numerator, denominator))
        if token.kind == "ident":
            self.advance()
            if not self.algebra.has_generator(token.text):
                raise self.error(f"undeclared symbol {token.text!r}", token)
            return self.algebra.gen(token.text)
        if token.text == "(":
            self.advance()
            value = self.expression()
            self.expect(")")
            return value
        raise self.error(f"unexpected {token.text or 'end of line'!r}")


def parse_polynomial(text: str, algebra: Algebra, line: int = 1, offset: int = 0) -> Element:
    """Parse one polynomial expression into an element of the algebra."""
    return _PolynomialParser(tokenize(text, line, offset), algebra, line).parse()


@dataclass
class ModelFile:
    """A parsed model: (ΛV, d) with an optional ideal, or a formal presentation."""
    name: str = ""
    generators: List[Generator] = field(default_factory=list)
    differential: Dict[str, Element] = field(default_factory=dict)
    truncate: Optional[int] = None
    relations: List[Element] = field(default_factory=list)
    formal: bool = False

    @property
    def ideal(self) -> IdealSpec:
        truncations = ()
        if self.truncate is not None:
            truncations = ((frozenset(g.name for g in self.generators), self.truncate),)
        ring = self.polynomial_ring()
        return IdealSpec(truncations, tuple(ring.named_terms(r) for r in self.relations))

    def polynomial_ring(self, max_degree: int = MAX_DEGREE) -> Algebra:
        return Algebra(self.generators, max_degree=max_degree, name=self.name)

    def free_algebra(self, max_degree: int = MAX_DEGREE) -> Algebra:
        """(ΛV, d) on the declared generators."""
        ring = self.polynomial_ring(max_degree + 1)
        return ring.with_differential({n: ring.element(v.terms) for n, v in self.differential.items()})

    def quotient_algebra(self, max_degree: int = MAX_DEGREE) -> Algebra:
        """(ΛV/I, d) with I from the truncate and relation lines."""
        algebra = Algebra(self.generators, self.ideal, max_degree=max_degree + 1, name=self.name)
        return algebra.with_differential({n: algebra.element(v.terms) for n, v in self.differential.items()})

    def to_text(self) -> str:
        lines = []
        if self.name:
            lines.append(f"name {self.name}")
        lines.extend(f"generator {g.name} {g.degree}" for g in self.generators)
        for generator in self.generators:
            if generator.name in self.differential:
                lines.append(f"d {generator.name} = {self.differential[generator.name]}")
        if self.truncate is not None:
            lines.append(f"truncate {self.truncate}")
        lines.extend(f"relation {r}" for r in self.relations)
        if self.formal:
            lines.append("formal")
        return "\n".join(lines) + "\n"


def _int_field(word: str, what: str, line: int, column: int) -> int:
    if not word.isdigit():
        raise ParseError(f"{what} must be a positive integer, got {word!r}", line, column)
    value = int(word)
    if value <= 0:
        raise ParseError(f"{what} must be positive, got {value}", line, column)
    return value


def parse_model(text: str) -> ModelFile:
    """
    Parse a model file.

    Generators may be declared anywhere in the file; polynomials are parsed
    after every declaration has been read.

    Raises:
        ParseError: with the 1-based line and column of the offending token.
    """
    model = ModelFile()
    pending = []
    seen = set()
    for number, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].rstrip()
        stripped = line.lstrip()
        if not stripped:
            continue
        indent = len(line) - len(stripped)
        words = stripped.split()
        keyword = words[0]
        column = indent + 1
        if keyword not in KEYWORDS:
            raise ParseError(f"unknown statement {keyword!r}", number, column)

        if keyword == "name":
            if len(words) != 2:
                raise ParseError("expected: name <identifier>", number, column)
            model.name = words[1]
        elif keyword == "generator":
            if len(words) != 3:
                raise ParseError("expected: generator <name> <degree>", number, column)
            name_column = line.index(words[1], indent + len(keyword)) + 1
            if not re.fullmatch(r"[A-Za-z_][A-Za-z0-9_]*'*", words[1]):
                raise ParseError(f"invalid generator name {words[1]!r}", number, name_column)
            if words[1] in seen:
                raise ParseError(f"duplicate generator {words[1]!r}", number, name_column)
            degree_column = line.rindex(words[2]) + 1
            seen.add(words[1])
            model.generators.append(Generator(words[1], _int_field(words[2], "degree", number, degree_column)))
        elif keyword == "truncate":
            if len(words) != 2:
                raise ParseError("expected: truncate <N>", number, column)
            if model.truncate is not None:
                raise ParseError("truncate given twice", number, column)
            model.truncate = _int_field(words[1], "truncation degree", number, line.rindex(words[1]) + 1)
        elif keyword == "formal":
            if len(words) != 1:
                raise ParseError("formal takes no arguments", number, column)
            model.formal = True
        else:
            pending.append((number, keyword, line, indent + len(keyword)))

    ring = model.polynomial_ring()
    for number, keyword, line, start in pending:
        if keyword == "relation":
            body = line[start:]
            relation = parse_polynomial(body, ring, number, start)
            if relation.is_zero():
                raise ParseError("relation is zero", number, start + 1)
            if not relation.is_homogeneous():
                raise ParseError(f"relation {relation} is not homogeneous", number, start + 1)
            model.relations.append(relation)
            continue

        match = re.match(r"\s*([A-Za-z_][A-Za-z0-9_]*'*)\s*=", line[start:])
        if match is None:
            raise ParseError("expected: d <generator> = <polynomial>", number, start + 1)
        name = match.group(1)
        name_column = start + match.start(1) + 1
        if not ring.has_generator(name):
            raise ParseError(f"undeclared symbol {name!r}", number, name_column)
        if name in model.differential:
            raise ParseError(f"d {name} given twice", number, name_column)
        body_start = start + match.end()
        value = parse_polynomial(line[body_start:], ring, number, body_start)
        expected = ring.generator(name).degree + 1
        if not value.is_zero() and value.degree != expected:
            raise ParseError(f"d {name} must be homogeneous of degree {expected}", number, body_start + 1)
        if model.formal and not value.is_zero():
            raise ParseError("formal models carry the zero differential", number, name_column)
        if not value.is_zero():
            model.differential[name] = value

    logger.debug(
        "parsed model %r: %d generators, %d differentials, %d relations",
        model.name, len(model.generators), len(model.differential), len(model.relations),
    )
    return model


def load_model(path: str) -> ModelFile:
    """Read and parse a model file; the name defaults to the file stem."""
    with open(path, "rb") as handle:
        raw = handle.read()
    try:
        text = raw.decode("utf-8")
    except UnicodeDecodeError as error:
        before = raw[:error.start].decode("utf-8")
        line = before.count("\n") + 1
        column = len(before) - (before.rfind("\n") + 1) + 1
        raise ParseError(f"invalid UTF-8 byte 0x{raw[error.start]:02x}", line, column) from error
    model = parse_model(text.replace("\r\n", "\n").replace("\r", "\n"))
    if not model.name:
        model.name = os.path.splitext(os.path.basename(path))[0]
    return model


def print_model(model: ModelFile) -> str:
    return model.to_text()

