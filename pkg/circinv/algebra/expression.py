"""
Recursive-descent parser for the polynomial expression language used on the command line.

Grammar (whitespace insensitive)::

    expr    := term (("+" | "-") term)*
    term    := unary ("*" unary)*
    unary   := ("+" | "-") unary | power
    power   := atom ("^" INTEGER)?
    atom    := NUMBER | "zeta" | VARIABLE | "(" expr ")"
    NUMBER  := INTEGER ("/" INTEGER)?
    VARIABLE:= ("x" | "y" | "z" | "w") INTEGER

`zeta` is ζₙ, so `zeta^k` is ζₙᵏ. The letters `z` and `w` are reserved for the abstract
generator variables of the relation ring and never denote ζₙ.

>>> from circinv.algebra.expression import parse_poly
>>> from circinv.algebra.multipoly import Basis
>>> print(parse_poly("(x0+x1)*(x0-x1)", 2, Basis.X))
x0^2 - x1^2
"""
import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Dict, Generic, List, Optional, TypeVar

from circinv.algebra.cyclotomic import CycElement, zeta_power
from circinv.algebra.multipoly import Basis, Poly
from circinv.errors import IndexOutOfRange, PolySyntaxError

T = TypeVar("T")

_TOKEN = re.compile(
    r"\s*(?:(?P<number>\d+(?:\s*/\s*\d+)?)|(?P<zeta>zeta)|(?P<var>[a-z])(?P<index>\d+)|(?P<op>[-+*^()]))"
)


@dataclass(frozen=True)
class Token:
    kind: str
    text: str
    position: int


def tokenize(text: str) -> List[Token]:
    tokens: List[Token] = []
    pos = 0
    while pos < len(text):
        if text[pos:].strip() == "":
            break
        match = _TOKEN.match(text, pos)
        if not match:
            offset = pos + len(text[pos:]) - len(text[pos:].lstrip())
            raise PolySyntaxError(f"unexpected character {text[offset]!r}", offset)
        start = match.start(match.lastgroup)  # type: ignore
        if match.group("number") is not None:
            tokens.append(Token("number", match.group("number"), start))
        elif match.group("zeta") is not None:
            tokens.append(Token("zeta", "zeta", start))
        elif match.group("var") is not None:
            start = match.start("var")
            tokens.append(Token("var", match.group("var") + match.group("index"), start))
        else:
            tokens.append(Token("op", match.group("op"), start))
        pos = match.end()
    tokens.append(Token("end", "", len(text)))
    return tokens


@dataclass
class Builders(Generic[T]):
    """
    How parsed atoms become ring elements, the parser itself only uses `+`, `-`, `*` and `**`.

    Attributes
    ----------
    constant : Callable[[CycElement], T]
        Embeds a field element.

    variable : Callable[[str, int, int], T]
        Builds the variable `letter<index>`, the third argument is the token position for
        error messages. Unknown letters must raise `PolySyntaxError`.
    """

    n: int
    constant: Callable[[CycElement], T]
    variable: Callable[[str, int, int], T]


class _Parser(Generic[T]):
    def __init__(self, text: str, builders: Builders[T]) -> None:
        self.tokens = tokenize(text)
        self.index = 0
        self.builders = builders

    @property
    def current(self) -> Token:
        return self.tokens[self.index]

    def advance(self) -> Token:
        token = self.tokens[self.index]
        self.index += 1
        return token

    def accept(self, op: str) -> bool:
        if self.current.kind == "op" and self.current.text == op:
            self.index += 1
            return True
        return False

    def parse(self) -> T:
        if self.current.kind == "end":
            raise PolySyntaxError("empty expression", 0)
        value = self.expr()
        if self.current.kind != "end":
            raise PolySyntaxError(f"unexpected {self.current.text!r}", self.current.position)
        return value

    def expr(self) -> T:
        value = self.term()
        while True:
            if self.accept("+"):
                value = value + self.term()  # type: ignore
            elif self.accept("-"):
                value = value - self.term()  # type: ignore
            else:
                return value

    def term(self) -> T:
        value = self.unary()
        while self.accept("*"):
            value = value * self.unary()  # type: ignore
        return value

    def unary(self) -> T:
        if self.accept("-"):
            return -self.unary()  # type: ignore
        if self.accept("+"):
            return self.unary()
        return self.power()

    def power(self) -> T:
        value = self.atom()
        if self.accept("^"):
            token = self.advance()
            if token.kind != "number" or "/" in token.text:
                raise PolySyntaxError("exponents must be nonnegative integers", token.position)
            value = value ** int(token.text)  # type: ignore
        return value

    def atom(self) -> T:
        token = self.advance()
        n = self.builders.n
        if token.kind == "number":
            num, _, den = token.text.partition("/")
            if den and int(den) == 0:
                raise PolySyntaxError("division by zero in a rational literal", token.position)
            value = Fraction(int(num), int(den)) if den else Fraction(int(num))
            return self.builders.constant(CycElement.rational(n, value))
        if token.kind == "zeta":
            return self.builders.constant(zeta_power(n, 1))
        if token.kind == "var":
            return self.builders.variable(token.text[0], int(token.text[1:]), token.position)
        if token.kind == "op" and token.text == "(":
            value = self.expr()
            if not self.accept(")"):
                raise PolySyntaxError("expected ')'", self.current.position)
            return value
        if token.kind == "end":
            raise PolySyntaxError("unexpected end of expression", token.position)
        raise PolySyntaxError(f"unexpected {token.text!r}", token.position)


def parse_with(text: str, builders: Builders[T]) -> T:
    """Parses `text` into whatever ring `builders` describes."""
    return _Parser(text, builders).parse()


def poly_builders(n: int, basis: Basis) -> Builders[Poly]:
    letter = Basis(basis).letter
    cache: Dict[int, Poly] = {}

    def variable(name: str, index: int, position: int) -> Poly:
        if name != letter:
            raise PolySyntaxError(
                f"variable {name}{index} does not belong to the {Basis(basis).value}-basis, expected {letter}<k>",
                position,
            )
        if index >= n:
            raise IndexOutOfRange(f"{name}{index} is out of range for n = {n} (at position {position})")
        if index not in cache:
            cache[index] = Poly.variable(n, basis, index)
        return cache[index]

    return Builders(
        n=n,
        constant=lambda c: Poly.constant(n, basis, c),
        variable=variable,
    )


def parse_poly(text: str, n: int, basis: Basis, builders: Optional[Builders[Poly]] = None) -> Poly:
    """
    Parses an x- or y-polynomial in n variables.

    >>> print(parse_poly("zeta*y0", 4, Basis.Y))
    zeta*y0
    """
    return parse_with(text, builders or poly_builders(n, basis))
