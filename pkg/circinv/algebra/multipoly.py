"""
Sparse multivariate polynomials over Q(ζₙ) in n variables.

A `Poly` is tagged with the variable family its exponents refer to: the original variables
x₀, …, x_{n−1} (`Basis.X`) or the eigenbasis y₀, …, y_{n−1} (`Basis.Y`), where

    yᵢ = ∑ⱼ ζₙ^{ij} xⱼ,        xⱼ = (1/n) ∑ᵢ ζₙ^{−ij} yᵢ.

Mixing the two families in one operation is an error instead of an implicit conversion,
use `to_x` and `to_y` explicitly.

>>> from circinv.algebra.multipoly import Basis, Poly, to_y
>>> x0, x1 = Poly.variable(2, Basis.X, 0), Poly.variable(2, Basis.X, 1)
>>> print(x0 * x0 - x1 * x1)
x0^2 - x1^2
>>> print(to_y(x0 * x0 - x1 * x1))
y0*y1
"""
import math
import operator
from enum import Enum
from fractions import Fraction
from typing import (
    Callable,
    Dict,
    Hashable,
    Iterable,
    List,
    Literal,
    Optional,
    Sequence,
    Tuple,
    TypeVar,
    Union,
)

from circinv.algebra.cyclotomic import (
    CycElement,
    Rational,
    totient_degree,
    zeta_power,
    zeta_power_coords,
)
from circinv.config import Limits, check_expansion
from circinv.errors import BasisMismatch, IndexOutOfRange, InvalidOrder, OrderMismatch

ExpVec = Tuple[int, ...]
"""Integer exponent vector of length n, nonnegative when used as a monomial exponent."""

Coefficient = Union[CycElement, Rational]


class Basis(str, Enum):
    X = "X"
    Y = "Y"

    @property
    def letter(self) -> str:
        return self.value.lower()


def graded_lex_key(exponents: Sequence[int]) -> Tuple[int, Tuple[int, ...]]:
    """Sort key of the canonical term order, largest first when used with `reverse=True`."""
    return (sum(exponents), tuple(exponents))


def format_terms(items: Iterable[Tuple[str, CycElement]]) -> str:
    """
    Renders `(monomial, coefficient)` pairs as text the expression parser reads back,
    an empty monomial string stands for the constant term.
    """
    out: List[str] = []
    for monomial, coeff in items:
        negative = False
        if coeff.is_rational():
            value = coeff.rational_value()
            negative = value < 0
            magnitude = abs(value)
            if monomial and magnitude == 1:
                body = monomial
            elif monomial:
                body = f"{magnitude}*{monomial}"
            else:
                body = str(magnitude)
        else:
            text = str(coeff)
            if " " not in text and text.startswith("-"):
                negative = True
                text = text[1:]
            if " " in text:
                text = f"({text})"
            body = f"{text}*{monomial}" if monomial else text
        if not out:
            out.append(("-" if negative else "") + body)
        else:
            out.append(("- " if negative else "+ ") + body)
    return " ".join(out) if out else "0"


def format_monomial(letter: str, exponents: Sequence[int]) -> str:
    parts = []
    for i, e in enumerate(exponents):
        if e == 1:
            parts.append(f"{letter}{i}")
        elif e > 1:
            parts.append(f"{letter}{i}^{e}")
    return "*".join(parts)


K = TypeVar("K", bound=Hashable)


def add_exponents(a: ExpVec, b: ExpVec) -> ExpVec:
    return tuple(map(operator.add, a, b))


def merge_terms(a: Dict[K, CycElement], b: Dict[K, CycElement]) -> Dict[K, CycElement]:
    """Sum of two sparse term maps, cancelled terms are left in as zeros."""
    out = dict(a)
    for key, c in b.items():
        prev = out.get(key)
        out[key] = c if prev is None else prev + c
    return out


def multiply_terms(
    a: Dict[K, CycElement],
    b: Dict[K, CycElement],
    combine: Callable[[K, K], K],
) -> Dict[K, CycElement]:
    """Product of two sparse term maps, `combine` multiplies two monomial keys."""
    out: Dict[K, CycElement] = {}
    right = list(b.items())
    for ka, ca in a.items():
        for kb, cb in right:
            key = combine(ka, kb)
            c = ca * cb
            prev = out.get(key)
            out[key] = c if prev is None else prev + c
    return out


class Poly:
    """
    Sparse polynomial over Q(ζₙ), a map from exponent vectors to nonzero coefficients.

    Attributes
    ----------
    n : int
        Number of variables, also the order of the coefficient field.

    basis : Basis
        Which variable family the exponents refer to.

    terms : Dict[ExpVec, CycElement]
        Nonzero coefficients keyed by exponent vectors of length n.
    """

    __slots__ = ("n", "basis", "terms")

    def __init__(
        self,
        n: int,
        basis: Basis,
        terms: Optional[Dict[ExpVec, Coefficient]] = None,
    ) -> None:
        if not isinstance(n, int) or n < 1:
            raise InvalidOrder(f"the number of variables must be positive, got {n!r}")
        self.n = n
        self.basis = Basis(basis)
        self.terms: Dict[ExpVec, CycElement] = {}
        for exponents, coeff in (terms or {}).items():
            exponents = tuple(exponents)
            if len(exponents) != n or any(e < 0 for e in exponents):
                raise ValueError(f"invalid exponent vector {exponents} for {n} variables")
            if not isinstance(coeff, CycElement):
                coeff = CycElement.rational(n, coeff)
            elif coeff.n != n:
                raise OrderMismatch(f"coefficient of order {coeff.n} in a polynomial of order {n}")
            if not coeff.is_zero():
                self.terms[exponents] = coeff

    @classmethod
    def _from_terms(cls, n: int, basis: Basis, terms: Dict[ExpVec, CycElement]) -> "Poly":
        poly = cls.__new__(cls)
        poly.n = n
        poly.basis = basis
        poly.terms = {e: c for e, c in terms.items() if not c.is_zero()}
        return poly

    @classmethod
    def zero(cls, n: int, basis: Basis) -> "Poly":
        return cls(n, basis)

    @classmethod
    def constant(cls, n: int, basis: Basis, value: Coefficient) -> "Poly":
        return cls(n, basis, {(0,) * n: value})

    @classmethod
    def monomial(
        cls, n: int, basis: Basis, exponents: Sequence[int], coeff: Coefficient = 1
    ) -> "Poly":
        return cls(n, basis, {tuple(exponents): coeff})

    @classmethod
    def variable(cls, n: int, basis: Basis, i: int) -> "Poly":
        if not 0 <= i < n:
            raise IndexOutOfRange(f"variable index {i} out of range for {n} variables")
        exponents = [0] * n
        exponents[i] = 1
        return cls.monomial(n, basis, exponents)

    def is_zero(self) -> bool:
        return not self.terms

    def total_degree(self) -> int:
        return max((sum(e) for e in self.terms), default=0)

    def is_homogeneous(self, degree: Optional[int] = None) -> bool:
        degrees = {sum(e) for e in self.terms}
        if degree is not None:
            return degrees <= {degree}
        return len(degrees) <= 1

    def has_integer_coefficients(self) -> bool:
        return all(c.is_integer() for c in self.terms.values())

    def sorted_terms(self) -> List[Tuple[ExpVec, CycElement]]:
        """Terms in graded lexicographic order, highest first."""
        return sorted(self.terms.items(), key=lambda t: graded_lex_key(t[0]), reverse=True)

    def _compatible(self, other: "Poly") -> None:
        if self.n != other.n:
            raise OrderMismatch(f"cannot combine polynomials of order {self.n} and {other.n}")
        if self.basis != other.basis:
            raise BasisMismatch(
                f"cannot combine a {self.basis.value}-basis and a {other.basis.value}-basis polynomial, convert one with to_x/to_y"
            )

    def _lift(self, other: Union["Poly", Coefficient]) -> "Poly":
        if isinstance(other, Poly):
            self._compatible(other)
            return other
        return Poly.constant(self.n, self.basis, other)

    def __add__(self, other: Union["Poly", Coefficient]) -> "Poly":
        other = self._lift(other)
        return Poly._from_terms(self.n, self.basis, merge_terms(self.terms, other.terms))

    __radd__ = __add__

    def __neg__(self) -> "Poly":
        return Poly._from_terms(self.n, self.basis, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other: Union["Poly", Coefficient]) -> "Poly":
        return self + (-self._lift(other))

    def __rsub__(self, other: Coefficient) -> "Poly":
        return (-self) + other

    def scale(self, factor: Coefficient) -> "Poly":
        if not isinstance(factor, CycElement):
            factor = CycElement.rational(self.n, factor)
        elif factor.n != self.n:
            raise OrderMismatch(f"cannot scale a polynomial of order {self.n} by an element of order {factor.n}")
        return Poly._from_terms(
            self.n, self.basis, {e: c * factor for e, c in self.terms.items()}
        )

    def __mul__(self, other: Union["Poly", Coefficient]) -> "Poly":
        if not isinstance(other, Poly):
            return self.scale(other)
        self._compatible(other)
        return Poly._from_terms(
            self.n, self.basis, multiply_terms(self.terms, other.terms, add_exponents)
        )

    __rmul__ = __mul__

    def __pow__(self, k: int) -> "Poly":
        if k < 0:
            raise ValueError("polynomials only have nonnegative powers")
        result = Poly.constant(self.n, self.basis, 1)
        base = self
        while k:
            if k & 1:
                result = result * base
            k >>= 1
            if k:
                base = base * base
        return result

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Poly):
            return NotImplemented
        return self.n == other.n and self.basis == other.basis and self.terms == other.terms

    def __repr__(self) -> str:
        return f"Poly({self.n}, Basis.{self.basis.value}, {print_poly(self)!r})"

    def __str__(self) -> str:
        return print_poly(self)


def print_poly(f: Poly) -> str:
    """Canonical text form, graded lexicographic with the highest term first."""
    letter = f.basis.letter
    return format_terms(
        (format_monomial(letter, e), c) for e, c in f.sorted_terms()
    )


def poly_arith(
    op: Literal["add", "sub", "mul", "scale"],
    f: Poly,
    g: Union[Poly, Coefficient],
) -> Poly:
    """
    Ring operation dispatcher.

    >>> x0, x1 = Poly.variable(2, Basis.X, 0), Poly.variable(2, Basis.X, 1)
    >>> print(poly_arith("mul", x0 + x1, x0 - x1))
    x0^2 - x1^2
    """
    if op == "scale":
        if isinstance(g, Poly):
            raise TypeError("scale takes a field element, not a polynomial")
        return f.scale(g)
    if op in ("add", "sub", "mul") and not isinstance(g, Poly):
        raise TypeError(f"{op} takes two polynomials, use scale for field elements")
    if op == "add":
        return f + g
    if op == "sub":
        return f - g
    if op == "mul":
        return f * g
    raise ValueError(f"unknown operation {op!r}")


def eigen_multiplier(n: int, exponents: Sequence[Rational], sign: int = 1) -> CycElement:
    """
    ∑ αᵢ ζₙ^{sign·i}, the scalar by which D (sign +1) or Δ (sign −1) acts on the Y-monomial y^α.

    Exponents may be any rationals, which makes this also the Vₙ membership functional.
    """
    phi = totient_degree(n)
    den = 1
    values = [Fraction(a) for a in exponents]
    for v in values:
        den = den * v.denominator // math.gcd(den, v.denominator)
    acc = [0] * phi
    for i, v in enumerate(values):
        if v:
            a = int(v * den)
            for j, z in enumerate(zeta_power_coords(n, sign * i)):
                if z:
                    acc[j] += a * z
    return CycElement._make(n, acc, den)


def apply_operator(which: Literal["D", "Delta"], f: Poly) -> Poly:
    """
    Applies D = ∑ x_{i−1} ∂/∂xᵢ or Δ = ∑ x_{i+1} ∂/∂xᵢ (indices modulo n).

    X-basis polynomials are differentiated directly; on the Y-basis the operators are
    diagonal and each monomial y^α is multiplied by ∑ αᵢ ζₙ^{±i}.

    >>> y1 = Poly.variable(4, Basis.Y, 1)
    >>> print(apply_operator("D", y1))
    zeta*y1
    """
    if which not in ("D", "Delta"):
        raise ValueError(f"unknown operator {which!r}, expected 'D' or 'Delta'")
    shift = -1 if which == "D" else 1
    n = f.n
    if f.basis == Basis.Y:
        sign = 1 if which == "D" else -1
        return Poly._from_terms(
            n,
            f.basis,
            {e: c * eigen_multiplier(n, e, sign) for e, c in f.terms.items()},
        )

    out: Dict[ExpVec, CycElement] = {}
    for e, c in f.terms.items():
        for i, a in enumerate(e):
            if a == 0:
                continue
            target = list(e)
            target[i] -= 1
            target[(i + shift) % n] += 1
            key = tuple(target)
            term = c * a
            prev = out.get(key)
            out[key] = term if prev is None else prev + term
    return Poly._from_terms(n, f.basis, out)


def compose(f: Poly, images: Sequence[Poly]) -> Poly:
    """
    Substitutes the i-th variable of `f` by `images[i]`, one variable at a time in Horner form.
    All images must share order and basis, which become the order and basis of the result.
    """
    if len(images) != f.n:
        raise ValueError(f"need {f.n} images, got {len(images)}")
    target = images[0]
    for image in images[1:]:
        target._compatible(image)
    one = Poly.constant(target.n, target.basis, 1)
    return _horner(list(f.terms.items()), images, 0, one)


def _horner(
    terms: List[Tuple[ExpVec, CycElement]],
    images: Sequence[Poly],
    level: int,
    one: Poly,
) -> Poly:
    if not terms:
        return one.scale(0)
    if level == len(images):
        total = terms[0][1]
        for _, c in terms[1:]:
            total = total + c
        return one.scale(total)
    groups: Dict[int, List[Tuple[ExpVec, CycElement]]] = {}
    for term in terms:
        groups.setdefault(term[0][level], []).append(term)
    top = max(groups)
    result = _horner(groups[top], images, level + 1, one)
    for k in range(top - 1, -1, -1):
        result = result * images[level]
        if k in groups:
            result = result + _horner(groups[k], images, level + 1, one)
    return result


def _linear_form(n: int, basis: Basis, coeff: Callable[[int], CycElement]) -> Poly:
    terms: Dict[ExpVec, CycElement] = {}
    for k in range(n):
        exponents = [0] * n
        exponents[k] = 1
        terms[tuple(exponents)] = coeff(k)
    return Poly._from_terms(n, basis, terms)


def y_in_x(n: int, i: int) -> Poly:
    """The linear form yᵢ = ∑ⱼ ζₙ^{ij} xⱼ."""
    return _linear_form(n, Basis.X, lambda j: zeta_power(n, i * j))


def x_in_y(n: int, j: int) -> Poly:
    """The linear form xⱼ = (1/n) ∑ᵢ ζₙ^{−ij} yᵢ."""
    inv_n = Fraction(1, n)
    return _linear_form(n, Basis.Y, lambda i: zeta_power(n, -i * j) * inv_n)


def to_y(f: Poly, limits: Optional[Limits] = None) -> Poly:
    """Rewrites an X-basis polynomial in the eigenbasis."""
    if f.basis != Basis.X:
        raise BasisMismatch("to_y expects an X-basis polynomial")
    check_expansion(f.n, "X", limits)
    return compose(f, [x_in_y(f.n, j) for j in range(f.n)])


def to_x(g: Poly, limits: Optional[Limits] = None) -> Poly:
    """Rewrites a Y-basis polynomial in the original variables."""
    if g.basis != Basis.Y:
        raise BasisMismatch("to_x expects a Y-basis polynomial")
    check_expansion(g.n, "X", limits)
    return compose(g, [y_in_x(g.n, i) for i in range(g.n)])
