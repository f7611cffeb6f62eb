"""
Exact arithmetic in the cyclotomic field Q(ζₙ).

An element is kept in the power basis 1, ζ, …, ζ^{φ(n)−1}, always reduced modulo the
cyclotomic polynomial Φₙ, so two elements are equal exactly when their coordinates are.
ζₙ is the abstract root of Φₙ, nothing is ever embedded into floating point numbers.

Coordinates are stored as integer numerators over one positive common denominator, which
keeps the inner loops of polynomial expansion in plain integer arithmetic.

>>> from circinv.algebra.cyclotomic import zeta_power
>>> z = zeta_power(6, 1)
>>> print(z * z)
-1 + zeta
"""
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, List, Literal, Optional, Sequence, Tuple, Union

from sympy import divisors, factorint

from circinv.errors import CycDivisionByZero, InvalidOrder, OrderMismatch

Rational = Union[int, Fraction]


def _check_order(n: int) -> None:
    if not isinstance(n, int) or n < 1:
        raise InvalidOrder(f"the order must be a positive integer, got {n!r}")


def euler_phi(n: int) -> int:
    """
    Euler's totient, computed from the prime factorization of `n`.

    >>> [euler_phi(n) for n in (1, 7, 12)]
    [1, 6, 4]
    """
    _check_order(n)
    result = 1
    for p, k in factorint(n).items():
        result *= (p - 1) * p ** (k - 1)
    return result


def _int_poly_mul(a: Sequence[int], b: Sequence[int]) -> List[int]:
    out = [0] * (len(a) + len(b) - 1)
    for i, ai in enumerate(a):
        if ai:
            for j, bj in enumerate(b):
                out[i + j] += ai * bj
    return out


def _int_poly_exact_div(a: Sequence[int], b: Sequence[int]) -> List[int]:
    # b is monic, so the quotient stays integral
    rem = list(a)
    quotient = [0] * (len(a) - len(b) + 1)
    for k in range(len(quotient) - 1, -1, -1):
        c = rem[k + len(b) - 1]
        quotient[k] = c
        if c:
            for j, bj in enumerate(b):
                rem[k + j] -= c * bj
    if any(rem):
        raise ArithmeticError("inexact division of integer polynomials")
    return quotient


@dataclass(frozen=True)
class CyclotomicPoly:
    """
    The n-th cyclotomic polynomial Φₙ.

    Attributes
    ----------
    n : int
        The order.

    coeffs : Tuple[int, ...]
        Integer coefficients b₀, …, b_φ(n), lowest degree first.
    """

    n: int
    coeffs: Tuple[int, ...]

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def __str__(self) -> str:
        parts: List[str] = []
        for k in range(self.degree, -1, -1):
            c = self.coeffs[k]
            if c == 0:
                continue
            mono = "" if k == 0 else ("x" if k == 1 else f"x^{k}")
            mag = abs(c)
            body = mono if mag == 1 and mono else (f"{mag}*{mono}" if mono else str(mag))
            if not parts:
                parts.append(("-" if c < 0 else "") + body)
            else:
                parts.append(("- " if c < 0 else "+ ") + body)
        return " ".join(parts)


@lru_cache(maxsize=None)
def cyclotomic_poly(n: int) -> CyclotomicPoly:
    """
    Φₙ by exact division of xⁿ − 1 by the product of Φ_d over the proper divisors d of n.

    >>> cyclotomic_poly(6).coeffs
    (1, -1, 1)
    >>> str(cyclotomic_poly(1))
    'x - 1'
    """
    _check_order(n)
    x_n_minus_one = [-1] + [0] * (n - 1) + [1]
    denominator = [1]
    for d in divisors(n):
        if d < n:
            denominator = _int_poly_mul(denominator, cyclotomic_poly(d).coeffs)
    return CyclotomicPoly(n, tuple(_int_poly_exact_div(x_n_minus_one, denominator)))


class _Field:
    """Per-order reduction data, shared by every element of Q(ζₙ)."""

    def __init__(self, n: int) -> None:
        self.n = n
        phi_poly = cyclotomic_poly(n)
        self.phi = phi_poly.degree
        self.modulus = phi_poly.coeffs[:-1]
        powers: List[Tuple[int, ...]] = []
        current = [1] + [0] * (self.phi - 1)
        for _ in range(n):
            powers.append(tuple(current))
            current = [0] + current
            self.reduce(current)
            current = current[: self.phi]
        self.zeta_powers = tuple(powers)

    def reduce(self, coords: List[int]) -> None:
        """Reduces an integer coordinate list modulo Φₙ in place, coordinates past φ(n) end up zero."""
        phi, modulus = self.phi, self.modulus
        for k in range(len(coords) - 1, phi - 1, -1):
            c = coords[k]
            if c:
                coords[k] = 0
                base = k - phi
                for j, b in enumerate(modulus):
                    if b:
                        coords[base + j] -= c * b


@lru_cache(maxsize=None)
def _field(n: int) -> _Field:
    _check_order(n)
    return _Field(n)


class CycElement:
    """
    An element of Q(ζₙ) in reduced power-basis form.

    Any coordinate sequence is accepted and reduced, so `CycElement(4, [1, 0, 1])` is 1 + ζ₄² = 0.

    >>> CycElement(4, [1, 0, 1]).is_zero()
    True
    >>> print(CycElement(3, [Fraction(1, 2), 2]))
    1/2 + 2*zeta
    """

    __slots__ = ("n", "_num", "_den")

    n: int
    _num: Tuple[int, ...]
    _den: int

    def __init__(self, n: int, coeffs: Iterable[Rational] = ()) -> None:
        field = _field(n)
        values = [Fraction(c) for c in coeffs]
        den = 1
        for v in values:
            den = den * v.denominator // math.gcd(den, v.denominator)
        nums = [int(v * den) for v in values]
        if len(nums) < field.phi:
            nums.extend([0] * (field.phi - len(nums)))
        field.reduce(nums)
        self._set(n, nums[: field.phi], den)

    def _set(self, n: int, nums: Sequence[int], den: int) -> None:
        if den != 1:
            g = math.gcd(den, *nums)
            if g != 1:
                nums = [c // g for c in nums]
                den //= g
        self.n = n
        self._num = tuple(nums)
        self._den = den

    @classmethod
    def _make(cls, n: int, nums: Sequence[int], den: int = 1) -> "CycElement":
        element = cls.__new__(cls)
        element._set(n, nums, den)
        return element

    @classmethod
    def zero(cls, n: int) -> "CycElement":
        return cls._make(n, [0] * _field(n).phi)

    @classmethod
    def one(cls, n: int) -> "CycElement":
        return cls.rational(n, 1)

    @classmethod
    def rational(cls, n: int, value: Rational) -> "CycElement":
        value = Fraction(value)
        nums = [0] * _field(n).phi
        nums[0] = value.numerator
        return cls._make(n, nums, value.denominator)

    @property
    def coeffs(self) -> Tuple[Fraction, ...]:
        """Power-basis coordinates as exact rationals, length φ(n)."""
        return tuple(Fraction(c, self._den) for c in self._num)

    def is_zero(self) -> bool:
        return not any(self._num)

    def is_rational(self) -> bool:
        return not any(self._num[1:])

    def rational_value(self) -> Fraction:
        if not self.is_rational():
            raise ValueError(f"{self} is not a rational number")
        return Fraction(self._num[0], self._den)

    def is_integer(self) -> bool:
        return self.is_rational() and self._den == 1

    def _coerce(self, other: Union["CycElement", Rational]) -> "CycElement":
        if isinstance(other, CycElement):
            if other.n != self.n:
                raise OrderMismatch(
                    f"cannot combine elements of Q(zeta_{self.n}) and Q(zeta_{other.n})"
                )
            return other
        if isinstance(other, (int, Fraction)):
            return CycElement.rational(self.n, other)
        return NotImplemented  # type: ignore

    def __add__(self, other: Union["CycElement", Rational]) -> "CycElement":
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        if self._den == other._den:
            return CycElement._make(
                self.n, [a + b for a, b in zip(self._num, other._num)], self._den
            )
        da, db = self._den, other._den
        return CycElement._make(
            self.n, [a * db + b * da for a, b in zip(self._num, other._num)], da * db
        )

    __radd__ = __add__

    def __neg__(self) -> "CycElement":
        return CycElement._make(self.n, [-a for a in self._num], self._den)

    def __sub__(self, other: Union["CycElement", Rational]) -> "CycElement":
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other: Rational) -> "CycElement":
        return (-self) + other

    def __mul__(self, other: Union["CycElement", Rational]) -> "CycElement":
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        if other.is_rational():
            c = other._num[0]
            return CycElement._make(self.n, [a * c for a in self._num], self._den * other._den)
        if self.is_rational():
            c = self._num[0]
            return CycElement._make(self.n, [b * c for b in other._num], self._den * other._den)
        field = _field(self.n)
        phi = field.phi
        conv = [0] * (2 * phi - 1)
        for i, a in enumerate(self._num):
            if a:
                for j, b in enumerate(other._num):
                    if b:
                        conv[i + j] += a * b
        field.reduce(conv)
        return CycElement._make(self.n, conv[:phi], self._den * other._den)

    __rmul__ = __mul__

    def inverse(self) -> "CycElement":
        """
        Multiplicative inverse, by the extended Euclidean algorithm against Φₙ.

        >>> print(zeta_power(4, 1).inverse())
        -zeta
        """
        if self.is_zero():
            raise CycDivisionByZero(f"zero has no inverse in Q(zeta_{self.n})")
        modulus = [Fraction(b) for b in cyclotomic_poly(self.n).coeffs]
        r0, r1 = modulus, _strip([Fraction(c) for c in self.coeffs])
        s0: List[Fraction] = [Fraction(0)]
        s1: List[Fraction] = [Fraction(1)]
        while any(r1):
            q, r = _fraction_divmod(r0, r1)
            r0, r1 = r1, r
            s0, s1 = s1, _strip(_fraction_sub(s0, _fraction_mul(q, s1)))
        g = r0[0]
        return CycElement(self.n, [c / g for c in s0])

    def __truediv__(self, other: Union["CycElement", Rational]) -> "CycElement":
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self * other.inverse()

    def __pow__(self, k: int) -> "CycElement":
        if k < 0:
            return self.inverse() ** (-k)
        result = CycElement.one(self.n)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def __eq__(self, other: object) -> bool:
        if isinstance(other, (int, Fraction)):
            return self.is_rational() and self.rational_value() == other
        if not isinstance(other, CycElement):
            return NotImplemented
        return self.n == other.n and self._den == other._den and self._num == other._num

    def __hash__(self) -> int:
        # rationals hash like the int or Fraction they compare equal to
        if self.is_rational():
            return hash(self.rational_value())
        return hash((self.n, self._num, self._den))

    def __repr__(self) -> str:
        return f"CycElement({self.n}, {[str(c) for c in self.coeffs]})"

    def __str__(self) -> str:
        parts: List[str] = []
        for k, c in enumerate(self.coeffs):
            if c == 0:
                continue
            power = "" if k == 0 else ("zeta" if k == 1 else f"zeta^{k}")
            mag = abs(c)
            if not power:
                body = str(mag)
            elif mag == 1:
                body = power
            else:
                body = f"{mag}*{power}"
            if not parts:
                parts.append(("-" if c < 0 else "") + body)
            else:
                parts.append(("- " if c < 0 else "+ ") + body)
        return " ".join(parts) if parts else "0"


def _strip(p: List[Fraction]) -> List[Fraction]:
    while len(p) > 1 and p[-1] == 0:
        p = p[:-1]
    return p


def _fraction_mul(a: List[Fraction], b: List[Fraction]) -> List[Fraction]:
    out = [Fraction(0)] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] += x * y
    return out


def _fraction_sub(a: List[Fraction], b: List[Fraction]) -> List[Fraction]:
    size = max(len(a), len(b))
    a = a + [Fraction(0)] * (size - len(a))
    b = b + [Fraction(0)] * (size - len(b))
    return [x - y for x, y in zip(a, b)]


def _fraction_divmod(
    a: List[Fraction], b: List[Fraction]
) -> Tuple[List[Fraction], List[Fraction]]:
    b = _strip(b)
    rem = list(a)
    if len(rem) < len(b):
        return [Fraction(0)], _strip(rem)
    quotient = [Fraction(0)] * (len(rem) - len(b) + 1)
    lead = b[-1]
    for k in range(len(quotient) - 1, -1, -1):
        c = rem[k + len(b) - 1] / lead
        quotient[k] = c
        if c:
            for j, y in enumerate(b):
                rem[k + j] -= c * y
    return quotient, _strip(rem[: len(b) - 1] or [Fraction(0)])


def zeta_power(n: int, k: int) -> CycElement:
    """
    ζₙᵏ reduced modulo Φₙ, `k` is taken modulo n first.

    >>> print(zeta_power(4, 2))
    -1
    >>> zeta_power(5, 5) == 1
    True
    """
    field = _field(n)
    return CycElement._make(n, field.zeta_powers[k % n])


def zeta_power_coords(n: int, k: int) -> Tuple[int, ...]:
    """Integer power-basis coordinates of ζₙᵏ, for inner loops that avoid building elements."""
    return _field(n).zeta_powers[k % n]


def totient_degree(n: int) -> int:
    """Dimension of Q(ζₙ) over Q, the length of every coordinate vector."""
    return _field(n).phi


def cyc_arith(
    op: Literal["add", "sub", "mul", "inv"],
    a: CycElement,
    b: Optional[CycElement] = None,
) -> CycElement:
    """
    Field operation dispatcher, `b` is ignored for "inv".

    >>> cyc_arith("add", cyc_arith("add", zeta_power(3, 0), zeta_power(3, 1)), zeta_power(3, 2)).is_zero()
    True
    """
    if op == "inv":
        return a.inverse()
    if b is None:
        raise TypeError(f"operation {op!r} needs two operands")
    if op == "add":
        return a + b
    if op == "sub":
        return a - b
    if op == "mul":
        return a * b
    raise ValueError(f"unknown operation {op!r}")


def is_zero(a: CycElement) -> bool:
    return a.is_zero()
