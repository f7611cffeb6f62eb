"""
Circulant determinants and their block factorization.

The circulant determinant Θₙ(x) is the product of the eigenvalue forms yᵢ = ∑ⱼ ζₙ^{ij} xⱼ.
Grouping the variables by residue class modulo p, for a divisor p of n, gives the blocked
forms

    y⁽ᵖ⁾ᵢ,ⱼ = ∑_{l<nₚ} ζₙ^{i(j+pl)} x_{j+pl},        j = 0, …, p − 1,

and Θₙ(x) factors as the product over i < nₚ of the p × p circulant determinants of those
blocks. Each block determinant is, in the eigenbasis, the single monomial y^{v⁽ᵖ⁾ᵢ}.

>>> from circinv.theory.circulant import circulant_det
>>> print(circulant_det(3))
x0^3 - 3*x0*x1*x2 + x1^3 + x2^3
"""
from dataclasses import dataclass
from typing import List, Literal, Optional, Sequence, Tuple

from circinv.algebra.cyclotomic import CycElement, zeta_power
from circinv.algebra.multipoly import Basis, ExpVec, Poly, graded_lex_key, to_x, to_y
from circinv.config import Limits, check_expansion
from circinv.errors import IndexOutOfRange, InvariantViolation, NotADivisor
from circinv.theory.lattice import generator_v


@dataclass(frozen=True)
class BlockSpec:
    """
    Selects the block determinant Θₚ(y⁽ᵖ⁾ᵢ) of order n.

    Attributes
    ----------
    n : int
        The order.

    p : int
        Block size, a divisor of n, at least 2.

    i : int
        Block index, 0 ≤ i < n/p.
    """

    n: int
    p: int
    i: int

    def __post_init__(self) -> None:
        if self.p < 2 or self.n % self.p != 0:
            raise NotADivisor(f"block size {self.p} must be a divisor >= 2 of {self.n}")
        if not 0 <= self.i < self.n // self.p:
            raise IndexOutOfRange(f"block index {self.i} out of range [0, {self.n // self.p})")

    @property
    def n_p(self) -> int:
        return self.n // self.p


def circulant_product(forms: Sequence[Poly], n: int) -> Poly:
    """
    ∏_{k<m} ∑_{j<m} ω^{kj} forms[j] with m = len(forms) and ω = ζₙ^{n/m}, the m × m circulant
    determinant of `forms` written as a product of its eigenvalues.
    """
    m = len(forms)
    step = n // m
    result = Poly.constant(n, forms[0].basis, 1)
    for k in range(m):
        eigenvalue = Poly.zero(n, forms[0].basis)
        for j, form in enumerate(forms):
            eigenvalue = eigenvalue + form.scale(zeta_power(n, step * k * j))
        result = result * eigenvalue
    return result


def _x_variables(n: int) -> List[Poly]:
    return [Poly.variable(n, Basis.X, j) for j in range(n)]


def circulant_det(n: int, limits: Optional[Limits] = None) -> Poly:
    """
    Θₙ(x) expanded in the original variables, its coefficients are always rational integers.

    >>> print(circulant_det(2))
    x0^2 - x1^2
    """
    check_expansion(n, "X", limits)
    theta = circulant_product(_x_variables(n), n)
    if not theta.has_integer_coefficients():
        raise InvariantViolation(f"the circulant determinant of order {n} has non-integer coefficients")
    return theta


def block_vars(spec: BlockSpec) -> List[Poly]:
    """
    The p linear forms y⁽ᵖ⁾ᵢ,ⱼ of a block.

    >>> [str(f) for f in block_vars(BlockSpec(4, 2, 1))]
    ['x0 - x2', 'zeta*x1 - zeta*x3']
    """
    n, p, i = spec.n, spec.p, spec.i
    forms = []
    for j in range(p):
        terms = {}
        for l in range(spec.n_p):
            k = j + p * l
            exponents = [0] * n
            exponents[k] = 1
            terms[tuple(exponents)] = zeta_power(n, i * k)
        forms.append(Poly(n, Basis.X, terms))
    return forms


def theta_block(spec: BlockSpec, limits: Optional[Limits] = None) -> Poly:
    """
    Θₚ(y⁽ᵖ⁾ᵢ), the p × p circulant determinant in the block forms, expanded in the x variables.

    >>> print(theta_block(BlockSpec(4, 2, 0)))
    x0^2 + 2*x0*x2 - x1^2 - 2*x1*x3 + x2^2 - x3^2
    """
    check_expansion(spec.n, "X", limits)
    return circulant_product(block_vars(spec), spec.n)


def block_monomial(spec: BlockSpec) -> Poly:
    """y^{v⁽ᵖ⁾ᵢ}, the eigenbasis form of the block determinant."""
    return Poly.monomial(spec.n, Basis.Y, generator_v(spec.n, spec.p, spec.i))


@dataclass
class FactorizationReport:
    """
    Outcome of comparing Θₙ with the product of its p-blocks.

    Attributes
    ----------
    holds : bool
        Whether the two sides have identical term maps.

    first_mismatch : Optional[Tuple[ExpVec, CycElement, CycElement]]
        The graded-lex largest exponent where the sides differ, with the left and right
        coefficients.
    """

    n: int
    p: int
    basis: Basis
    holds: bool
    left_terms: int
    right_terms: int
    first_mismatch: Optional[Tuple[ExpVec, CycElement, CycElement]] = None

    def __bool__(self) -> bool:
        return self.holds


def first_difference(
    left: Poly, right: Poly
) -> Optional[Tuple[ExpVec, CycElement, CycElement]]:
    zero = CycElement.zero(left.n)
    for exponents in sorted(
        set(left.terms) | set(right.terms), key=graded_lex_key, reverse=True
    ):
        a = left.terms.get(exponents, zero)
        b = right.terms.get(exponents, zero)
        if a != b:
            return exponents, a, b
    return None


def verify_factorization(
    n: int,
    p: int,
    basis: Basis = Basis.X,
    limits: Optional[Limits] = None,
) -> FactorizationReport:
    """
    Checks Θₙ(x) = ∏_{i<nₚ} Θₚ(y⁽ᵖ⁾ᵢ) by exact term-map comparison.

    On the X-basis both sides are fully expanded. On the Y-basis the left side is y₀⋯y_{n−1}
    and the right side is the product of the block monomials, which stays cheap far beyond
    the X-basis guard.

    >>> verify_factorization(6, 3).holds
    True
    """
    basis = Basis(basis)
    if p < 2 or n % p != 0:
        raise NotADivisor(f"block size {p} must be a divisor >= 2 of {n}")
    specs = [BlockSpec(n, p, i) for i in range(n // p)]
    if basis == Basis.X:
        left = circulant_det(n, limits)
        right = Poly.constant(n, Basis.X, 1)
        for spec in specs:
            right = right * theta_block(spec, limits)
    else:
        check_expansion(n, "Y", limits)
        left = Poly.monomial(n, Basis.Y, (1,) * n)
        right = Poly.constant(n, Basis.Y, 1)
        for spec in specs:
            right = right * block_monomial(spec)
    mismatch = first_difference(left, right)
    return FactorizationReport(
        n=n,
        p=p,
        basis=basis,
        holds=mismatch is None,
        left_terms=len(left.terms),
        right_terms=len(right.terms),
        first_mismatch=mismatch,
    )


def verify_monomial_identity(
    spec: BlockSpec,
    method: Literal["to_x", "to_y"] = "to_x",
    limits: Optional[Limits] = None,
) -> bool:
    """
    Whether the block determinant is the eigenbasis monomial y^{v⁽ᵖ⁾ᵢ} with coefficient 1.

    `to_y` rewrites the block determinant in the eigenbasis and compares monomials, `to_x`
    expands the monomial in the x variables and compares with the block determinant. The
    basis change is invertible, so both decide the same identity; `to_x` avoids expanding
    a degree-p polynomial through n-term linear forms.

    >>> verify_monomial_identity(BlockSpec(6, 2, 0), method="to_y")
    True
    """
    theta = theta_block(spec, limits)
    monomial = block_monomial(spec)
    if method == "to_y":
        return to_y(theta, limits) == monomial
    if method == "to_x":
        return to_x(monomial, limits) == theta
    raise ValueError(f"unknown method {method!r}")
