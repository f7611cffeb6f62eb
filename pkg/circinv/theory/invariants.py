"""
The invariant ring C[x]^D = C[x]^Δ and its generators.

On the eigenbasis D and Δ are diagonal, so a polynomial is invariant exactly when every
one of its Y-monomials y^α has α in the lattice Vₙ. When n has at most two prime factors
every such α decomposes into generator vectors, which rewrites the polynomial in the
block determinants Θₚ(y⁽ᵖ⁾ᵢ). With three or more prime factors `gap_witness` produces an
invariant monomial that is not reachable from them.

Example
-------

>>> from circinv.algebra.expression import parse_poly
>>> from circinv.algebra.multipoly import Basis
>>> from circinv.theory.invariants import express_in_generators
>>> print(express_in_generators(parse_poly("x0^2 - x1^2", 2, Basis.X)))
T(2,0)
"""
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Tuple

from circinv.algebra.cyclotomic import CycElement
from circinv.algebra.multipoly import (
    Basis,
    ExpVec,
    Poly,
    apply_operator,
    format_terms,
    graded_lex_key,
    to_y,
)
from circinv.config import Limits
from circinv.errors import InvariantViolation, NotInvariant
from circinv.theory.circulant import BlockSpec, theta_block
from circinv.theory.lattice import (
    GeneratorId,
    OracleResult,
    Member,
    counterexample,
    decompose,
    generators_Tn,
    in_Vn,
    monoid_member_oracle,
)


@dataclass(frozen=True)
class InvarianceResult:
    """
    Attributes
    ----------
    d : bool
        Whether D annihilates the polynomial.

    delta : bool
        Whether Δ annihilates the polynomial.
    """

    d: bool
    delta: bool

    @property
    def invariant(self) -> bool:
        return self.d and self.delta

    def __bool__(self) -> bool:
        return self.invariant


def is_invariant(f: Poly) -> InvarianceResult:
    """
    Applies D and Δ to `f` in its own basis and reports whether each result vanishes.

    The two kernels coincide, so disagreeing answers raise `InvariantViolation`.

    >>> from circinv.algebra.expression import parse_poly
    >>> bool(is_invariant(parse_poly("x0", 2, Basis.X)))
    False
    """
    result = InvarianceResult(
        d=apply_operator("D", f).is_zero(),
        delta=apply_operator("Delta", f).is_zero(),
    )
    if result.d != result.delta:
        raise InvariantViolation(
            f"D-invariance ({result.d}) and Delta-invariance ({result.delta}) disagree for {f}"
        )
    return result


def generators_Rn(n: int) -> List[GeneratorId]:
    """Names of the block determinants over every prime divisor of n."""
    return [gid for gid, _ in generators_Tn(n)]


def generator_poly(
    n: int, gid: GeneratorId, basis: Basis = Basis.Y, limits: Optional[Limits] = None
) -> Poly:
    """The block determinant Θₚ(y⁽ᵖ⁾ᵢ), as the monomial y^{v⁽ᵖ⁾ᵢ} or expanded in x."""
    if Basis(basis) == Basis.Y:
        return Poly.monomial(n, Basis.Y, gid.vector(n))
    return theta_block(BlockSpec(n, gid.p, gid.i), limits)


Multiset = Tuple[GeneratorId, ...]


def format_multiset(gids: Multiset) -> str:
    counts: Dict[GeneratorId, int] = {}
    for gid in gids:
        counts[gid] = counts.get(gid, 0) + 1
    return "*".join(
        str(gid) if k == 1 else f"{gid}^{k}" for gid, k in sorted(counts.items())
    )


@dataclass
class GeneratorExpression:
    """
    A polynomial in the abstract block determinants.

    Attributes
    ----------
    n : int
        The order.

    terms : Dict[Tuple[GeneratorId, ...], CycElement]
        Coefficients keyed by sorted generator multisets, the empty multiset is the constant.
    """

    n: int
    terms: Dict[Multiset, CycElement] = field(default_factory=dict)

    def add_term(self, gids: Multiset, coeff: CycElement) -> None:
        key = tuple(sorted(gids))
        total = self.terms.get(key, CycElement.zero(self.n)) + coeff
        if total.is_zero():
            self.terms.pop(key, None)
        else:
            self.terms[key] = total

    def evaluate(self, basis: Basis = Basis.Y, limits: Optional[Limits] = None) -> Poly:
        """Substitutes every generator by its polynomial and expands."""
        cache: Dict[GeneratorId, Poly] = {}
        result = Poly.zero(self.n, basis)
        for gids, coeff in self.terms.items():
            term = Poly.constant(self.n, basis, coeff)
            for gid in gids:
                if gid not in cache:
                    cache[gid] = generator_poly(self.n, gid, basis, limits)
                term = term * cache[gid]
            result = result + term
        return result

    def sorted_terms(self) -> List[Tuple[Multiset, CycElement]]:
        return sorted(
            self.terms.items(), key=lambda t: (len(t[0]), t[0]), reverse=True
        )

    def __str__(self) -> str:
        return format_terms((format_multiset(g), c) for g, c in self.sorted_terms())


def express_in_generators(
    f: Poly, limits: Optional[Limits] = None
) -> GeneratorExpression:
    """
    Rewrites an invariant as a polynomial in the block determinants, for n with at most two
    prime factors: every Y-monomial y^α is decomposed into generator vectors and becomes
    the matching product of generators.

    Raises `NotInvariant` when some monomial is not annihilated by D.
    """
    g = f if f.basis == Basis.Y else to_y(f, limits)
    expression = GeneratorExpression(f.n)
    for alpha, coeff in sorted(g.terms.items(), key=lambda t: graded_lex_key(t[0])):
        if not in_Vn(alpha):
            raise NotInvariant(f"D does not annihilate the monomial with exponents {alpha}")
        expression.add_term(decompose(alpha, f.n).as_multiset(), coeff)
    return expression


@dataclass
class GapWitness:
    """
    An invariant monomial outside the subring generated by the block determinants.

    Attributes
    ----------
    alpha : ExpVec
        The exponent vector of the monomial.

    invariant : bool
        Whether D annihilates the monomial, expected True.

    oracle : OracleResult
        The exhaustive membership search over the generator monoid, expected `NonMember`.
    """

    n: int
    alpha: ExpVec
    monomial: Poly
    invariant: bool
    oracle: OracleResult

    @property
    def in_Rn(self) -> bool:
        return isinstance(self.oracle, Member)


def gap_witness(n: int, budget: int = 64) -> GapWitness:
    """
    y^{α′} for the counterexample α′ of order n, with its invariance and the oracle evidence.

    >>> witness = gap_witness(30)
    >>> print(witness.monomial)
    y0*y1*y7*y13*y19*y20
    >>> witness.invariant, witness.in_Rn
    (True, False)
    """
    alpha = counterexample(n)
    monomial = Poly.monomial(n, Basis.Y, alpha)
    return GapWitness(
        n=n,
        alpha=alpha,
        monomial=monomial,
        invariant=is_invariant(monomial).invariant,
        oracle=monoid_member_oracle(alpha, n, budget),
    )


def is_sl_invariant(f: Poly, limits: Optional[Limits] = None) -> bool:
    """
    Invariance under circulant matrices of determinant one: every Y-monomial of `f` must have
    a constant exponent vector, which places `f` in C[Θₙ].

    >>> is_sl_invariant(Poly.monomial(4, Basis.Y, (1, 0, 1, 0)))
    False
    """
    g = f if f.basis == Basis.Y else to_y(f, limits)
    return all(len(set(alpha)) <= 1 for alpha in g.terms)
