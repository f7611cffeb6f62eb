"""
Relations between the block determinants.

For coprime p, q with pq | n, send the abstract variables zᵢ (i < nₚ) and wⱼ (j < n_q) to the
block determinants Θₚ(y⁽ᵖ⁾ᵢ) and Θ_q(y⁽ᵠ⁾ⱼ). In the eigenbasis these are the monomials
y^{v⁽ᵖ⁾ᵢ} and y^{v⁽ᵠ⁾ⱼ}, so a term z^c w^d goes to y^{σ(c, d)} and the map is

    ρ′: C[z, w] → C[y].

Its kernel is generated by the binomials

    tᵢ = ∏_{j<q} z_{i+n_pq·j} − ∏_{j<p} w_{i+n_pq·j},        i < n_pq.

Membership is decided by applying ρ′. A certificate, cofactors gᵢ with F = ∑ gᵢ tᵢ, is built
by grouping the terms of F by image monomial and rewriting each term into the group's
reference term one block swap at a time.

Example
-------

>>> from circinv.theory.ideal import kernel_membership, parse_genpoly
>>> result = kernel_membership(parse_genpoly("z0*z1*z2*w0 - w0^2*w1", 6, 2, 3), want_certificate=True)
>>> print(result.certificate)
g0 = w0
"""
import math
import random
from dataclasses import dataclass
from typing import Dict, List, Optional, Sequence, Tuple, Union

from circinv.algebra.cyclotomic import CycElement
from circinv.algebra.expression import Builders, parse_with
from circinv.algebra.multipoly import (
    Basis,
    Coefficient,
    ExpVec,
    Poly,
    add_exponents,
    format_monomial,
    format_terms,
    graded_lex_key,
    merge_terms,
    multiply_terms,
)
from circinv.errors import (
    BasisMismatch,
    IndexOutOfRange,
    InvariantViolation,
    LengthMismatch,
    NegativeEntry,
    NotADivisor,
    NotCoprime,
    OrderMismatch,
    PolySyntaxError,
)
from circinv.theory.lattice import block_constant_part, generator_v

Key = Tuple[ExpVec, ExpVec]


def _check_parameters(n: int, p: int, q: Optional[int]) -> None:
    if q is not None and math.gcd(p, q) != 1:
        raise NotCoprime(f"{p} and {q} are not coprime")
    if p < 2 or n % p != 0:
        raise NotADivisor(f"{p} must be a divisor >= 2 of {n}")
    if q is not None and (q < 2 or n % (p * q) != 0):
        raise NotADivisor(f"{p}*{q} must divide {n}, with {q} >= 2")


def _combine(a: Key, b: Key) -> Key:
    return add_exponents(a[0], b[0]), add_exponents(a[1], b[1])


class GenPoly:
    """
    Polynomial in the abstract generator variables z₀, …, z_{nₚ−1} and w₀, …, w_{n_q−1}.

    `q` may be None, for polynomials in the zᵢ alone (the domain of ρ); the w-exponent of
    every term is then the empty tuple.

    Attributes
    ----------
    terms : Dict[Tuple[ExpVec, ExpVec], CycElement]
        Nonzero coefficients keyed by (z-exponents c, w-exponents d).
    """

    __slots__ = ("n", "p", "q", "terms")

    def __init__(
        self,
        n: int,
        p: int,
        q: Optional[int] = None,
        terms: Optional[Dict[Key, Coefficient]] = None,
    ) -> None:
        _check_parameters(n, p, q)
        self.n, self.p, self.q = n, p, q
        self.terms: Dict[Key, CycElement] = {}
        for (c, d), coeff in (terms or {}).items():
            c, d = tuple(c), tuple(d)
            if len(c) != self.n_p or len(d) != self.n_q:
                raise LengthMismatch(
                    f"exponents must have lengths {self.n_p} and {self.n_q}, got {len(c)} and {len(d)}"
                )
            if any(e < 0 for e in c + d):
                raise NegativeEntry(f"negative exponent in {(c, d)}")
            if not isinstance(coeff, CycElement):
                coeff = CycElement.rational(n, coeff)
            if not coeff.is_zero():
                self.terms[(c, d)] = coeff

    @property
    def n_p(self) -> int:
        return self.n // self.p

    @property
    def n_q(self) -> int:
        return 0 if self.q is None else self.n // self.q

    @property
    def n_pq(self) -> int:
        return 0 if self.q is None else self.n // (self.p * self.q)

    def _new(self, terms: Dict[Key, CycElement]) -> "GenPoly":
        poly = GenPoly.__new__(GenPoly)
        poly.n, poly.p, poly.q = self.n, self.p, self.q
        poly.terms = {k: c for k, c in terms.items() if not c.is_zero()}
        return poly

    @classmethod
    def zero(cls, n: int, p: int, q: Optional[int] = None) -> "GenPoly":
        return cls(n, p, q)

    @classmethod
    def monomial(
        cls,
        n: int,
        p: int,
        q: Optional[int],
        c: Sequence[int],
        d: Sequence[int],
        coeff: Coefficient = 1,
    ) -> "GenPoly":
        return cls(n, p, q, {(tuple(c), tuple(d)): coeff})

    @classmethod
    def constant(cls, n: int, p: int, q: Optional[int], value: Coefficient) -> "GenPoly":
        zero = cls(n, p, q)
        return cls.monomial(n, p, q, (0,) * zero.n_p, (0,) * zero.n_q, value)

    @classmethod
    def z(cls, n: int, p: int, q: Optional[int], i: int) -> "GenPoly":
        np_ = n // p
        if not 0 <= i < np_:
            raise IndexOutOfRange(f"z{i} is out of range, there are {np_} z-variables")
        c = [0] * np_
        c[i] = 1
        return cls.monomial(n, p, q, c, (0,) * (0 if q is None else n // q))

    @classmethod
    def w(cls, n: int, p: int, q: Optional[int], j: int) -> "GenPoly":
        nq = 0 if q is None else n // q
        if not 0 <= j < nq:
            raise IndexOutOfRange(f"w{j} is out of range, there are {nq} w-variables")
        d = [0] * nq
        d[j] = 1
        return cls.monomial(n, p, q, (0,) * (n // p), d)

    def is_zero(self) -> bool:
        return not self.terms

    def total_degree(self) -> int:
        return max((sum(c) + sum(d) for c, d in self.terms), default=0)

    def _compatible(self, other: "GenPoly") -> None:
        if (self.n, self.p, self.q) != (other.n, other.p, other.q):
            raise OrderMismatch(
                f"cannot combine generator polynomials over {(self.n, self.p, self.q)} and {(other.n, other.p, other.q)}"
            )

    def _lift(self, other: Union["GenPoly", Coefficient]) -> "GenPoly":
        if isinstance(other, GenPoly):
            self._compatible(other)
            return other
        return GenPoly.constant(self.n, self.p, self.q, other)

    def __add__(self, other: Union["GenPoly", Coefficient]) -> "GenPoly":
        return self._new(merge_terms(self.terms, self._lift(other).terms))

    __radd__ = __add__

    def __neg__(self) -> "GenPoly":
        return self._new({k: -c for k, c in self.terms.items()})

    def __sub__(self, other: Union["GenPoly", Coefficient]) -> "GenPoly":
        return self + (-self._lift(other))

    def __rsub__(self, other: Coefficient) -> "GenPoly":
        return (-self) + other

    def __mul__(self, other: Union["GenPoly", Coefficient]) -> "GenPoly":
        return self._new(multiply_terms(self.terms, self._lift(other).terms, _combine))

    __rmul__ = __mul__

    def __pow__(self, k: int) -> "GenPoly":
        if k < 0:
            raise ValueError("polynomials only have nonnegative powers")
        result = GenPoly.constant(self.n, self.p, self.q, 1)
        for _ in range(k):
            result = result * self
        return result

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, GenPoly):
            return NotImplemented
        return (self.n, self.p, self.q) == (other.n, other.p, other.q) and self.terms == other.terms

    def sorted_terms(self) -> List[Tuple[Key, CycElement]]:
        return sorted(
            self.terms.items(), key=lambda t: graded_lex_key(t[0][0] + t[0][1]), reverse=True
        )

    def image_exponent(self, c: Sequence[int], d: Sequence[int]) -> ExpVec:
        """σ(c, d), the exponent of the Y-monomial a term z^c w^d is sent to."""
        entries = [0] * self.n
        for ci, size in ((c, self.p), (d, self.q)):
            for i, k in enumerate(ci):
                if k:
                    for pos, e in enumerate(generator_v(self.n, size, i)):  # type: ignore
                        if e:
                            entries[pos] += k
        return tuple(entries)

    def __repr__(self) -> str:
        return f"GenPoly({self.n}, {self.p}, {self.q}, {str(self)!r})"

    def __str__(self) -> str:
        return format_terms(
            (_format_key(c, d), coeff) for (c, d), coeff in self.sorted_terms()
        )


def _format_key(c: Sequence[int], d: Sequence[int]) -> str:
    return "*".join(part for part in (format_monomial("z", c), format_monomial("w", d)) if part)


def parse_genpoly(text: str, n: int, p: int, q: Optional[int] = None) -> GenPoly:
    """
    Parses a polynomial in the variables z<i> and w<j>.

    >>> print(parse_genpoly("w0*w2 - z0*z2*z4", 12, 2, 3))
    -z0*z2*z4 + w0*w2
    """
    _check_parameters(n, p, q)
    cache: Dict[Tuple[str, int], GenPoly] = {}

    def variable(name: str, index: int, position: int) -> GenPoly:
        if name not in ("z", "w") or (name == "w" and q is None):
            allowed = "z<i>" if q is None else "z<i> and w<j>"
            raise PolySyntaxError(f"unexpected variable {name}{index}, expected {allowed}", position)
        if (name, index) not in cache:
            make = GenPoly.z if name == "z" else GenPoly.w
            try:
                cache[(name, index)] = make(n, p, q, index)
            except IndexOutOfRange as e:
                raise IndexOutOfRange(f"{e} (at position {position})")
        return cache[(name, index)]

    return parse_with(
        text,
        Builders(
            n=n,
            constant=lambda value: GenPoly.constant(n, p, q, value),
            variable=variable,
        ),
    )


def relations(n: int, p: int, q: int) -> List[GenPoly]:
    """
    The binomials t₀, …, t_{n_pq−1}, each checked to lie in the kernel of ρ′.

    >>> [str(t) for t in relations(12, 2, 3)]
    ['z0*z2*z4 - w0*w2', 'z1*z3*z5 - w1*w3']
    """
    _check_parameters(n, p, q)
    np_, nq, npq = n // p, n // q, n // (p * q)
    out = []
    for i in range(npq):
        c = [0] * np_
        for j in range(q):
            c[i + npq * j] = 1
        d = [0] * nq
        for j in range(p):
            d[i + npq * j] = 1
        t = GenPoly.monomial(n, p, q, c, (0,) * nq) - GenPoly.monomial(n, p, q, (0,) * np_, d)
        if not rho_prime_apply(t).is_zero():
            raise InvariantViolation(f"relation t{i} of {(n, p, q)} is not in the kernel")
        out.append(t)
    return out


def rho_prime_apply(F: GenPoly) -> Poly:
    """
    ρ′(F): every term z^c w^d becomes y^{σ(c, d)}.

    >>> print(rho_prime_apply(parse_genpoly("w1", 6, 2, 3)))
    y1*y3*y5
    """
    terms: Dict[ExpVec, CycElement] = {}
    for (c, d), coeff in F.terms.items():
        alpha = F.image_exponent(c, d)
        prev = terms.get(alpha)
        terms[alpha] = coeff if prev is None else prev + coeff
    return Poly._from_terms(F.n, Basis.Y, terms)


def rho_apply(F: GenPoly) -> Poly:
    """ρ(F) for a polynomial in the zᵢ alone."""
    if any(any(d) for _, d in F.terms):
        raise BasisMismatch("rho is only defined on polynomials in the z variables")
    return rho_prime_apply(F)


def fiber_sums(F: GenPoly) -> Dict[ExpVec, CycElement]:
    """Coefficient sum of F over each σ-fiber, keyed by the common image exponent."""
    return dict(rho_prime_apply(F).terms)


@dataclass
class Certificate:
    """
    Cofactors g₀, …, g_{n_pq−1} with F = ∑ gᵢ tᵢ.
    """

    cofactors: List[GenPoly]

    def __str__(self) -> str:
        return "\n".join(f"g{i} = {g}" for i, g in enumerate(self.cofactors))


@dataclass(frozen=True)
class InKernel:
    certificate: Optional[Certificate] = None


@dataclass(frozen=True)
class NotInKernel:
    """
    Attributes
    ----------
    witness : Poly
        The graded-lex largest monomial of ρ′(F), with coefficient 1.

    coefficient : CycElement
        Its coefficient in ρ′(F).
    """

    witness: Poly
    coefficient: CycElement


KernelResult = Union[InKernel, NotInKernel]


def _require_pair(F: GenPoly) -> int:
    if F.q is None:
        raise NotADivisor("kernel certificates need a second block size q")
    return F.q


def rewrite_monomial(
    F: GenPoly, source: Key, target: Key, coeff: Coefficient = 1
) -> List[Dict[Key, CycElement]]:
    """
    Cofactor terms gᵢ with coeff·(z^c w^d − z^{c′} w^{d′}) = ∑ gᵢ tᵢ, for (c, d) = `source` and
    (c′, d′) = `target` in the same σ-fiber.

    The difference is block constant: c − c′ repeats some m q times and d − d′ repeats −m
    p times. Blocks with mᵢ > 0 are visited first, then blocks with mᵢ < 0, both by ascending
    i, and each step swaps a single uᵢ = ∏ⱼ z_{i+n_pq·j} for vᵢ = ∏ⱼ w_{i+n_pq·j} or back,
    using uᵢ = vᵢ + tᵢ.
    """
    q = _require_pair(F)
    n, p = F.n, F.p
    npq = F.n_pq
    if not isinstance(coeff, CycElement):
        coeff = CycElement.rational(n, coeff)
    (c, d), (c_ref, d_ref) = source, target
    diff_c = tuple(a - b for a, b in zip(c, c_ref))
    diff_d = tuple(a - b for a, b in zip(d, d_ref))
    m = block_constant_part(n, p, q, diff_c, diff_d)
    if m is None:
        raise InvariantViolation(
            f"{source} and {target} share an image but differ by {(diff_c, diff_d)}, which is not block constant"
        )
    cofactors: List[Dict[Key, CycElement]] = [{} for _ in range(npq)]
    current_c, current_d = list(c), list(d)
    order = [i for i in range(npq) if m[i] > 0] + [i for i in range(npq) if m[i] < 0]
    for i in order:
        z_block = [i + npq * j for j in range(q)]
        w_block = [i + npq * j for j in range(p)]
        for _ in range(abs(m[i])):
            if m[i] > 0:
                for k in z_block:
                    current_c[k] -= 1
                step = coeff
            else:
                for k in w_block:
                    current_d[k] -= 1
                step = -coeff
            key = (tuple(current_c), tuple(current_d))
            prev = cofactors[i].get(key)
            cofactors[i][key] = step if prev is None else prev + step
            if m[i] > 0:
                for k in w_block:
                    current_d[k] += 1
            else:
                for k in z_block:
                    current_c[k] += 1
    if (tuple(current_c), tuple(current_d)) != (tuple(c_ref), tuple(d_ref)):
        raise InvariantViolation(f"rewriting {source} ended at {(current_c, current_d)}, not {target}")
    return cofactors


def build_certificate(F: GenPoly) -> Certificate:
    """
    Cofactors of F in the relations, for F in the kernel of ρ′.

    Terms are grouped by σ-image; in each group the graded-lex least term is the reference and
    every other term is rewritten into it with `rewrite_monomial`. The group coefficients
    sum to zero, so the references cancel and the accumulated cofactors reproduce F, which is
    checked before returning.
    """
    _require_pair(F)
    groups: Dict[ExpVec, List[Tuple[Key, CycElement]]] = {}
    for key, coeff in F.terms.items():
        groups.setdefault(F.image_exponent(*key), []).append((key, coeff))

    accumulated: List[Dict[Key, CycElement]] = [{} for _ in range(F.n_pq)]
    for alpha, members in groups.items():
        total = members[0][1]
        for _, coeff in members[1:]:
            total = total + coeff
        if not total.is_zero():
            raise InvariantViolation(f"coefficients over the fiber of {alpha} sum to {total}, not 0")
        reference = min(members, key=lambda t: graded_lex_key(t[0][0] + t[0][1]))[0]
        for key, coeff in members:
            if key == reference:
                continue
            for i, part in enumerate(rewrite_monomial(F, key, reference, coeff)):
                accumulated[i] = merge_terms(accumulated[i], part)

    certificate = Certificate([F._new(terms) for terms in accumulated])
    if not verify_certificate(F, certificate):
        raise InvariantViolation(f"certificate does not reproduce {F}")
    return certificate


def kernel_membership(F: GenPoly, want_certificate: bool = False) -> KernelResult:
    """
    Decides whether ρ′(F) = 0, equivalently whether F lies in the ideal (t₀, …, t_{n_pq−1}).

    >>> result = kernel_membership(parse_genpoly("z0", 6, 2, 3))
    >>> print(result.witness)
    y0*y3
    """
    image = rho_prime_apply(F)
    if not image.is_zero():
        alpha, coeff = image.sorted_terms()[0]
        return NotInKernel(Poly.monomial(F.n, Basis.Y, alpha), coeff)
    if not want_certificate:
        return InKernel()
    return InKernel(build_certificate(F))


def verify_certificate(F: GenPoly, certificate: Certificate) -> bool:
    """Expands ∑ gᵢ tᵢ and compares it with F term by term."""
    q = _require_pair(F)
    expected = F.n_pq
    if len(certificate.cofactors) != expected:
        raise LengthMismatch(f"expected {expected} cofactors, got {len(certificate.cofactors)}")
    total = GenPoly.zero(F.n, F.p, q)
    for g, t in zip(certificate.cofactors, relations(F.n, F.p, q)):
        total = total + g * t
    return total == F


@dataclass
class RhoTrivialReport:
    """
    Attributes
    ----------
    supports : List[Tuple[int, ...]]
        Variable supports of the monomials y^{v⁽ᵖ⁾ᵢ}, one per block.

    partition : bool
        Whether the supports are disjoint and cover every index.

    samples_nonzero : bool
        Whether every random nonzero polynomial in the zᵢ had a nonzero image.
    """

    n: int
    p: int
    supports: List[Tuple[int, ...]]
    partition: bool
    samples_nonzero: bool
    samples: int = 0

    @property
    def holds(self) -> bool:
        return self.partition and self.samples_nonzero

    def __bool__(self) -> bool:
        return self.holds


def random_genpoly(
    rng: random.Random,
    n: int,
    p: int,
    q: Optional[int] = None,
    terms: int = 4,
    max_degree: int = 3,
    max_coefficient: int = 5,
) -> GenPoly:
    """A random polynomial with up to `terms` terms and small nonzero integer coefficients."""
    result = GenPoly.zero(n, p, q)
    np_, nq = result.n_p, result.n_q
    for _ in range(terms):
        degree = rng.randint(0, max_degree)
        c, d = [0] * np_, [0] * nq
        for _ in range(degree):
            k = rng.randrange(np_ + nq)
            if k < np_:
                c[k] += 1
            else:
                d[k - np_] += 1
        coeff = rng.choice([-1, 1]) * rng.randint(1, max_coefficient)
        result = result + GenPoly.monomial(n, p, q, c, d, coeff)
    return result


def kernel_rho_trivial(n: int, p: int, samples: int = 16, seed: int = 0) -> RhoTrivialReport:
    """
    Checks that ρ has a trivial kernel: the supports of the block monomials y^{v⁽ᵖ⁾ᵢ}
    partition the variables, so distinct z-monomials have distinct images, and random
    nonzero polynomials in the zᵢ map to nonzero polynomials.

    >>> kernel_rho_trivial(6, 2).supports
    [(0, 3), (1, 4), (2, 5)]
    """
    _check_parameters(n, p, None)
    supports = [
        tuple(k for k, e in enumerate(generator_v(n, p, i)) if e) for i in range(n // p)
    ]
    covered = sorted(k for support in supports for k in support)
    partition = covered == list(range(n))
    rng = random.Random(seed)
    nonzero = True
    for _ in range(samples):
        F = random_genpoly(rng, n, p)
        if not F.is_zero() and rho_apply(F).is_zero():
            nonzero = False
    return RhoTrivialReport(
        n=n,
        p=p,
        supports=supports,
        partition=partition,
        samples_nonzero=nonzero,
        samples=samples,
    )
