"""
The exponent lattice of the invariant ring.

A Y-monomial y^α is invariant under D exactly when α lies in

    Vₙ = {α ∈ Qⁿ | ∑ αᵢ ζₙⁱ = 0},

so the invariant monomials are the points of Vₙ ∩ Z≥0ⁿ. This module builds the bases of Vₙ,
the generator vectors v⁽ᵖ⁾ᵢ (ones on the progression i, i + n/p, …), the constructive
decomposition of a lattice point into those generators when n has at most two prime
factors, and the explicit lattice point outside their monoid when it has three or more.

>>> from circinv.theory.lattice import decompose
>>> print(decompose((1, 1, 1, 1, 1, 1)))
v(3,0) + v(3,1)
"""
import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import (
    Dict,
    Iterator,
    List,
    Mapping,
    Optional,
    Sequence,
    Set,
    Tuple,
    Union,
)

from sympy import Matrix, factorint

from circinv.algebra.cyclotomic import cyclotomic_poly, totient_degree, zeta_power_coords
from circinv.algebra.multipoly import ExpVec, eigen_multiplier
from circinv.errors import (
    InvalidOrder,
    InvariantViolation,
    LengthMismatch,
    NegativeEntry,
    NotADivisor,
    NotInLattice,
    TooFewPrimeFactors,
    TooManyPrimeFactors,
)

Number = Union[int, Fraction]


def _check_order(n: int) -> None:
    if not isinstance(n, int) or n < 1:
        raise InvalidOrder(f"the order must be a positive integer, got {n!r}")


def n_part(n: int, d: int) -> int:
    """nₐ = n / d, for a divisor d of n."""
    _check_order(n)
    if d < 1 or n % d != 0:
        raise NotADivisor(f"{d} does not divide {n}")
    return n // d


@lru_cache(maxsize=None)
def _prime_factors(n: int) -> Tuple[int, ...]:
    return tuple(sorted(factorint(n)))


def prime_factors(n: int) -> List[int]:
    """
    Distinct prime divisors of n, ascending.

    >>> prime_factors(60)
    [2, 3, 5]
    """
    _check_order(n)
    return list(_prime_factors(n))


def zero_vector(n: int) -> ExpVec:
    return (0,) * n


def unit_vector(n: int, i: int) -> ExpVec:
    entries = [0] * n
    entries[i % n] = 1
    return tuple(entries)


def vec_add(a: Sequence[int], b: Sequence[int]) -> ExpVec:
    if len(a) != len(b):
        raise LengthMismatch(f"cannot add vectors of lengths {len(a)} and {len(b)}")
    return tuple(x + y for x, y in zip(a, b))


def vec_scale(k: int, a: Sequence[int]) -> ExpVec:
    return tuple(k * x for x in a)


def vec_sub(a: Sequence[int], b: Sequence[int]) -> ExpVec:
    return vec_add(a, vec_scale(-1, b))


def in_Vn(alpha: Sequence[Number]) -> bool:
    """
    Whether ∑ αᵢ ζₙⁱ = 0 for n = len(alpha), entries may be rational.

    >>> in_Vn((1, 0, 0, 1, 0, 0)), in_Vn((1, 1, 0, 0))
    (True, False)
    """
    if not alpha:
        raise InvalidOrder("an exponent vector has at least one entry")
    return eigen_multiplier(len(alpha), alpha).is_zero()


def basis_Sn(n: int) -> List[ExpVec]:
    """
    The n − φ(n) vectors vᵢ = ∑ⱼ bⱼ e_{i+j} built from the coefficients of Φₙ, a basis of Vₙ.
    For n = 1 the space is {0} and the basis is empty.

    >>> basis_Sn(4)
    [(1, 0, 1, 0), (0, 1, 0, 1)]
    """
    _check_order(n)
    b = cyclotomic_poly(n).coeffs
    out = []
    for i in range(n - totient_degree(n)):
        entries = [0] * n
        for j, bj in enumerate(b):
            entries[i + j] = bj
        out.append(tuple(entries))
    return out


def rational_rank(vectors: Sequence[Sequence[Number]]) -> int:
    """Exact rank over Q."""
    if not vectors:
        return 0
    return Matrix([list(v) for v in vectors]).rank()


@dataclass(frozen=True, order=True)
class GeneratorId:
    """
    Names the generator v⁽ᵖ⁾ᵢ, equivalently the block determinant Θₚ(y⁽ᵖ⁾ᵢ).

    Build it through `GeneratorId.of` to normalize the index modulo n/p.
    """

    p: int
    i: int

    @staticmethod
    def of(n: int, p: int, i: int) -> "GeneratorId":
        if p < 2:
            raise NotADivisor(f"generators need a divisor p >= 2, got {p}")
        return GeneratorId(p, i % n_part(n, p))

    def vector(self, n: int) -> ExpVec:
        return generator_v(n, self.p, self.i)

    def __str__(self) -> str:
        return f"T({self.p},{self.i})"


def generator_v(n: int, p: int, i: int) -> ExpVec:
    """
    v⁽ᵖ⁾ᵢ = ∑_{j<p} e_{i + nₚj}, the index taken modulo nₚ first.

    >>> generator_v(6, 3, 1)
    (0, 1, 0, 1, 0, 1)
    >>> generator_v(4, 2, 3)
    (0, 1, 0, 1)
    """
    if p < 2:
        raise NotADivisor(f"generators need a divisor p >= 2, got {p}")
    np_ = n_part(n, p)
    start = i % np_
    entries = [0] * n
    for j in range(p):
        entries[start + np_ * j] = 1
    return tuple(entries)


def generators_Tn(n: int) -> List[Tuple[GeneratorId, ExpVec]]:
    """
    Every v⁽ᵖ⁾ᵢ over the prime divisors p of n, primes ascending then index ascending.

    >>> len(generators_Tn(30))
    31
    """
    return [
        (GeneratorId(p, i), generator_v(n, p, i))
        for p in prime_factors(n)
        for i in range(n // p)
    ]


def _check_pair(n: int, p: int, q: int) -> Tuple[int, int, int]:
    np_, nq = n_part(n, p), n_part(n, q)
    if n % (p * q) != 0:
        raise NotADivisor(f"{p}*{q} does not divide {n}")
    return np_, nq, n // (p * q)


def _check_length(name: str, vector: Sequence[int], expected: int) -> None:
    if len(vector) != expected:
        raise LengthMismatch(f"{name} must have length {expected}, got {len(vector)}")


def sigma(n: int, p: int, q: int, c: Sequence[int], d: Sequence[int]) -> ExpVec:
    """
    σ(c, d) = ∑ cᵢ v⁽ᵖ⁾ᵢ + ∑ dᵢ v⁽ᵠ⁾ᵢ, entries may be negative.

    >>> sigma(6, 2, 3, (1, 1, 1), (-1, -1))
    (0, 0, 0, 0, 0, 0)
    """
    np_, nq = n_part(n, p), n_part(n, q)
    _check_length("c", c, np_)
    _check_length("d", d, nq)
    entries = [0] * n
    for i, ci in enumerate(c):
        if ci:
            for j in range(p):
                entries[i + np_ * j] += ci
    for i, di in enumerate(d):
        if di:
            for j in range(q):
                entries[i + nq * j] += di
    return tuple(entries)


def block_relation(n: int, p: int, q: int, i: int) -> Tuple[ExpVec, ExpVec]:
    """
    The two sides ∑_{j<q} v⁽ᵖ⁾_{i+n_pq·j} and ∑_{j<p} v⁽ᵠ⁾_{i+n_pq·j}, equal whenever pq | n.
    """
    _, _, npq = _check_pair(n, p, q)
    lhs = zero_vector(n)
    for j in range(q):
        lhs = vec_add(lhs, generator_v(n, p, i + npq * j))
    rhs = zero_vector(n)
    for j in range(p):
        rhs = vec_add(rhs, generator_v(n, q, i + npq * j))
    return lhs, rhs


def sigma_kernel_vector(
    n: int, p: int, q: int, m: Sequence[int]
) -> Tuple[Tuple[int, ...], Tuple[int, ...]]:
    """The block-constant element (m repeated q times, −m repeated p times) of Ker σ."""
    _, _, npq = _check_pair(n, p, q)
    _check_length("m", m, npq)
    return tuple(m) * q, tuple(-x for x in m) * p


def block_constant_part(
    n: int, p: int, q: int, c: Sequence[int], d: Sequence[int]
) -> Optional[Tuple[int, ...]]:
    """
    Returns m when (c, d) is `sigma_kernel_vector(n, p, q, m)`, None otherwise.

    >>> block_constant_part(6, 2, 3, (2, 2, 2), (-2, -2))
    (2,)
    """
    _, _, npq = _check_pair(n, p, q)
    m = tuple(c[:npq])
    if sigma_kernel_vector(n, p, q, m) == (tuple(c), tuple(d)):
        return m
    return None


def sigma_kernel_basis(
    n: int, p: int, q: int
) -> List[Tuple[Tuple[int, ...], Tuple[int, ...]]]:
    """
    A basis of Ker σ over Q, scaled to integer vectors: the exact nullspace of the matrix
    with columns v⁽ᵖ⁾₀, …, v⁽ᵖ⁾_{nₚ−1}, v⁽ᵠ⁾₀, …, v⁽ᵠ⁾_{n_q−1}.

    >>> [block_constant_part(6, 2, 3, c, d) is not None for c, d in sigma_kernel_basis(6, 2, 3)]
    [True]
    """
    np_, nq, _ = _check_pair(n, p, q)
    columns = [generator_v(n, p, i) for i in range(np_)]
    columns += [generator_v(n, q, j) for j in range(nq)]
    kernel = []
    for vector in Matrix([list(v) for v in columns]).T.nullspace():
        scale = math.lcm(*(int(e.q) for e in vector))
        entries = tuple(int(e * scale) for e in vector)
        kernel.append((entries[:np_], entries[np_:]))
    return kernel


@dataclass
class Decomposition:
    """
    A nonnegative integer combination of generators v⁽ᵖ⁾ᵢ.

    Attributes
    ----------
    n : int
        The order.

    coeffs : Dict[GeneratorId, int]
        Strictly positive coefficients, absent generators have coefficient zero.
    """

    n: int
    coeffs: Dict[GeneratorId, int] = field(default_factory=dict)

    def reconstruct(self) -> ExpVec:
        total = zero_vector(self.n)
        for gid, k in self.coeffs.items():
            total = vec_add(total, vec_scale(k, gid.vector(self.n)))
        return total

    def as_multiset(self) -> Tuple[GeneratorId, ...]:
        """Each generator repeated by its coefficient, in sorted order."""
        return tuple(
            gid for gid in sorted(self.coeffs) for _ in range(self.coeffs[gid])
        )

    def total(self) -> int:
        return sum(self.coeffs.values())

    def __str__(self) -> str:
        parts = []
        for gid in sorted(self.coeffs):
            k = self.coeffs[gid]
            name = f"v({gid.p},{gid.i})"
            parts.append(name if k == 1 else f"{k}*{name}")
        return " + ".join(parts) if parts else "0"


def two_prime_basis(n: int) -> List[Tuple[GeneratorId, ExpVec]]:
    """
    v⁽ᵖ⁾ᵢ for i < nₚ and v⁽ᵠ⁾ᵢ for i < n_q − n_pq, for the two primes p < q of n. These are
    n − φ(n) linearly independent vectors, a basis of Vₙ.
    """
    primes = prime_factors(n)
    if len(primes) != 2:
        raise InvalidOrder(f"{n} does not have exactly two prime factors")
    p, q = primes
    np_, nq, npq = n // p, n // q, n // (p * q)
    return [(GeneratorId(p, i), generator_v(n, p, i)) for i in range(np_)] + [
        (GeneratorId(q, i), generator_v(n, q, i)) for i in range(nq - npq)
    ]


@lru_cache(maxsize=None)
def _solver(n: int) -> Tuple[Tuple[int, ...], Tuple[Tuple[Fraction, ...], ...]]:
    """Independent rows of the two-prime basis matrix and the exact inverse of that square block."""
    columns = [v for _, v in two_prime_basis(n)]
    basis = Matrix(columns).T
    _, pivots = basis.T.rref()
    rows = tuple(pivots)
    if len(rows) != len(columns):
        raise InvariantViolation(f"the two-prime generators of order {n} are not independent")
    inverse = basis.extract(list(rows), list(range(len(columns)))).inv()
    return rows, tuple(
        tuple(Fraction(int(e.p), int(e.q)) for e in inverse.row(r))
        for r in range(inverse.rows)
    )


def _solve_two_prime(n: int, alpha: ExpVec) -> List[Fraction]:
    rows, inverse = _solver(n)
    target = [alpha[r] for r in rows]
    return [sum((a * t for a, t in zip(row, target)), Fraction(0)) for row in inverse]


def _validate_point(alpha: Sequence[int], n: Optional[int]) -> ExpVec:
    alpha = tuple(alpha)
    if n is None:
        n = len(alpha)
    _check_order(n)
    _check_length("alpha", alpha, n)
    if any(a < 0 for a in alpha):
        raise NegativeEntry(f"exponent vector {alpha} has a negative entry")
    if not in_Vn(alpha):
        raise NotInLattice(f"{alpha} is not in V_{n}")
    return alpha


def _as_count(value: Fraction, what: str) -> int:
    if value.denominator != 1 or value < 0:
        raise InvariantViolation(f"{what} should be a nonnegative integer, got {value}")
    return int(value)


def decompose(alpha: Sequence[int], n: Optional[int] = None) -> Decomposition:
    """
    Writes a lattice point α ∈ Vₙ ∩ Z≥0ⁿ as a nonnegative integer combination of the
    generators v⁽ᵖ⁾ᵢ, for n with at most two prime factors.

    With one prime p the coefficients are αᵢ for i < nₚ. With two primes p < q, α is first
    solved exactly in the basis `two_prime_basis(n)` and then rebalanced through the block
    relations so that every coefficient is a nonnegative integer. Both properties are
    checked, together with the reconstruction, before returning.

    >>> print(decompose((2, 1, 2, 1)))
    2*v(2,0) + v(2,1)
    """
    primes = prime_factors(len(alpha) if n is None else n)
    if len(primes) > 2:
        raise TooManyPrimeFactors(
            f"{n or len(alpha)} has {len(primes)} prime factors, decompositions exist only for at most two"
        )
    alpha = _validate_point(alpha, n)
    n = len(alpha)
    coeffs: Dict[GeneratorId, int] = {}

    if len(primes) == 1:
        p = primes[0]
        for i in range(n // p):
            if alpha[i]:
                coeffs[GeneratorId(p, i)] = alpha[i]
    elif len(primes) == 2:
        p, q = primes
        np_, nq, npq = n // p, n // q, n // (p * q)
        solution = _solve_two_prime(n, alpha)
        c, d = solution[:np_], solution[np_:]
        for i in range(npq):
            floor = min(c[i + npq * j] for j in range(q))
            for j in range(q):
                k = _as_count(c[i + npq * j] - floor, f"coefficient of v({p},{i + npq * j})")
                if k:
                    coeffs[GeneratorId(p, i + npq * j)] = k
            for j in range(p - 1):
                k = _as_count(floor + d[i + npq * j], f"coefficient of v({q},{i + npq * j})")
                if k:
                    coeffs[GeneratorId(q, i + npq * j)] = k
            k = _as_count(floor, f"coefficient of v({q},{i + nq - npq})")
            if k:
                coeffs[GeneratorId(q, i + nq - npq)] = k

    result = Decomposition(n, coeffs)
    if result.reconstruct() != alpha:
        raise InvariantViolation(f"decomposition of {alpha} does not reconstruct it")
    return result


def counterexample(n: int) -> ExpVec:
    """
    A point of Vₙ ∩ Z≥0ⁿ outside the monoid spanned by the generators, for n with at least
    three prime factors p < q < r (the three smallest):

        α′ = ∑_{j=2}^{p} v⁽ᵠ⁾_{nₚj} + v⁽ʳ⁾_{nₚ+n_q} − v⁽ᵖ⁾_{n_q}

    >>> counterexample(30) == tuple(1 if i in (0, 1, 7, 13, 19, 20) else 0 for i in range(30))
    True
    """
    primes = prime_factors(n)
    if len(primes) < 3:
        raise TooFewPrimeFactors(f"{n} has {len(primes)} prime factors, at least three are needed")
    p, q, r = primes[:3]
    np_, nq = n // p, n // q
    alpha = zero_vector(n)
    for j in range(2, p + 1):
        alpha = vec_add(alpha, generator_v(n, q, np_ * j))
    alpha = vec_add(alpha, generator_v(n, r, np_ + nq))
    alpha = vec_sub(alpha, generator_v(n, p, nq))
    if any(a < 0 for a in alpha) or not in_Vn(alpha):
        raise InvariantViolation(f"counterexample for {n} is not a lattice point: {alpha}")
    return alpha


def tau(
    n: int, coeffs: Union[Mapping[int, Sequence[int]], Sequence[Sequence[int]]]
) -> ExpVec:
    """
    τ(c) = ∑ₚ ∑ᵢ c⁽ᵖ⁾ᵢ v⁽ᵖ⁾ᵢ, one coefficient vector per prime factor of n. A sequence is read
    in ascending prime order, a mapping is keyed by the prime.
    """
    primes = prime_factors(n)
    if isinstance(coeffs, Mapping):
        if sorted(coeffs) != primes:
            raise LengthMismatch(f"expected coefficient vectors for the primes {primes}, got {sorted(coeffs)}")
        vectors = [coeffs[p] for p in primes]
    else:
        vectors = list(coeffs)
        if len(vectors) != len(primes):
            raise LengthMismatch(f"expected {len(primes)} coefficient vectors, got {len(vectors)}")
    total = zero_vector(n)
    for p, c in zip(primes, vectors):
        _check_length(f"c({p})", c, n // p)
        for i, ci in enumerate(c):
            if ci:
                total = vec_add(total, vec_scale(ci, generator_v(n, p, i)))
    return total


def lattice_points(n: int, max_degree: int) -> Iterator[ExpVec]:
    """
    Every α ∈ Vₙ ∩ Z≥0ⁿ with total degree at most `max_degree`, degree by degree and
    lexicographically descending within a degree.
    """
    _check_order(n)
    coords = [zeta_power_coords(n, i) for i in range(n)]
    phi = totient_degree(n)

    def fill(i: int, left: int, acc: List[int], prefix: List[int]) -> Iterator[ExpVec]:
        if i == n - 1:
            final = [a + left * z for a, z in zip(acc, coords[i])]
            if not any(final):
                yield tuple(prefix + [left])
            return
        for k in range(left, -1, -1):
            yield from fill(
                i + 1,
                left - k,
                [a + k * z for a, z in zip(acc, coords[i])] if k else acc,
                prefix + [k],
            )

    for degree in range(max_degree + 1):
        yield from fill(0, degree, [0] * phi, [])


@dataclass(frozen=True)
class Member:
    decomposition: Decomposition


@dataclass(frozen=True)
class NonMember:
    bound: int


@dataclass(frozen=True)
class BudgetExceeded:
    bound: int


OracleResult = Union[Member, NonMember, BudgetExceeded]


def monoid_member_oracle(
    alpha: Sequence[int], n: Optional[int] = None, budget: int = 64
) -> OracleResult:
    """
    Exhaustive search for a nonnegative integer combination of the generators equal to α.

    Every generator has degree at least two, so no combination uses more than deg(α)/2 of
    them. The search is cut at `min(budget, deg(α)/2)` generators: `NonMember` is returned
    only when nothing was cut, `BudgetExceeded` otherwise.

    >>> monoid_member_oracle(counterexample(30))
    NonMember(bound=3)
    """
    alpha = tuple(alpha)
    if n is None:
        n = len(alpha)
    _check_length("alpha", alpha, n)
    if any(a < 0 for a in alpha):
        raise NegativeEntry(f"exponent vector {alpha} has a negative entry")
    bound = min(budget, sum(alpha) // 2)
    generators = [(gid, tuple(i for i, e in enumerate(v) if e)) for gid, v in generators_Tn(n)] if n > 1 else []
    covering: Dict[int, List[Tuple[GeneratorId, Tuple[int, ...]]]] = {
        k: [g for g in generators if k in g[1]] for k in range(n)
    }
    failed: Set[ExpVec] = set()
    truncated = False

    def search(remaining: List[int], used: int, chosen: List[GeneratorId]) -> bool:
        nonlocal truncated
        first = next((k for k, a in enumerate(remaining) if a > 0), None)
        if first is None:
            return True
        key = tuple(remaining)
        if key in failed:
            return False
        cut_here = False
        for gid, support in covering[first]:
            if any(remaining[s] < 1 for s in support):
                continue
            if used + 1 > bound:
                cut_here = True
                continue
            for s in support:
                remaining[s] -= 1
            chosen.append(gid)
            found = search(remaining, used + 1, chosen)
            if found:
                return True
            chosen.pop()
            for s in support:
                remaining[s] += 1
        if cut_here:
            truncated = True
        elif not truncated:
            failed.add(key)
        return False

    chosen: List[GeneratorId] = []
    if search(list(alpha), 0, chosen):
        coeffs: Dict[GeneratorId, int] = {}
        for gid in chosen:
            coeffs[gid] = coeffs.get(gid, 0) + 1
        return Member(Decomposition(n, coeffs))
    if truncated and bound < sum(alpha) // 2:
        return BudgetExceeded(bound)
    return NonMember(bound)


def conjugate_exponent(alpha: Sequence[int]) -> ExpVec:
    """
    (α₀, α_{n−1}, …, α₁): the Δ-multiplier of y^α is the D-multiplier of this vector.

    >>> conjugate_exponent((1, 2, 3, 4))
    (1, 4, 3, 2)
    """
    alpha = tuple(alpha)
    return alpha[:1] + alpha[:0:-1]

