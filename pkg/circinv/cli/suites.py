"""
Property suites run by `circinv verify-all`.

Each suite is a generator of `CaseResult`s over every order up to the requested bound,
wrapped in a `Check` that steps it in the thread pool. The suites run concurrently and are
reported sorted by name, whatever order they finish in.
"""
import itertools
import random
import time
from dataclasses import dataclass, field, replace
from math import gcd
from typing import Callable, Dict, Iterable, Iterator, List, Optional, Tuple

import sympy

from circinv.algebra.cyclotomic import CycElement, cyclotomic_poly, euler_phi, zeta_power
from circinv.algebra.multipoly import Basis, Poly, apply_operator, to_y
from circinv.config import Limits
from circinv.core.check import Check, gather_checks
from circinv.errors import InvariantViolation
from circinv.theory.circulant import (
    BlockSpec,
    circulant_det,
    verify_factorization,
    verify_monomial_identity,
)
from circinv.theory.ideal import (
    GenPoly,
    InKernel,
    NotInKernel,
    kernel_membership,
    kernel_rho_trivial,
    random_genpoly,
    relations,
    verify_certificate,
)
from circinv.theory.invariants import (
    GeneratorExpression,
    express_in_generators,
    gap_witness,
    generators_Rn,
    is_invariant,
    is_sl_invariant,
)
from circinv.theory.lattice import (
    Member,
    NonMember,
    basis_Sn,
    block_constant_part,
    block_relation,
    decompose,
    generators_Tn,
    in_Vn,
    lattice_points,
    monoid_member_oracle,
    prime_factors,
    rational_rank,
    sigma,
    sigma_kernel_basis,
    sigma_kernel_vector,
)
from circinv.utils.check import debug

FACTOR_X_MAX = 10
MONOMIAL_IDENTITY_MAX = 12
DECOMPOSE_MAX = 18
DECOMPOSE_DEGREE = 8
KERNEL_MAX = 18
PRIME_POWER_MAX = 27
OPERATOR_RANDOM_MAX = 6
LATTICE_SWEEP_MAX = 60
SIGMA_KERNEL_MAX = 36
SIGMA_BOX_MAX = 8
INVARIANT_RING_MAX = 12
INVARIANT_RING_X_MAX = 6
SL_DET_MAX = 8
SL_PRIME_MAX = 13
SL_X_MAX = 3
SL_CASES = 100


@dataclass(frozen=True)
class VerifyParams:
    """
    Attributes
    ----------
    n_max : int
        Largest order checked by every suite, each suite may cap it further for cost.

    samples : int
        Random samples per order for the randomized suites.
    """

    n_max: int
    limits: Limits = field(default_factory=Limits)
    samples: int = 20
    seed: int = 0


@dataclass
class CaseResult:
    """One checked case. `suite` is filled in by the runner from the registry name."""

    suite: str
    case: str
    passed: bool
    detail: str = ""
    elapsed_ms: float = 0.0

    def __str__(self) -> str:
        status = "ok" if self.passed else "FAILED"
        return f"{self.case}: {status}" + (f" ({self.detail})" if self.detail else "")


@dataclass
class SuiteReport:
    """
    Attributes
    ----------
    failures : List[CaseResult]
        Every failing case, each carrying its witness in `detail`.

    error : Optional[str]
        Set when the suite raised instead of finishing.
    """

    name: str
    cases: int = 0
    failures: List[CaseResult] = field(default_factory=list)
    error: Optional[str] = None
    elapsed_ms: float = 0.0

    @property
    def passed(self) -> bool:
        return self.error is None and not self.failures

    def __str__(self) -> str:
        if self.error is not None:
            return f"{self.name}: error ({self.error})"
        if self.failures:
            first = self.failures[0]
            return f"{self.name}: fail ({len(self.failures)}/{self.cases} cases, first: {first})"
        return f"{self.name}: pass ({self.cases} cases)"


Outcome = Tuple[bool, str]
Suite = Callable[[VerifyParams], Iterator[CaseResult]]


def _case(case: str, run: Callable[[], Outcome]) -> CaseResult:
    start = time.perf_counter()
    passed, detail = run()
    elapsed = (time.perf_counter() - start) * 1000
    return CaseResult("", case, passed, "" if passed else detail, elapsed)


def _orders(params: VerifyParams, cap: int, start: int = 2) -> range:
    return range(start, min(params.n_max, cap) + 1)


def _coprime_pairs(n: int) -> List[Tuple[int, int]]:
    divisors = sympy.divisors(n)[1:]
    return [
        (p, q)
        for p in divisors
        for q in divisors
        if p < q and gcd(p, q) == 1 and n % (p * q) == 0
    ]


def _nonzero(rng: random.Random, bound: int = 5) -> int:
    return rng.choice([k for k in range(-bound, bound + 1) if k])


def _random_poly(rng: random.Random, n: int, basis: Basis, terms: int = 3) -> Poly:
    f = Poly.zero(n, basis)
    for _ in range(terms):
        exponents = [0] * n
        for _ in range(rng.randint(0, 3)):
            exponents[rng.randrange(n)] += 1
        f = f + Poly.monomial(n, basis, exponents, rng.randint(-4, 4))
    return f


def _non_invariant_monomial(rng: random.Random, n: int, basis: Basis) -> Poly:
    """A nonconstant monomial outside the invariant ring, scaled by a nonzero integer."""
    while True:
        exponents = [0] * n
        for _ in range(rng.randint(1, 3)):
            exponents[rng.randrange(n)] += 1
        if basis == Basis.X or not in_Vn(exponents):
            return Poly.monomial(n, basis, exponents, _nonzero(rng))


def _random_generator_expression(
    rng: random.Random, n: int, terms: int, max_factors: int = 3
) -> GeneratorExpression:
    gids = generators_Rn(n)
    expression = GeneratorExpression(n)
    for _ in range(terms):
        factors = tuple(rng.choice(gids) for _ in range(rng.randint(0, max_factors)))
        expression.add_term(factors, CycElement.rational(n, _nonzero(rng)))
    return expression


def cyclotomic_suite(params: VerifyParams) -> Iterator[CaseResult]:
    x = sympy.Symbol("x")
    for n in _orders(params, params.n_max, start=1):

        def run(n: int = n) -> Outcome:
            expected = tuple(int(c) for c in reversed(sympy.Poly(sympy.cyclotomic_poly(n, x), x).all_coeffs()))
            got = cyclotomic_poly(n)
            if got.coeffs != expected:
                return False, f"Phi_{n} = {got}, expected coefficients {expected}"
            if got.degree != euler_phi(n) or euler_phi(n) != int(sympy.totient(n)):
                return False, f"degree {got.degree} and phi({n}) = {euler_phi(n)} disagree"
            if zeta_power(n, n) != CycElement.one(n):
                return False, f"zeta^{n} != 1"
            return True, ""

        yield _case(f"n={n}", run)


def lattice_rank_suite(params: VerifyParams) -> Iterator[CaseResult]:
    for n in _orders(params, params.n_max):

        def run(n: int = n) -> Outcome:
            basis = basis_Sn(n)
            rank = rational_rank(basis)
            if rank != n - euler_phi(n):
                return False, f"rank {rank} != {n - euler_phi(n)}"
            outside = next((v for v in basis if not in_Vn(v)), None)
            if outside is not None:
                return False, f"{outside} is not in V_{n}"
            return True, ""

        yield _case(f"n={n}", run)


def generators_in_lattice_suite(params: VerifyParams) -> Iterator[CaseResult]:
    for n in _orders(params, LATTICE_SWEEP_MAX):

        def run(n: int = n) -> Outcome:
            for gid, v in generators_Tn(n):
                if min(v) < 0 or not in_Vn(v):
                    return False, f"{gid} = {v} is not a nonnegative point of V_{n}"
            return True, ""

        yield _case(f"n={n}", run)


def block_relations_suite(params: VerifyParams) -> Iterator[CaseResult]:
    rng = random.Random(params.seed)
    for n in _orders(params, LATTICE_SWEEP_MAX):
        for p, q in _coprime_pairs(n):

            def run(n: int = n, p: int = p, q: int = q) -> Outcome:
                npq = n // (p * q)
                for i in range(npq):
                    lhs, rhs = block_relation(n, p, q, i)
                    if lhs != rhs:
                        return False, f"the block relation at i={i} gives {lhs} and {rhs}"
                for _ in range(params.samples):
                    m = tuple(rng.randint(-3, 3) for _ in range(npq))
                    c, d = sigma_kernel_vector(n, p, q, m)
                    if any(sigma(n, p, q, c, d)):
                        return False, f"sigma does not vanish on the block-constant vector of {m}"
                    if block_constant_part(n, p, q, c, d) != m:
                        return False, f"the block-constant part of {(c, d)} is not {m}"
                return True, ""

            yield _case(f"n={n} p={p} q={q}", run)


def _sigma_samples(
    rng: random.Random, n: int, p: int, q: int, samples: int
) -> Iterator[Tuple[Tuple[int, ...], Tuple[int, ...]]]:
    np_, nq, npq = n // p, n // q, n // (p * q)
    for _ in range(samples):
        c, d = sigma_kernel_vector(n, p, q, [rng.randint(-2, 2) for _ in range(npq)])
        yield c, d
        entries = list(c + d)
        entries[rng.randrange(len(entries))] += rng.choice((-1, 1))
        yield tuple(entries[:np_]), tuple(entries[np_:])
        box = [rng.randint(-1, 1) for _ in range(np_ + nq)]
        yield tuple(box[:np_]), tuple(box[np_:])


def sigma_kernel_suite(params: VerifyParams) -> Iterator[CaseResult]:
    rng = random.Random(params.seed)
    for n in _orders(params, SIGMA_KERNEL_MAX):
        primes = prime_factors(n)
        if len(primes) != 2:
            continue
        p, q = primes

        def run(n: int = n, p: int = p, q: int = q) -> Outcome:
            np_, nq, npq = n // p, n // q, n // (p * q)
            kernel = sigma_kernel_basis(n, p, q)
            if len(kernel) != npq:
                return False, f"Ker sigma has dimension {len(kernel)}, expected {npq}"
            for c, d in kernel:
                if block_constant_part(n, p, q, c, d) is None:
                    return False, f"{(c, d)} lies in Ker sigma without being block-constant"
            candidates: Iterable[Tuple[Tuple[int, ...], Tuple[int, ...]]]
            if np_ + nq <= SIGMA_BOX_MAX:
                candidates = (
                    (cd[:np_], cd[np_:])
                    for cd in itertools.product((-1, 0, 1), repeat=np_ + nq)
                )
            else:
                candidates = _sigma_samples(rng, n, p, q, params.samples)
            for c, d in candidates:
                vanishes = not any(sigma(n, p, q, c, d))
                if vanishes != (block_constant_part(n, p, q, c, d) is not None):
                    return False, f"sigma{(c, d)} vanishing is {vanishes}, the block-constant form says otherwise"
            return True, ""

        yield _case(f"n={n} p={p} q={q}", run)


def factorization_suite(params: VerifyParams) -> Iterator[CaseResult]:
    for n in _orders(params, params.limits.max_n_y):
        for p in sympy.divisors(n)[1:]:
            bases = [Basis.Y]
            if n <= min(FACTOR_X_MAX, params.limits.max_n_x):
                bases.insert(0, Basis.X)
            for basis in bases:

                def run(n: int = n, p: int = p, basis: Basis = basis) -> Outcome:
                    report = verify_factorization(n, p, basis, params.limits)
                    return report.holds, f"first mismatch {report.first_mismatch}"

                yield _case(f"n={n} p={p} {basis.value}", run)


def monomial_identity_suite(params: VerifyParams) -> Iterator[CaseResult]:
    for n in _orders(params, min(MONOMIAL_IDENTITY_MAX, params.limits.max_n_x)):
        for p in sympy.divisors(n)[1:]:
            for i in range(n // p):
                spec = BlockSpec(n, p, i)
                yield _case(
                    f"n={n} p={p} i={i}",
                    lambda spec=spec: (
                        verify_monomial_identity(spec, limits=params.limits),
                        "block determinant is not its eigenbasis monomial",
                    ),
                )


def decomposition_suite(params: VerifyParams) -> Iterator[CaseResult]:
    for n in _orders(params, DECOMPOSE_MAX):
        if len(prime_factors(n)) > 2:
            continue

        def run(n: int = n) -> Outcome:
            for alpha in lattice_points(n, DECOMPOSE_DEGREE):
                if decompose(alpha, n).reconstruct() != alpha:
                    return False, f"decomposition of {alpha} does not reconstruct it"
                if not isinstance(monoid_member_oracle(alpha, n), Member):
                    return False, f"the oracle disagrees on {alpha}"
            return True, ""

        yield _case(f"n={n} degree<={DECOMPOSE_DEGREE}", run)


def counterexample_suite(params: VerifyParams) -> Iterator[CaseResult]:
    for n in _orders(params, params.n_max):
        if len(prime_factors(n)) < 3:
            continue

        def run(n: int = n) -> Outcome:
            witness = gap_witness(n)
            ok = witness.invariant and isinstance(witness.oracle, NonMember)
            return ok, f"invariant={witness.invariant} oracle={witness.oracle}"

        yield _case(f"n={n}", run)


def kernel_suite(params: VerifyParams) -> Iterator[CaseResult]:
    rng = random.Random(params.seed)
    for n in _orders(params, KERNEL_MAX):
        for p, q in _coprime_pairs(n):
            ts = relations(n, p, q)

            def run(n: int = n, p: int = p, q: int = q, ts: List[GenPoly] = ts) -> Outcome:
                for _ in range(params.samples):
                    F = GenPoly.zero(n, p, q)
                    for t in ts:
                        F = F + random_genpoly(rng, n, p, q, terms=2, max_degree=2) * t
                    result = kernel_membership(F, want_certificate=True)
                    if not isinstance(result, InKernel) or result.certificate is None:
                        return False, f"{F} was not certified"
                    if not verify_certificate(F, result.certificate):
                        return False, f"certificate of {F} does not verify"
                    G = F + GenPoly.z(n, p, q, rng.randrange(n // p))
                    if not isinstance(kernel_membership(G), NotInKernel):
                        return False, f"{G} was reported in the kernel"
                return True, ""

            yield _case(f"n={n} p={p} q={q}", run)
    for n in _orders(params, PRIME_POWER_MAX):
        primes = prime_factors(n)
        if len(primes) != 1:
            continue
        p = primes[0]
        yield _case(
            f"n={n} p={p} rho",
            lambda n=n, p=p: (
                kernel_rho_trivial(n, p, samples=4, seed=params.seed).holds,
                "rho has a nontrivial kernel",
            ),
        )


def operator_suite(params: VerifyParams) -> Iterator[CaseResult]:
    for n in _orders(params, params.limits.max_n_y):

        def eigenvalues(n: int = n) -> Outcome:
            for i in range(n):
                y = Poly.variable(n, Basis.Y, i)
                if apply_operator("D", y) != y.scale(zeta_power(n, i)):
                    return False, f"D(y{i}) != zeta^{i}*y{i}"
                if apply_operator("Delta", y) != y.scale(zeta_power(n, -i)):
                    return False, f"Delta(y{i}) != zeta^-{i}*y{i}"
            return True, ""

        yield _case(f"n={n} eigenvalues", eigenvalues)

    rng = random.Random(params.seed)
    for n in _orders(params, min(OPERATOR_RANDOM_MAX, params.limits.max_n_x)):

        def identities(n: int = n) -> Outcome:
            for _ in range(params.samples):
                f, g = _random_poly(rng, n, Basis.X), _random_poly(rng, n, Basis.X)
                for which in ("D", "Delta"):
                    lhs = apply_operator(which, f * g)  # type: ignore
                    rhs = apply_operator(which, f) * g + f * apply_operator(which, g)  # type: ignore
                    if lhs != rhs:
                        return False, f"{which} is not a derivation on {f} and {g}"
                    natural = to_y(apply_operator(which, f), params.limits)  # type: ignore
                    if natural != apply_operator(which, to_y(f, params.limits)):  # type: ignore
                        return False, f"{which} does not commute with the basis change on {f}"
            return True, ""

        yield _case(f"n={n} derivation and naturality", identities)


def invariant_ring_suite(params: VerifyParams) -> Iterator[CaseResult]:
    rng = random.Random(params.seed)
    for n in _orders(params, INVARIANT_RING_MAX):
        if len(prime_factors(n)) > 2:
            continue

        def round_trip(n: int = n) -> Outcome:
            for _ in range(params.samples):
                f = _random_generator_expression(rng, n, terms=rng.randint(1, 20)).evaluate(Basis.Y)
                back = express_in_generators(f, params.limits).evaluate(Basis.Y)
                if back != f:
                    return False, f"{f} is expressed as a polynomial evaluating to {back}"
            return True, ""

        yield _case(f"n={n} round trip", round_trip)

        def agreement(n: int = n) -> Outcome:
            bases = [Basis.Y]
            if n <= min(INVARIANT_RING_X_MAX, params.limits.max_n_x):
                bases.append(Basis.X)
            for basis in bases:
                for k in range(params.samples):
                    expression = _random_generator_expression(rng, n, terms=2, max_factors=2)
                    f = expression.evaluate(basis, params.limits)
                    built_invariant = k % 2 == 0
                    if not built_invariant:
                        f = f + _non_invariant_monomial(rng, n, basis)
                    try:
                        invariant = is_invariant(f).invariant
                    except InvariantViolation as e:
                        return False, str(e)
                    if invariant != built_invariant:
                        return False, f"{f} is reported invariant={invariant}"
                    if basis == Basis.X and is_invariant(to_y(f, params.limits)).invariant != invariant:
                        return False, f"the invariance of {f} depends on the basis"
            return True, ""

        yield _case(f"n={n} D and Delta agree", agreement)


def sl_suite(params: VerifyParams) -> Iterator[CaseResult]:
    for n in _orders(params, min(SL_DET_MAX, params.limits.max_n_x)):
        yield _case(
            f"n={n} determinant",
            lambda n=n: (
                is_sl_invariant(circulant_det(n, params.limits), params.limits),
                f"Theta_{n} is not SL-invariant",
            ),
        )
    rng = random.Random(params.seed)
    for n in _orders(params, SL_PRIME_MAX):
        if not sympy.isprime(n):
            continue

        def agree(n: int = n) -> Outcome:
            basis = Basis.X if n <= min(SL_X_MAX, params.limits.max_n_x) else Basis.Y
            theta = circulant_det(n, params.limits) if basis == Basis.X else Poly.monomial(n, Basis.Y, [1] * n)
            powers = [Poly.constant(n, basis, 1), theta, theta ** 2]
            for _ in range(SL_CASES):
                invariant = Poly.zero(n, basis)
                for power in powers:
                    invariant = invariant + power * _nonzero(rng)
                perturbed = invariant + _non_invariant_monomial(rng, n, basis)
                for f, expected in ((invariant, True), (perturbed, False)):
                    sl, d = is_sl_invariant(f, params.limits), is_invariant(f).invariant
                    if sl != d:
                        return False, f"SL-invariance {sl} and invariance {d} disagree on {f}"
                    if sl != expected:
                        return False, f"{f} is reported SL-invariant={sl}"
            return True, ""

        yield _case(f"n={n} prime agreement", agree)


SUITES: Dict[str, Suite] = {
    "block-relations": block_relations_suite,
    "counterexample": counterexample_suite,
    "cyclotomic": cyclotomic_suite,
    "decomposition": decomposition_suite,
    "factorization": factorization_suite,
    "generators-in-lattice": generators_in_lattice_suite,
    "invariant-ring": invariant_ring_suite,
    "kernel": kernel_suite,
    "lattice-rank": lattice_rank_suite,
    "monomial-identity": monomial_identity_suite,
    "operators": operator_suite,
    "sigma-kernel": sigma_kernel_suite,
    "sl-invariance": sl_suite,
}


def summarize(name: str, cases: List[CaseResult]) -> SuiteReport:
    return SuiteReport(
        name=name,
        cases=len(cases),
        failures=[case for case in cases if not case.passed],
        elapsed_ms=sum(case.elapsed_ms for case in cases),
    )


def suite_check(name: str, suite: Suite) -> Check[VerifyParams, SuiteReport]:
    """
    A suite as a check with one final `SuiteReport`: every case is tagged with the suite name
    as it arrives, the cases are summarized once the suite is done, and an exception becomes
    an errored report instead of aborting the other suites.
    """
    return (
        Check[VerifyParams, CaseResult](name, suite, in_executor=True)
        .map(lambda case: replace(case, suite=name))
        .and_then(lambda cases: summarize(name, list(cases)))
        .on_error(lambda e: SuiteReport(name, error=f"{type(e).__name__}: {e}"))
    )  # type: ignore


async def run_suites(
    params: VerifyParams,
    names: Optional[List[str]] = None,
    with_debug: bool = False,
) -> List[SuiteReport]:
    """
    Runs the selected suites (all by default) concurrently, sorted by name.

    >>> import asyncio
    >>> [report.passed for report in asyncio.run(run_suites(VerifyParams(4), ["lattice-rank"]))]
    [True]
    """
    selected = sorted(names if names is not None else SUITES)
    checks = []
    for name in selected:
        check = suite_check(name, SUITES[name])
        checks.append(debug(check) if with_debug else check)
    outputs = await gather_checks(checks, params)
    return [output[-1] for output in outputs]
