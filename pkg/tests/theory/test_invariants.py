import unittest

from hypothesis import given, settings
from hypothesis import strategies as st

from circinv.algebra.cyclotomic import CycElement
from circinv.algebra.expression import parse_poly
from circinv.algebra.multipoly import Basis, Poly, to_y
from circinv.errors import NotInvariant, TooFewPrimeFactors, TooManyPrimeFactors
from circinv.theory.circulant import BlockSpec, circulant_det, theta_block
from circinv.theory.invariants import (
    GeneratorExpression,
    InvarianceResult,
    express_in_generators,
    format_multiset,
    gap_witness,
    generator_poly,
    generators_Rn,
    is_invariant,
    is_sl_invariant,
)
from circinv.theory.lattice import GeneratorId, NonMember

PRIME_ORDERS = [2, 3, 5, 7, 11, 13]


@st.composite
def generator_expressions(draw):
    n = draw(st.sampled_from([9, 12]))
    gids = generators_Rn(n)
    terms = draw(
        st.lists(
            st.tuples(st.lists(st.sampled_from(gids), max_size=3), st.integers(-5, 5).filter(bool)),
            min_size=1,
            max_size=20,
        )
    )
    expression = GeneratorExpression(n)
    for factors, coeff in terms:
        expression.add_term(tuple(factors), CycElement.rational(n, coeff))
    return expression


class IsInvariantTestCase(unittest.TestCase):
    def test_examples(self):
        self.assertEqual(is_invariant(parse_poly("x0^2 - x1^2", 2, Basis.X)), InvarianceResult(True, True))
        self.assertEqual(is_invariant(parse_poly("x0", 2, Basis.X)), InvarianceResult(False, False))
        self.assertTrue(is_invariant(parse_poly("y0*y2 + y1^2*y3^2", 4, Basis.Y)))
        self.assertFalse(is_invariant(parse_poly("y0*y1", 4, Basis.Y)))

    def test_circulant_determinants_are_invariant(self):
        for n in range(1, 7):
            self.assertTrue(is_invariant(circulant_det(n)), n)

    def test_block_determinants_are_invariant(self):
        for n in (4, 6, 8):
            for gid in generators_Rn(n):
                self.assertTrue(is_invariant(generator_poly(n, gid, Basis.X)), (n, gid))


class ExpressTestCase(unittest.TestCase):
    def test_difference_of_squares(self):
        self.assertEqual(str(express_in_generators(parse_poly("x0^2 - x1^2", 2, Basis.X))), "T(2,0)")

    def test_circulant_determinant_of_order_6(self):
        expression = express_in_generators(circulant_det(6))
        self.assertEqual(str(expression), "T(3,0)*T(3,1)")

    def test_it_keeps_coefficients(self):
        f = parse_poly("y0*y2 + 3*y1^2*y3^2", 4, Basis.Y)
        expression = express_in_generators(f)
        self.assertEqual(str(expression), "3*T(2,1)^2 + T(2,0)")
        self.assertEqual(expression.evaluate(), f)

    def test_expressions_evaluate_back(self):
        x0, x1, x2, x3 = (Poly.variable(4, Basis.X, i) for i in range(4))
        f = (x0 + x2) ** 2 - (x1 + x3) ** 2 + 2 * circulant_det(4) - 1
        expression = express_in_generators(f)
        self.assertEqual(expression.evaluate(Basis.X), f)
        self.assertEqual(expression.evaluate(Basis.Y), to_y(f))
        again = express_in_generators(expression.evaluate(Basis.Y))
        self.assertEqual(again.terms, expression.terms)

    def test_generator_polynomials_express_back(self):
        t20, t21 = GeneratorId(2, 0), GeneratorId(2, 1)
        expression = GeneratorExpression(4)
        expression.add_term((t20, t20), CycElement.one(4))
        expression.add_term((t21,), CycElement.rational(4, 5))
        again = express_in_generators(expression.evaluate(Basis.X))
        self.assertEqual(again.terms, expression.terms)
        self.assertEqual(str(again), "T(2,0)^2 + 5*T(2,1)")

    @settings(max_examples=200, deadline=None)
    @given(generator_expressions())
    def test_random_generator_polynomials_express_back(self, expression):
        f = expression.evaluate(Basis.Y)
        self.assertTrue(is_invariant(f))
        self.assertEqual(express_in_generators(f).evaluate(Basis.Y), f)

    def test_it_rejects_non_invariants(self):
        with self.assertRaises(NotInvariant):
            express_in_generators(parse_poly("x0", 2, Basis.X))

    def test_it_needs_at_most_two_primes(self):
        with self.assertRaises(TooManyPrimeFactors):
            express_in_generators(gap_witness(30).monomial)


class GeneratorsTestCase(unittest.TestCase):
    def test_generators_Rn(self):
        self.assertEqual(
            generators_Rn(6),
            [GeneratorId(2, 0), GeneratorId(2, 1), GeneratorId(2, 2), GeneratorId(3, 0), GeneratorId(3, 1)],
        )

    def test_generator_poly(self):
        self.assertEqual(generator_poly(6, GeneratorId(2, 0)), Poly.monomial(6, Basis.Y, (1, 0, 0, 1, 0, 0)))
        self.assertEqual(generator_poly(6, GeneratorId(3, 1), Basis.X), theta_block(BlockSpec(6, 3, 1)))

    def test_format_multiset(self):
        gids = (GeneratorId(3, 1), GeneratorId(2, 0), GeneratorId(2, 0))
        self.assertEqual(format_multiset(gids), "T(2,0)^2*T(3,1)")
        self.assertEqual(format_multiset(()), "")

    def test_terms_cancel(self):
        expression = GeneratorExpression(4)
        expression.add_term((GeneratorId(2, 0),), CycElement.one(4))
        expression.add_term((GeneratorId(2, 0),), -CycElement.one(4))
        self.assertEqual(expression.terms, {})
        self.assertEqual(str(expression), "0")


class GapWitnessTestCase(unittest.TestCase):
    def test_order_30(self):
        witness = gap_witness(30)
        self.assertEqual(str(witness.monomial), "y0*y1*y7*y13*y19*y20")
        self.assertTrue(witness.invariant)
        self.assertIsInstance(witness.oracle, NonMember)
        self.assertFalse(witness.in_Rn)

    def test_order_60(self):
        witness = gap_witness(60)
        self.assertTrue(witness.invariant)
        self.assertFalse(witness.in_Rn)

    def test_it_needs_three_primes(self):
        with self.assertRaises(TooFewPrimeFactors):
            gap_witness(6)


class SLInvariantTestCase(unittest.TestCase):
    def test_examples(self):
        self.assertTrue(is_sl_invariant(circulant_det(3)))
        self.assertTrue(is_sl_invariant(parse_poly("x0^2 - x1^2", 2, Basis.X)))
        self.assertTrue(is_sl_invariant(Poly.monomial(4, Basis.Y, (2, 2, 2, 2)) + 7))
        self.assertFalse(is_sl_invariant(Poly.monomial(4, Basis.Y, (1, 0, 1, 0))))

    def test_sl_invariants_are_invariant(self):
        f = circulant_det(4) ** 2 - circulant_det(4)
        self.assertTrue(is_sl_invariant(f))
        self.assertTrue(is_invariant(f))

    @settings(max_examples=300, deadline=None)
    @given(
        st.sampled_from(PRIME_ORDERS),
        st.lists(st.integers(-5, 5), min_size=3, max_size=3),
        st.lists(st.integers(0, 3), min_size=13, max_size=13),
        st.integers(-5, 5).filter(bool),
    )
    def test_on_prime_orders_sl_invariance_is_invariance(self, n, coeffs, exponents, scale):
        theta = Poly.monomial(n, Basis.Y, [1] * n)
        f = Poly.zero(n, Basis.Y)
        for k, c in enumerate(coeffs):
            f = f + theta ** k * c
        beta = exponents[:n]
        g = f + Poly.monomial(n, Basis.Y, beta, scale)
        for h in (f, g):
            self.assertEqual(is_sl_invariant(h), is_invariant(h).invariant, str(h))
        self.assertTrue(is_sl_invariant(f))
        self.assertEqual(is_sl_invariant(g), len(set(beta)) == 1)

    def test_on_prime_orders_sl_invariance_is_invariance_in_x(self):
        for n in (2, 3):
            theta = circulant_det(n)
            f = theta ** 2 * 2 - theta * 3 + 5
            self.assertTrue(is_sl_invariant(f))
            self.assertTrue(is_invariant(f))
            for i in range(n):
                g = f + Poly.variable(n, Basis.X, i) * Poly.variable(n, Basis.X, (i + 1) % n)
                self.assertFalse(is_sl_invariant(g))
                self.assertFalse(is_invariant(g))
