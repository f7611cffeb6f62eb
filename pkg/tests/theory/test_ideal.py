import random
import unittest

import pytest

from circinv.algebra.multipoly import Basis, Poly
from circinv.errors import (
    BasisMismatch,
    IndexOutOfRange,
    LengthMismatch,
    NegativeEntry,
    NotADivisor,
    NotCoprime,
    PolySyntaxError,
)
from circinv.theory.ideal import (
    Certificate,
    GenPoly,
    InKernel,
    NotInKernel,
    fiber_sums,
    kernel_membership,
    kernel_rho_trivial,
    parse_genpoly,
    random_genpoly,
    relations,
    rewrite_monomial,
    rho_apply,
    rho_prime_apply,
    verify_certificate,
)


def kernel_element(rng: random.Random, n: int, p: int, q: int) -> GenPoly:
    F = GenPoly.zero(n, p, q)
    for t in relations(n, p, q):
        F = F + random_genpoly(rng, n, p, q, terms=3, max_degree=2) * t
    return F


class RelationsTestCase(unittest.TestCase):
    def test_examples(self):
        self.assertEqual([str(t) for t in relations(12, 2, 3)], ["z0*z2*z4 - w0*w2", "z1*z3*z5 - w1*w3"])
        self.assertEqual([str(t) for t in relations(6, 2, 3)], ["z0*z1*z2 - w0*w1"])
        self.assertEqual(len(relations(30, 3, 5)), 2)

    def test_relations_are_in_the_kernel(self):
        for n, p, q in ((6, 2, 3), (12, 3, 4), (30, 2, 15), (30, 3, 5)):
            for t in relations(n, p, q):
                self.assertTrue(rho_prime_apply(t).is_zero(), (n, p, q))

    def test_parameter_errors(self):
        with self.assertRaises(NotCoprime):
            relations(6, 2, 4)
        with self.assertRaises(NotCoprime):
            GenPoly(12, 2, 4)
        with self.assertRaises(NotADivisor):
            relations(6, 2, 5)
        with self.assertRaises(NotADivisor):
            relations(6, 4, 3)


class GenPolyTestCase(unittest.TestCase):
    def test_parse_and_print(self):
        self.assertEqual(str(parse_genpoly("w0*w2 - z0*z2*z4", 12, 2, 3)), "-z0*z2*z4 + w0*w2")
        z0 = GenPoly.z(6, 2, 3, 0)
        w1 = GenPoly.w(6, 2, 3, 1)
        self.assertEqual(parse_genpoly("2*z0^2*w1 + 1", 6, 2, 3), 2 * z0 ** 2 * w1 + 1)
        self.assertEqual(parse_genpoly("z1 - z1", 6, 2), GenPoly.zero(6, 2))

    def test_parse_errors(self):
        with self.assertRaises(PolySyntaxError):
            parse_genpoly("w0", 6, 2)
        with self.assertRaises(PolySyntaxError):
            parse_genpoly("x0", 6, 2, 3)
        with self.assertRaises(IndexOutOfRange):
            parse_genpoly("z3", 6, 2, 3)

    def test_sizes(self):
        F = GenPoly.zero(30, 2, 3)
        self.assertEqual((F.n_p, F.n_q, F.n_pq), (15, 10, 5))
        self.assertEqual(GenPoly.zero(6, 2).n_q, 0)

    def test_construction_checks(self):
        with self.assertRaises(LengthMismatch):
            GenPoly(6, 2, 3, {((1, 0), (0, 0)): 1})
        with self.assertRaises(NegativeEntry):
            GenPoly(6, 2, 3, {((1, 0, -1), (0, 0)): 1})


class RhoTestCase(unittest.TestCase):
    def test_images(self):
        self.assertEqual(str(rho_prime_apply(parse_genpoly("z0", 6, 2, 3))), "y0*y3")
        self.assertEqual(str(rho_prime_apply(parse_genpoly("w1", 6, 2, 3))), "y1*y3*y5")
        self.assertEqual(rho_prime_apply(GenPoly.constant(6, 2, 3, 5)), Poly.constant(6, Basis.Y, 5))
        self.assertEqual(str(rho_apply(parse_genpoly("z0*z2", 6, 2))), "y0*y2*y3*y5")

    def test_rho_is_only_for_z_variables(self):
        with self.assertRaises(BasisMismatch):
            rho_apply(parse_genpoly("w0", 6, 2, 3))

    def test_fiber_sums(self):
        F = parse_genpoly("z0*z1*z2 + 2*w0*w1 + z0", 6, 2, 3)
        sums = fiber_sums(F)
        self.assertEqual(sums[(1, 1, 1, 1, 1, 1)], 3)
        self.assertEqual(sums[(1, 0, 0, 1, 0, 0)], 1)

    def test_kernel_of_rho_is_trivial(self):
        report = kernel_rho_trivial(6, 2)
        self.assertEqual(report.supports, [(0, 3), (1, 4), (2, 5)])
        self.assertTrue(report.holds)
        self.assertEqual(kernel_rho_trivial(9, 3).supports, [(0, 3, 6), (1, 4, 7), (2, 5, 8)])
        self.assertEqual(kernel_rho_trivial(4, 2).supports, [(0, 2), (1, 3)])
        for n, p in ((12, 2), (12, 3), (30, 5), (8, 8)):
            self.assertTrue(kernel_rho_trivial(n, p, samples=8), (n, p))


class KernelTestCase(unittest.TestCase):
    def test_in_kernel_with_certificate(self):
        F = parse_genpoly("z0*z1*z2*w0 - w0^2*w1", 6, 2, 3)
        result = kernel_membership(F, want_certificate=True)
        self.assertIsInstance(result, InKernel)
        self.assertEqual(str(result.certificate), "g0 = w0")

    def test_relation_certifies_itself(self):
        t0 = relations(6, 2, 3)[0]
        result = kernel_membership(t0, want_certificate=True)
        self.assertEqual(str(result.certificate), "g0 = 1")

    def test_negated_relation(self):
        F = parse_genpoly("w0*w2 - z0*z2*z4", 12, 2, 3)
        result = kernel_membership(F, want_certificate=True)
        self.assertEqual(str(result.certificate), "g0 = -1\ng1 = 0")
        self.assertTrue(verify_certificate(F, result.certificate))

    def test_without_certificate(self):
        result = kernel_membership(parse_genpoly("z1*z3*z5 - w1*w3", 12, 2, 3))
        self.assertEqual(result, InKernel())

    def test_not_in_kernel(self):
        result = kernel_membership(parse_genpoly("z0", 6, 2, 3))
        self.assertIsInstance(result, NotInKernel)
        self.assertEqual(str(result.witness), "y0*y3")
        self.assertEqual(result.coefficient, 1)

    def test_witness_is_the_leading_image_term(self):
        result = kernel_membership(parse_genpoly("z0 + 4*w0^2", 6, 2, 3))
        self.assertEqual(str(result.witness), "y0^2*y2^2*y4^2")
        self.assertEqual(result.coefficient, 4)

    def test_zero_is_in_the_kernel(self):
        result = kernel_membership(GenPoly.zero(6, 2, 3), want_certificate=True)
        self.assertEqual(str(result.certificate), "g0 = 0")

    def test_verify_certificate(self):
        F = relations(6, 2, 3)[0] * GenPoly.w(6, 2, 3, 0)
        self.assertTrue(verify_certificate(F, Certificate([GenPoly.w(6, 2, 3, 0)])))
        self.assertFalse(verify_certificate(F, Certificate([GenPoly.zero(6, 2, 3)])))
        with self.assertRaises(LengthMismatch):
            verify_certificate(F, Certificate([]))

    def test_verify_certificate_with_a_sum_of_cofactors(self):
        t0 = relations(6, 2, 3)[0]
        w0, z1 = GenPoly.w(6, 2, 3, 0), GenPoly.z(6, 2, 3, 1)
        F = w0 * t0 + z1 * t0
        self.assertTrue(verify_certificate(F, Certificate([w0 + z1])))
        self.assertFalse(verify_certificate(t0, Certificate([GenPoly.zero(6, 2, 3)])))

    def test_rewrite_monomial(self):
        F = GenPoly.zero(12, 2, 3)
        source = ((2, 0, 2, 0, 2, 0), (0, 0, 0, 0))
        target = ((0, 0, 0, 0, 0, 0), (2, 0, 2, 0))
        cofactors = rewrite_monomial(F, source, target)
        self.assertEqual(
            cofactors[0],
            {((1, 0, 1, 0, 1, 0), (0, 0, 0, 0)): 1, ((0, 0, 0, 0, 0, 0), (1, 0, 1, 0)): 1},
        )
        self.assertEqual(cofactors[1], {})

    def test_random_kernel_elements_are_certified(self):
        rng = random.Random(7)
        for n, p, q in ((6, 2, 3), (12, 2, 3), (12, 3, 4), (30, 3, 5)):
            for _ in range(5):
                F = kernel_element(rng, n, p, q)
                result = kernel_membership(F, want_certificate=True)
                self.assertIsInstance(result, InKernel, (n, p, q, str(F)))
                self.assertTrue(verify_certificate(F, result.certificate))
                G = F + GenPoly.z(n, p, q, 0)
                self.assertIsInstance(kernel_membership(G), NotInKernel)

    @pytest.mark.slow
    @pytest.mark.timeout(600)
    def test_many_random_kernel_elements(self):
        rng = random.Random(2024)
        for _ in range(200):
            n, p, q = rng.choice(((6, 2, 3), (12, 2, 3), (18, 2, 3)))
            F = kernel_element(rng, n, p, q)
            result = kernel_membership(F, want_certificate=True)
            self.assertTrue(verify_certificate(F, result.certificate))
            self.assertIsInstance(kernel_membership(F + GenPoly.z(n, p, q, rng.randrange(n // p))), NotInKernel)
