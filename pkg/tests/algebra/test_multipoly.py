import unittest
from fractions import Fraction

from hypothesis import given, settings
from hypothesis import strategies as st

from circinv.algebra.cyclotomic import CycElement, zeta_power
from circinv.algebra.multipoly import (
    Basis,
    Poly,
    apply_operator,
    compose,
    eigen_multiplier,
    graded_lex_key,
    poly_arith,
    to_x,
    to_y,
    x_in_y,
    y_in_x,
)
from circinv.config import Limits
from circinv.errors import BasisMismatch, ExpansionTooLarge, InvalidOrder, OrderMismatch


def x(n: int, i: int) -> Poly:
    return Poly.variable(n, Basis.X, i)


def y(n: int, i: int) -> Poly:
    return Poly.variable(n, Basis.Y, i)


@st.composite
def polys(draw, n=None, basis=Basis.X):
    n = draw(st.sampled_from([2, 3, 4])) if n is None else n
    terms = draw(
        st.dictionaries(
            st.tuples(*[st.integers(0, 2)] * n),
            st.integers(-3, 3),
            max_size=4,
        )
    )
    return Poly(n, basis, terms)


@st.composite
def poly_pairs(draw):
    n = draw(st.sampled_from([2, 3, 4]))
    return draw(polys(n)), draw(polys(n))


class PolyTestCase(unittest.TestCase):
    def test_it_multiplies_and_prints(self):
        x0, x1 = x(2, 0), x(2, 1)
        self.assertEqual(str((x0 + x1) * (x0 - x1)), "x0^2 - x1^2")
        self.assertEqual(str(x0 * 0), "0")
        self.assertEqual(str(Poly.monomial(3, Basis.Y, (1, 0, 2), Fraction(-1, 2))), "-1/2*y0*y2^2")
        self.assertEqual(str(x(3, 0).scale(zeta_power(3, 1)) + 1), "zeta*x0 + 1")

    def test_terms_are_printed_in_graded_lex_order(self):
        x0, x1, x2 = x(3, 0), x(3, 1), x(3, 2)
        f = x2 + x0 * x1 + x0 ** 2 + x1 ** 3 + 5
        self.assertEqual(str(f), "x1^3 + x0^2 + x0*x1 + x2 + 5")
        self.assertLess(graded_lex_key((0, 0, 1)), graded_lex_key((1, 0, 0)))
        self.assertLess(graded_lex_key((3, 0, 0)), graded_lex_key((0, 2, 2)))

    def test_degree_queries(self):
        x0, x1 = x(2, 0), x(2, 1)
        f = x0 ** 2 - x0 * x1
        self.assertEqual(f.total_degree(), 2)
        self.assertTrue(f.is_homogeneous())
        self.assertTrue(f.is_homogeneous(2))
        self.assertFalse((f + x0).is_homogeneous())
        self.assertTrue(f.has_integer_coefficients())
        self.assertFalse(f.scale(Fraction(1, 3)).has_integer_coefficients())
        self.assertEqual(Poly.zero(2, Basis.X).total_degree(), 0)

    def test_powers(self):
        x0, x1 = x(2, 0), x(2, 1)
        self.assertEqual((x0 + x1) ** 3, (x0 + x1) * (x0 + x1) * (x0 + x1))
        self.assertEqual((x0 + x1) ** 0, Poly.constant(2, Basis.X, 1))
        with self.assertRaises(ValueError):
            x0 ** -1

    def test_it_refuses_to_mix_bases_and_orders(self):
        with self.assertRaises(BasisMismatch):
            x(2, 0) + y(2, 0)
        with self.assertRaises(OrderMismatch):
            x(2, 0) * x(3, 0)
        with self.assertRaises(OrderMismatch):
            x(2, 0).scale(zeta_power(3, 1))

    def test_it_validates_construction(self):
        with self.assertRaises(InvalidOrder):
            Poly(0, Basis.X)
        with self.assertRaises(ValueError):
            Poly(2, Basis.X, {(1, -1): 1})
        with self.assertRaises(ValueError):
            Poly(2, Basis.X, {(1, 0, 0): 1})

    def test_poly_arith_dispatch(self):
        x0, x1 = x(2, 0), x(2, 1)
        self.assertEqual(str(poly_arith("mul", x0 + x1, x0 - x1)), "x0^2 - x1^2")
        self.assertEqual(poly_arith("sub", x0, x0), Poly.zero(2, Basis.X))
        self.assertEqual(poly_arith("scale", x0, 2), x0 + x0)
        with self.assertRaises(TypeError):
            poly_arith("scale", x0, x1)
        with self.assertRaises(TypeError):
            poly_arith("add", x0, 1)

    def test_compose_substitutes_every_variable(self):
        x0, x1 = x(2, 0), x(2, 1)
        swapped = compose(x0 ** 2 * x1 + 3, [x1, x0])
        self.assertEqual(swapped, x1 ** 2 * x0 + 3)
        with self.assertRaises(ValueError):
            compose(x0, [x1])


class OperatorTestCase(unittest.TestCase):
    def test_it_shifts_x_variables(self):
        self.assertEqual(apply_operator("D", x(3, 0)), x(3, 2))
        self.assertEqual(apply_operator("Delta", x(3, 0)), x(3, 1))
        self.assertEqual(apply_operator("D", x(3, 1) ** 2), x(3, 0) * x(3, 1) * 2)
        with self.assertRaises(ValueError):
            apply_operator("E", x(3, 0))  # type: ignore

    def test_y_variables_are_eigenvectors(self):
        for n in range(1, 31):
            for i in range(n):
                self.assertEqual(apply_operator("D", y(n, i)), y(n, i).scale(zeta_power(n, i)))
                self.assertEqual(apply_operator("Delta", y(n, i)), y(n, i).scale(zeta_power(n, -i)))

    def test_eigen_multiplier(self):
        self.assertTrue(eigen_multiplier(4, (1, 0, 1, 0)).is_zero())
        self.assertEqual(eigen_multiplier(3, (1, 1, 0)), 1 + zeta_power(3, 1))
        self.assertEqual(eigen_multiplier(3, (1, 1, 0), sign=-1), 1 + zeta_power(3, 2))
        self.assertTrue(eigen_multiplier(6, (Fraction(1, 2),) * 6).is_zero())

    @settings(max_examples=40, deadline=None)
    @given(poly_pairs())
    def test_operators_are_derivations(self, pair):
        f, g = pair
        for which in ("D", "Delta"):
            self.assertEqual(
                apply_operator(which, f * g),  # type: ignore
                apply_operator(which, f) * g + f * apply_operator(which, g),  # type: ignore
            )


class BasisChangeTestCase(unittest.TestCase):
    def test_difference_of_squares_is_a_product_of_eigenvalues(self):
        x0, x1 = x(2, 0), x(2, 1)
        self.assertEqual(str(to_y(x0 ** 2 - x1 ** 2)), "y0*y1")

    def test_linear_forms_are_inverse(self):
        for n in range(1, 7):
            for i in range(n):
                self.assertEqual(to_y(y_in_x(n, i)), y(n, i))
                self.assertEqual(to_x(x_in_y(n, i)), x(n, i))

    def test_y0_is_the_sum_of_the_variables(self):
        self.assertEqual(to_x(y(3, 0)), x(3, 0) + x(3, 1) + x(3, 2))
        self.assertEqual(
            to_x(y(4, 1)),
            x(4, 0) + x(4, 1).scale(zeta_power(4, 1)) - x(4, 2) - x(4, 3).scale(zeta_power(4, 1)),
        )

    @settings(max_examples=30, deadline=None)
    @given(polys())
    def test_round_trip(self, f):
        self.assertEqual(to_x(to_y(f)), f)

    @settings(max_examples=30, deadline=None)
    @given(polys())
    def test_operators_commute_with_the_basis_change(self, f):
        for which in ("D", "Delta"):
            self.assertEqual(
                to_y(apply_operator(which, f)),  # type: ignore
                apply_operator(which, to_y(f)),  # type: ignore
            )

    def test_it_checks_the_basis(self):
        with self.assertRaises(BasisMismatch):
            to_y(y(2, 0))
        with self.assertRaises(BasisMismatch):
            to_x(x(2, 0))

    def test_it_guards_large_expansions(self):
        with self.assertRaises(ExpansionTooLarge):
            to_y(x(17, 0), Limits(max_n_x=16))
        self.assertEqual(to_y(x(17, 0), Limits(max_n_x=17)), x_in_y(17, 0))

    def test_coefficients_stay_in_the_field(self):
        f = to_y(x(5, 0))
        self.assertEqual(f.terms[(1, 0, 0, 0, 0)], CycElement.rational(5, Fraction(1, 5)))
