"""
Quasimodular Form Tests
Eisenstein series, the ring Q[P, Q, R], the modular derivative, Delta, j and the C(k, l) coefficients
"""

import random
import unittest
from fractions import Fraction
from math import comb

from errors import InhomogeneousInput, InvalidWeight, NonPositiveImaginaryPart
from exact_qseries import eta, qs_mul, qs_theta
from quasimodular import (
    QuasiModular,
    bernoulli,
    coeff_C,
    delta,
    delta_from_qr,
    delta_qm,
    dim_Mk,
    e2_transformation_residual,
    eisenstein_qexp,
    eisenstein_qm,
    format_pqr,
    hilbert_series_dims,
    j_function,
    modular_derivative,
    p2_two_variable_coefficient,
    qm_add,
    qm_eval_numeric,
    qm_from_e_basis,
    qm_mul,
    qm_P,
    qm_pow,
    qm_Q,
    qm_R,
    qm_scale,
    qm_sub,
    qm_theta,
    qm_to_qseries,
    qm_weight,
    square_bracket_coeff,
    square_bracket_coeff_series,
    verify_square_bracket_identity,
    weierstrass_P1m,
)


class TestEisenstein(unittest.TestCase):
    def test_bernoulli_numbers(self):
        self.assertEqual(bernoulli(2), Fraction(1, 6))
        self.assertEqual(bernoulli(3), 0)
        self.assertEqual(bernoulli(4), Fraction(-1, 30))
        self.assertEqual(bernoulli(12), Fraction(-691, 2730))

    def test_e2_constant_term(self):
        self.assertEqual(eisenstein_qexp(2, 3).coeffs[0], Fraction(-1, 12))

    def test_e4_normalised(self):
        self.assertEqual(eisenstein_qexp(4, 2).scale(720).coeffs, (1, 240, 2160))

    def test_odd_weight_vanishes(self):
        for k in (3, 5, 7):
            self.assertTrue(eisenstein_qexp(k, 5).is_zero())
            self.assertTrue(eisenstein_qm(k).is_zero())

    def test_weight_below_two_raises(self):
        with self.assertRaises(InvalidWeight):
            eisenstein_qexp(1, 4)
        with self.assertRaises(InvalidWeight):
            eisenstein_qm(0)

    def test_generators(self):
        self.assertEqual(qm_to_qseries(qm_P(), 2).coeffs, (1, -24, -72))
        self.assertEqual(qm_to_qseries(qm_R(), 2).coeffs, (1, -504, -16632))
        self.assertTrue(qm_to_qseries(QuasiModular(), 3).is_zero())

    def test_higher_eisenstein_in_the_ring(self):
        e4, e6 = eisenstein_qm(4), eisenstein_qm(6)
        self.assertEqual(eisenstein_qm(8), e4 * e4 * Fraction(3, 7))
        self.assertEqual(eisenstein_qm(10), e4 * e6 * Fraction(5, 11))

    def test_ring_form_matches_q_expansion(self):
        for k in (2, 4, 6, 8, 10, 12, 14, 16):
            self.assertEqual(qm_to_qseries(eisenstein_qm(k), 15), eisenstein_qexp(k, 15))


class TestRing(unittest.TestCase):
    def test_weight(self):
        self.assertEqual(qm_weight(qm_P() * qm_Q() * qm_R()), 12)
        self.assertEqual(qm_weight(qm_P() + qm_Q()), "inhomogeneous")
        self.assertEqual(qm_weight(QuasiModular()), 0)

    def test_arithmetic_cancels(self):
        f = qm_P() * qm_Q() + qm_R() * 2
        self.assertTrue((f - f).is_zero())
        self.assertEqual(f + 0, f)

    def test_functional_helpers(self):
        p, q = qm_P(), qm_Q()
        self.assertEqual(qm_add(p, q), p + q)
        self.assertTrue(qm_sub(p, p).is_zero())
        self.assertEqual(qm_mul(p, q), p * q)
        self.assertEqual(qm_scale(p, "1/2"), p * Fraction(1, 2))
        self.assertEqual(qm_pow(q, 3), q * q * q)
        self.assertEqual(qm_from_e_basis({(0, 1, 0): 720}), q)

    def test_e_basis_conversion(self):
        f = qm_P() * qm_Q() * qm_R()
        self.assertEqual(QuasiModular.from_e_basis(f.to_e_basis()), f)
        self.assertEqual(eisenstein_qm(2).to_e_basis(), {(1, 0, 0): 1})

    def test_list_form(self):
        f = qm_P() ** 2 - qm_Q() * Fraction(1, 3)
        self.assertEqual(QuasiModular.from_list(f.to_list()), f)

    def test_format_pqr(self):
        self.assertEqual(format_pqr(qm_P() * qm_P() - qm_Q()), "P^2 - Q")
        self.assertEqual(format_pqr(QuasiModular()), "0")


class TestModularDerivative(unittest.TestCase):
    def test_eisenstein_derivatives(self):
        e4, e6 = eisenstein_qm(4), eisenstein_qm(6)
        self.assertEqual(modular_derivative(e4), e6 * 14)
        self.assertEqual(modular_derivative(e6), e4 * e4 * Fraction(60, 7))

    def test_delta_is_annihilated(self):
        self.assertTrue(modular_derivative(delta_qm()).is_zero())

    def test_inhomogeneous_input_raises(self):
        with self.assertRaises(InhomogeneousInput):
            modular_derivative(qm_P() + qm_Q())

    def test_derivation_rule(self):
        e4, e6 = eisenstein_qm(4), eisenstein_qm(6)
        lhs = modular_derivative(e4 * e6)
        rhs = modular_derivative(e4) * e6 + e4 * modular_derivative(e6)
        self.assertEqual(lhs, rhs)

    def test_agrees_with_q_expansion(self):
        order = 30
        e2 = eisenstein_qexp(2, order)
        monomials = [
            (i, j, k) for i in range(7) for j in range(4) for k in range(3)
            if 0 < 2 * i + 4 * j + 6 * k <= 12
        ]
        for mono in monomials:
            f = QuasiModular({mono: 1})
            series = qm_to_qseries(f, order)
            expected = qs_theta(series) + qs_mul(e2, series).scale(f.weight())
            self.assertEqual(qm_to_qseries(modular_derivative(f), order), expected, f"monomial {mono}")

    def test_mixed_forms_agree_with_q_expansion(self):
        order = 30
        e2 = eisenstein_qexp(2, order)
        rng = random.Random(12)
        for weight in (4, 8, 12):
            monomials = [
                (i, j, k) for i in range(7) for j in range(4) for k in range(3)
                if 2 * i + 4 * j + 6 * k == weight
            ]
            f = QuasiModular({mono: Fraction(rng.randint(-9, 9), rng.randint(1, 5)) for mono in monomials})
            series = qm_to_qseries(f, order)
            expected = qs_theta(series) + qs_mul(e2, series).scale(weight)
            self.assertEqual(qm_to_qseries(modular_derivative(f, weight), order), expected)

    def test_theta_rules_on_generators(self):
        for generator in (qm_P(), qm_Q(), qm_R()):
            self.assertEqual(qm_to_qseries(qm_theta(generator), 30), qs_theta(qm_to_qseries(generator, 30)))

    def test_theta_eta(self):
        order = 30
        expected = qs_mul(eta(order), eisenstein_qexp(2, order)).scale(Fraction(-1, 2))
        self.assertEqual(qs_theta(eta(order)), expected)


class TestDeltaAndJ(unittest.TestCase):
    def test_delta_leading_terms(self):
        series = delta(3)
        self.assertEqual(series.offset, 1)
        self.assertEqual(series.coeffs[:3], (1, -24, 252))

    def test_delta_two_ways(self):
        self.assertEqual(delta_from_qr(50), delta(50))

    def test_j_expansion(self):
        j = j_function(3)
        self.assertEqual(j.coefficient(-1), 1)
        self.assertEqual(j.coefficient(0), 744)
        self.assertEqual(j.coefficient(1), 196884)
        self.assertEqual(j.coefficient(2), 21493760)

    def test_dimensions(self):
        self.assertEqual(dim_Mk(12), 2)
        self.assertEqual(dim_Mk(2), 0)
        self.assertEqual(dim_Mk(0), 1)
        hilbert = hilbert_series_dims(30)
        for k in range(31):
            self.assertEqual(dim_Mk(k), hilbert[k])


class TestCoefficients(unittest.TestCase):
    def test_small_values(self):
        self.assertEqual(coeff_C(1, 1), eisenstein_qm(2))
        self.assertEqual(coeff_C(2, 2), eisenstein_qm(4) * -6)
        self.assertTrue(coeff_C(1, 2).is_zero())

    def test_symmetry(self):
        for k in range(1, 13):
            for l in range(1, 13):
                self.assertEqual(coeff_C(k, l), coeff_C(l, k))

    def test_invalid_index(self):
        with self.assertRaises(InvalidWeight):
            coeff_C(0, 2)

    def test_weierstrass_derivatives(self):
        p1 = weierstrass_P1m(0, 6)
        self.assertEqual(p1.coefficient(-1), QuasiModular.constant(-1))
        self.assertTrue(p1.coefficient(0).is_zero())
        p2 = weierstrass_P1m(1, 6)
        self.assertEqual(p2.coefficient(-2), QuasiModular.constant(1))
        self.assertEqual(p2.coefficient(0), eisenstein_qm(2))
        self.assertEqual(p2.coefficient(2), eisenstein_qm(4) * 3)
        with self.assertRaises(IndexError):
            p2.coefficient(7)

    def test_p2_expansion_gives_coefficients(self):
        for k in range(1, 6):
            for l in range(1, 6):
                self.assertEqual(p2_two_variable_coefficient(k, l), coeff_C(k, l))

    def test_square_bracket_coefficients(self):
        for k in range(1, 6):
            for i in range(0, 8):
                self.assertEqual(square_bracket_coeff(k, i, 0), comb(k - 1, i))
                for m in range(i + 1):
                    self.assertEqual(square_bracket_coeff(k, i, m), square_bracket_coeff_series(k, i, m))

    def test_square_bracket_identity(self):
        for k in range(1, 7):
            for n in range(0, 7):
                self.assertTrue(verify_square_bracket_identity(k, n))

    def test_square_bracket_range(self):
        with self.assertRaises(ValueError):
            square_bracket_coeff(2, 1, 2)


class TestNumerics(unittest.TestCase):
    def test_zero_evaluates_to_zero(self):
        self.assertEqual(qm_eval_numeric(QuasiModular(), 1j, 20), 0)

    def test_delta_at_i(self):
        self.assertAlmostEqual(abs(qm_eval_numeric(delta_qm(), 1j, 30)), 0.0017853698, places=8)

    def test_e2_transformation(self):
        self.assertLess(e2_transformation_residual((0, -1, 1, 0), 2j, 40), 1e-8)
        self.assertLess(e2_transformation_residual((1, 1, 0, 1), 1.5j, 40), 1e-10)

    def test_lower_half_plane_rejected(self):
        with self.assertRaises(NonPositiveImaginaryPart):
            qm_eval_numeric(qm_Q(), -1j, 10)

    def test_series_evaluation_agrees(self):
        f = qm_Q() ** 2 - qm_P() * qm_R()
        direct = qm_to_qseries(f, 30).evaluate(1.2j)
        self.assertAlmostEqual(abs(qm_eval_numeric(f, 1.2j, 30) - direct), 0.0, places=8)


if __name__ == "__main__":
    unittest.main()
