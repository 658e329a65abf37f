"""
Virasoro Tests
Vacuum expectations, Gram matrices, Kac determinants and discrete-series data
"""

import unittest
from fractions import Fraction

from errors import NotCoprime, RangeError
from exact_qseries import QSeries
from virasoro import (
    C,
    VirasoroWord,
    c_pq,
    discrete_weights,
    evaluate_poly,
    factor_kac_det,
    gram_matrix,
    h_rs,
    kac_det,
    kac_zero_charges,
    poly_c,
    vacuum_expectation,
    vir_basis,
    vir_character,
    vir_graded_dim,
)


class TestVacuumExpectation(unittest.TestCase):
    def test_weight_two(self):
        self.assertEqual(vacuum_expectation([2, -2]), poly_c(C / 2))

    def test_weight_four(self):
        self.assertEqual(vacuum_expectation([4, -4]), poly_c(5 * C))
        self.assertEqual(vacuum_expectation([2, 2, -2, -2]), poly_c(C * (4 + C / 2)))

    def test_nonzero_mode_sum_vanishes(self):
        self.assertTrue(vacuum_expectation([2, -1]).is_zero)
        self.assertTrue(vacuum_expectation([3, -2, -2]).is_zero)

    def test_empty_word(self):
        self.assertEqual(vacuum_expectation([]), poly_c(1))

    def test_word_coefficient_is_applied(self):
        word = VirasoroWord([2, -2], poly_c(2))
        self.assertEqual(vacuum_expectation(word), poly_c(C))

    def test_strategies_agree_on_words(self):
        for word in ([3, -3], [2, 1, -3], [3, 2, -3, -2], [1, 3, -2, -2]):
            self.assertEqual(vacuum_expectation(word, "commutator"), vacuum_expectation(word, "pbw"))

    def test_unknown_strategy(self):
        with self.assertRaises(ValueError):
            vacuum_expectation([2, -2], "guess")


class TestGramMatrices(unittest.TestCase):
    def test_basis(self):
        self.assertEqual([w.modes for w in vir_basis(4)], [(-2, -2), (-4,)])
        self.assertEqual([w.modes for w in vir_basis(2)], [(-2,)])
        self.assertEqual(vir_basis(1), [])
        self.assertEqual(len(vir_basis(8)), 7)

    def test_weight_four_matrix(self):
        m4 = gram_matrix(4)
        self.assertEqual(m4[0][0], poly_c(C * (4 + C / 2)))
        self.assertEqual(m4[0][1], poly_c(3 * C))
        self.assertEqual(m4[1][0], poly_c(3 * C))
        self.assertEqual(m4[1][1], poly_c(5 * C))

    def test_strategies_agree(self):
        for n in range(7):
            self.assertEqual(gram_matrix(n, "commutator"), gram_matrix(n, "pbw"))

    def test_determinants(self):
        self.assertEqual(kac_det(2), poly_c(C / 2))
        self.assertEqual(kac_det(4), poly_c(C ** 2 * (5 * C + 22) / 2))
        self.assertEqual(kac_det(1), poly_c(1))

    def test_factored_rendering(self):
        self.assertEqual(factor_kac_det(4), "1/2·c^2·(5c+22)")

    def test_determinant_vanishes_at_minimal_charges(self):
        charges = kac_zero_charges(6)
        self.assertIn((2, 5), charges)
        self.assertIn((3, 4), charges)
        self.assertEqual(kac_zero_charges(1), {})
        for n in range(1, 7):
            det = kac_det(n)
            for (p, q), c in kac_zero_charges(n).items():
                self.assertEqual(evaluate_poly(det, c), 0, f"det M{n} at c({p},{q})")

    def test_evaluate_poly(self):
        self.assertEqual(evaluate_poly(kac_det(4), 1), Fraction(27, 2))
        self.assertEqual(evaluate_poly(kac_det(4), Fraction(-22, 5)), 0)


class TestDiscreteSeries(unittest.TestCase):
    def test_lee_yang(self):
        self.assertEqual(c_pq(2, 5), Fraction(-22, 5))
        self.assertEqual(discrete_weights(2, 5), {Fraction(0), Fraction(-1, 5)})

    def test_ising(self):
        self.assertEqual(c_pq(3, 4), Fraction(1, 2))
        self.assertEqual(discrete_weights(3, 4), {Fraction(0), Fraction(1, 2), Fraction(1, 16)})

    def test_number_of_weights(self):
        for p, q in ((2, 5), (3, 4), (3, 5), (4, 5), (2, 7)):
            self.assertEqual(len(discrete_weights(p, q)), (p - 1) * (q - 1) // 2)

    def test_errors(self):
        with self.assertRaises(NotCoprime):
            c_pq(2, 4)
        with self.assertRaises(RangeError):
            c_pq(1, 3)
        with self.assertRaises(RangeError):
            h_rs(3, 4, 4, 1)


class TestGradedDimension(unittest.TestCase):
    def test_partitions_into_parts_at_least_two(self):
        self.assertEqual(vir_graded_dim(6).coeffs, (1, 0, 1, 1, 2, 2, 4))
        self.assertEqual(vir_graded_dim(0), QSeries([1]))

    def test_matches_basis_size(self):
        series = vir_graded_dim(8)
        for n in range(9):
            self.assertEqual(series.coeffs[n], len(vir_basis(n)))

    def test_character_offset(self):
        self.assertEqual(vir_character(Fraction(1, 2), 4).offset, Fraction(-1, 48))


if __name__ == "__main__":
    unittest.main()
