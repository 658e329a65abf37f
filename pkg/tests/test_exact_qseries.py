"""
Exact Q-Series Tests
Arithmetic, offsets, inversion, theta and the eta / partition series
"""

import random
import unittest
from fractions import Fraction

from errors import IncompatibleOffset, NonPositiveImaginaryPart, ZeroLeadingTerm
from exact_qseries import (
    QSeries,
    eta,
    eta_inverse,
    format_rational,
    partition_count,
    partition_count_parts_at_least,
    qs_add,
    qs_invert,
    qs_mul,
    qs_theta,
    sigma,
    to_rational,
)

ORDER = 12


def random_series(rng: random.Random, order: int = ORDER, offset=0) -> QSeries:
    return QSeries([Fraction(rng.randint(-9, 9), rng.randint(1, 4)) for _ in range(order + 1)], offset)


class TestRationals(unittest.TestCase):
    def test_to_rational_accepts_strings_and_ints(self):
        self.assertEqual(to_rational("-22/5"), Fraction(-22, 5))
        self.assertEqual(to_rational(3), Fraction(3))

    def test_to_rational_rejects_floats_and_bools(self):
        with self.assertRaises(TypeError):
            to_rational(0.5)
        with self.assertRaises(TypeError):
            to_rational(True)

    def test_format_rational_is_reduced(self):
        self.assertEqual(format_rational(Fraction(6, 4)), "3/2")
        self.assertEqual(format_rational(Fraction(3, 1)), "3")
        self.assertEqual(format_rational(Fraction(-1, 24)), "-1/24")


class TestAddition(unittest.TestCase):
    def test_simple_sum(self):
        self.assertEqual(QSeries([1, 1]) + QSeries([0, 1]), QSeries([1, 2]))

    def test_additive_identity(self):
        f = QSeries([3, -1, 4])
        self.assertEqual(f + QSeries.zero(2), f)

    def test_equal_fractional_offsets(self):
        offset = Fraction(-1, 24)
        total = QSeries([1, 1], offset) + QSeries([0, 1], offset)
        self.assertEqual(total, QSeries([1, 2], offset))

    def test_integer_offset_gap_is_aligned(self):
        # q^1 (1 + 0q) known to q^2 added to 1 + 0q + 0q^2
        total = qs_add(QSeries([1, 0, 0]), QSeries([1, 0], 1))
        self.assertEqual(total, QSeries([1, 1, 0]))

    def test_precision_is_the_smaller_one(self):
        total = QSeries([1, 1, 1, 1]) + QSeries([1, 1])
        self.assertEqual(total.trunc_order, 1)

    def test_non_integer_gap_raises(self):
        with self.assertRaises(IncompatibleOffset):
            QSeries([1]) + QSeries([1], Fraction(1, 2))

    def test_zero_series_carries_no_offset(self):
        f = QSeries([1, 2])
        self.assertEqual(f + QSeries.zero(3, Fraction(1, 2)), f)


class TestMultiplication(unittest.TestCase):
    def test_geometric_series(self):
        product = QSeries([1, -1, 0, 0, 0, 0]) * QSeries([1] * 6)
        self.assertEqual(product, QSeries.one(5))

    def test_eta_times_inverse(self):
        self.assertEqual(qs_mul(eta(ORDER), eta_inverse(ORDER)), QSeries.one(ORDER))

    def test_offsets_add(self):
        a = QSeries([1], Fraction(1, 24))
        b = QSeries([1], Fraction(-1, 24))
        product = a * b
        self.assertEqual(product.offset, 0)
        self.assertEqual(product.coeffs, (1,))

    def test_scalar_multiplication(self):
        self.assertEqual(QSeries([1, 2]) * Fraction(1, 2), QSeries([Fraction(1, 2), 1]))
        self.assertEqual(3 * QSeries([1, 2]), QSeries([3, 6]))

    def test_ring_axioms(self):
        rng = random.Random(7)
        for _ in range(5):
            a, b, c = (random_series(rng) for _ in range(3))
            self.assertEqual(a * b, b * a)
            self.assertEqual((a * b) * c, a * (b * c))
            self.assertEqual(a * (b + c), a * b + a * c)

    def test_power(self):
        f = QSeries([1, 1, 0, 0])
        self.assertEqual(f.power(3), QSeries([1, 3, 3, 1]))
        self.assertEqual(f ** 0, QSeries.one(3))


class TestInversion(unittest.TestCase):
    def test_invert_one_minus_q(self):
        self.assertEqual(qs_invert(QSeries([1, -1] + [0] * 6)), QSeries([1] * 8))

    def test_inverse_is_involutive(self):
        rng = random.Random(11)
        f = random_series(rng)
        f = QSeries((1,) + f.coeffs[1:], Fraction(1, 3))
        self.assertEqual(qs_invert(qs_invert(f)), f)
        self.assertEqual(qs_mul(f, qs_invert(f)), QSeries.one(ORDER))

    def test_offset_is_negated(self):
        self.assertEqual(qs_invert(eta(ORDER)).offset, Fraction(-1, 24))
        self.assertEqual(qs_invert(eta(ORDER)), eta_inverse(ORDER))

    def test_zero_leading_term_raises(self):
        with self.assertRaises(ZeroLeadingTerm):
            qs_invert(QSeries([0, 1]))

    def test_negative_power_uses_inverse(self):
        self.assertEqual(QSeries([1, -1, 0]).power(-1), QSeries([1, 1, 1]))


class TestTheta(unittest.TestCase):
    def test_theta_of_constant(self):
        self.assertTrue(qs_theta(QSeries.one(5)).is_zero())

    def test_theta_of_monomial(self):
        for n in range(1, 6):
            self.assertEqual(qs_theta(QSeries.monomial(n, 6)), QSeries.monomial(n, 6, n))

    def test_theta_includes_offset(self):
        self.assertEqual(qs_theta(eta_inverse(5)).coeffs[0], Fraction(-1, 24))

    def test_leibniz_rule(self):
        rng = random.Random(3)
        a = random_series(rng, offset=Fraction(1, 24))
        b = random_series(rng, offset=Fraction(-1, 3))
        lhs = qs_theta(a * b)
        rhs = qs_theta(a) * b + a * qs_theta(b)
        self.assertEqual(lhs, rhs)


class TestEtaAndPartitions(unittest.TestCase):
    def test_partition_numbers(self):
        self.assertEqual([partition_count(n) for n in range(5)], [1, 1, 2, 3, 5])
        self.assertEqual(partition_count(10), 42)

    def test_eta_inverse_coefficients(self):
        series = eta_inverse(8)
        self.assertEqual(series.offset, Fraction(-1, 24))
        self.assertEqual(list(series.coeffs), [partition_count(n) for n in range(9)])

    def test_eta_leading_terms(self):
        # prod (1 - q^n) = 1 - q - q^2 + q^5 + q^7 - ...
        self.assertEqual(eta(7).coeffs, (1, -1, -1, 0, 0, 1, 0, 1))

    def test_restricted_partitions(self):
        # 6, 4+2, 3+3, 2+2+2
        self.assertEqual(partition_count_parts_at_least(6, 2), 4)

    def test_delta_from_eta(self):
        delta = eta(5).power(24)
        self.assertEqual(delta.offset, 1)
        self.assertEqual(delta.coeffs[:3], (1, -24, 252))

    def test_divisor_sums(self):
        self.assertEqual(sigma(1, 6), 12)
        self.assertEqual(sigma(3, 2), 9)
        self.assertEqual(sigma(3, 0), 0)


class TestAccessAndNumerics(unittest.TestCase):
    def test_coefficient_by_absolute_exponent(self):
        f = QSeries([1, 2, 3], Fraction(-1, 3))
        self.assertEqual(f.coefficient(Fraction(2, 3)), 2)
        self.assertEqual(f.coefficient(Fraction(1, 2)), 0)
        with self.assertRaises(IndexError):
            f.coefficient(Fraction(8, 3))

    def test_truncate_cannot_extend(self):
        with self.assertRaises(ValueError):
            QSeries([1, 2]).truncate(4)

    def test_series_is_immutable(self):
        f = QSeries([1])
        with self.assertRaises(AttributeError):
            f.offset = 1

    def test_evaluate_monomial(self):
        value = QSeries.monomial(1, 3).evaluate(1j)
        self.assertAlmostEqual(value.real, 0.0018674427317079893, places=12)
        self.assertAlmostEqual(value.imag, 0.0, places=12)

    def test_evaluate_rejects_lower_half_plane(self):
        with self.assertRaises(NonPositiveImaginaryPart):
            QSeries([1]).evaluate(-1j)

    def test_dict_form(self):
        f = QSeries([1, Fraction(-1, 2)], Fraction(-1, 24))
        self.assertEqual(f.to_dict(), {"offset": "-1/24", "coeffs": ["1", "-1/2"]})
        self.assertEqual(QSeries.from_dict(f.to_dict()), f)


if __name__ == "__main__":
    unittest.main()
