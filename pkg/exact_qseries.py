"""
Exact Q-Series Module
Truncated power series in q with exact rational coefficients and a rational offset
"""

import cmath
import logging
from fractions import Fraction
from functools import lru_cache
from typing import Dict, Iterable, Union

import numpy as np

from errors import IncompatibleOffset, NonPositiveImaginaryPart, ZeroLeadingTerm

logging.basicConfig(level=logging.INFO)
logger = logging.getLogger(__name__)

Rational = Fraction
RationalLike = Union[int, Fraction, str]


def to_rational(value: RationalLike) -> Fraction:
    """Coerce ints, Fractions and "p/q" strings to a reduced Fraction."""
    if isinstance(value, Fraction):
        return value
    if isinstance(value, bool):
        raise TypeError("booleans are not rationals")
    if isinstance(value, (int, str)):
        return Fraction(value)
    raise TypeError(f"cannot interpret {value!r} as an exact rational")


def format_rational(value: Fraction) -> str:
    """Reduced "p/q" string; integers are printed without "/1"."""
    value = Fraction(value)
    if value.denominator == 1:
        return str(value.numerator)
    return f"{value.numerator}/{value.denominator}"


class QSeries:
    """q^offset * (a_0 + a_1 q + ... + a_N q^N) + O(q^(offset+N+1))."""

    __slots__ = ("offset", "coeffs")

    def __init__(self, coeffs: Iterable[RationalLike], offset: RationalLike = 0):
        values = tuple(to_rational(c) for c in coeffs)
        if not values:
            raise ValueError("a QSeries needs at least the constant coefficient")
        object.__setattr__(self, "coeffs", values)
        object.__setattr__(self, "offset", to_rational(offset))

    def __setattr__(self, name, value):
        raise AttributeError("QSeries is immutable")

    # -- construction -------------------------------------------------------

    @classmethod
    def zero(cls, order: int, offset: RationalLike = 0) -> "QSeries":
        return cls([0] * (order + 1), offset)

    @classmethod
    def one(cls, order: int) -> "QSeries":
        return cls([1] + [0] * order)

    @classmethod
    def monomial(cls, n: int, order: int, coeff: RationalLike = 1) -> "QSeries":
        """coeff * q^n with integer exponent n >= 0."""
        values = [0] * (order + 1)
        if n <= order:
            values[n] = coeff
        return cls(values)

    # -- basic properties ---------------------------------------------------

    @property
    def trunc_order(self) -> int:
        return len(self.coeffs) - 1

    @property
    def precision(self) -> Fraction:
        """Absolute exponent of the first unknown term."""
        return self.offset + self.trunc_order + 1

    def is_zero(self) -> bool:
        return all(c == 0 for c in self.coeffs)

    def coefficient(self, exponent: RationalLike) -> Fraction:
        """Coefficient of q^exponent (absolute exponent)."""
        shift = to_rational(exponent) - self.offset
        if shift.denominator != 1 or shift < 0:
            return Fraction(0)
        n = shift.numerator
        if n > self.trunc_order:
            raise IndexError(f"q^{exponent} lies beyond the truncation order")
        return self.coeffs[n]

    def truncate(self, order: int) -> "QSeries":
        if order > self.trunc_order:
            raise ValueError(f"cannot extend a series known to order {self.trunc_order} to {order}")
        return QSeries(self.coeffs[: order + 1], self.offset)

    def shift(self, amount: RationalLike) -> "QSeries":
        """Multiply by q^amount."""
        return QSeries(self.coeffs, self.offset + to_rational(amount))

    # -- arithmetic ---------------------------------------------------------

    def __neg__(self) -> "QSeries":
        return QSeries([-c for c in self.coeffs], self.offset)

    def __add__(self, other: "QSeries") -> "QSeries":
        if not isinstance(other, QSeries):
            return NotImplemented
        return qs_add(self, other)

    def __sub__(self, other: "QSeries") -> "QSeries":
        if not isinstance(other, QSeries):
            return NotImplemented
        return qs_add(self, -other)

    def __mul__(self, other) -> "QSeries":
        if isinstance(other, QSeries):
            return qs_mul(self, other)
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        return NotImplemented

    __rmul__ = __mul__

    def scale(self, factor: RationalLike) -> "QSeries":
        factor = to_rational(factor)
        return QSeries([factor * c for c in self.coeffs], self.offset)

    def power(self, k: int) -> "QSeries":
        """Integer power; negative exponents go through qs_invert."""
        if k < 0:
            return qs_invert(self).power(-k)
        result = QSeries.one(self.trunc_order)
        base = self
        while k:
            if k & 1:
                result = qs_mul(result, base)
            k >>= 1
            if k:
                base = qs_mul(base, base)
        return result

    def __pow__(self, k: int) -> "QSeries":
        return self.power(k)

    def __eq__(self, other) -> bool:
        if not isinstance(other, QSeries):
            return NotImplemented
        return self.offset == other.offset and self.coeffs == other.coeffs

    def __hash__(self) -> int:
        return hash((self.offset, self.coeffs))

    def __repr__(self) -> str:
        shown = ", ".join(format_rational(c) for c in self.coeffs[:8])
        more = ", ..." if len(self.coeffs) > 8 else ""
        return f"QSeries(offset={format_rational(self.offset)}, coeffs=[{shown}{more}], N={self.trunc_order})"

    # -- numerics -----------------------------------------------------------

    def evaluate(self, tau: complex) -> complex:
        """Value of the truncated expansion at q = exp(2 pi i tau)."""
        tau = complex(tau)
        if tau.imag <= 0:
            raise NonPositiveImaginaryPart(f"Im(tau) must be positive, got {tau}")
        q = cmath.exp(2j * cmath.pi * tau)
        values = np.array([float(c) for c in self.coeffs], dtype=complex)
        body = np.polynomial.polynomial.polyval(q, values)
        return complex(body * cmath.exp(2j * cmath.pi * tau * float(self.offset)))

    # -- serialization ------------------------------------------------------

    def to_dict(self) -> Dict:
        return {
            "offset": format_rational(self.offset),
            "coeffs": [format_rational(c) for c in self.coeffs],
        }

    @classmethod
    def from_dict(cls, data: Dict) -> "QSeries":
        return cls([Fraction(c) for c in data["coeffs"]], Fraction(data["offset"]))


def qs_add(a: QSeries, b: QSeries) -> QSeries:
    """Sum of two series whose offsets differ by an integer."""
    gap = a.offset - b.offset
    if gap.denominator != 1 and b.is_zero():
        # an all-zero series carries no offset information
        return a.truncate(min(a.trunc_order, b.trunc_order))
    if gap.denominator != 1 and a.is_zero():
        return b.truncate(min(a.trunc_order, b.trunc_order))
    if gap.denominator != 1:
        raise IncompatibleOffset(
            f"offsets {format_rational(a.offset)} and {format_rational(b.offset)} differ by a non-integer"
        )
    offset = min(a.offset, b.offset)
    precision = min(a.precision, b.precision)
    length = int(precision - offset)
    if length <= 0:
        raise IncompatibleOffset("the aligned series share no retained coefficient")
    values = [Fraction(0)] * length
    for series in (a, b):
        start = int(series.offset - offset)
        for n, c in enumerate(series.coeffs):
            if start + n >= length:
                break
            values[start + n] += c
    return QSeries(values, offset)


def qs_mul(a: QSeries, b: QSeries) -> QSeries:
    """Cauchy product truncated at the smaller order."""
    order = min(a.trunc_order, b.trunc_order)
    ac, bc = a.coeffs, b.coeffs
    values = []
    for n in range(order + 1):
        total = Fraction(0)
        for i in range(n + 1):
            x = ac[i]
            if x:
                y = bc[n - i]
                if y:
                    total += x * y
        values.append(total)
    return QSeries(values, a.offset + b.offset)


def qs_invert(a: QSeries) -> QSeries:
    """Multiplicative inverse; the constant term must be non-zero."""
    a0 = a.coeffs[0]
    if a0 == 0:
        raise ZeroLeadingTerm("cannot invert a series with vanishing constant term")
    inv0 = 1 / a0
    values = [inv0]
    for n in range(1, a.trunc_order + 1):
        total = Fraction(0)
        for j in range(1, n + 1):
            if a.coeffs[j]:
                total += a.coeffs[j] * values[n - j]
        values.append(-inv0 * total)
    return QSeries(values, -a.offset)


def qs_theta(a: QSeries) -> QSeries:
    """theta = q d/dq acting termwise, including the offset."""
    return QSeries([(a.offset + n) * c for n, c in enumerate(a.coeffs)], a.offset)


def sigma(k: int, n: int) -> int:
    """Sum of the k-th powers of the positive divisors of n."""
    if n <= 0:
        return 0
    total = 0
    d = 1
    while d * d <= n:
        if n % d == 0:
            total += d ** k
            other = n // d
            if other != d:
                total += other ** k
        d += 1
    return total


@lru_cache(maxsize=None)
def _euler_product(order: int) -> tuple:
    values = [0] * (order + 1)
    values[0] = 1
    for n in range(1, order + 1):
        for k in range(order, n - 1, -1):
            values[k] -= values[k - n]
    return tuple(values)


@lru_cache(maxsize=None)
def _partition_table(order: int, smallest_part: int = 1) -> tuple:
    values = [0] * (order + 1)
    values[0] = 1
    for n in range(max(smallest_part, 1), order + 1):
        for k in range(n, order + 1):
            values[k] += values[k - n]
    return tuple(values)


def eta(order: int) -> QSeries:
    """Dedekind eta q^(1/24) prod (1 - q^n)."""
    if order < 0:
        raise ValueError("order must be non-negative")
    return QSeries(_euler_product(order), Fraction(1, 24))


def eta_inverse(order: int) -> QSeries:
    """1/eta: offset -1/24 and partition numbers as coefficients."""
    if order < 0:
        raise ValueError("order must be non-negative")
    return QSeries(_partition_table(order), Fraction(-1, 24))


def partition_count(n: int) -> int:
    """Number of unrestricted partitions p(n)."""
    if n < 0:
        raise ValueError("n must be non-negative")
    return _partition_table(n)[n]


def partition_count_parts_at_least(n: int, smallest_part: int) -> int:
    """Number of partitions of n with every part >= smallest_part."""
    if n < 0:
        raise ValueError("n must be non-negative")
    return _partition_table(n, smallest_part)[n]


def restricted_partition_numbers(order: int, smallest_part: int) -> tuple:
    """Counts of partitions of 0..order with every part >= smallest_part."""
    if order < 0:
        raise ValueError("order must be non-negative")
    return _partition_table(order, smallest_part)
