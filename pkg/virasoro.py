"""
Virasoro Module
Normal ordering on the vacuum, Gram matrices over Q[c], Kac determinants,
discrete-series data and the graded dimension of the Virasoro vacuum module
"""

import logging
from fractions import Fraction
from functools import lru_cache
from math import gcd
from typing import Dict, List, Sequence, Set, Tuple

import sympy

from errors import NotCoprime, RangeError
from exact_qseries import QSeries, format_rational, restricted_partition_numbers, to_rational
from heisenberg import enumerate_partitions

logging.basicConfig(level=logging.INFO)
logger = logging.getLogger(__name__)

C = sympy.Symbol("c")
PolyC = sympy.Poly

ZERO = sympy.Poly(0, C, domain="QQ")
ONE = sympy.Poly(1, C, domain="QQ")
STRATEGIES = ("commutator", "pbw")


def poly_c(expr) -> sympy.Poly:
    """A polynomial in the central charge with rational coefficients."""
    return sympy.Poly(expr, C, domain="QQ")


def _central(m: int) -> sympy.Poly:
    """(m^3 - m)/12 * c."""
    return poly_c(sympy.Rational(m ** 3 - m, 12) * C)


class VirasoroWord:
    """Coefficient times L_{n_1} ... L_{n_k} acting on the vacuum (rightmost first)."""

    def __init__(self, modes: Sequence[int], coefficient: sympy.Poly = ONE):
        self.modes = tuple(int(n) for n in modes)
        self.coefficient = coefficient

    @property
    def weight(self) -> int:
        return -sum(self.modes)

    def adjoint_modes(self) -> Tuple[int, ...]:
        """Modes of the adjoint word, using L_n^dagger = L_{-n}."""
        return tuple(-n for n in reversed(self.modes))

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, VirasoroWord)
            and self.modes == other.modes
            and self.coefficient == other.coefficient
        )

    def __hash__(self) -> int:
        return hash(self.modes)

    def __repr__(self) -> str:
        body = "".join(f"L[{n}]" for n in self.modes) or "1"
        return f"VirasoroWord({body})"


@lru_cache(maxsize=None)
def _vev_commutator(word: Tuple[int, ...]) -> sympy.Poly:
    if not word:
        return ONE
    if sum(word) != 0 or word[-1] >= -1 or word[0] <= 1:
        return ZERO
    # rightmost mode that annihilates the vacuum; everything to its right is <= -2
    i = max(index for index, m in enumerate(word) if m >= -1)
    m, n = word[i], word[i + 1]
    head, tail = word[:i], word[i + 2:]
    result = _vev_commutator(head + (n, m) + tail)
    if m != n:
        result = result + _vev_commutator(head + (m + n,) + tail) * (m - n)
    if m + n == 0:
        result = result + _central(m) * _vev_commutator(head + tail)
    return result


Vector = Dict[Tuple[int, ...], sympy.Poly]


@lru_cache(maxsize=None)
def _apply_basis(m: int, mono: Tuple[int, ...]) -> Tuple[Tuple[Tuple[int, ...], sympy.Poly], ...]:
    """L_m applied to L_{-k1}...L_{-kr}1 (k1 >= ... >= kr >= 2), in the same basis."""
    if not mono:
        if m >= -1:
            return ()
        return (((-m,), ONE),)
    if m < 0 and -m >= mono[0]:
        return (((-m,) + mono, ONE),)
    if m == 0:
        return ((mono, poly_c(sum(mono))),)
    k1, rest = mono[0], mono[1:]
    out: Vector = {}
    # L_m L_{-k1} R = L_{-k1} L_m R + [L_m, L_{-k1}] R
    for inner, coeff in _apply_basis(m, rest):
        for outer, coeff2 in _apply_basis(-k1, inner):
            out[outer] = out.get(outer, ZERO) + coeff * coeff2
    if m + k1 != 0:
        for inner, coeff in _apply_basis(m - k1, rest):
            out[inner] = out.get(inner, ZERO) + coeff * (m + k1)
    if m == k1:
        out[rest] = out.get(rest, ZERO) + _central(m)
    return tuple((key, value) for key, value in out.items() if not value.is_zero)


def apply_mode(m: int, vector: Vector) -> Vector:
    out: Vector = {}
    for mono, coeff in vector.items():
        for image, coeff2 in _apply_basis(m, mono):
            out[image] = out.get(image, ZERO) + coeff * coeff2
    return {key: value for key, value in out.items() if not value.is_zero}


def _vev_pbw(word: Tuple[int, ...]) -> sympy.Poly:
    if sum(word) != 0:
        return ZERO
    vector: Vector = {(): ONE}
    for m in reversed(word):
        vector = apply_mode(m, vector)
        if not vector:
            return ZERO
    return vector.get((), ZERO)


def vacuum_expectation(word, strategy: str = "commutator") -> sympy.Poly:
    """<1, L_{n_1} ... L_{n_k} 1> as a polynomial in c."""
    modes = word.modes if isinstance(word, VirasoroWord) else tuple(int(n) for n in word)
    coefficient = word.coefficient if isinstance(word, VirasoroWord) else ONE
    if strategy == "commutator":
        value = _vev_commutator(modes)
    elif strategy == "pbw":
        value = _vev_pbw(modes)
    else:
        raise ValueError(f"unknown normal-ordering strategy {strategy!r}, expected one of {STRATEGIES}")
    return value * coefficient


def vir_basis(n: int) -> List[VirasoroWord]:
    """L_{-n_1}...L_{-n_k}1 with n_1 >= ... >= n_k >= 2, e.g. [L_-2^2, L_-4] for n = 4."""
    if n < 0:
        raise ValueError("n must be non-negative")
    parts = sorted(p.parts for p in enumerate_partitions(n, smallest_part=2))
    return [VirasoroWord(tuple(-k for k in pt)) for pt in parts]


def gram_entry(u: VirasoroWord, v: VirasoroWord, strategy: str = "commutator") -> sympy.Poly:
    return vacuum_expectation(u.adjoint_modes() + v.modes, strategy)


def gram_matrix(n: int, strategy: str = "commutator") -> List[List[sympy.Poly]]:
    """Gram matrix of vir_basis(n) under the invariant form."""
    basis = vir_basis(n)
    logger.info(f"Gram matrix at weight {n}: {len(basis)} basis vectors, strategy={strategy}")
    return [[gram_entry(u, v, strategy) for v in basis] for u in basis]


def kac_det(n: int) -> sympy.Poly:
    """det M_n(c), expanded exactly."""
    matrix = gram_matrix(n)
    if not matrix:
        return ONE
    sym = sympy.Matrix([[entry.as_expr() for entry in row] for row in matrix])
    return poly_c(sympy.expand(sym.det(method="berkowitz")))


def format_factor(expr) -> str:
    return str(expr).replace("**", "^").replace("*", "").replace(" ", "")


def factor_kac_det(n: int) -> str:
    """Rational factorisation rendered as "1/2·c^2·(5c+22)"."""
    return format_poly_factored(kac_det(n))


def format_poly_factored(poly: sympy.Poly) -> str:
    if poly.is_zero:
        return "0"
    coeff, factors = sympy.factor_list(poly)
    coeff = Fraction(int(sympy.numer(coeff)), int(sympy.denom(coeff)))
    rendered = []
    for factor, mult in sorted(factors, key=lambda fm: (fm[0].as_expr() != C, fm[0].degree(), str(fm[0].as_expr()))):
        expr = factor.as_expr()
        body = format_factor(expr)
        if expr != C:
            body = f"({body})"
        rendered.append(body if mult == 1 else f"{body}^{mult}")
    if not rendered:
        return format_rational(coeff)
    if coeff == 1:
        return "·".join(rendered)
    if coeff == -1:
        return "-" + "·".join(rendered)
    return "·".join([format_rational(coeff)] + rendered)


def _check_pq(p: int, q: int) -> None:
    if p < 2 or q < 2:
        raise RangeError(f"discrete series needs p, q >= 2, got ({p}, {q})")
    if gcd(p, q) != 1:
        raise NotCoprime(f"p = {p} and q = {q} are not coprime")


def c_pq(p: int, q: int) -> Fraction:
    """Discrete-series central charge 1 - 6(p-q)^2/(pq)."""
    _check_pq(p, q)
    return 1 - Fraction(6 * (p - q) ** 2, p * q)


def h_rs(p: int, q: int, r: int, s: int) -> Fraction:
    """Conformal weight ((pr - qs)^2 - (p-q)^2)/(4pq)."""
    _check_pq(p, q)
    if not (1 <= r <= q - 1 and 1 <= s <= p - 1):
        raise RangeError(f"need 1 <= r <= {q - 1} and 1 <= s <= {p - 1}, got r={r}, s={s}")
    return Fraction((p * r - q * s) ** 2 - (p - q) ** 2, 4 * p * q)


def discrete_weights(p: int, q: int) -> Set[Fraction]:
    """All conformal weights of the (p, q) discrete-series model."""
    _check_pq(p, q)
    return {h_rs(p, q, r, s) for r in range(1, q) for s in range(1, p)}


def kac_zero_charges(n: int) -> Dict[Tuple[int, int], Fraction]:
    """c_{p,q} for coprime 2 <= p < q with (p-1)(q-1) <= n."""
    found = {}
    for p in range(2, n + 2):
        for q in range(p + 1, n + 2):
            if (p - 1) * (q - 1) <= n and gcd(p, q) == 1:
                found[(p, q)] = c_pq(p, q)
    return found


def vir_graded_dim(order: int) -> QSeries:
    """prod_{n>=2} (1 - q^n)^-1; the q^(-c/24) prefactor is applied by vir_character."""
    if order < 0:
        raise ValueError("order must be non-negative")
    return QSeries(restricted_partition_numbers(order, 2))


def vir_character(c, order: int) -> QSeries:
    return vir_graded_dim(order).shift(-to_rational(c) / 24)


def evaluate_poly(poly: sympy.Poly, value) -> Fraction:
    value = to_rational(value)
    result = poly.eval(sympy.Rational(value.numerator, value.denominator))
    return Fraction(int(sympy.numer(result)), int(sympy.denom(result)))
