"""
Quasimodular Forms Module
The graded ring Q[P, Q, R], Eisenstein series, Delta, j, C(k,l), Weierstrass expansions
and square-bracket coefficients
"""

import cmath
import logging
import threading
from fractions import Fraction
from functools import lru_cache
from math import comb, factorial
from typing import Dict, Iterable, List, Optional, Tuple, Union

from errors import InhomogeneousInput, InvalidWeight, NonPositiveImaginaryPart
from exact_qseries import (
    QSeries,
    format_rational,
    qs_invert,
    qs_mul,
    qs_theta,
    sigma,
    eta,
    to_rational,
)

logging.basicConfig(level=logging.INFO)
logger = logging.getLogger(__name__)

Monomial = Tuple[int, int, int]
INHOMOGENEOUS = "inhomogeneous"

# E2 = P / P_TO_E2 etc.; fixed by the leading coefficients of the Eisenstein series
P_PER_E2 = Fraction(-12)
Q_PER_E4 = Fraction(720)
R_PER_E6 = Fraction(-30240)
GENERATOR_WEIGHTS = (2, 4, 6)


class BernoulliCache:
    """Bernoulli numbers with B_1 = -1/2, extended on demand under a lock."""

    def __init__(self):
        self.values: List[Fraction] = [Fraction(1)]
        self._lock = threading.Lock()

    def get(self, k: int) -> Fraction:
        if k < 0:
            raise ValueError("Bernoulli index must be non-negative")
        with self._lock:
            while len(self.values) <= k:
                n = len(self.values)
                # sum_{j=0}^{n} binom(n+1, j) B_j = 0
                total = sum(comb(n + 1, j) * b for j, b in enumerate(self.values))
                self.values.append(-total / (n + 1))
            return self.values[k]


_BERNOULLI = BernoulliCache()


def bernoulli(k: int) -> Fraction:
    """k-th Bernoulli number from z/(e^z - 1)."""
    return _BERNOULLI.get(k)


class QuasiModular:
    """Polynomial in P, Q, R with rational coefficients, keyed by exponent triples."""

    __slots__ = ("_terms",)

    def __init__(self, terms: Optional[Dict[Monomial, Union[int, Fraction]]] = None):
        cleaned = {}
        for mono, coeff in (terms or {}).items():
            coeff = to_rational(coeff)
            if coeff:
                cleaned[tuple(mono)] = coeff
        self._terms = cleaned

    @property
    def terms(self) -> Dict[Monomial, Fraction]:
        return dict(self._terms)

    @classmethod
    def constant(cls, value) -> "QuasiModular":
        return cls({(0, 0, 0): value})

    def is_zero(self) -> bool:
        return not self._terms

    def items(self):
        return self._terms.items()

    # -- arithmetic ---------------------------------------------------------

    def __add__(self, other: "QuasiModular") -> "QuasiModular":
        if isinstance(other, (int, Fraction)):
            other = QuasiModular.constant(other)
        if not isinstance(other, QuasiModular):
            return NotImplemented
        result = dict(self._terms)
        for mono, coeff in other._terms.items():
            result[mono] = result.get(mono, 0) + coeff
        return QuasiModular(result)

    __radd__ = __add__

    def __neg__(self) -> "QuasiModular":
        return QuasiModular({m: -c for m, c in self._terms.items()})

    def __sub__(self, other: "QuasiModular") -> "QuasiModular":
        return self + (-other)

    def __mul__(self, other) -> "QuasiModular":
        if isinstance(other, (int, Fraction)):
            return QuasiModular({m: c * other for m, c in self._terms.items()})
        if not isinstance(other, QuasiModular):
            return NotImplemented
        result: Dict[Monomial, Fraction] = {}
        for (a1, b1, c1), x in self._terms.items():
            for (a2, b2, c2), y in other._terms.items():
                key = (a1 + a2, b1 + b2, c1 + c2)
                result[key] = result.get(key, 0) + x * y
        return QuasiModular(result)

    __rmul__ = __mul__

    def __pow__(self, k: int) -> "QuasiModular":
        if k < 0:
            raise ValueError("quasimodular forms have no inverses in this ring")
        result = QuasiModular.constant(1)
        for _ in range(k):
            result = result * self
        return result

    def __eq__(self, other) -> bool:
        if isinstance(other, (int, Fraction)):
            other = QuasiModular.constant(other)
        if not isinstance(other, QuasiModular):
            return NotImplemented
        return self._terms == other._terms

    def __hash__(self) -> int:
        return hash(frozenset(self._terms.items()))

    def __repr__(self) -> str:
        return f"QuasiModular({format_pqr(self)})"

    # -- grading ------------------------------------------------------------

    def weights(self) -> set:
        return {monomial_weight(m) for m in self._terms}

    def weight(self) -> Optional[int]:
        """Common weight of all monomials, None when inhomogeneous; zero has weight 0."""
        found = self.weights()
        if not found:
            return 0
        if len(found) == 1:
            return found.pop()
        return None

    # -- conversions --------------------------------------------------------

    def to_qseries(self, order: int) -> QSeries:
        return qm_to_qseries(self, order)

    def evaluate_numeric(self, values: Tuple[complex, complex, complex]) -> complex:
        p, q, r = values
        total = 0j
        for (i, j, k), coeff in self._terms.items():
            total += float(coeff) * (p ** i) * (q ** j) * (r ** k)
        return total

    def to_e_basis(self) -> Dict[Monomial, Fraction]:
        """Coefficients against E2^a E4^b E6^c monomials."""
        return {
            (i, j, k): c * P_PER_E2 ** i * Q_PER_E4 ** j * R_PER_E6 ** k
            for (i, j, k), c in self._terms.items()
        }

    @classmethod
    def from_e_basis(cls, terms: Dict[Monomial, Union[int, Fraction]]) -> "QuasiModular":
        return cls({
            (a, b, c): to_rational(x) / (P_PER_E2 ** a * Q_PER_E4 ** b * R_PER_E6 ** c)
            for (a, b, c), x in terms.items()
        })

    def to_list(self) -> List[Dict]:
        return [
            {"P": i, "Q": j, "R": k, "coeff": format_rational(c)}
            for (i, j, k), c in sorted(self._terms.items(), reverse=True)
        ]

    @classmethod
    def from_list(cls, data: Iterable[Dict]) -> "QuasiModular":
        return cls({(d["P"], d["Q"], d["R"]): Fraction(d["coeff"]) for d in data})


def monomial_weight(mono: Monomial) -> int:
    return 2 * mono[0] + 4 * mono[1] + 6 * mono[2]


def format_pqr(f: QuasiModular) -> str:
    """Plain P, Q, R rendering used in reprs and as the CLI fallback."""
    if f.is_zero():
        return "0"
    parts = []
    for (i, j, k), c in sorted(f.items(), reverse=True):
        factors = [
            name if e == 1 else f"{name}^{e}"
            for name, e in (("P", i), ("Q", j), ("R", k)) if e
        ]
        parts.append((c, factors))
    return join_signed_terms(parts)


def join_signed_terms(parts: List[Tuple[Fraction, List[str]]]) -> str:
    """Join (coefficient, factor names) pairs as "-90·E2·E4 + 3·E6"."""
    out = ""
    for index, (coeff, factors) in enumerate(parts):
        sign = "-" if coeff < 0 else "+"
        mag = abs(coeff)
        if factors:
            body = "·".join(factors)
            text = body if mag == 1 else f"{format_rational(mag)}·{body}"
        else:
            text = format_rational(mag)
        if index == 0:
            out = f"-{text}" if sign == "-" else text
        else:
            out += f" {sign} {text}"
    return out


def qm_P() -> QuasiModular:
    return QuasiModular({(1, 0, 0): 1})


def qm_Q() -> QuasiModular:
    return QuasiModular({(0, 1, 0): 1})


def qm_R() -> QuasiModular:
    return QuasiModular({(0, 0, 1): 1})


def qm_add(f: QuasiModular, g: QuasiModular) -> QuasiModular:
    return f + g


def qm_mul(f: QuasiModular, g: QuasiModular) -> QuasiModular:
    return f * g


def qm_sub(f: QuasiModular, g: QuasiModular) -> QuasiModular:
    return f - g


def qm_scale(f: QuasiModular, r) -> QuasiModular:
    return f * to_rational(r)


def qm_pow(f: QuasiModular, k: int) -> QuasiModular:
    return f ** k


def qm_from_e_basis(terms: Dict[Monomial, Union[int, Fraction]]) -> QuasiModular:
    """Form given by E2^a E4^b E6^c exponents {(a, b, c): coeff}."""
    return QuasiModular.from_e_basis(terms)


def qm_weight(f: QuasiModular) -> Union[int, str]:
    """Weight of a homogeneous form, or "inhomogeneous"."""
    w = f.weight()
    return INHOMOGENEOUS if w is None else w


def eisenstein_qexp(k: int, order: int) -> QSeries:
    """E_k = -B_k/k! + 2/(k-1)! sum sigma_{k-1}(n) q^n; odd k gives zero."""
    if k < 2:
        raise InvalidWeight(f"Eisenstein series need weight k >= 2, got {k}")
    if k % 2:
        return QSeries.zero(order)
    constant = -bernoulli(k) / factorial(k)
    scale = Fraction(2, factorial(k - 1))
    coeffs = [constant] + [scale * sigma(k - 1, n) for n in range(1, order + 1)]
    return QSeries(coeffs)


@lru_cache(maxsize=None)
def _generator_series(order: int) -> Tuple[QSeries, QSeries, QSeries]:
    return (
        eisenstein_qexp(2, order).scale(P_PER_E2),
        eisenstein_qexp(4, order).scale(Q_PER_E4),
        eisenstein_qexp(6, order).scale(R_PER_E6),
    )


def qm_to_qseries(f: QuasiModular, order: int) -> QSeries:
    """q-expansion of f to the given order."""
    gens = _generator_series(order)
    powers: Dict[Tuple[int, int], QSeries] = {}

    def power(index: int, e: int) -> QSeries:
        key = (index, e)
        if key not in powers:
            powers[key] = QSeries.one(order) if e == 0 else qs_mul(power(index, e - 1), gens[index])
        return powers[key]

    total = [Fraction(0)] * (order + 1)
    for (i, j, k), c in f.items():
        term = qs_mul(qs_mul(power(0, i), power(1, j)), power(2, k))
        for n, a in enumerate(term.coeffs):
            total[n] += c * a
    return QSeries(total)


def eisenstein_qm(k: int) -> QuasiModular:
    """E_k as an element of Q[P, Q, R]; zero for odd k."""
    if k < 2:
        raise InvalidWeight(f"Eisenstein series need weight k >= 2, got {k}")
    if k % 2:
        return QuasiModular()
    return _eisenstein_qm_even(k // 2)


@lru_cache(maxsize=None)
def _eisenstein_qm_even(half: int) -> QuasiModular:
    if half == 1:
        return qm_P() * (1 / P_PER_E2)
    if half == 2:
        return qm_Q() * (1 / Q_PER_E4)
    if half == 3:
        return qm_R() * (1 / R_PER_E6)
    # (2k-1) E_2k = 3/((2k+1)(k-3)) sum_{m=2}^{k-2} (2m-1)E_2m (2k-2m-1)E_{2k-2m}
    total = QuasiModular()
    for m in range(2, half - 1):
        total = total + (
            _eisenstein_qm_even(m) * (2 * m - 1) * _eisenstein_qm_even(half - m) * (2 * (half - m) - 1)
        )
    factor = Fraction(3, (2 * half + 1) * (half - 3) * (2 * half - 1))
    return total * factor


def _theta_generator(index: int) -> QuasiModular:
    p, q, r = qm_P(), qm_Q(), qm_R()
    if index == 0:
        return (p * p - q) * Fraction(1, 12)
    if index == 1:
        return (p * q - r) * Fraction(1, 3)
    return (p * r - q * q) * Fraction(1, 2)


def qm_theta(f: QuasiModular) -> QuasiModular:
    """theta = q d/dq as a derivation of Q[P, Q, R]."""
    result = QuasiModular()
    thetas = [_theta_generator(i) for i in range(3)]
    for (i, j, k), c in f.items():
        exps = [i, j, k]
        for index in range(3):
            e = exps[index]
            if e == 0:
                continue
            lowered = list(exps)
            lowered[index] -= 1
            result = result + QuasiModular({tuple(lowered): c * e}) * thetas[index]
    return result


def modular_derivative(f: QuasiModular, weight: Optional[int] = None) -> QuasiModular:
    """D_k f = theta f + k E2 f for f homogeneous of weight k."""
    k = f.weight() if weight is None else weight
    if k is None:
        raise InhomogeneousInput("the modular derivative needs a homogeneous form")
    if weight is not None and not f.is_zero() and f.weight() != weight:
        raise InhomogeneousInput(f"form does not have weight {weight}")
    return qm_theta(f) + eisenstein_qm(2) * f * k


def delta(order: int) -> QSeries:
    """Delta = q prod (1 - q^n)^24, offset 1."""
    return eta(order).power(24)


def delta_from_qr(order: int) -> QSeries:
    """Delta = (Q^3 - R^2)/1728, re-expressed with offset 1."""
    f = (qm_Q() ** 3 - qm_R() ** 2) * Fraction(1, 1728)
    series = qm_to_qseries(f, order + 1)
    if series.coeffs[0] != 0:
        raise ArithmeticError("Q^3 - R^2 must vanish at the cusp")
    return QSeries(series.coeffs[1:], 1)


def delta_qm() -> QuasiModular:
    return (qm_Q() ** 3 - qm_R() ** 2) * Fraction(1, 1728)


def j_function(order: int) -> QSeries:
    """j = Q^3 / Delta with offset -1; coefficients q^-1 .. q^(order-1)."""
    return qs_mul(qm_to_qseries(qm_Q() ** 3, order), qs_invert(delta(order)))


def dim_Mk(k: int) -> int:
    """Dimension of the space of holomorphic modular forms of weight k."""
    if k < 0 or k % 2:
        return 0
    half = k // 2
    if half % 6 == 1:
        return half // 6
    return 1 + half // 6


def hilbert_series_dims(k_max: int) -> Dict[int, int]:
    """Coefficients of 1/((1-t^4)(1-t^6)) up to t^k_max."""
    dims = {}
    for k in range(0, k_max + 1):
        dims[k] = sum(1 for b in range(0, k // 6 + 1) if (k - 6 * b) % 4 == 0)
    return dims


def coeff_C(k: int, l: int) -> QuasiModular:
    """(-1)^(l+1) (k+l-1)!/((k-1)!(l-1)!) E_{k+l}; zero when k+l is odd."""
    if k < 1 or l < 1:
        raise InvalidWeight(f"C(k, l) needs k, l >= 1, got ({k}, {l})")
    return _coeff_C(k, l)


@lru_cache(maxsize=None)
def _coeff_C(k: int, l: int) -> QuasiModular:
    if (k + l) % 2:
        return QuasiModular()
    sign = 1 if (l + 1) % 2 == 0 else -1
    scale = Fraction(sign * factorial(k + l - 1), factorial(k - 1) * factorial(l - 1))
    return eisenstein_qm(k + l) * scale


class ZLaurent:
    """Laurent polynomial in z with quasimodular coefficients, known through z^z_order."""

    def __init__(self, terms: Dict[int, QuasiModular], z_order: int):
        self.terms = {p: f for p, f in terms.items() if not f.is_zero() and p <= z_order}
        self.z_order = z_order

    def coefficient(self, power: int) -> QuasiModular:
        if power > self.z_order:
            raise IndexError(f"z^{power} lies beyond the truncation order {self.z_order}")
        return self.terms.get(power, QuasiModular())

    def __repr__(self) -> str:
        shown = ", ".join(f"z^{p}: {format_pqr(f)}" for p, f in sorted(self.terms.items()))
        return f"ZLaurent({shown}; O(z^{self.z_order + 1}))"


def weierstrass_P1m(m: int, z_order: int) -> ZLaurent:
    """m-th z-derivative of P1: m![(-1)^(m+1) z^(-m-1) + sum binom(k-1, m) E_k z^(k-m-1)]."""
    if m < 0 or z_order < 0:
        raise ValueError("m and z_order must be non-negative")
    mf = factorial(m)
    terms = {-m - 1: QuasiModular.constant((-1) ** (m + 1) * mf)}
    k = m + 1
    while k - m - 1 <= z_order:
        if k >= 2:
            terms[k - m - 1] = eisenstein_qm(k) * (mf * comb(k - 1, m))
        k += 1
    return ZLaurent(terms, z_order)


def p2_two_variable_coefficient(k: int, l: int) -> QuasiModular:
    """z1^(k-1) z2^(l-1) coefficient of the regular part of P2(z1 - z2)."""
    n = k + l
    # (n-1) E_n (z1 - z2)^(n-2), binomial term z1^(k-1) (-z2)^(l-1)
    base = weierstrass_P1m(1, n - 2).coefficient(n - 2)
    return base * (comb(n - 2, k - 1) * (-1) ** (l - 1))


def square_bracket_coeff(k: int, i: int, m: int) -> Fraction:
    """Coefficient of x^m in binom(k - 1 + x, i)."""
    if not (i >= m >= 0):
        raise ValueError(f"need i >= m >= 0, got i={i}, m={m}")
    poly = [Fraction(1)]
    for j in range(i):
        shift = Fraction(k - 1 - j)
        nxt = [Fraction(0)] * (len(poly) + 1)
        for d, a in enumerate(poly):
            nxt[d] += a * shift
            nxt[d + 1] += a
        poly = nxt
    return poly[m] / factorial(i)


def square_bracket_coeff_series(k: int, i: int, m: int) -> Fraction:
    """Coefficient of w^i in ln(1+w)^m (1+w)^(k-1) / m!, by series arithmetic."""
    log_series = QSeries([0] + [Fraction((-1) ** (n + 1), n) for n in range(1, i + 1)])
    binomial = [Fraction(1)]
    for n in range(1, i + 1):
        binomial.append(binomial[-1] * (k - 1 - (n - 1)) / n)
    product = QSeries(binomial)
    for _ in range(m):
        product = qs_mul(product, log_series)
    return product.coeffs[i] / factorial(m)


def verify_square_bracket_identity(k: int, n: int) -> bool:
    """sum_i binom(n, i) v_i = sum_m (n+1-k)^m/m! v[m], compared coefficientwise in v_i."""
    x = n + 1 - k
    for i in range(0, n + 3):
        expanded = sum(square_bracket_coeff(k, i, m) * Fraction(x) ** m for m in range(i + 1))
        if expanded != comb(n, i):
            logger.debug(f"square-bracket identity fails at k={k}, n={n}, i={i}")
            return False
    return True


@lru_cache(maxsize=64)
def generator_values(tau: complex, order: int) -> Tuple[complex, complex, complex]:
    """Numeric P, Q, R at tau from their order-N expansions."""
    p, q, r = _generator_series(order)
    return p.evaluate(tau), q.evaluate(tau), r.evaluate(tau)


def qm_eval_numeric(f: QuasiModular, tau: complex, order: int) -> complex:
    tau = complex(tau)
    if tau.imag <= 0:
        raise NonPositiveImaginaryPart(f"Im(tau) must be positive, got {tau}")
    if f.is_zero():
        return 0j
    return f.evaluate_numeric(generator_values(tau, order))


def mobius(gamma: Tuple[int, int, int, int], tau: complex) -> complex:
    a, b, c, d = gamma
    return (a * tau + b) / (c * tau + d)


def e2_transformation_residual(gamma: Tuple[int, int, int, int], tau: complex, order: int) -> float:
    """|E2(g tau)(c tau + d)^-2 - E2(tau) + c/(2 pi i (c tau + d))|."""
    _, _, c, d = gamma
    tau = complex(tau)
    e2 = eisenstein_qm(2)
    j = c * tau + d
    lhs = qm_eval_numeric(e2, mobius(gamma, tau), order) / j ** 2 - qm_eval_numeric(e2, tau, order)
    rhs = -c / (2j * cmath.pi * j)
    return abs(lhs - rhs)


def _self_check() -> None:
    p, q, r = _generator_series(2)
    assert p.coeffs == (1, -24, -72), p
    assert q.coeffs == (1, 240, 2160), q
    assert r.coeffs == (1, -504, -16632), r
    logger.debug("P, Q, R normalisation constants verified")
    order = 12
    for name, generator in (("P", qm_P()), ("Q", qm_Q()), ("R", qm_R())):
        expected = qs_theta(qm_to_qseries(generator, order))
        assert qm_to_qseries(qm_theta(generator), order) == expected, f"theta rule for {name}"
    logger.debug(f"theta derivation rules verified to order {order}")


_self_check()
