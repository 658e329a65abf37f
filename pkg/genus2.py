"""
Genus Two Sewing Module
A-matrices of two sewn tori, det(I - A1 A2) as an epsilon series, the period matrix,
the genus-two Heisenberg partition function and its numeric modular checks
"""

import cmath
import logging
from fractions import Fraction
from functools import lru_cache
from typing import Dict, Iterable, List, Optional, Sequence, Tuple, Union

import numpy as np

from errors import CutoffTooSmall, NonPositiveImaginaryPart, OutsideDomain
from exact_qseries import eta, format_rational, to_rational
from heisenberg import enumerate_partitions, liz_norm, qv_zhu_recursion
from quasimodular import (
    Monomial,
    QuasiModular,
    coeff_C,
    generator_values,
    mobius,
    monomial_weight,
    P_PER_E2,
    Q_PER_E4,
    R_PER_E6,
)

logging.basicConfig(level=logging.INFO)
logger = logging.getLogger(__name__)

BiMonomial = Tuple[Monomial, Monomial]
ZERO_MONO: Monomial = (0, 0, 0)


class TwoVarQuasiModular:
    """Polynomial in P, Q, R at tau1 and P', Q', R' at tau2 with rational coefficients."""

    __slots__ = ("_terms",)

    def __init__(self, terms: Optional[Dict[BiMonomial, Union[int, Fraction]]] = None):
        self._terms = {
            (tuple(m1), tuple(m2)): to_rational(c)
            for (m1, m2), c in (terms or {}).items() if c
        }

    @classmethod
    def constant(cls, value) -> "TwoVarQuasiModular":
        return cls({(ZERO_MONO, ZERO_MONO): value})

    @classmethod
    def from_sides(cls, left: QuasiModular, right: QuasiModular) -> "TwoVarQuasiModular":
        """left(tau1) * right(tau2)."""
        out: Dict[BiMonomial, Fraction] = {}
        for m1, c1 in left.items():
            for m2, c2 in right.items():
                out[(m1, m2)] = c1 * c2
        return cls(out)

    @classmethod
    def embed(cls, f: QuasiModular, side: int) -> "TwoVarQuasiModular":
        one = QuasiModular.constant(1)
        return cls.from_sides(f, one) if side == 1 else cls.from_sides(one, f)

    @property
    def terms(self) -> Dict[BiMonomial, Fraction]:
        return dict(self._terms)

    def items(self):
        return self._terms.items()

    def is_zero(self) -> bool:
        return not self._terms

    def __add__(self, other: "TwoVarQuasiModular") -> "TwoVarQuasiModular":
        if not isinstance(other, TwoVarQuasiModular):
            return NotImplemented
        out = dict(self._terms)
        for key, c in other._terms.items():
            out[key] = out.get(key, 0) + c
        return TwoVarQuasiModular(out)

    def __neg__(self) -> "TwoVarQuasiModular":
        return TwoVarQuasiModular({k: -c for k, c in self._terms.items()})

    def __sub__(self, other: "TwoVarQuasiModular") -> "TwoVarQuasiModular":
        return self + (-other)

    def __mul__(self, other) -> "TwoVarQuasiModular":
        if isinstance(other, (int, Fraction)):
            return TwoVarQuasiModular({k: c * other for k, c in self._terms.items()})
        if not isinstance(other, TwoVarQuasiModular):
            return NotImplemented
        out: Dict[BiMonomial, Fraction] = {}
        for ((a1, b1, c1), (a2, b2, c2)), x in self._terms.items():
            for ((d1, e1, f1), (d2, e2, f2)), y in other._terms.items():
                key = ((a1 + d1, b1 + e1, c1 + f1), (a2 + d2, b2 + e2, c2 + f2))
                out[key] = out.get(key, 0) + x * y
        return TwoVarQuasiModular(out)

    __rmul__ = __mul__

    def __eq__(self, other) -> bool:
        if not isinstance(other, TwoVarQuasiModular):
            return NotImplemented
        return self._terms == other._terms

    def __hash__(self) -> int:
        return hash(frozenset(self._terms.items()))

    def __repr__(self) -> str:
        return f"TwoVarQuasiModular({len(self._terms)} terms)"

    def swap(self) -> "TwoVarQuasiModular":
        """Exchange the roles of tau1 and tau2."""
        return TwoVarQuasiModular({(m2, m1): c for (m1, m2), c in self._terms.items()})

    def bidegrees(self) -> set:
        """(tau1-weight, tau2-weight) of every monomial."""
        return {(monomial_weight(m1), monomial_weight(m2)) for (m1, m2) in self._terms}

    def constant_value(self) -> Optional[Fraction]:
        """The rational value if this is a constant, else None."""
        if not self._terms:
            return Fraction(0)
        if set(self._terms) == {(ZERO_MONO, ZERO_MONO)}:
            return self._terms[(ZERO_MONO, ZERO_MONO)]
        return None

    def to_e_basis(self) -> Dict[BiMonomial, Fraction]:
        def scale(m: Monomial) -> Fraction:
            return P_PER_E2 ** m[0] * Q_PER_E4 ** m[1] * R_PER_E6 ** m[2]

        return {(m1, m2): c * scale(m1) * scale(m2) for (m1, m2), c in self._terms.items()}

    @classmethod
    def from_e_basis(cls, terms: Dict[BiMonomial, Union[int, Fraction]]) -> "TwoVarQuasiModular":
        def scale(m: Monomial) -> Fraction:
            return P_PER_E2 ** m[0] * Q_PER_E4 ** m[1] * R_PER_E6 ** m[2]

        return cls({(m1, m2): to_rational(c) / (scale(m1) * scale(m2)) for (m1, m2), c in terms.items()})

    def evaluate_numeric(self, values1, values2) -> complex:
        p1, q1, r1 = values1
        p2, q2, r2 = values2
        total = 0j
        for ((i1, j1, k1), (i2, j2, k2)), c in self._terms.items():
            total += float(c) * p1 ** i1 * q1 ** j1 * r1 ** k1 * p2 ** i2 * q2 ** j2 * r2 ** k2
        return total

    def to_list(self) -> List[Dict]:
        return [
            {"tau1": {"P": m1[0], "Q": m1[1], "R": m1[2]},
             "tau2": {"P": m2[0], "Q": m2[1], "R": m2[2]},
             "coeff": format_rational(c)}
            for (m1, m2), c in sorted(self._terms.items(), reverse=True)
        ]

    @classmethod
    def from_list(cls, data: Iterable[Dict]) -> "TwoVarQuasiModular":
        return cls({
            ((d["tau1"]["P"], d["tau1"]["Q"], d["tau1"]["R"]),
             (d["tau2"]["P"], d["tau2"]["Q"], d["tau2"]["R"])): Fraction(d["coeff"])
            for d in data
        })


TV_ZERO = TwoVarQuasiModular()
TV_ONE = TwoVarQuasiModular.constant(1)


class EpsSeries:
    """sum_{n=0}^{N} c_n eps^n + O(eps^(N+1)) with TwoVarQuasiModular coefficients."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Sequence[TwoVarQuasiModular]):
        if not coeffs:
            raise ValueError("an EpsSeries needs at least the constant coefficient")
        self.coeffs = tuple(coeffs)

    @classmethod
    def zero(cls, order: int) -> "EpsSeries":
        return cls([TV_ZERO] * (order + 1))

    @classmethod
    def one(cls, order: int) -> "EpsSeries":
        return cls([TV_ONE] + [TV_ZERO] * order)

    @classmethod
    def monomial(cls, power: int, coeff: TwoVarQuasiModular, order: int) -> "EpsSeries":
        values = [TV_ZERO] * (order + 1)
        if power <= order:
            values[power] = coeff
        return cls(values)

    @property
    def trunc_order(self) -> int:
        return len(self.coeffs) - 1

    def __getitem__(self, n: int) -> TwoVarQuasiModular:
        return self.coeffs[n]

    def is_zero(self) -> bool:
        return all(c.is_zero() for c in self.coeffs)

    def __add__(self, other: "EpsSeries") -> "EpsSeries":
        order = min(self.trunc_order, other.trunc_order)
        return EpsSeries([self.coeffs[n] + other.coeffs[n] for n in range(order + 1)])

    def __neg__(self) -> "EpsSeries":
        return EpsSeries([-c for c in self.coeffs])

    def __sub__(self, other: "EpsSeries") -> "EpsSeries":
        return self + (-other)

    def __mul__(self, other) -> "EpsSeries":
        if isinstance(other, (int, Fraction)):
            return EpsSeries([c * other for c in self.coeffs])
        if not isinstance(other, EpsSeries):
            return NotImplemented
        order = min(self.trunc_order, other.trunc_order)
        out = [TV_ZERO] * (order + 1)
        for i, a in enumerate(self.coeffs[: order + 1]):
            if a.is_zero():
                continue
            for j in range(order + 1 - i):
                b = other.coeffs[j]
                if not b.is_zero():
                    out[i + j] = out[i + j] + a * b
        return EpsSeries(out)

    __rmul__ = __mul__

    def __eq__(self, other) -> bool:
        return isinstance(other, EpsSeries) and self.coeffs == other.coeffs

    def __hash__(self) -> int:
        return hash(self.coeffs)

    def __repr__(self) -> str:
        nonzero = [n for n, c in enumerate(self.coeffs) if not c.is_zero()]
        return f"EpsSeries(N={self.trunc_order}, nonzero powers={nonzero})"

    def shift(self, power: int) -> "EpsSeries":
        """Multiply by eps^power, keeping the truncation order."""
        values = [TV_ZERO] * power + list(self.coeffs)
        return EpsSeries(values[: self.trunc_order + 1])

    def swap(self) -> "EpsSeries":
        return EpsSeries([c.swap() for c in self.coeffs])

    def exp(self) -> "EpsSeries":
        """exp of a series with vanishing constant term."""
        if not self.coeffs[0].is_zero():
            raise ValueError("exp needs a vanishing constant term")
        out = [TV_ONE]
        for n in range(1, self.trunc_order + 1):
            total = TV_ZERO
            for k in range(1, n + 1):
                if not self.coeffs[k].is_zero() and not out[n - k].is_zero():
                    total = total + self.coeffs[k] * out[n - k] * k
            out.append(total * Fraction(1, n))
        return EpsSeries(out)

    def inverse(self) -> "EpsSeries":
        """Inverse of a series whose constant term is a non-zero rational."""
        a0 = self.coeffs[0].constant_value()
        if not a0:
            raise ValueError("inverse needs a non-zero rational constant term")
        inv0 = 1 / a0
        out = [TV_ONE * inv0]
        for n in range(1, self.trunc_order + 1):
            total = TV_ZERO
            for k in range(1, n + 1):
                if not self.coeffs[k].is_zero() and not out[n - k].is_zero():
                    total = total + self.coeffs[k] * out[n - k]
            out.append(total * (-inv0))
        return EpsSeries(out)

    def power(self, k: int) -> "EpsSeries":
        if k < 0:
            return self.inverse().power(-k)
        result = EpsSeries.one(self.trunc_order)
        for _ in range(k):
            result = result * self
        return result

    def evaluate(self, tau1: complex, tau2: complex, eps: complex, q_order: int = 40) -> complex:
        """Numeric value of the truncated series at (tau1, tau2, eps)."""
        for tau in (tau1, tau2):
            if complex(tau).imag <= 0:
                raise NonPositiveImaginaryPart(f"Im(tau) must be positive, got {tau}")
        values1 = generator_values(complex(tau1), q_order)
        values2 = generator_values(complex(tau2), q_order)
        total = 0j
        for n, coeff in enumerate(self.coeffs):
            if not coeff.is_zero():
                total += coeff.evaluate_numeric(values1, values2) * complex(eps) ** n
        return total

    def to_list(self) -> List[Dict]:
        return [{"power": n, "coeff": c.to_list()} for n, c in enumerate(self.coeffs)]

    @classmethod
    def from_list(cls, data: Sequence[Dict]) -> "EpsSeries":
        ordered = sorted(data, key=lambda d: d["power"])
        return cls([TwoVarQuasiModular.from_list(d["coeff"]) for d in ordered])


Matrix = Dict[Tuple[int, int], EpsSeries]


class RescaledAMatrix:
    """M(k, l) = eps^((k+l)/2) C(k, l, tau_a) / l for 1 <= k, l <= K, truncated at eps^N."""

    def __init__(self, side: int, cutoff: int, order: int, divisor: str = "l"):
        if side not in (1, 2):
            raise ValueError(f"side must be 1 or 2, got {side}")
        if divisor not in ("k", "l"):
            raise ValueError("divisor must be 'k' or 'l'")
        self.side = side
        self.cutoff = cutoff
        self.order = order
        self.divisor = divisor
        self.entries: Matrix = {}
        for k in range(1, cutoff + 1):
            for l in range(1, cutoff + 1):
                if (k + l) % 2 or (k + l) // 2 > order:
                    continue
                scale = Fraction(1, l if divisor == "l" else k)
                coeff = TwoVarQuasiModular.embed(coeff_C(k, l) * scale, side)
                if not coeff.is_zero():
                    self.entries[(k, l)] = EpsSeries.monomial((k + l) // 2, coeff, order)

    def entry(self, k: int, l: int) -> EpsSeries:
        return self.entries.get((k, l), EpsSeries.zero(self.order))


def build_a_matrix(side: int, cutoff: int, order: int, divisor: str = "l") -> RescaledAMatrix:
    return RescaledAMatrix(side, cutoff, order, divisor)


def matmul(a: Matrix, b: Matrix, order: int) -> Matrix:
    """Sparse product of EpsSeries-valued matrices."""
    rows: Dict[int, List[Tuple[int, EpsSeries]]] = {}
    for (m, l), value in b.items():
        rows.setdefault(m, []).append((l, value))
    out: Matrix = {}
    for (k, m), left in a.items():
        for l, right in rows.get(m, ()):
            term = left * right
            if term.is_zero():
                continue
            out[(k, l)] = out[(k, l)] + term if (k, l) in out else term
    return {key: value for key, value in out.items() if not value.is_zero()}


def trace(a: Matrix, order: int) -> EpsSeries:
    total = EpsSeries.zero(order)
    for (k, l), value in a.items():
        if k == l:
            total = total + value
    return total


def _check_cutoff(cutoff: int, order: int) -> None:
    if cutoff < order:
        raise CutoffTooSmall(f"cutoff K = {cutoff} cannot resolve eps^{order}; need K >= N")


def default_cutoff(order: int) -> int:
    return max(2 * order, 1)


def trace_powers(cutoff: int, order: int, divisor: str = "l") -> List[EpsSeries]:
    """Tr((M1 M2)^n) for n = 1, 2, ... until the powers vanish below eps^(N+1)."""
    _check_cutoff(cutoff, order)
    m1 = build_a_matrix(1, cutoff, order, divisor).entries
    m2 = build_a_matrix(2, cutoff, order, divisor).entries
    product = matmul(m1, m2, order)
    power = product
    traces = []
    while power:
        traces.append(trace(power, order))
        power = matmul(power, product, order)
    logger.info(f"Computed {len(traces)} trace powers at K={cutoff}, N={order}")
    return traces


@lru_cache(maxsize=None)
def logdet_series(cutoff: int, order: int) -> EpsSeries:
    """log det(I - A1 A2) = -sum_n Tr((A1 A2)^n)/n."""
    total = EpsSeries.zero(order)
    for n, tr in enumerate(trace_powers(cutoff, order), start=1):
        total = total - tr * Fraction(1, n)
    return total


def det_series(cutoff: int, order: int) -> EpsSeries:
    """det(I - A1 A2)."""
    return logdet_series(cutoff, order).exp()


def det_inv_sqrt(cutoff: int, order: int) -> EpsSeries:
    """det(I - A1 A2)^(-1/2) = exp(-logdet/2)."""
    return (logdet_series(cutoff, order) * Fraction(-1, 2)).exp()


class PeriodEntry:
    """2 pi i Omega_ab = 2 pi i tau_atom + correction; tau_atom is 1, 2 or None."""

    def __init__(self, tau_atom: Optional[int], correction: EpsSeries):
        self.tau_atom = tau_atom
        self.correction = correction

    def evaluate(self, tau1: complex, tau2: complex, eps: complex, q_order: int = 40) -> complex:
        """Numeric Omega_ab (not multiplied by 2 pi i)."""
        linear = {1: complex(tau1), 2: complex(tau2)}.get(self.tau_atom, 0j)
        return linear + self.correction.evaluate(tau1, tau2, eps, q_order) / (2j * cmath.pi)

    def __repr__(self) -> str:
        atom = f"2πiτ{self.tau_atom} + " if self.tau_atom else ""
        return f"PeriodEntry({atom}{self.correction!r})"


def _resolvent_first_column(product: Matrix, order: int) -> Dict[int, EpsSeries]:
    """Column k -> sum_n (product^n)(k, 1), including the identity."""
    column = {1: EpsSeries.one(order)}
    power = {key: value for key, value in product.items() if key[1] == 1}
    while power:
        for (k, _), value in power.items():
            column[k] = column[k] + value if k in column else value
        power = matmul(product, power, order)
    return column


def period_matrix(cutoff: int, order: int) -> Tuple[PeriodEntry, PeriodEntry, PeriodEntry]:
    """(Omega11, Omega22, Omega12) from the resolvent of A1 A2."""
    _check_cutoff(cutoff, order)
    m1 = build_a_matrix(1, cutoff, order).entries
    m2 = build_a_matrix(2, cutoff, order).entries
    r12 = _resolvent_first_column(matmul(m1, m2, order), order)
    r21 = _resolvent_first_column(matmul(m2, m1, order), order)

    def first_row_times(m: Matrix, column: Dict[int, EpsSeries]) -> EpsSeries:
        total = EpsSeries.zero(order)
        for (k, l), value in m.items():
            if k == 1 and l in column:
                total = total + value * column[l]
        return total

    omega11 = first_row_times(m2, r12).shift(1)
    omega22 = first_row_times(m1, r21).shift(1)
    omega12 = -(r12[1].shift(1))
    return PeriodEntry(1, omega11), PeriodEntry(2, omega22), PeriodEntry(None, omega12)


def z2_heisenberg(rank: int, cutoff: int, order: int) -> Tuple[Dict, EpsSeries]:
    """Prefactor eta(tau1)^-r eta(tau2)^-r and the series part det(I - A1 A2)^(-r/2)."""
    if rank < 1:
        raise ValueError(f"rank must be positive, got {rank}")
    prefactor = {"eta_tau1_power": -rank, "eta_tau2_power": -rank}
    if rank % 2 == 0:
        series = det_series(cutoff, order).inverse().power(rank // 2)
    else:
        series = (logdet_series(cutoff, order) * Fraction(-rank, 2)).exp()
    return prefactor, series


def chequered_oracle(n: int) -> TwoVarQuasiModular:
    """eps^n coefficient of the rank-one series part as a sum over partitions of n."""
    total = TV_ZERO
    for p in enumerate_partitions(n):
        qv = qv_zhu_recursion(p)
        if qv.is_zero():
            continue
        total = total + TwoVarQuasiModular.from_sides(qv, qv) * (1 / liz_norm(p))
    return total


# -- numerics ----------------------------------------------------------------

SewingPoint = Tuple[complex, complex, complex]


def minimal_lattice_distance(tau: complex, search: int = 12) -> float:
    """min |lambda| over non-zero lambda in 2 pi i (Z + Z tau)."""
    best = float("inf")
    for m in range(-search, search + 1):
        for n in range(-search, search + 1):
            if m == 0 and n == 0:
                continue
            best = min(best, abs(2 * cmath.pi * (m + n * tau)))
    return best


def in_domain(tau1: complex, tau2: complex, eps: complex) -> bool:
    if complex(tau1).imag <= 0 or complex(tau2).imag <= 0:
        return False
    bound = 0.25 * minimal_lattice_distance(complex(tau1)) * minimal_lattice_distance(complex(tau2))
    return abs(eps) < bound


def act(gamma: Tuple, point: SewingPoint) -> SewingPoint:
    """Action of ("gamma1", (a,b,c,d)), ("gamma2", ...), ("beta",) or ("identity",)."""
    tau1, tau2, eps = (complex(x) for x in point)
    kind = gamma[0]
    if kind == "identity":
        return tau1, tau2, eps
    if kind == "beta":
        return tau2, tau1, eps
    if kind not in ("gamma1", "gamma2"):
        raise ValueError(f"unknown group element {gamma!r}")
    a, b, c, d = gamma[1]
    if kind == "gamma1":
        return mobius((a, b, c, d), tau1), tau2, eps / (c * tau1 + d)
    return tau1, mobius((a, b, c, d), tau2), eps / (c * tau2 + d)


def symplectic_blocks(gamma: Tuple) -> Tuple[np.ndarray, np.ndarray, np.ndarray, np.ndarray]:
    """A, B, C, D blocks of the image of gamma in Sp(4, Z)."""
    kind = gamma[0]
    eye = np.eye(2)
    zero = np.zeros((2, 2))
    if kind == "identity":
        return eye, zero, zero, eye
    if kind == "beta":
        swap = np.array([[0.0, 1.0], [1.0, 0.0]])
        return swap, zero, zero, swap
    a, b, c, d = gamma[1]
    slot = 0 if kind == "gamma1" else 1
    A, B, C, D = eye.copy(), zero.copy(), zero.copy(), eye.copy()
    A[slot, slot], B[slot, slot], C[slot, slot], D[slot, slot] = a, b, c, d
    return A, B, C, D


def period_matrix_numeric(point: SewingPoint, order: int, cutoff: Optional[int] = None,
                          q_order: int = 40) -> np.ndarray:
    cutoff = cutoff or default_cutoff(order)
    o11, o22, o12 = period_matrix(cutoff, order)
    tau1, tau2, eps = point
    v11 = o11.evaluate(tau1, tau2, eps, q_order)
    v22 = o22.evaluate(tau1, tau2, eps, q_order)
    v12 = o12.evaluate(tau1, tau2, eps, q_order)
    return np.array([[v11, v12], [v12, v22]], dtype=complex)


def z2_numeric(point: SewingPoint, order: int, rank: int = 2, cutoff: Optional[int] = None,
               q_order: int = 40) -> complex:
    """Numeric genus-two partition function of rank r."""
    cutoff = cutoff or default_cutoff(order)
    tau1, tau2, eps = point
    _, series = z2_heisenberg(rank, cutoff, order)
    eta1 = eta(q_order).evaluate(tau1)
    eta2 = eta(q_order).evaluate(tau2)
    return series.evaluate(tau1, tau2, eps, q_order) / (eta1 ** rank * eta2 ** rank)


def chi_genus_one(gamma: Tuple[int, int, int, int], tau: complex, q_order: int = 40) -> complex:
    """chi(gamma) = eta(tau)^2 (c tau + d) / eta(gamma tau)^2, from the eta transformation."""
    _, _, c, d = gamma
    series = eta(q_order)
    return series.evaluate(tau) ** 2 * (c * tau + d) / series.evaluate(mobius(gamma, tau)) ** 2


def chi_genus_two(gamma: Tuple, point: SewingPoint, q_order: int = 40) -> complex:
    kind = gamma[0]
    if kind == "identity":
        return 1
    if kind == "beta":
        return -1
    tau = point[0] if kind == "gamma1" else point[1]
    return chi_genus_one(gamma[1], complex(tau), q_order)


def numeric_equivariance_check(gamma: Tuple, tau1: complex, tau2: complex, eps: complex,
                               order: int, q_order: int = 40) -> float:
    """|Z(gamma.p) det(C Omega + D) - chi(gamma) Z(p)| for the rank-two partition function."""
    point = (complex(tau1), complex(tau2), complex(eps))
    image = act(gamma, point)
    for label, p in (("point", point), ("image", image)):
        if not in_domain(*p):
            raise OutsideDomain(f"{label} {p} lies outside the sewing domain")
    _, _, C, D = symplectic_blocks(gamma)
    omega = period_matrix_numeric(point, order, q_order=q_order)
    factor = np.linalg.det(C @ omega + D)
    lhs = z2_numeric(image, order, q_order=q_order) * factor
    rhs = chi_genus_two(gamma, point, q_order) * z2_numeric(point, order, q_order=q_order)
    residual = abs(lhs - rhs)
    logger.info(f"Equivariance residual for {gamma[0]}: {residual:.3e}")
    return float(residual)


def period_equivariance_residual(gamma: Tuple, tau1: complex, tau2: complex, eps: complex,
                                 order: int, q_order: int = 40) -> float:
    """max |Omega(gamma.p) - (A Omega + B)(C Omega + D)^-1| over the entries."""
    point = (complex(tau1), complex(tau2), complex(eps))
    image = act(gamma, point)
    for label, p in (("point", point), ("image", image)):
        if not in_domain(*p):
            raise OutsideDomain(f"{label} {p} lies outside the sewing domain")
    A, B, C, D = symplectic_blocks(gamma)
    omega = period_matrix_numeric(point, order, q_order=q_order)
    transformed = (A @ omega + B) @ np.linalg.inv(C @ omega + D)
    direct = period_matrix_numeric(image, order, q_order=q_order)
    return float(np.max(np.abs(direct - transformed)))
