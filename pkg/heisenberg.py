"""
Heisenberg Correlation Module
Partitions, fixed-point-free involutions, genus-one Q_v(tau) and genus-zero n-point functions
of the rank-one Heisenberg vertex operator algebra
"""

import itertools
import logging
import re
from collections import Counter
from fractions import Fraction
from functools import lru_cache
from math import factorial
from typing import Dict, Iterator, List, Sequence, Tuple

from errors import CoincidentPoints, OddArity, PartitionSyntaxError
from exact_qseries import QSeries, eta_inverse, qs_mul, to_rational
from quasimodular import QuasiModular, coeff_C, p2_two_variable_coefficient, qm_to_qseries

logging.basicConfig(level=logging.INFO)
logger = logging.getLogger(__name__)

Pairing = Tuple[Tuple[int, int], ...]


class Partition:
    """Multiset of positive parts labelling the Fock vector a[-k1]...a[-kn]1."""

    __slots__ = ("parts",)

    def __init__(self, parts: Sequence[int] = ()):
        parts = tuple(sorted((int(k) for k in parts), reverse=True))
        if any(k <= 0 for k in parts):
            raise PartitionSyntaxError(f"partition parts must be positive: {parts}")
        self.parts = parts

    @classmethod
    def from_exponents(cls, exponents: Dict[int, int]) -> "Partition":
        parts = []
        for part, count in exponents.items():
            parts.extend([part] * count)
        return cls(parts)

    def exponents(self) -> Dict[int, int]:
        """Exponent form {i: e_i} of 1^e1 2^e2 ..."""
        return dict(sorted(Counter(self.parts).items()))

    @property
    def weight(self) -> int:
        return sum(self.parts)

    def __len__(self) -> int:
        return len(self.parts)

    def __iter__(self):
        return iter(self.parts)

    def __eq__(self, other) -> bool:
        return isinstance(other, Partition) and self.parts == other.parts

    def __hash__(self) -> int:
        return hash(self.parts)

    def __repr__(self) -> str:
        return f"Partition({format_partition(self)})"


def format_partition(p: Partition) -> str:
    """Exponent notation "1^3 2^2 5"; the empty partition prints as "{}"."""
    if not p.parts:
        return "{}"
    return " ".join(str(k) if e == 1 else f"{k}^{e}" for k, e in p.exponents().items())


_TOKEN = re.compile(r"^(\d+)(?:\^(\d+))?$")


def parse_partition(text: str) -> Partition:
    """Parse "1,1,1,2,2,5" or "1^3 2^2 5" (commas and blanks both separate)."""
    tokens = [t for t in re.split(r"[,\s]+", text.strip().strip("{}")) if t]
    parts: List[int] = []
    for token in tokens:
        match = _TOKEN.match(token)
        if not match:
            raise PartitionSyntaxError(f"cannot parse partition token {token!r} in {text!r}")
        part = int(match.group(1))
        count = int(match.group(2)) if match.group(2) else 1
        if part == 0:
            raise PartitionSyntaxError(f"partition parts must be positive: {text!r}")
        parts.extend([part] * count)
    return Partition(parts)


def enumerate_partitions(n: int, smallest_part: int = 1) -> List[Partition]:
    """All partitions of n (parts >= smallest_part), largest first part first."""
    if n < 0:
        raise ValueError("n must be non-negative")

    def build(remaining: int, largest: int) -> Iterator[Tuple[int, ...]]:
        if remaining == 0:
            yield ()
            return
        for part in range(min(remaining, largest), smallest_part - 1, -1):
            for rest in build(remaining - part, part):
                yield (part,) + rest

    return [Partition(parts) for parts in build(n, n)]


def all_pairings(items: Sequence[int]) -> Iterator[List[Tuple[int, int]]]:
    """Yield every perfect matching of the given labels."""
    items = list(items)
    if not items:
        yield []
        return
    first = items.pop(0)
    for i, item in enumerate(items):
        for rest in all_pairings(items[:i] + items[i + 1:]):
            yield [(first, item)] + rest


def enumerate_pairings(p, strict: bool = False) -> List[Pairing]:
    """Fixed-point-free involutions on the labelled positions of p (a Partition or an arity).

    Odd arity gives the empty list, or OddArity when strict.
    """
    n = p if isinstance(p, int) else len(p)
    if n % 2:
        if strict:
            raise OddArity(f"no perfect matching on {n} points")
        return []
    return [tuple(pairing) for pairing in all_pairings(range(n))]


def involutions_bruteforce(n: int) -> List[Pairing]:
    """Fixed-point-free involutions found by scanning all permutations of n points."""
    found = []
    for perm in itertools.permutations(range(n)):
        if all(perm[i] != i and perm[perm[i]] == i for i in range(n)):
            found.append(tuple((i, perm[i]) for i in range(n) if i < perm[i]))
    return found


def qv_vanishes(p: Partition) -> bool:
    """Q_v = 0 exactly when there is an odd number of parts or of odd parts."""
    odd_parts = sum(1 for k in p.parts if k % 2)
    return len(p) % 2 == 1 or odd_parts % 2 == 1


def qv_involution_sum(p: Partition) -> QuasiModular:
    """Sum over pairings of the product of C(k_i, k_j)."""
    if len(p) % 2:
        return QuasiModular()
    parts = p.parts
    shapes: Counter = Counter()
    for pairing in all_pairings(range(len(parts))):
        shape = tuple(sorted(tuple(sorted((parts[i], parts[j]))) for i, j in pairing))
        shapes[shape] += 1
    total = QuasiModular()
    for shape, multiplicity in shapes.items():
        term = QuasiModular.constant(multiplicity)
        for k, l in shape:
            factor = coeff_C(k, l)
            if factor.is_zero():
                term = QuasiModular()
                break
            term = term * factor
        total = total + term
    logger.debug(f"Q_v for {format_partition(p)} from {sum(shapes.values())} pairings")
    return total


def qv_zhu_recursion(p: Partition) -> QuasiModular:
    """Peel the first part: Z(a[-k1]w) = sum_j C(k1, k_j) Z(w without k_j)."""
    return _zhu(p.parts)


@lru_cache(maxsize=None)
def _zhu(parts: Tuple[int, ...]) -> QuasiModular:
    if not parts:
        return QuasiModular.constant(1)
    if len(parts) % 2:
        return QuasiModular()
    k1, rest = parts[0], parts[1:]
    total = QuasiModular()
    for j, kj in enumerate(rest):
        c = coeff_C(k1, kj)
        if c.is_zero():
            continue
        total = total + c * _zhu(rest[:j] + rest[j + 1:])
    return total


def z1_heisenberg(p: Partition, order: int) -> QSeries:
    """Genus-one 1-point function Q_v / eta, offset -1/24."""
    return qs_mul(qm_to_qseries(qv_zhu_recursion(p), order), eta_inverse(order))


def two_point_from_p2(k: int, l: int) -> QuasiModular:
    """Q_v for v = a[-k]a[-l]1 read off from the expansion of P2(z1 - z2)."""
    return p2_two_variable_coefficient(k, l)


def liz_norm(p: Partition) -> Fraction:
    """<v, v> = prod_i (-i)^e_i e_i! for the square-bracket Fock basis."""
    value = Fraction(1)
    for part, e in p.exponents().items():
        value *= Fraction((-part) ** e * factorial(e))
    return value


class PairingSumFn:
    """Genus-zero correlator stored as a list of pairings, each giving prod 1/(z_i - z_j)^2."""

    def __init__(self, n: int, pairings: List[Pairing]):
        self.n = n
        self.pairings = pairings

    def __len__(self) -> int:
        return len(self.pairings)

    def evaluate(self, points: Sequence) -> Fraction:
        return eval_g_n_genus0(self, points)

    def __repr__(self) -> str:
        return f"PairingSumFn(n={self.n}, terms={len(self.pairings)})"


def g_n_genus0(n: int) -> PairingSumFn:
    """G_n^(0) as the sum over fixed-point-free involutions of n points."""
    return PairingSumFn(n, enumerate_pairings(n))


def g_n_genus0_recursive(n: int) -> PairingSumFn:
    """G_n^(0) rebuilt by expanding in the last insertion point."""
    return PairingSumFn(n, [tuple(sorted(pairing)) for pairing in _recursive_pairings(tuple(range(n)))])


def _recursive_pairings(labels: Tuple[int, ...]) -> List[List[Tuple[int, int]]]:
    # G_n(..., z_n) = sum_{i<n} (z_i - z_n)^-2 G_{n-2}(z without z_i, z_n)
    if not labels:
        return [[]]
    if len(labels) % 2:
        return []
    last, rest = labels[-1], labels[:-1]
    out = []
    for i, other in enumerate(rest):
        for tail in _recursive_pairings(rest[:i] + rest[i + 1:]):
            out.append(tail + [(other, last)])
    return out


def _check_points(points: Sequence) -> List[Fraction]:
    values = [to_rational(z) for z in points]
    if len(set(values)) != len(values):
        raise CoincidentPoints(f"insertion points must be distinct: {points}")
    return values


def eval_g_n_genus0(f: PairingSumFn, points: Sequence) -> Fraction:
    """Exact value of the pairing sum at distinct rational points."""
    z = _check_points(points)
    if len(z) != f.n:
        raise ValueError(f"expected {f.n} points, got {len(z)}")
    total = Fraction(0)
    for pairing in f.pairings:
        term = Fraction(1)
        for i, j in pairing:
            term /= (z[i] - z[j]) ** 2
        total += term
    return total


def eval_g_n_recursive(points: Sequence) -> Fraction:
    """Evaluate G_n^(0) directly through the recursion, without storing pairings."""
    z = _check_points(points)

    def rec(values: Tuple[Fraction, ...]) -> Fraction:
        if not values:
            return Fraction(1)
        if len(values) % 2:
            return Fraction(0)
        first, rest = values[0], values[1:]
        return sum(
            (rec(rest[:i] + rest[i + 1:]) / (first - zi) ** 2 for i, zi in enumerate(rest)),
            Fraction(0),
        )

    return rec(tuple(z))


def eval_g4_display(points: Sequence) -> Fraction:
    """The three-term closed form of G_4^(0)."""
    z1, z2, z3, z4 = _check_points(points)
    return (
        1 / ((z1 - z2) ** 2 * (z3 - z4) ** 2)
        + 1 / ((z1 - z3) ** 2 * (z2 - z4) ** 2)
        + 1 / ((z1 - z4) ** 2 * (z2 - z3) ** 2)
    )
