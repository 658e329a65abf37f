"""
Lattice Module
Even positive-definite lattices, certified shell enumeration, theta series and
lattice vertex operator algebra partition functions
"""

import itertools
import logging
from concurrent.futures import ProcessPoolExecutor
from fractions import Fraction
from math import isqrt
from typing import List, Optional, Sequence, Tuple

import numpy as np
import sympy

from errors import NotPositiveDefinite
from exact_qseries import QSeries, eta_inverse, qs_mul

logging.basicConfig(level=logging.INFO)
logger = logging.getLogger(__name__)

Gram = Tuple[Tuple[int, ...], ...]


def _ldl(gram: Gram) -> Tuple[List[List[Fraction]], List[Fraction]]:
    """Exact G = L D L^T with L unit lower-triangular."""
    d = len(gram)
    lower = [[Fraction(0)] * d for _ in range(d)]
    diag: List[Fraction] = []
    for i in range(d):
        lower[i][i] = Fraction(1)
    for j in range(d):
        pivot = Fraction(gram[j][j]) - sum(lower[j][k] ** 2 * diag[k] for k in range(j))
        if pivot <= 0:
            raise NotPositiveDefinite(f"Gram matrix is not positive definite (pivot {pivot} at {j})")
        diag.append(pivot)
        for i in range(j + 1, d):
            value = Fraction(gram[i][j]) - sum(lower[i][k] * lower[j][k] * diag[k] for k in range(j))
            lower[i][j] = value / pivot
    return lower, diag


class EvenLattice:
    """Integral lattice given by a symmetric positive-definite Gram matrix with even diagonal."""

    def __init__(self, gram: Sequence[Sequence[int]]):
        rows = tuple(tuple(int(x) for x in row) for row in gram)
        d = len(rows)
        if any(len(row) != d for row in rows):
            raise ValueError("Gram matrix must be square")
        for i in range(d):
            if rows[i][i] % 2:
                raise ValueError(f"diagonal entry {rows[i][i]} is odd; the lattice is not even")
            for j in range(i):
                if rows[i][j] != rows[j][i]:
                    raise ValueError("Gram matrix must be symmetric")
        self.gram: Gram = rows
        self._lower, self._diag = _ldl(rows) if d else ([], [])

    @property
    def rank(self) -> int:
        return len(self.gram)

    @property
    def determinant(self) -> int:
        value = Fraction(1)
        for pivot in self._diag:
            value *= pivot
        return int(value)

    def matrix(self) -> np.ndarray:
        return np.array(self.gram, dtype=np.int64).reshape(self.rank, self.rank)

    def norm(self, vector: Sequence[int]) -> int:
        """Q(x) = (x, x)/2."""
        x = np.asarray(vector, dtype=np.int64)
        return int(x @ self.matrix() @ x) // 2

    def orthogonal_sum(self, other: "EvenLattice") -> "EvenLattice":
        d1, d2 = self.rank, other.rank
        gram = [[0] * (d1 + d2) for _ in range(d1 + d2)]
        for i in range(d1):
            for j in range(d1):
                gram[i][j] = self.gram[i][j]
        for i in range(d2):
            for j in range(d2):
                gram[d1 + i][d1 + j] = other.gram[i][j]
        return EvenLattice(gram)

    def transform(self, unimodular: Sequence[Sequence[int]]) -> "EvenLattice":
        """U^T G U for an integer matrix U of determinant +-1."""
        u = sympy.Matrix(unimodular)
        if u.shape != (self.rank, self.rank) or abs(u.det()) != 1:
            raise ValueError("change of basis must be a unimodular integer matrix of matching size")
        image = u.T * sympy.Matrix(self.gram) * u
        return EvenLattice([[int(image[i, j]) for j in range(self.rank)] for i in range(self.rank)])

    def __eq__(self, other) -> bool:
        return isinstance(other, EvenLattice) and self.gram == other.gram

    def __hash__(self) -> int:
        return hash(self.gram)

    def __repr__(self) -> str:
        return f"EvenLattice(rank={self.rank}, det={self.determinant})"


def _coordinate_range(center: Fraction, budget: Fraction, pivot: Fraction) -> range:
    """Integers x with pivot (x - center)^2 <= budget, widened then filtered exactly by the caller."""
    reach = isqrt(-(-budget.numerator * pivot.denominator // (budget.denominator * pivot.numerator))) + 1
    return range(int(center) - reach - 1, int(center) + reach + 2)


def _enumerate(lattice: EvenLattice, order: int, fixed_last: Optional[int] = None) -> List[int]:
    # Fincke-Pohst on x^T G x = sum_i D_i (x_i + sum_{j>i} L_ji x_j)^2 <= 2N
    d = lattice.rank
    counts = [0] * (order + 1)
    if d == 0:
        counts[0] = 1
        return counts
    lower, diag = lattice._lower, lattice._diag
    bound = Fraction(2 * order)
    x = [0] * d

    def descend(i: int, budget: Fraction) -> None:
        center = -sum((lower[j][i] * x[j] for j in range(i + 1, d)), Fraction(0))
        if i == d - 1 and fixed_last is not None:
            candidates = [fixed_last]
        else:
            candidates = _coordinate_range(center, budget, diag[i])
        for value in candidates:
            spent = diag[i] * (value - center) ** 2
            if spent > budget:
                continue
            x[i] = value
            if i == 0:
                total = bound - budget + spent
                counts[int(total) // 2] += 1
            else:
                descend(i - 1, budget - spent)
        x[i] = 0

    descend(d - 1, bound)
    return counts


def _count_slice(args: Tuple[Gram, int, int]) -> List[int]:
    gram, order, value = args
    return _enumerate(EvenLattice(gram), order, fixed_last=value)


def shell_counts(lattice: EvenLattice, order: int, jobs: int = 1) -> List[int]:
    """|L_n| for n = 0..N by exact bounded enumeration."""
    if order < 0:
        raise ValueError("order must be non-negative")
    if jobs <= 1 or lattice.rank == 0:
        counts = _enumerate(lattice, order)
    else:
        d = lattice.rank
        reach = _coordinate_range(Fraction(0), Fraction(2 * order), lattice._diag[d - 1])
        tasks = [(lattice.gram, order, value) for value in reach]
        counts = [0] * (order + 1)
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            for partial in pool.map(_count_slice, tasks):
                counts = [a + b for a, b in zip(counts, partial)]
    logger.info(f"Enumerated shells of rank-{lattice.rank} lattice to n={order}: {counts[:6]}")
    return counts


def shell_counts_box(lattice: EvenLattice, order: int) -> List[int]:
    """Brute-force count over the box |x_i| <= sqrt(2N (G^-1)_ii); for small ranks only."""
    if order < 0:
        raise ValueError("order must be non-negative")
    d = lattice.rank
    counts = [0] * (order + 1)
    if d == 0:
        counts[0] = 1
        return counts
    inverse = sympy.Matrix(lattice.gram).inv()
    radii = [isqrt(int(sympy.floor(2 * order * inverse[i, i]))) for i in range(d)]
    gram = lattice.matrix()
    axes = [np.arange(-r, r + 1, dtype=np.int64) for r in radii]
    points = np.array(list(itertools.product(*axes)), dtype=np.int64).reshape(-1, d)
    norms = np.einsum("ni,ij,nj->n", points, gram, points) // 2
    for n in norms[norms <= order]:
        counts[int(n)] += 1
    return counts


def theta_series(lattice: EvenLattice, order: int, jobs: int = 1) -> QSeries:
    """sum_n |L_n| q^n."""
    return QSeries(shell_counts(lattice, order, jobs))


def lattice_voa_partition(lattice: EvenLattice, order: int, jobs: int = 1) -> QSeries:
    """theta_L / eta^d, offset -d/24."""
    result = theta_series(lattice, order, jobs)
    inverse = eta_inverse(order)
    for _ in range(lattice.rank):
        result = qs_mul(result, inverse)
    return result


def growth_constant(lattice: EvenLattice, order: int) -> float:
    """max_{1 <= n <= N} |L_n| / n^(d/2)."""
    counts = shell_counts(lattice, order)
    return max((counts[n] / n ** (lattice.rank / 2) for n in range(1, order + 1)), default=0.0)


def _cartan(size: int, edges: Sequence[Tuple[int, int]]) -> List[List[int]]:
    gram = [[2 if i == j else 0 for j in range(size)] for i in range(size)]
    for i, j in edges:
        gram[i][j] = gram[j][i] = -1
    return gram


def e8_lattice() -> EvenLattice:
    """E8 root lattice from its Cartan matrix (even, unimodular)."""
    return EvenLattice(_cartan(8, [(0, 2), (2, 3), (3, 4), (4, 5), (5, 6), (6, 7), (1, 3)]))


def a2_lattice() -> EvenLattice:
    return EvenLattice(_cartan(2, [(0, 1)]))


def d4_lattice() -> EvenLattice:
    return EvenLattice(_cartan(4, [(0, 1), (1, 2), (1, 3)]))


def scaled_z_lattice(m: int) -> EvenLattice:
    """Rank-one lattice with Gram [2m]."""
    if m < 1:
        raise NotPositiveDefinite(f"scaled Z lattice needs m >= 1, got {m}")
    return EvenLattice([[2 * m]])


NAMED_LATTICES = {"e8": e8_lattice, "a2": a2_lattice, "d4": d4_lattice}


def random_unimodular(d: int, seed: int = 0, steps: int = 6) -> List[List[int]]:
    """Product of random elementary row operations with coefficients in {-1, 1}."""
    rng = np.random.default_rng(seed)
    u = np.eye(d, dtype=np.int64)
    if d < 2:
        return u.tolist()
    for _ in range(steps):
        i, j = rng.choice(d, size=2, replace=False)
        u[i] += int(rng.choice([-1, 1])) * u[j]
    return u.tolist()
