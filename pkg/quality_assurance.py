"""
Quality Assurance Module
The acceptance suite behind `verify`: exact identity checks, cross-module checks and numeric spot checks
"""

import random
import logging
from concurrent.futures import ProcessPoolExecutor
from fractions import Fraction
from typing import Dict, List, Optional, Tuple

import sympy

from casimir_mlde import (
    DELIGNE_SERIES,
    DIM_X2,
    DIM_Y3STAR,
    GRIESS_P2,
    K3_P3,
    P3,
    d_of_c,
    deligne_scan,
    dim_v2,
    dim_v3,
    indicial_roots_symbolic,
    mlde_residual,
    numerator_zeros_are_kac_zeros,
    solve_mlde2,
    verify_k2_table,
    verify_k3_table,
)
from exact_qseries import partition_count, qs_mul
from genus2 import (
    TwoVarQuasiModular,
    chequered_oracle,
    det_inv_sqrt,
    det_series,
    logdet_series,
    numeric_equivariance_check,
    period_equivariance_residual,
    period_matrix,
    trace_powers,
)
from heisenberg import (
    enumerate_partitions,
    eval_g4_display,
    eval_g_n_genus0,
    eval_g_n_recursive,
    g_n_genus0,
    g_n_genus0_recursive,
    parse_partition,
    qv_involution_sum,
    qv_vanishes,
    qv_zhu_recursion,
)
from lattice import (
    a2_lattice,
    d4_lattice,
    e8_lattice,
    lattice_voa_partition,
    random_unimodular,
    shell_counts,
    shell_counts_box,
    theta_series,
)
from quasimodular import (
    delta,
    delta_from_qr,
    delta_qm,
    dim_Mk,
    e2_transformation_residual,
    eisenstein_qexp,
    eisenstein_qm,
    hilbert_series_dims,
    j_function,
    modular_derivative,
    qm_Q,
    qm_to_qseries,
    verify_square_bracket_identity,
)
from virasoro import C, discrete_weights, c_pq, evaluate_poly, gram_matrix, kac_det, kac_zero_charges, poly_c

logging.basicConfig(level=logging.INFO)
logger = logging.getLogger(__name__)

CheckResult = Tuple[bool, str]

CONSTANT = ((0, 0, 0), (0, 0, 0))


def _tv(terms: Dict) -> TwoVarQuasiModular:
    """Two-variable form from E-basis exponents {((a,b,c), (a',b',c')): coeff}."""
    return TwoVarQuasiModular.from_e_basis(terms)


E2_E2 = ((1, 0, 0), (1, 0, 0))
E4_E4 = ((0, 1, 0), (0, 1, 0))
E22_E22 = ((2, 0, 0), (2, 0, 0))


class QualityAssurance:
    """Runs the numbered acceptance items and collects PASS/FAIL records."""

    ITEMS: List[Tuple[int, str, str]] = [
        (1, "modular-form identities", "check_modular_identities"),
        (2, "modular derivative", "check_modular_derivative"),
        (3, "delta and j", "check_delta_and_j"),
        (4, "partitions and Hilbert series", "check_partitions_and_dimensions"),
        (5, "Heisenberg one-point functions", "check_heisenberg_one_point"),
        (6, "genus-zero correlators", "check_genus_zero"),
        (7, "Virasoro Gram data", "check_virasoro"),
        (8, "genus-two determinant", "check_genus_two_determinant"),
        (9, "genus-two partition function", "check_genus_two_partition_function"),
        (10, "period matrix", "check_period_matrix"),
        (11, "MLDE solutions", "check_mlde"),
        (12, "E8 cross-module", "check_e8_cross_module"),
        (13, "K=2 and K=3 tables", "check_tables"),
        (14, "property suite", "check_properties"),
        (15, "numeric spot checks", "check_numeric"),
    ]
    NUMERIC_ITEMS = {15}

    def __init__(self, eps_order: int = 8, seed: int = 20240):
        self.eps_order = eps_order
        self.seed = seed

    # -- exact items --------------------------------------------------------

    def check_modular_identities(self) -> CheckResult:
        e4, e6 = eisenstein_qm(4), eisenstein_qm(6)
        exact = (
            eisenstein_qm(8) == e4 * e4 * Fraction(3, 7)
            and eisenstein_qm(10) == e4 * e6 * Fraction(5, 11)
        )
        s4, s6 = eisenstein_qexp(4, 20), eisenstein_qexp(6, 20)
        series = (
            eisenstein_qexp(8, 20) == qs_mul(s4, s4).scale(Fraction(3, 7))
            and eisenstein_qexp(10, 20) == qs_mul(s4, s6).scale(Fraction(5, 11))
        )
        return exact and series, f"exact={exact}, q-series to order 20={series}"

    def check_modular_derivative(self) -> CheckResult:
        e4, e6 = eisenstein_qm(4), eisenstein_qm(6)
        d4 = modular_derivative(e4) == e6 * 14
        d6 = modular_derivative(e6) == e4 * e4 * Fraction(60, 7)
        d12 = modular_derivative(delta_qm()).is_zero()
        return d4 and d6 and d12, f"DE4=14E6: {d4}, DE6=(60/7)E4^2: {d6}, D12 Delta=0: {d12}"

    def check_delta_and_j(self) -> CheckResult:
        deltas = delta_from_qr(50) == delta(50)
        j = j_function(6)
        leading = [j.coefficient(-1), j.coefficient(0), j.coefficient(1)]
        j_ok = leading == [1, 744, 196884]
        return deltas and j_ok, f"(Q^3-R^2)/1728 = eta^24 to order 50: {deltas}; j leading {leading}"

    def check_partitions_and_dimensions(self) -> CheckResult:
        parts = [partition_count(n) for n in range(5)]
        hilbert = hilbert_series_dims(16)
        dims_ok = all(dim_Mk(k) == hilbert[k] for k in range(17))
        return parts == [1, 1, 2, 3, 5] and dims_ok, f"p(0..4)={parts}, dim M_k = Hilbert series: {dims_ok}"

    def check_heisenberg_one_point(self) -> CheckResult:
        qv = qv_zhu_recursion(parse_partition("1,1,1,2,2,5"))
        example = qv.to_e_basis() == {(1, 1, 1): Fraction(-90)}
        agree, vanish = True, True
        for n in range(13):
            for p in enumerate_partitions(n):
                zhu = qv_zhu_recursion(p)
                if qv_involution_sum(p) != zhu:
                    agree = False
                if qv_vanishes(p) and not zhu.is_zero():
                    vanish = False
        return example and agree and vanish, (
            f"-90 E2E4E6 example: {example}; involution = Zhu to weight 12: {agree}; vanishing rules: {vanish}"
        )

    def check_genus_zero(self) -> CheckResult:
        rng = random.Random(self.seed)
        g4 = g_n_genus0(4)
        display_ok = True
        for _ in range(10):
            points = set()
            while len(points) < 4:
                points.add(Fraction(rng.randint(-50, 50), rng.randint(1, 9)))
            points = list(points)
            if eval_g_n_genus0(g4, points) != eval_g4_display(points):
                display_ok = False
        recursion_ok = True
        for n in range(2, 9, 2):
            points = [Fraction(k * k + 1, k + 2) for k in range(n)]
            if eval_g_n_recursive(points) != eval_g_n_genus0(g_n_genus0(n), points):
                recursion_ok = False
            if set(g_n_genus0_recursive(n).pairings) != set(g_n_genus0(n).pairings):
                recursion_ok = False
        return display_ok and recursion_ok, f"G4 display at 10 tuples: {display_ok}; recursion n<=8: {recursion_ok}"

    def check_virasoro(self) -> CheckResult:
        det2 = kac_det(2) == poly_c(C / 2)
        m4 = gram_matrix(4)
        entries = (
            m4[0][0] == poly_c(C * (4 + C / 2)) and m4[0][1] == poly_c(3 * C)
            and m4[1][0] == poly_c(3 * C) and m4[1][1] == poly_c(5 * C)
        )
        det4 = kac_det(4) == poly_c(C ** 2 * (5 * C + 22) / 2)
        zeros = all(
            evaluate_poly(kac_det(n), c) == 0 for n in range(1, 7) for c in kac_zero_charges(n).values()
        )
        series = (
            c_pq(2, 5) == Fraction(-22, 5) and discrete_weights(2, 5) == {Fraction(0), Fraction(-1, 5)}
            and c_pq(3, 4) == Fraction(1, 2)
            and discrete_weights(3, 4) == {Fraction(0), Fraction(1, 16), Fraction(1, 2)}
        )
        ok = det2 and entries and det4 and zeros and series
        return ok, f"det M2: {det2}, M4 entries: {entries}, det M4: {det4}, Kac zeros: {zeros}, (2,5)/(3,4): {series}"

    def check_genus_two_determinant(self) -> CheckResult:
        det = det_series(12, 6)
        expected = [
            _tv({CONSTANT: 1}), _tv({}), _tv({E2_E2: -1}), _tv({}), _tv({E4_E4: -15}), _tv({}),
        ]
        ok = list(det.coeffs[:6]) == expected
        return ok, "1 - E2E2'eps^2 - 15E4E4'eps^4 + O(eps^6)" if ok else "determinant coefficients differ"

    def check_genus_two_partition_function(self) -> CheckResult:
        order = self.eps_order
        series = det_inv_sqrt(2 * order, order)
        expected = [
            _tv({CONSTANT: 1}), _tv({}), _tv({E2_E2: Fraction(1, 2)}), _tv({}),
            _tv({E22_E22: Fraction(3, 8), E4_E4: Fraction(15, 2)}),
        ]
        low = list(series.coeffs[:5]) == expected
        oracle = all(chequered_oracle(n) == series[n] for n in range(order + 1))
        return low and oracle, f"rank-1 through eps^4: {low}; chequered oracle n<={order}: {oracle}"

    def check_period_matrix(self) -> CheckResult:
        order = self.eps_order
        o11, o22, o12 = period_matrix(2 * order, order)
        e2_1 = ((1, 0, 0), (0, 0, 0))
        e2_2 = ((0, 0, 0), (1, 0, 0))
        stated = (
            o11.correction[2] == _tv({e2_2: 1}) and o11.correction[4] == _tv({((1, 0, 0), (2, 0, 0)): 1})
            and o22.correction[2] == _tv({e2_1: 1}) and o22.correction[4] == _tv({((2, 0, 0), (1, 0, 0)): 1})
            and o12.correction[1] == _tv({CONSTANT: -1}) and o12.correction[3] == _tv({E2_E2: -1})
            and o11.correction[0].is_zero() and o12.correction[0].is_zero()
        )
        parity = all(
            o11.correction[n].is_zero() and o22.correction[n].is_zero() for n in range(1, order + 1, 2)
        ) and all(o12.correction[n].is_zero() for n in range(0, order + 1, 2))
        stable = True
        for n in range(1, order + 1):
            base = logdet_series(2 * n, n)
            periods = [e.correction for e in period_matrix(2 * n, n)]
            for k in (n, n + 1, n + 3):
                if logdet_series(k, n) != base or [e.correction for e in period_matrix(k, n)] != periods:
                    stable = False
        ok = stated and parity and stable
        return ok, f"stated coefficients: {stated}, parity: {parity}, cutoff stability: {stable}"

    def check_mlde(self) -> CheckResult:
        c = C
        roots_ok = indicial_roots_symbolic() == sorted(
            [-c / 24, (c + 4) / 24], key=sympy.default_sort_key
        )
        dims = []
        low_ok = True
        for charge, (_, dim) in DELIGNE_SERIES.items():
            sol = solve_mlde2(charge, 3)
            dims.append(int(sol.coefficient(1)))
            if sol.coefficient(1) != d_of_c(charge) or sol.coefficient(1) != dim:
                low_ok = False
            if sol.coefficient(2) != dim_v2(charge) or sol.coefficient(3) != dim_v3(charge):
                low_ok = False
        residual_ok = all(mlde_residual(solve_mlde2(charge, 20)).is_zero() for charge in DELIGNE_SERIES)
        ok = roots_ok and low_ok and residual_ok
        return ok, f"indicial roots: {roots_ok}, weight-one dims {dims}, residual zero to order 20: {residual_ok}"

    def check_e8_cross_module(self) -> CheckResult:
        e8 = e8_lattice()
        theta_ok = theta_series(e8, 10) == qm_to_qseries(qm_Q(), 10)
        sol = solve_mlde2(8, 10)
        char_ok = sol.coeffs == lattice_voa_partition(e8, 10)
        return theta_ok and char_ok, f"theta_E8 = Q: {theta_ok}; MLDE(8) = theta_E8/eta^8: {char_ok}"

    def check_tables(self) -> CheckResult:
        k2, k3 = verify_k2_table(), verify_k3_table()
        ok = k2["all_match"] and k3["all_match"]
        return ok, (
            f"K=2 rows {sum(r['match'] for r in k2['rows'])}/9, j check {k2['j_cross_check']['match']}; "
            f"K=3 rows {sum(r['match'] for r in k3['rows'])}/3, J^2 check {k3['j_cross_check']['match']}"
        )

    def check_properties(self) -> CheckResult:
        failures = []
        order = 6
        logdet = logdet_series(2 * order, order)
        for n, coeff in enumerate(logdet.coeffs):
            if not coeff.bidegrees() <= {(n, n)}:
                failures.append(f"bihomogeneity at eps^{n}")
        if trace_powers(2 * order, order, "l") != trace_powers(2 * order, order, "k"):
            failures.append("rescaling invariance")
        if det_inv_sqrt(2 * order, order).swap() != det_inv_sqrt(2 * order, order):
            failures.append("1<->2 symmetry")
        if P3 != DIM_X2 + DIM_Y3STAR:
            failures.append("p3 = X2 + Y3*")
        if not numerator_zeros_are_kac_zeros(GRIESS_P2, 6) or not numerator_zeros_are_kac_zeros(K3_P3, 8):
            failures.append("numerator zeros are Kac zeros")
        scan = dict(deligne_scan(3479))
        if len(scan) != 42 or any(scan.get(c) != dim for c, (_, dim) in DELIGNE_SERIES.items()):
            failures.append("Deligne scan")
        if not all(verify_square_bracket_identity(k, n) for k in range(1, 7) for n in range(0, 7)):
            failures.append("square-bracket identity")
        for lat in (a2_lattice(), d4_lattice()):
            if shell_counts(lat, 4) != shell_counts_box(lat, 4):
                failures.append(f"box oracle rank {lat.rank}")
            moved = lat.transform(random_unimodular(lat.rank, seed=self.seed))
            if shell_counts(moved, 6) != shell_counts(lat, 6):
                failures.append(f"unimodular invariance rank {lat.rank}")
        return not failures, "all properties hold" if not failures else "failed: " + ", ".join(failures)

    # -- numeric item -------------------------------------------------------

    def check_numeric(self) -> CheckResult:
        e2 = e2_transformation_residual((0, -1, 1, 0), 2j, 40)
        point = (2j, 3j, 0.05)
        generators = [
            ("gamma1", (1, 1, 0, 1)),
            ("gamma1", (0, -1, 1, 0)),
            ("gamma2", (1, 1, 0, 1)),
            ("beta",),
        ]
        residuals = {
            f"{g[0]}{g[1] if len(g) > 1 else ''}": numeric_equivariance_check(g, *point, order=8)
            for g in generators
        }
        omega = period_equivariance_residual(("gamma1", (0, -1, 1, 0)), *point, order=8)
        ok = e2 < 1e-8 and all(r < 1e-6 for r in residuals.values()) and omega < 1e-6
        worst = max(residuals.values())
        return ok, f"E2 residual {e2:.2e}; worst Z2 residual {worst:.2e}; period residual {omega:.2e}"

    # -- driver -------------------------------------------------------------

    def run_item(self, item: int) -> Dict:
        number, name, method = next(entry for entry in self.ITEMS if entry[0] == item)
        logger.info(f"Running acceptance item {number}: {name}")
        try:
            passed, detail = getattr(self, method)()
        except Exception as e:
            logger.error(f"Acceptance item {number} raised: {e}")
            passed, detail = False, f"{type(e).__name__}: {e}"
        return {"item": number, "name": name, "status": "PASS" if passed else "FAIL", "detail": detail}

    def run_all(self, jobs: int = 1, numeric: bool = False, items: Optional[List[int]] = None) -> List[Dict]:
        """Run every item (the numeric one only on request), ordered by item number."""
        selected = [
            number for number, _, _ in self.ITEMS
            if (items is None or number in items) and (numeric or number not in self.NUMERIC_ITEMS)
        ]
        if jobs > 1:
            with ProcessPoolExecutor(max_workers=jobs) as pool:
                records = list(pool.map(_run_item, [(self.eps_order, self.seed, n) for n in selected]))
        else:
            records = [self.run_item(n) for n in selected]
        records.sort(key=lambda r: r["item"])
        passed = sum(r["status"] == "PASS" for r in records)
        logger.info(f"Acceptance suite: {passed}/{len(records)} items passed")
        return records

    @staticmethod
    def all_passed(records: List[Dict]) -> bool:
        return all(r["status"] == "PASS" for r in records)


def _run_item(args: Tuple[int, int, int]) -> Dict:
    eps_order, seed, item = args
    return QualityAssurance(eps_order, seed).run_item(item)
