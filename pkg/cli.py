"""
Command Line Module
Single entry point for every computation: eisenstein, qv, kacdet, genus2, mlde, theta and verify
"""

import argparse
import json
import logging
import sys
from fractions import Fraction
from typing import Dict, List, Optional

import casimir_mlde
import genus2
import lattice
from config import get_eps_order, get_jobs, get_log_level, get_q_order
from data_manager import DataManager
from errors import PartitionSyntaxError, VoaModularError
from exact_qseries import format_rational, to_rational
from heisenberg import format_partition, parse_partition, qv_zhu_recursion, z1_heisenberg
from quality_assurance import QualityAssurance
from quasimodular import eisenstein_qexp, eisenstein_qm, qm_weight
from report_generator import ReportGenerator, format_e_basis, format_qseries, format_two_var
from virasoro import format_factor, format_poly_factored, gram_matrix, kac_det, vir_basis

logging.basicConfig(level=logging.INFO)
logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_COMPUTATION = 1
EXIT_USAGE = 2

EQUIVARIANCE_GENERATORS = [
    ("gamma1", (1, 1, 0, 1)),
    ("gamma1", (0, -1, 1, 0)),
    ("gamma2", (1, 1, 0, 1)),
    ("beta",),
]


def _rational_arg(text: str) -> Fraction:
    try:
        return to_rational(text.strip())
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"expected a rational number p/q, got {text!r}")


def _positive_int(text: str) -> int:
    value = int(text)
    if value < 1:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {text!r}")
    return value


def _order_arg(text: str) -> int:
    value = int(text)
    if value < 0:
        raise argparse.ArgumentTypeError(f"order must be non-negative, got {text!r}")
    return value


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="voa-modular",
        description="Exact q-series, quasimodular forms and vertex operator algebra computations.",
    )
    parser.add_argument("--format", choices=["text", "json", "csv"], default="text", help="Output format.")
    parser.add_argument("--save", action="store_true", help="Also write the output into VOA_MODULAR_OUTPUT_DIR.")
    parser.add_argument("--verbose", action="store_true", help="Log at DEBUG level.")
    parser.add_argument("--basis", choices=["e", "pqr"], default="e", help="Render forms in E2,E4,E6 or P,Q,R.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("eisenstein", help="E_k as a q-series and as an element of Q[P,Q,R].")
    p.add_argument("--k", type=int, required=True, help="Weight k >= 2.")
    p.add_argument("--order", "-N", type=_order_arg, default=None, help="q-order (default VOA_MODULAR_Q_ORDER).")

    p = sub.add_parser("qv", help="Heisenberg one-point function of a Fock vector.")
    p.add_argument("--partition", required=True, help='Partition, e.g. "1^3 2^2 5" or "1,1,1,2,2,5".')
    p.add_argument("--order", "-N", type=_order_arg, default=None, help="q-order of the character Q_v/eta.")

    p = sub.add_parser("kacdet", help="Virasoro Gram matrix and Kac determinant at weight n.")
    p.add_argument("--n", type=_order_arg, required=True, help="Weight n.")
    p.add_argument("--what", choices=["det", "gram"], default="det")
    p.add_argument("--strategy", choices=["commutator", "pbw"], default="commutator")

    p = sub.add_parser("genus2", help="Genus-two sewing: determinant, period matrix, partition function.")
    p.add_argument("--order", "-N", type=_order_arg, default=None, help="eps-order (default VOA_MODULAR_EPS_ORDER).")
    p.add_argument("--cutoff", type=_positive_int, default=None, help="Matrix cutoff K (default 2N).")
    p.add_argument("--rank", type=_positive_int, default=1)
    p.add_argument("--what", choices=["det", "logdet", "period", "omega", "z2", "oracle", "equivariance"],
                   default="det")
    p.add_argument("--tau1", type=complex, default=2j)
    p.add_argument("--tau2", type=complex, default=3j)
    p.add_argument("--eps", type=complex, default=0.05)

    p = sub.add_parser("mlde", help="Second-order MLDE solutions and the Deligne / K=2 / K=3 tables.")
    mode = p.add_mutually_exclusive_group(required=True)
    mode.add_argument("--c", type=_rational_arg, help="Central charge p/q.")
    mode.add_argument("--table", choices=["k2", "k3"])
    mode.add_argument("--deligne", action="store_true")
    p.add_argument("--order", "-N", type=_order_arg, default=None)
    p.add_argument("--d-max", type=_positive_int, default=3479, dest="d_max")
    p.add_argument("--jobs", type=_positive_int, default=None)

    p = sub.add_parser("theta", help="Theta series and lattice VOA partition function.")
    source = p.add_mutually_exclusive_group(required=True)
    source.add_argument("--gram", help="JSON file holding an array of integer rows.")
    source.add_argument("--lattice", choices=["e8", "a2", "d4"])
    p.add_argument("--order", "-N", type=_order_arg, default=None)
    p.add_argument("--jobs", type=_positive_int, default=None)

    p = sub.add_parser("verify", help="Run the acceptance suite and print PASS/FAIL per item.")
    p.add_argument("--numeric", action="store_true", help="Include the tolerance-based numeric item.")
    p.add_argument("--jobs", type=_positive_int, default=None, help="Parallel workers (default VOA_MODULAR_JOBS).")
    p.add_argument("--items", type=int, nargs="+", default=None, help="Run only these item numbers.")
    return parser


# -- handlers ----------------------------------------------------------------
# Each returns {"name", "text", "rows", "json"}; "ok" is optional and defaults to True.


def cmd_eisenstein(args, report: ReportGenerator) -> Dict:
    order = args.order if args.order is not None else get_q_order()
    series = eisenstein_qexp(args.k, order)
    form = eisenstein_qm(args.k)
    text = "\n".join([
        f"E{args.k} = {report.format_form(form)}",
        f"E{args.k}(q) = {format_qseries(series)}",
    ])
    return {
        "name": f"eisenstein_k{args.k}",
        "text": text,
        "rows": report.qseries_rows(series),
        "json": {"k": args.k, "form": form.to_list(), "series": series.to_dict()},
    }


def cmd_qv(args, report: ReportGenerator) -> Dict:
    partition = parse_partition(args.partition)
    order = args.order if args.order is not None else get_q_order()
    qv = qv_zhu_recursion(partition)
    character = z1_heisenberg(partition, order)
    text = "\n".join([
        f"v = {format_partition(partition)} (weight {partition.weight})",
        f"Q_v = {report.format_form(qv)}",
        f"weight: {qm_weight(qv)}",
        f"Q_v/eta = {format_qseries(character, 12)}",
    ])
    return {
        "name": "qv",
        "text": text,
        "rows": report.qseries_rows(character),
        "json": {
            "partition": list(partition.parts),
            "qv": qv.to_list(),
            "qv_e_basis": format_e_basis(qv),
            "character": character.to_dict(),
        },
    }


def _render_poly(poly) -> str:
    return format_factor(poly.as_expr())


def cmd_kacdet(args, report: ReportGenerator) -> Dict:
    if args.what == "gram":
        matrix = gram_matrix(args.n, args.strategy)
        rows = report.matrix_rows(matrix, _render_poly)
        basis = ["·".join(f"L[{m}]" for m in word.modes) for word in vir_basis(args.n)]
        text = "basis: " + ", ".join(basis) + "\n" + report.to_text_table(rows)
        return {"name": f"gram_{args.n}", "text": text, "rows": rows,
                "json": {"n": args.n, "basis": basis, "gram": [[_render_poly(e) for e in row] for row in matrix]}}
    det = kac_det(args.n)
    factored = format_poly_factored(det)
    return {
        "name": f"kacdet_{args.n}",
        "text": factored,
        "rows": [{"n": str(args.n), "det": factored}],
        "json": {"n": args.n, "det": factored, "expanded": format_factor(det.as_expr())},
    }


def cmd_genus2(args, report: ReportGenerator) -> Dict:
    order = args.order if args.order is not None else get_eps_order()
    cutoff = args.cutoff if args.cutoff is not None else genus2.default_cutoff(order)
    what = "period" if args.what == "omega" else args.what

    if what in ("det", "logdet", "z2"):
        if what == "det":
            series = genus2.det_series(cutoff, order)
            header = "det(I - A1 A2)"
        elif what == "logdet":
            series = genus2.logdet_series(cutoff, order)
            header = "log det(I - A1 A2)"
        else:
            prefactor, series = genus2.z2_heisenberg(args.rank, cutoff, order)
            header = f"eta(τ1)^{prefactor['eta_tau1_power']}·eta(τ2)^{prefactor['eta_tau2_power']} times"
        rows = report.eps_series_rows(series)
        return {"name": f"genus2_{what}", "text": header + "\n" + report.to_text_table(rows),
                "rows": rows, "json": {"what": what, "rank": args.rank, "series": series.to_list()}}

    if what == "period":
        entries = dict(zip(("Omega11", "Omega22", "Omega12"), genus2.period_matrix(cutoff, order)))
        rows = []
        for label, entry in entries.items():
            for row in report.eps_series_rows(entry.correction):
                rows.append({"entry": label, **row})
        text = "2πiΩ = 2πiτ on the diagonal plus\n" + report.to_text_table(rows)
        return {"name": "genus2_period", "text": text, "rows": rows,
                "json": {label: {"tau_atom": e.tau_atom, "correction": e.correction.to_list()}
                         for label, e in entries.items()}}

    if what == "oracle":
        rows = [{"eps_power": str(n), "coefficient": format_two_var(genus2.chequered_oracle(n))}
                for n in range(order + 1)]
        return {"name": "genus2_oracle", "text": report.to_text_table(rows), "rows": rows, "json": rows}

    rows = []
    for gamma in EQUIVARIANCE_GENERATORS:
        residual = genus2.numeric_equivariance_check(gamma, args.tau1, args.tau2, args.eps, order)
        rows.append({"generator": gamma[0] + (str(gamma[1]) if len(gamma) > 1 else ""),
                     "residual": f"{residual:.3e}"})
    return {"name": "genus2_equivariance", "text": report.to_text_table(rows), "rows": rows, "json": rows}


def cmd_mlde(args, report: ReportGenerator) -> Dict:
    jobs = args.jobs if args.jobs is not None else get_jobs()
    if args.table:
        result = casimir_mlde.verify_k2_table(jobs) if args.table == "k2" else casimir_mlde.verify_k3_table(jobs)
        rows = [{"c": r["c"], "dimension": r["computed"] or "pole"} for r in result["rows"]]
        check = result["j_cross_check"]
        text = report.to_text_table(rows) + (
            f"\ncross-check 1 + value = {check['computed']} (expected {check['expected']}): "
            f"{'PASS' if check['match'] else 'FAIL'}"
        )
        return {"name": f"mlde_{args.table}", "text": text, "rows": rows, "json": result,
                "ok": result["all_match"]}

    if args.deligne:
        rows = []
        for c, d in casimir_mlde.deligne_scan(args.d_max):
            name = casimir_mlde.DELIGNE_SERIES.get(c, ("", 0))[0]
            try:
                lam = format_rational(casimir_mlde.deligne_parameter(c))
            except VoaModularError:
                lam = "pole"
            rows.append({"c": format_rational(c), "d": str(d), "lambda": lam, "algebra": name})
        text = report.to_text_table(rows) + f"\n{len(rows)} rational charges"
        return {"name": "mlde_deligne", "text": text, "rows": rows, "json": rows}

    order = args.order if args.order is not None else get_q_order()
    solution = casimir_mlde.solve_mlde2(args.c, order)
    low, high = casimir_mlde.indicial_roots(args.c)
    residual_zero = casimir_mlde.mlde_residual(solution).is_zero()
    text = "\n".join([
        f"c = {format_rational(args.c)}, indicial roots {format_rational(low)}, {format_rational(high)}",
        f"Z = {format_qseries(solution.coeffs, 8)}",
        f"residual vanishes to order {order}: {residual_zero}",
    ])
    return {"name": "mlde", "text": text, "rows": report.qseries_rows(solution.coeffs),
            "json": {**solution.to_dict(), "residual_zero": residual_zero}}


def cmd_theta(args, report: ReportGenerator) -> Dict:
    order = args.order if args.order is not None else get_q_order()
    jobs = args.jobs if args.jobs is not None else get_jobs()
    if args.gram:
        lat = lattice.EvenLattice(DataManager().load_gram_matrix(args.gram))
        label = args.gram
    else:
        lat = lattice.NAMED_LATTICES[args.lattice]()
        label = args.lattice
    counts = lattice.shell_counts(lat, order, jobs)
    partition = lattice.lattice_voa_partition(lat, order, jobs)
    rows = [{"n": str(n), "shell": str(count)} for n, count in enumerate(counts)]
    text = "\n".join([
        f"lattice {label}: rank {lat.rank}, det {lat.determinant}",
        report.to_text_table(rows),
        f"Z_V_L = {format_qseries(partition, 8)}",
    ])
    return {"name": "theta", "text": text, "rows": rows,
            "json": {"lattice": label, "gram": [list(r) for r in lat.gram], "shells": counts,
                     "partition_function": partition.to_dict()}}


def cmd_verify(args, report: ReportGenerator) -> Dict:
    jobs = args.jobs if args.jobs is not None else get_jobs()
    qa = QualityAssurance(eps_order=max(get_eps_order(), 8))
    records = qa.run_all(jobs=jobs, numeric=args.numeric, items=args.items)
    rows = report.verification_rows(records)
    lines = [f"[{r['status']}] {r['item']:>2}. {r['name']}: {r['detail']}" for r in records]
    passed = QualityAssurance.all_passed(records)
    lines.append(f"{sum(r['status'] == 'PASS' for r in records)}/{len(records)} items passed")
    return {"name": "verify", "text": "\n".join(lines), "rows": rows, "json": records, "ok": passed}


HANDLERS = {
    "eisenstein": cmd_eisenstein,
    "qv": cmd_qv,
    "kacdet": cmd_kacdet,
    "genus2": cmd_genus2,
    "mlde": cmd_mlde,
    "theta": cmd_theta,
    "verify": cmd_verify,
}


def _render(result: Dict, fmt: str, report: ReportGenerator) -> str:
    if fmt == "json":
        return json.dumps(result["json"], indent=2, default=str, ensure_ascii=False)
    if fmt == "csv":
        return report.to_csv(result["rows"])
    return result["text"]


def run(argv: Optional[List[str]] = None) -> int:
    """Parse argv, run one subcommand and return the exit code."""
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if not exc.code else EXIT_USAGE

    logging.getLogger().setLevel(logging.DEBUG if args.verbose else get_log_level())
    report = ReportGenerator(args.basis)
    try:
        result = HANDLERS[args.command](args, report)
    except PartitionSyntaxError as e:
        parser.print_usage(sys.stderr)
        print(f"error: {e}", file=sys.stderr)
        return EXIT_USAGE
    except VoaModularError as e:
        logger.error(f"{args.command} failed: {e}")
        print(f"error: {type(e).__name__}: {e}", file=sys.stderr)
        return EXIT_COMPUTATION

    output = _render(result, args.format, report)
    print(output)
    if args.save:
        manager = DataManager()
        if args.format == "json":
            manager.save_result(result["name"], result["json"], "json")
        elif args.format == "csv":
            manager.save_result(result["name"], result["rows"], "csv")
        else:
            sections = {"Result": f"```\n{output}\n```", "Table": result["rows"]}
            markdown = report.generate_report(args.command, sections)
            manager.save_result(result["name"], markdown, "markdown")
    return EXIT_OK if result.get("ok", True) else EXIT_COMPUTATION


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
