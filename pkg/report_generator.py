"""
Report Generator Module
Renders series, quasimodular forms, epsilon tables and verification records as text, markdown and dataframes
"""

import logging
from datetime import datetime
from typing import Any, Dict, List, Optional, Sequence

import pandas as pd

from exact_qseries import QSeries, format_rational
from quasimodular import Monomial, QuasiModular, format_pqr, join_signed_terms

logging.basicConfig(level=logging.INFO)
logger = logging.getLogger(__name__)


def e_monomial_factors(mono: Monomial, suffix: str = "") -> List[str]:
    """["E2", "E4^2"] style factor names for E2^a E4^b E6^c."""
    names = []
    for name, e in (("E2", mono[0]), ("E4", mono[1]), ("E6", mono[2])):
        if e:
            names.append(f"{name}{suffix}" if e == 1 else f"{name}{suffix}^{e}")
    return names


def format_e_basis(f: QuasiModular) -> str:
    """Render f in the E2, E4, E6 basis, e.g. "-90·E2·E4·E6"."""
    if f.is_zero():
        return "0"
    terms = sorted(f.to_e_basis().items(), reverse=True)
    return join_signed_terms([(c, e_monomial_factors(m)) for m, c in terms])


def format_two_var(tv) -> str:
    """Render a TwoVarQuasiModular as "1/2·E2(τ1)·E2(τ2)"."""
    if tv.is_zero():
        return "0"
    terms = sorted(tv.to_e_basis().items(), reverse=True)
    return join_signed_terms([
        (c, e_monomial_factors(m1, "(τ1)") + e_monomial_factors(m2, "(τ2)"))
        for (m1, m2), c in terms
    ])


def format_qseries(series: QSeries, terms: Optional[int] = None) -> str:
    """"q^(-1/3)·(1 + 248·q + 4124·q^2 + O(q^3))"."""
    shown = series.coeffs if terms is None else series.coeffs[:terms]
    parts = []
    for n, c in enumerate(shown):
        if c == 0:
            continue
        power = "" if n == 0 else ("q" if n == 1 else f"q^{n}")
        parts.append((c, [power] if power else []))
    body = join_signed_terms(parts) if parts else "0"
    if terms is None or terms > series.trunc_order:
        tail = f" + O(q^{series.trunc_order + 1})"
    else:
        tail = " + ..."
    if series.offset == 0:
        return body + tail
    return f"q^({format_rational(series.offset)})·({body}{tail})"


class ReportGenerator:
    """Builds row tables and rendered reports for every result type."""

    REPORT_TYPES = {
        'eisenstein': 'Eisenstein Series',
        'qv': 'Heisenberg One-Point Function',
        'kacdet': 'Kac Determinant',
        'genus2': 'Genus Two Sewing',
        'mlde': 'Modular Differential Equation',
        'theta': 'Lattice Theta Series',
        'verify': 'Verification Report',
    }

    def __init__(self, basis: str = "e"):
        if basis not in ("e", "pqr"):
            raise ValueError("basis must be 'e' or 'pqr'")
        self.basis = basis

    def format_form(self, f: QuasiModular) -> str:
        return format_e_basis(f) if self.basis == "e" else format_pqr(f)

    # -- row builders -------------------------------------------------------

    def qseries_rows(self, series: QSeries) -> List[Dict[str, str]]:
        return [
            {"exponent": format_rational(series.offset + n), "coefficient": format_rational(c)}
            for n, c in enumerate(series.coeffs)
        ]

    def eps_series_rows(self, series) -> List[Dict[str, str]]:
        """One row per (epsilon power, E-monomial) with its rational coefficient."""
        rows = []
        for n, coeff in enumerate(series.coeffs):
            for (m1, m2), c in sorted(coeff.to_e_basis().items(), reverse=True):
                factors = e_monomial_factors(m1, "(τ1)") + e_monomial_factors(m2, "(τ2)")
                rows.append({
                    "eps_power": str(n),
                    "monomial": "·".join(factors) or "1",
                    "coefficient": format_rational(c),
                })
        return rows

    def matrix_rows(self, matrix: Sequence[Sequence[Any]], render=str) -> List[Dict[str, str]]:
        return [
            {"row": str(i + 1), **{f"col{j + 1}": render(entry) for j, entry in enumerate(row)}}
            for i, row in enumerate(matrix)
        ]

    def verification_rows(self, records: List[Dict]) -> List[Dict[str, str]]:
        return [
            {"item": str(r["item"]), "name": r["name"], "status": r["status"], "detail": r.get("detail", "")}
            for r in records
        ]

    # -- renderers ----------------------------------------------------------

    def to_dataframe(self, rows: List[Dict]) -> pd.DataFrame:
        return pd.DataFrame(rows)

    def to_text_table(self, rows: List[Dict], separator: str = " | ") -> str:
        """Aligned plain-text table with a header row."""
        if not rows:
            return "(empty)"
        columns = list(rows[0].keys())
        widths = {col: max(len(col), *(len(str(r.get(col, ""))) for r in rows)) for col in columns}
        lines = [separator.join(col.ljust(widths[col]) for col in columns).rstrip()]
        lines.append(separator.join("-" * widths[col] for col in columns))
        for r in rows:
            lines.append(separator.join(str(r.get(col, "")).ljust(widths[col]) for col in columns).rstrip())
        return "\n".join(lines)

    def to_markdown(self, rows: List[Dict]) -> str:
        if not rows:
            return "_no rows_"
        columns = list(rows[0].keys())
        lines = ["| " + " | ".join(columns) + " |", "|" + "|".join("---" for _ in columns) + "|"]
        for r in rows:
            lines.append("| " + " | ".join(str(r.get(col, "")) for col in columns) + " |")
        return "\n".join(lines)

    def to_csv(self, rows: List[Dict]) -> str:
        return self.to_dataframe(rows).to_csv(index=False)

    def generate_report(self, report_type: str, sections: Dict[str, Any]) -> str:
        """Markdown report with one section per entry; list values are rendered as tables."""
        title = self.REPORT_TYPES.get(report_type, report_type)
        lines = [f"# {title}", "", f"**Generated:** {datetime.now().strftime('%Y-%m-%d %H:%M:%S')}", ""]
        for heading, content in sections.items():
            lines.append(f"## {heading}")
            lines.append("")
            if isinstance(content, list):
                lines.append(self.to_markdown(content))
            else:
                lines.append(str(content))
            lines.append("")
        return "\n".join(lines)

