"""
Support Module Tests
Configuration, result storage, Gram-file loading and report rendering
"""

import json
import os
import tempfile
import unittest
from fractions import Fraction
from pathlib import Path
from unittest import mock

import config
from data_manager import DataManager
from errors import GramFileError
from exact_qseries import QSeries, eta_inverse
from genus2 import TwoVarQuasiModular, det_series
from quasimodular import eisenstein_qm, qm_P, qm_Q
from report_generator import ReportGenerator, format_e_basis, format_qseries, format_two_var


class TestConfig(unittest.TestCase):
    def test_defaults(self):
        with mock.patch.dict(os.environ, {}, clear=True):
            self.assertEqual(config.get_q_order(), config.DEFAULT_Q_ORDER)
            self.assertEqual(config.get_eps_order(), config.DEFAULT_EPS_ORDER)
            self.assertEqual(config.get_jobs(), 1)
            self.assertEqual(config.get_log_level(), "INFO")
            self.assertEqual(config.get_output_dir(), Path("./results"))

    def test_environment_overrides(self):
        env = {"VOA_MODULAR_Q_ORDER": "35", "VOA_MODULAR_JOBS": "4", "VOA_MODULAR_LOG_LEVEL": "debug"}
        with mock.patch.dict(os.environ, env, clear=True):
            self.assertEqual(config.get_q_order(), 35)
            self.assertEqual(config.get_jobs(), 4)
            self.assertEqual(config.get_log_level(), "DEBUG")

    def test_bad_values_fall_back(self):
        env = {"VOA_MODULAR_Q_ORDER": "many", "VOA_MODULAR_JOBS": "0", "VOA_MODULAR_LOG_LEVEL": "LOUD"}
        with mock.patch.dict(os.environ, env, clear=True):
            self.assertEqual(config.get_q_order(), config.DEFAULT_Q_ORDER)
            self.assertEqual(config.get_jobs(), config.DEFAULT_JOBS)
            self.assertEqual(config.get_log_level(), "INFO")


class TestDataManager(unittest.TestCase):
    def setUp(self):
        self.tmp = tempfile.TemporaryDirectory()
        self.manager = DataManager(self.tmp.name)

    def tearDown(self):
        self.tmp.cleanup()

    def write(self, name: str, text: str) -> str:
        path = Path(self.tmp.name) / name
        path.write_text(text, encoding="utf-8")
        return str(path)

    def test_save_json_and_load(self):
        path = self.manager.save_result("qv", {"qv": "-90·E2·E4·E6"})
        self.assertTrue(path.name.endswith("_qv.json"))
        self.assertEqual(self.manager.load_json(str(path)), {"qv": "-90·E2·E4·E6"})

    def test_save_csv(self):
        rows = [{"n": "0", "shell": "1"}, {"n": "1", "shell": "240"}]
        path = self.manager.save_result("theta", rows, "csv")
        frame = self.manager.load_csv(str(path))
        self.assertEqual(list(frame["shell"]), ["1", "240"])

    def test_save_markdown_and_listing(self):
        self.manager.save_result("report", "# Title", "markdown")
        self.manager.save_result("plain", "text", "text")
        suffixes = sorted(p.suffix for p in self.manager.list_results())
        self.assertEqual(suffixes, [".md", ".txt"])

    def test_list_results_of_missing_directory(self):
        self.assertEqual(DataManager(os.path.join(self.tmp.name, "absent")).list_results(), [])

    def test_load_gram_matrix(self):
        path = self.write("a2.json", json.dumps([[2, -1], [-1, 2]]))
        self.assertEqual(self.manager.load_gram_matrix(path), [[2, -1], [-1, 2]])

    def test_gram_file_errors(self):
        cases = {
            "missing.json": None,
            "broken.json": "[[2, -1], [",
            "object.json": json.dumps({"gram": [[2]]}),
            "floats.json": json.dumps([[2.0, 1], [1, 2]]),
            "bools.json": json.dumps([[True]]),
            "ragged.json": json.dumps([[2, 1], [1]]),
        }
        for name, text in cases.items():
            path = self.write(name, text) if text is not None else os.path.join(self.tmp.name, name)
            with self.assertRaises(GramFileError, msg=name):
                self.manager.load_gram_matrix(path)


class TestReportGenerator(unittest.TestCase):
    def setUp(self):
        self.report = ReportGenerator()

    def test_e_basis_rendering(self):
        f = eisenstein_qm(2) * eisenstein_qm(4) * eisenstein_qm(6) * -90
        self.assertEqual(format_e_basis(f), "-90·E2·E4·E6")
        self.assertEqual(format_e_basis(eisenstein_qm(4) * eisenstein_qm(4) + eisenstein_qm(8)), "10/7·E4^2")

    def test_pqr_basis(self):
        self.assertEqual(ReportGenerator("pqr").format_form(qm_P() * qm_Q()), "P·Q")
        with self.assertRaises(ValueError):
            ReportGenerator("xyz")

    def test_two_variable_rendering(self):
        f = TwoVarQuasiModular.from_sides(eisenstein_qm(2), eisenstein_qm(2)) * Fraction(1, 2)
        self.assertEqual(format_two_var(f), "1/2·E2(τ1)·E2(τ2)")

    def test_qseries_rendering(self):
        self.assertEqual(format_qseries(QSeries([1, -24, 252])), "1 - 24·q + 252·q^2 + O(q^3)")
        self.assertEqual(
            format_qseries(eta_inverse(3), 2),
            "q^(-1/24)·(1 + q + ...)",
        )

    def test_rows(self):
        rows = self.report.qseries_rows(QSeries([1, 2], Fraction(-1, 3)))
        self.assertEqual(rows, [{"exponent": "-1/3", "coefficient": "1"}, {"exponent": "2/3", "coefficient": "2"}])
        eps_rows = self.report.eps_series_rows(det_series(4, 2))
        self.assertEqual(eps_rows[0], {"eps_power": "0", "monomial": "1", "coefficient": "1"})
        self.assertEqual(eps_rows[1], {"eps_power": "2", "monomial": "E2(τ1)·E2(τ2)", "coefficient": "-1"})

    def test_tables(self):
        rows = [{"c": "8", "dimension": "155"}, {"c": "40", "dimension": "20619"}]
        text = self.report.to_text_table(rows)
        self.assertEqual(text.splitlines()[0].split("|")[0].strip(), "c")
        self.assertEqual([p.strip() for p in text.splitlines()[-1].split("|")], ["40", "20619"])
        self.assertTrue(self.report.to_markdown(rows).startswith("| c | dimension |"))
        self.assertEqual(self.report.to_csv(rows).splitlines()[0], "c,dimension")
        self.assertEqual(self.report.to_text_table([]), "(empty)")

    def test_markdown_report(self):
        text = self.report.generate_report("theta", {"Result": "ok", "Table": [{"n": "0"}]})
        self.assertTrue(text.startswith("# Lattice Theta Series"))
        self.assertIn("**Generated:**", text)
        self.assertIn("| n |", text)


if __name__ == "__main__":
    unittest.main()
