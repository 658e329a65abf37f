"""
Command Line Tests
Exit codes, rendered output and saved results of every subcommand
"""

import io
import json
import os
import tempfile
import unittest
from contextlib import redirect_stderr, redirect_stdout
from unittest import mock

from cli import EXIT_COMPUTATION, EXIT_OK, EXIT_USAGE, run


def invoke(*argv):
    out, err = io.StringIO(), io.StringIO()
    with redirect_stdout(out), redirect_stderr(err):
        code = run(list(argv))
    return code, out.getvalue(), err.getvalue()


class TestUsage(unittest.TestCase):
    def test_help_exits_cleanly(self):
        code, out, _ = invoke("--help")
        self.assertEqual(code, EXIT_OK)
        self.assertIn("verify", out)

    def test_unknown_command(self):
        self.assertEqual(invoke("frobnicate")[0], EXIT_USAGE)

    def test_missing_required_flag(self):
        self.assertEqual(invoke("qv")[0], EXIT_USAGE)

    def test_bad_rational(self):
        self.assertEqual(invoke("mlde", "--c", "abc")[0], EXIT_USAGE)

    def test_bad_partition(self):
        code, _, err = invoke("qv", "--partition", "1^x")
        self.assertEqual(code, EXIT_USAGE)
        self.assertIn("error", err)


class TestCommands(unittest.TestCase):
    def test_qv(self):
        code, out, _ = invoke("qv", "--partition", "1^3 2^2 5", "--order", "4")
        self.assertEqual(code, EXIT_OK)
        self.assertIn("Q_v = -90·E2·E4·E6", out)

    def test_qv_pqr_basis(self):
        code, out, _ = invoke("--basis", "pqr", "qv", "--partition", "1,1")
        self.assertEqual(code, EXIT_OK)
        self.assertIn("Q_v = -1/12·P", out)

    def test_kacdet(self):
        code, out, _ = invoke("kacdet", "--n", "4")
        self.assertEqual(code, EXIT_OK)
        self.assertEqual(out.strip(), "1/2·c^2·(5c+22)")

    def test_gram_json(self):
        code, out, _ = invoke("--format", "json", "kacdet", "--n", "4", "--what", "gram")
        self.assertEqual(code, EXIT_OK)
        data = json.loads(out)
        self.assertEqual(data["gram"][0][1], "3c")
        self.assertEqual(data["gram"][1][1], "5c")

    def test_k2_table(self):
        code, out, _ = invoke("mlde", "--table", "k2")
        self.assertEqual(code, EXIT_OK)
        rows = [line for line in out.splitlines() if "|" in line and not set(line.strip()) <= {"-", "|", " "}]
        self.assertEqual(len(rows), 10)
        self.assertEqual([p.strip() for p in rows[1].split("|")], ["-44/5", "1"])
        self.assertEqual([p.strip() for p in rows[-1].split("|")], ["40", "20619"])
        self.assertIn("PASS", out)

    def test_mlde_charge(self):
        code, out, _ = invoke("--format", "json", "mlde", "--c", "8", "--order", "3")
        self.assertEqual(code, EXIT_OK)
        data = json.loads(out)
        self.assertEqual(data["series"]["coeffs"], ["1", "248", "4124", "34752"])
        self.assertTrue(data["residual_zero"])

    def test_resonant_charge_is_a_computation_error(self):
        code, _, err = invoke("mlde", "--c", "10")
        self.assertEqual(code, EXIT_COMPUTATION)
        self.assertIn("ResonantIndicialRoots", err)

    def test_deligne(self):
        code, out, _ = invoke("mlde", "--deligne", "--d-max", "248")
        self.assertEqual(code, EXIT_OK)
        self.assertIn("E8", out)

    def test_theta(self):
        code, out, _ = invoke("--format", "json", "theta", "--lattice", "e8", "--order", "2")
        self.assertEqual(code, EXIT_OK)
        data = json.loads(out)
        self.assertEqual(data["shells"], [1, 240, 2160])
        self.assertEqual(data["partition_function"]["offset"], "-1/3")

    def test_theta_from_gram_file(self):
        with tempfile.TemporaryDirectory() as tmp:
            path = os.path.join(tmp, "a2.json")
            with open(path, "w", encoding="utf-8") as f:
                json.dump([[2, -1], [-1, 2]], f)
            code, out, _ = invoke("--format", "csv", "theta", "--gram", path, "--order", "3")
        self.assertEqual(code, EXIT_OK)
        self.assertEqual(out.splitlines()[:3], ["n,shell", "0,1", "1,6"])

    def test_missing_gram_file(self):
        self.assertEqual(invoke("theta", "--gram", "/nonexistent/gram.json")[0], EXIT_COMPUTATION)

    def test_genus2_det(self):
        code, out, _ = invoke("--format", "json", "genus2", "--order", "4", "--what", "det")
        self.assertEqual(code, EXIT_OK)
        data = json.loads(out)
        self.assertEqual(len(data["series"]), 5)

    def test_genus2_cutoff_too_small(self):
        code, _, err = invoke("genus2", "--order", "4", "--cutoff", "2")
        self.assertEqual(code, EXIT_COMPUTATION)
        self.assertIn("CutoffTooSmall", err)

    def test_genus2_oracle(self):
        code, out, _ = invoke("genus2", "--order", "2", "--what", "oracle")
        self.assertEqual(code, EXIT_OK)
        self.assertIn("1/2·E2(τ1)·E2(τ2)", out)

    def test_eisenstein_csv(self):
        code, out, _ = invoke("--format", "csv", "eisenstein", "--k", "4", "--order", "2")
        self.assertEqual(code, EXIT_OK)
        self.assertEqual(out.splitlines()[0], "exponent,coefficient")

    def test_invalid_weight(self):
        self.assertEqual(invoke("eisenstein", "--k", "1")[0], EXIT_COMPUTATION)

    def test_verify_subset(self):
        code, out, _ = invoke("verify", "--items", "1", "2", "4")
        self.assertEqual(code, EXIT_OK)
        self.assertEqual(out.count("[PASS]"), 3)
        self.assertIn("3/3 items passed", out)


class TestSave(unittest.TestCase):
    def test_save_writes_markdown_report(self):
        with tempfile.TemporaryDirectory() as tmp:
            with mock.patch.dict(os.environ, {"VOA_MODULAR_OUTPUT_DIR": tmp}):
                code, _, _ = invoke("--save", "kacdet", "--n", "2")
            self.assertEqual(code, EXIT_OK)
            saved = os.listdir(tmp)
            self.assertEqual(len(saved), 1)
            self.assertTrue(saved[0].endswith("_kacdet_2.md"))

    def test_save_writes_json(self):
        with tempfile.TemporaryDirectory() as tmp:
            with mock.patch.dict(os.environ, {"VOA_MODULAR_OUTPUT_DIR": tmp}):
                invoke("--format", "json", "--save", "kacdet", "--n", "2")
            saved = os.listdir(tmp)
            with open(os.path.join(tmp, saved[0]), encoding="utf-8") as f:
                self.assertEqual(json.load(f)["det"], "1/2·c")


if __name__ == "__main__":
    unittest.main()
