"""
Quality Assurance Tests
Acceptance items, failure capture and item selection
"""

import unittest
from unittest import mock

from quality_assurance import QualityAssurance


class TestAcceptanceItems(unittest.TestCase):
    def setUp(self):
        self.qa = QualityAssurance(eps_order=6)

    def test_cheap_items_pass(self):
        for item in (1, 2, 3, 4, 5, 7):
            record = self.qa.run_item(item)
            self.assertEqual(record["status"], "PASS", f"item {item}: {record['detail']}")
            self.assertEqual(record["item"], item)

    def test_genus_two_items_pass(self):
        for item in (8, 9, 10):
            record = self.qa.run_item(item)
            self.assertEqual(record["status"], "PASS", f"item {item}: {record['detail']}")

    def test_table_item_passes(self):
        self.assertEqual(self.qa.run_item(13)["status"], "PASS")

    def test_property_item_passes(self):
        record = self.qa.run_item(14)
        self.assertEqual(record["status"], "PASS", record["detail"])

    def test_exception_becomes_failure(self):
        with mock.patch.object(QualityAssurance, "check_modular_identities", side_effect=RuntimeError("boom")):
            record = self.qa.run_item(1)
        self.assertEqual(record["status"], "FAIL")
        self.assertEqual(record["detail"], "RuntimeError: boom")

    def test_false_result_becomes_failure(self):
        with mock.patch.object(QualityAssurance, "check_virasoro", return_value=(False, "gram mismatch")):
            record = self.qa.run_item(7)
        self.assertEqual(record["status"], "FAIL")
        self.assertEqual(record["detail"], "gram mismatch")


class TestSelection(unittest.TestCase):
    def test_subset_is_ordered(self):
        records = QualityAssurance().run_all(items=[4, 1])
        self.assertEqual([r["item"] for r in records], [1, 4])
        self.assertTrue(QualityAssurance.all_passed(records))

    def test_numeric_item_needs_opt_in(self):
        qa = QualityAssurance()
        self.assertEqual(qa.run_all(items=[15]), [])
        with mock.patch.object(QualityAssurance, "check_numeric", return_value=(True, "ok")):
            records = qa.run_all(items=[15], numeric=True)
        self.assertEqual([r["status"] for r in records], ["PASS"])

    def test_all_passed(self):
        self.assertTrue(QualityAssurance.all_passed([]))
        self.assertFalse(QualityAssurance.all_passed([{"status": "PASS"}, {"status": "FAIL"}]))


if __name__ == "__main__":
    unittest.main()
