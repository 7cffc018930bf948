import os
import tempfile
import unittest

from ceg.errors import (DuplicateSiblingLabel, EmptyTable,
                        InconsistentTermination, IngestError, IsLeaf,
                        PrefixNotFound, UnknownColumn)
from ceg.ingest.records import RecordTable, add_sampling_zero, ingest_records
from ceg.staging.stager import estimate_thetas


def counts_by_path(tree):
    return {tree.root_path(e.target): e.count for e in tree.edges}


class TestIngestRecords(unittest.TestCase):
    def setUp(self):
        self.table = RecordTable.from_rows(
            ["A", "B"], [("a", "x"), ("a", "y"), ("b", "x")]
        )

    def test_counts(self):
        tree = ingest_records(self.table, ["A", "B"])
        self.assertEqual(
            counts_by_path(tree),
            {("a",): 2, ("b",): 1, ("a", "x"): 1, ("a", "y"): 1, ("b", "x"): 1},
        )
        self.assertEqual(tree.key(tree.root), "v0")

    def test_counts_are_conserved(self):
        table = RecordTable.from_rows(
            ["A", "B"],
            [("a", "x"), ("a", "y"), ("b", "x"), ("c", "NA-STOP"), ("a", None), ("b", "y")],
        )
        with self.assertLogs("ceg.ingest.records", level="WARNING"):
            tree = ingest_records(table, ["A", "B"])
        incoming = {e.target: e.count for e in tree.edges}
        for v in tree.situations:
            flowing_out = sum(e.count for e in tree.out_edges(v))
            if v == tree.root:
                self.assertEqual(flowing_out, 5)
            else:
                self.assertEqual(flowing_out, incoming[v], tree.root_path(v))

    def test_single_row_is_a_chain(self):
        table = RecordTable.from_rows(["A", "B", "C"], [("a", "b", "c")])
        tree = ingest_records(table, ["A", "B", "C"])
        self.assertEqual(len(tree.leaves), 1)
        self.assertEqual({e.count for e in tree.edges}, {1})
        self.assertEqual(tree.number_of_edges(), 3)

    def test_column_order_matters(self):
        forward = ingest_records(self.table, ["A", "B"])
        backward = ingest_records(self.table, ["B", "A"])
        self.assertEqual([e.label for e in forward.out_edges(forward.root)], ["a", "b"])
        self.assertEqual([e.label for e in backward.out_edges(backward.root)], ["x", "y"])
        self.assertNotEqual(counts_by_path(forward), counts_by_path(backward))

    def test_missing_values_are_dropped(self):
        table = RecordTable.from_rows(["A", "B"], [("a", "x"), ("a", None), ("b", "x")])
        with self.assertLogs("ceg.ingest.records", level="WARNING"):
            tree = ingest_records(table, ["A", "B"])
        self.assertEqual(counts_by_path(tree)[("a",)], 1)

    def test_sentinel_ends_a_path(self):
        table = RecordTable.from_rows(["A", "B"], [("a", "x"), ("b", "NA-STOP")])
        tree = ingest_records(table, ["A", "B"])
        b = tree.vertex_for_path(("b",))
        self.assertTrue(tree.is_terminal(b))
        self.assertEqual(counts_by_path(tree)[("b",)], 1)

    def test_inconsistent_termination(self):
        table = RecordTable.from_rows(["A", "B"], [("a", "NA-STOP"), ("a", "x")])
        with self.assertRaises(InconsistentTermination):
            ingest_records(table, ["A", "B"])

    def test_empty_table(self):
        with self.assertRaises(EmptyTable):
            ingest_records(RecordTable.from_rows(["A"], []), ["A"])

    def test_nothing_survives(self):
        table = RecordTable.from_rows(["A"], [(None,)])
        with self.assertRaises(EmptyTable):
            ingest_records(table, ["A"])

    def test_unknown_column(self):
        with self.assertRaises(UnknownColumn):
            ingest_records(self.table, ["A", "C"])

    def test_chunking_does_not_change_the_tree(self):
        whole = ingest_records(self.table, ["A", "B"])
        chunked = ingest_records(self.table, ["A", "B"], chunk_size=1)
        self.assertEqual(whole.edge_specs(), chunked.edge_specs())


class TestFromCsv(unittest.TestCase):
    def setUp(self):
        self.dir = tempfile.TemporaryDirectory()

    def tearDown(self):
        self.dir.cleanup()

    def _write(self, text):
        path = os.path.join(self.dir.name, "records.csv")
        with open(path, "w", encoding="utf-8") as f:
            f.write(text)
        return path

    def test_reads_records(self):
        path = self._write("A, B\na, x\na, ?\nb, x\n")
        table = RecordTable.from_csv(path)
        self.assertEqual(table.columns, ("A", "B"))
        self.assertEqual(table.rows, (("a", "x"), ("a", None), ("b", "x")))

    def test_empty_file(self):
        with self.assertRaises(EmptyTable):
            RecordTable.from_csv(self._write(""))

    def test_not_utf8(self):
        path = os.path.join(self.dir.name, "latin1.csv")
        with open(path, "wb") as f:
            f.write(b"A,B\n\x80\x81,x\n")
        with self.assertRaises(IngestError):
            RecordTable.from_csv(path)


class TestSamplingZero(unittest.TestCase):
    def setUp(self):
        table = RecordTable.from_rows(
            ["setting", "test", "outcome"],
            [
                ("hospital", "test", "recovery"),
                ("hospital", "no test", "death"),
                ("community", "no test", "recovery"),
            ],
        )
        self.tree = ingest_records(table, ["setting", "test", "outcome"])

    def test_adds_zero_count_edge(self):
        tree = add_sampling_zero(self.tree, ["community", "no test"], "death")
        v = tree.vertex_for_path(("community", "no test"))
        self.assertEqual({e.label: e.count for e in tree.out_edges(v)}, {"death": 0, "recovery": 1})
        self.assertEqual(
            sum(e.count for e in tree.out_edges(tree.root)),
            sum(e.count for e in self.tree.out_edges(self.tree.root)),
        )
        self.assertEqual(tree.number_of_edges(), self.tree.number_of_edges() + 1)

    def test_empty_prefix_adds_at_root(self):
        tree = add_sampling_zero(self.tree, [], "care home")
        self.assertEqual(
            [e.label for e in tree.out_edges(tree.root)], ["care home", "community", "hospital"]
        )

    def test_duplicate_label(self):
        with self.assertRaises(DuplicateSiblingLabel):
            add_sampling_zero(self.tree, ["hospital"], "test")

    def test_unknown_prefix(self):
        with self.assertRaises(PrefixNotFound):
            add_sampling_zero(self.tree, ["care home"], "test")

    def test_leaf(self):
        with self.assertRaises(IsLeaf):
            add_sampling_zero(self.tree, ["hospital", "test", "recovery"], "death")

    def test_theta_is_zero_when_thetas_are_known(self):
        tree = add_sampling_zero(estimate_thetas(self.tree), ["community", "no test"], "death")
        v = tree.vertex_for_path(("community", "no test"))
        self.assertEqual({e.label: e.theta for e in tree.out_edges(v)}, {"death": 0.0, "recovery": 1.0})


if __name__ == "__main__":
    unittest.main()
