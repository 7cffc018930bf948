import unittest

from hypothesis import given, settings
from hypothesis import strategies as hs

from ceg.bench.generator import random_staged_tree
from ceg.compaction.engine import (compact, merge_leaves, merge_level,
                                   refine_to_positions)
from ceg.compaction.trace import CompactionMode, StopReason, count_merge_work
from ceg.core.tools import construct_tree, paths
from ceg.roundtrip.tools import ceg_isomorphic
from tests.helpers import (chain_tree, disease_staged, disease_tree,
                           single_edge_tree, stage_by_keys, t1_staged,
                           t2_tree, trivially_staged)


class TestMergeLeaves(unittest.TestCase):
    def test_t2(self):
        st = trivially_staged(t2_tree())
        g1 = merge_leaves(st)
        v1 = st.tree.vertex_for_key("v1")
        self.assertEqual(g1.vertices, frozenset({st.root, v1, g1.sink}))
        edges = {(e.source, e.target, e.label) for e in g1.edges}
        self.assertEqual(
            edges,
            {
                (st.root, v1, "a"),
                (st.root, g1.sink, "b"),
                (v1, g1.sink, "x"),
                (v1, g1.sink, "y"),
            },
        )
        self.assertEqual(g1.key(g1.sink), "w_inf")

    def test_single_edge(self):
        g1 = merge_leaves(trivially_staged(single_edge_tree()))
        self.assertEqual(g1.number_of_vertices(), 2)
        self.assertEqual(g1.number_of_edges(), 1)

    def test_vertex_count(self):
        st = trivially_staged(disease_tree())
        g1 = merge_leaves(st)
        self.assertEqual(
            g1.number_of_vertices(), st.number_of_vertices() - len(st.leaves) + 1
        )
        self.assertEqual(g1.number_of_edges(), st.number_of_edges())


class TestRefineAndMerge(unittest.TestCase):
    def setUp(self):
        self.st = t1_staged()
        self.v1 = self.st.tree.vertex_for_key("v1")
        self.v2 = self.st.tree.vertex_for_key("v2")
        self.g1 = merge_leaves(self.st)

    def test_same_targets_stay_together(self):
        cells = refine_to_positions(self.g1, [frozenset({self.v1, self.v2})])
        self.assertEqual(cells, [frozenset({self.v1, self.v2})])

    def test_different_targets_split(self):
        tree = construct_tree(
            [("r", "v1", "a"), ("r", "v2", "b"), ("v1", "l1", "x"), ("v1", "l2", "y"),
             ("v2", "w", "x"), ("v2", "l3", "y"), ("w", "l4", "p")]
        )
        st = stage_by_keys(tree, [["v1", "v2"]])
        v1, v2 = tree.vertex_for_key("v1"), tree.vertex_for_key("v2")
        cells = refine_to_positions(merge_leaves(st), [frozenset({v1, v2})])
        self.assertEqual(sorted(cells, key=len), [frozenset({v1}), frozenset({v2})])

    def test_singletons_are_unchanged(self):
        cells = [frozenset({self.v1}), frozenset({self.v2})]
        self.assertEqual(refine_to_positions(self.g1, cells), cells)
        g2 = merge_level(self.g1, cells)
        self.assertEqual(g2.number_of_vertices(), self.g1.number_of_vertices())
        self.assertEqual(g2.number_of_edges(), self.g1.number_of_edges())

    def test_merge_keeps_smallest_root_path(self):
        g2 = merge_level(self.g1, [frozenset({self.v1, self.v2})])
        self.assertEqual(g2.vertices, frozenset({self.st.root, self.v1, g2.sink}))
        edges = sorted((e.source, e.target, e.label) for e in g2.edges)
        self.assertEqual(
            edges,
            sorted(
                [
                    (self.st.root, self.v1, "a"),
                    (self.st.root, self.v1, "b"),
                    (self.v1, g2.sink, "x"),
                    (self.v1, g2.sink, "y"),
                ]
            ),
        )
        self.assertEqual(self.g1.number_of_vertices(), 4)

    def test_merged_edges_removed(self):
        st = disease_staged("A")
        g1 = merge_leaves(st)
        cell = frozenset(st.tree.vertex_for_key(k) for k in ("P_H", "P_C", "P_M"))
        g2 = merge_level(g1, [cell])
        # k = 3 members with d = 2 edges each
        self.assertEqual(g1.number_of_edges() - g2.number_of_edges(), (3 - 1) * 2)

    def test_counts_are_pooled(self):
        st = t1_staged(with_counts=True)
        ceg, _ = compact(st)
        v1 = st.tree.vertex_for_key("v1")
        self.assertEqual({e.label: e.count for e in ceg.out_edges(v1)}, {"x": 33, "y": 77})
        self.assertEqual({e.label: e.count for e in ceg.out_edges(ceg.root)}, {"a": 10, "b": 100})


class TestCompact(unittest.TestCase):
    def test_t1(self):
        ceg, trace = compact(t1_staged())
        self.assertEqual(ceg.number_of_vertices(), 3)
        self.assertEqual(ceg.number_of_edges(), 4)
        work = count_merge_work(trace)
        self.assertEqual(work.iterations, 1)
        self.assertEqual(work.graphs_built, 2)
        self.assertEqual(trace.stop_reason, StopReason.FULL_DEPTH)

    def test_all_singleton_staging(self):
        st = trivially_staged(disease_tree())
        ceg, _ = compact(st)
        self.assertEqual(ceg.number_of_vertices(), len(st.situations) + 1)

    def test_single_floret(self):
        st = trivially_staged(single_edge_tree())
        ceg, trace = compact(st)
        self.assertEqual(ceg.number_of_vertices(), 2)
        self.assertEqual(trace.records, [])

    def test_chain(self):
        st = trivially_staged(chain_tree(5))
        _, baseline = compact(st, CompactionMode.BASELINE)
        _, optimal = compact(st, CompactionMode.OPTIMAL)
        self.assertEqual(count_merge_work(baseline).iterations, 4)
        self.assertEqual(count_merge_work(optimal).iterations, 1)
        self.assertEqual(optimal.stop_reason, StopReason.OPTIMAL_FIXPOINT)
        self.assertEqual(baseline.stop_reason, StopReason.FULL_DEPTH)

    def test_disease_colourings(self):
        for colouring, expected in (("A", 10), ("B", 9)):
            with self.subTest(colouring=colouring):
                st = disease_staged(colouring)
                optimal, _ = compact(st, CompactionMode.OPTIMAL)
                baseline, _ = compact(st, CompactionMode.BASELINE)
                self.assertEqual(optimal.number_of_vertices(), expected)
                self.assertTrue(ceg_isomorphic(optimal, baseline))

    def test_trace_graphs_preserve_paths(self):
        st = disease_staged("B")
        ceg, trace = compact(st, CompactionMode.BASELINE, keep_graphs=True)
        expected = paths(st)
        self.assertEqual(paths(trace.leaf_graph), expected)
        for record in trace.records:
            self.assertEqual(paths(record.graph), expected)
        self.assertEqual(paths(ceg), expected)

    def test_trace_to_dict(self):
        st = t1_staged()
        _, trace = compact(st)
        data = trace.to_dict(key=st.key)
        self.assertEqual(data["mode"], "optimal")
        self.assertEqual(data["stop_reason"], "FullDepth")
        self.assertEqual(data["iterations"][0]["removed"], ["v2"])
        self.assertEqual(data["iterations"][0]["position_cells"], [["v1", "v2"]])

    @settings(max_examples=60, deadline=None)
    @given(
        hs.integers(0, 10**6),
        hs.integers(1, 6),
        hs.integers(1, 3),
        hs.sampled_from([0.0, 0.3, 0.7, 1.0]),
    )
    def test_random_trees(self, seed, m, b, density):
        st = random_staged_tree(seed, m, b, density)
        optimal, opt_trace = compact(st, CompactionMode.OPTIMAL)
        baseline, base_trace = compact(st, CompactionMode.BASELINE, keep_graphs=True)

        self.assertTrue(ceg_isomorphic(optimal, baseline))
        self.assertEqual(len(base_trace.records), max(m - 1, 0))
        self.assertLessEqual(len(opt_trace.records), len(base_trace.records))

        vertices, edges = base_trace.vertex_counts(), base_trace.edge_counts()
        self.assertEqual(vertices, sorted(vertices, reverse=True))
        self.assertEqual(edges, sorted(edges, reverse=True))
        for record in base_trace.records:
            self.assertEqual(paths(record.graph), paths(st))

        if opt_trace.stop_reason is StopReason.OPTIMAL_FIXPOINT:
            stop = len(opt_trace.records)
            self.assertEqual(sum(r.merges for r in base_trace.records[stop:]), 0)


if __name__ == "__main__":
    unittest.main()
