"""Forced-edge pruning: forced matching extraction and degree-two cores."""

import random

import pytest

from treematch import AutomaticTree, FiniteGraph, Matching, ROOT
from treematch.derivative import DerivativeConflict, DerivativeResult, derive, derive_window
from treematch.enumeration import all_trees, random_forest
from treematch.oracle import enumerate_perfect_matchings, has_perfect_matching
from treematch.presets import BATTERY, cycle_graph, path_graph, star_graph


class TestDeriveFinite:
    def test_single_edge_is_forced(self):
        res = derive(path_graph(2))
        assert isinstance(res, DerivativeResult)
        assert res.core == frozenset()
        assert res.forced.sorted_pairs() == [(0, 1)]
        assert res.stabilized

    def test_path_three_conflicts_at_the_middle(self):
        res = derive(path_graph(3))
        assert isinstance(res, DerivativeConflict)
        assert res.kind == "double_forced"
        assert res.vertex == 1
        assert tuple(sorted(res.partners)) == (0, 2)

    def test_cycle_four_is_its_own_core(self):
        res = derive(cycle_graph(4))
        assert isinstance(res, DerivativeResult)
        assert res.core == frozenset({0, 1, 2, 3})
        assert len(res.forced) == 0

    def test_star_conflicts_at_the_center(self):
        res = derive(star_graph(3))
        assert isinstance(res, DerivativeConflict)
        assert res.vertex == 0

    def test_trace_is_decreasing_and_stabilizes(self):
        res = derive(path_graph(8))
        assert isinstance(res, DerivativeResult)
        sets = [frozenset(stage) for stage in res.trace]
        for earlier, later in zip(sets, sets[1:]):
            assert later <= earlier
        assert res.stabilized

    def test_isolated_vertex_conflicts(self):
        res = derive(FiniteGraph.from_edges(3, [(0, 1)]))
        assert isinstance(res, DerivativeConflict)
        assert res.kind == "isolated"
        assert res.vertex == 2


class TestDeriveAgainstOracle:
    def test_exhaustive_small_trees(self):
        for n in range(1, 10):
            for g in all_trees(n):
                res = derive(g)
                conflict = isinstance(res, DerivativeConflict)
                assert conflict == (not has_perfect_matching(g)), g.edges
                if not conflict:
                    assert res.core == frozenset()
                    assert res.forced.is_perfect_on(g)

    def test_random_forests(self):
        rng = random.Random(404)
        for _ in range(300):
            g = random_forest(rng, 16)
            res = derive(g)
            conflict = isinstance(res, DerivativeConflict)
            assert conflict == (not has_perfect_matching(g)), g.edges
            if not conflict:
                assert res.forced.is_perfect_on(g)

    def test_success_forced_is_the_unique_matching_on_trees(self):
        for n in (2, 4, 6, 8):
            for g in all_trees(n):
                res = derive(g)
                if isinstance(res, DerivativeConflict):
                    continue
                enumerated = enumerate_perfect_matchings(g)
                assert enumerated == [res.forced]

    def test_forced_plus_core_matching_is_perfect_on_cyclic_inputs(self):
        c4_pendant = FiniteGraph.from_edges(
            6, [(0, 1), (1, 2), (2, 3), (0, 3), (0, 4), (4, 5)]
        )
        c6_plus_edge = FiniteGraph.from_edges(
            8, [(0, 1), (1, 2), (2, 3), (3, 4), (4, 5), (0, 5), (6, 7)]
        )
        for g in (c4_pendant, c6_plus_edge):
            res = derive(g)
            assert isinstance(res, DerivativeResult)
            assert res.core
            core_graph, ids = g.induced(res.core)
            back = {i: v for i, v in enumerate(ids)}
            completions = enumerate_perfect_matchings(core_graph)
            assert completions
            for completion in completions:
                pairs = list(res.forced.sorted_pairs())
                pairs += [(back[a], back[b]) for a, b in completion.sorted_pairs()]
                assert Matching.of(pairs).is_perfect_on(g)


class TestDeriveWindow:
    def test_three_regular_window_is_all_core(self):
        t = BATTERY["three_regular"]()
        for depth in (2, 4):
            res = derive_window(t, depth)
            assert isinstance(res, DerivativeResult)
            assert len(res.core) == len(t.window(depth).paths)
            assert len(res.forced) == 0
            assert res.stabilized

    def test_line_window_is_all_core(self):
        t = BATTERY["line"]()
        res = derive_window(t, 4)
        assert isinstance(res, DerivativeResult)
        assert len(res.core) == 9
        assert len(res.forced) == 0

    def test_degree_one_root_forces_its_edge(self):
        t = AutomaticTree.build(
            "top", {"top": 1, "body": 2}, {("top", 0): "body"}
        )
        res = derive_window(t, 4)
        assert isinstance(res, DerivativeResult)
        assert res.forced.partner(ROOT) == (0,)
        assert ROOT not in res.core
        assert (0,) not in res.core
        assert (0, 0) in res.core

    def test_requires_depth_at_least_two(self):
        with pytest.raises(ValueError):
            derive_window(BATTERY["binary"](), 1)
