import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from duplexmin.graphs import (
    DirectedLayer,
    Matching,
    build_bipartite,
    driver_set,
    has_augmenting_path,
    max_matching,
)

from brute import brute_max_matching_size


def layer_strategy(max_n=8, self_loops=True):
    def build(draw):
        n = draw(st.integers(min_value=1, max_value=max_n))
        pool = [
            (u, v) for u in range(n) for v in range(n) if self_loops or u != v
        ]
        edges = draw(st.lists(st.sampled_from(pool), max_size=len(pool))) if pool else []
        return DirectedLayer(n, edges)

    return st.composite(lambda draw: build(draw))()


class TestDirectedLayer:
    def test_rejects_out_of_range_edges(self):
        with pytest.raises(ValueError):
            DirectedLayer(3, [(0, 3)])

    def test_collapses_duplicates_and_counts(self):
        layer = DirectedLayer(3, [(0, 1), (0, 1), (1, 2), (0, 1)])
        assert layer.edges == [(0, 1), (1, 2)]
        assert layer.duplicates_collapsed == 2

    def test_adjacency_consistent_with_edges(self):
        layer = DirectedLayer(4, [(2, 0), (0, 1), (2, 2)])
        assert layer.out_adj[2] == [0, 2]
        assert layer.in_adj[0] == [2]
        assert layer.in_adj[2] == [2]

    def test_self_loop_allowed(self):
        layer = DirectedLayer(3, [(2, 2)])
        assert (2, 2) in layer.edge_set


class TestBuildBipartite:
    def test_definitional_mapping(self):
        layer = DirectedLayer(3, [(0, 1), (1, 2)])
        bip = build_bipartite(layer)
        assert bip.edges == [(0, 1), (1, 2)]

    def test_empty_layer(self):
        bip = build_bipartite(DirectedLayer(4, []))
        assert bip.n == 4
        assert bip.edges == []

    def test_self_loop_maps_to_copies(self):
        bip = build_bipartite(DirectedLayer(3, [(2, 2)]))
        assert (2, 2) in bip.edges

    def test_edge_counts_match(self):
        layer = DirectedLayer(5, [(0, 1), (3, 2), (4, 4), (1, 0)])
        bip = build_bipartite(layer)
        assert len(bip.edges) == layer.num_edges


class TestMaxMatching:
    def test_two_edge_path(self):
        bip = build_bipartite(DirectedLayer(3, [(0, 1), (1, 2)]))
        m = max_matching(bip)
        assert m.size == 2
        assert driver_set(m, 3) == {0}

    def test_empty_graph(self):
        bip = build_bipartite(DirectedLayer(5, []))
        assert max_matching(bip).size == 0

    def test_all_self_loops_perfect(self):
        n = 6
        bip = build_bipartite(DirectedLayer(n, [(i, i) for i in range(n)]))
        m = max_matching(bip)
        assert m.size == n
        assert driver_set(m, n) == set()

    def test_size_matches_brute_force(self):
        rng = random.Random(7)
        for _ in range(200):
            n = rng.randint(1, 8)
            edges = [
                (u, v)
                for u in range(n)
                for v in range(n)
                if rng.random() < 0.35
            ]
            bip = build_bipartite(DirectedLayer(n, edges))
            assert max_matching(bip).size == brute_max_matching_size(bip)

    def test_size_invariant_under_seed(self):
        rng = random.Random(13)
        for _ in range(12):
            n = rng.randint(2, 50)
            edges = [
                (u, v)
                for u in range(n)
                for v in range(n)
                if u != v and rng.random() < 0.08
            ]
            bip = build_bipartite(DirectedLayer(n, edges))
            base = max_matching(bip).size
            sizes = {max_matching(bip, seed=s).size for s in range(10)}
            assert sizes == {base}

    def test_no_augmenting_path_remains(self):
        rng = random.Random(99)
        for _ in range(60):
            n = rng.randint(1, 12)
            edges = [
                (u, v)
                for u in range(n)
                for v in range(n)
                if rng.random() < 0.3
            ]
            bip = build_bipartite(DirectedLayer(n, edges))
            for seed in (None, 1, 2):
                m = max_matching(bip, seed)
                m.validate(bip)
                assert not has_augmenting_path(bip, m)

    def test_seeded_runs_reproducible(self):
        bip = build_bipartite(
            DirectedLayer(8, [(u, v) for u in range(8) for v in range(8) if u != v])
        )
        assert max_matching(bip, seed=42) == max_matching(bip, seed=42)

    def test_seeds_reach_multiple_matchings(self):
        bip = build_bipartite(
            DirectedLayer(6, [(u, v) for u in range(6) for v in range(6)])
        )
        distinct = {tuple(max_matching(bip, seed=s).mate_of_minus) for s in range(12)}
        assert len(distinct) > 1


class TestDriverSet:
    def test_empty_matching(self):
        assert driver_set(Matching.empty(3), 3) == {0, 1, 2}

    def test_two_edge_matching(self):
        m = Matching.from_pairs(3, [(0, 1), (1, 2)])
        assert driver_set(m, 3) == {0}

    def test_perfect_matching(self):
        m = Matching.from_pairs(4, [(i, i) for i in range(4)])
        assert driver_set(m, 4) == set()

    @settings(max_examples=60, deadline=None)
    @given(layer_strategy(), st.integers(min_value=0, max_value=2**30))
    def test_size_identity(self, layer, seed):
        bip = build_bipartite(layer)
        m = max_matching(bip, seed)
        assert len(driver_set(m, layer.n)) + m.size == layer.n
