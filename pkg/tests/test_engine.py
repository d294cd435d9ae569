import random

import pytest

from duplexmin.engine import (
    ClapPath,
    Segment,
    alt_path,
    alt_reach,
    apply_clap,
    clap_s,
    find_shortest_clap,
    verify_clap,
)
from duplexmin.graphs import DirectedLayer, Matching, build_bipartite, max_matching
from duplexmin.state import DuplexNetwork, DuplexState, init_state

from brute import (
    brute_min_union,
    brute_valid_exchange_targets,
    enumerate_claps,
    random_duplex,
)
from conftest import fig_two_state, three_segment_state


def swapped(net: DuplexNetwork) -> DuplexNetwork:
    return DuplexNetwork.from_layers(net.layer2, net.layer1)


class TestAltReach:
    def test_empty_sources(self, six_node_state):
        reached, parents = alt_reach(set(), six_node_state.m1, 1, six_node_state)
        assert reached == set()
        assert parents == {}

    def test_isolated_driver_reaches_nothing(self):
        # A driver whose in-copy has no incident bipartite edges cannot move.
        layer = DirectedLayer(2, [(0, 1)])
        net = DuplexNetwork.from_layers(layer, DirectedLayer(2, []))
        state = init_state(net)
        assert state.d1 == {0}
        reached, _ = alt_reach({0}, state.m1, 1, state)
        assert reached == set()

    def test_polarity_violation_rejected(self, six_node_state):
        state = six_node_state
        with pytest.raises(ValueError):
            alt_reach({0}, state.m1, 1, state)  # 0 is matched in layer 1
        with pytest.raises(ValueError):
            alt_reach({4}, state.m2, 2, state)  # 4 is a driver of layer 2

    def test_matches_path_enumeration_layer1(self):
        rng = random.Random(5)
        checked = 0
        while checked < 40:
            net = random_duplex(rng, n_range=(2, 6))
            state = init_state(net)
            for s in sorted(state.d1):
                reached, _ = alt_reach({s}, state.m1, 1, state)
                expected = brute_valid_exchange_targets(net.layer1, state.m1, s)
                assert reached == expected
                checked += 1

    def test_matches_path_enumeration_layer2(self):
        rng = random.Random(6)
        checked = 0
        while checked < 40:
            net = random_duplex(rng, n_range=(2, 6))
            state = init_state(net)
            for s in range(net.n):
                if s in state.d2:
                    continue
                reached, _ = alt_reach({s}, state.m2, 2, state)
                valid = brute_valid_exchange_targets(net.layer2, state.m2, s)
                # Reachability also reports matched pass-through nodes; the
                # valid exchange endpoints are exactly its unmatched part.
                assert {v for v in reached if v in state.d2} == valid
                checked += 1

    def test_parents_rebuild_witnesses(self, six_node_state):
        state = six_node_state
        reached, parents = alt_reach({1, 2}, state.m1, 1, state)
        assert {3, 4} <= reached
        from duplexmin.engine import _witness_from_parents

        w = _witness_from_parents(parents, 4)
        assert w[0][1] in (1, 2) and w[-1][1] == 4


class TestAltPath:
    def test_returns_none_when_unreachable(self, six_node_state):
        state = six_node_state
        assert alt_path(1, 5, state.m1, state.net.layer1) is None

    def test_shortest_path_found(self, six_node_state):
        state = six_node_state
        w = alt_path(2, 4, state.m1, state.net.layer1)
        assert w == ((2, 2), (2, 4))


class TestFindShortestClap:
    def test_none_when_no_difference_drivers(self):
        layer = DirectedLayer(3, [(0, 1)])
        net = DuplexNetwork.from_layers(layer, layer)
        state = init_state(net)
        assert find_shortest_clap(state) is None

    def test_single_segment_instance(self, six_node_state):
        clap = find_shortest_clap(six_node_state)
        assert clap is not None
        assert clap.length == 1
        assert verify_clap(clap, six_node_state)
        shortest = min(len(c) for c in enumerate_claps(six_node_state))
        assert clap.length == shortest == 1

    def test_three_segment_instance(self):
        state = three_segment_state()
        assert state.d1 == {0, 2} and state.d2 == {2, 3}
        clap = find_shortest_clap(state)
        assert clap is not None
        assert clap.length == 3
        assert verify_clap(clap, state)
        assert [s.layer for s in clap.segments] == [1, 2, 1]
        assert clap.node_sequence() == [0, 1, 2, 3]
        # relay after the layer-1 segment is matched in both layers,
        # relay after the layer-2 segment is driven in both
        assert 1 not in state.d1 and 1 not in state.d2
        assert 2 in state.d1 and 2 in state.d2
        lengths = {len(c) for c in enumerate_claps(state)}
        assert min(lengths) == 3

    def test_length_matches_exhaustive_enumeration(self):
        rng = random.Random(17)
        trials = 0
        while trials < 60:
            net = random_duplex(rng, n_range=(3, 7))
            state = init_state(net, seed=rng.randrange(2**30))
            clap = find_shortest_clap(state)
            all_claps = enumerate_claps(state)
            if clap is None:
                assert all_claps == []
            else:
                assert verify_clap(clap, state)
                assert clap.length == min(len(c) for c in all_claps)
            trials += 1

    def test_deterministic(self, six_node_state):
        again = fig_two_state()
        assert find_shortest_clap(six_node_state) == find_shortest_clap(again)


class TestVerifyAndApply:
    def test_search_output_verifies(self, six_node_state):
        clap = find_shortest_clap(six_node_state)
        assert verify_clap(clap, six_node_state)

    def test_shared_edge_witnesses_rejected(self):
        state = three_segment_state()
        clap = find_shortest_clap(state)
        seg1, seg2, seg3 = clap.segments
        corrupted = ClapPath((seg1, seg2, Segment(seg3.from_node, seg3.to_node, 1, seg1.witness)))
        assert not verify_clap(corrupted, state)

    def test_wrong_relay_class_rejected(self):
        state = three_segment_state()
        clap = find_shortest_clap(state)
        # Rewire the chain so the relay after the layer-1 segment is a
        # driven-in-both node (2), violating the relay typing.
        seg = clap.segments[0]
        bad = ClapPath((Segment(seg.from_node, 2, 1, seg.witness),))
        assert not verify_clap(bad, state)

    def test_apply_gain_contract(self, six_node_state):
        state = six_node_state
        clap = find_shortest_clap(state)
        d0, u0 = state.difference_mass(), state.union_size()
        k1, k2 = state.k1, state.k2
        report = apply_clap(state, clap)
        assert report.delta_after == d0 - 2
        assert report.union_after == u0 - 1
        assert (state.k1, state.k2) == (k1, k2)
        assert state.m1.size == state.net.n - k1
        state.check(deep=True)

    def test_start_and_end_become_consistent(self, six_node_state):
        state = six_node_state
        clap = find_shortest_clap(state)
        seq = clap.node_sequence()
        apply_clap(state, clap)
        snap = state.partition()
        assert seq[0] not in snap.dd1 | snap.dd2
        assert seq[-1] not in snap.dd1 | snap.dd2

    def test_relays_stay_consistent_but_flip(self):
        state = three_segment_state()
        clap = find_shortest_clap(state)
        before = state.partition()
        apply_clap(state, clap)
        after = state.partition()
        for relay in clap.node_sequence()[1:-1]:
            assert relay not in after.dd1 | after.dd2
            flipped_to_cds = relay in before.cms and relay in after.cds
            flipped_to_cms = relay in before.cds and relay in after.cms
            assert flipped_to_cds or flipped_to_cms

    def test_stale_clap_rejected_atomically(self, six_node_state):
        state = six_node_state
        clap = find_shortest_clap(state)
        apply_clap(state, clap)
        frozen = state.state_hash()
        with pytest.raises(ValueError):
            apply_clap(state, clap)
        assert state.state_hash() == frozen


class TestClapS:
    def test_identical_layers_zero_iterations(self):
        edges = [(0, 1), (1, 2), (3, 1)]
        net = DuplexNetwork.from_layers(DirectedLayer(4, edges), DirectedLayer(4, edges))
        state = init_state(net)
        log = clap_s(state)
        assert log.clap_stable
        assert log.iterations == []
        assert log.mean_clap_length == 0.0

    def test_six_node_contraction(self, six_node_state):
        state = six_node_state
        log = clap_s(state, debug=True)
        assert log.initial_union == 4
        assert log.final_union == 2
        assert len(log.iterations) == 2
        assert log.clap_stable
        assert state.d1 == state.d2 == {3, 4}
        assert log.final_union == brute_min_union(state.net)

    def test_three_segment_contraction(self):
        state = three_segment_state()
        log = clap_s(state, debug=True)
        assert log.final_union == 2
        assert log.final_union == brute_min_union(state.net)

    def test_monotone_progress(self):
        rng = random.Random(31)
        for _ in range(25):
            net = random_duplex(rng)
            state = init_state(net, seed=rng.randrange(2**30))
            d0 = state.difference_mass()
            log = clap_s(state, debug=True)
            assert log.clap_stable
            assert len(log.iterations) <= d0 // 2
            for rec in log.iterations:
                assert rec.delta_after == rec.delta_before - 2
                assert rec.union_after == rec.union_before - 1

    def test_matches_exact_minimum_small(self):
        rng = random.Random(41)
        for _ in range(30):
            net = random_duplex(rng, n_range=(2, 6))
            state = init_state(net, seed=rng.randrange(2**30))
            log = clap_s(state)
            assert log.final_union == brute_min_union(net)

    def test_layer_swap_invariance(self):
        rng = random.Random(53)
        for _ in range(25):
            net = random_duplex(rng)
            a = init_state(net)
            b = init_state(swapped(net))
            assert clap_s(a).final_union == clap_s(b).final_union

    def test_max_iterations_truncation(self, six_node_state):
        log = clap_s(six_node_state, max_iterations=0)
        assert not log.clap_stable
        assert log.iterations == []
        assert find_shortest_clap(six_node_state) is not None
