"""Independent brute-force oracles used only by the test suite.

Everything here is deliberately naive and separate from the library's own
algorithms, so the two sides can check each other.
"""

from __future__ import annotations

import itertools
import random
from collections import deque

from duplexmin.graphs import BipartiteRep, DirectedLayer, Matching, build_bipartite
from duplexmin.state import DuplexNetwork, DuplexState


def brute_max_matching_size(bip: BipartiteRep) -> int:
    """Maximum matching size by recursion over the edge list."""
    edges = bip.edges

    def rec(i: int, used_plus: frozenset, used_minus: frozenset) -> int:
        if i == len(edges):
            return 0
        best = rec(i + 1, used_plus, used_minus)
        u, v = edges[i]
        if u not in used_plus and v not in used_minus:
            best = max(best, 1 + rec(i + 1, used_plus | {u}, used_minus | {v}))
        return best

    return rec(0, frozenset(), frozenset())


def all_matchings_of_size(bip: BipartiteRep, size: int) -> list[list[tuple[int, int]]]:
    """Every matching with exactly ``size`` edges, as sorted pair lists."""
    edges = bip.edges
    out: list[list[tuple[int, int]]] = []

    def rec(i: int, chosen: list, used_plus: set, used_minus: set) -> None:
        if len(chosen) == size:
            out.append(sorted(chosen))
            return
        if i == len(edges) or len(chosen) + (len(edges) - i) < size:
            return
        u, v = edges[i]
        if u not in used_plus and v not in used_minus:
            used_plus.add(u)
            used_minus.add(v)
            chosen.append((u, v))
            rec(i + 1, chosen, used_plus, used_minus)
            chosen.pop()
            used_plus.remove(u)
            used_minus.remove(v)
        rec(i + 1, chosen, used_plus, used_minus)

    rec(0, [], set(), set())
    return out


def brute_min_union(net: DuplexNetwork) -> int:
    """Exact minimum union size over all maximum-matching pairs.

    Enumerates every maximum matching of each layer directly over edge
    subsets; intended for small instances only.
    """
    s1 = brute_max_matching_size(net.bip1)
    s2 = brute_max_matching_size(net.bip2)
    drivers1 = {
        frozenset(range(net.n)) - {v for _, v in m}
        for m in all_matchings_of_size(net.bip1, s1)
    }
    drivers2 = {
        frozenset(range(net.n)) - {v for _, v in m}
        for m in all_matchings_of_size(net.bip2, s2)
    }
    return min(len(a | b) for a in drivers1 for b in drivers2)


def brute_alt_reachable(
    layer: DirectedLayer, matching: Matching, source: int
) -> set[int]:
    """Nodes whose in-copy is reachable from ``source``'s in-copy along an
    alternating path with the start-parity fixed by ``source``'s status.

    Enumerates simple paths in the bipartite graph by DFS; exponential, for
    tiny graphs only.
    """
    n = layer.n
    in_matching = {
        (u, v) for v, u in enumerate(matching.mate_of_minus) if u != -1
    }
    edges = set(layer.edges)
    reached: set[int] = set()
    start_matched = matching.mate_of_minus[source] != -1

    # Vertices are ('m', v) / ('p', u); edges connect ('p', u)-('m', v).
    def extend(vertex, used_m, used_p, next_in_matching):
        side, node = vertex
        if side == "m":
            for u in layer.in_adj[node]:
                e = (u, node)
                if ((e in in_matching) == next_in_matching) and u not in used_p:
                    extend(("p", u), used_m, used_p | {u}, not next_in_matching)
        else:
            for v in layer.out_adj[node]:
                e = (node, v)
                if ((e in in_matching) == next_in_matching) and v not in used_m:
                    reached.add(v)
                    extend(("m", v), used_m | {v}, used_p, not next_in_matching)

    extend(("m", source), {source}, set(), start_matched)
    reached.discard(source)
    return reached


def brute_valid_exchange_targets(
    layer: DirectedLayer, matching: Matching, source: int
) -> set[int]:
    """Targets reachable with both start- and endpoint-parity satisfied,
    i.e. nodes whose matched status differs appropriately so that the
    symmetric difference along the path is again a matching of equal size.

    Computed by checking, for every other node ``t``, whether some simple
    alternating path flips exactly the right endpoints; done by trying the
    symmetric difference of every enumerated path.
    """
    out: set[int] = set()
    n = layer.n
    in_matching = {(u, v) for v, u in enumerate(matching.mate_of_minus) if u != -1}
    start_matched = matching.mate_of_minus[source] != -1

    paths: list[list[tuple[int, int]]] = []

    def extend(vertex, used_m, used_p, next_in_matching, path):
        side, node = vertex
        if side == "m":
            for u in layer.in_adj[node]:
                e = (u, node)
                if ((e in in_matching) == next_in_matching) and u not in used_p:
                    extend(("p", u), used_m, used_p | {u}, not next_in_matching, path + [e])
        else:
            for v in layer.out_adj[node]:
                e = (node, v)
                if ((e in in_matching) == next_in_matching) and v not in used_m:
                    paths.append(path + [e])
                    extend(("m", v), used_m | {v}, used_p, not next_in_matching, path + [e])

    extend(("m", source), {source}, set(), start_matched, [])
    for path in paths:
        t = path[-1][1]
        last_in = path[-1] in in_matching
        if last_in == (matching.mate_of_minus[t] != -1):
            out.add(t)
    out.discard(source)
    return out


def enumerate_claps(state: DuplexState, max_length: int = 6) -> list[list[tuple[int, int, int]]]:
    """All cross-layer augmenting paths up to ``max_length`` segments.

    Each path is a list of ``(from, to, layer)`` triples.  Segments are
    enumerated from valid-exchange reachability, chains must alternate
    layers, keep nodes distinct, respect relay classes, and run from a node
    driven only in layer 1 to one driven only in layer 2.
    """
    d1, d2 = state.d1, state.d2
    dd1 = sorted(d1 - d2)
    dd2 = d2 - d1
    results: list[list[tuple[int, int, int]]] = []

    def targets_from(node: int, layer: int) -> set[int]:
        if layer == 1:
            if node not in d1:
                return set()
            return brute_valid_exchange_targets(state.net.layer1, state.m1, node)
        if node in d2:
            return set()
        return brute_valid_exchange_targets(state.net.layer2, state.m2, node)

    def rec(node: int, layer_used: int | None, chain, visited) -> None:
        if len(chain) >= max_length:
            return
        for layer in (1, 2):
            if layer == layer_used:
                continue
            for t in sorted(targets_from(node, layer)):
                if t in visited:
                    continue
                if layer == 1 and not (node in d1 and t not in d1):
                    continue
                if layer == 2 and not (node not in d2 and t in d2):
                    continue
                step = (node, t, layer)
                if t in dd2:
                    results.append(chain + [step])
                    continue
                relay_ok = (
                    (layer == 1 and t not in d1 and t not in d2)
                    or (layer == 2 and t in d1 and t in d2)
                )
                if relay_ok:
                    rec(t, layer, chain + [step], visited | {t})

    for s in dd1:
        rec(s, None, [], {s})
    return results


def random_duplex(
    rng: random.Random, n_range=(3, 8), p_range=(0.1, 0.5), self_loops=False
) -> DuplexNetwork:
    """Small random duplex for property tests."""
    n = rng.randint(*n_range)
    layers = []
    for _ in range(2):
        p = rng.uniform(*p_range)
        edges = [
            (u, v)
            for u in range(n)
            for v in range(n)
            if (self_loops or u != v) and rng.random() < p
        ]
        layers.append(DirectedLayer(n, edges))
    return DuplexNetwork.from_layers(layers[0], layers[1])
