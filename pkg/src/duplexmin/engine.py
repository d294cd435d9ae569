"""Shortest cross-layer augmenting path search, application, and main loop.

A single-layer *admissible segment* ``(u -> v)`` rewires one layer's matching
along an alternating path so that the layer's driver moves between ``u`` and
``v`` while the budget stays fixed.  Chaining segments that alternate between
the two layers, starting at a node driven only in layer 1 and ending at a
node driven only in layer 2, yields a cross-layer augmenting path (CLAP);
applying one always lowers the driver-set union size by exactly one.  A state
admitting no such path is a global minimum of the union size for its budgets,
so the search doubles as an optimality certificate.
"""

from __future__ import annotations

import time
from collections import deque
from dataclasses import dataclass, field

from .graphs import UNMATCHED, DirectedLayer, Matching
from .state import DuplexState


@dataclass(frozen=True)
class Segment:
    """One admissible driver exchange in a single layer.

    For ``layer == 1`` the exchange removes ``from_node`` from that layer's
    driver set and adds ``to_node``; for ``layer == 2`` it removes ``to_node``
    and adds ``from_node``.  ``witness`` is the alternating path realizing the
    exchange, as ``(out_copy, in_copy)`` bipartite edges in path order from
    ``from_node``'s in-copy to ``to_node``'s.
    """

    from_node: int
    to_node: int
    layer: int
    witness: tuple[tuple[int, int], ...]


@dataclass(frozen=True)
class ClapPath:
    """A layer-alternating chain of admissible segments."""

    segments: tuple[Segment, ...]

    @property
    def length(self) -> int:
        return len(self.segments)

    def node_sequence(self) -> list[int]:
        seq = [self.segments[0].from_node]
        seq.extend(seg.to_node for seg in self.segments)
        return seq


@dataclass(frozen=True)
class ApplyReport:
    delta_before: int
    delta_after: int
    union_before: int
    union_after: int


@dataclass(frozen=True)
class IterationRecord:
    length: int
    delta_before: int
    delta_after: int
    union_before: int
    union_after: int
    elapsed: float


@dataclass
class RunLog:
    """Per-iteration trace of one search-and-apply run."""

    iterations: list[IterationRecord] = field(default_factory=list)
    clap_stable: bool = False
    mean_clap_length: float = 0.0
    initial_union: int = 0
    final_union: int = 0
    initial_delta: int = 0
    final_delta: int = 0
    elapsed: float = 0.0
    timed_out: bool = False


def _flood_driver_side(frontier, in_adj, mate_plus, mate_minus):
    """Multi-source alternating BFS from in-copies that are unmatched.

    Moves follow a non-matching edge into an out-copy, then that out-copy's
    matching edge; every node reached this way arrives on a matching edge, so
    all destinations are matched.  Returns ``(root, parents)`` where ``root``
    maps each reached node to the source that claimed it and ``parents`` maps
    it to ``(previous_node, pivot_out_copy)`` for path reconstruction.
    """
    root = {s: s for s in frontier}
    parents: dict[int, tuple[int, int]] = {}
    seen = set(frontier)
    queue = deque(frontier)
    while queue:
        x = queue.popleft()
        rx = root[x]
        mx = mate_minus[x]
        for u in in_adj[x]:
            if u == mx:
                continue
            w = mate_plus[u]
            if w == UNMATCHED or w in seen:
                continue
            seen.add(w)
            root[w] = rx
            parents[w] = (x, u)
            queue.append(w)
    return root, parents


def _flood_matched_side(frontier, out_adj, mate_minus):
    """Multi-source alternating BFS from in-copies that are matched.

    Moves follow the node's matching edge to its out-copy, then any
    non-matching edge out of it; destinations arrive on non-matching edges,
    so unmatched destinations are valid exchange endpoints while matched ones
    are pass-throughs that keep expanding.
    """
    root = {s: s for s in frontier}
    parents: dict[int, tuple[int, int]] = {}
    seen = set(frontier)
    queue = deque(frontier)
    while queue:
        x = queue.popleft()
        u = mate_minus[x]
        if u == UNMATCHED:
            continue
        rx = root[x]
        for w in out_adj[u]:
            if w == x or w in seen:
                continue
            seen.add(w)
            root[w] = rx
            parents[w] = (x, u)
            queue.append(w)
    return root, parents


def _witness_from_parents(parents, target: int) -> tuple[tuple[int, int], ...]:
    """Rebuild the alternating path to ``target`` from a flood's parent map."""
    hops = []
    cur = target
    while cur in parents:
        x, u = parents[cur]
        hops.append((x, u, cur))
        cur = x
    hops.reverse()
    edges: list[tuple[int, int]] = []
    for x, u, w in hops:
        edges.append((u, x))
        edges.append((u, w))
    return tuple(edges)


def alt_reach(
    sources: set[int], m: Matching, layer: int, state: DuplexState
) -> tuple[set[int], dict[int, tuple[int, int]]]:
    """All nodes alternating-reachable from ``sources`` in one layer.

    Sources must satisfy the layer's segment-origin polarity: unmatched
    in-copy for layer 1 (layer-1 drivers), matched in-copy for layer 2
    (layer-2 non-drivers).  Returns the reached set (sources excluded) and a
    parent map sufficient to rebuild one shortest alternating path per node.
    """
    net = state.net
    ordered = sorted(sources)
    if layer == 1:
        for s in ordered:
            if m.mate_of_minus[s] != UNMATCHED:
                raise ValueError(f"layer-1 source {s} is not a driver of its layer")
        _, parents = _flood_driver_side(
            ordered, net.layer1.in_adj, m.mate_of_plus, m.mate_of_minus
        )
    elif layer == 2:
        for s in ordered:
            if m.mate_of_minus[s] == UNMATCHED:
                raise ValueError(f"layer-2 source {s} is a driver of its layer")
        _, parents = _flood_matched_side(ordered, net.layer2.out_adj, m.mate_of_minus)
    else:
        raise ValueError(f"layer must be 1 or 2, got {layer}")
    return set(parents), parents


def alt_path(
    a: int, b: int, m: Matching, layer: DirectedLayer
) -> tuple[tuple[int, int], ...] | None:
    """Shortest alternating path between two in-copies, or None.

    The start parity is fixed by ``a``'s matched status: the first edge is a
    matching edge iff ``a``'s in-copy is matched.  Ties are broken by the
    sorted-adjacency BFS order.
    """
    if m.mate_of_minus[a] == UNMATCHED:
        _, parents = _flood_driver_side(
            [a], layer.in_adj, m.mate_of_plus, m.mate_of_minus
        )
    else:
        _, parents = _flood_matched_side([a], layer.out_adj, m.mate_of_minus)
    if b not in parents:
        return None
    return _witness_from_parents(parents, b)


def find_shortest_clap(state: DuplexState) -> ClapPath | None:
    """Find a cross-layer augmenting path with the fewest segments.

    Level-synchronous BFS over ``(node, expansion-layer)`` states: every node
    driven only in layer 1 seeds both expansion layers; each level runs one
    multi-source alternating flood per layer, stops at the first level that
    reaches a node driven only in layer 2, and otherwise enqueues relays
    (matched-in-both nodes after a layer-1 segment, driven-in-both nodes
    after a layer-2 segment).  Returns None iff no such path exists, which
    certifies that the union size is minimal for the fixed budgets.

    Ties at the winning level are broken deterministically: layer-1 targets
    take precedence, then the smallest target node id.
    """
    d1, d2 = state.d1, state.d2
    dd1 = d1 - d2
    if not dd1:
        return None
    dd2 = d2 - d1
    if not dd2:
        return None
    net = state.net
    m1, m2 = state.m1, state.m2
    in1 = net.layer1.in_adj
    out2 = net.layer2.out_adj
    mp1, mm1 = m1.mate_of_plus, m1.mate_of_minus
    mm2 = m2.mate_of_minus

    seeds = sorted(dd1)
    visited1 = set(seeds)
    visited2 = set(seeds)
    pred: dict[tuple[int, int], tuple[int, int] | None] = {}
    for s in seeds:
        pred[(s, 1)] = None
        pred[(s, 2)] = None
    frontier1 = seeds
    frontier2 = list(seeds)
    floods: list[dict[int, tuple[dict, dict]]] = []

    while frontier1 or frontier2:
        level: dict[int, tuple[dict, dict]] = {}
        hit: tuple[int, int] | None = None
        if frontier1:
            root1, par1 = _flood_driver_side(frontier1, in1, mp1, mm1)
            level[1] = (root1, par1)
            targets = dd2.intersection(par1)
            if targets:
                hit = (min(targets), 1)
        if hit is None and frontier2:
            root2, par2 = _flood_matched_side(frontier2, out2, mm2)
            level[2] = (root2, par2)
            targets = dd2.intersection(par2)
            if targets:
                hit = (min(targets), 2)
        floods.append(level)
        if hit is not None:
            return _unroll(hit, pred, floods)
        nf1: list[int] = []
        nf2: list[int] = []
        if 1 in level:
            root1, par1 = level[1]
            for w in par1:
                if w not in d1 and w not in d2 and w not in visited2:
                    visited2.add(w)
                    pred[(w, 2)] = (root1[w], 1)
                    nf2.append(w)
        if 2 in level:
            root2, par2 = level[2]
            for w in par2:
                if w in d1 and w in d2 and w not in visited1:
                    visited1.add(w)
                    pred[(w, 1)] = (root2[w], 2)
                    nf1.append(w)
        frontier1 = sorted(nf1)
        frontier2 = sorted(nf2)
    return None


def _unroll(
    hit: tuple[int, int],
    pred: dict[tuple[int, int], tuple[int, int] | None],
    floods: list[dict[int, tuple[dict, dict]]],
) -> ClapPath:
    target, layer = hit
    level_idx = len(floods) - 1
    root, _ = floods[level_idx][layer]
    chain = [(root[target], target, layer, level_idx)]
    cur = (root[target], layer)
    while pred[cur] is not None:
        prev_node, prev_layer = pred[cur]
        level_idx -= 1
        chain.append((prev_node, cur[0], prev_layer, level_idx))
        cur = (prev_node, prev_layer)
    assert level_idx == 0
    chain.reverse()
    segments = []
    for a, b, lay, li in chain:
        _, parents = floods[li][lay]
        segments.append(Segment(a, b, lay, _witness_from_parents(parents, b)))
    return ClapPath(tuple(segments))


def _clap_error(clap: ClapPath, state: DuplexState) -> str | None:
    """Reason the path is invalid against the current state, or None."""
    segs = clap.segments
    if not segs:
        return "path has no segments"
    d1, d2 = state.d1, state.d2
    for i, seg in enumerate(segs):
        if seg.layer not in (1, 2):
            return f"segment {i} has invalid layer {seg.layer}"
        if i and seg.layer == segs[i - 1].layer:
            return f"segments {i - 1} and {i} do not alternate layers"
        if i and seg.from_node != segs[i - 1].to_node:
            return f"segment {i} does not continue from segment {i - 1}"
    seq = clap.node_sequence()
    if len(set(seq)) != len(seq):
        return "node sequence is not all-distinct"
    start, end = seq[0], seq[-1]
    if not (start in d1 and start not in d2):
        return "start node is not driven only in layer 1"
    if not (end in d2 and end not in d1):
        return "end node is not driven only in layer 2"
    for i in range(len(segs) - 1):
        relay = segs[i].to_node
        if segs[i].layer == 1:
            if relay in d1 or relay in d2:
                return f"relay {relay} after a layer-1 segment is not matched in both layers"
        else:
            if relay not in d1 or relay not in d2:
                return f"relay {relay} after a layer-2 segment is not driven in both layers"
    for i, seg in enumerate(segs):
        if seg.layer == 1:
            if seg.from_node not in d1 or seg.to_node in d1:
                return f"segment {i} violates layer-1 polarity"
        else:
            if seg.from_node in d2 or seg.to_node not in d2:
                return f"segment {i} violates layer-2 polarity"
        err = _witness_error(seg, state)
        if err:
            return f"segment {i}: {err}"
    for layer in (1, 2):
        used: set[tuple[int, int]] = set()
        total = 0
        for seg in segs:
            if seg.layer == layer:
                used.update(seg.witness)
                total += len(seg.witness)
        if len(used) != total:
            return f"layer-{layer} witnesses share an edge"
    return None


def _witness_error(seg: Segment, state: DuplexState) -> str | None:
    layer = state.net.layer1 if seg.layer == 1 else state.net.layer2
    m = state.m1 if seg.layer == 1 else state.m2
    w = seg.witness
    if not w or len(w) % 2:
        return "witness must be a nonempty even-length alternating path"
    for u, v in w:
        if (u, v) not in layer.edge_set:
            return f"witness edge ({u}, {v}) is not a layer edge"
    if w[0][1] != seg.from_node or w[-1][1] != seg.to_node:
        return "witness endpoints do not match segment endpoints"
    for i in range(0, len(w), 2):
        if w[i][0] != w[i + 1][0]:
            return "witness edges do not pair up at out-copies"
    for i in range(1, len(w) - 1, 2):
        if w[i][1] != w[i + 1][1]:
            return "witness edges do not chain at in-copies"
    minus_seq = [w[0][1]] + [w[i][1] for i in range(1, len(w), 2)]
    plus_seq = [w[i][0] for i in range(0, len(w), 2)]
    if len(set(minus_seq)) != len(minus_seq) or len(set(plus_seq)) != len(plus_seq):
        return "witness path is not simple"
    mm = m.mate_of_minus
    start_in_matching = mm[seg.from_node] != UNMATCHED
    expected = start_in_matching
    for u, v in w:
        if (mm[v] == u) != expected:
            return "witness does not alternate with the current matching"
        expected = not expected
    end_in_matching = not expected
    if end_in_matching != (mm[seg.to_node] != UNMATCHED):
        return "witness endpoint parity is wrong"
    return None


def verify_clap(clap: ClapPath, state: DuplexState) -> bool:
    """True iff the path satisfies every invariant against ``state``."""
    return _clap_error(clap, state) is None


def apply_clap(state: DuplexState, clap: ClapPath) -> ApplyReport:
    """Apply a feasible path: batch symmetric difference plus driver updates.

    Rejects stale or infeasible paths atomically (the state is validated
    before any mutation).  On success the difference mass drops by exactly 2,
    the union size by exactly 1, and both budgets are unchanged.
    """
    err = _clap_error(clap, state)
    if err is not None:
        raise ValueError(f"cannot apply path: {err}")
    delta_before = state.difference_mass()
    union_before = state.union_size()
    for seg in clap.segments:
        m = state.m1 if seg.layer == 1 else state.m2
        mp, mm = m.mate_of_plus, m.mate_of_minus
        statuses = [(u, v, mm[v] == u) for u, v in seg.witness]
        removed = 0
        for u, v, in_matching in statuses:
            if in_matching:
                mp[u] = UNMATCHED
                mm[v] = UNMATCHED
                removed += 1
        added = 0
        for u, v, in_matching in statuses:
            if not in_matching:
                mp[u] = v
                mm[v] = u
                added += 1
        assert removed == added
        if seg.layer == 1:
            state.d1.remove(seg.from_node)
            state.d1.add(seg.to_node)
        else:
            state.d2.remove(seg.to_node)
            state.d2.add(seg.from_node)
    delta_after = state.difference_mass()
    union_after = state.union_size()
    assert delta_after == delta_before - 2
    assert union_after == union_before - 1
    assert len(state.d1) == state.k1 and len(state.d2) == state.k2
    return ApplyReport(delta_before, delta_after, union_before, union_after)


def clap_s(
    state: DuplexState,
    max_iterations: int | None = None,
    time_limit: float | None = None,
    debug: bool = False,
) -> RunLog:
    """Iterate shortest-path search and application to a stable fixed point.

    Terminates after at most ``initial difference mass / 2`` iterations; on
    normal exit the state admits no cross-layer augmenting path, certifying
    that its union size is minimal over all matching pairs with the same
    budgets.  ``max_iterations`` truncates the loop (the certificate flag
    stays False), ``time_limit`` aborts with ``timed_out`` set, and ``debug``
    revalidates the full state after every application.
    """
    t0 = time.perf_counter()
    delta0 = state.difference_mass()
    u0 = state.union_size()
    records: list[IterationRecord] = []
    stable = False
    timed_out = False
    while True:
        if max_iterations is not None and len(records) >= max_iterations:
            break
        if time_limit is not None and time.perf_counter() - t0 > time_limit:
            timed_out = True
            break
        it0 = time.perf_counter()
        clap = find_shortest_clap(state)
        if clap is None:
            stable = True
            break
        report = apply_clap(state, clap)
        if debug:
            state.check(deep=True)
        records.append(
            IterationRecord(
                length=clap.length,
                delta_before=report.delta_before,
                delta_after=report.delta_after,
                union_before=report.union_before,
                union_after=report.union_after,
                elapsed=time.perf_counter() - it0,
            )
        )
    assert len(records) <= delta0 // 2
    mean_len = sum(r.length for r in records) / len(records) if records else 0.0
    return RunLog(
        iterations=records,
        clap_stable=stable,
        mean_clap_length=mean_len,
        initial_union=u0,
        final_union=state.union_size(),
        initial_delta=delta0,
        final_delta=state.difference_mass(),
        elapsed=time.perf_counter() - t0,
        timed_out=timed_out,
    )
