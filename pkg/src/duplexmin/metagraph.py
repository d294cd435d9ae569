"""Independent optimality verifier built on symmetric-difference structure.

Comparing the current matchings against any other pair of equal sizes, the
per-layer symmetric differences decompose into alternating paths and even
cycles.  Path components whose endpoints are in-copies move drivers; recording
one labeled edge per such component yields a multigraph over nodes whose
components are simple paths or cycles with alternating layer labels.  Summing
endpoint effects component-wise accounts exactly for the difference-mass gap
between the two states, and any strictly better comparator exposes a
component that translates into an improving cross-layer augmenting path.

This is a test-time oracle: it is only tractable where the comparator states
can be enumerated, and it never participates in the production search path.
"""

from __future__ import annotations

from dataclasses import dataclass

from .engine import ClapPath, Segment
from .graphs import UNMATCHED, Matching
from .state import DuplexState


@dataclass(frozen=True)
class SymDiffComponent:
    """One connected component of a layer's matching symmetric difference.

    ``vertices`` walks the component over bipartite copies, tagged ``("m", v)``
    for in-copies and ``("p", u)`` for out-copies.  Path components of two
    equal-size maximum matchings end either on two in-copies (these move
    drivers) or on two out-copies (these do not); ``vminus_endpoints`` holds
    the 0 or 2 in-copy endpoint node ids.
    """

    layer: int
    kind: str  # "path" | "cycle"
    vertices: tuple[tuple[str, int], ...]
    vminus_endpoints: tuple[int, ...]  # 0 or 2 when both matchings are maximum


@dataclass(frozen=True)
class MetaEdge:
    """A labeled, admissibly oriented edge of the meta-graph.

    ``tail -> head`` is the direction in which the underlying component is an
    admissible segment: for a layer-1 edge the tail is that layer's driver
    endpoint; for a layer-2 edge the head is.
    """

    tail: int
    head: int
    layer: int
    component: SymDiffComponent


@dataclass(frozen=True)
class MetaComponent:
    nodes: frozenset[int]
    edges: tuple[MetaEdge, ...]
    kind: str  # "path" | "cycle"
    endpoints: tuple[int, ...]  # degree-1 nodes, empty for cycles


@dataclass
class MetaGraph:
    nodes: set[int]
    edges: list[MetaEdge]

    def degree(self, v: int) -> int:
        return sum(1 for e in self.edges if v in (e.tail, e.head))

    def components(self) -> list[MetaComponent]:
        adj: dict[int, list[MetaEdge]] = {v: [] for v in self.nodes}
        for e in self.edges:
            adj[e.tail].append(e)
            adj[e.head].append(e)
        seen_edges: set[int] = set()
        seen_nodes: set[int] = set()
        out: list[MetaComponent] = []
        for start in sorted(self.nodes):
            if start in seen_nodes:
                continue
            # Collect the whole component by undirected traversal.
            comp_nodes = {start}
            comp_edges: list[MetaEdge] = []
            stack = [start]
            while stack:
                v = stack.pop()
                for e in adj[v]:
                    if id(e) in seen_edges:
                        continue
                    seen_edges.add(id(e))
                    comp_edges.append(e)
                    for w in (e.tail, e.head):
                        if w not in comp_nodes:
                            comp_nodes.add(w)
                            stack.append(w)
            seen_nodes |= comp_nodes
            degs = {v: 0 for v in comp_nodes}
            for e in comp_edges:
                degs[e.tail] += 1
                degs[e.head] += 1
            ends = tuple(sorted(v for v, d in degs.items() if d == 1))
            kind = "path" if ends else "cycle"
            out.append(
                MetaComponent(frozenset(comp_nodes), tuple(comp_edges), kind, ends)
            )
        return out


@dataclass(frozen=True)
class NodeSignature:
    """Per-layer driver-status change of one node between two states.

    Each delta is -1 (loses the layer's driver role), 0 (unchanged), or +1
    (gains it).
    """

    delta1: int
    delta2: int

    def describe(self) -> str:
        names = {
            (-1, 0): "loses_layer1_driver",
            (0, -1): "loses_layer2_driver",
            (1, 0): "gains_layer1_driver",
            (0, 1): "gains_layer2_driver",
            (1, 1): "matched_to_driven",
            (-1, -1): "driven_to_matched",
            (-1, 1): "difference_side_flip_1_to_2",
            (1, -1): "difference_side_flip_2_to_1",
            (0, 0): "unchanged",
        }
        return names[(self.delta1, self.delta2)]


def node_signature(v: int, state: DuplexState, comparator: DuplexState) -> NodeSignature:
    d1 = int(v in comparator.d1) - int(v in state.d1)
    d2 = int(v in comparator.d2) - int(v in state.d2)
    return NodeSignature(d1, d2)


def sym_diff_components(
    m: Matching, comparator: Matching, layer: int = 0
) -> list[SymDiffComponent]:
    """Decompose ``m XOR comparator`` into alternating paths and even cycles.

    Requires equal sizes.  When both matchings are maximum, every path
    component ends either on two in-copies or on two out-copies (a mixed pair
    of endpoints would chain into an augmenting path for one side), so
    ``vminus_endpoints`` then has 0 or 2 entries; for merely equal-size
    inputs it can have 1.
    """
    if m.size != comparator.size:
        raise ValueError(
            f"matchings differ in size ({m.size} vs {comparator.size})"
        )
    n = len(m.mate_of_minus)
    # Per bipartite vertex, at most one incident edge from each matching.
    m_at_minus = {}
    c_at_minus = {}
    for v in range(n):
        a, b = m.mate_of_minus[v], comparator.mate_of_minus[v]
        if a == b:
            continue  # shared edge or both unmatched: not in the difference
        if a != UNMATCHED:
            m_at_minus[v] = a
        if b != UNMATCHED:
            c_at_minus[v] = b
    m_at_plus = {}
    c_at_plus = {}
    for u in range(n):
        a, b = m.mate_of_plus[u], comparator.mate_of_plus[u]
        if a == b:
            continue
        if a != UNMATCHED:
            m_at_plus[u] = a
        if b != UNMATCHED:
            c_at_plus[u] = b

    def neighbors(vertex):
        side, node = vertex
        out = []
        if side == "m":
            if node in m_at_minus:
                out.append((("p", m_at_minus[node]), "m"))
            if node in c_at_minus:
                out.append((("p", c_at_minus[node]), "c"))
        else:
            if node in m_at_plus:
                out.append((("m", m_at_plus[node]), "m"))
            if node in c_at_plus:
                out.append((("m", c_at_plus[node]), "c"))
        return out

    vertices = (
        [("m", v) for v in sorted(set(m_at_minus) | set(c_at_minus))]
        + [("p", u) for u in sorted(set(m_at_plus) | set(c_at_plus))]
    )
    degree = {vt: len(neighbors(vt)) for vt in vertices}
    visited: set[tuple[str, int]] = set()
    components: list[SymDiffComponent] = []

    def walk(start):
        # Follow the component from `start`, alternating edge tags.
        order = [start]
        visited.add(start)
        prev_tag = None
        cur = start
        while True:
            nxt = None
            for nb, tag in neighbors(cur):
                if tag != prev_tag and nb not in visited:
                    nxt = (nb, tag)
                    break
                if tag != prev_tag and nb == start and len(order) > 2:
                    return order, True  # closed a cycle
            if nxt is None:
                return order, False
            cur, prev_tag = nxt
            visited.add(cur)
            order.append(cur)

    # Paths first: start from degree-1 vertices.
    for vt in vertices:
        if vt in visited or degree[vt] != 1:
            continue
        order, _ = walk(vt)
        ends = (order[0], order[-1])
        vminus = tuple(sorted(node for side, node in ends if side == "m"))
        components.append(
            SymDiffComponent(layer, "path", tuple(order), vminus)
        )
    # Remaining vertices belong to cycles.
    for vt in vertices:
        if vt in visited:
            continue
        order, closed = walk(vt)
        assert closed and len(order) % 2 == 0
        components.append(SymDiffComponent(layer, "cycle", tuple(order), ()))
    return components


def build_meta_graph(state: DuplexState, comparator_state: DuplexState) -> MetaGraph:
    """Labeled meta-graph of the two states, admissibly oriented.

    Rejected unless the states share both budgets.  One edge per
    driver-moving path component; cycle and out-copy-ended components add
    nothing.
    """
    if (state.k1, state.k2) != (comparator_state.k1, comparator_state.k2):
        raise ValueError("comparator state has different driver budgets")
    edges: list[MetaEdge] = []
    nodes: set[int] = set()
    for layer, m, mc, drivers in (
        (1, state.m1, comparator_state.m1, state.d1),
        (2, state.m2, comparator_state.m2, state.d2),
    ):
        for comp in sym_diff_components(m, mc, layer):
            if comp.kind != "path" or not comp.vminus_endpoints:
                continue
            if len(comp.vminus_endpoints) == 1:
                raise AssertionError(
                    "mixed-endpoint component: states do not hold maximum matchings"
                )
            x, y = comp.vminus_endpoints
            x_is_driver = x in drivers
            if x_is_driver == (y in drivers):
                raise AssertionError(
                    "difference path must have exactly one driver endpoint"
                )
            driver_end, other_end = (x, y) if x_is_driver else (y, x)
            if layer == 1:
                tail, head = driver_end, other_end
            else:
                tail, head = other_end, driver_end
            edges.append(MetaEdge(tail, head, layer, comp))
            nodes.add(x)
            nodes.add(y)
    return MetaGraph(nodes, edges)


def component_delta_contributions(
    meta: MetaGraph, state: DuplexState, comparator_state: DuplexState
) -> list[int]:
    """Per-component share of ``delta(state) - delta(comparator)``.

    The share of a component is the summed change, over its nodes, of the
    indicator "driven in exactly one layer".  Components sum to the exact
    difference-mass gap; cycles contribute zero, and a path contributes +2
    exactly when both its endpoints are currently difference drivers.
    """

    def xor_of(v: int, st: DuplexState) -> int:
        return int((v in st.d1) != (v in st.d2))

    out: list[int] = []
    for comp in meta.components():
        out.append(
            sum(xor_of(v, state) - xor_of(v, comparator_state) for v in comp.nodes)
        )
    return out


@dataclass(frozen=True)
class CertificateReport:
    optimal: bool
    delta: int
    best_comparator_delta: int
    comparator_index: int | None = None
    witness: ClapPath | None = None


def _component_witness_path(comp: SymDiffComponent, tail: int) -> tuple[tuple[int, int], ...]:
    """The component's own alternating path as witness edges from ``tail``."""
    order = list(comp.vertices)
    if order[0] != ("m", tail):
        order.reverse()
    assert order[0] == ("m", tail)
    edges = []
    for a, b in zip(order, order[1:]):
        (sa, na), (sb, nb) = a, b
        edges.append((nb, na) if sa == "m" else (na, nb))
    return tuple(edges)


def certify_optimal_or_find_witness(
    state: DuplexState, oracle_states: list[DuplexState]
) -> CertificateReport:
    """Certify minimality against enumerated comparators, or exhibit a path.

    If some comparator has a strictly smaller difference mass, the meta-graph
    against it must contain a positive path component running from a node
    driven only in layer 1 to one driven only in layer 2; that component is
    translated into a concrete improving cross-layer augmenting path whose
    witnesses are the symmetric-difference paths themselves.
    """
    delta = state.difference_mass()
    best = delta
    best_idx: int | None = None
    for idx, comp_state in enumerate(oracle_states):
        d = comp_state.difference_mass()
        if d < best:
            best = d
            best_idx = idx
    if best_idx is None:
        return CertificateReport(optimal=True, delta=delta, best_comparator_delta=best)

    comparator = oracle_states[best_idx]
    meta = build_meta_graph(state, comparator)
    contributions = component_delta_contributions(meta, state, comparator)
    dd1 = state.d1 - state.d2
    dd2 = state.d2 - state.d1
    for comp, share in zip(meta.components(), contributions):
        if share <= 0 or comp.kind != "path":
            continue
        starts = [v for v in comp.endpoints if v in dd1]
        ends = [v for v in comp.endpoints if v in dd2]
        if not starts or not ends:
            raise AssertionError(
                "positive component lacks difference-driver endpoints"
            )
        start = starts[0]
        # Walk the path from `start`, emitting one segment per edge.
        by_node: dict[int, list[MetaEdge]] = {}
        for e in comp.edges:
            by_node.setdefault(e.tail, []).append(e)
            by_node.setdefault(e.head, []).append(e)
        segments: list[Segment] = []
        cur = start
        used: set[int] = set()
        while True:
            nxt_edge = None
            for e in by_node[cur]:
                if id(e) not in used:
                    nxt_edge = e
                    break
            if nxt_edge is None:
                break
            used.add(id(nxt_edge))
            if nxt_edge.tail != cur:
                raise AssertionError("component edge oriented against the walk")
            witness = _component_witness_path(nxt_edge.component, cur)
            segments.append(Segment(cur, nxt_edge.head, nxt_edge.layer, witness))
            cur = nxt_edge.head
            if cur in dd2:
                break
        return CertificateReport(
            optimal=False,
            delta=delta,
            best_comparator_delta=best,
            comparator_index=best_idx,
            witness=ClapPath(tuple(segments)),
        )
    raise AssertionError("smaller comparator without a positive component")
