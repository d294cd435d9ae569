"""Directed-graph storage, bipartite representation, maximum matching, drivers.

A directed graph on nodes ``0..n-1`` is controlled through its bipartite
representation: every node ``v`` is split into an out-copy ``v+`` and an
in-copy ``v-``, and a directed edge ``(u, v)`` becomes the bipartite edge
``(u+, v-)``.  The driver set of a matching is the set of nodes whose in-copy
is unmatched; its size is always ``n - |matching|``.
"""

from __future__ import annotations

import random
from collections import deque

UNMATCHED = -1


class DirectedLayer:
    """One directed layer of a duplex network.

    Edges are stored deduplicated and sorted by ``(source, target)`` so that
    equal layers compare equal and downstream traversals are deterministic.
    Self-loops are allowed; duplicate edges in the input are collapsed and
    counted in ``duplicates_collapsed``.
    """

    __slots__ = ("n", "edges", "out_adj", "in_adj", "edge_set", "duplicates_collapsed")

    def __init__(self, n: int, edges) -> None:
        if n < 0:
            raise ValueError(f"node count must be non-negative, got {n}")
        seen: set[tuple[int, int]] = set()
        duplicates = 0
        for u, v in edges:
            if not (0 <= u < n and 0 <= v < n):
                raise ValueError(f"edge ({u}, {v}) out of range for n={n}")
            if (u, v) in seen:
                duplicates += 1
            else:
                seen.add((u, v))
        self.n = n
        self.edges: list[tuple[int, int]] = sorted(seen)
        self.edge_set: frozenset[tuple[int, int]] = frozenset(seen)
        self.duplicates_collapsed = duplicates
        out_adj: list[list[int]] = [[] for _ in range(n)]
        in_adj: list[list[int]] = [[] for _ in range(n)]
        for u, v in self.edges:
            out_adj[u].append(v)
            in_adj[v].append(u)
        self.out_adj = out_adj
        self.in_adj = in_adj

    @property
    def num_edges(self) -> int:
        return len(self.edges)

    def average_degree(self) -> float:
        """Mean total degree, ``2|E|/n`` (in-degree plus out-degree)."""
        return 2.0 * len(self.edges) / self.n if self.n else 0.0

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, DirectedLayer)
            and self.n == other.n
            and self.edges == other.edges
        )

    def __repr__(self) -> str:
        return f"DirectedLayer(n={self.n}, edges={len(self.edges)})"


class BipartiteRep:
    """Bipartite representation of a directed layer.

    ``plus_adj[u]`` lists the in-copies reachable from ``u+`` (the targets of
    ``u`` in the layer); ``minus_adj[v]`` lists the out-copies adjacent to
    ``v-`` (the sources pointing at ``v``).  Both are sorted.
    """

    __slots__ = ("n", "edges", "plus_adj", "minus_adj")

    def __init__(self, n: int, edges: list[tuple[int, int]]) -> None:
        self.n = n
        self.edges = edges
        plus_adj: list[list[int]] = [[] for _ in range(n)]
        minus_adj: list[list[int]] = [[] for _ in range(n)]
        for u, v in edges:
            plus_adj[u].append(v)
            minus_adj[v].append(u)
        self.plus_adj = plus_adj
        self.minus_adj = minus_adj

    def __repr__(self) -> str:
        return f"BipartiteRep(n={self.n}, edges={len(self.edges)})"


def build_bipartite(layer: DirectedLayer) -> BipartiteRep:
    """Map a directed layer to its bipartite representation.

    One bipartite edge ``(u+, v-)`` per directed edge ``(u, v)``, in sorted
    edge order.
    """
    return BipartiteRep(layer.n, list(layer.edges))


class Matching:
    """A matching of a bipartite representation, stored as two mate arrays.

    ``mate_of_plus[u]`` is the in-copy matched to ``u+`` and
    ``mate_of_minus[v]`` the out-copy matched to ``v-``; ``UNMATCHED`` (-1)
    marks free vertices.  The arrays are mutually inverse partial bijections.
    """

    __slots__ = ("mate_of_plus", "mate_of_minus", "size")

    def __init__(self, mate_of_plus: list[int], mate_of_minus: list[int]) -> None:
        self.mate_of_plus = mate_of_plus
        self.mate_of_minus = mate_of_minus
        self.size = sum(1 for v in mate_of_minus if v != UNMATCHED)

    @classmethod
    def empty(cls, n: int) -> "Matching":
        return cls([UNMATCHED] * n, [UNMATCHED] * n)

    @classmethod
    def from_pairs(cls, n: int, pairs) -> "Matching":
        """Build a matching from ``(u_plus, v_minus)`` pairs."""
        mp = [UNMATCHED] * n
        mm = [UNMATCHED] * n
        for u, v in pairs:
            if mp[u] != UNMATCHED or mm[v] != UNMATCHED:
                raise ValueError(f"pair ({u}, {v}) conflicts with an earlier pair")
            mp[u] = v
            mm[v] = u
        return cls(mp, mm)

    def pairs(self) -> list[tuple[int, int]]:
        return [(u, v) for u, v in enumerate(self.mate_of_plus) if v != UNMATCHED]

    def copy(self) -> "Matching":
        return Matching(list(self.mate_of_plus), list(self.mate_of_minus))

    def validate(self, bip: BipartiteRep) -> None:
        """Raise if the mate arrays are inconsistent or use non-edges."""
        n = bip.n
        if len(self.mate_of_plus) != n or len(self.mate_of_minus) != n:
            raise ValueError("mate array length does not match node count")
        edge_set = set(bip.edges)
        count = 0
        for u, v in enumerate(self.mate_of_plus):
            if v == UNMATCHED:
                continue
            if self.mate_of_minus[v] != u:
                raise ValueError(f"mate arrays disagree at pair ({u}, {v})")
            if (u, v) not in edge_set:
                raise ValueError(f"matched pair ({u}, {v}) is not an edge")
            count += 1
        for v, u in enumerate(self.mate_of_minus):
            if u != UNMATCHED and self.mate_of_plus[u] != v:
                raise ValueError(f"mate arrays disagree at pair ({u}, {v})")
        if count != self.size:
            raise ValueError("stored size is stale")

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, Matching)
            and self.mate_of_plus == other.mate_of_plus
            and self.mate_of_minus == other.mate_of_minus
        )

    def __repr__(self) -> str:
        return f"Matching(size={self.size})"


def max_matching(bip: BipartiteRep, seed: int | None = None) -> Matching:
    """Maximum matching of a bipartite representation via Hopcroft-Karp.

    With ``seed=None`` the adjacency is scanned in sorted order and the result
    is deterministic.  With a seed, adjacency lists and the free-vertex scan
    order are shuffled, so repeated calls with different seeds can return
    different maximum matchings of the same (maximum) size.
    """
    n = bip.n
    if seed is None:
        adj = bip.plus_adj
        order = range(n)
    else:
        rng = random.Random(seed)
        adj = [list(row) for row in bip.plus_adj]
        for row in adj:
            rng.shuffle(row)
        order = list(range(n))
        rng.shuffle(order)

    INF = n + 1
    mate_plus = [UNMATCHED] * n
    mate_minus = [UNMATCHED] * n
    dist = [INF] * n

    def bfs() -> bool:
        queue = deque()
        for u in order:
            if mate_plus[u] == UNMATCHED:
                dist[u] = 0
                queue.append(u)
            else:
                dist[u] = INF
        found = False
        while queue:
            u = queue.popleft()
            du = dist[u] + 1
            for v in adj[u]:
                w = mate_minus[v]
                if w == UNMATCHED:
                    found = True
                elif dist[w] == INF:
                    dist[w] = du
                    queue.append(w)
        return found

    def dfs(root: int) -> bool:
        # Iterative DFS along the layered graph; recursion would overflow on
        # long augmenting paths.
        stack = [(root, iter(adj[root]))]
        path = []
        while stack:
            u, it = stack[-1]
            advanced = False
            for v in it:
                w = mate_minus[v]
                if w == UNMATCHED:
                    path.append((u, v))
                    for uu, vv in path:
                        mate_plus[uu] = vv
                        mate_minus[vv] = uu
                    return True
                if dist[w] == dist[u] + 1:
                    path.append((u, v))
                    stack.append((w, iter(adj[w])))
                    advanced = True
                    break
            if not advanced:
                dist[u] = INF
                stack.pop()
                if path:
                    path.pop()
        return False

    while bfs():
        for u in order:
            if mate_plus[u] == UNMATCHED:
                dfs(u)

    return Matching(mate_plus, mate_minus)


def driver_set(matching: Matching, n: int) -> set[int]:
    """Nodes whose in-copy is unmatched; exactly ``n - matching.size`` many."""
    members = {v for v in range(n) if matching.mate_of_minus[v] == UNMATCHED}
    assert len(members) + matching.size == n
    return members


def has_augmenting_path(bip: BipartiteRep, matching: Matching) -> bool:
    """Check Berge's criterion: an alternating path between two free vertices.

    Returns True iff the matching is not maximum.
    """
    n = bip.n
    seen_plus = [False] * n
    queue = deque()
    for u in range(n):
        if matching.mate_of_plus[u] == UNMATCHED:
            seen_plus[u] = True
            queue.append(u)
    while queue:
        u = queue.popleft()
        for v in bip.plus_adj[u]:
            w = matching.mate_of_minus[v]
            if w == UNMATCHED:
                return True
            if not seen_plus[w]:
                seen_plus[w] = True
                queue.append(w)
    return False
