"""Joint state of a two-layer network: matchings, drivers, node partition.

The quantity being minimized is the size of the union of the two layers'
driver sets.  With per-layer driver budgets ``k1, k2`` fixed, the union size
obeys ``|U| = (k1 + k2 + delta) / 2`` where ``delta`` is the difference mass
``|D1 \\ D2| + |D2 \\ D1|``; shrinking the union is the same as shrinking the
disagreement between the layers.
"""

from __future__ import annotations

import hashlib
import random
from dataclasses import dataclass

from .graphs import (
    UNMATCHED,
    BipartiteRep,
    DirectedLayer,
    Matching,
    build_bipartite,
    driver_set,
    max_matching,
)


@dataclass
class DuplexNetwork:
    """Two directed layers over a common node set, plus bipartite caches."""

    n: int
    layer1: DirectedLayer
    layer2: DirectedLayer
    bip1: BipartiteRep
    bip2: BipartiteRep
    labels: list[str] | None = None

    @classmethod
    def from_layers(
        cls,
        layer1: DirectedLayer,
        layer2: DirectedLayer,
        labels: list[str] | None = None,
    ) -> "DuplexNetwork":
        if layer1.n != layer2.n:
            raise ValueError(
                f"layers must share a node count, got {layer1.n} and {layer2.n}"
            )
        return cls(
            n=layer1.n,
            layer1=layer1,
            layer2=layer2,
            bip1=build_bipartite(layer1),
            bip2=build_bipartite(layer2),
            labels=labels,
        )

    def fingerprint(self) -> str:
        """Stable digest of the node count and both edge lists."""
        h = hashlib.sha1()
        h.update(str(self.n).encode())
        for layer in (self.layer1, self.layer2):
            h.update(b"|")
            for u, v in layer.edges:
                h.update(f"{u},{v};".encode())
        return h.hexdigest()[:16]


@dataclass(frozen=True)
class PartitionSnapshot:
    """The four-way node classification induced by a pair of driver sets.

    ``cds`` is driven in both layers, ``cms`` matched in both, ``dd1``/``dd2``
    driven only in layer 1 / only in layer 2.  The four sets partition the
    node set.
    """

    cds: frozenset[int]
    cms: frozenset[int]
    dd1: frozenset[int]
    dd2: frozenset[int]


class DuplexState:
    """Mutable pair of matchings with cached driver sets and fixed budgets.

    The budgets ``k1, k2`` are set once at construction and never change;
    every operation that rewires a matching preserves its size.  Driver sets
    are maintained incrementally by the engine; ``check()`` recomputes them
    from scratch and raises on any divergence.
    """

    __slots__ = ("net", "m1", "m2", "d1", "d2", "k1", "k2")

    def __init__(self, net: DuplexNetwork, m1: Matching, m2: Matching) -> None:
        self.net = net
        self.m1 = m1
        self.m2 = m2
        self.d1 = driver_set(m1, net.n)
        self.d2 = driver_set(m2, net.n)
        self.k1 = len(self.d1)
        self.k2 = len(self.d2)

    def partition(self) -> PartitionSnapshot:
        d1, d2 = self.d1, self.d2
        cds = d1 & d2
        dd1 = d1 - d2
        dd2 = d2 - d1
        cms = frozenset(range(self.net.n)) - d1 - d2
        return PartitionSnapshot(frozenset(cds), cms, frozenset(dd1), frozenset(dd2))

    def difference_mass(self) -> int:
        """``|D1 \\ D2| + |D2 \\ D1|``; same parity as ``k1 + k2``."""
        return len(self.d1 - self.d2) + len(self.d2 - self.d1)

    def union_size(self) -> int:
        u = len(self.d1 | self.d2)
        assert 2 * u - self.difference_mass() == self.k1 + self.k2
        return u

    def state_hash(self) -> str:
        """Digest of the full mutable state, for atomicity checks."""
        h = hashlib.sha1()
        for m in (self.m1, self.m2):
            h.update(bytes(str(m.mate_of_plus), "ascii"))
            h.update(bytes(str(m.mate_of_minus), "ascii"))
        return h.hexdigest()

    def copy(self) -> "DuplexState":
        return DuplexState(self.net, self.m1.copy(), self.m2.copy())

    def check(self, deep: bool = False) -> None:
        """Recompute caches and assert every state invariant."""
        n = self.net.n
        if driver_set(self.m1, n) != self.d1 or driver_set(self.m2, n) != self.d2:
            raise AssertionError("cached driver sets diverge from matchings")
        if len(self.d1) != self.k1 or len(self.d2) != self.k2:
            raise AssertionError("driver budgets violated")
        if self.m1.size != n - self.k1 or self.m2.size != n - self.k2:
            raise AssertionError("matching sizes inconsistent with budgets")
        snap = self.partition()
        parts = (snap.cds, snap.cms, snap.dd1, snap.dd2)
        if sum(len(p) for p in parts) != n or set().union(*parts) != set(range(n)):
            raise AssertionError("partition does not cover the node set")
        if deep:
            self.m1.validate(self.net.bip1)
            self.m2.validate(self.net.bip2)

    def __repr__(self) -> str:
        return (
            f"DuplexState(n={self.net.n}, k1={self.k1}, k2={self.k2}, "
            f"union={len(self.d1 | self.d2)})"
        )


def init_state(net: DuplexNetwork, seed: int | None = None) -> DuplexState:
    """Initial state: a maximum matching per layer, budgets at the minimum.

    ``seed=None`` gives the deterministic matching for each layer; otherwise
    two child seeds are derived so the layers get independent shuffles.
    """
    if seed is None:
        s1 = s2 = None
    else:
        rng = random.Random(seed)
        s1 = rng.randrange(2**63)
        s2 = rng.randrange(2**63)
    m1 = max_matching(net.bip1, s1)
    m2 = max_matching(net.bip2, s2)
    return DuplexState(net, m1, m2)
