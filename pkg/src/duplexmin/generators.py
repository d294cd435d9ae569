"""Seeded synthetic duplex generation: ER, BA, and overlap-controlled layers.

All generators are pure functions of their parameters including the seed and
use only the stdlib RNG, so outputs are reproducible byte-for-byte across
runs and library versions.  The mean-degree convention is total degree,
``<k> = 2|E| / n``, which makes the two models directly comparable.
Generated layers contain no self-loops (ingested datasets may).
"""

from __future__ import annotations

import random
from dataclasses import dataclass

from .graphs import DirectedLayer
from .state import DuplexNetwork

MODELS = ("ER", "BA")
PAIRINGS = ("ER-ER", "BA-BA", "ER-BA")


@dataclass(frozen=True)
class GenSpec:
    """One synthetic duplex: a model pairing, size, density, and overlap.

    ``model`` is one of ``ER-ER``, ``BA-BA``, ``ER-BA``; ``overlap`` of None
    generates the layers independently, otherwise layer 2 is rebuilt from
    layer 1 at the requested edge-set Jaccard similarity.
    """

    model: str
    n: int
    avg_degree: float
    overlap: float | None = None
    seed: int = 0

    def __post_init__(self) -> None:
        if self.model not in PAIRINGS:
            raise ValueError(f"model must be one of {PAIRINGS}, got {self.model!r}")
        if self.n < 1:
            raise ValueError("n must be at least 1")
        if self.avg_degree < 0:
            raise ValueError("avg_degree must be non-negative")
        if self.overlap is not None and not 0.0 <= self.overlap <= 1.0:
            raise ValueError("overlap must lie in [0, 1]")


def _decode_pair(index: int, n: int) -> tuple[int, int]:
    # Ordered pairs (u, v), u != v, enumerated without the diagonal.
    u, r = divmod(index, n - 1)
    return u, r if r < u else r + 1


def gen_er(n: int, avg_degree: float, seed: int | None) -> DirectedLayer:
    """Uniform directed graph with ``round(n * avg_degree / 2)`` edges.

    Edges are drawn without replacement from all ordered pairs ``u != v``.
    """
    if n < 1:
        raise ValueError("n must be at least 1")
    if avg_degree > n - 1:
        raise ValueError(f"avg_degree {avg_degree} infeasible for n={n}")
    m = round(n * avg_degree / 2)
    if n == 1 or m == 0:
        return DirectedLayer(n, [])
    rng = random.Random(seed)
    indices = rng.sample(range(n * (n - 1)), m)
    return DirectedLayer(n, [_decode_pair(i, n) for i in indices])


def _preferential_targets(rng: random.Random, repeated: list[int], m: int) -> set[int]:
    targets: set[int] = set()
    while len(targets) < m:
        targets.add(rng.choice(repeated))
    return targets


def gen_ba(n: int, avg_degree: float, seed: int | None) -> DirectedLayer:
    """Preferential-attachment graph with random edge directions.

    Grows an undirected scale-free graph where each new node attaches
    ``round(avg_degree / 2)`` edges to existing nodes with probability
    proportional to degree, then orients every edge uniformly at random.
    The edge count is exactly ``(n - m_attach) * m_attach``.
    """
    m_attach = round(avg_degree / 2)
    if m_attach < 1:
        raise ValueError(
            f"avg_degree {avg_degree} gives no attachment edges (needs >= 1)"
        )
    if n <= m_attach:
        raise ValueError(f"n must exceed the attachment count {m_attach}")
    rng = random.Random(seed)
    undirected: list[tuple[int, int]] = []
    repeated: list[int] = []
    targets: set[int] = set(range(m_attach))
    source = m_attach
    while source < n:
        undirected.extend((source, t) for t in sorted(targets))
        repeated.extend(sorted(targets))
        repeated.extend([source] * m_attach)
        source += 1
        if source < n:
            targets = _preferential_targets(rng, repeated, m_attach)
    edges = [(a, b) if rng.random() < 0.5 else (b, a) for a, b in undirected]
    return DirectedLayer(n, edges)


def jaccard(a: frozenset, b: frozenset) -> float:
    """Edge-set similarity; two empty sets count as identical."""
    union = len(a | b)
    return len(a & b) / union if union else 1.0


def _model_edge_pool(model: str, n: int, avg_degree: float, rng: random.Random):
    """Stream of candidate edges drawn from the model's own distribution."""
    if model == "ER":
        while True:
            yield _decode_pair(rng.randrange(n * (n - 1)), n)
    elif model == "BA":
        while True:
            layer = gen_ba(n, avg_degree, rng.randrange(2**63))
            shuffled = list(layer.edges)
            rng.shuffle(shuffled)
            yield from shuffled
    else:
        raise ValueError(f"model must be one of {MODELS}, got {model!r}")


def gen_overlapped_layer(
    base: DirectedLayer, rho: float, model: str, seed: int | None
) -> tuple[DirectedLayer, float]:
    """Second layer at a target Jaccard similarity with ``base``.

    Keeps exactly the number of base edges that realizes the target
    (``round(2 m rho / (1 + rho))`` of ``m``) and fills the rest from the
    model's edge distribution, rejecting base edges, so the achieved
    similarity differs from the request only by integer rounding.  When the
    fill pool cannot supply enough distinct edges the closest achievable
    layer is returned; callers should check the reported similarity.
    """
    if not 0.0 <= rho <= 1.0:
        raise ValueError("rho must lie in [0, 1]")
    n = base.n
    m = base.num_edges
    if m == 0:
        return DirectedLayer(n, []), jaccard(base.edge_set, frozenset())
    rng = random.Random(seed)
    keep_count = round(2 * m * rho / (1 + rho))
    edges = set(rng.sample(base.edges, keep_count))
    avg_degree = 2.0 * m / n
    budget = 50 * m + 1000
    pool = _model_edge_pool(model, n, avg_degree, rng)
    while len(edges) < m and budget:
        budget -= 1
        candidate = next(pool)
        if candidate not in base.edge_set and candidate not in edges:
            edges.add(candidate)
    if len(edges) < m:
        # Dense corner: fall back to a uniform scan for the missing edges.
        for index in range(n * (n - 1)):
            candidate = _decode_pair(index, n)
            if candidate not in base.edge_set and candidate not in edges:
                edges.add(candidate)
                if len(edges) == m:
                    break
    layer = DirectedLayer(n, sorted(edges))
    return layer, jaccard(base.edge_set, layer.edge_set)


def make_duplex(spec: GenSpec) -> tuple[DuplexNetwork, dict]:
    """Generate the duplex a spec describes, with a provenance report.

    The report carries the spec echo, realized edge counts and mean degrees,
    and the achieved overlap when one was requested.
    """
    model_a, model_b = spec.model.split("-")
    rng = random.Random(f"{spec.seed}|duplex")
    seed_a = rng.randrange(2**63)
    seed_b = rng.randrange(2**63)
    gen = {"ER": gen_er, "BA": gen_ba}
    layer1 = gen[model_a](spec.n, spec.avg_degree, seed_a)
    achieved: float | None = None
    if spec.overlap is None:
        layer2 = gen[model_b](spec.n, spec.avg_degree, seed_b)
    else:
        layer2, achieved = gen_overlapped_layer(layer1, spec.overlap, model_b, seed_b)
    net = DuplexNetwork.from_layers(layer1, layer2)
    report = {
        "model": spec.model,
        "n": spec.n,
        "avg_degree": spec.avg_degree,
        "overlap": spec.overlap,
        "seed": spec.seed,
        "edges1": layer1.num_edges,
        "edges2": layer2.num_edges,
        "realized_avg_degree1": layer1.average_degree(),
        "realized_avg_degree2": layer2.average_degree(),
        "achieved_overlap": achieved,
        "fingerprint": net.fingerprint(),
    }
    return net, report
