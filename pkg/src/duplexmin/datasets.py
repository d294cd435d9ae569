"""Multiplex edge-list ingestion, harmonization, and canonical emission.

Wire format: one edge per line, whitespace-separated
``layer_id source_label target_label [weight]``.  Weights are parsed and
discarded, ``#`` starts a comment, labels are opaque strings mapped to dense
integer ids in first-seen order.  A duplex is built from two selected layers
over the union of their node sets; a node absent from one layer is isolated
there and so is a driver of that layer in every feasible state.

Canonical files written by this module carry a ``# nodes: N`` directive that
pre-registers integer labels ``0..N-1`` and a ``# layers: ...`` directive
that declares the layer ids; these keep fully isolated nodes, empty layers,
and the id order intact across a write/read round trip.  The directives
never occur in external datasets, which parse exactly as plain comments
elsewhere.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from pathlib import Path

from .graphs import DirectedLayer
from .state import DuplexNetwork

_NODES_DIRECTIVE = re.compile(r"#\s*nodes:\s*(\d+)\s*$")
_LAYERS_DIRECTIVE = re.compile(r"#\s*layers:\s*(.+?)\s*$")


@dataclass
class MultiplexDataset:
    """Parsed multiplex file: a label map plus per-layer edge lists."""

    labels: list[str] = field(default_factory=list)
    label_to_id: dict[str, int] = field(default_factory=dict)
    layer_edges: dict[str, list[tuple[int, int]]] = field(default_factory=dict)
    duplicates_collapsed: int = 0

    @property
    def n(self) -> int:
        return len(self.labels)

    def layer_ids(self) -> list[str]:
        return sorted(self.layer_edges)


def parse_multiplex(
    path: str | Path, keep_layers: tuple[str, ...] | None = None
) -> MultiplexDataset:
    """Parse a multiplex edge list, optionally restricted to some layers.

    Malformed lines are reported with their line number.  When
    ``keep_layers`` is given, only those layers contribute nodes and edges,
    matching the harmonization rule that the node set is the union over the
    selected layers only.
    """
    ds = MultiplexDataset()

    def node_id(label: str) -> int:
        got = ds.label_to_id.get(label)
        if got is None:
            got = len(ds.labels)
            ds.label_to_id[label] = got
            ds.labels.append(label)
        return got

    with open(path, encoding="utf-8") as handle:
        for lineno, raw in enumerate(handle, start=1):
            stripped = raw.strip()
            if stripped.startswith("#"):
                directive = _NODES_DIRECTIVE.match(stripped)
                if directive:
                    for i in range(int(directive.group(1))):
                        node_id(str(i))
                    continue
                directive = _LAYERS_DIRECTIVE.match(stripped)
                if directive:
                    for layer_id in directive.group(1).split():
                        if keep_layers is None or layer_id in keep_layers:
                            ds.layer_edges.setdefault(layer_id, [])
                continue
            if not stripped:
                continue
            parts = stripped.split()
            if len(parts) not in (3, 4):
                raise ValueError(
                    f"{path}:{lineno}: expected 'layer source target [weight]', "
                    f"got {len(parts)} fields"
                )
            layer_id, src, dst = parts[0], parts[1], parts[2]
            if len(parts) == 4:
                try:
                    float(parts[3])
                except ValueError as exc:
                    raise ValueError(
                        f"{path}:{lineno}: weight {parts[3]!r} is not a number"
                    ) from exc
            if keep_layers is not None and layer_id not in keep_layers:
                continue
            edge = (node_id(src), node_id(dst))
            ds.layer_edges.setdefault(layer_id, []).append(edge)
    return ds


def ingest_multiplex(
    path: str | Path, layer_a: str, layer_b: str
) -> DuplexNetwork:
    """Build a duplex from two layers of a multiplex file.

    The node set is the union of nodes appearing in either selected layer;
    duplicate edges are collapsed by layer construction.
    """
    if layer_a == layer_b:
        raise ValueError("the two selected layers must differ")
    ds = parse_multiplex(path, keep_layers=(layer_a, layer_b))
    for layer_id in (layer_a, layer_b):
        if layer_id not in ds.layer_edges:
            raise ValueError(
                f"layer {layer_id!r} not found in {path} "
                f"(layers present: {ds.layer_ids() or 'none'})"
            )
    if ds.n == 0:
        raise ValueError(f"selection from {path} contains no nodes")
    layer1 = DirectedLayer(ds.n, ds.layer_edges[layer_a])
    layer2 = DirectedLayer(ds.n, ds.layer_edges[layer_b])
    return DuplexNetwork.from_layers(layer1, layer2, labels=list(ds.labels))


def write_duplex(net: DuplexNetwork, path: str | Path) -> Path:
    """Emit the canonical two-layer form; re-ingesting reproduces the duplex."""
    path = Path(path)
    lines = [f"# nodes: {net.n}", "# layers: 1 2"]
    for layer_id, layer in (("1", net.layer1), ("2", net.layer2)):
        lines.extend(f"{layer_id} {u} {v}" for u, v in layer.edges)
    path.write_text("\n".join(lines) + "\n", encoding="utf-8")
    return path


def load_duplex(path: str | Path) -> DuplexNetwork:
    """Read a canonical duplex file (layers ``1`` and ``2``)."""
    return ingest_multiplex(path, "1", "2")
