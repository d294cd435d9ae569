import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).parent))

import pytest

from duplexmin.graphs import DirectedLayer, Matching
from duplexmin.state import DuplexNetwork, DuplexState


def fig_two_duplex() -> DuplexNetwork:
    """Six-node duplex whose union can shrink from 4 drivers to 2.

    Layer 1 lets the drivers move between {1,2}, {1,4}, {2,3}, {3,4};
    layer 2 between {4,5} and {3,4}.  Both budgets are 2, so the minimum
    union is 2, reached at driver sets {3,4} in both layers.
    """
    layer1 = DirectedLayer(6, [(0, 0), (1, 1), (1, 3), (2, 2), (2, 4), (5, 5)])
    layer2 = DirectedLayer(6, [(0, 0), (1, 1), (2, 2), (3, 3), (3, 5)])
    return DuplexNetwork.from_layers(layer1, layer2)


def fig_two_state() -> DuplexState:
    """The unoptimized corner of the six-node duplex: D1={1,2}, D2={4,5}."""
    net = fig_two_duplex()
    m1 = Matching.from_pairs(6, [(0, 0), (1, 3), (2, 4), (5, 5)])
    m2 = Matching.from_pairs(6, [(0, 0), (1, 1), (2, 2), (3, 3)])
    return DuplexState(net, m1, m2)


def three_segment_duplex() -> DuplexNetwork:
    """Duplex whose only improving path needs three segments.

    From driver sets D1={0,2}, D2={2,3} the chain is
    0 -(layer 1)-> 1 -(layer 2)-> 2 -(layer 1)-> 3, with relay 1 matched in
    both layers and relay 2 driven in both.
    """
    layer1 = DirectedLayer(6, [(0, 4), (2, 5), (4, 0), (4, 1), (5, 2), (5, 3)])
    layer2 = DirectedLayer(6, [(1, 1), (1, 2), (3, 0), (4, 4), (5, 5)])
    return DuplexNetwork.from_layers(layer1, layer2)


def three_segment_state() -> DuplexState:
    net = three_segment_duplex()
    m1 = Matching.from_pairs(6, [(0, 4), (2, 5), (4, 1), (5, 3)])
    m2 = Matching.from_pairs(6, [(1, 1), (3, 0), (4, 4), (5, 5)])
    return DuplexState(net, m1, m2)


@pytest.fixture
def six_node_state() -> DuplexState:
    return fig_two_state()
