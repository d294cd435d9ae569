"""Minimum-union driver sets for two-layer directed networks.

The library finds, for a duplex network with fixed per-layer driver budgets,
a pair of maximum matchings whose driver sets overlap as much as possible.
The main algorithm iterates shortest cross-layer augmenting paths and halts
with a machine-checkable optimality certificate; baselines, generators, an
exact enumeration oracle, and an independent meta-graph verifier round out
the workbench.
"""

from .graphs import (
    UNMATCHED,
    BipartiteRep,
    DirectedLayer,
    Matching,
    build_bipartite,
    driver_set,
    max_matching,
)
from .state import DuplexNetwork, DuplexState, PartitionSnapshot, init_state
from .engine import (
    ClapPath,
    RunLog,
    Segment,
    alt_path,
    alt_reach,
    apply_clap,
    clap_s,
    find_shortest_clap,
    verify_clap,
)

__version__ = "0.1.0"

__all__ = [
    "UNMATCHED",
    "BipartiteRep",
    "DirectedLayer",
    "Matching",
    "build_bipartite",
    "driver_set",
    "max_matching",
    "DuplexNetwork",
    "DuplexState",
    "PartitionSnapshot",
    "init_state",
    "ClapPath",
    "RunLog",
    "Segment",
    "alt_path",
    "alt_reach",
    "apply_clap",
    "clap_s",
    "find_shortest_clap",
    "verify_clap",
]
