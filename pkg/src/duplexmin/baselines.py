"""Random-sampling and greedy baselines, plus the exact enumeration oracle.

The oracle realizes the gold-standard minimum by enumerating each layer's
maximum matchings outright and taking the best pairwise driver-set union, so
it is bit-exact and dependency-free but only viable at desk scale; the caps
make it refuse loudly rather than run forever.
"""

from __future__ import annotations

import random
import time
from dataclasses import dataclass
from typing import Iterator

from .engine import ClapPath, Segment, _witness_from_parents, alt_reach, apply_clap
from .graphs import UNMATCHED, BipartiteRep, Matching, max_matching
from .state import DuplexNetwork, DuplexState


@dataclass(frozen=True)
class RsuConfig:
    """Random sample-and-union settings: ``K`` matchings drawn per layer."""

    samples_per_layer: int = 20
    seed: int | None = None

    def __post_init__(self) -> None:
        if self.samples_per_layer < 1:
            raise ValueError("samples_per_layer must be at least 1")


@dataclass
class BaselineResult:
    algorithm: str
    union_size: int | None
    d1: frozenset[int] = frozenset()
    d2: frozenset[int] = frozenset()
    elapsed: float = 0.0
    iterations: int = 0
    timed_out: bool = False
    feasible: bool = True
    note: str = ""
    fingerprint: str = ""


def _sample_seeds(master: int | None, layer: int, count: int) -> list[int | None]:
    """Per-layer seed stream; prefixes nest, and sample 0 is deterministic.

    The first sample per layer is the unshuffled matching, so a single-sample
    run reproduces the union of the two deterministic driver sets and larger
    runs can only improve on it.
    """
    seeds: list[int | None] = [None]
    if count == 1:
        return seeds
    rng = random.Random(f"{master}|rsu|{layer}")
    seeds.extend(rng.randrange(2**63) for _ in range(count - 1))
    return seeds


def rsu(
    net: DuplexNetwork, cfg: RsuConfig = RsuConfig(), time_limit: float | None = None
) -> BaselineResult:
    """Best union over all pairs of independently sampled maximum matchings.

    Duplicate driver sets are hashed away before pairing; the scan stops
    early when a union hits ``max(k1, k2)``, an unimprovable lower bound.
    Results are reduced deterministically (size, then sample indices).
    """
    t0 = time.perf_counter()
    k = cfg.samples_per_layer
    candidates: list[list[tuple[frozenset[int], int]]] = []
    timed_out = False
    for layer, bip in ((1, net.bip1), (2, net.bip2)):
        seen: set[frozenset[int]] = set()
        kept: list[tuple[frozenset[int], int]] = []
        for i, seed in enumerate(_sample_seeds(cfg.seed, layer, k)):
            # Sample 0 always runs so a result exists even under a tiny limit.
            if i and time_limit is not None and time.perf_counter() - t0 > time_limit:
                timed_out = True
                break
            m = max_matching(bip, seed)
            drivers = frozenset(
                v for v in range(net.n) if m.mate_of_minus[v] == UNMATCHED
            )
            if drivers not in seen:
                seen.add(drivers)
                kept.append((drivers, i))
        candidates.append(kept)

    d1s, d2s = candidates
    lower_bound = max(len(d1s[0][0]), len(d2s[0][0])) if d1s and d2s else 0
    best: tuple[int, int, int] | None = None
    best_sets: tuple[frozenset[int], frozenset[int]] | None = None
    pairs = 0
    for a, i in d1s:
        for b, j in d2s:
            pairs += 1
            key = (len(a | b), i, j)
            if best is None or key < best:
                best = key
                best_sets = (a, b)
            if best[0] == lower_bound:
                break
        if best is not None and best[0] == lower_bound:
            break
    assert best is not None and best_sets is not None
    return BaselineResult(
        algorithm="rsu",
        union_size=best[0],
        d1=best_sets[0],
        d2=best_sets[1],
        elapsed=time.perf_counter() - t0,
        iterations=pairs,
        timed_out=timed_out,
        fingerprint=net.fingerprint(),
    )


def clap_g(state: DuplexState, time_limit: float | None = None) -> BaselineResult:
    """Greedy single-segment descent.

    Repeatedly applies the first single admissible segment that lowers the
    union size, scanning candidates driven only in layer 1 in ascending node
    order and trying a layer-1 exchange before a layer-2 one.  Every
    improving single segment starts at such a node and ends at one driven
    only in layer 2, so the scan is exhaustive; the loop stops at a state
    with no improving segment.
    """
    t0 = time.perf_counter()
    moves = 0
    timed_out = False
    while not timed_out:
        # One full pass over the current difference drivers; both endpoint
        # sets only shrink under improving single segments, so the snapshot
        # stays valid while the pass runs.
        moved_in_pass = False
        dd2 = state.d2 - state.d1
        for u in sorted(state.d1 - state.d2):
            if time_limit is not None and time.perf_counter() - t0 > time_limit:
                timed_out = True
                break
            if not dd2:
                break
            found = None
            for layer, m in ((1, state.m1), (2, state.m2)):
                reached, parents = alt_reach({u}, m, layer, state)
                targets = dd2 & reached
                if targets:
                    t = min(targets)
                    found = Segment(u, t, layer, _witness_from_parents(parents, t))
                    break
            if found is not None:
                apply_clap(state, ClapPath((found,)))
                dd2.discard(found.to_node)
                moves += 1
                moved_in_pass = True
        if not moved_in_pass:
            break
    return BaselineResult(
        algorithm="clap_g",
        union_size=state.union_size(),
        d1=frozenset(state.d1),
        d2=frozenset(state.d2),
        elapsed=time.perf_counter() - t0,
        iterations=moves,
        timed_out=timed_out,
        fingerprint=state.net.fingerprint(),
    )


@dataclass(frozen=True)
class EnumerationLimits:
    """Caps for the exact oracle; exceeding them yields an explicit refusal."""

    max_pairs: int = 10**6


class _CapExceeded(Exception):
    pass


def _kuhn_max_size(adj: dict[int, list[int]], minus_pool: set[int]) -> int:
    """Maximum matching size of a small residual graph (plain augmentation)."""
    mate: dict[int, int] = {}
    size = 0
    for u in adj:
        seen: set[int] = set()

        def try_augment(x: int) -> bool:
            for v in adj[x]:
                if v in minus_pool and v not in seen:
                    seen.add(v)
                    if v not in mate or try_augment(mate[v]):
                        mate[v] = x
                        return True
            return False

        if try_augment(u):
            size += 1
    return size


def iter_max_matchings(bip: BipartiteRep) -> Iterator[Matching]:
    """Yield every maximum matching of ``bip`` exactly once.

    Recursion over in-copies in ascending order: each is assigned a partner
    or left unmatched, and a branch survives only if a fresh maximum matching
    of the untouched remainder can still reach the global maximum.
    """
    n = bip.n
    target = max_matching(bip).size
    mate_minus = [UNMATCHED] * n
    used_plus: set[int] = set()

    def residual_reachable(start: int, used: set[int]) -> int:
        adj = {
            u: [v for v in bip.plus_adj[u] if v >= start]
            for u in range(n)
            if u not in used and bip.plus_adj[u]
        }
        return _kuhn_max_size(adj, set(range(start, n)))

    def rec(v: int, matched: int) -> Iterator[Matching]:
        if v == n:
            yield Matching.from_pairs(
                n, [(u, w) for w, u in enumerate(mate_minus) if u != UNMATCHED]
            )
            return
        for u in bip.minus_adj[v]:
            if u in used_plus:
                continue
            used_plus.add(u)
            mate_minus[v] = u
            if matched + 1 + residual_reachable(v + 1, used_plus) == target:
                yield from rec(v + 1, matched + 1)
            mate_minus[v] = UNMATCHED
            used_plus.remove(u)
        if matched + residual_reachable(v + 1, used_plus) == target:
            yield from rec(v + 1, matched)

    yield from rec(0, 0)


def exact_min_union(
    net: DuplexNetwork, limits: EnumerationLimits = EnumerationLimits()
) -> BaselineResult:
    """Exact minimum driver-set union over all maximum-matching pairs.

    Enumerates each layer's maximum matchings, dedupes their driver sets, and
    evaluates every cross pair.  When the matching-pair count would exceed
    ``limits.max_pairs``, returns an explicitly infeasible result instead of
    a silently wrong one.
    """
    t0 = time.perf_counter()

    def driver_sets(bip: BipartiteRep, cap: int) -> tuple[list[frozenset[int]], int]:
        out: list[frozenset[int]] = []
        seen: set[frozenset[int]] = set()
        count = 0
        for m in iter_max_matchings(bip):
            count += 1
            if count > cap:
                raise _CapExceeded
            d = frozenset(v for v in range(net.n) if m.mate_of_minus[v] == UNMATCHED)
            if d not in seen:
                seen.add(d)
                out.append(d)
        return out, count

    try:
        ds1, count1 = driver_sets(net.bip1, limits.max_pairs)
        ds2, count2 = driver_sets(net.bip2, max(1, limits.max_pairs // max(count1, 1)))
    except _CapExceeded:
        return BaselineResult(
            algorithm="exact",
            union_size=None,
            elapsed=time.perf_counter() - t0,
            feasible=False,
            note="oracle infeasible at this size (enumeration cap exceeded)",
            fingerprint=net.fingerprint(),
        )

    k1 = len(ds1[0]) if ds1 else net.n
    k2 = len(ds2[0]) if ds2 else net.n
    lower_bound = max(k1, k2)
    best: int | None = None
    best_pair: tuple[frozenset[int], frozenset[int]] | None = None
    pairs = 0
    for a in ds1:
        for b in ds2:
            pairs += 1
            u = len(a | b)
            if best is None or u < best:
                best = u
                best_pair = (a, b)
            if best == lower_bound:
                break
        if best == lower_bound:
            break
    assert best is not None and best_pair is not None
    return BaselineResult(
        algorithm="exact",
        union_size=best,
        d1=best_pair[0],
        d2=best_pair[1],
        elapsed=time.perf_counter() - t0,
        iterations=pairs,
        fingerprint=net.fingerprint(),
    )
