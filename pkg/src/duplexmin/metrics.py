"""Benchmark metrics: union reduction, gain over sampling, relative rate.

All quantities compare final union sizes against the union of the two
deterministic initial driver sets.  The reduction of an algorithm is
``|U|_0 - |U|_alg``; the optimization gain is the sampling baseline's final
union minus the search's, which equals the difference of their reductions;
the relative rate divides the gain by the baseline's union (undefined when
that is zero).
"""

from __future__ import annotations

from dataclasses import dataclass, field


@dataclass
class AlgorithmRun:
    """Normalized outcome of one algorithm on one duplex."""

    algorithm: str
    union_size: int | None
    elapsed: float
    fingerprint: str
    iterations: int = 0
    mean_clap_length: float | None = None
    clap_stable: bool | None = None
    timed_out: bool = False
    feasible: bool = True
    seed: int | None = None
    note: str = ""


@dataclass
class MetricsReport:
    """Per-duplex summary row tying every algorithm's outcome together."""

    fingerprint: str
    n: int
    union_initial: int
    dd_union_initial: int
    runs: dict[str, AlgorithmRun]
    reductions: dict[str, int] = field(default_factory=dict)
    opt_gain: int | None = None
    relative_opt_rate: float | None = None
    r_opt_defined: bool = True
    mean_clap_length: float | None = None
    seeds: dict[str, int | None] = field(default_factory=dict)
    config_echo: dict = field(default_factory=dict)

    def check_identities(self) -> None:
        """Assert the documented relations between the report's fields."""
        for name, run in self.runs.items():
            if run.union_size is not None:
                assert self.reductions[name] == self.union_initial - run.union_size
        if self.opt_gain is not None:
            assert self.opt_gain == (
                self.reductions["clap_s"] - self.reductions["rsu"]
            )


def compute_metrics(
    runs: dict[str, AlgorithmRun],
    union_initial: int,
    dd_union_initial: int,
    n: int,
    seeds: dict[str, int | None] | None = None,
    config_echo: dict | None = None,
) -> MetricsReport:
    """Assemble the summary for one duplex from its per-algorithm runs.

    All runs must carry the same network fingerprint; mismatched provenance
    is rejected rather than silently mixed.
    """
    fingerprints = {run.fingerprint for run in runs.values() if run.fingerprint}
    if len(fingerprints) > 1:
        raise ValueError(f"runs come from different networks: {sorted(fingerprints)}")
    fingerprint = fingerprints.pop() if fingerprints else ""
    reductions = {
        name: union_initial - run.union_size
        for name, run in runs.items()
        if run.union_size is not None
    }
    opt_gain: int | None = None
    relative: float | None = None
    defined = True
    rsu_run = runs.get("rsu")
    clap_run = runs.get("clap_s")
    if rsu_run and clap_run and rsu_run.union_size is not None and clap_run.union_size is not None:
        opt_gain = rsu_run.union_size - clap_run.union_size
        if rsu_run.union_size == 0:
            defined = False
        else:
            relative = 100.0 * opt_gain / rsu_run.union_size
    report = MetricsReport(
        fingerprint=fingerprint,
        n=n,
        union_initial=union_initial,
        dd_union_initial=dd_union_initial,
        runs=runs,
        reductions=reductions,
        opt_gain=opt_gain,
        relative_opt_rate=relative,
        r_opt_defined=defined,
        mean_clap_length=clap_run.mean_clap_length if clap_run else None,
        seeds=seeds or {},
        config_echo=config_echo or {},
    )
    report.check_identities()
    return report
