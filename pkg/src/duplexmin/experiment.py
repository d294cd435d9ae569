"""Experiment orchestration: per-duplex analysis, parameter sweeps, verify.

A sweep runs over the product of model pairings, mean degrees, overlaps, and
repetitions.  Every cell derives its own seed from the master seed and cell
coordinates, so re-running a config reproduces every non-timing field of the
emitted CSV byte for byte; failures are recorded per cell and the sweep
continues.
"""

from __future__ import annotations

import csv
import hashlib
import json
import random
import statistics
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field
from pathlib import Path

from . import __version__
from .baselines import EnumerationLimits, RsuConfig, clap_g, exact_min_union, rsu
from .engine import clap_s, find_shortest_clap
from .generators import GenSpec, make_duplex
from .metrics import AlgorithmRun, MetricsReport, compute_metrics
from .state import DuplexNetwork, init_state

ALGORITHMS = ("clap_s", "clap_g", "rsu", "exact")
DEFAULT_RSU_K = 20
DEFAULT_ORACLE_CAP = 10**6
DEFAULT_TIME_LIMIT = 500.0


@dataclass
class ExperimentConfig:
    models: list[str] = field(default_factory=lambda: ["ER-ER", "BA-BA", "ER-BA"])
    n: int = 1000
    avg_degrees: list[float] = field(default_factory=lambda: [2.0, 4.0, 8.0])
    overlaps: list[float | None] = field(default_factory=lambda: [None])
    repetitions: int = 10
    algorithms: list[str] = field(default_factory=lambda: ["clap_s", "clap_g", "rsu"])
    rsu_k: int = DEFAULT_RSU_K
    seed: int = 0
    oracle_cap: int = DEFAULT_ORACLE_CAP
    time_limit: float | None = DEFAULT_TIME_LIMIT

    @classmethod
    def from_json(cls, path: str | Path) -> "ExperimentConfig":
        data = json.loads(Path(path).read_text(encoding="utf-8"))
        known = {f for f in cls.__dataclass_fields__}
        unknown = set(data) - known
        if unknown:
            raise ValueError(f"unknown config keys: {sorted(unknown)}")
        cfg = cls(**data)
        for alg in cfg.algorithms:
            if alg not in ALGORITHMS:
                raise ValueError(f"unknown algorithm {alg!r}")
        return cfg

    def digest(self) -> str:
        blob = json.dumps(asdict(self), sort_keys=True).encode()
        return hashlib.sha1(blob).hexdigest()[:12]


def run_algorithms(
    net: DuplexNetwork,
    algorithms: list[str],
    seed: int | None = None,
    rsu_k: int = DEFAULT_RSU_K,
    oracle_cap: int = DEFAULT_ORACLE_CAP,
    time_limit: float | None = None,
) -> MetricsReport:
    """Run the requested algorithms on one duplex and summarize.

    Each algorithm is timed end to end around its own call, including its own
    matching initialization; ingestion and generation are excluded.  The
    reference initial state (for the initial union and difference sets) is
    the deterministic one, which is also the sampling baseline's first
    sample, so its result can only improve on the initial union.
    """
    initial = init_state(net)
    union_initial = initial.union_size()
    snap = initial.partition()
    dd_union_initial = len(snap.dd1 | snap.dd2)
    runs: dict[str, AlgorithmRun] = {}
    for alg in algorithms:
        if alg == "clap_s":
            state = init_state(net)
            t0 = time.perf_counter()
            log = clap_s(state, time_limit=time_limit)
            runs[alg] = AlgorithmRun(
                algorithm=alg,
                union_size=log.final_union,
                elapsed=time.perf_counter() - t0,
                fingerprint=net.fingerprint(),
                iterations=len(log.iterations),
                mean_clap_length=log.mean_clap_length,
                clap_stable=log.clap_stable,
                timed_out=log.timed_out,
                seed=seed,
            )
        elif alg == "clap_g":
            state = init_state(net)
            t0 = time.perf_counter()
            result = clap_g(state, time_limit=time_limit)
            runs[alg] = AlgorithmRun(
                algorithm=alg,
                union_size=result.union_size,
                elapsed=time.perf_counter() - t0,
                fingerprint=result.fingerprint,
                iterations=result.iterations,
                timed_out=result.timed_out,
                seed=seed,
            )
        elif alg == "rsu":
            t0 = time.perf_counter()
            result = rsu(net, RsuConfig(rsu_k, seed), time_limit=time_limit)
            runs[alg] = AlgorithmRun(
                algorithm=alg,
                union_size=result.union_size,
                elapsed=time.perf_counter() - t0,
                fingerprint=result.fingerprint,
                iterations=result.iterations,
                timed_out=result.timed_out,
                seed=seed,
            )
        elif alg == "exact":
            t0 = time.perf_counter()
            result = exact_min_union(net, EnumerationLimits(max_pairs=oracle_cap))
            runs[alg] = AlgorithmRun(
                algorithm=alg,
                union_size=result.union_size,
                elapsed=time.perf_counter() - t0,
                fingerprint=result.fingerprint,
                iterations=result.iterations,
                feasible=result.feasible,
                note=result.note,
                seed=seed,
            )
        else:
            raise ValueError(f"unknown algorithm {alg!r}")
    return compute_metrics(
        runs,
        union_initial=union_initial,
        dd_union_initial=dd_union_initial,
        n=net.n,
        seeds={"master": seed},
    )


CELL_COLUMNS = [
    "model",
    "avg_degree",
    "overlap",
    "rep",
    "seed",
    "n",
    "edges1",
    "edges2",
    "achieved_overlap",
    "k1",
    "k2",
    "union_initial",
    "dd_union_initial",
    "clap_s_union",
    "clap_s_reduction",
    "clap_s_time",
    "clap_s_iterations",
    "clap_s_mean_length",
    "clap_s_stable",
    "clap_g_union",
    "clap_g_reduction",
    "clap_g_time",
    "rsu_union",
    "rsu_reduction",
    "rsu_time",
    "exact_union",
    "exact_reduction",
    "exact_time",
    "opt_gain",
    "r_opt",
    "error",
]

_AGGREGATED = [
    "union_initial",
    "dd_union_initial",
    "clap_s_union",
    "clap_s_reduction",
    "clap_s_time",
    "clap_s_mean_length",
    "clap_g_union",
    "clap_g_reduction",
    "clap_g_time",
    "rsu_union",
    "rsu_reduction",
    "rsu_time",
    "opt_gain",
    "r_opt",
]


def _cell_seed(master: int, model: str, avg_degree: float, overlap, rep: int) -> int:
    key = f"{master}|{model}|{avg_degree}|{overlap}|{rep}"
    return random.Random(key).randrange(2**63)


def _run_cell(args) -> dict:
    cfg_dict, model, avg_degree, overlap, rep = args
    cfg = ExperimentConfig(**cfg_dict)
    seed = _cell_seed(cfg.seed, model, avg_degree, overlap, rep)
    row = {c: "" for c in CELL_COLUMNS}
    row.update(
        model=model, avg_degree=avg_degree,
        overlap="" if overlap is None else overlap, rep=rep, seed=seed, n=cfg.n,
    )
    try:
        spec = GenSpec(model, cfg.n, avg_degree, overlap, seed)
        net, gen_report = make_duplex(spec)
        row["edges1"] = gen_report["edges1"]
        row["edges2"] = gen_report["edges2"]
        achieved = gen_report["achieved_overlap"]
        row["achieved_overlap"] = "" if achieved is None else round(achieved, 6)
        initial = init_state(net)
        row["k1"], row["k2"] = initial.k1, initial.k2
        report = run_algorithms(
            net,
            cfg.algorithms,
            seed=seed,
            rsu_k=cfg.rsu_k,
            oracle_cap=cfg.oracle_cap,
            time_limit=cfg.time_limit,
        )
        row["union_initial"] = report.union_initial
        row["dd_union_initial"] = report.dd_union_initial
        for alg, run in report.runs.items():
            row[f"{alg}_union"] = "" if run.union_size is None else run.union_size
            row[f"{alg}_reduction"] = report.reductions.get(alg, "")
            row[f"{alg}_time"] = round(run.elapsed, 6)
        if "clap_s" in report.runs:
            run = report.runs["clap_s"]
            row["clap_s_iterations"] = run.iterations
            row["clap_s_mean_length"] = round(run.mean_clap_length, 6)
            row["clap_s_stable"] = run.clap_stable
        if report.opt_gain is not None:
            row["opt_gain"] = report.opt_gain
            if report.r_opt_defined:
                row["r_opt"] = round(report.relative_opt_rate, 4)
            else:
                row["r_opt"] = "undefined"
    except Exception as exc:  # cell failures must not kill the sweep
        row["error"] = f"{type(exc).__name__}: {exc}"
    return row


def run_experiment(
    config: ExperimentConfig, output_dir: str | Path, workers: int = 1
) -> tuple[Path, Path, int]:
    """Run the sweep, write per-cell and aggregate CSVs plus a manifest.

    Returns the two CSV paths and the number of failed cells.  Cells run in
    a worker pool when ``workers > 1`` and are always reduced in a
    deterministic order.
    """
    outdir = Path(output_dir)
    outdir.mkdir(parents=True, exist_ok=True)
    cells = [
        (asdict(config), model, avg_degree, overlap, rep)
        for model in config.models
        for avg_degree in config.avg_degrees
        for overlap in config.overlaps
        for rep in range(config.repetitions)
    ]
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            rows = list(pool.map(_run_cell, cells))
    else:
        rows = [_run_cell(cell) for cell in cells]

    cells_path = outdir / "cells.csv"
    with open(cells_path, "w", newline="", encoding="utf-8") as handle:
        writer = csv.DictWriter(handle, fieldnames=CELL_COLUMNS)
        writer.writeheader()
        writer.writerows(rows)

    agg_path = outdir / "aggregate.csv"
    _write_aggregate(rows, agg_path)

    manifest = {
        "version": __version__,
        "config": asdict(config),
        "config_hash": config.digest(),
        "cells": len(rows),
        "failures": sum(1 for r in rows if r["error"]),
    }
    (outdir / "manifest.json").write_text(
        json.dumps(manifest, indent=2) + "\n", encoding="utf-8"
    )
    return cells_path, agg_path, manifest["failures"]


def _write_aggregate(rows: list[dict], path: Path) -> None:
    groups: dict[tuple, list[dict]] = {}
    for row in rows:
        if row["error"]:
            continue
        groups.setdefault((row["model"], row["avg_degree"], row["overlap"]), []).append(row)
    columns = ["model", "avg_degree", "overlap", "cells"]
    for name in _AGGREGATED:
        columns.extend([f"{name}_mean", f"{name}_std"])
    with open(path, "w", newline="", encoding="utf-8") as handle:
        writer = csv.writer(handle)
        writer.writerow(columns)
        for key in sorted(groups, key=lambda k: (str(k[0]), float(k[1]), str(k[2]))):
            members = groups[key]
            out = [key[0], key[1], key[2], len(members)]
            for name in _AGGREGATED:
                values = [
                    float(r[name])
                    for r in members
                    if r[name] not in ("", "undefined", None)
                ]
                if not values:
                    out.extend(["", ""])
                    continue
                mean = statistics.fmean(values)
                std = statistics.stdev(values) if len(values) > 1 else 0.0
                out.extend([round(mean, 6), round(std, 6)])
            writer.writerow(out)


@dataclass
class VerifyOutcome:
    clap_stable: bool
    final_union: int
    oracle_union: int | None
    oracle_feasible: bool
    agreement: str  # AGREE | DISAGREE | ORACLE_INFEASIBLE
    witness_exists: bool
    iterations: int

    def lines(self) -> list[str]:
        out = []
        if self.witness_exists:
            out.append(
                f"not stable, witness CLAP exists (union size {self.final_union} "
                f"after {self.iterations} exchanges)"
            )
        else:
            out.append(
                f"stable after {self.iterations} exchanges, union size {self.final_union}"
            )
        if self.oracle_feasible:
            out.append(f"oracle optimum: {self.oracle_union}")
        else:
            out.append("oracle infeasible at this size")
        out.append(self.agreement)
        return out


def verify_duplex(
    net: DuplexNetwork,
    oracle_cap: int = DEFAULT_ORACLE_CAP,
    max_iterations: int | None = None,
    time_limit: float | None = None,
) -> VerifyOutcome:
    """Run the search, then confirm its terminal verdict against the oracle.

    With ``max_iterations`` the run is truncated first, demonstrating that a
    non-stable state still has a findable improving path.
    """
    state = init_state(net)
    log = clap_s(state, max_iterations=max_iterations, time_limit=time_limit)
    witness = find_shortest_clap(state) is not None
    oracle = exact_min_union(net, EnumerationLimits(max_pairs=oracle_cap))
    if not oracle.feasible:
        agreement = "ORACLE_INFEASIBLE"
    elif not witness:
        # No improving path from the reached state: it must hit the optimum.
        agreement = "AGREE" if log.final_union == oracle.union_size else "DISAGREE"
    else:
        # A witness remains (truncated run): the state must be suboptimal.
        agreement = "AGREE" if log.final_union > oracle.union_size else "DISAGREE"
    return VerifyOutcome(
        clap_stable=log.clap_stable,
        final_union=log.final_union,
        oracle_union=oracle.union_size,
        oracle_feasible=oracle.feasible,
        agreement=agreement,
        witness_exists=witness,
        iterations=len(log.iterations),
    )
