"""Multi-seed experiment driver: runs solvers over seed lists, aggregates
mean/std/min statistics, and writes the CSV/JSON artifacts the CLI exposes.

Seed-level parallelism uses a process pool; each worker owns its solver
state end to end, and aggregation happens in the parent. Per-seed RNG
streams are derived so the three consumers never collide: the Metropolis
chain seeds from `seed`, RBM initialization from `[seed, 1]`, and the BMZ
starting point from `[seed, 2]`.
"""

from __future__ import annotations

import json
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, replace
from pathlib import Path
from typing import Optional

import numpy as np

from .bmz import BmzConfig, bmz_minimize, procedure_cut, random_start
from .graph import Graph
from .rbm import init_pretrained, init_random
from .vmc import RunTrace, VmcConfig, run_vmc, write_trace_csv

SOLVERS = ("bmz", "nqs", "both")
INIT_MODES = ("random", "pretrained")


@dataclass(frozen=True)
class SeedStats:
    """Aggregate of one solver's energies over the seed list.

    std is the population standard deviation (ddof=0); per_seed rows are
    (seed, energy, cut_value, wall_time_s) in seed order.
    """

    mean: float
    std: float
    min: float
    per_seed: tuple[tuple[int, float, float, float], ...]


@dataclass(frozen=True)
class ExperimentSpec:
    """Everything one campaign needs: graph, solver, configs, seeds, output.

    init="pretrained" starts the RBM hidden-to-visible couplings from a BMZ
    solution of the same graph (radius r on the visible bias circle); it
    only affects the nqs stage.
    """

    graph: Graph
    solver: str = "nqs"
    seeds: tuple[int, ...] = tuple(range(10))
    vmc: VmcConfig = VmcConfig()
    bmz: BmzConfig = BmzConfig()
    init: str = "random"
    r: float = 1.0
    sigma: float = 0.1
    label: str = "experiment"
    out_dir: Optional[str] = None
    workers: int = 1

    def __post_init__(self):
        if self.solver not in SOLVERS:
            raise ValueError(f"solver must be one of {SOLVERS}, got {self.solver!r}")
        if self.init not in INIT_MODES:
            raise ValueError(f"init must be one of {INIT_MODES}, got {self.init!r}")
        if len(self.seeds) < 1:
            raise ValueError("need at least one seed")
        if self.workers < 1:
            raise ValueError("workers must be >= 1")


@dataclass
class SeedResult:
    solver: str
    seed: int
    energy: float
    cut_value: float
    wall_time_s: float
    trace: Optional[RunTrace] = None


def run_seed(spec: ExperimentSpec, seed: int) -> list[SeedResult]:
    """Run one seed's full pipeline; returns one row per solver stage.

    For solver="both" the BMZ stage always runs first, so a pretrained NQS
    stage can reuse its rotor solution directly.
    """
    g = spec.graph
    rows: list[SeedResult] = []
    theta_star = None

    if spec.solver in ("bmz", "both") or spec.init == "pretrained":
        theta0 = random_start(g.n, seed=[seed, 2])
        t0 = time.perf_counter()
        theta_star, energy, _ = bmz_minimize(g, theta0, spec.bmz)
        elapsed = time.perf_counter() - t0
        if spec.solver in ("bmz", "both"):
            cut_value, _ = procedure_cut(g, theta_star)
            rows.append(SeedResult("bmz", seed, energy, cut_value, elapsed))

    if spec.solver in ("nqs", "both"):
        if spec.init == "pretrained":
            params = init_pretrained(
                theta_star, alpha=spec.vmc.alpha, r=spec.r,
                sigma=spec.sigma, seed=[seed, 1],
            )
        else:
            params = init_random(
                g.n, alpha=spec.vmc.alpha, sigma=spec.sigma, seed=[seed, 1]
            )
        cfg = replace(spec.vmc, seed=seed)
        trace = run_vmc(g, cfg, params)
        rows.append(
            SeedResult(
                "nqs", seed, trace.best_energy, trace.best_cut_value,
                trace.wall_time_s, trace,
            )
        )
    return rows


def _seed_worker(args: tuple[ExperimentSpec, int]) -> list[SeedResult]:
    spec, seed = args
    return run_seed(spec, seed)


def aggregate(rows: list[SeedResult]) -> SeedStats:
    """Mean/population-std/min of energy over one solver's seed rows."""
    if not rows:
        raise ValueError("no rows to aggregate")
    energies = np.array([r.energy for r in rows])
    per_seed = tuple(
        (r.seed, r.energy, r.cut_value, r.wall_time_s) for r in rows
    )
    return SeedStats(
        mean=float(energies.mean()),
        std=float(energies.std()),
        min=float(energies.min()),
        per_seed=per_seed,
    )


def run_experiment(spec: ExperimentSpec) -> dict[str, SeedStats]:
    """Run every seed (optionally in parallel) and aggregate per solver.

    When spec.out_dir is set, writes per-seed NQS trace CSVs, a stats CSV,
    and a JSON summary under it.
    """
    jobs = [(spec, seed) for seed in spec.seeds]
    if spec.workers == 1:
        results = [run_seed(spec, seed) for seed in spec.seeds]
    else:
        with ProcessPoolExecutor(max_workers=spec.workers) as pool:
            results = list(pool.map(_seed_worker, jobs))

    rows = [row for worker_rows in results for row in worker_rows]
    stats = {
        solver: aggregate([r for r in rows if r.solver == solver])
        for solver in ("bmz", "nqs")
        if any(r.solver == solver for r in rows)
    }

    if spec.out_dir is not None:
        out = Path(spec.out_dir)
        out.mkdir(parents=True, exist_ok=True)
        for row in rows:
            if row.trace is not None:
                write_trace_csv(
                    row.trace, out / f"trace_{row.solver}_seed{row.seed}.csv"
                )
        write_stats_csv(rows, out / f"{spec.label}_stats.csv")
        _write_summary_json(spec, stats, out / f"{spec.label}_summary.json")
    return stats


def run_sweep(
    spec: ExperimentSpec, axis: str, values
) -> list[tuple[object, SeedStats]]:
    """One multi-seed NQS run per grid point along a single parameter axis.

    axis is one of "n_iter", "samp_warm" (values are (n_samp, n_warm)
    pairs), or "lambda_reg". Writes a min/mean/max table when out_dir is
    set.
    """
    if spec.solver != "nqs":
        raise ValueError("sweeps are defined for solver='nqs' only")
    if axis not in ("n_iter", "samp_warm", "lambda_reg"):
        raise ValueError(f"unknown sweep axis {axis!r}")
    values = list(values)
    if not values:
        raise ValueError("sweep grid is empty")

    table: list[tuple[object, SeedStats]] = []
    for value in values:
        if axis == "n_iter":
            cfg = replace(spec.vmc, n_iter=int(value))
        elif axis == "samp_warm":
            n_samp, n_warm = value
            cfg = replace(spec.vmc, n_samp=int(n_samp), n_warm=int(n_warm))
        else:
            cfg = replace(spec.vmc, lambda_reg=float(value))
        point = replace(spec, vmc=cfg, out_dir=None)
        table.append((value, run_experiment(point)["nqs"]))

    if spec.out_dir is not None:
        out = Path(spec.out_dir)
        out.mkdir(parents=True, exist_ok=True)
        write_sweep_csv(axis, table, out / f"{spec.label}_sweep_{axis}.csv")
    return table


def write_stats_csv(rows: list[SeedResult], path) -> None:
    """Per-seed table, sorted by (solver, seed); floats via repr.

    The wall_time_s column is the only non-deterministic field; strip it
    when comparing bodies across runs.
    """
    lines = ["solver,seed,energy,cut_value,wall_time_s"]
    for r in sorted(rows, key=lambda r: (r.solver, r.seed)):
        lines.append(
            f"{r.solver},{r.seed},{float(r.energy)!r},{float(r.cut_value)!r},"
            f"{float(r.wall_time_s)!r}"
        )
    Path(path).write_text("\n".join(lines) + "\n")


def write_sweep_csv(axis: str, table, path) -> None:
    """min/mean/max of per-seed best energies at each grid point."""
    if axis == "samp_warm":
        lines = ["n_samp,n_warm,min,mean,max"]
    else:
        lines = [f"{axis},min,mean,max"]
    for value, stats in table:
        peak = float(max(e for _, e, _, _ in stats.per_seed))
        head = (
            f"{value[0]},{value[1]}" if axis == "samp_warm"
            else (f"{value!r}" if isinstance(value, float) else f"{value}")
        )
        lines.append(f"{head},{float(stats.min)!r},{float(stats.mean)!r},{peak!r}")
    Path(path).write_text("\n".join(lines) + "\n")


def _write_summary_json(
    spec: ExperimentSpec, stats: dict[str, SeedStats], path
) -> None:
    payload = {
        "label": spec.label,
        "graph": {
            "n": spec.graph.n,
            "m": spec.graph.m,
            "total_weight": spec.graph.total_weight,
        },
        "solver": spec.solver,
        "init": spec.init,
        "seeds": list(spec.seeds),
        "vmc_config": asdict(spec.vmc),
        "bmz_config": asdict(spec.bmz),
        "stats": {
            solver: {
                "mean": s.mean,
                "std": s.std,
                "min": s.min,
                "per_seed": [list(row) for row in s.per_seed],
            }
            for solver, s in stats.items()
        },
    }
    Path(path).write_text(json.dumps(payload, indent=2, sort_keys=True) + "\n")
