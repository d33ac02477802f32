"""Multi-restart solving, ablation studies, detuning sweeps and reporting.

The benchmark protocol: a problem graph is solved `iterations` times from
independently seeded random initial phases, each run is rounded to a
coloring and scored, and the per-run records are aggregated into a
SolveReport (average/best accuracy, a 0.01-wide accuracy histogram, mean
cycles-to-solution over the converged runs).  Per-run seeds are
base_seed + run index, so any report is reproducible from its embedded
configuration regardless of worker parallelism.
"""
from __future__ import annotations

import dataclasses
import enum
import json
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from .dynamics import (
    DynamicsParams,
    ShilSchedule,
    detect_convergence,
    integrate,
    random_init,
)
from .graph_io import Graph
from .potts import (
    Coloring,
    accuracy,
    delta_energy,
    lattice_deviation,
    lattice_state,
    quantize,
    vector_energy,
)

HISTOGRAM_BINS = 100
CONVERGENCE_WINDOW = 5
CONVERGENCE_EPS = 1e-3

# Readout operating point for lattice-deviation measurements: the deviation
# of a settled phase from its lattice target scales like 1/shil_gain, so the
# sweep needs a SHIL strength that dominates the residual coupling torque
# (the solve-protocol gain of 2 floors the deviation near 10 degrees).  The
# smaller step keeps RK4 stable at that gain.
DETUNE_SHIL_GAIN = 60.0
DETUNE_DT = 0.008
DETUNE_T_MAX = 40.0


class AblationMode(str, enum.Enum):
    FULL = "full"
    SYNC_ONLY = "sync_only"
    COUPLINGS_ONLY = "couplings_only"
    NONE = "none"


@dataclass(frozen=True)
class RunRecord:
    seed: int
    accuracy: float
    delta_energy: float
    vector_energy: float
    cycles: Optional[float]


@dataclass(frozen=True)
class SolveReport:
    """Per-run records plus their aggregate statistics."""

    benchmark: str
    params: dict
    runs: tuple[RunRecord, ...]
    avg_accuracy: float
    best_accuracy: float
    histogram: tuple[int, ...]
    mean_cycles: Optional[float]
    num_converged: int
    num_runs: int

    def __post_init__(self):
        if self.num_runs != len(self.runs):
            raise ValueError("num_runs disagrees with the record count")
        if sum(self.histogram) != self.num_runs:
            raise ValueError("histogram mass must equal the run count")
        if self.best_accuracy < self.avg_accuracy - 1e-12:
            raise ValueError("best accuracy below average")
        if any(not 0.0 <= r.accuracy <= 1.0 for r in self.runs):
            raise ValueError("accuracy outside [0, 1]")


def effective_config(
    params: DynamicsParams,
    schedule: ShilSchedule,
    iterations: int,
    base_seed: int,
    mode: Optional[AblationMode] = None,
    conv_window: int = CONVERGENCE_WINDOW,
    conv_eps: float = CONVERGENCE_EPS,
) -> dict:
    """Self-describing configuration block embedded in every report."""
    cfg = {
        "iterations": iterations,
        "base_seed": base_seed,
        "dynamics": dataclasses.asdict(params),
        "schedule": dataclasses.asdict(schedule),
        "convergence": {"window": conv_window, "eps": conv_eps},
    }
    if mode is not None:
        cfg["mode"] = mode.value
    return cfg


def config_to_settings(cfg: dict) -> tuple[DynamicsParams, ShilSchedule, int, int]:
    """Rebuild (params, schedule, iterations, base_seed) from an embedded config."""
    return (
        DynamicsParams(**cfg["dynamics"]),
        ShilSchedule(**cfg["schedule"]),
        int(cfg["iterations"]),
        int(cfg["base_seed"]),
    )


def solve_once(
    graph: Graph,
    params: DynamicsParams,
    schedule: ShilSchedule,
    seed: int,
    conv_window: int = CONVERGENCE_WINDOW,
    conv_eps: float = CONVERGENCE_EPS,
) -> RunRecord:
    """One machine run: random init, integrate, quantize, score."""
    init = random_init(graph.num_vertices, seed)
    traj = integrate(graph, init, params, schedule, seed=seed)
    final = traj.final
    coloring = final.coloring
    return RunRecord(
        seed=seed,
        accuracy=accuracy(graph, coloring),
        delta_energy=delta_energy(graph, coloring),
        vector_energy=vector_energy(graph, final.state),
        cycles=detect_convergence(traj, conv_window, conv_eps),
    )


def _quantized_init_record(graph: Graph, n_phases: int, seed: int) -> RunRecord:
    coloring = quantize(random_init(graph.num_vertices, seed), n_phases)
    return RunRecord(
        seed=seed,
        accuracy=accuracy(graph, coloring),
        delta_energy=delta_energy(graph, coloring),
        vector_energy=vector_energy(graph, lattice_state(coloring)),
        cycles=None,
    )


def _run_task(args) -> RunRecord:
    graph, params, schedule, seed, mode, window, eps = args
    try:
        if mode is AblationMode.NONE:
            return _quantized_init_record(graph, params.n_phases, seed)
        return solve_once(graph, params, schedule, seed, window, eps)
    except Exception as exc:
        raise type(exc)(f"run with seed {seed} failed: {exc}") from exc


def _params_for_mode(params: DynamicsParams, mode: AblationMode) -> DynamicsParams:
    if mode is AblationMode.SYNC_ONLY:
        return dataclasses.replace(params, coupling_gain=0.0)
    if mode is AblationMode.COUPLINGS_ONLY:
        return dataclasses.replace(params, shil_gain_max=0.0)
    return params


def _aggregate(
    benchmark: str, cfg: dict, records: Sequence[RunRecord]
) -> SolveReport:
    accs = np.array([r.accuracy for r in records])
    hist, _ = np.histogram(accs, bins=np.linspace(0.0, 1.0, HISTOGRAM_BINS + 1))
    converged = [r.cycles for r in records if r.cycles is not None]
    return SolveReport(
        benchmark=benchmark,
        params=cfg,
        runs=tuple(records),
        avg_accuracy=float(np.mean(accs)),
        best_accuracy=float(np.max(accs)),
        histogram=tuple(int(c) for c in hist),
        mean_cycles=float(np.mean(converged)) if converged else None,
        num_converged=len(converged),
        num_runs=len(records),
    )


def _run_batch(
    graph: Graph,
    params: DynamicsParams,
    schedule: ShilSchedule,
    iterations: int,
    base_seed: int,
    mode: AblationMode,
    jobs: int,
    conv_window: int,
    conv_eps: float,
) -> list[RunRecord]:
    if iterations < 1:
        raise ValueError("iterations must be >= 1")
    tasks = [
        (graph, params, schedule, base_seed + i, mode, conv_window, conv_eps)
        for i in range(iterations)
    ]
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            return list(pool.map(_run_task, tasks, chunksize=max(1, iterations // (4 * jobs))))
    return [_run_task(t) for t in tasks]


def solve_multi(
    graph: Graph,
    params: DynamicsParams,
    schedule: ShilSchedule,
    iterations: int,
    base_seed: int,
    benchmark: str = "",
    jobs: int = 1,
    conv_window: int = CONVERGENCE_WINDOW,
    conv_eps: float = CONVERGENCE_EPS,
) -> SolveReport:
    """Run `iterations` independent restarts (seeds base_seed..+iterations-1)."""
    records = _run_batch(
        graph, params, schedule, iterations, base_seed,
        AblationMode.FULL, jobs, conv_window, conv_eps,
    )
    cfg = effective_config(params, schedule, iterations, base_seed,
                           conv_window=conv_window, conv_eps=conv_eps)
    return _aggregate(benchmark, cfg, records)


def ablate(
    graph: Graph,
    params: DynamicsParams,
    schedule: ShilSchedule,
    mode: AblationMode,
    iterations: int,
    base_seed: int,
    benchmark: str = "",
    jobs: int = 1,
    conv_window: int = CONVERGENCE_WINDOW,
    conv_eps: float = CONVERGENCE_EPS,
) -> SolveReport:
    """solve_multi with one subsystem disabled.

    sync_only zeroes the coupling gain, couplings_only zeroes the SHIL gain
    (the final continuous state is still rounded), none skips the dynamics
    entirely and scores the quantized random initial state.
    """
    mode = AblationMode(mode)
    records = _run_batch(
        graph, _params_for_mode(params, mode), schedule, iterations, base_seed,
        mode, jobs, conv_window, conv_eps,
    )
    cfg = effective_config(params, schedule, iterations, base_seed, mode=mode,
                           conv_window=conv_window, conv_eps=conv_eps)
    return _aggregate(benchmark, cfg, records)


def detune_protocol_params(
    n_phases: int = 3,
    coupling_gain: float = 1.0,
    shil_gain_max: float = DETUNE_SHIL_GAIN,
    dt: float = DETUNE_DT,
    t_max: float = DETUNE_T_MAX,
) -> DynamicsParams:
    """Default operating point for lattice-deviation (detuning) sweeps."""
    return DynamicsParams(
        coupling_gain=coupling_gain,
        shil_gain_max=shil_gain_max,
        n_phases=n_phases,
        dt=dt,
        t_max=t_max,
    )


def _detune_task(args) -> float:
    graph, params, schedule, seed = args
    init = random_init(graph.num_vertices, seed)
    traj = integrate(graph, init, params, schedule, seed=seed)
    final = traj.final
    dev = lattice_deviation(final.state, params.n_phases,
                            offset=params.detuning * final.time)
    return float(np.mean(dev))


def detune_sweep(
    graph: Graph,
    params: DynamicsParams,
    schedule: ShilSchedule,
    deltas: Sequence[float],
    iterations: int,
    base_seed: int = 0,
    jobs: int = 1,
) -> list[tuple[float, float]]:
    """Mean lattice deviation (degrees) of the settled phases per detuning rate.

    For each detuning value the machine runs `iterations` times; the reported
    figure is the mean over runs and vertices of the circular distance from
    each final phase to the nearest target phase of the (rotating) SHIL
    stimulus, converted to degrees.
    """
    if len(deltas) == 0:
        raise ValueError("need at least one detuning value")
    out = []
    for delta in deltas:
        p = dataclasses.replace(params, detuning=float(delta))
        tasks = [(graph, p, schedule, base_seed + i) for i in range(iterations)]
        if jobs > 1:
            with ProcessPoolExecutor(max_workers=jobs) as pool:
                devs = list(pool.map(_detune_task, tasks))
        else:
            devs = [_detune_task(t) for t in tasks]
        out.append((float(delta), float(np.degrees(np.mean(devs)))))
    return out


def bootstrap_mean_diff(
    xs: Sequence[float],
    ys: Sequence[float],
    n_boot: int = 1000,
    seed: int = 0,
    confidence: float = 0.95,
) -> tuple[float, float]:
    """Percentile bootstrap CI for mean(xs) - mean(ys) (independent samples)."""
    xs = np.asarray(xs, dtype=np.float64)
    ys = np.asarray(ys, dtype=np.float64)
    rng = np.random.default_rng(seed)
    diffs = np.empty(n_boot)
    for b in range(n_boot):
        diffs[b] = np.mean(rng.choice(xs, len(xs))) - np.mean(rng.choice(ys, len(ys)))
    lo = (1.0 - confidence) / 2.0
    return (
        float(np.quantile(diffs, lo)),
        float(np.quantile(diffs, 1.0 - lo)),
    )


# ---------------------------------------------------------------------------
# report serialization


def report_json(report: SolveReport) -> str:
    """Canonical JSON form: benchmark, params, per-run records, aggregate."""
    doc = {
        "benchmark": report.benchmark,
        "params": report.params,
        "runs": [dataclasses.asdict(r) for r in report.runs],
        "aggregate": {
            "avg_accuracy": report.avg_accuracy,
            "best_accuracy": report.best_accuracy,
            "mean_cycles": report.mean_cycles,
            "num_converged": report.num_converged,
            "num_runs": report.num_runs,
            "histogram_bin_width": 1.0 / HISTOGRAM_BINS,
            "histogram": list(report.histogram),
        },
    }
    return json.dumps(doc, indent=2) + "\n"


def report_csv(report: SolveReport) -> str:
    """One row per run, with the configuration embedded as a comment line."""
    head = "# " + json.dumps({"benchmark": report.benchmark, "params": report.params})
    rows = [head, "seed,accuracy,delta_energy,vector_energy,cycles"]
    for r in report.runs:
        cyc = "" if r.cycles is None else repr(r.cycles)
        rows.append(f"{r.seed},{repr(r.accuracy)},{repr(r.delta_energy)},{repr(r.vector_energy)},{cyc}")
    return "\n".join(rows) + "\n"


def histogram_csv(report: SolveReport) -> str:
    """Accuracy histogram (bin width 0.01) as CSV for plotting."""
    width = 1.0 / HISTOGRAM_BINS
    rows = ["bin_low,bin_high,count"]
    for i, count in enumerate(report.histogram):
        rows.append(f"{repr(i * width)},{repr((i + 1) * width)},{count}")
    return "\n".join(rows) + "\n"
