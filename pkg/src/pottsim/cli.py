"""Command-line front end: solve, bench, ablate, landscape, detune, gen.

Every emitted report embeds the full effective configuration (gains, step,
schedule, seeds), so rerunning with the same inputs reproduces it
byte-for-byte; `--jobs` only changes wall time, never the result.
"""
from __future__ import annotations

import argparse
import dataclasses
import json
import sys
from pathlib import Path

from .dynamics import DynamicsParams, IntegrationDivergedError, ShilSchedule
from .graph_io import DimacsError, gen_planted, parse_dimacs, planted_sidecar, write_dimacs
from .oracle import enumerate_landscape, landscape_csv
from .solver import (
    AblationMode,
    ablate,
    detune_protocol_params,
    detune_sweep,
    effective_config,
    report_csv,
    report_json,
    solve_multi,
)

DEFAULT_DELTAS = "0,10,-10,30,-30,80,-80,150,-150,300,-300"


def _add_dynamics_flags(p: argparse.ArgumentParser):
    p.add_argument("--kc", type=float, default=None, help="coupling gain")
    p.add_argument("--ks", type=float, default=None, help="peak SHIL gain")
    p.add_argument("--n-phases", type=int, default=None, help="number of lattice phases N")
    p.add_argument("--dt", type=float, default=None, help="integrator step (cycles)")
    p.add_argument("--t-max", type=float, default=None, help="horizon (cycles)")
    p.add_argument("--t-on", type=float, default=None, help="SHIL activation time (cycles)")
    p.add_argument("--ramp", type=float, default=None, help="SHIL ramp duration (cycles)")
    p.add_argument("--noise", type=float, default=None, help="noise amplitude")
    p.add_argument("--detune", type=float, default=None, help="SHIL detuning rate (rad/cycle)")


def _add_run_flags(p: argparse.ArgumentParser, default_iters: int = 100):
    p.add_argument("--iters", type=int, default=default_iters, help="number of restarts")
    p.add_argument("--seed", type=int, default=0, help="base seed (run i uses seed base+i)")
    p.add_argument("--jobs", type=int, default=1, help="worker processes")
    p.add_argument("--format", choices=("json", "csv"), default="json", help="report format")
    p.add_argument("--out", type=Path, default=None, help="output path (stdout if omitted)")


def _build_settings(args, base: DynamicsParams | None = None) -> tuple[DynamicsParams, ShilSchedule]:
    base = base if base is not None else DynamicsParams()
    overrides = {}
    for flag, field in (
        ("kc", "coupling_gain"),
        ("ks", "shil_gain_max"),
        ("n_phases", "n_phases"),
        ("dt", "dt"),
        ("t_max", "t_max"),
        ("noise", "noise_amplitude"),
        ("detune", "detuning"),
    ):
        val = getattr(args, flag, None)
        if val is not None:
            overrides[field] = val
    params = dataclasses.replace(base, **overrides) if overrides else base
    sched_overrides = {}
    if getattr(args, "t_on", None) is not None:
        sched_overrides["t_on"] = args.t_on
    if getattr(args, "ramp", None) is not None:
        sched_overrides["ramp"] = args.ramp
    schedule = ShilSchedule(**sched_overrides)
    return params, schedule


def _load_graph(path: Path):
    return parse_dimacs(path.read_text())


def _emit(text: str, out: Path | None):
    if out is None:
        sys.stdout.write(text)
    else:
        out.write_text(text)


def _cmd_solve(args) -> int:
    graph = _load_graph(args.file)
    params, schedule = _build_settings(args)
    report = solve_multi(
        graph, params, schedule, args.iters, args.seed,
        benchmark=args.file.stem, jobs=args.jobs,
    )
    _emit(report_json(report) if args.format == "json" else report_csv(report), args.out)
    return 0


def _cmd_ablate(args) -> int:
    graph = _load_graph(args.file)
    params, schedule = _build_settings(args)
    report = ablate(
        graph, params, schedule, AblationMode(args.mode), args.iters, args.seed,
        benchmark=args.file.stem, jobs=args.jobs,
    )
    _emit(report_json(report) if args.format == "json" else report_csv(report), args.out)
    return 0


def _cmd_bench(args) -> int:
    files = sorted(args.directory.glob("*.col"), key=lambda p: p.name)
    if not files:
        raise ValueError(f"no .col files in {args.directory}")
    params, schedule = _build_settings(args)
    rows = []
    for path in files:
        graph = parse_dimacs(path.read_text())
        report = solve_multi(
            graph, params, schedule, args.iters, args.seed,
            benchmark=path.stem, jobs=args.jobs,
        )
        rows.append(
            {
                "benchmark": report.benchmark,
                "iterations": report.num_runs,
                "mean_cycles": report.mean_cycles,
                "num_converged": report.num_converged,
                "avg_accuracy": report.avg_accuracy,
                "best_accuracy": report.best_accuracy,
            }
        )
    cfg = effective_config(params, schedule, args.iters, args.seed)
    if args.format == "json":
        text = json.dumps({"params": cfg, "rows": rows}, indent=2) + "\n"
    else:
        lines = ["# " + json.dumps({"params": cfg})]
        lines.append("benchmark,iterations,mean_cycles,num_converged,avg_accuracy,best_accuracy")
        for r in rows:
            cyc = "" if r["mean_cycles"] is None else repr(r["mean_cycles"])
            lines.append(
                f"{r['benchmark']},{r['iterations']},{cyc},{r['num_converged']},"
                f"{repr(r['avg_accuracy'])},{repr(r['best_accuracy'])}"
            )
        text = "\n".join(lines) + "\n"
    _emit(text, args.out)
    return 0


def _cmd_landscape(args) -> int:
    graph = _load_graph(args.file)
    n_phases = args.n_phases if args.n_phases is not None else 3
    scape = enumerate_landscape(graph, n_phases)
    head = "# " + json.dumps({"benchmark": args.file.stem, "n_phases": n_phases}) + "\n"
    _emit(head + landscape_csv(scape), args.out)
    print(
        f"{args.file.stem}: {scape.n_states} states, min energy {scape.min_energy:.6g}, "
        f"{scape.num_global_minima} global minima, {scape.num_local_minima} local minima",
        file=sys.stderr,
    )
    return 0


def _cmd_detune(args) -> int:
    graph = _load_graph(args.file)
    params, schedule = _build_settings(args, base=detune_protocol_params())
    deltas = [float(tok) for tok in args.deltas.split(",") if tok.strip()]
    sweep = detune_sweep(graph, params, schedule, deltas, args.iters,
                         base_seed=args.seed, jobs=args.jobs)
    cfg = effective_config(params, schedule, args.iters, args.seed)
    lines = ["# " + json.dumps({"benchmark": args.file.stem, "params": cfg})]
    lines.append("delta,mean_deviation_deg")
    for delta, dev in sweep:
        lines.append(f"{repr(delta)},{repr(dev)}")
    _emit("\n".join(lines) + "\n", args.out)
    return 0


def _cmd_gen(args) -> int:
    instance = gen_planted(args.n, args.m, args.k, args.seed)
    args.out.write_text(write_dimacs(instance.graph))
    args.out.with_suffix(".json").write_text(planted_sidecar(instance) + "\n")
    print(
        f"wrote {args.out} ({args.n} vertices, {args.m} edges, "
        f"{args.k}-colorable by construction, seed {args.seed})",
        file=sys.stderr,
    )
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="pottsim",
        description="Coupled-oscillator Potts machine simulator for graph K-coloring",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("solve", help="multi-restart solve of one DIMACS .col file")
    p.add_argument("file", type=Path)
    _add_run_flags(p)
    _add_dynamics_flags(p)
    p.set_defaults(func=_cmd_solve)

    p = sub.add_parser("bench", help="solve every .col file in a directory, emit a summary")
    p.add_argument("directory", type=Path)
    _add_run_flags(p)
    _add_dynamics_flags(p)
    p.set_defaults(func=_cmd_bench)

    p = sub.add_parser("ablate", help="solve with one subsystem disabled")
    p.add_argument("file", type=Path)
    p.add_argument("--mode", required=True,
                   choices=[m.value for m in AblationMode])
    _add_run_flags(p)
    _add_dynamics_flags(p)
    p.set_defaults(func=_cmd_ablate)

    p = sub.add_parser("landscape", help="enumerate the full lattice energy landscape")
    p.add_argument("file", type=Path)
    p.add_argument("--n-phases", type=int, default=None)
    p.add_argument("--out", type=Path, default=None)
    p.set_defaults(func=_cmd_landscape)

    p = sub.add_parser("detune", help="lattice-deviation sweep over SHIL detuning rates")
    p.add_argument("file", type=Path)
    p.add_argument("--deltas", default=DEFAULT_DELTAS,
                   help="comma-separated detuning rates (rad/cycle)")
    _add_run_flags(p, default_iters=10)
    _add_dynamics_flags(p)
    p.set_defaults(func=_cmd_detune)

    p = sub.add_parser("gen", help="generate a planted K-colorable instance")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--k", type=int, default=3)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", type=Path, required=True)
    p.set_defaults(func=_cmd_gen)

    return parser


def main(argv=None) -> int:
    try:
        args = build_parser().parse_args(argv)
    except SystemExit as exc:
        return int(exc.code) if exc.code is not None else 0
    try:
        return args.func(args)
    except (DimacsError, IntegrationDivergedError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


def entrypoint():
    sys.exit(main())


if __name__ == "__main__":
    entrypoint()
