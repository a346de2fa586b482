"""Command-line interface.

Subcommands: ``check`` (robustness properties of a graph), ``gen-graph``
(write circulant graphs to disk), ``run`` (simulate a JSON configuration),
``scenario`` (run a built-in scenario), and ``sweep`` (grid of circulant
configurations).

Machine-readable results go to stdout as JSON (CSV for sweep); progress and
errors go to stderr.  Exit codes: 0 verdict-true/converged, 1 verdict-false/
not-converged, 2 usage or configuration error, 3 scenario precondition
failure.  The environment variable RCL_ENUM_CAP overrides the default
enumeration caps of the brute-force checkers.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
import time
from pathlib import Path

from .graph import (
    Digraph,
    GraphError,
    load_graph,
    make_k_circulant,
    make_undirected_circulant,
    save_graph,
    save_graph_json,
)
from .protocol import ConfigError, Leader, ReferenceSignal
from .robustness import (
    EnumerationCapError,
    circulant_certificate,
    is_r_robust,
    is_rs_robust,
    is_strongly_r_robust_bruteforce,
    is_strongly_r_robust_peeling,
    is_tlf_robust_bruteforce,
    is_tlf_robust_peeling,
    max_r_robustness,
)
from .scenarios import (
    SCENARIO_NAMES,
    PreconditionError,
    ScenarioError,
    build_scenario,
)
from .simulation import (
    SimConfig,
    compute_metrics,
    config_from_dict,
    config_to_dict,
    metrics_to_dict,
    run as run_simulation,
    write_edges_csv,
    write_trajectory_csv,
)
from .svgplot import write_trajectory_svg


def _log(message: str) -> None:
    print(message, file=sys.stderr)


def _emit(obj) -> None:
    print(json.dumps(obj, indent=2))


def parse_id_set(text: str) -> list[int]:
    """Parse agent id lists like "1,4,5" or "22-28" (ranges inclusive)."""
    ids: set[int] = set()
    for part in text.split(","):
        part = part.strip()
        if not part:
            continue
        if "-" in part[1:]:
            lo_text, hi_text = part.split("-", 1)
            lo, hi = int(lo_text), int(hi_text)
            if hi < lo:
                raise ValueError(f"empty id range {part!r}")
            ids.update(range(lo, hi + 1))
        else:
            ids.add(int(part))
    if not ids:
        raise ValueError(f"no agent ids in {text!r}")
    return sorted(ids)


def _parse_int_list(text: str) -> list[int]:
    if not text.strip():
        return []
    return parse_id_set(text)


def _env_cap() -> int | None:
    raw = os.environ.get("RCL_ENUM_CAP")
    if raw is None:
        return None
    try:
        return int(raw)
    except ValueError:
        raise ConfigError(f"RCL_ENUM_CAP must be an integer, got {raw!r}") from None


def _graph_from_args(args) -> Digraph:
    if args.graph is not None:
        path = Path(args.graph)
        if path.suffix == ".json":
            from .graph import load_graph_json

            return load_graph_json(path)
        return load_graph(path)
    if args.circulant is not None:
        n, k = args.circulant
        return make_k_circulant(n, k)
    n, offsets_text = args.undirected_circulant
    return make_undirected_circulant(int(n), parse_id_set(offsets_text))


# ---------------------------------------------------------------------------
# check


def cmd_check(args) -> int:
    graph = None
    if args.certificate is None or args.graph is not None:
        graph = _graph_from_args(args)
    cap = args.cap if args.cap is not None else _env_cap()
    started = time.perf_counter()

    if args.r_robust is not None:
        report = is_r_robust(graph, args.r_robust, cap=cap, force=args.force)
    elif args.rs_robust is not None:
        r, s = args.rs_robust
        report = is_rs_robust(graph, r, s, cap=cap, force=args.force)
    elif args.strong is not None:
        if args.set is None:
            raise ConfigError("--strong requires --set")
        ids = parse_id_set(args.set)
        if args.method == "bruteforce":
            report = is_strongly_r_robust_bruteforce(graph, ids, args.strong, cap=cap, force=args.force)
        else:
            report = is_strongly_r_robust_peeling(graph, ids, args.strong)
    elif args.tlf is not None:
        if args.set is None:
            raise ConfigError("--tlf requires --set")
        ids = parse_id_set(args.set)
        if args.method == "bruteforce":
            report = is_tlf_robust_bruteforce(graph, ids, args.tlf, cap=cap, force=args.force)
        else:
            report = is_tlf_robust_peeling(graph, ids, args.tlf)
    elif args.certificate is not None:
        if args.circulant is None:
            raise ConfigError("--certificate needs --circulant N K (window conditions use n and k)")
        if args.set is None or args.f is None:
            raise ConfigError("--certificate requires --set and --f")
        n, k = args.circulant
        report = circulant_certificate(n, k, parse_id_set(args.set), args.f, args.certificate)
    else:
        value = max_r_robustness(graph, cap=cap, force=args.force)
        elapsed = 1000.0 * (time.perf_counter() - started)
        _emit({"property": "max_r_robustness", "params": {}, "value": value,
               "elapsed_ms": round(elapsed, 3)})
        return 0

    elapsed = 1000.0 * (time.perf_counter() - started)
    payload = report.to_json()
    payload["elapsed_ms"] = round(elapsed, 3)
    _emit(payload)
    return 0 if report.verdict else 1


# ---------------------------------------------------------------------------
# gen-graph


def cmd_gen_graph(args) -> int:
    graph = _graph_from_args(args)
    if args.format == "json":
        save_graph_json(graph, args.output)
    else:
        save_graph(graph, args.output)
    _log(f"wrote {args.format} graph with n={graph.n}, {len(graph.edges)} edges to {args.output}")
    return 0


# ---------------------------------------------------------------------------
# run / scenario bundles


def _write_bundle(out_dir: Path, traj, metrics, report: dict, title: str) -> None:
    out_dir.mkdir(parents=True, exist_ok=True)
    write_trajectory_csv(traj, out_dir / "trajectory.csv")
    if traj.edge_values:
        write_edges_csv(traj, out_dir / "edges.csv")
    (out_dir / "metrics.json").write_text(json.dumps(metrics_to_dict(metrics), indent=2) + "\n")
    write_trajectory_svg(traj, out_dir / "plot.svg", title=title)
    (out_dir / "report.json").write_text(json.dumps(report, indent=2) + "\n")
    _log(f"bundle written to {out_dir}/")


def cmd_run(args) -> int:
    try:
        obj = json.loads(Path(args.config).read_text())
    except json.JSONDecodeError as exc:
        raise ConfigError(f"{args.config}: not valid JSON: {exc}") from None
    config = config_from_dict(obj)
    if args.seed is not None:
        config = config.with_seed(args.seed)
    traj = run_simulation(config, jobs=args.jobs)
    metrics = compute_metrics(traj, tol=args.tol)
    report = {
        "config": config_to_dict(config),
        "metrics": metrics_to_dict(metrics),
    }
    _write_bundle(Path(args.out), traj, metrics, report, title=Path(args.config).stem)
    _emit(report["metrics"])
    return 0 if metrics.converged else 1


def cmd_scenario(args) -> int:
    if args.list:
        _emit(list(SCENARIO_NAMES))
        return 0
    if args.name is None:
        raise ConfigError("scenario name required (or use --list)")
    scenario = build_scenario(args.name, f=args.f)
    result = scenario.run(seed=args.seed, horizon=args.horizon, jobs=args.jobs)
    report = {
        "scenario": scenario.name,
        "description": scenario.description,
        "seed": args.seed if args.seed is not None else scenario.default_seed,
        "preconditions": [
            {"name": p.name, "ok": p.ok, "detail": p.detail} for p in result.preconditions
        ],
        "expected": repr(scenario.expected),
        "outcome_ok": result.outcome_ok,
        "outcome_detail": result.outcome_detail,
        "metrics": metrics_to_dict(result.metrics),
    }
    out_dir = Path(args.out) if args.out else Path("out") / scenario.name
    _write_bundle(out_dir, result.trajectory, result.metrics, report, title=scenario.name)
    _emit(report)
    return 0 if result.metrics.converged else 1


# ---------------------------------------------------------------------------
# sweep


SWEEP_COLUMNS = [
    "n", "k", "f", "window_start", "window_size",
    "cert_strong", "cert_tlf", "peel_strong", "peel_tlf",
    "converged", "convergence_round", "final_error",
]


def _sweep_cell(n: int, k: int, f: int, start: int, size: int, horizon: int, seed: int) -> dict:
    graph = make_k_circulant(n, k)
    window = [((start - 1 + j) % n) + 1 for j in range(size)]
    cert_strong = circulant_certificate(n, k, window, f, "strong").verdict
    cert_tlf = circulant_certificate(n, k, window, f, "tlf").verdict
    peel_strong = is_strongly_r_robust_peeling(graph, window, 2 * f + 1).verdict
    peel_tlf = is_tlf_robust_peeling(graph, window, f).verdict
    config = SimConfig(
        graph=graph,
        f=f,
        horizon=horizon,
        roles={i: Leader() for i in window},
        reference=ReferenceSignal.constant(40.0),
        seed=seed,
    )
    metrics = compute_metrics(run_simulation(config), tol=1e-6)
    return {
        "n": n, "k": k, "f": f, "window_start": start, "window_size": size,
        "cert_strong": cert_strong, "cert_tlf": cert_tlf,
        "peel_strong": peel_strong, "peel_tlf": peel_tlf,
        "converged": metrics.converged,
        "convergence_round": metrics.convergence_round,
        "final_error": metrics.final_error,
    }


def cmd_sweep(args) -> int:
    ns = _parse_int_list(args.n)
    ks = _parse_int_list(args.k)
    fs = _parse_int_list(args.f)
    sizes = _parse_int_list(args.window_sizes)
    starts = _parse_int_list(args.window_starts)
    cells = [
        (n, k, f, start, size)
        for n in ns for k in ks for f in fs for size in sizes for start in starts
    ]
    valid = [(n, k, f, start, size) for n, k, f, start, size in cells
             if 1 <= k <= n - 1 and 1 <= size <= n and 1 <= start <= n]
    skipped = len(cells) - len(valid)
    if skipped:
        _log(f"skipping {skipped} structurally invalid grid cells")
    if len(valid) > args.cell_cap and not args.force:
        raise ConfigError(
            f"grid has {len(valid)} cells, above the cap {args.cell_cap}; use --force"
        )

    def job(cell):
        n, k, f, start, size = cell
        return _sweep_cell(n, k, f, start, size, args.horizon, args.seed)

    if args.jobs > 1 and valid:
        from concurrent.futures import ThreadPoolExecutor

        with ThreadPoolExecutor(max_workers=args.jobs) as pool:
            rows = list(pool.map(job, valid))
    else:
        rows = [job(cell) for cell in valid]

    buffer = io.StringIO()
    writer = csv.DictWriter(buffer, fieldnames=SWEEP_COLUMNS, lineterminator="\n")
    writer.writeheader()
    for row in rows:
        writer.writerow(row)
    text = buffer.getvalue()
    if args.output:
        Path(args.output).write_text(text)
        _log(f"wrote {len(rows)} rows to {args.output}")
    else:
        sys.stdout.write(text)
    return 0


# ---------------------------------------------------------------------------
# parser


def _add_graph_source(parser: argparse.ArgumentParser, required: bool = True) -> None:
    group = parser.add_mutually_exclusive_group(required=required)
    group.add_argument("--graph", metavar="FILE", help="edge-list or .json graph file")
    group.add_argument("--circulant", nargs=2, type=int, metavar=("N", "K"),
                       help="k-circulant digraph C_n(1..k)")
    group.add_argument("--undirected-circulant", nargs=2, metavar=("N", "OFFSETS"),
                       help="undirected circulant, offsets like '1,2'")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="rcl",
        description="Robustness certification and resilient leader-follower consensus simulation.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_check = sub.add_parser("check", help="decide a robustness property")
    _add_graph_source(p_check)
    props = p_check.add_mutually_exclusive_group(required=True)
    props.add_argument("--r-robust", type=int, metavar="R")
    props.add_argument("--rs-robust", nargs=2, type=int, metavar=("R", "S"))
    props.add_argument("--strong", type=int, metavar="R",
                       help="strong r-robustness w.r.t. --set")
    props.add_argument("--tlf", type=int, metavar="F",
                       help="TLF robustness with parameter F w.r.t. --set")
    props.add_argument("--certificate", choices=("strong", "tlf"),
                       help="circulant window certificate (needs --circulant, --set, --f)")
    props.add_argument("--max-r", action="store_true",
                       help="largest r for which the graph is r-robust")
    p_check.add_argument("--set", metavar="IDS", help="agent id set, e.g. '1,4,5' or '22-28'")
    p_check.add_argument("--f", type=int, help="F parameter for --certificate")
    p_check.add_argument("--method", choices=("peeling", "bruteforce"), default="peeling",
                         help="decision procedure for --strong/--tlf (default peeling)")
    p_check.add_argument("--cap", type=int, help="enumeration cap override")
    p_check.add_argument("--force", action="store_true", help="ignore enumeration caps")
    p_check.set_defaults(func=cmd_check)

    p_gen = sub.add_parser("gen-graph", help="write a circulant graph to a file")
    _add_graph_source(p_gen)
    p_gen.add_argument("-o", "--output", required=True, metavar="FILE")
    p_gen.add_argument("--format", choices=("edgelist", "json"), default="edgelist")
    p_gen.set_defaults(func=cmd_gen_graph)

    p_run = sub.add_parser("run", help="simulate a JSON configuration")
    p_run.add_argument("config", metavar="CONFIG.json")
    p_run.add_argument("--seed", type=int)
    p_run.add_argument("--tol", type=float, default=1e-6)
    p_run.add_argument("--out", default="out/run", metavar="DIR")
    p_run.add_argument("--jobs", type=int, default=1)
    p_run.set_defaults(func=cmd_run)

    p_scen = sub.add_parser("scenario", help="run a built-in scenario")
    p_scen.add_argument("name", nargs="?", choices=SCENARIO_NAMES)
    p_scen.add_argument("--f", type=int, help="F override for parametric scenarios")
    p_scen.add_argument("--seed", type=int)
    p_scen.add_argument("--horizon", type=int)
    p_scen.add_argument("--out", metavar="DIR")
    p_scen.add_argument("--jobs", type=int, default=1)
    p_scen.add_argument("--list", action="store_true", help="list scenario names")
    p_scen.set_defaults(func=cmd_scenario)

    p_sweep = sub.add_parser("sweep", help="grid of circulant leader-window configurations")
    p_sweep.add_argument("--n", required=True, help="agent counts, e.g. '10' or '10,12'")
    p_sweep.add_argument("--k", required=True, help="circulant parameters, e.g. '5-7'")
    p_sweep.add_argument("--f", required=True, help="F values")
    p_sweep.add_argument("--window-sizes", required=True, help="leader window sizes")
    p_sweep.add_argument("--window-starts", default="1", help="leader window start ids")
    p_sweep.add_argument("--horizon", type=int, default=200)
    p_sweep.add_argument("--seed", type=int, default=0)
    p_sweep.add_argument("-o", "--output", metavar="FILE", help="write CSV here instead of stdout")
    p_sweep.add_argument("--jobs", type=int, default=1)
    p_sweep.add_argument("--cell-cap", type=int, default=512)
    p_sweep.add_argument("--force", action="store_true")
    p_sweep.set_defaults(func=cmd_sweep)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except PreconditionError as exc:
        _log(f"precondition failure: {exc}")
        return 3
    except (GraphError, ConfigError, ScenarioError, EnumerationCapError, ValueError) as exc:
        _log(f"error: {exc}")
        return 2


if __name__ == "__main__":
    sys.exit(main())
