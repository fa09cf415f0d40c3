"""Command-line entry point: ``solve``, ``bench`` and ``oracle`` on rudy graph files.

Exit codes: 0 success, 1 user error (bad file, flags or configuration),
2 runtime failure.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import logging
import statistics
import sys
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path

from .errors import BdswError, CapacityError, ConfigError, ParseError
from .graphs import WeightedGraph, load_rudy
from .oracle import MAX_VARIABLES, brute_force_maxcut
from .qaoa import DEFAULT_CAPACITY, DEFAULT_SHOTS, OptimizerConfig, QaoaConfig
from .solver import SUBSOLVERS, RunReport, SolverConfig, solve_maxcut
from .tabu import MOVE_RULES, TIE_BREAKS, TabuConfig

log = logging.getLogger("bdsw_qaoa")

SUMMARY_FIELDS = [
    "instance", "seed", "num_vertices", "num_edges", "backbone_k", "subsolver",
    "qubo_cost", "cut_value", "optimal_cut", "approximation_ratio",
    "initial_tabu_cost", "accepted_windows", "windows",
]
BENCH_FIELDS = [
    "instance", "runs", "optimal_cut",
    "cut_min", "cut_median", "cut_max",
    "ratio_min", "ratio_median", "ratio_max",
]


class UserError(Exception):
    pass


def _solver_flags(p: argparse.ArgumentParser) -> None:
    g = p.add_argument_group("solver")
    g.add_argument("--tabu-iters", type=int, help="Tabu iterations T (default 20 n)")
    g.add_argument("--tenure", type=int, help="tabu tenure (default min(20, ceil(n/10)))")
    g.add_argument("--tabu-rule", choices=MOVE_RULES, default="best")
    g.add_argument("--tie-break", choices=TIE_BREAKS, default="random")
    g.add_argument("--restarts", type=int, default=1, help="independent Tabu starts, best kept")
    g.add_argument("--backbone-frac", type=float, default=0.25)
    g.add_argument("--backbone-k", type=int, help="backbone size; overrides --backbone-frac")
    g.add_argument("--window-size", type=int, default=15)
    g.add_argument("--depth", type=int, default=1, help="QAOA layers p")
    g.add_argument("--shots", type=int, default=DEFAULT_SHOTS)
    g.add_argument("--capacity", type=int, default=DEFAULT_CAPACITY, help="qubit capacity")
    g.add_argument("--grid", type=int, default=16, help="angle grid points per axis for p = 1")
    g.add_argument("--subsolver", choices=SUBSOLVERS, default="qaoa")
    g.add_argument("--cycles", type=int, default=1, help="outer Tabu/window passes (extension; 1 = single pass)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="bdsw-qaoa", description=__doc__.splitlines()[0])
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    solve = sub.add_parser("solve", help="solve one Max-Cut instance")
    solve.add_argument("instance", type=Path)
    _solver_flags(solve)
    solve.add_argument("--seed", type=int, default=0)
    solve.add_argument("--optimal", type=float, help="known optimum cut, enables the approximation ratio")
    solve.add_argument("--out", type=Path)
    solve.add_argument("--format", choices=("json", "csv"), default="json")

    bench = sub.add_parser("bench", help="repeated seeded solves over instances")
    bench.add_argument("instances", type=Path, nargs="+")
    _solver_flags(bench)
    bench.add_argument("--reps", type=int, default=20)
    bench.add_argument("--seed", type=int, default=0, help="seed of the first repetition")
    bench.add_argument(
        "--optimal", action="append", default=[], metavar="[NAME=]VALUE",
        help="known optimum, keyed by file name or stem; a bare value needs a single instance",
    )
    bench.add_argument("--workers", type=int, default=1)
    bench.add_argument("--out", type=Path)
    bench.add_argument("--format", choices=("json", "csv"), default="csv")

    oracle = sub.add_parser("oracle", help=f"exact max cut for up to {MAX_VARIABLES} vertices")
    oracle.add_argument("instance", type=Path)
    oracle.add_argument("--format", choices=("text", "json"), default="text")
    return parser


def config_from_args(args, seed: int, n: int) -> SolverConfig:
    """Solver configuration for an instance with ``n`` vertices (Tabu defaults scale with n)."""
    tabu = TabuConfig.default(
        n, seed=seed, iterations=args.tabu_iters, tenure=args.tenure, rule=args.tabu_rule, tie_break=args.tie_break
    )
    qaoa = QaoaConfig(
        depth=args.depth,
        shots=args.shots,
        capacity=args.capacity,
        optimizer=OptimizerConfig(grid=args.grid),
    )
    return SolverConfig(
        tabu=tabu,
        backbone_fraction=args.backbone_frac,
        backbone_k=args.backbone_k,
        window_size=args.window_size,
        qaoa=qaoa,
        seed=seed,
        subsolver=args.subsolver,
        cycles=args.cycles,
        restarts=args.restarts,
    )


def load_instance(path: Path) -> WeightedGraph:
    if not path.is_file():
        raise UserError(f"instance file not found: {path}")
    return load_rudy(path)


def report_dict(report: RunReport, instance: Path, graph: WeightedGraph) -> dict:
    out = {"instance": str(instance), "num_vertices": graph.num_vertices, "num_edges": graph.num_edges}
    out.update(report.to_dict())
    out["qubo_cost"] = out.pop("best_cost")
    return out


def summary_row(report: RunReport, instance: Path, graph: WeightedGraph) -> dict:
    return {
        "instance": str(instance),
        "seed": report.seed,
        "num_vertices": graph.num_vertices,
        "num_edges": graph.num_edges,
        "backbone_k": report.k,
        "subsolver": report.subsolver,
        "qubo_cost": report.best_cost,
        "cut_value": report.cut_value,
        "optimal_cut": report.optimal_cut,
        "approximation_ratio": report.approximation_ratio,
        "initial_tabu_cost": report.initial_tabu_cost,
        "accepted_windows": report.accepted_windows,
        "windows": len(report.windows),
    }


def _csv_text(rows: list[dict], fields: list[str]) -> str:
    buf = io.StringIO()
    writer = csv.DictWriter(buf, fieldnames=fields, lineterminator="\n")
    writer.writeheader()
    for row in rows:
        writer.writerow({k: ("" if row.get(k) is None else row[k]) for k in fields})
    return buf.getvalue()


def _emit(text: str, out: Path | None) -> None:
    if out is None:
        sys.stdout.write(text)
    else:
        out.write_text(text)
        log.info("wrote %s", out)


def cmd_solve(args) -> int:
    graph = load_instance(args.instance)
    cfg = config_from_args(args, args.seed, graph.num_vertices)
    report = solve_maxcut(graph, cfg, optimal=args.optimal)
    report.check_monotone()
    if args.format == "json":
        text = json.dumps(report_dict(report, args.instance, graph), indent=2) + "\n"
    else:
        text = _csv_text([summary_row(report, args.instance, graph)], SUMMARY_FIELDS)
    _emit(text, args.out)
    return 0


def parse_optima(values: list[str], instances: list[Path]) -> dict[Path, float]:
    optima: dict[Path, float] = {}
    for item in values:
        name, sep, raw = item.rpartition("=")
        try:
            value = float(raw)
        except ValueError:
            raise UserError(f"bad --optimal value {item!r}") from None
        if value <= 0:
            raise UserError(f"optimum must be positive: {item!r}")
        if not sep:
            if len(instances) != 1:
                raise UserError("a bare --optimal value needs exactly one instance")
            optima[instances[0]] = value
            continue
        matches = [p for p in instances if name in (str(p), p.name, p.stem)]
        if not matches:
            raise UserError(f"--optimal {item!r} matches no instance")
        for p in matches:
            optima[p] = value
    return optima


def _bench_job(job):
    path, seed, optimal, args = job
    graph = load_rudy(path)
    cfg = config_from_args(args, seed, graph.num_vertices)
    report = solve_maxcut(graph, cfg, optimal=optimal)
    report.check_monotone()
    row = summary_row(report, path, graph)
    row["total_seconds"] = report.timings["total"]
    return row


def aggregate(rows: list[dict]) -> list[dict]:
    out = []
    for inst in dict.fromkeys(r["instance"] for r in rows):
        group = [r for r in rows if r["instance"] == inst]
        cuts = [r["cut_value"] for r in group]
        ratios = [r["approximation_ratio"] for r in group if r["approximation_ratio"] is not None]
        entry = {
            "instance": inst,
            "runs": len(group),
            "optimal_cut": group[0]["optimal_cut"],
            "cut_min": min(cuts),
            "cut_median": statistics.median(cuts),
            "cut_max": max(cuts),
        }
        if ratios:
            entry.update(ratio_min=min(ratios), ratio_median=statistics.median(ratios), ratio_max=max(ratios))
        out.append(entry)
    return out


def cmd_bench(args) -> int:
    if args.reps < 1:
        raise UserError("--reps must be >= 1")
    for path in args.instances:
        load_instance(path)
    optima = parse_optima(args.optimal, args.instances)
    jobs = [(p, args.seed + r, optima.get(p), args) for p in args.instances for r in range(args.reps)]
    if args.workers > 1:
        with ProcessPoolExecutor(args.workers) as pool:
            rows = list(pool.map(_bench_job, jobs))
    else:
        rows = [_bench_job(job) for job in jobs]
    rows.sort(key=lambda r: (args.instances.index(Path(r["instance"])), r["seed"]))
    summary = aggregate(rows)
    if args.format == "json":
        text = json.dumps({"summary": summary, "runs": rows}, indent=2) + "\n"
    else:
        text = _csv_text(summary, BENCH_FIELDS)
    _emit(text, args.out)
    return 0


def cmd_oracle(args) -> int:
    graph = load_instance(args.instance)
    best, witness = brute_force_maxcut(graph)
    part = "".join(map(str, witness.tolist()))
    if args.format == "json":
        print(json.dumps({"instance": str(args.instance), "max_cut": best, "partition": part}))
    else:
        print(f"max_cut={best:g}")
        print(f"partition={part}")
    return 0


COMMANDS = {"solve": cmd_solve, "bench": cmd_bench, "oracle": cmd_oracle}


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 0 if exc.code == 0 else 1
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(levelname)s %(message)s")
    try:
        return COMMANDS[args.command](args)
    except (UserError, ParseError, ConfigError, CapacityError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except BdswError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except Exception as exc:  # noqa: BLE001
        log.debug("unhandled failure", exc_info=True)
        print(f"runtime error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
