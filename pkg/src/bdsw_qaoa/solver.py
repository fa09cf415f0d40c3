"""End-to-end backbone-driven sliding-window solve."""

from __future__ import annotations

import math
import time
from dataclasses import asdict, dataclass, field
from typing import Any

import numpy as np

from .errors import ConfigError
from .graphs import WeightedGraph, cut_value, maxcut_to_qubo
from .qaoa import QaoaConfig, bitstring, solve_subqubo
from .qubo import QuboProblem, evaluate
from .tabu import TabuConfig, TabuOutcome, random_assignment, run_tabu
from .window import build_subqubo, iterate_windows, lift_solution, select_backbone

SUBSOLVERS = ("qaoa", "exact", "tabu-only")


@dataclass(frozen=True)
class SolverConfig:
    """Knobs for :func:`bdsw_solve`.

    ``tabu=None`` picks :meth:`TabuConfig.default` for the problem size.
    ``backbone_k`` overrides ``backbone_fraction``.  ``cycles > 1`` re-runs
    Tabu from the incumbent and re-ranks the backbone before each extra pass.
    """

    tabu: TabuConfig | None = None
    backbone_fraction: float = 0.25
    backbone_k: int | None = None
    window_size: int = 15
    qaoa: QaoaConfig = field(default_factory=QaoaConfig)
    seed: int = 0
    subsolver: str = "qaoa"
    cycles: int = 1
    restarts: int = 1

    def __post_init__(self):
        if self.subsolver not in SUBSOLVERS:
            raise ConfigError(f"unknown subsolver {self.subsolver!r}; choose from {SUBSOLVERS}")
        if not 0.0 < self.backbone_fraction <= 1.0:
            raise ConfigError("backbone fraction must lie in (0, 1]")
        if self.window_size < 1:
            raise ConfigError("window size must be >= 1")
        if self.window_size > self.qaoa.capacity:
            raise ConfigError(f"window size {self.window_size} exceeds qubit capacity {self.qaoa.capacity}")
        if self.cycles < 1 or self.restarts < 1:
            raise ConfigError("cycles and restarts must be >= 1")

    def backbone_size(self, n: int) -> int:
        if self.window_size > n:
            raise ConfigError(f"window size {self.window_size} exceeds problem size {n}")
        if self.backbone_k is not None:
            k = self.backbone_k
        else:
            k = max(self.window_size, math.floor(self.backbone_fraction * n + 0.5))
        if not self.window_size <= k <= n:
            raise ConfigError(f"backbone size {k} must lie in [{self.window_size}, {n}]")
        return k

    def tabu_for(self, n: int) -> TabuConfig:
        return self.tabu or TabuConfig.default(n, seed=self.seed)


@dataclass
class WindowRecord:
    cycle: int
    start: int
    indices: list[int]
    sub_solution: str
    sub_energy: float
    incumbent_sub_energy: float
    expectation: float
    gammas: list[float] | None
    betas: list[float] | None
    lifted_cost: float
    accepted: bool
    cost_after: float


@dataclass
class RunReport:
    best_assignment: np.ndarray
    best_cost: float
    initial_tabu_cost: float
    windows: list[WindowRecord]
    cost_trajectory: list[float]
    timings: dict[str, float]
    config: dict[str, Any]
    n: int
    k: int
    seed: int
    subsolver: str
    cut_value: float | None = None
    optimal_cut: float | None = None
    approximation_ratio: float | None = None

    @property
    def accepted_windows(self) -> int:
        return sum(w.accepted for w in self.windows)

    def check_monotone(self) -> None:
        """Raise ``AssertionError`` unless accepted costs strictly decrease."""
        traj = self.cost_trajectory
        for a, b in zip(traj, traj[1:]):
            if not b < a:
                raise AssertionError(f"cost trajectory not strictly decreasing: {a} -> {b}")
        if traj and traj[-1] != self.best_cost:
            raise AssertionError("final trajectory entry differs from best_cost")

    def to_dict(self) -> dict[str, Any]:
        out = asdict(self)
        out["best_assignment"] = "".join(map(str, self.best_assignment.tolist()))
        if self.cut_value is None:
            for key in ("cut_value", "optimal_cut", "approximation_ratio"):
                out.pop(key)
        return out


def approximation_ratio(achieved_cut: float, optimal_cut: float) -> float:
    if optimal_cut <= 0:
        raise ValueError(f"optimal cut must be positive, got {optimal_cut}")
    ratio = achieved_cut / optimal_cut
    if 1.0 < ratio <= 1.0 + 1e-9:
        ratio = 1.0
    return ratio


def _config_echo(config: SolverConfig, tabu: TabuConfig, k: int) -> dict[str, Any]:
    echo = asdict(config)
    echo["tabu"] = asdict(tabu)
    echo["backbone_k"] = k
    return echo


def _preprocess(problem: QuboProblem, tabu: TabuConfig, restarts: int, seed: int) -> TabuOutcome:
    best = None
    for r in range(restarts):
        x0 = random_assignment(problem.n, np.random.default_rng([seed, 0, r]))
        outcome = run_tabu(problem, x0, tabu)
        if best is None or outcome.best_cost < best.best_cost:
            best = outcome
    return best


def bdsw_solve(problem: QuboProblem, config: SolverConfig | None = None) -> RunReport:
    """Tabu preprocessing, backbone ranking, then sliding-window sub-QUBO solves.

    A window's solution replaces the incumbent only if the full objective
    strictly decreases.
    """
    config = config or SolverConfig()
    n = problem.n
    if n < 1:
        raise ConfigError("problem has no variables")
    k = config.backbone_size(n)
    tabu = config.tabu_for(n)
    qcfg = config.qaoa
    if config.subsolver == "exact" and not qcfg.exact:
        qcfg = QaoaConfig(qcfg.depth, qcfg.shots, qcfg.capacity, qcfg.optimizer, exact=True)

    timings = {"tabu": 0.0, "windows": 0.0}
    t_start = time.perf_counter()
    outcome = _preprocess(problem, tabu, config.restarts, config.seed)
    timings["tabu"] += time.perf_counter() - t_start

    incumbent = outcome.best_assignment.copy()
    f_best = outcome.best_cost
    initial = f_best
    trajectory = [f_best]
    records: list[WindowRecord] = []

    for cycle in range(config.cycles):
        if cycle:
            t0 = time.perf_counter()
            outcome = run_tabu(problem, incumbent, tabu)
            timings["tabu"] += time.perf_counter() - t0
            if outcome.best_cost < f_best:
                incumbent, f_best = outcome.best_assignment.copy(), outcome.best_cost
                trajectory.append(f_best)
        if config.subsolver == "tabu-only":
            break
        backbone = select_backbone(outcome.final_flip_costs, k)
        t0 = time.perf_counter()
        for window in iterate_windows(backbone, config.window_size):
            sub = build_subqubo(problem, incumbent, window)
            res = solve_subqubo(sub, qcfg, seed=np.random.default_rng([config.seed, 1, cycle, window.start]))
            candidate = lift_solution(incumbent, window, res.best_bitstring)
            cost = evaluate(problem, candidate)
            accepted = cost < f_best
            if accepted:
                incumbent, f_best = candidate, cost
                trajectory.append(f_best)
            records.append(
                WindowRecord(
                    cycle=cycle,
                    start=window.start,
                    indices=window.positions.tolist(),
                    sub_solution=bitstring(res.best_index, sub.n),
                    sub_energy=res.best_energy,
                    incumbent_sub_energy=sub.inner.evaluate(sub.restriction()),
                    expectation=res.expectation,
                    gammas=list(res.params.gammas) if res.params else None,
                    betas=list(res.params.betas) if res.params else None,
                    lifted_cost=cost,
                    accepted=bool(accepted),
                    cost_after=f_best,
                )
            )
        timings["windows"] += time.perf_counter() - t0

    timings["total"] = time.perf_counter() - t_start
    return RunReport(
        best_assignment=incumbent,
        best_cost=f_best,
        initial_tabu_cost=initial,
        windows=records,
        cost_trajectory=trajectory,
        timings=timings,
        config=_config_echo(config, tabu, k),
        n=n,
        k=k,
        seed=config.seed,
        subsolver=config.subsolver,
    )


def solve_maxcut(graph: WeightedGraph, config: SolverConfig | None = None, optimal: float | None = None) -> RunReport:
    """Run :func:`bdsw_solve` on the Max-Cut encoding and attach cut statistics."""
    report = bdsw_solve(maxcut_to_qubo(graph), config)
    report.cut_value = cut_value(graph, report.best_assignment)
    if optimal is not None:
        report.optimal_cut = float(optimal)
        report.approximation_ratio = approximation_ratio(report.cut_value, optimal)
    return report
