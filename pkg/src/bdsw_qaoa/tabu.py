"""Tenure-gated single-flip Tabu search used as the classical preprocessing stage."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import ConfigError, TenureError
from .qubo import FlipState, QuboProblem, all_flip_costs, apply_flip, as_assignment, evaluate

MOVE_RULES = ("best", "literal")
TIE_BREAKS = ("random", "index")


@dataclass(frozen=True)
class TabuConfig:
    """Tabu search settings.

    ``rule="best"`` flips the non-tabu variable with the most negative flip
    cost.  ``rule="literal"`` flips the non-tabu variable with the largest
    ``|flip cost|``, which may worsen the objective; it is kept only for
    comparison runs.

    Equal-valued candidate moves are resolved uniformly at random from
    ``seed`` (``tie_break="random"``) or by lowest index.  Integer-weighted
    problems produce many ties, and index tie-breaking then cycles early.
    """

    iterations: int
    tenure: int
    seed: int | None = 0
    rule: str = "best"
    tie_break: str = "random"

    def __post_init__(self):
        if self.iterations < 1:
            raise ConfigError("tabu iterations must be >= 1")
        if self.tenure < 0:
            raise ConfigError("tabu tenure must be >= 0")
        if self.tenure > self.iterations:
            raise ConfigError(f"tenure {self.tenure} exceeds iterations {self.iterations}")
        if self.rule not in MOVE_RULES:
            raise ConfigError(f"unknown move rule {self.rule!r}")
        if self.tie_break not in TIE_BREAKS:
            raise ConfigError(f"unknown tie-break {self.tie_break!r}")

    @classmethod
    def default(cls, n: int, seed: int | None = 0, **overrides) -> TabuConfig:
        """``T = 20 n`` iterations and tenure ``min(20, ceil(n / 10))``.

        The tenure is also capped at ``n - 1`` so at least one variable is
        always free.
        """
        params = {"iterations": 20 * n, "tenure": min(20, math.ceil(n / 10), max(n - 1, 0))}
        params.update({k: v for k, v in overrides.items() if v is not None})
        return cls(seed=seed, **params)


@dataclass
class TabuOutcome:
    best_assignment: np.ndarray
    best_cost: float
    final_flip_costs: np.ndarray
    iterations_run: int
    moves: np.ndarray
    aspirated: np.ndarray
    cost_trace: np.ndarray


def random_assignment(n: int, seed=None) -> np.ndarray:
    if n < 1:
        raise ValueError("n must be >= 1")
    return np.random.default_rng(seed).integers(0, 2, size=n, dtype=np.uint8)


def _pick(score: np.ndarray, rng: np.random.Generator | None) -> int:
    """Index of the smallest finite score, ties by ``rng`` or lowest index."""
    j = int(np.argmin(score))
    if rng is None:
        return j
    ties = np.flatnonzero(score == score[j])
    return int(ties[rng.integers(ties.size)]) if ties.size > 1 else j


def _select(rule: str, dc: np.ndarray, free: np.ndarray, aspire: np.ndarray, rng) -> int:
    if rule == "literal" and free.any():
        return _pick(np.where(free, -np.abs(dc), np.inf), rng)
    allowed = free | aspire if rule == "best" else aspire
    if not allowed.any():
        return -1
    return _pick(np.where(allowed, dc, np.inf), rng)


def run_tabu(problem: QuboProblem, x0, config: TabuConfig) -> TabuOutcome:
    """Run ``config.iterations`` tabu moves from ``x0`` and return the best assignment visited.

    A tabu variable may still be flipped when doing so yields a new best cost
    (aspiration).  Raises :class:`TenureError` if no move is admissible.
    """
    n = problem.n
    if n < 1:
        raise ValueError("problem has no variables")
    state = FlipState.start(problem, as_assignment(x0, n))
    tenure = np.zeros(n, dtype=np.int64)
    best_cost = state.cost
    best_x = state.x.copy()
    T = config.iterations
    moves = np.empty(T, dtype=np.int64)
    aspirated = np.zeros(T, dtype=bool)
    trace = np.empty(T)
    rng = np.random.default_rng(config.seed) if config.tie_break == "random" else None

    for t in range(T):
        dc = state.flip_costs
        free = tenure == 0
        aspire = ~free & (state.cost + dc < best_cost)
        j = _select(config.rule, dc, free, aspire, rng)
        if j < 0:
            raise TenureError(
                f"iteration {t}: all {n} variables are tabu (tenure {config.tenure}) and none aspirates"
            )
        aspirated[t] = not free[j]
        apply_flip(problem, state, j)
        tenure[tenure > 0] -= 1
        tenure[j] = config.tenure
        moves[t] = j
        if state.cost < best_cost:
            best_cost = state.cost
            best_x = state.x.copy()
        trace[t] = best_cost

    return TabuOutcome(
        best_assignment=best_x,
        best_cost=evaluate(problem, best_x),
        final_flip_costs=all_flip_costs(problem, best_x),
        iterations_run=T,
        moves=moves,
        aspirated=aspirated,
        cost_trace=trace,
    )
