import itertools
import os

import numpy as np
import pytest

from bdsw_qaoa import QuboProblem, WeightedGraph

ACCEPTANCE_LINES: list[str] = []


def random_qubo(rng: np.random.Generator, n: int, density: float = 0.6, integer: bool = False) -> QuboProblem:
    terms = {}
    for i in range(n):
        for j in range(i, n):
            if rng.random() < density:
                terms[(i, j)] = float(rng.integers(-5, 6)) if integer else float(rng.normal())
    return QuboProblem.from_terms(n, terms)


def random_graph(rng: np.random.Generator, n: int, p: float = 0.5, weights=(1.0,)) -> WeightedGraph:
    edges = [(i, j, float(rng.choice(weights))) for i in range(n) for j in range(i + 1, n) if rng.random() < p]
    return WeightedGraph(n, tuple(edges))


def all_assignments(n: int) -> np.ndarray:
    return np.array(list(itertools.product((0, 1), repeat=n)), dtype=np.uint8).reshape(-1, n)


def naive_min(problem: QuboProblem) -> float:
    """Direct enumeration with itertools, independent of the oracle module."""
    return min(problem.evaluate(x) for x in all_assignments(problem.n))


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


@pytest.fixture
def tiny():
    return QuboProblem(2, {(0, 0): 1.0, (0, 1): 2.0, (1, 1): 3.0})


@pytest.fixture
def triangle():
    return WeightedGraph(3, ((0, 1, 1.0), (1, 2, 1.0), (0, 2, 1.0)))


@pytest.fixture
def criterion():
    """Record one acceptance line; printed in the terminal summary."""

    def record(name: str, passed: bool, detail: str = "") -> None:
        ACCEPTANCE_LINES.append(f"[{'PASS' if passed else 'FAIL'}] {name}: {detail}")

    return record


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)


def pytest_collection_modifyitems(config, items):
    if os.environ.get("BDSW_RUN_SLOW") == "1":
        return
    skip = pytest.mark.skip(reason="full G-set run; set BDSW_RUN_SLOW=1 (nightly tier)")
    for item in items:
        if "slow" in item.keywords:
            item.add_marker(skip)
