"""Backbone ranking, sliding windows and window-restricted sub-QUBOs."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator

import numpy as np

from .qubo import QuboProblem, as_assignment


@dataclass(frozen=True, eq=False)
class BackboneSet:
    """Variable indices ordered by descending ``|flip cost|``."""

    ordered_indices: np.ndarray

    @property
    def k(self) -> int:
        return len(self.ordered_indices)


@dataclass(frozen=True, eq=False)
class Window:
    """Contiguous slice ``backbone[start : start + size]`` of global indices."""

    start: int
    positions: np.ndarray

    @property
    def size(self) -> int:
        return len(self.positions)


@dataclass(frozen=True, eq=False)
class SubQubo:
    inner: QuboProblem
    index_map: np.ndarray
    base_assignment: np.ndarray

    @property
    def n(self) -> int:
        return self.inner.n

    def restriction(self) -> np.ndarray:
        """The incumbent's values on the window variables."""
        return self.base_assignment[self.index_map]


def select_backbone(flip_costs, k: int) -> BackboneSet:
    dc = np.asarray(flip_costs, dtype=float)
    if not 1 <= k <= dc.size:
        raise ValueError(f"backbone size k={k} outside [1, {dc.size}]")
    order = np.argsort(-np.abs(dc), kind="stable")[:k]
    return BackboneSet(order.astype(np.int64))


def iterate_windows(backbone: BackboneSet, size: int) -> Iterator[Window]:
    """Yield the ``k - size + 1`` stride-1 windows over the backbone."""
    k = backbone.k
    if not 1 <= size <= k:
        raise ValueError(f"window size {size} must be in [1, k={k}]")
    for m in range(k - size + 1):
        yield Window(m, backbone.ordered_indices[m : m + size])


def build_subqubo(problem: QuboProblem, x_star, window: Window | np.ndarray) -> SubQubo:
    """Restrict ``problem`` to the window with every other variable fixed at ``x_star``.

    Couplings to fixed variables fold into the linear terms; constants from
    fixed-fixed pairs are dropped.
    """
    x_star = as_assignment(x_star, problem.n)
    idx = np.asarray(window.positions if isinstance(window, Window) else window, dtype=np.int64)
    if len(np.unique(idx)) != len(idx):
        raise ValueError("window indices must be distinct")
    if idx.size and (idx.min() < 0 or idx.max() >= problem.n):
        raise ValueError("window index out of range")

    rows = problem.adjacency[idx]  # (n_w, n)
    block = rows[:, idx].toarray()
    fixed = x_star.astype(float)
    fixed[idx] = 0.0
    # d_a = sum over fixed j of Q_aj x*_j
    linear = problem.linear[idx] + rows @ fixed

    terms: dict[tuple[int, int], float] = {}
    for a, v in enumerate(linear):
        if v != 0.0:
            terms[(a, a)] = float(v)
    ia, ib = np.nonzero(np.triu(block, 1))
    for a, b in zip(ia.tolist(), ib.tolist()):
        terms[(a, b)] = float(block[a, b])
    return SubQubo(QuboProblem(len(idx), terms), idx, x_star.copy())


def lift_solution(x_global, window: Window | np.ndarray, y) -> np.ndarray:
    idx = np.asarray(window.positions if isinstance(window, Window) else window, dtype=np.int64)
    x = np.array(x_global, dtype=np.uint8, copy=True)
    y = as_assignment(y, len(idx))
    x[idx] = y
    return x
