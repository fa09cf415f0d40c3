"""QUBO representation, objective and flip-cost evaluation, Ising conversion.

All solvers in this package *minimize*

    f(x) = sum_i Q_ii x_i + sum_{i<j} Q_ij x_i x_j,   x_i in {0, 1}

with Q stored as a sparse upper-triangular map.  Each unordered pair has a
single coefficient, so a symmetric matrix must be folded (Q_ij + Q_ji) before
it is stored.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from types import MappingProxyType
from typing import Iterable, Mapping

import numpy as np
from scipy import sparse

Pair = tuple[int, int]


def as_assignment(x, n: int) -> np.ndarray:
    """Validate a binary vector of length ``n`` and return it as ``uint8``."""
    arr = np.asarray(x)
    if arr.ndim != 1 or arr.shape[0] != n:
        raise ValueError(f"assignment has shape {arr.shape}, expected ({n},)")
    if arr.size and not np.isin(arr, (0, 1)).all():
        raise ValueError("assignment entries must be 0 or 1")
    return arr.astype(np.uint8, copy=False)


def _check_index(i: int, n: int) -> int:
    if not 0 <= i < n:
        raise ValueError(f"index {i} out of range for {n} variables")
    return int(i)


@dataclass(frozen=True, eq=False)
class QuboProblem:
    """Sparse upper-triangular QUBO over ``n`` binary variables.

    ``coeffs`` maps ``(i, j)`` with ``i <= j`` to a nonzero coefficient; the
    diagonal ``(i, i)`` holds the linear terms.  Use :meth:`from_terms` or
    :meth:`from_matrix` to build one from non-canonical input.
    """

    n: int
    coeffs: Mapping[Pair, float] = field(default_factory=dict)

    def __post_init__(self):
        if self.n < 0:
            raise ValueError("variable count must be non-negative")
        clean = {}
        for (i, j), v in self.coeffs.items():
            if not (0 <= i <= j < self.n):
                raise ValueError(f"key {(i, j)} violates 0 <= i <= j < {self.n}")
            if v == 0:
                raise ValueError(f"explicit zero coefficient at {(i, j)}")
            clean[(int(i), int(j))] = float(v)
        object.__setattr__(self, "coeffs", MappingProxyType(clean))

    @classmethod
    def from_terms(cls, n: int, terms: Mapping[Pair, float] | Iterable[tuple[Pair, float]]) -> QuboProblem:
        """Accumulate terms in any order; ``(j, i)`` is merged into ``(i, j)`` and zeros dropped."""
        items = terms.items() if isinstance(terms, Mapping) else terms
        acc: dict[Pair, float] = {}
        for (i, j), v in items:
            key = (min(i, j), max(i, j))
            acc[key] = acc.get(key, 0.0) + float(v)
        return cls(n, {k: v for k, v in acc.items() if v != 0.0})

    @classmethod
    def from_matrix(cls, Q) -> QuboProblem:
        """Build from a dense square matrix, reading it as ``x^T Q x``."""
        Q = np.asarray(Q, dtype=float)
        if Q.ndim != 2 or Q.shape[0] != Q.shape[1]:
            raise ValueError("QUBO matrix must be square")
        n = Q.shape[0]
        folded = np.triu(Q + Q.T, 1) + np.diag(np.diag(Q))
        rows, cols = np.nonzero(folded)
        return cls(n, {(int(i), int(j)): float(folded[i, j]) for i, j in zip(rows, cols)})

    def __getitem__(self, pair: Pair) -> float:
        i, j = pair
        return self.coeffs.get((min(i, j), max(i, j)), 0.0)

    def __len__(self) -> int:
        return len(self.coeffs)

    @cached_property
    def linear(self) -> np.ndarray:
        """Diagonal coefficients as a dense vector."""
        out = np.zeros(self.n)
        for (i, j), v in self.coeffs.items():
            if i == j:
                out[i] = v
        return out

    @cached_property
    def pairs(self) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        """Off-diagonal terms as ``(rows, cols, weights)`` arrays with rows < cols."""
        items = [(i, j, v) for (i, j), v in self.coeffs.items() if i != j]
        if not items:
            return np.zeros(0, dtype=np.int64), np.zeros(0, dtype=np.int64), np.zeros(0)
        rows, cols, vals = zip(*items)
        return np.array(rows, dtype=np.int64), np.array(cols, dtype=np.int64), np.array(vals, dtype=float)

    @cached_property
    def adjacency(self) -> sparse.csr_array:
        """Symmetric off-diagonal coupling matrix (one coefficient per direction)."""
        rows, cols, vals = self.pairs
        mat = sparse.coo_array(
            (np.concatenate([vals, vals]), (np.concatenate([rows, cols]), np.concatenate([cols, rows]))),
            shape=(self.n, self.n),
        )
        csr = mat.tocsr()
        csr.sort_indices()
        return csr

    def evaluate(self, x) -> float:
        return evaluate(self, x)


@dataclass(frozen=True, eq=False)
class IsingModel:
    """H(z) = sum_{i<j} J_ij z_i z_j + sum_i h_i z_i + offset, with z_i = 1 - 2 x_i."""

    n: int
    couplings: Mapping[Pair, float]
    fields: np.ndarray
    offset: float = 0.0

    def energy(self, z) -> float:
        z = np.asarray(z, dtype=float)
        if z.shape != (self.n,):
            raise ValueError(f"spin vector has shape {z.shape}, expected ({self.n},)")
        total = self.offset + float(self.fields @ z)
        for (i, j), J in self.couplings.items():
            total += J * z[i] * z[j]
        return total

    def energies(self, Z: np.ndarray) -> np.ndarray:
        """Vectorised energy over the rows of a spin matrix ``Z``."""
        Z = np.asarray(Z, dtype=float)
        out = self.offset + Z @ self.fields
        for (i, j), J in self.couplings.items():
            out = out + J * Z[:, i] * Z[:, j]
        return out


def to_spins(x) -> np.ndarray:
    return 1 - 2 * np.asarray(x, dtype=np.int64)


def evaluate(problem: QuboProblem, x) -> float:
    """Objective value f(x)."""
    x = as_assignment(x, problem.n).astype(float)
    rows, cols, vals = problem.pairs
    return float(problem.linear @ x + np.sum(vals * x[rows] * x[cols]))


def flip_cost(problem: QuboProblem, x, i: int) -> float:
    """Change in f from toggling bit ``i``: ``f(x with x_i flipped) - f(x)``."""
    x = as_assignment(x, problem.n)
    i = _check_index(i, problem.n)
    adj = problem.adjacency
    lo, hi = adj.indptr[i], adj.indptr[i + 1]
    local = problem.linear[i] + float(adj.data[lo:hi] @ x[adj.indices[lo:hi]])
    return (1 - 2 * int(x[i])) * local


def all_flip_costs(problem: QuboProblem, x) -> np.ndarray:
    x = as_assignment(x, problem.n)
    xf = x.astype(float)
    return (1.0 - 2.0 * xf) * (problem.linear + problem.adjacency @ xf)


@dataclass
class FlipState:
    """Current assignment with its cost and flip-cost vector, kept consistent by :func:`apply_flip`."""

    x: np.ndarray
    cost: float
    flip_costs: np.ndarray

    @classmethod
    def start(cls, problem: QuboProblem, x) -> FlipState:
        x = as_assignment(x, problem.n).copy()
        return cls(x, evaluate(problem, x), all_flip_costs(problem, x))

    def copy(self) -> FlipState:
        return FlipState(self.x.copy(), self.cost, self.flip_costs.copy())


def apply_flip(problem: QuboProblem, state: FlipState, i: int) -> FlipState:
    """Toggle bit ``i`` in place, updating cost and only the neighbours' flip costs."""
    i = _check_index(i, problem.n)
    adj = problem.adjacency
    lo, hi = adj.indptr[i], adj.indptr[i + 1]
    nbrs = adj.indices[lo:hi]
    step = 1.0 - 2.0 * state.x[i]  # change in x_i
    state.cost += state.flip_costs[i]
    state.flip_costs[i] = -state.flip_costs[i]
    state.flip_costs[nbrs] += (1.0 - 2.0 * state.x[nbrs]) * adj.data[lo:hi] * step
    state.x[i] ^= 1
    return state


def to_ising(problem: QuboProblem) -> IsingModel:
    """Substitute x_i = (1 - z_i)/2.

    Each pair term Q_ij x_i x_j contributes Q_ij/4 to J_ij, -Q_ij/4 to both
    fields and Q_ij/4 to the offset; each linear term contributes -Q_ii/2 to
    h_i and Q_ii/2 to the offset.
    """
    n = problem.n
    fields = -problem.linear / 2.0
    offset = float(problem.linear.sum()) / 2.0
    couplings: dict[Pair, float] = {}
    rows, cols, vals = problem.pairs
    for i, j, v in zip(rows.tolist(), cols.tolist(), vals.tolist()):
        couplings[(i, j)] = v / 4.0
        fields[i] -= v / 4.0
        fields[j] -= v / 4.0
        offset += v / 4.0
    return IsingModel(n, MappingProxyType(couplings), fields, offset)
