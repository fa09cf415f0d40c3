"""Exhaustive ground-truth solvers for small QUBO and Max-Cut instances.

Both enumerate the leading ``H`` variables in Gray-code order, updating the
objective incrementally one flip at a time, while the trailing block of
variables is evaluated for all of its assignments at once with numpy.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import CapacityError
from .graphs import WeightedGraph
from .qubo import QuboProblem

MAX_VARIABLES = 24
_BLOCK = 14


@dataclass
class ExactSolution:
    best_assignment: np.ndarray
    best_cost: float
    is_unique: bool


def _block_bits(L: int) -> np.ndarray:
    """Row r holds the L-bit pattern of r with the first variable as the most significant bit."""
    r = np.arange(1 << L)
    return ((r[:, None] >> np.arange(L - 1, -1, -1)) & 1).astype(float)


def _gray_flips(H: int):
    """Yield the bit to flip at each step of a reflected Gray code over H bits."""
    for step in range(1, 1 << H):
        yield (step & -step).bit_length() - 1


class _Tracker:
    """Running minimum with tolerance-aware tie handling and lexicographic tie-break."""

    def __init__(self):
        self.value = np.inf
        self.key = -1
        self.count = 0

    def offer(self, values: np.ndarray, high_key: int, L: int):
        m = float(values.min())
        tol = 1e-9 * (1.0 + abs(min(m, self.value)))
        if m < self.value - tol:
            self.value, self.count, self.key = m, 0, -1
        elif m > self.value + tol:
            return
        hits = np.flatnonzero(values <= self.value + tol)
        self.count += hits.size
        key = (high_key << L) | int(hits[0])
        if self.key < 0 or key < self.key:
            self.key = key


def _split(n: int) -> tuple[int, int]:
    L = min(n, _BLOCK)
    return n - L, L


def _key_to_bits(key: int, n: int) -> np.ndarray:
    return np.array([(key >> (n - 1 - i)) & 1 for i in range(n)], dtype=np.uint8)


def brute_force_qubo(problem: QuboProblem) -> ExactSolution:
    """Global minimum by exhaustive enumeration; ties resolve to the lexicographically smallest x."""
    n = problem.n
    if n > MAX_VARIABLES:
        raise CapacityError(f"exhaustive search limited to {MAX_VARIABLES} variables, got {n}")
    if n == 0:
        return ExactSolution(np.zeros(0, dtype=np.uint8), 0.0, True)
    H, L = _split(n)
    Q = np.zeros((n, n))
    for (i, j), v in problem.coeffs.items():
        Q[i, j] = v
    sym = np.triu(Q, 1) + np.triu(Q, 1).T
    lin = np.diag(Q).copy()

    bits = _block_bits(L)
    lo = slice(H, n)
    low_energy = bits @ lin[lo] + np.einsum("ri,ij,rj->r", bits, np.triu(Q[lo, lo], 1), bits)
    cross = sym[:H, lo]  # couplings between leading and trailing blocks

    tracker = _Tracker()
    x_high = np.zeros(H)
    high_energy = 0.0
    field = np.zeros(L)  # sum over leading j of Q_ij x_j for trailing i
    high_key = 0
    tracker.offer(low_energy, 0, L)
    for b in _gray_flips(H):
        step = 1.0 - 2.0 * x_high[b]
        high_energy += step * (lin[b] + sym[b, :H] @ x_high)
        x_high[b] += step
        field += step * cross[b]
        high_key ^= 1 << (H - 1 - b)
        tracker.offer(low_energy + bits @ field + high_energy, high_key, L)

    x = _key_to_bits(tracker.key, n)
    return ExactSolution(x, problem.evaluate(x), tracker.count == 1)


def brute_force_maxcut(graph: WeightedGraph) -> tuple[float, np.ndarray]:
    """Maximum cut and a witness partition, by enumerating cuts directly."""
    n = graph.num_vertices
    if n > MAX_VARIABLES:
        raise CapacityError(f"exhaustive search limited to {MAX_VARIABLES} vertices, got {n}")
    if n == 0:
        return 0.0, np.zeros(0, dtype=np.uint8)
    H, L = _split(n)
    u, v, w = graph.edge_arrays()
    bits = _block_bits(L).astype(bool)

    inner = (u >= H) & (v >= H)
    low_cut = (bits[:, u[inner] - H] != bits[:, v[inner] - H]).astype(float) @ w[inner]
    # edges with exactly one endpoint in the leading block: weight counts when sides differ
    mixed = (u < H) & (v >= H)
    mixed_w = np.zeros((H, L))
    np.add.at(mixed_w, (u[mixed], v[mixed] - H), w[mixed])
    head = (u < H) & (v < H)

    tracker = _Tracker()
    x_high = np.zeros(H, dtype=bool)
    high_cut = 0.0
    side_weight = np.zeros(L)  # weight to leading vertices currently on side 1
    total_w = mixed_w.sum(axis=0)
    high_key = 0

    def crossing():
        # trailing vertex on side 0 is cut from leading vertices on side 1, and vice versa
        return (~bits) @ side_weight + bits @ (total_w - side_weight)

    tracker.offer(-(low_cut + crossing()), 0, L)
    for b in _gray_flips(H):
        # cut change inside the leading block from moving vertex b across
        nb = head & ((u == b) | (v == b))
        other = np.where(u[nb] == b, v[nb], u[nb])
        same = x_high[other] == x_high[b]
        high_cut += float(np.sum(np.where(same, w[nb], -w[nb])))
        x_high[b] = ~x_high[b]
        side_weight += mixed_w[b] if x_high[b] else -mixed_w[b]
        high_key ^= 1 << (H - 1 - b)
        tracker.offer(-(low_cut + crossing() + high_cut), high_key, L)

    x = _key_to_bits(tracker.key, n)
    return -tracker.value, x
