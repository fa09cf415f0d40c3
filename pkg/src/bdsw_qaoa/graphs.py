"""Weighted graphs in rudy (G-set) format and their Max-Cut QUBO encoding."""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, TextIO

import numpy as np

from .errors import ParseError
from .qubo import QuboProblem, as_assignment


@dataclass(frozen=True, eq=False)
class WeightedGraph:
    """Undirected graph with 0-indexed vertices and edges stored as ``u < v``."""

    num_vertices: int
    edges: tuple[tuple[int, int, float], ...]

    def __post_init__(self):
        if self.num_vertices < 0:
            raise ValueError("vertex count must be non-negative")
        seen = set()
        for u, v, _ in self.edges:
            if not 0 <= u < v < self.num_vertices:
                raise ValueError(f"edge ({u}, {v}) violates 0 <= u < v < {self.num_vertices}")
            if (u, v) in seen:
                raise ValueError(f"duplicate edge ({u}, {v})")
            seen.add((u, v))
        object.__setattr__(self, "edges", tuple((int(u), int(v), float(w)) for u, v, w in self.edges))

    @classmethod
    def from_edges(cls, num_vertices: int, edges: Iterable[tuple[int, int, float]]) -> WeightedGraph:
        """Accept edges in either orientation."""
        return cls(num_vertices, tuple((min(u, v), max(u, v), w) for u, v, w in edges))

    @property
    def num_edges(self) -> int:
        return len(self.edges)

    def edge_arrays(self) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        if not self.edges:
            return np.zeros(0, dtype=np.int64), np.zeros(0, dtype=np.int64), np.zeros(0)
        u, v, w = zip(*self.edges)
        return np.array(u), np.array(v), np.array(w, dtype=float)


def parse_rudy(text: str | TextIO) -> WeightedGraph:
    """Parse rudy text: a header ``n m`` then ``m`` lines of 1-indexed ``u v w``."""
    lines = text.splitlines() if isinstance(text, str) else text.read().splitlines()
    header = None
    edges: list[tuple[int, int, float]] = []
    seen: set[tuple[int, int]] = set()
    for lineno, raw in enumerate(lines, start=1):
        parts = raw.split()
        if not parts:
            continue
        if header is None:
            if len(parts) != 2:
                raise ParseError(f"expected header 'n m', got {raw.strip()!r}", lineno)
            try:
                header = (int(parts[0]), int(parts[1]))
            except ValueError:
                raise ParseError(f"non-integer header {raw.strip()!r}", lineno) from None
            if header[0] < 1 or header[1] < 0:
                raise ParseError(f"invalid header {raw.strip()!r}", lineno)
            continue
        if len(parts) != 3:
            raise ParseError(f"expected 'u v w', got {raw.strip()!r}", lineno)
        try:
            u, v, w = int(parts[0]), int(parts[1]), float(parts[2])
        except ValueError:
            raise ParseError(f"cannot parse edge {raw.strip()!r}", lineno) from None
        n = header[0]
        for vert in (u, v):
            if not 1 <= vert <= n:
                raise ParseError(f"vertex {vert} outside 1..{n}", lineno)
        if u == v:
            raise ParseError(f"self-loop on vertex {u}", lineno)
        key = (min(u, v) - 1, max(u, v) - 1)
        if key in seen:
            raise ParseError(f"duplicate edge {u} {v}", lineno)
        seen.add(key)
        edges.append((*key, w))
    if header is None:
        raise ParseError("empty input: missing header", 1)
    if len(edges) != header[1]:
        raise ParseError(f"header declares {header[1]} edges but {len(edges)} were read", len(lines))
    return WeightedGraph(header[0], tuple(edges))


def load_rudy(path: str | Path) -> WeightedGraph:
    with open(path) as fh:
        return parse_rudy(fh)


def format_rudy(graph: WeightedGraph) -> str:
    out = [f"{graph.num_vertices} {graph.num_edges}"]
    for u, v, w in graph.edges:
        out.append(f"{u + 1} {v + 1} {w:g}")
    return "\n".join(out) + "\n"


def maxcut_to_qubo(graph: WeightedGraph) -> QuboProblem:
    """Minimisation QUBO whose value is the negated cut: Q_ii = -sum_j w_ij, Q_ij = 2 w_ij."""
    terms: list[tuple[tuple[int, int], float]] = []
    for u, v, w in graph.edges:
        terms += [((u, u), -w), ((v, v), -w), ((u, v), 2.0 * w)]
    return QuboProblem.from_terms(graph.num_vertices, terms)


def cut_value(graph: WeightedGraph, x) -> float:
    x = as_assignment(x, graph.num_vertices)
    u, v, w = graph.edge_arrays()
    return float(np.sum(w[x[u] != x[v]]))
