"""Undirected observation graphs between agents.

Agents are 0-based internally; the config layer and CSV output use 1-based
labels.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable

import numpy as np

__all__ = ["ObservationGraph", "build_graph", "star", "complete", "cycle", "from_edges", "neighbors"]


@dataclass(frozen=True)
class ObservationGraph:
    agent_count: int
    edges: frozenset[frozenset[int]]

    def __post_init__(self):
        if self.agent_count < 1:
            raise ValueError("a graph needs at least one agent")
        for e in self.edges:
            if len(e) != 2:
                raise ValueError(f"self-loop edge {sorted(e)} not allowed")
            if any(not 0 <= v < self.agent_count for v in e):
                raise ValueError(f"edge {sorted(e)} references an unknown agent")
        nbrs = [[] for _ in range(self.agent_count)]
        for a, b in (sorted(e) for e in self.edges):
            nbrs[a].append(b)
            nbrs[b].append(a)
        object.__setattr__(self, "_nbrs", tuple(tuple(sorted(n)) for n in nbrs))

    def neighbors(self, k: int) -> tuple[int, ...]:
        if not 0 <= k < self.agent_count:
            raise IndexError(f"agent index {k} out of range")
        return self._nbrs[k]

    def degree(self, k: int) -> int:
        return len(self.neighbors(k))

    @property
    def degrees(self) -> np.ndarray:
        return np.array([len(n) for n in self._nbrs], dtype=np.int64)

    def adjacency(self) -> np.ndarray:
        a = np.zeros((self.agent_count, self.agent_count), dtype=bool)
        for k, nb in enumerate(self._nbrs):
            a[k, list(nb)] = True
        return a

    def neighbor_table(self) -> tuple[np.ndarray, np.ndarray]:
        """Padded ``(K, max_degree)`` neighbor indices plus validity mask."""
        width = max((len(n) for n in self._nbrs), default=0)
        table = np.zeros((self.agent_count, width), dtype=np.int64)
        valid = np.zeros((self.agent_count, width), dtype=bool)
        for k, nb in enumerate(self._nbrs):
            table[k, : len(nb)] = nb
            valid[k, : len(nb)] = True
        return table, valid


def neighbors(g: ObservationGraph, k: int) -> tuple[int, ...]:
    return g.neighbors(k)


def from_edges(agent_count: int, pairs: Iterable[tuple[int, int]]) -> ObservationGraph:
    """Build from 0-based pairs, rejecting self-loops and duplicates."""
    edges = set()
    for a, b in pairs:
        if a == b:
            raise ValueError(f"self-loop on agent {a}")
        e = frozenset((int(a), int(b)))
        if e in edges:
            raise ValueError(f"duplicate edge {sorted(e)}")
        edges.add(e)
    return ObservationGraph(agent_count, frozenset(edges))


def star(k: int) -> ObservationGraph:
    """Agent 0 at the center, adjacent to every other agent."""
    return from_edges(k, [(0, j) for j in range(1, k)])


def complete(k: int) -> ObservationGraph:
    return from_edges(k, [(a, b) for a in range(k) for b in range(a + 1, k)])


def cycle(k: int) -> ObservationGraph:
    if k < 3:
        # a 2-cycle would duplicate its only edge
        return from_edges(k, [(0, 1)] if k == 2 else [])
    return from_edges(k, [(a, (a + 1) % k) for a in range(k)])


def build_graph(spec: dict) -> ObservationGraph:
    """Construct from a config mapping.

    ``{"kind": "star"|"complete"|"cycle", "k": K}`` or
    ``{"kind": "edges", "k": K, "edges": [[1, 2], ...]}`` with 1-based pairs.
    For ``edges`` the agent count defaults to the largest label used.
    """
    kind = spec.get("kind")
    if kind in ("star", "complete", "cycle"):
        k = int(spec["k"])
        return {"star": star, "complete": complete, "cycle": cycle}[kind](k)
    if kind == "edges":
        pairs = [tuple(p) for p in spec.get("edges", [])]
        for p in pairs:
            if len(p) != 2 or min(p) < 1:
                raise ValueError(f"edge {list(p)} must be a pair of 1-based agent labels")
        k = int(spec.get("k", max((max(p) for p in pairs), default=1)))
        return from_edges(k, [(a - 1, b - 1) for a, b in pairs])
    raise ValueError(f"unknown graph kind {kind!r}")
