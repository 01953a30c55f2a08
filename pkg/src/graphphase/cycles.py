"""Cycle covers of directed graphs.

A cycle cover (vertex-disjoint directed cycles through every node) is the same
thing as a perfect matching between the out-copies and the in-copies of the
nodes: the matching is a permutation sending each node to its successor.
Self-loops are 1-cycles.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.optimize import linear_sum_assignment

from .errors import PreconditionError
from .graphs import DiGraph


@dataclass(frozen=True)
class CycleCover:
    cycles: tuple[tuple[int, ...], ...]

    @property
    def nodes(self) -> set[int]:
        return {v for c in self.cycles for v in c}

    def validate(self, g: DiGraph, complete: bool = True) -> None:
        """Raise ``AssertionError`` unless the cycles are edge-following, disjoint and (optionally) spanning."""
        seen: set[int] = set()
        for cyc in self.cycles:
            for a, b in zip(cyc, cyc[1:] + cyc[:1]):
                assert g.has_edge(a, b), f"{a}->{b} is not an edge"
            assert seen.isdisjoint(cyc), f"cycle {cyc} overlaps another cycle"
            seen.update(cyc)
        if complete:
            assert seen == set(range(g.n)), "cycles do not cover every node"

    def to_json(self, r: int = 0) -> dict:
        return {"r": int(r), "cycles": [list(c) for c in self.cycles]}


@dataclass(frozen=True)
class AcyclicityIndex:
    """``r = n - max_covered``; the graph is r-acyclic and admits a cover iff ``r == 0``."""

    r: int
    max_covered: int
    cycles: tuple[tuple[int, ...], ...] = ()


def maximum_matching(g: DiGraph) -> np.ndarray:
    """Successor array of a maximum out/in matching (``-1`` where unmatched).

    Kuhn's augmenting paths, scanning sources and their successors in
    ascending order, so the result is deterministic.
    """
    n = g.n
    adj = [g.successors(v) for v in range(n)]
    succ = np.full(n, -1, dtype=int)
    pred = np.full(n, -1, dtype=int)
    for root in range(n):
        # iterative DFS over alternating paths
        visited = np.zeros(n, dtype=bool)
        stack = [(root, iter(adj[root]))]
        path: list[tuple[int, int]] = []
        found = False
        while stack and not found:
            u, it = stack[-1]
            for w in it:
                if visited[w]:
                    continue
                visited[w] = True
                path.append((u, w))
                if pred[w] == -1:
                    found = True
                else:
                    stack.append((int(pred[w]), iter(adj[pred[w]])))
                break
            else:
                stack.pop()
                if path:
                    path.pop()
        if found:
            # path holds exactly one (u, w) per stack frame: flip along it
            for u, w in path:
                succ[u] = w
                pred[w] = u
    return succ


def _permutation_cycles(succ: np.ndarray) -> tuple[tuple[int, ...], ...]:
    n = len(succ)
    seen = np.zeros(n, dtype=bool)
    cycles = []
    for start in range(n):
        if seen[start] or succ[start] < 0:
            continue
        cyc = []
        v = start
        while not seen[v]:
            seen[v] = True
            cyc.append(int(v))
            v = int(succ[v])
            if v < 0:
                raise AssertionError("successor map is not a permutation on its support")
        cycles.append(tuple(cyc))
    return tuple(cycles)


def has_cycle_cover(g: DiGraph) -> bool:
    return bool(np.all(maximum_matching(g) >= 0))


def extract_cycle_cover(g: DiGraph) -> CycleCover:
    """Vertex-disjoint cycles covering all nodes, from the matching's permutation."""
    succ = maximum_matching(g)
    if np.any(succ < 0):
        raise PreconditionError(f"graph has no cycle cover ({int(np.sum(succ < 0))} nodes unmatched)")
    return CycleCover(_permutation_cycles(succ))


def acyclicity_index(g: DiGraph) -> AcyclicityIndex:
    """Largest node count coverable by disjoint cycles, via an assignment problem.

    Real edges earn one unit; every node may instead map to itself through a
    zero-benefit skip, so the optimal permutation uses real edges only inside
    genuine cycles.
    """
    n = g.n
    real = (g.adjacency.T != 0)  # real[src, dst]
    cost = np.where(real, -1.0, float(n + 1))
    skip = ~np.diag(real)
    cost[np.flatnonzero(skip), np.flatnonzero(skip)] = 0.0
    rows, cols = linear_sum_assignment(cost)
    succ = np.full(n, -1, dtype=int)
    used = real[rows, cols]
    succ[rows[used]] = cols[used]
    covered = int(np.sum(used))
    return AcyclicityIndex(n - covered, covered, _permutation_cycles(succ))
