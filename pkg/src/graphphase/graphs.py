"""Directed-graph data model, generators and file I/O.

Adjacency convention: ``adjacency[i, j]`` is the weight of the edge ``j -> i``
(column = source, row = target), so ``A @ x`` pulls values from in-neighbours
and the shift moves a signal forward along the edges.  Node indices are
0-based everywhere, including the CSV formats.
"""

from __future__ import annotations

import io
import math
import os
from dataclasses import dataclass, field
from typing import IO, Iterable, Sequence

import numpy as np

from .errors import InvalidArgumentError, ParseError

Edge = tuple[int, int, float]

EDGE_HEADER = "src,dst,weight"
SIGNAL_HEADER = "node,value"


def _frozen(a: np.ndarray) -> np.ndarray:
    a = np.array(a, dtype=float, copy=True)
    a.setflags(write=False)
    return a


@dataclass(frozen=True, eq=False)
class DiGraph:
    """Weighted directed graph backed by a dense adjacency matrix.

    The matrix is copied and made read-only on construction; use
    :meth:`with_edges` to obtain a graph with extra edges.
    """

    adjacency: np.ndarray
    node_labels: tuple[str, ...] | None = None

    def __post_init__(self):
        a = np.asarray(self.adjacency, dtype=float)
        if a.ndim != 2 or a.shape[0] != a.shape[1] or a.shape[0] < 1:
            raise InvalidArgumentError(f"adjacency must be a non-empty square matrix, got shape {a.shape}")
        if not np.all(np.isfinite(a)):
            raise InvalidArgumentError("adjacency entries must be finite")
        object.__setattr__(self, "adjacency", _frozen(a))
        if self.node_labels is not None:
            labels = tuple(str(s) for s in self.node_labels)
            if len(labels) != a.shape[0]:
                raise InvalidArgumentError("node_labels length must equal the node count")
            object.__setattr__(self, "node_labels", labels)

    @classmethod
    def from_edges(cls, n: int, edges: Iterable[Sequence], node_labels=None) -> "DiGraph":
        """Build a graph from ``(src, dst[, weight])`` triples; duplicates are rejected."""
        if n < 1:
            raise InvalidArgumentError("node count must be >= 1")
        a = np.zeros((n, n))
        for e in edges:
            src, dst = int(e[0]), int(e[1])
            w = float(e[2]) if len(e) > 2 else 1.0
            if not (0 <= src < n and 0 <= dst < n):
                raise InvalidArgumentError(f"edge {src}->{dst} out of range for n={n}")
            if a[dst, src] != 0:
                raise InvalidArgumentError(f"duplicate edge {src}->{dst}")
            if w == 0 or not math.isfinite(w):
                raise InvalidArgumentError(f"edge {src}->{dst} has invalid weight {w}")
            a[dst, src] = w
        return cls(a, node_labels)

    @property
    def n(self) -> int:
        return self.adjacency.shape[0]

    def edges(self) -> list[Edge]:
        """All edges as ``(src, dst, weight)``, sorted by ``(src, dst)``."""
        dst, src = np.nonzero(self.adjacency)
        order = np.lexsort((dst, src))
        return [(int(src[k]), int(dst[k]), float(self.adjacency[dst[k], src[k]])) for k in order]

    @property
    def num_edges(self) -> int:
        return int(np.count_nonzero(self.adjacency))

    def has_edge(self, src: int, dst: int) -> bool:
        return self.adjacency[dst, src] != 0

    def self_loops(self) -> list[int]:
        return [int(k) for k in np.flatnonzero(np.diag(self.adjacency))]

    def successors(self, node: int) -> list[int]:
        return [int(k) for k in np.flatnonzero(self.adjacency[:, node])]

    def with_edges(self, edges: Iterable[Sequence]) -> "DiGraph":
        """Return a new graph with the given brand-new edges added."""
        a = np.array(self.adjacency)
        for src, dst, w in edges:
            if a[dst, src] != 0:
                raise InvalidArgumentError(f"edge {src}->{dst} already present")
            a[dst, src] = w
        return DiGraph(a, self.node_labels)

    def summary(self) -> dict:
        loops = self.self_loops()
        return {
            "nodes": self.n,
            "edges": self.num_edges,
            "self_loops": len(loops),
            "self_loop_nodes": loops,
            "weighted": bool(np.any((self.adjacency != 0) & (self.adjacency != 1))),
        }

    def __eq__(self, other):
        if not isinstance(other, DiGraph):
            return NotImplemented
        return self.n == other.n and np.array_equal(self.adjacency, other.adjacency)

    def __hash__(self):
        return hash((self.n, self.adjacency.tobytes()))

    def __repr__(self):
        return f"DiGraph(n={self.n}, edges={self.num_edges})"


@dataclass(frozen=True, eq=False)
class GraphSignal:
    """Real node-indexed signal."""

    values: np.ndarray

    def __post_init__(self):
        v = np.asarray(self.values)
        if np.iscomplexobj(v):
            raise InvalidArgumentError("graph signals are real-valued")
        v = np.asarray(v, dtype=float)
        if v.ndim != 1:
            raise InvalidArgumentError("signal must be one-dimensional")
        if not np.all(np.isfinite(v)):
            raise InvalidArgumentError("signal entries must be finite")
        object.__setattr__(self, "values", _frozen(v))

    def __len__(self):
        return self.values.shape[0]

    def __array__(self, dtype=None, copy=None):
        return np.asarray(self.values, dtype=dtype)

    def check_graph(self, g: DiGraph) -> None:
        if len(self) != g.n:
            raise InvalidArgumentError(f"signal length {len(self)} != node count {g.n}")


@dataclass(frozen=True)
class RosaceSpec:
    """Central directed cycle of ``n_hubs`` hubs, each with an outgoing fan of ``n_fan`` nodes.

    The hub is the first node of its fan, so the graph has ``n_hubs * n_fan`` nodes.
    """

    n_hubs: int = 20
    n_fan: int = 20

    def __post_init__(self):
        if int(self.n_hubs) != self.n_hubs or self.n_hubs < 3:
            raise InvalidArgumentError(f"n_hubs must be an integer >= 3, got {self.n_hubs}")
        if int(self.n_fan) != self.n_fan or self.n_fan < 2:
            raise InvalidArgumentError(f"n_fan must be an integer >= 2, got {self.n_fan}")

    @property
    def n(self) -> int:
        return self.n_hubs * self.n_fan

    def fan_nodes(self, fan: int) -> list[int]:
        """Nodes of fan ``fan`` (0-based) in order, hub first."""
        if not 0 <= fan < self.n_hubs:
            raise InvalidArgumentError(f"fan index {fan} out of range")
        base = self.n_hubs + fan * (self.n_fan - 1)
        return [fan] + list(range(base, base + self.n_fan - 1))

    def hubs(self) -> list[int]:
        return list(range(self.n_hubs))


@dataclass(frozen=True)
class GridSpec:
    """``rows x cols`` grid with rightward and downward edges on a twisted torus.

    The right wrap sends ``(i, cols-1)`` to ``(i + twist, 0)`` and the down wrap
    sends ``(rows-1, j)`` to ``(0, j + twist)`` (indices modulo the grid size),
    so both boundaries are glued along obliques.  ``twist=0`` is the plain
    torus.  The default ``twist=3`` is the smallest offset for which the 20x20
    grid is already diagonalizable and invertible; ``twist=1`` sends both wraps
    of the corner node to ``(0, 0)`` and is rejected on square grids.

    Shifting only one of the two wraps never works on an even-sized grid: the
    mode ``(-1)**row`` (or ``(-1)**col``) stays in the kernel.
    """

    rows: int = 20
    cols: int = 20
    twist: int = 3

    def __post_init__(self):
        if int(self.rows) != self.rows or self.rows < 2:
            raise InvalidArgumentError(f"rows must be an integer >= 2, got {self.rows}")
        if int(self.cols) != self.cols or self.cols < 2:
            raise InvalidArgumentError(f"cols must be an integer >= 2, got {self.cols}")
        if int(self.twist) != self.twist or not 0 <= self.twist < self.cols:
            raise InvalidArgumentError(f"twist must satisfy 0 <= twist < cols, got {self.twist}")

    @property
    def n(self) -> int:
        return self.rows * self.cols

    def node(self, i: int, j: int) -> int:
        return (i % self.rows) * self.cols + (j % self.cols)


def gen_cycle(n: int) -> DiGraph:
    """Directed cycle ``k -> k+1 (mod n)`` with unit weights."""
    if int(n) != n or n < 2:
        raise InvalidArgumentError(f"cycle needs n >= 2, got {n}")
    n = int(n)
    return DiGraph.from_edges(n, [(k, (k + 1) % n) for k in range(n)])


def gen_path(n: int) -> DiGraph:
    """Directed path ``0 -> 1 -> ... -> n-1`` (nilpotent adjacency)."""
    if int(n) != n or n < 1:
        raise InvalidArgumentError(f"path needs n >= 1, got {n}")
    n = int(n)
    return DiGraph.from_edges(n, [(k, k + 1) for k in range(n - 1)])


def gen_rosace(spec: RosaceSpec) -> DiGraph:
    """Hub cycle plus one open outgoing chain per hub.

    Nodes ``0..n_hubs-1`` are the hubs; fan ``m`` then occupies the next
    ``n_fan - 1`` indices in chain order.  Chain ends are left open.
    """
    edges = []
    labels = [f"h{m}" for m in range(spec.n_hubs)] + [""] * (spec.n - spec.n_hubs)
    for m in range(spec.n_hubs):
        edges.append((m, (m + 1) % spec.n_hubs))
        fan = spec.fan_nodes(m)
        for k, (a, b) in enumerate(zip(fan[:-1], fan[1:]), start=1):
            edges.append((a, b))
            labels[b] = f"f{m}_{k}"
    return DiGraph.from_edges(spec.n, edges, labels)


def gen_grid(spec: GridSpec) -> DiGraph:
    """Grid with rightward and downward edges and twisted periodic wraps."""
    R, C, t = spec.rows, spec.cols, spec.twist
    edges = []
    for i in range(R):
        for j in range(C):
            src = spec.node(i, j)
            right = spec.node(i, j + 1) if j < C - 1 else spec.node(i + t, 0)
            down = spec.node(i + 1, j) if i < R - 1 else spec.node(0, j + t)
            edges += [(src, right), (src, down)]
    try:
        return DiGraph.from_edges(spec.n, edges, [f"({i},{j})" for i in range(R) for j in range(C)])
    except InvalidArgumentError as exc:
        raise InvalidArgumentError(f"grid {R}x{C} with twist {t} collapses edges: {exc}") from None


def signal_rosace(spec: RosaceSpec) -> GraphSignal:
    """Sinusoid on every fan with amplitude ``2m+1`` and frequency ``(m+1)/(2 n_fan)``.

    Fan ``m`` (1-based) is the fan of hub ``m-1``; position ``k`` runs from 0
    at the hub to ``n_fan-1`` at the chain end.
    """
    NC, NF = spec.n_hubs, spec.n_fan
    x = np.zeros(spec.n)
    k = np.arange(NF)
    offset = (5 * NC + 4) / (20 * NC) * 2 * np.pi
    for m in range(1, NC + 1):
        x[spec.fan_nodes(m - 1)] = (2 * m + 1) * np.sin((m + 1) / (2 * NF) * 2 * np.pi * k + offset * m)
    return GraphSignal(x)


def rosace_truth(spec: RosaceSpec) -> tuple[np.ndarray, np.ndarray]:
    """Ground-truth per-fan amplitude ``2m+1`` and angular step ``pi (m+1) / n_fan``."""
    m = np.arange(1, spec.n_hubs + 1)
    return (2 * m + 1).astype(float), np.pi * (m + 1) / spec.n_fan


def signal_planar_wave(spec: GridSpec, direction: str = "horizontal", period: float | None = None) -> GraphSignal:
    """``sin(2 pi c / period)`` where ``c`` is the column (horizontal) or row (vertical)."""
    if direction not in ("horizontal", "vertical"):
        raise InvalidArgumentError(f"direction must be 'horizontal' or 'vertical', got {direction!r}")
    if period is None:
        period = spec.cols if direction == "horizontal" else spec.rows
    if not period > 0:
        raise InvalidArgumentError(f"period must be positive, got {period}")
    i, j = np.divmod(np.arange(spec.n), spec.cols)
    c = j if direction == "horizontal" else i
    return GraphSignal(np.sin(2 * np.pi * c / period))


# ---------------------------------------------------------------- file I/O


def _read_lines(source) -> list[str]:
    if isinstance(source, (str, os.PathLike)):
        with open(source, "r", encoding="utf-8") as fh:
            return fh.read().splitlines()
    data = source.read()
    if isinstance(data, bytes):
        data = data.decode("utf-8")
    return data.splitlines()


def _write_text(sink, text: str) -> None:
    if isinstance(sink, (str, os.PathLike)):
        with open(sink, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    elif isinstance(sink, (io.RawIOBase, io.BufferedIOBase)) or "b" in getattr(sink, "mode", ""):
        sink.write(text.encode("utf-8"))
    else:
        sink.write(text)


def _parse_int(tok: str, what: str, line: int) -> int:
    try:
        return int(tok)
    except ValueError:
        raise ParseError(f"{what} {tok!r} is not an integer", line) from None


def _parse_float(tok: str, what: str, line: int) -> float:
    try:
        v = float(tok)
    except ValueError:
        raise ParseError(f"{what} {tok!r} is not numeric", line) from None
    if not math.isfinite(v):
        raise ParseError(f"{what} {tok!r} is not finite", line)
    return v


def load_edge_list(source: str | os.PathLike | IO) -> DiGraph:
    """Parse a ``src,dst,weight`` CSV edge list.

    A ``# nodes=N`` comment fixes the node count (so isolated trailing nodes
    survive a round trip); otherwise it is one more than the largest index.
    """
    declared = None
    records = []
    header_seen = False
    for lineno, raw in enumerate(_read_lines(source), start=1):
        line = raw.strip()
        if not line:
            continue
        if line.startswith("#"):
            body = line[1:].strip().replace(" ", "")
            if body.startswith("nodes="):
                declared = _parse_int(body[len("nodes="):], "node count", lineno)
                if declared < 1:
                    raise ParseError("node count must be >= 1", lineno)
            continue
        toks = [t.strip() for t in line.split(",")]
        if not header_seen and not records and toks and not toks[0].lstrip("-").isdigit():
            if [t.lower() for t in toks] != EDGE_HEADER.split(","):
                raise ParseError(f"unexpected header {line!r}; expected {EDGE_HEADER!r}", lineno)
            header_seen = True
            continue
        if len(toks) != 3:
            raise ParseError(f"expected 3 fields src,dst,weight, got {len(toks)}", lineno)
        src = _parse_int(toks[0], "src", lineno)
        dst = _parse_int(toks[1], "dst", lineno)
        w = _parse_float(toks[2], "weight", lineno)
        if src < 0 or dst < 0:
            raise ParseError("node indices must be non-negative", lineno)
        if w == 0:
            raise ParseError("zero weight does not define an edge", lineno)
        records.append((lineno, src, dst, w))
    if not records and declared is None:
        raise ParseError("edge list is empty")
    n = declared if declared is not None else 1 + max(max(s, d) for _, s, d, _ in records)
    a = np.zeros((n, n))
    for lineno, src, dst, w in records:
        if src >= n or dst >= n:
            raise ParseError(f"node index out of range for {n} nodes", lineno)
        if a[dst, src] != 0:
            raise ParseError(f"duplicate edge {src}->{dst}", lineno)
        a[dst, src] = w
    return DiGraph(a)


def dump_edge_list(g: DiGraph) -> str:
    lines = [f"# nodes={g.n}", EDGE_HEADER]
    lines += [f"{s},{d},{w!r}" for s, d, w in g.edges()]
    return "\n".join(lines) + "\n"


def save_edge_list(g: DiGraph, sink: str | os.PathLike | IO) -> None:
    _write_text(sink, dump_edge_list(g))


def load_signal(source: str | os.PathLike | IO, n: int | None = None) -> GraphSignal:
    """Parse a ``node,value`` CSV; every node must appear exactly once."""
    values: dict[int, float] = {}
    for lineno, raw in enumerate(_read_lines(source), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        toks = [t.strip() for t in line.split(",")]
        if not values and toks[0].lower() == "node":
            if [t.lower() for t in toks] != SIGNAL_HEADER.split(","):
                raise ParseError(f"unexpected header {line!r}; expected {SIGNAL_HEADER!r}", lineno)
            continue
        if len(toks) != 2:
            raise ParseError(f"expected 2 fields node,value, got {len(toks)}", lineno)
        node = _parse_int(toks[0], "node", lineno)
        if node < 0 or (n is not None and node >= n):
            raise ParseError(f"node index {node} out of range", lineno)
        if node in values:
            raise ParseError(f"node {node} listed twice", lineno)
        values[node] = _parse_float(toks[1], "value", lineno)
    size = n if n is not None else (max(values) + 1 if values else 0)
    missing = [k for k in range(size) if k not in values]
    if size == 0 or missing:
        raise ParseError(f"signal is missing nodes {missing[:10]}" if missing else "signal is empty")
    return GraphSignal(np.array([values[k] for k in range(size)]))


def dump_signal(x) -> str:
    v = np.asarray(x, dtype=float)
    return "\n".join([SIGNAL_HEADER] + [f"{k},{val!r}" for k, val in enumerate(v.tolist())]) + "\n"


def save_signal(x, sink: str | os.PathLike | IO) -> None:
    _write_text(sink, dump_signal(x))
