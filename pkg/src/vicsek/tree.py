"""Undirected graphs and trees: validation, distances, Wiener index, edge-list I/O."""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from pathlib import Path

import numpy as np

from . import kernels
from .errors import (DegenerateSize, DuplicateEdge, HasCycle, IdOutOfRange,
                     NotConnected, SelfLoop, ValidationError)


@dataclass(frozen=True, eq=False)
class Graph:
    """Simple undirected graph on vertices ``0..n-1``.

    ``edges`` is an ``(m, 2)`` int64 array and is never mutated. Neighbour
    lists are kept sorted so that iteration order (and hence every seeded
    random walk) is deterministic.
    """

    n: int
    edges: np.ndarray

    @classmethod
    def from_edges(cls, n, edge_list):
        n = int(n)
        edges = _check_simple(n, edge_list)
        return cls._trusted(n, edges)

    @classmethod
    def _trusted(cls, n, edges):
        edges = np.asarray(edges, dtype=np.int64).reshape(-1, 2)
        edges.setflags(write=False)
        return cls(int(n), edges)

    @property
    def m(self) -> int:
        return int(self.edges.shape[0])

    @cached_property
    def degrees(self) -> np.ndarray:
        deg = np.bincount(self.edges.ravel(), minlength=self.n).astype(np.int64)
        deg.setflags(write=False)
        return deg

    @cached_property
    def csr(self) -> tuple[np.ndarray, np.ndarray]:
        """``(indptr, indices)`` with each neighbour list ascending."""
        e = self.edges
        src = np.concatenate([e[:, 0], e[:, 1]])
        dst = np.concatenate([e[:, 1], e[:, 0]])
        order = np.lexsort((dst, src))
        indices = np.ascontiguousarray(dst[order], dtype=np.int64)
        indptr = np.zeros(self.n + 1, dtype=np.int64)
        np.cumsum(self.degrees, out=indptr[1:])
        indptr.setflags(write=False)
        indices.setflags(write=False)
        return indptr, indices

    def neighbors(self, v: int) -> np.ndarray:
        indptr, indices = self.csr
        return indices[indptr[v]:indptr[v + 1]]

    def max_degree(self) -> int:
        return int(self.degrees.max()) if self.n else 0

    def edge_list(self) -> list[tuple[int, int]]:
        return [(int(u), int(v)) for u, v in self.edges]

    def is_connected(self) -> bool:
        indptr, indices = self.csr
        order, _, _ = kernels.bfs(indptr, indices, 0)
        return order.shape[0] == self.n

    def is_tree(self) -> bool:
        return self.m == self.n - 1 and self.is_connected()


class Tree(Graph):
    """A :class:`Graph` known to be connected and acyclic."""


def _check_simple(n, edge_list):
    if n < 1:
        raise ValidationError(f"vertex count must be >= 1, got {n}")
    seen = set()
    rows = []
    for i, (u, v) in enumerate(edge_list):
        u, v = int(u), int(v)
        for x in (u, v):
            if not 0 <= x < n:
                raise IdOutOfRange(f"edge {i} ({u}, {v}): vertex {x} not in [0, {n})")
        if u == v:
            raise SelfLoop(f"edge {i} ({u}, {v}) is a self-loop")
        key = (u, v) if u < v else (v, u)
        if key in seen:
            raise DuplicateEdge(f"edge {i} ({u}, {v}) duplicates an earlier edge")
        seen.add(key)
        rows.append((u, v))
    return np.array(rows, dtype=np.int64).reshape(-1, 2)


def validate_tree(n, edge_list) -> Tree:
    """Return a :class:`Tree` or raise naming the first offending element.

    Checks run in order: id range, self-loops, duplicates (per edge), then
    cycles (first edge closing one), then connectivity (smallest unreachable
    vertex from 0).
    """
    n = int(n)
    edges = _check_simple(n, edge_list)
    root = list(range(n))

    def find(x):
        while root[x] != x:
            root[x] = root[root[x]]
            x = root[x]
        return x

    for i, (u, v) in enumerate(edges.tolist()):
        ru, rv = find(u), find(v)
        if ru == rv:
            raise HasCycle(f"edge {i} ({u}, {v}) closes a cycle")
        root[ru] = rv
    if len(edges) != n - 1:
        comp = find(0)
        missing = next(v for v in range(n) if find(v) != comp)
        raise NotConnected(f"vertex {missing} is not reachable from vertex 0")
    return Tree._trusted(n, edges)


def as_graph(obj) -> Graph:
    """Unwrap anything carrying a ``graph`` attribute (e.g. a FractalGraph)."""
    return getattr(obj, "graph", obj)


def bfs_distances(graph, source: int) -> np.ndarray:
    """Hop distances from ``source``; unreachable vertices get -1."""
    g = as_graph(graph)
    if not 0 <= source < g.n:
        raise IdOutOfRange(f"source {source} not in [0, {g.n})")
    indptr, indices = g.csr
    return kernels.bfs(indptr, indices, int(source))[2]


def wiener_brute(graph) -> int:
    """Wiener index by BFS from every vertex (any connected graph)."""
    g = as_graph(graph)
    if g.n == 1:
        return 0
    indptr, indices = g.csr
    total = kernels.distance_sum(indptr, indices)
    if total < 0:
        raise NotConnected("graph is not connected")
    return total


def wiener_fast_tree(tree) -> int:
    """Wiener index of a tree in linear time.

    Removing an edge splits the tree into parts of ``c`` and ``n - c``
    vertices; exactly ``c * (n - c)`` vertex pairs route through it.
    """
    g = as_graph(tree)
    n = g.n
    if n == 1:
        return 0
    indptr, indices = g.csr
    order, parent, dist = kernels.bfs(indptr, indices, 0)
    if order.shape[0] != n or g.m != n - 1:
        raise NotConnected("input is not a tree")
    size = kernels.subtree_sizes(order, parent, dist)[order[1:]]
    if n < 3_000_000:
        return int(np.sum(size * (n - size)))
    return sum(int(c) * (n - int(c)) for c in size)


def average_path_length(graph) -> Fraction:
    g = as_graph(graph)
    if g.n < 2:
        raise DegenerateSize("average path length needs at least 2 vertices")
    return Fraction(2 * wiener_brute(g), g.n * (g.n - 1))


# ---------------------------------------------------------------------------
# edge-list text format
# ---------------------------------------------------------------------------

def format_edge_list(graph) -> str:
    g = as_graph(graph)
    lines = [f"{g.n} {g.m}"]
    lines.extend(f"{u} {v}" for u, v in g.edges.tolist())
    return "\n".join(lines) + "\n"


def parse_edge_list(text: str) -> tuple[int, list[tuple[int, int]]]:
    """Parse ``"n m"`` then ``m`` lines ``"u v"``; ``#`` lines are comments."""
    rows = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        parts = line.split()
        if len(parts) != 2:
            raise ValidationError(f"line {lineno}: expected two integers, got {raw!r}")
        try:
            rows.append((int(parts[0]), int(parts[1])))
        except ValueError:
            raise ValidationError(f"line {lineno}: non-integer token in {raw!r}") from None
    if not rows:
        raise ValidationError("empty edge list: missing 'n m' header")
    (n, m), edges = rows[0], rows[1:]
    if len(edges) != m:
        raise ValidationError(f"header declares {m} edges, found {len(edges)}")
    return n, edges


def write_edge_list(graph, path) -> None:
    Path(path).write_text(format_edge_list(graph), newline="\n")


def read_edge_list(path) -> Graph:
    n, edges = parse_edge_list(Path(path).read_text())
    return Graph.from_edges(n, edges)


def read_tree(path) -> Tree:
    n, edges = parse_edge_list(Path(path).read_text())
    return validate_tree(n, edges)
