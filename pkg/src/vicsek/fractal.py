"""Generalized Vicsek fractals built by iterating the edge operation V_s.

One application of V_s to a tree replaces every edge ``u-v`` by the path
``u-a-b-v`` and then hangs ``s - k_v`` new leaves on every vertex ``v`` that
existed before the step (``k_v`` being its degree before the step). The two
inserted middle vertices never receive leaves.
"""
from __future__ import annotations

import json
import os
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .errors import BadParameter, DegreeExceedsS, SizeCapExceeded
from .tree import Tree, as_graph, validate_tree, write_edge_list

ORIGINAL, MIDDLE, LEAF = 0, 1, 2
KIND_NAMES = ("original", "inserted-middle", "attached-leaf")

DEFAULT_CAP_VERTICES = 2_000_000


def cap_vertices(override=None) -> int:
    """Explicit-construction cap: argument, else $VICSEK_CAP_VERTICES, else 2e6."""
    if override is not None:
        cap = int(override)
    else:
        cap = int(os.environ.get("VICSEK_CAP_VERTICES", DEFAULT_CAP_VERTICES))
    if cap <= 0:
        raise BadParameter(f"vertex cap must be positive, got {cap}")
    return cap


@dataclass(frozen=True, eq=False)
class FractalGraph:
    graph: Tree
    s: int
    t: int
    birth_step: np.ndarray
    vertex_kind: np.ndarray

    @property
    def n(self) -> int:
        return self.graph.n

    @property
    def n0(self) -> int:
        return int(np.count_nonzero(self.birth_step == 0))

    def sidecar(self) -> dict:
        return {
            "n0": self.n0,
            "s": self.s,
            "t": self.t,
            "vertex_count": self.n,
            "birth_step": self.birth_step.tolist(),
            "vertex_kind": [KIND_NAMES[k] for k in self.vertex_kind.tolist()],
        }


def star_seed(s: int) -> Tree:
    """Star with centre 0 and leaves ``1..s``."""
    if s < 2:
        raise BadParameter(f"s must be >= 2, got {s}")
    return validate_tree(s + 1, [(0, i) for i in range(1, s + 1)])


def single_seed() -> Tree:
    return validate_tree(1, [])


def spider_seed() -> Tree:
    """Five-vertex seed: centre 0 with leaves 1, 2 and an arm 0-3-4 (W = 18)."""
    return validate_tree(5, [(0, 1), (0, 2), (0, 3), (3, 4)])


def vertex_count(n0: int, s: int, t: int) -> int:
    if n0 < 1 or s < 2 or t < 0:
        raise BadParameter(f"need n0 >= 1, s >= 2, t >= 0; got ({n0}, {s}, {t})")
    return n0 * (s + 1) ** t


def _wrap(seed, s) -> FractalGraph:
    n = seed.n
    return FractalGraph(seed, s, 0, _frozen(np.zeros(n, np.int64)),
                        _frozen(np.zeros(n, np.int8)))


def vicsek_step(graph, s: int) -> FractalGraph:
    """Apply V_s once.

    Existing ids are kept. New ids follow: the two middles of input edge
    ``i`` are ``n + 2i`` (next to ``u``) and ``n + 2i + 1`` (next to ``v``),
    then the attached leaves vertex by vertex.
    """
    if s < 2:
        raise BadParameter(f"s must be >= 2, got {s}")
    if isinstance(graph, FractalGraph):
        if graph.s != s:
            raise BadParameter(f"fractal was built with s={graph.s}, not {s}")
        prev = graph
    else:
        prev = _wrap(graph, s)
    g = as_graph(prev)
    n, m = g.n, g.m
    deg = g.degrees
    if n and deg.max() > s:
        v = int(np.argmax(deg > s))
        raise DegreeExceedsS(f"vertex {v} has degree {int(deg[v])} > s={s}")

    u, v = g.edges[:, 0], g.edges[:, 1]
    a = n + 2 * np.arange(m, dtype=np.int64)
    b = a + 1
    paths = np.stack([u, a, a, b, b, v], axis=1).reshape(-1, 2)

    extra = s - deg
    hosts = np.repeat(np.arange(n, dtype=np.int64), extra)
    leaves = n + 2 * m + np.arange(hosts.shape[0], dtype=np.int64)
    edges = np.concatenate([paths, np.stack([hosts, leaves], axis=1)])

    t = prev.t + 1
    total = n + 2 * m + hosts.shape[0]
    birth = np.concatenate([prev.birth_step, np.full(total - n, t, np.int64)])
    kind = np.concatenate([prev.vertex_kind,
                           np.full(2 * m, MIDDLE, np.int8),
                           np.full(hosts.shape[0], LEAF, np.int8)])
    return FractalGraph(Tree._trusted(total, edges), s, t,
                        _frozen(birth), _frozen(kind))


def generate(seed, s: int, t: int, cap=None) -> FractalGraph:
    """Generation ``t`` of the generalized Vicsek fractal grown from ``seed``."""
    seed = as_graph(seed)
    if t < 0:
        raise BadParameter(f"t must be >= 0, got {t}")
    if s < 2:
        raise BadParameter(f"s must be >= 2, got {s}")
    if seed.max_degree() > s:
        v = int(np.argmax(seed.degrees > s))
        raise DegreeExceedsS(f"seed vertex {v} has degree {int(seed.degrees[v])} > s={s}")
    projected = vertex_count(seed.n, s, t)
    limit = cap_vertices(cap)
    if projected > limit:
        raise SizeCapExceeded(
            f"generation t={t} would have {projected} vertices (cap {limit})")
    out = _wrap(seed, s)
    for _ in range(t):
        out = vicsek_step(out, s)
    return out


def write_fractal(fractal: FractalGraph, path) -> Path:
    """Write the edge list to ``path`` and the metadata to ``path + '.json'``."""
    path = Path(path)
    write_edge_list(fractal.graph, path)
    sidecar = path.with_name(path.name + ".json")
    sidecar.write_text(json.dumps(fractal.sidecar()) + "\n", newline="\n")
    return sidecar


def _frozen(arr):
    arr.setflags(write=False)
    return arr
