"""Hitting times of the simple random walk: two exact oracles and Monte Carlo."""
from __future__ import annotations

import heapq
import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from . import kernels
from .errors import (BadParameter, DegenerateSize, IdOutOfRange, NotConnected,
                     SameSourceTarget, TooLargeForExactSolve)
from .tree import as_graph

EXACT_SOLVE_CAP = 300
Z95 = 1.959963984540054


@dataclass(frozen=True)
class HittingTimeTable:
    """``F[u, v]`` is the expected number of steps from ``u`` to first reach ``v``."""

    F: np.ndarray
    exact: bool

    @property
    def n(self) -> int:
        return self.F.shape[0]


@dataclass(frozen=True)
class WalkEstimate:
    mean: float
    half_width_95: float
    samples: int
    rng_seed: int

    def to_json(self, exact=None) -> dict:
        out = {
            "mean": self.mean,
            "ci95": None if math.isinf(self.half_width_95) else self.half_width_95,
            "samples": self.samples,
            "seed": self.rng_seed,
        }
        if exact is not None:
            exact = Fraction(exact)
            out["exact_num"] = str(exact.numerator)
            out["exact_den"] = str(exact.denominator)
        return out


def _check_target(g, target):
    if not 0 <= target < g.n:
        raise IdOutOfRange(f"vertex {target} not in [0, {g.n})")


def hitting_times_tree(tree, target: int) -> np.ndarray:
    """Exact hitting times to ``target`` on a tree, in linear time.

    Stepping from ``a`` to its neighbour toward the target takes
    ``2 * N_a - 1`` steps on average, ``N_a`` being the size of the component
    containing ``a`` once that edge is cut.
    """
    g = as_graph(tree)
    _check_target(g, target)
    indptr, indices = g.csr
    order, parent, dist = kernels.bfs(indptr, indices, int(target))
    if order.shape[0] != g.n or g.m != g.n - 1:
        raise NotConnected("input is not a tree")
    size = kernels.subtree_sizes(order, parent, dist)
    return kernels.hitting_to_root(order, parent, size, dist)


def hitting_times_solve(graph, target: int, cap: int = EXACT_SOLVE_CAP) -> list[Fraction]:
    """Exact hitting times to ``target`` on any connected graph.

    Solves ``k_u h_u - sum_{w ~ u} h_w = k_u`` (u != target, h_target = 0) by
    sparse Gaussian elimination over the rationals, always pivoting on the
    row with the fewest nonzeros. Trees are eliminated leaf-first with no
    fill-in.
    """
    g = as_graph(graph)
    _check_target(g, target)
    if g.n > cap:
        raise TooLargeForExactSolve(f"{g.n} vertices exceeds the exact-solve cap {cap}")
    if not g.is_connected():
        raise NotConnected("graph is not connected")
    rows = {}
    for u in range(g.n):
        if u == target:
            continue
        deg = int(g.degrees[u])
        coeffs = {u: Fraction(deg)}
        for w in g.neighbors(u).tolist():
            if w != target:
                coeffs[w] = Fraction(-1)
        rows[u] = [coeffs, Fraction(deg)]

    heap = [(len(r[0]), u) for u, r in rows.items()]
    heapq.heapify(heap)
    done = set()
    pivots = []
    while heap:
        nnz, p = heapq.heappop(heap)
        if p in done or nnz != len(rows[p][0]):
            continue
        done.add(p)
        coeffs, rhs = rows[p]
        piv = coeffs[p]
        for j in [k for k in coeffs if k != p]:
            row_j = rows[j][0]
            factor = row_j.pop(p) / piv
            for k, a_pk in coeffs.items():
                if k == p:
                    continue
                val = row_j.get(k, 0) - factor * a_pk
                if val:
                    row_j[k] = val
                else:
                    row_j.pop(k, None)
            rows[j][1] -= factor * rhs
            heapq.heappush(heap, (len(row_j), j))
        pivots.append(p)

    h = [Fraction(0)] * g.n
    for p in reversed(pivots):
        coeffs, rhs = rows[p]
        acc = rhs
        for k, a in coeffs.items():
            if k != p:
                acc -= a * h[k]
        h[p] = acc / coeffs[p]
    return h


def hitting_time_table(graph) -> HittingTimeTable:
    """Exact all-pairs table (tree decomposition on trees, elimination otherwise)."""
    g = as_graph(graph)
    if g.m == g.n - 1 and g.is_connected():
        F = np.empty((g.n, g.n), dtype=np.int64)
        for v in range(g.n):
            F[:, v] = hitting_times_tree(g, v)
        return HittingTimeTable(F, True)
    F = np.empty((g.n, g.n), dtype=object)
    for v in range(g.n):
        F[:, v] = hitting_times_solve(g, v)
    return HittingTimeTable(F, True)


def mfpt_oracle(graph, method: str = "auto", cap: int = EXACT_SOLVE_CAP) -> Fraction:
    """Average of exact hitting times over ordered pairs of distinct vertices.

    ``method`` is ``"tree"``, ``"solve"`` or ``"auto"`` (tree decomposition
    when the graph is a tree, otherwise elimination). The elimination path is
    subject to ``cap``; the tree path is not.
    """
    g = as_graph(graph)
    if g.n < 2:
        raise DegenerateSize("mean first-passage time needs at least 2 vertices")
    if method == "auto":
        method = "tree" if g.m == g.n - 1 else "solve"
    if method == "tree":
        total = sum(int(hitting_times_tree(g, v).sum()) for v in range(g.n))
    elif method == "solve":
        if g.n > cap:
            raise TooLargeForExactSolve(f"{g.n} vertices exceeds the exact-solve cap {cap}")
        total = sum(sum(hitting_times_solve(g, v, cap)) for v in range(g.n))
    else:
        raise BadParameter(f"unknown method {method!r}")
    return Fraction(total) / (g.n * (g.n - 1))


# ---------------------------------------------------------------------------
# Monte Carlo
# ---------------------------------------------------------------------------

def _estimate(values, seed) -> WalkEstimate:
    values = np.asarray(values, dtype=np.float64)
    k = values.shape[0]
    mean = float(values.mean())
    if k < 2:
        return WalkEstimate(mean, math.inf, k, seed)
    sd = float(values.std(ddof=1))
    return WalkEstimate(mean, Z95 * sd / math.sqrt(k), k, seed)


def mc_first_passage(graph, source: int, target: int, samples: int,
                     rng_seed: int, use_numba=None) -> WalkEstimate:
    """Mean of ``samples`` independent walk lengths from ``source`` to ``target``.

    Walk ``i`` uses RNG stream ``i`` of ``rng_seed``.
    """
    g = as_graph(graph)
    _check_target(g, source)
    _check_target(g, target)
    if source == target:
        raise SameSourceTarget(f"source and target are both {source}")
    if samples < 1:
        raise BadParameter(f"samples must be >= 1, got {samples}")
    indptr, indices = g.csr
    src = np.full(samples, source, dtype=np.int64)
    tgt = np.full(samples, target, dtype=np.int64)
    steps = kernels.walk_lengths(indptr, indices, src, tgt, rng_seed, 0, use_numba)
    return _estimate(steps, rng_seed)


def draw_pairs(n: int, count: int, rng_seed: int) -> tuple[np.ndarray, np.ndarray]:
    """Uniform ordered pairs of distinct vertices, one RNG stream per pair."""
    state = kernels.stream_states_np(rng_seed ^ kernels.PAIR_DOMAIN, 0, count)
    z1 = kernels.mix64_np(state + kernels.GOLDEN)
    z2 = kernels.mix64_np(state + kernels.GOLDEN + kernels.GOLDEN)
    s32 = np.uint64(32)
    u = ((z1 >> s32) * np.uint64(n)) >> s32
    v = ((z2 >> s32) * np.uint64(n - 1)) >> s32
    u = u.astype(np.int64)
    v = v.astype(np.int64)
    v += v >= u
    return u, v


def mc_mfpt(graph, pair_samples: int, walk_samples: int, rng_seed: int,
            use_numba=None) -> WalkEstimate:
    """Monte Carlo mean first-passage time.

    Draws ``pair_samples`` uniform ordered pairs and runs ``walk_samples``
    walks per pair; the estimate is the mean of the per-pair means, whose
    spread gives the 95% half-width. ``samples`` in the result counts walks.
    """
    g = as_graph(graph)
    if g.n < 2:
        raise DegenerateSize("mean first-passage time needs at least 2 vertices")
    if pair_samples < 1 or walk_samples < 1:
        raise BadParameter("pair_samples and walk_samples must be >= 1")
    u, v = draw_pairs(g.n, pair_samples, rng_seed)
    src = np.repeat(u, walk_samples)
    tgt = np.repeat(v, walk_samples)
    indptr, indices = g.csr
    steps = kernels.walk_lengths(indptr, indices, src, tgt, rng_seed, 0, use_numba)
    per_pair = steps.reshape(pair_samples, walk_samples).mean(axis=1)
    est = _estimate(per_pair, rng_seed)
    return WalkEstimate(est.mean, est.half_width_95, pair_samples * walk_samples,
                        rng_seed)
