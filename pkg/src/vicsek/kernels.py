"""Hot inner loops: breadth-first search, subtree accumulation, random walks.

Every kernel exists twice, a numba ``@njit`` version and a vectorised
pure-numpy version. Both produce identical results (the walk kernels are
bit-identical for a given seed). The numba path is used when numba imports
and the environment variable ``VICSEK_DISABLE_NUMBA`` is unset or falsy.

Graphs are passed in CSR form: ``indptr`` (n + 1,) and ``indices`` holding
each vertex's neighbours in ascending order.
"""
import os

import numpy as np

try:
    import numba

    HAVE_NUMBA = True
except ImportError:  # pragma: no cover
    numba = None
    HAVE_NUMBA = False

_DISABLED = os.environ.get("VICSEK_DISABLE_NUMBA", "").strip().lower() in (
    "1", "true", "yes", "on")
USE_NUMBA = HAVE_NUMBA and not _DISABLED


def _njit(fn):
    if HAVE_NUMBA:
        return numba.njit(cache=True, nogil=True)(fn)
    return None


MASK64 = (1 << 64) - 1
GOLDEN = np.uint64(0x9E3779B97F4A7C15)
_M1 = np.uint64(0xBF58476D1CE4E5B9)
_M2 = np.uint64(0x94D049BB133111EB)
_S30 = np.uint64(30)
_S27 = np.uint64(27)
_S31 = np.uint64(31)
_S32 = np.uint64(32)
# domain separator for pair-selection streams
PAIR_DOMAIN = 0xD1B54A32D192ED03


# ---------------------------------------------------------------------------
# splitmix64
# ---------------------------------------------------------------------------

def mix64_np(z):
    """splitmix64 finaliser on a uint64 array (wrapping arithmetic)."""
    z = np.asarray(z, dtype=np.uint64)
    with np.errstate(over="ignore"):
        z = (z ^ (z >> _S30)) * _M1
        z = (z ^ (z >> _S27)) * _M2
    return z ^ (z >> _S31)


def stream_states_np(seed, first, count):
    """Initial states of streams ``first .. first+count-1`` for ``seed``."""
    idx = np.arange(first, first + count, dtype=np.uint64)
    return mix64_np(np.uint64(seed & MASK64) ^ mix64_np(idx))


@_njit
def _mix64_nb(z):
    z = (z ^ (z >> _S30)) * _M1
    z = (z ^ (z >> _S27)) * _M2
    return z ^ (z >> _S31)


# ---------------------------------------------------------------------------
# BFS
# ---------------------------------------------------------------------------

@_njit
def _bfs_nb(indptr, indices, source):
    n = indptr.shape[0] - 1
    dist = np.full(n, -1, dtype=np.int64)
    parent = np.full(n, -1, dtype=np.int64)
    order = np.empty(n, dtype=np.int64)
    dist[source] = 0
    order[0] = source
    head = 0
    tail = 1
    while head < tail:
        u = order[head]
        head += 1
        du = dist[u] + 1
        for k in range(indptr[u], indptr[u + 1]):
            w = indices[k]
            if dist[w] < 0:
                dist[w] = du
                parent[w] = u
                order[tail] = w
                tail += 1
    return order[:tail], parent, dist


def _expand(indptr, indices, frontier):
    """Neighbours of ``frontier`` in CSR order, with the vertex they came from."""
    starts = indptr[frontier]
    counts = indptr[frontier + 1] - starts
    total = int(counts.sum())
    if total == 0:
        empty = np.empty(0, dtype=np.int64)
        return empty, empty
    owners = np.repeat(frontier, counts)
    offsets = np.arange(total) - np.repeat(np.cumsum(counts) - counts, counts)
    return indices[np.repeat(starts, counts) + offsets], owners


def _bfs_np(indptr, indices, source):
    n = indptr.shape[0] - 1
    dist = np.full(n, -1, dtype=np.int64)
    parent = np.full(n, -1, dtype=np.int64)
    dist[source] = 0
    chunks = [np.array([source], dtype=np.int64)]
    frontier = chunks[0]
    level = 0
    while frontier.size:
        level += 1
        nbrs, owners = _expand(indptr, indices, frontier)
        fresh = dist[nbrs] < 0
        nbrs, owners = nbrs[fresh], owners[fresh]
        # first discovery wins, in queue order
        _, first = np.unique(nbrs, return_index=True)
        first.sort()
        frontier = nbrs[first]
        dist[frontier] = level
        parent[frontier] = owners[first]
        chunks.append(frontier)
    return np.concatenate(chunks), parent, dist


@_njit
def _distance_sum_nb(indptr, indices):
    n = indptr.shape[0] - 1
    dist = np.empty(n, dtype=np.int64)
    queue = np.empty(n, dtype=np.int64)
    total = 0
    for src in range(n):
        dist[:] = -1
        dist[src] = 0
        queue[0] = src
        head = 0
        tail = 1
        while head < tail:
            u = queue[head]
            head += 1
            du = dist[u] + 1
            for k in range(indptr[u], indptr[u + 1]):
                w = indices[k]
                if dist[w] < 0:
                    dist[w] = du
                    total += du
                    queue[tail] = w
                    tail += 1
        if tail < n:
            return -1
    return total // 2


def _distance_sum_np(indptr, indices):
    n = indptr.shape[0] - 1
    total = 0
    for src in range(n):
        _, _, dist = _bfs_np(indptr, indices, src)
        if (dist < 0).any():
            return -1
        total += int(dist.sum())
    return total // 2


# ---------------------------------------------------------------------------
# rooted-tree accumulation
# ---------------------------------------------------------------------------

@_njit
def _subtree_sizes_nb(order, parent):
    n = parent.shape[0]
    size = np.ones(n, dtype=np.int64)
    for i in range(order.shape[0] - 1, 0, -1):
        v = order[i]
        size[parent[v]] += size[v]
    return size


def _subtree_sizes_np(order, parent, dist):
    size = np.ones(parent.shape[0], dtype=np.int64)
    depth = dist[order]
    # order is sorted by depth, so levels are contiguous slices
    cuts = np.flatnonzero(np.diff(depth)) + 1
    for level in reversed(np.split(order, cuts)[1:]):
        np.add.at(size, parent[level], size[level])
    return size


@_njit
def _hitting_to_root_nb(order, parent, size):
    n = parent.shape[0]
    h = np.zeros(n, dtype=np.int64)
    for i in range(1, order.shape[0]):
        v = order[i]
        h[v] = h[parent[v]] + 2 * size[v] - 1
    return h


def _hitting_to_root_np(order, parent, size, dist):
    h = np.zeros(parent.shape[0], dtype=np.int64)
    depth = dist[order]
    cuts = np.flatnonzero(np.diff(depth)) + 1
    for level in np.split(order, cuts)[1:]:
        h[level] = h[parent[level]] + 2 * size[level] - 1
    return h


# ---------------------------------------------------------------------------
# random walks
# ---------------------------------------------------------------------------

@_njit
def _walk_lengths_nb(indptr, indices, sources, targets, seed, first_stream):
    m = sources.shape[0]
    out = np.empty(m, dtype=np.int64)
    for i in range(m):
        state = _mix64_nb(seed ^ _mix64_nb(np.uint64(first_stream + i)))
        pos = sources[i]
        tgt = targets[i]
        steps = 0
        while pos != tgt:
            state = state + GOLDEN
            z = _mix64_nb(state)
            lo = indptr[pos]
            deg = np.uint64(indptr[pos + 1] - lo)
            pick = ((z >> _S32) * deg) >> _S32
            pos = indices[lo + np.int64(pick)]
            steps += 1
        out[i] = steps
    return out


def _walk_lengths_np(indptr, indices, sources, targets, seed, first_stream):
    m = sources.shape[0]
    out = np.zeros(m, dtype=np.int64)
    state = stream_states_np(seed, first_stream, m)
    pos = sources.astype(np.int64).copy()
    live = np.flatnonzero(pos != targets)
    pos, state, tgt = pos[live], state[live], targets[live]
    steps = 0
    while live.size:
        steps += 1
        state = state + GOLDEN
        z = mix64_np(state)
        lo = indptr[pos]
        deg = (indptr[pos + 1] - lo).astype(np.uint64)
        pick = ((z >> _S32) * deg) >> _S32
        pos = indices[lo + pick.astype(np.int64)]
        done = pos == tgt
        if done.any():
            out[live[done]] = steps
            keep = ~done
            live, pos, state, tgt = live[keep], pos[keep], state[keep], tgt[keep]
    return out


# ---------------------------------------------------------------------------
# dispatch
# ---------------------------------------------------------------------------

def bfs(indptr, indices, source, use_numba=None):
    """BFS from ``source``: (visit order, parent, dist); unreached dist = -1."""
    if _pick(use_numba):
        return _bfs_nb(indptr, indices, source)
    return _bfs_np(indptr, indices, source)


def distance_sum(indptr, indices, use_numba=None):
    """Sum of hop distances over unordered pairs, or -1 if disconnected."""
    if _pick(use_numba):
        return int(_distance_sum_nb(indptr, indices))
    return _distance_sum_np(indptr, indices)


def subtree_sizes(order, parent, dist, use_numba=None):
    """Vertex count of each subtree of a BFS tree rooted at ``order[0]``."""
    if _pick(use_numba):
        return _subtree_sizes_nb(order, parent)
    return _subtree_sizes_np(order, parent, dist)


def hitting_to_root(order, parent, size, dist, use_numba=None):
    """Expected steps to reach the root of a tree, from every vertex."""
    if _pick(use_numba):
        return _hitting_to_root_nb(order, parent, size)
    return _hitting_to_root_np(order, parent, size, dist)


def walk_lengths(indptr, indices, sources, targets, seed, first_stream=0,
                 use_numba=None):
    """First-passage step count of one simple random walk per (source, target).

    Walk ``i`` draws from stream ``first_stream + i`` of ``seed``; the state is
    advanced splitmix64-style and the next vertex is the neighbour at index
    ``((z >> 32) * degree) >> 32`` of the sorted adjacency list.
    """
    sources = np.ascontiguousarray(sources, dtype=np.int64)
    targets = np.ascontiguousarray(targets, dtype=np.int64)
    seed = int(seed) & MASK64
    if _pick(use_numba):
        return _walk_lengths_nb(indptr, indices, sources, targets,
                                np.uint64(seed), int(first_stream))
    return _walk_lengths_np(indptr, indices, sources, targets,
                            seed, int(first_stream))


def _pick(use_numba):
    if use_numba is None:
        return USE_NUMBA
    if use_numba and not HAVE_NUMBA:
        raise RuntimeError("numba is not installed")
    return bool(use_numba)
