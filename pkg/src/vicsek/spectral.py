"""Laplacian spectra, pseudoinverse hitting times and eigenvalue decimation."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .closed_form import printed_ap5_sums
from .errors import (BadParameter, DenseCapExceeded, IllConditioned,
                     InternalInconsistency, NoThreeRealRoots)
from .tree import as_graph
from .walks import HittingTimeTable

DENSE_CAP = 2000
ZERO_TOL = 1e-8
MATCH_TOL = 1e-6


@dataclass(frozen=True)
class SpectrumResult:
    eigenvalues: np.ndarray
    zero_index: int
    reciprocal_sum: float

    @property
    def nonzero(self) -> np.ndarray:
        return np.delete(self.eigenvalues, self.zero_index)


@dataclass(frozen=True)
class DecimationTriple:
    parent: float
    children: tuple[float, float, float]
    residuals: tuple[float, float, float]


def laplacian(graph) -> np.ndarray:
    """Dense ``D - A`` with int64 entries."""
    g = as_graph(graph)
    L = np.zeros((g.n, g.n), dtype=np.int64)
    u, v = g.edges[:, 0], g.edges[:, 1]
    L[u, v] = -1
    L[v, u] = -1
    L[np.arange(g.n), np.arange(g.n)] = g.degrees
    return L


def _dense_check(g, cap):
    if g.n > cap:
        raise DenseCapExceeded(f"{g.n} vertices exceeds the dense cap {cap}")


def pseudoinverse(graph, cap: int = DENSE_CAP) -> np.ndarray:
    """Moore-Penrose inverse of the Laplacian via a rank-one shift.

    ``L+ = (L - J/n)^-1 + J/n`` with ``J`` the all-ones matrix. Raises
    :class:`IllConditioned` when one step of iterative refinement suggests
    more than 6 of the ~16 double-precision digits were lost.
    """
    g = as_graph(graph)
    _dense_check(g, cap)
    n = g.n
    J = np.full((n, n), 1.0 / n)
    M = laplacian(g).astype(np.float64) - J
    X = np.linalg.inv(M)
    R = M @ X - np.eye(n)
    correction = np.linalg.solve(M, R)
    err = np.abs(correction).max() / max(np.abs(X).max(), 1.0)
    if err > 1e-10:
        raise IllConditioned(f"pseudoinverse lost too many digits (rel. error ~{err:.1e})")
    return X - correction + J


def pseudoinverse_hitting(graph, cap: int = DENSE_CAP) -> HittingTimeTable:
    """All-pairs hitting times from the Laplacian pseudoinverse.

    ``F(i -> j) = sum_a k_a (L+_ia - L+_ij - L+_ja + L+_jj)``.
    """
    g = as_graph(graph)
    Lp = pseudoinverse(g, cap)
    deg = g.degrees.astype(np.float64)
    r = Lp @ deg
    diag = np.diag(Lp)
    F = r[:, None] - r[None, :] + deg.sum() * (diag[None, :] - Lp)
    np.fill_diagonal(F, 0.0)
    return HittingTimeTable(F, False)


def spectrum(graph, cap: int = DENSE_CAP) -> SpectrumResult:
    g = as_graph(graph)
    _dense_check(g, cap)
    ev = np.linalg.eigvalsh(laplacian(g).astype(np.float64))
    tol = ZERO_TOL * max(1.0, float(ev[-1]))
    zeros = np.flatnonzero(np.abs(ev) <= tol)
    if zeros.shape[0] != 1:
        raise InternalInconsistency(
            f"expected exactly one zero eigenvalue, found {zeros.shape[0]}")
    zi = int(zeros[0])
    rest = np.delete(ev, zi)
    if (rest <= 0).any():
        raise InternalInconsistency("negative Laplacian eigenvalue")
    return SpectrumResult(ev, zi, float(np.sum(1.0 / rest)))


def mfpt_eigen(spec: SpectrumResult) -> float:
    """Mean first-passage time of a tree: twice the reciprocal eigenvalue sum."""
    return 2.0 * spec.reciprocal_sum


def multiplicity_hints(eigenvalues, tol: float = ZERO_TOL) -> np.ndarray:
    """For each eigenvalue, how many eigenvalues lie within ``tol`` of it."""
    ev = np.asarray(eigenvalues)
    lo = np.searchsorted(ev, ev - tol, side="left")
    hi = np.searchsorted(ev, ev + tol, side="right")
    return hi - lo


def _cubic(x, phi, s):
    return x * (x - 3.0) * (x - (s + 1.0)) - phi


def decimate_eigenvalue(phi: float, s: int) -> DecimationTriple:
    """Solve ``x (x - 3)(x - s - 1) = phi`` for its three real roots.

    Roots come from the companion matrix and get Newton polishing until the
    residual is at most ``1e-10 * max(1, phi)``.
    """
    if s < 2:
        raise BadParameter(f"s must be >= 2, got {s}")
    if not phi > 0:
        raise BadParameter(f"parent eigenvalue must be positive, got {phi}")
    b, c = -(s + 4.0), 3.0 * (s + 1.0)
    companion = np.array([[0.0, 0.0, phi],
                          [1.0, 0.0, -c],
                          [0.0, 1.0, -b]])
    roots = np.linalg.eigvals(companion)
    scale = max(1.0, phi)
    if np.abs(roots.imag).max() > 1e-7 * scale:
        raise NoThreeRealRoots(f"x(x-3)(x-{s + 1}) = {phi} has complex roots")
    xs = np.sort(roots.real)
    tol = 1e-10 * scale
    for _ in range(8):
        res = _cubic(xs, phi, s)
        if np.abs(res).max() <= tol:
            break
        xs = xs - res / (3 * xs * xs + 2 * b * xs + c)
    res = _cubic(xs, phi, s)
    if np.abs(res).max() > tol:
        raise InternalInconsistency(f"root polishing failed for phi={phi}, s={s}")
    if np.min(np.diff(xs)) <= 0:
        raise InternalInconsistency(f"children of phi={phi} are not distinct")
    return DecimationTriple(float(phi), tuple(map(float, xs)), tuple(map(float, res)))


def decimation_report(parent_spec: SpectrumResult, child_spec: SpectrumResult,
                      s: int, tol: float = MATCH_TOL) -> dict:
    """Match every nonzero parent eigenvalue's three roots to child eigenvalues.

    Parents equal within ``ZERO_TOL`` are grouped and reported once with
    their multiplicity.
    """
    child = child_spec.eigenvalues
    parents = parent_spec.nonzero
    groups = []
    i = 0
    while i < parents.shape[0]:
        j = i
        while j + 1 < parents.shape[0] and parents[j + 1] - parents[i] <= ZERO_TOL:
            j += 1
        groups.append((float(parents[i:j + 1].mean()), j - i + 1))
        i = j + 1
    entries = []
    worst = 0.0
    for phi, mult in groups:
        tri = decimate_eigenvalue(phi, s)
        idx = [int(np.argmin(np.abs(child - x))) for x in tri.children]
        gaps = [abs(float(child[k]) - x) for k, x in zip(idx, tri.children)]
        worst = max(worst, *gaps)
        entries.append({
            "parent": phi,
            "multiplicity": mult,
            "children": list(tri.children),
            "residuals": list(tri.residuals),
            "matched_child_indices": idx,
            "match_errors": gaps,
            "matched": max(gaps) <= tol,
        })
    return {
        "s": s,
        "parent_nonzero_count": int(parents.shape[0]),
        "distinct_parents": len(entries),
        "max_match_error": worst,
        "tolerance": tol,
        "all_matched": all(e["matched"] for e in entries),
        "parents": entries,
    }


def eval_ap5_sums(s: int, t: int):
    """Printed partial sums and ``2 * (first + second)`` (exact rationals)."""
    first, second = printed_ap5_sums(s, t)
    return first, second, 2 * (first + second)
