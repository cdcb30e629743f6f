"""Baseline layer combiners: adjacency sums, summed spectral kernels, averaged L_rw."""
from __future__ import annotations

import enum
import warnings
from dataclasses import dataclass, field
from typing import List, Optional

import numpy as np

from . import _kernels
from .graph import LayerGraph, MultiLayerGraph, laplacian, normalized_adjacency
from .spectral import (Clustering, KMeansConfig, canonical_signs, decompose,
                       kmeans, relabel_by_first_appearance, spectral_cluster)


class BaselineKind(enum.Enum):
    SC_SUM = "sc-sum"
    SC_SUM_NORMALIZED = "sc-sum-norm"
    KERNEL_KMEANS = "k-kmeans"
    SC_AL = "sc-al"


def sc_sum(mlg: MultiLayerGraph, k: int, normalized: bool = False,
           km: KMeansConfig = KMeansConfig()) -> Clustering:
    if normalized:
        W = sum(normalized_adjacency(g) for g in mlg)
        np.fill_diagonal(W, 0.0)
        W = 0.5 * (W + W.T)
    else:
        W = sum(np.asarray(g.weights) for g in mlg)
    return spectral_cluster(LayerGraph(W, "sum"), k, km)


# ---------------------------------------------------------------------------
# kernel k-means
# ---------------------------------------------------------------------------

def spectral_kernel(g: LayerGraph, d: int) -> np.ndarray:
    """Projector onto the first ``d`` eigenvectors of the symmetric Laplacian."""
    U = decompose(g, "sym").eigenvectors[:, :d]
    return U @ U.T


def summed_spectral_kernel(mlg: MultiLayerGraph, d: int) -> np.ndarray:
    if not 1 <= d <= mlg.n:
        raise ValueError(f"d={d} out of range [1, {mlg.n}]")
    K = sum(spectral_kernel(g, d) for g in mlg)
    return 0.5 * (K + K.T)


@dataclass
class KernelKMeansResult:
    clustering: Clustering
    cost: float
    cost_trace: List[float] = field(default_factory=list)
    restart_traces: List[List[float]] = field(default_factory=list)


def _kernel_plusplus(K, k, rng):
    n = K.shape[0]
    diag = np.diag(K)
    first = int(rng.integers(n))
    chosen = [first]
    d2 = np.maximum(diag + diag[first] - 2 * K[:, first], 0.0)
    for _ in range(1, k):
        total = d2.sum()
        if total > 0:
            idx = int(np.searchsorted(np.cumsum(d2), rng.random() * total, side="right"))
            idx = min(idx, n - 1)
        else:
            idx = int(rng.integers(n))
        chosen.append(idx)
        d2 = np.minimum(d2, np.maximum(diag + diag[idx] - 2 * K[:, idx], 0.0))
    # each point joins its nearest seed; seeds keep their own cluster
    seeds = np.array(chosen)
    dist = diag[:, None] + diag[seeds][None, :] - 2 * K[:, seeds]
    labels = np.argmin(dist, axis=1).astype(np.int64)
    labels[seeds] = np.arange(k)
    return labels


def _repair_empty(D, labels, k):
    counts = np.bincount(labels, minlength=k)
    empty = np.flatnonzero(counts == 0)
    if empty.size == 0:
        return labels
    own = D[np.arange(labels.size), labels]
    own = np.where(np.isfinite(own), own, -np.inf)
    for c in empty:
        # only steal from clusters that keep at least one member
        counts = np.bincount(labels, minlength=k)
        movable = np.flatnonzero(counts[labels] > 1)
        if movable.size == 0:
            break
        i = movable[np.argmax(own[movable])]
        labels[i] = c
        own[i] = -np.inf
    return labels


def _kernel_cost(K, labels, k):
    D = _kernels.kernel_dist(K, labels, k)
    return float(D[np.arange(labels.size), labels].sum())


def _kernel_lloyd(K, labels, k, max_iters):
    labels = _repair_empty(_kernels.kernel_dist(K, labels, k), labels.copy(), k)
    trace = [_kernel_cost(K, labels, k)]
    for _ in range(max_iters):
        D = _kernels.kernel_dist(K, labels, k)
        own = D[np.arange(labels.size), labels]
        best = np.argmin(D, axis=1)
        # keep the current cluster unless another is strictly closer
        keep = D[np.arange(labels.size), best] >= own
        new = np.where(keep, labels, best).astype(np.int64)
        new = _repair_empty(_kernels.kernel_dist(K, new, k), new, k)
        if np.array_equal(new, labels):
            break
        labels = new
        trace.append(_kernel_cost(K, new, k))
    return labels, trace


def kernel_kmeans(K, k: int, cfg: KMeansConfig = KMeansConfig()) -> KernelKMeansResult:
    """Kernel k-means using only kernel entries; best of ``cfg.restarts`` runs."""
    K = np.ascontiguousarray(K, dtype=np.float64)
    n = K.shape[0]
    if not 1 <= k <= n:
        raise ValueError(f"k={k} out of range [1, {n}]")
    best = None
    traces = []
    for r in range(cfg.restarts):
        rng = np.random.default_rng([cfg.seed & 0xFFFFFFFFFFFFFFFF, r])
        labels, trace = _kernel_lloyd(K, _kernel_plusplus(K, k, rng), k, cfg.max_iters)
        traces.append(trace)
        if best is None or trace[-1] < best[1]:
            best = (labels, trace[-1], trace)
    labels, cost, trace = best
    return KernelKMeansResult(Clustering(relabel_by_first_appearance(labels), k),
                              cost, trace, traces)


def kernel_kmeans_sum(mlg: MultiLayerGraph, k: int, d: Optional[int] = None,
                      km: KMeansConfig = KMeansConfig()) -> Clustering:
    K = summed_spectral_kernel(mlg, k if d is None else d)
    return kernel_kmeans(K, k, km).clustering


# ---------------------------------------------------------------------------
# averaged random-walk Laplacian
# ---------------------------------------------------------------------------

COMPLEX_TOL = 1e-8


def averaged_rw_embedding(mlg: MultiLayerGraph, k: int) -> np.ndarray:
    """First ``k`` eigenvectors of the mean random-walk Laplacian.

    A single layer goes through the symmetric route of ``decompose``. For
    several layers the mean is non-symmetric; a general eigensolver is used
    and, if any of the ``k`` leading eigenpairs has an imaginary part above
    ``COMPLEX_TOL``, the symmetric part of the mean is used instead.
    """
    if not 1 <= k <= mlg.n:
        raise ValueError(f"k={k} out of range [1, {mlg.n}]")
    if mlg.M == 1:
        return decompose(mlg[0], "rw").eigenvectors[:, :k]
    A = sum(laplacian(g, "rw") for g in mlg) / mlg.M
    w, V = np.linalg.eig(A)
    order = np.lexsort((np.abs(w.imag), w.real))
    w, V = w[order[:k]], V[:, order[:k]]
    if np.max(np.abs(w.imag)) > COMPLEX_TOL or np.max(np.abs(V.imag)) > COMPLEX_TOL:
        warnings.warn("averaged random-walk Laplacian has complex leading eigenpairs; "
                      "falling back to its symmetric part", RuntimeWarning, stacklevel=2)
        _, V = np.linalg.eigh(0.5 * (A + A.T))
        V = V[:, :k]
    V = np.real(V)
    V = V / np.linalg.norm(V, axis=0)
    return canonical_signs(V)


def sc_al(mlg: MultiLayerGraph, k: int, km: KMeansConfig = KMeansConfig()) -> Clustering:
    return kmeans(averaged_rw_embedding(mlg, k), k, km)
