"""Eigendecomposition of Laplacians, spectral embedding and k-means."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.linalg

from . import _kernels
from .exceptions import ConfigError, EigenFailure
from .graph import (LaplacianKind, LayerGraph, MultiLayerGraph, _pinv_power,
                    degree_vector, laplacian)


@dataclass(frozen=True, eq=False)
class SpectralDecomposition:
    eigenvalues: np.ndarray
    eigenvectors: np.ndarray
    kind: LaplacianKind

    @property
    def n(self) -> int:
        return self.eigenvalues.shape[0]


@dataclass(frozen=True, eq=False)
class Embedding:
    coords: np.ndarray

    @property
    def k(self) -> int:
        return self.coords.shape[1]


@dataclass(frozen=True, eq=False)
class Clustering:
    labels: np.ndarray
    k: int

    def __post_init__(self):
        labels = np.array(self.labels, dtype=np.int64, copy=True)
        if self.k < 1:
            raise ConfigError("cluster count must be >= 1")
        if labels.size and (labels.min() < 0 or labels.max() >= self.k):
            raise ConfigError(f"labels must lie in [0, {self.k})")
        labels.setflags(write=False)
        object.__setattr__(self, "labels", labels)

    @property
    def n(self) -> int:
        return self.labels.shape[0]


@dataclass(frozen=True)
class KMeansConfig:
    restarts: int = 20
    max_iters: int = 300
    seed: int = 0
    tol: float = 1e-9

    def __post_init__(self):
        if self.restarts < 1 or self.max_iters < 1:
            raise ConfigError("restarts and max_iters must be >= 1")


def canonical_signs(V: np.ndarray) -> np.ndarray:
    """Flip columns so the largest-magnitude entry of each is positive.

    Entries within a relative 1e-9 of the column maximum count as tied; the
    lowest index among them decides.
    """
    V = np.array(V, dtype=np.float64, copy=True)
    A = np.abs(V)
    top = A.max(axis=0)
    pivot = np.argmax(A >= top * (1 - 1e-9), axis=0)
    signs = np.sign(V[pivot, np.arange(V.shape[1])])
    signs[signs == 0] = 1.0
    return V * signs


def relabel_by_first_appearance(labels: np.ndarray) -> np.ndarray:
    """Renumber labels 0, 1, ... in order of first occurrence."""
    labels = np.asarray(labels)
    _, first = np.unique(labels, return_index=True)
    order = labels[np.sort(first)]
    mapping = np.empty(labels.max() + 1, dtype=np.int64)
    mapping[order] = np.arange(order.size)
    return mapping[labels]


def _eigh(A: np.ndarray):
    try:
        w, V = scipy.linalg.eigh(A)
    except (np.linalg.LinAlgError, ValueError) as exc:
        raise EigenFailure(str(exc)) from exc
    if not (np.all(np.isfinite(w)) and np.all(np.isfinite(V))):
        raise EigenFailure("eigensolver returned non-finite values")
    return w, V


def symmetric_rw_operator(g: LayerGraph) -> np.ndarray:
    """Symmetric matrix similar to ``I - D^{-1}W``.

    Equal to the symmetric Laplacian on non-isolated vertices; isolated
    vertices get an identity row, matching the random-walk convention.
    """
    d = degree_vector(g)
    s = _pinv_power(d, -0.5)
    return np.eye(g.n) - s[:, None] * g.weights * s[None, :]


def decompose(g: LayerGraph, kind="rw") -> SpectralDecomposition:
    kind = LaplacianKind.parse(kind)
    if kind is LaplacianKind.RANDOM_WALK:
        w, X = _eigh(symmetric_rw_operator(g))
        d = degree_vector(g)
        scale = np.where(d > 0, _pinv_power(d, -0.5), 1.0)
        V = scale[:, None] * X
        V /= np.linalg.norm(V, axis=0)
    else:
        w, V = _eigh(laplacian(g, kind))
    V = canonical_signs(V)
    w.setflags(write=False)
    V.setflags(write=False)
    return SpectralDecomposition(w, V, kind)


def embed(dec: SpectralDecomposition, k: int) -> Embedding:
    if not 1 <= k <= dec.n:
        raise ValueError(f"k={k} out of range [1, {dec.n}]")
    return Embedding(np.array(dec.eigenvectors[:, :k]))


def fiedler_value(g: LayerGraph, kind="sym") -> float:
    if g.n < 2:
        return 0.0
    return float(decompose(g, kind).eigenvalues[1])


def most_informative_layer(mlg: MultiLayerGraph) -> int:
    """Index of the best-connected layer: largest second eigenvalue of L_sym."""
    vals = [fiedler_value(g, "sym") for g in mlg]
    return int(np.argmax(vals))


def _plusplus(X, k, rng):
    n = X.shape[0]
    centres = np.empty((k, X.shape[1]))
    centres[0] = X[rng.integers(n)]
    d2 = ((X - centres[0]) ** 2).sum(axis=1)
    for c in range(1, k):
        total = d2.sum()
        if total > 0:
            idx = int(np.searchsorted(np.cumsum(d2), rng.random() * total, side="right"))
            idx = min(idx, n - 1)
        else:
            idx = int(rng.integers(n))
        centres[c] = X[idx]
        d2 = np.minimum(d2, ((X - centres[c]) ** 2).sum(axis=1))
    return centres


def _lloyd(X, centres, max_iters, tol):
    k = centres.shape[0]
    for _ in range(max_iters):
        labels, d2 = _kernels.assign(X, centres)
        new, counts = _kernels.centroids(X, labels, k)
        empty = np.flatnonzero(counts == 0)
        if empty.size:
            # repair: move the worst-fitting points into the empty clusters
            far = np.argsort(-d2, kind="stable")[: empty.size]
            for c, i in zip(empty, far):
                new[c] = X[i]
        shift = np.abs(new - centres).max()
        centres = new
        if shift <= tol:
            break
    labels, d2 = _kernels.assign(X, centres)
    return labels, float(d2.sum())


def kmeans_cost(X: np.ndarray, labels: np.ndarray) -> float:
    cost = 0.0
    for c in np.unique(labels):
        P = X[labels == c]
        cost += float(((P - P.mean(axis=0)) ** 2).sum())
    return cost


def kmeans(points, k: int, cfg: KMeansConfig = KMeansConfig()) -> Clustering:
    """Best-of-restarts Lloyd k-means with k-means++ seeding.

    Restart ``r`` draws from ``default_rng([seed, r])``; the lowest
    within-cluster sum of squares wins, ties going to the earlier restart.
    Labels are renumbered by first appearance.
    """
    X = np.ascontiguousarray(points, dtype=np.float64)
    if X.ndim == 1:
        X = X[:, None]
    n = X.shape[0]
    if not 1 <= k <= n:
        raise ValueError(f"k={k} out of range [1, {n}]")
    best_labels, best_cost = None, np.inf
    for r in range(cfg.restarts):
        rng = np.random.default_rng([cfg.seed & 0xFFFFFFFFFFFFFFFF, r])
        labels, cost = _lloyd(X, _plusplus(X, k, rng), cfg.max_iters, cfg.tol)
        if cost < best_cost:
            best_labels, best_cost = labels, cost
    return Clustering(relabel_by_first_appearance(best_labels), k)


def spectral_cluster(g: LayerGraph, k: int, cfg: KMeansConfig = KMeansConfig()) -> Clustering:
    return kmeans(embed(decompose(g, "rw"), k).coords, k, cfg)
