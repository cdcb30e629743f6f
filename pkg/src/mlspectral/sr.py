"""Spectral regularization (SC-SR): eigenvectors of one layer smoothed on another.

For a source vector ``u`` and a structure layer with symmetric Laplacian ``L``
the smoothed vector minimises ``1/2 ||f - u||^2 + lambda f^T L f``, i.e.
``f = mu (L + mu I)^{-1} u`` with ``mu = 1 / lambda``. Layers are added one at a
time in a greedy order driven by normalized mutual information.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import List, Optional, Sequence

import numpy as np
import scipy.linalg

from .exceptions import ConfigError, NoConvergence
from .graph import LayerGraph, MultiLayerGraph, laplacian
from .metrics import nmi
from .spectral import (Clustering, KMeansConfig, decompose, embed, kmeans,
                       most_informative_layer, spectral_cluster)

MIN_AUTO_LAMBDA = 0.25


@dataclass(frozen=True)
class SrConfig:
    """``lambda_schedule`` holds one value per combination step (``M - 1``
    values), or a single value used at every step; empty means the
    mutual-information rule. ``order`` may be a full layer permutation or a
    prefix whose remainder is chosen greedily."""

    lambda_schedule: tuple = ()
    order: tuple = ()
    km: KMeansConfig = KMeansConfig()

    def __post_init__(self):
        if any(not (lam > 0) for lam in self.lambda_schedule):
            raise ConfigError("every lambda must be positive")


@dataclass(frozen=True, eq=False)
class SmoothedSpectrum:
    columns: np.ndarray
    source_layer: int
    structure_layer: int


@dataclass
class SrResult:
    clustering: Clustering
    embedding: np.ndarray
    order: List[int] = field(default_factory=list)
    lambdas: List[float] = field(default_factory=list)


def smoothness(f, L_sym) -> float:
    f = np.asarray(f, dtype=np.float64)
    return float(f @ np.asarray(L_sym) @ f)


class Regularizer:
    """Cholesky factor of ``L + mu I`` reused for every right-hand side."""

    def __init__(self, L_sym, lam: float):
        if not lam > 0:
            raise ConfigError("lambda must be positive")
        L = np.asarray(L_sym, dtype=np.float64)
        self.mu = 1.0 / lam
        self._factor = scipy.linalg.cho_factor(L + self.mu * np.eye(L.shape[0]))

    def __call__(self, u):
        return self.mu * scipy.linalg.cho_solve(self._factor, np.asarray(u, dtype=np.float64))


def regularize_vector(u, L_sym2, lam: float) -> np.ndarray:
    return Regularizer(L_sym2, lam)(u)


def propagate(u, L_sym2, lam: float, max_iters: int = 100_000, tol: float = 1e-13) -> np.ndarray:
    """Fixed-point iteration ``f <- a (I - L) f + (1 - a) u`` with ``a = lambda/(1+lambda)``.

    Stops when successive iterates differ by less than ``tol`` in max-norm.
    The distance to the fixed point is at most ``lambda * tol`` at that
    moment. Raises ``NoConvergence`` (carrying the last iterate) otherwise.
    """
    if not lam > 0:
        raise ConfigError("lambda must be positive")
    u = np.asarray(u, dtype=np.float64)
    A = np.eye(u.shape[0]) - np.asarray(L_sym2, dtype=np.float64)
    a = lam / (1.0 + lam)
    base = (1.0 - a) * u
    f = u.copy()
    for it in range(1, max_iters + 1):
        nxt = a * (A @ f) + base
        if np.max(np.abs(nxt - f), initial=0.0) < tol:
            return nxt
        f = nxt
    raise NoConvergence(f"propagation did not settle in {max_iters} iterations", f, max_iters)


def _smooth_columns(U, L_sym, lam):
    out = np.array(U, dtype=np.float64, copy=True)
    if out.shape[1] > 1:
        out[:, 1:] = Regularizer(L_sym, lam)(out[:, 1:])
    return out


def combine_pair(g1: LayerGraph, g2: LayerGraph, k: int, lam: float,
                 source_layer: int = 0, structure_layer: int = 1) -> SmoothedSpectrum:
    """First ``k`` random-walk eigenvectors of ``g1``, columns 2..k smoothed on ``g2``."""
    if g1.n != g2.n:
        raise ConfigError("layers must share the vertex set")
    U = embed(decompose(g1, "rw"), k).coords
    cols = _smooth_columns(U, laplacian(g2, "sym"), lam)
    return SmoothedSpectrum(cols, source_layer, structure_layer)


def layer_nmi(mlg: MultiLayerGraph, k: int, km: KMeansConfig = KMeansConfig()) -> np.ndarray:
    labels = [spectral_cluster(g, k, km) for g in mlg]
    M = mlg.M
    out = np.eye(M)
    for i in range(M):
        for j in range(i + 1, M):
            out[i, j] = out[j, i] = nmi(labels[i], labels[j])
    return out


def auto_lambda(mutual_info: float) -> float:
    return max(MIN_AUTO_LAMBDA, 2.0 * mutual_info)


def solve_sr(mlg: MultiLayerGraph, k: int, cfg: SrConfig = SrConfig()) -> SrResult:
    M = mlg.M
    steps = M - 1
    schedule = tuple(float(x) for x in cfg.lambda_schedule)
    if len(schedule) == 1:
        schedule = schedule * steps
    if schedule and len(schedule) != steps:
        raise ConfigError(f"lambda schedule needs {steps} values, got {len(schedule)}")
    prefix = [int(i) for i in cfg.order]
    if len(set(prefix)) != len(prefix) or any(not 0 <= i < M for i in prefix):
        raise ConfigError(f"order must list distinct layer indices in [0, {M})")

    start = prefix[0] if prefix else most_informative_layer(mlg)
    U = embed(decompose(mlg[start], "rw"), k).coords
    order, lambdas = [start], []
    layer_labels = {}

    def labels_of(i):
        if i not in layer_labels:
            layer_labels[i] = spectral_cluster(mlg[i], k, cfg.km)
        return layer_labels[i]

    current = labels_of(start)
    for step in range(steps):
        if step + 1 < len(prefix):
            nxt = prefix[step + 1]
            score = nmi(current, labels_of(nxt))
        else:
            unused = [i for i in range(M) if i not in order]
            scores = [nmi(current, labels_of(i)) for i in unused]
            best = int(np.argmax(scores))
            nxt, score = unused[best], scores[best]
        lam = schedule[step] if schedule else auto_lambda(score)
        U = _smooth_columns(U, laplacian(mlg[nxt], "sym"), lam)
        order.append(nxt)
        lambdas.append(lam)
        if step + 1 < steps:
            current = kmeans(U, k, cfg.km)
    final = kmeans(U, k, cfg.km) if steps else current
    return SrResult(final, U, order, lambdas)


def cluster_sr(mlg: MultiLayerGraph, k: int, cfg: SrConfig = SrConfig()) -> Clustering:
    return solve_sr(mlg, k, cfg).clustering
