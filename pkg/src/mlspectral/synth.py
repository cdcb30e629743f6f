"""Seeded multi-layer stochastic block models with planted ground truth.

Randomness comes from numpy's ``PCG64`` bit generator seeded through
``numpy.random.default_rng(seed)``, whose stream is fixed across platforms.
Layers are drawn in order from a single stream; for each layer the upper
triangle of an ``n x n`` uniform matrix is compared against the pairwise edge
probabilities, then weights are drawn for the present edges.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional, Sequence, Tuple

import numpy as np

from .exceptions import ConfigError
from .graph import LayerGraph, MultiLayerGraph


@dataclass(frozen=True)
class LayerSpec:
    p_in: float
    p_out: float
    informative: bool = True


@dataclass(frozen=True)
class MsbmConfig:
    """``weight_mode`` is ``"unit"`` or ``"poisson"``; poisson weights are
    ``1 + Poisson(poisson_mean - 1)`` so their mean is ``poisson_mean``."""

    n: int
    k: int
    layers: Tuple[LayerSpec, ...]
    block_sizes: Optional[Tuple[int, ...]] = None
    weight_mode: str = "unit"
    poisson_mean: float = 3.0
    seed: int = 0

    def sizes(self) -> np.ndarray:
        if self.block_sizes is not None:
            return np.asarray(self.block_sizes, dtype=np.int64)
        base, extra = divmod(self.n, self.k)
        return np.array([base + (b < extra) for b in range(self.k)], dtype=np.int64)

    def validate(self) -> None:
        if self.n < 1 or self.k < 1 or self.k > self.n:
            raise ConfigError("need 1 <= k <= n")
        sizes = self.sizes()
        if sizes.size != self.k or sizes.sum() != self.n or np.any(sizes < 1):
            raise ConfigError("block sizes must be k positive integers summing to n")
        if not self.layers:
            raise ConfigError("at least one layer spec is required")
        for spec in self.layers:
            for p in (spec.p_in, spec.p_out):
                if not 0.0 <= p <= 1.0:
                    raise ConfigError(f"edge probability {p} outside [0, 1]")
            if spec.informative and spec.p_out > spec.p_in:
                raise ConfigError("informative layers need p_out <= p_in")
        if self.weight_mode not in ("unit", "poisson"):
            raise ConfigError(f"unknown weight mode {self.weight_mode!r}")
        if self.weight_mode == "poisson" and self.poisson_mean < 1:
            raise ConfigError("poisson_mean must be >= 1")


def block_labels(sizes) -> np.ndarray:
    return np.repeat(np.arange(len(sizes)), sizes)


def _sample_layer(prob: np.ndarray, rng, weight_mode, poisson_mean) -> np.ndarray:
    n = prob.shape[0]
    draws = rng.random((n, n))
    upper = np.triu(draws < prob, 1)
    W = upper.astype(np.float64)
    if weight_mode == "poisson":
        m = int(upper.sum())
        W[upper] = 1.0 + rng.poisson(poisson_mean - 1.0, size=m)
    return W + W.T


def sample_layers(prob_matrices: Sequence[np.ndarray], seed: int, weight_mode="unit",
                  poisson_mean=3.0, names=None) -> MultiLayerGraph:
    """Draw one layer per pairwise probability matrix from a single seeded stream."""
    rng = np.random.default_rng(seed)
    layers = []
    for idx, prob in enumerate(prob_matrices):
        W = _sample_layer(np.asarray(prob), rng, weight_mode, poisson_mean)
        name = names[idx] if names else f"layer{idx}"
        layers.append(LayerGraph(W, name))
    return MultiLayerGraph(tuple(layers))


def generate(cfg: MsbmConfig) -> Tuple[MultiLayerGraph, np.ndarray]:
    """Sample every layer of ``cfg``; returns the graph and block labels.

    An uninformative layer ignores the block structure and links every pair
    with probability ``p_in``.
    """
    cfg.validate()
    truth = block_labels(cfg.sizes())
    same = truth[:, None] == truth[None, :]
    probs = []
    for spec in cfg.layers:
        if spec.informative:
            probs.append(np.where(same, spec.p_in, spec.p_out))
        else:
            probs.append(np.full((cfg.n, cfg.n), spec.p_in))
    mlg = sample_layers(probs, cfg.seed, cfg.weight_mode, cfg.poisson_mean)
    return mlg, truth


def complementary_pair(n: int = 200, k: int = 4, seed: int = 0, p_in: float = 0.3,
                       p_pair: float = 0.15, p_out: float = 0.03,
                       weight_mode: str = "unit") -> Tuple[MultiLayerGraph, np.ndarray]:
    """Two layers that each see only a coarse grouping of the ``k`` blocks.

    Layer 0 groups block ``b`` with ``b ^ 1`` (pairs {0,1}, {2,3}, ...); layer 1
    groups ``b`` with ``(b + k/2) mod k``. Inside a block the edge probability
    is ``p_in``; between paired blocks it is ``p_pair``; elsewhere ``p_out``.
    With ``p_pair`` close to ``p_in`` no single layer resolves all ``k``
    blocks, while the two pairings together identify every block.
    """
    if k < 4 or k % 2:
        raise ConfigError("complementary_pair needs an even k >= 4")
    if not 0 <= p_out <= p_pair <= p_in <= 1:
        raise ConfigError("need 0 <= p_out <= p_pair <= p_in <= 1")
    if n < k:
        raise ConfigError("need n >= k")
    base, extra = divmod(n, k)
    truth = block_labels([base + (b < extra) for b in range(k)])
    b = np.arange(k)
    partners = (b ^ 1, (b + k // 2) % k)
    probs = []
    for partner in partners:
        table = np.full((k, k), p_out)
        table[b, partner] = p_pair
        table[b, b] = p_in
        probs.append(table[truth[:, None], truth[None, :]])
    mlg = sample_layers(probs, seed, weight_mode, names=["pairing_a", "pairing_b"])
    return mlg, truth
