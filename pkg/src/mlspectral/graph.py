"""Graph layers, multi-layer graphs, Laplacians and edge-list ingestion.

Matrices are dense ``float64`` numpy arrays. A vertex with zero degree uses
the pseudo-inverse convention: its entries of ``D^{-1}`` and ``D^{-1/2}`` are
zero.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional, Sequence

import numpy as np

from .exceptions import DimensionMismatch, InvalidGraph, ParseError


class LaplacianKind(enum.Enum):
    COMBINATORIAL = "comb"
    SYMMETRIC = "sym"
    RANDOM_WALK = "rw"

    @classmethod
    def parse(cls, value) -> "LaplacianKind":
        if isinstance(value, cls):
            return value
        key = str(value).strip().lower()
        aliases = {
            "comb": cls.COMBINATORIAL, "combinatorial": cls.COMBINATORIAL,
            "sym": cls.SYMMETRIC, "symmetric": cls.SYMMETRIC,
            "rw": cls.RANDOM_WALK, "randomwalk": cls.RANDOM_WALK,
            "random_walk": cls.RANDOM_WALK, "random-walk": cls.RANDOM_WALK,
        }
        try:
            return aliases[key]
        except KeyError:
            raise ValueError(f"unknown Laplacian kind {value!r}") from None


def _frozen(a: np.ndarray) -> np.ndarray:
    a.setflags(write=False)
    return a


@dataclass(frozen=True, eq=False)
class LayerGraph:
    """One weighted undirected layer; ``weights`` is validated and read-only."""

    weights: np.ndarray
    name: Optional[str] = None

    def __post_init__(self):
        W = np.array(self.weights, dtype=np.float64, copy=True)
        if W.ndim != 2 or W.shape[0] != W.shape[1] or W.shape[0] == 0:
            raise InvalidGraph(f"weights must be a non-empty square matrix, got shape {W.shape}")
        if not np.all(np.isfinite(W)):
            raise InvalidGraph("weights contain non-finite entries")
        if np.any(W < 0):
            raise InvalidGraph("weights must be non-negative")
        if np.any(np.diag(W) != 0):
            raise InvalidGraph("self-loops are not allowed (diagonal must be zero)")
        if not np.array_equal(W, W.T):
            raise InvalidGraph("weights must be symmetric")
        object.__setattr__(self, "weights", _frozen(W))

    @property
    def n(self) -> int:
        return self.weights.shape[0]

    def scaled(self, c: float) -> "LayerGraph":
        return LayerGraph(self.weights * c, self.name)


@dataclass(frozen=True, eq=False)
class MultiLayerGraph:
    layers: tuple = field(default_factory=tuple)

    def __post_init__(self):
        layers = tuple(self.layers)
        if not layers:
            raise DimensionMismatch("a multi-layer graph needs at least one layer")
        sizes = {g.n for g in layers}
        if len(sizes) != 1:
            raise DimensionMismatch(f"layers disagree on vertex count: {sorted(sizes)}")
        object.__setattr__(self, "layers", layers)

    @property
    def n(self) -> int:
        return self.layers[0].n

    @property
    def M(self) -> int:
        return len(self.layers)

    def __len__(self):
        return len(self.layers)

    def __iter__(self):
        return iter(self.layers)

    def __getitem__(self, i) -> LayerGraph:
        return self.layers[i]


def assemble_multilayer(layers: Sequence[LayerGraph]) -> MultiLayerGraph:
    return MultiLayerGraph(tuple(layers))


def degree_vector(g: LayerGraph) -> np.ndarray:
    return g.weights.sum(axis=1)


def _pinv_power(d: np.ndarray, p: float) -> np.ndarray:
    out = np.zeros_like(d)
    nz = d > 0
    out[nz] = d[nz] ** p
    return out


def laplacian(g: LayerGraph, kind="rw") -> np.ndarray:
    """Laplacian of ``g``: ``D - W``, ``D^{-1/2}(D-W)D^{-1/2}`` or ``I - D^{-1}W``."""
    kind = LaplacianKind.parse(kind)
    W = g.weights
    d = degree_vector(g)
    if kind is LaplacianKind.COMBINATORIAL:
        return np.diag(d) - W
    if kind is LaplacianKind.SYMMETRIC:
        s = _pinv_power(d, -0.5)
        L = np.diag(d) - W
        return s[:, None] * L * s[None, :]
    inv = _pinv_power(d, -1.0)
    return np.eye(g.n) - inv[:, None] * W


def normalized_adjacency(g: LayerGraph) -> np.ndarray:
    s = _pinv_power(degree_vector(g), -0.5)
    return s[:, None] * g.weights * s[None, :]


def load_layer(path, n: int, name: Optional[str] = None) -> LayerGraph:
    """Read a ``src dst weight`` edge list into an ``n``-vertex layer.

    Duplicate edges (in either orientation) are summed. Blank lines and lines
    starting with ``#`` are skipped.
    """
    path = Path(path)
    if n <= 0:
        raise ValueError("vertex count must be positive")
    W = np.zeros((n, n))
    with path.open("r", encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, start=1):
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            parts = line.split()
            if len(parts) != 3:
                raise ParseError(f"{path}:{lineno}: expected 'src dst weight', got {line!r}")
            try:
                i, j = int(parts[0]), int(parts[1])
                w = float(parts[2])
            except ValueError:
                raise ParseError(f"{path}:{lineno}: cannot parse {line!r}") from None
            if not (0 <= i < n and 0 <= j < n):
                raise IndexError(f"{path}:{lineno}: vertex id out of range for n={n}")
            if not np.isfinite(w):
                raise ParseError(f"{path}:{lineno}: non-finite weight")
            if w < 0:
                raise ValueError(f"{path}:{lineno}: negative weight {w}")
            if i == j:
                raise InvalidGraph(f"{path}:{lineno}: self-loop on vertex {i}")
            W[i, j] += w
            W[j, i] += w
    return LayerGraph(W, name if name is not None else path.stem)


def save_layer(g: LayerGraph, path, precision: int = 17) -> None:
    iu, ju = np.nonzero(np.triu(g.weights, 1))
    with Path(path).open("w", encoding="utf-8") as fh:
        for i, j in zip(iu, ju):
            fh.write(f"{i} {j} {g.weights[i, j]:.{precision}g}\n")


def load_labels(path) -> np.ndarray:
    path = Path(path)
    labels = []
    with path.open("r", encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, start=1):
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            try:
                labels.append(int(line))
            except ValueError:
                raise ParseError(f"{path}:{lineno}: expected an integer label, got {line!r}") from None
    return np.asarray(labels, dtype=np.int64)


def save_labels(labels, path) -> None:
    with Path(path).open("w", encoding="utf-8") as fh:
        for v in np.asarray(labels):
            fh.write(f"{int(v)}\n")
