"""Purity, normalized mutual information, Rand index and confusion matrices.

Entropies use the natural logarithm. Predicted clusters and ground-truth
classes are arbitrary non-negative integer ids; they are compacted before
counting.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.optimize import linear_sum_assignment

from . import _kernels
from .exceptions import LengthMismatch


@dataclass(frozen=True)
class MetricReport:
    purity: float
    nmi: float
    rand_index: float

    def as_dict(self):
        return {"purity": self.purity, "nmi": self.nmi, "rand_index": self.rand_index}


def _labels(x) -> np.ndarray:
    return np.asarray(getattr(x, "labels", x), dtype=np.int64).ravel()


def _pair(pred, truth):
    a, b = _labels(pred), _labels(truth)
    if a.shape != b.shape:
        raise LengthMismatch(f"label vectors differ in length: {a.size} vs {b.size}")
    return a, b


def contingency_table(pred, truth) -> np.ndarray:
    """Counts with rows = classes of ``truth`` and columns = clusters of ``pred``."""
    a, b = _pair(pred, truth)
    _, ia = np.unique(a, return_inverse=True)
    _, ib = np.unique(b, return_inverse=True)
    ka = int(ia.max()) + 1 if ia.size else 0
    kb = int(ib.max()) + 1 if ib.size else 0
    return _kernels.contingency(np.ascontiguousarray(ib, dtype=np.int64),
                                np.ascontiguousarray(ia, dtype=np.int64), kb, ka)


def purity(pred, truth) -> float:
    table = contingency_table(pred, truth)
    if table.size == 0:
        return 1.0
    return float(table.max(axis=0).sum() / table.sum())


def _entropy(counts) -> float:
    p = counts[counts > 0] / counts.sum()
    return float(-(p * np.log(p)).sum())


def nmi(pred, truth) -> float:
    """``I(pred; truth) / ((H(pred) + H(truth)) / 2)``.

    Both entropies zero gives 1.0; exactly one zero gives 0.0.
    """
    table = contingency_table(pred, truth).astype(np.float64)
    total = table.sum()
    if total == 0:
        return 1.0
    h_true = _entropy(table.sum(axis=1))
    h_pred = _entropy(table.sum(axis=0))
    if h_true == 0 and h_pred == 0:
        return 1.0
    if h_true == 0 or h_pred == 0:
        return 0.0
    joint = table / total
    outer = np.outer(table.sum(axis=1), table.sum(axis=0)) / total ** 2
    nz = joint > 0
    mi = float((joint[nz] * np.log(joint[nz] / outer[nz])).sum())
    return min(1.0, max(0.0, mi / ((h_true + h_pred) / 2.0)))


def _comb2(x):
    x = np.asarray(x, dtype=np.float64)
    return x * (x - 1) / 2.0


def rand_index(pred, truth) -> float:
    table = contingency_table(pred, truth)
    n = int(table.sum())
    if n < 2:
        raise ValueError("the Rand index needs at least two objects")
    pairs = n * (n - 1) / 2.0
    tp = _comb2(table).sum()
    same_pred = _comb2(table.sum(axis=0)).sum()
    same_true = _comb2(table.sum(axis=1)).sum()
    fp = same_pred - tp
    fn = same_true - tp
    tn = pairs - tp - fp - fn
    return float((tp + tn) / pairs)


def confusion_matrix(pred, truth, matched: bool = False) -> np.ndarray:
    """Square class-by-cluster count matrix (rows classes, columns clusters).

    With ``matched`` the columns are permuted by a maximum-weight assignment
    so the diagonal sum is as large as possible.
    """
    table = contingency_table(pred, truth)
    size = max(table.shape) if table.size else 0
    square = np.zeros((size, size), dtype=np.int64)
    square[: table.shape[0], : table.shape[1]] = table
    if matched and size:
        _, cols = linear_sum_assignment(square, maximize=True)
        square = square[:, cols]
    return square


def evaluate(pred, truth) -> MetricReport:
    return MetricReport(purity(pred, truth), nmi(pred, truth), rand_index(pred, truth))
