"""Hot inner loops with a numba path and a pure-numpy path.

The numba path is used unless ``MLSPECTRAL_DISABLE_NUMBA`` is set to a truthy
value or numba cannot be imported. Both paths compute the same quantities in
the same order of reduction over the feature axis, so results agree to
floating-point round-off; tests compare them directly.
"""
import os

import numpy as np

_FLAG = os.environ.get("MLSPECTRAL_DISABLE_NUMBA", "").strip().lower()

try:
    import numba
except ImportError:  # pragma: no cover - numba is a declared dependency
    numba = None

USE_NUMBA = numba is not None and _FLAG not in ("1", "true", "yes", "on")


def _njit(fn):
    if numba is None:  # pragma: no cover
        return fn
    return numba.njit(cache=True, nogil=True)(fn)


# ---------------------------------------------------------------------------
# Euclidean k-means
# ---------------------------------------------------------------------------

def np_assign(X, C):
    """Nearest-centre labels and squared distances (first index wins ties)."""
    d2 = ((X[:, None, :] - C[None, :, :]) ** 2).sum(axis=2)
    labels = np.argmin(d2, axis=1)
    return labels.astype(np.int64), d2[np.arange(X.shape[0]), labels]


@_njit
def nb_assign(X, C):
    n, p = X.shape
    k = C.shape[0]
    labels = np.empty(n, dtype=np.int64)
    best = np.empty(n, dtype=np.float64)
    for i in range(n):
        bl = 0
        bd = np.inf
        for c in range(k):
            d = 0.0
            for j in range(p):
                t = X[i, j] - C[c, j]
                d += t * t
            if d < bd:
                bd = d
                bl = c
        labels[i] = bl
        best[i] = bd
    return labels, best


def np_centroids(X, labels, k):
    """Cluster sums divided by counts; empty clusters are left as NaN rows."""
    counts = np.bincount(labels, minlength=k).astype(np.float64)
    sums = np.zeros((k, X.shape[1]))
    np.add.at(sums, labels, X)
    with np.errstate(invalid="ignore", divide="ignore"):
        C = sums / counts[:, None]
    return C, counts.astype(np.int64)


@_njit
def nb_centroids(X, labels, k):
    n, p = X.shape
    sums = np.zeros((k, p))
    counts = np.zeros(k, dtype=np.int64)
    for i in range(n):
        c = labels[i]
        counts[c] += 1
        for j in range(p):
            sums[c, j] += X[i, j]
    C = np.empty((k, p))
    for c in range(k):
        for j in range(p):
            if counts[c] > 0:
                C[c, j] = sums[c, j] / counts[c]
            else:
                C[c, j] = np.nan
    return C, counts


# ---------------------------------------------------------------------------
# Kernel k-means
# ---------------------------------------------------------------------------

def np_kernel_dist(K, labels, k):
    """Squared feature-space distance of every point to every cluster mean.

    Empty clusters get ``inf``.
    """
    n = K.shape[0]
    H = np.zeros((n, k))
    H[np.arange(n), labels] = 1.0
    counts = H.sum(axis=0)
    with np.errstate(invalid="ignore", divide="ignore"):
        Hn = H / counts
    KH = K @ Hn
    within = np.einsum("ic,ic->c", Hn, KH)
    D = np.diag(K)[:, None] - 2.0 * KH + within[None, :]
    D[:, counts == 0] = np.inf
    return D


@_njit
def nb_kernel_dist(K, labels, k):
    n = K.shape[0]
    counts = np.zeros(k, dtype=np.int64)
    for i in range(n):
        counts[labels[i]] += 1
    cross = np.zeros((n, k))
    for i in range(n):
        for j in range(n):
            cross[i, labels[j]] += K[i, j]
    within = np.zeros(k)
    for j in range(n):
        within[labels[j]] += cross[j, labels[j]]
    D = np.empty((n, k))
    for c in range(k):
        if counts[c] == 0:
            for i in range(n):
                D[i, c] = np.inf
            continue
        inv = 1.0 / counts[c]
        for i in range(n):
            D[i, c] = K[i, i] - 2.0 * cross[i, c] * inv + within[c] * inv * inv
    return D


# ---------------------------------------------------------------------------
# Label statistics
# ---------------------------------------------------------------------------

def np_contingency(a, b, ka, kb):
    table = np.zeros((ka, kb), dtype=np.int64)
    np.add.at(table, (a, b), 1)
    return table


@_njit
def nb_contingency(a, b, ka, kb):
    table = np.zeros((ka, kb), dtype=np.int64)
    for i in range(a.shape[0]):
        table[a[i], b[i]] += 1
    return table


if USE_NUMBA:
    assign, centroids, kernel_dist, contingency = (
        nb_assign, nb_centroids, nb_kernel_dist, nb_contingency)
else:
    assign, centroids, kernel_dist, contingency = (
        np_assign, np_centroids, np_kernel_dist, np_contingency)
