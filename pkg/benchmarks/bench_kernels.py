"""Time the numba and pure-numpy kernel paths side by side.

    python benchmarks/bench_kernels.py [--n 2000] [--k 8] [--repeat 5]

Both paths are imported from the same module, so the env flag is not needed
here; it only changes which pair the library dispatches to.
"""
import argparse
import time

import numpy as np

from mlspectral import _kernels as K
from mlspectral.spectral import KMeansConfig, kmeans


def best_of(fn, repeat):
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        times.append(time.perf_counter() - t0)
    return min(times)


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--n", type=int, default=2000)
    ap.add_argument("--k", type=int, default=8)
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args()
    n, k = args.n, args.k

    rng = np.random.default_rng(0)
    X = rng.normal(size=(n, k))
    C = X[rng.choice(n, k, replace=False)]
    labels = rng.integers(0, k, n).astype(np.int64)
    U = np.linalg.qr(rng.normal(size=(n, k)))[0]
    Kmat = U @ U.T
    truth = rng.integers(0, k, n).astype(np.int64)

    cases = {
        "assign": ((K.np_assign, K.nb_assign), (X, C)),
        "centroids": ((K.np_centroids, K.nb_centroids), (X, labels, k)),
        "kernel_dist": ((K.np_kernel_dist, K.nb_kernel_dist), (Kmat, labels, k)),
        "contingency": ((K.np_contingency, K.nb_contingency), (labels, truth, k, k)),
    }
    print(f"n={n} k={k} best of {args.repeat}; numba active by default: {K.USE_NUMBA}")
    print(f"{'kernel':<12} {'numpy ms':>10} {'numba ms':>10} {'speedup':>8}")
    for name, ((np_fn, nb_fn), call) in cases.items():
        nb_fn(*call)  # compile outside the timed region
        t_np = best_of(lambda: np_fn(*call), args.repeat)
        t_nb = best_of(lambda: nb_fn(*call), args.repeat)
        print(f"{name:<12} {t_np * 1e3:>10.3f} {t_nb * 1e3:>10.3f} {t_np / t_nb:>7.1f}x")

    # end to end: the dispatched path as the library uses it
    cfg = KMeansConfig(restarts=5, seed=0)
    kmeans(X, k, cfg)
    t = best_of(lambda: kmeans(X, k, cfg), args.repeat)
    print(f"kmeans({n}x{k}, 5 restarts) with dispatched kernels: {t * 1e3:.1f} ms")


if __name__ == "__main__":
    main()
