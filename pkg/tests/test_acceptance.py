"""Acceptance suite: one test per criterion, each printing a PASS/FAIL line.

Run with ``pytest tests/test_acceptance.py -v`` (lines are written straight
to the terminal) or ``python tests/test_acceptance.py`` for a bare summary.
"""
import functools
import statistics
import sys
import time
import warnings

import numpy as np
import pytest
from scipy.sparse.csgraph import connected_components

from mlspectral.baselines import kernel_kmeans_sum, sc_al, sc_sum
from mlspectral.ged import (GedProblem, cluster_ged, ged_grad_P, ged_grad_Q,
                            ged_objective, run_ged)
from mlspectral.graph import laplacian
from mlspectral.metrics import nmi, purity, rand_index
from mlspectral.spectral import KMeansConfig, decompose, spectral_cluster
from mlspectral.sr import SrConfig, cluster_sr, propagate, regularize_vector, solve_sr
from mlspectral.synth import LayerSpec, MsbmConfig, complementary_pair, generate

from conftest import random_graph
from oracles import brute_nmi, brute_purity, brute_rand, central_diff

KM = KMeansConfig(seed=0)
RESULTS = {}
_CAPSYS = None


@pytest.fixture(autouse=True)
def _terminal(capsys):
    global _CAPSYS
    _CAPSYS = capsys
    yield
    _CAPSYS = None


def _say(line):
    if _CAPSYS is None:
        print(line, flush=True)
    else:
        with _CAPSYS.disabled():
            print(line, flush=True)


def report(num, title, ok, detail, elapsed, limit=None):
    within = limit is None or elapsed < limit
    passed = bool(ok and within)
    budget = f" / limit {limit:.0f}s" if limit is not None else ""
    line = f"[{'PASS' if passed else 'FAIL'}] criterion {num}: {title} | {detail} | {elapsed:.2f}s{budget}"
    RESULTS[num] = (passed, line)
    _say(line)
    assert ok, line
    assert within, line


# ---------------------------------------------------------------------------
# instance families shared between criteria (criterion 8 re-checks them all)
# ---------------------------------------------------------------------------

DESK = LayerSpec(0.3, 0.05)


@functools.lru_cache(maxsize=None)
def ged_suite(seed):
    spec = LayerSpec(0.4, 0.05)
    return generate(MsbmConfig(30, 3, (spec, spec, spec), seed=seed))


@functools.lru_cache(maxsize=None)
def sr_limit_suite(seed):
    return generate(MsbmConfig(100, 4, (DESK, DESK), seed=seed))


@functools.lru_cache(maxsize=None)
def complementary_suite(seed):
    return complementary_pair(n=200, k=4, seed=seed)


@functools.lru_cache(maxsize=None)
def reduction_suite(seed):
    return generate(MsbmConfig(100, 4, (LayerSpec(0.5, 0.05),), seed=seed))


@functools.lru_cache(maxsize=None)
def borderline_suite(seed):
    return generate(MsbmConfig(100, 4, (DESK,), seed=seed))


@functools.lru_cache(maxsize=None)
def ordering_suite(seed):
    noise = LayerSpec(DESK.p_in, DESK.p_out, informative=False)
    return generate(MsbmConfig(100, 4, (DESK, DESK, noise), seed=seed))


SUITES = [(ged_suite, 20), (sr_limit_suite, 20), (complementary_suite, 20),
          (reduction_suite, 10), (borderline_suite, 10), (ordering_suite, 20)]


# ---------------------------------------------------------------------------
# criteria
# ---------------------------------------------------------------------------

def test_c1_gradients_match_finite_differences():
    t0 = time.perf_counter()
    rng = np.random.default_rng(2024)
    grid = (0.0, 0.5, 10.0, 100.0)
    worst = 0.0
    for _ in range(50):
        n, M = int(rng.integers(2, 9)), int(rng.integers(1, 4))
        alpha, beta = float(rng.choice(grid)), float(rng.choice(grid))
        layers = [random_graph(rng, n) for _ in range(M)]
        prob = GedProblem(tuple(laplacian(g, "rw") for g in layers),
                          tuple(decompose(g, "rw").eigenvalues for g in layers), alpha, beta)
        P, Q = rng.normal(size=(n, n)), rng.normal(size=(n, n))
        fdP = central_diff(lambda X: ged_objective(X, Q, prob), P)
        fdQ = central_diff(lambda X: ged_objective(P, X, prob), Q)
        worst = max(worst,
                    np.linalg.norm(ged_grad_P(P, Q, prob) - fdP) / np.linalg.norm(fdP),
                    np.linalg.norm(ged_grad_Q(P, Q, prob) - fdQ) / np.linalg.norm(fdQ))
    report(1, "gradients vs central differences", worst < 1e-5,
           f"50 instances, max rel err {worst:.2e} (< 1e-5)", time.perf_counter() - t0, 10)


def test_c2_closed_form_matches_propagation():
    t0 = time.perf_counter()
    rng = np.random.default_rng(7)
    worst = 0.0
    for t in range(100):
        n = int(rng.integers(2, 51))
        g = random_graph(rng, n, p=float(rng.uniform(0.05, 0.6)), connected=bool(t % 4))
        L = laplacian(g, "sym")
        u = rng.normal(size=n)
        lam = float(10 ** rng.uniform(-2, 2))
        worst = max(worst, float(np.max(np.abs(propagate(u, L, lam) - regularize_vector(u, L, lam)))))
    report(2, "closed form vs propagation", worst < 1e-8,
           f"100 triples, max |diff| {worst:.2e} (< 1e-8)", time.perf_counter() - t0, 10)


def test_c3_ged_descent():
    t0 = time.perf_counter()
    worst_rise, rejected, bad = -np.inf, 0, []
    for seed in range(20):
        mlg, _ = ged_suite(seed)
        sol = run_ged(mlg, 10.0, 100.0)
        rise = float(np.max(np.diff(sol.objective_trace)))
        worst_rise = max(worst_rise, rise)
        rejected += sol.rejected_steps
        if rise > 1e-10:
            bad.append(seed)
    report(3, "SC-GED objective non-increasing", not bad,
           f"20 seeds, largest step change {worst_rise:.2e}, guarded half-steps {rejected}, "
           f"violations {bad}", time.perf_counter() - t0, 60)


def test_c4_sr_small_lambda_reduces_to_first_layer():
    t0 = time.perf_counter()
    mismatched = []
    for seed in range(20):
        mlg, _ = sr_limit_suite(seed)
        got = cluster_sr(mlg, 4, SrConfig(lambda_schedule=(1e-8,), order=(0,), km=KM))
        ref = spectral_cluster(mlg[0], 4, KM)
        if not np.array_equal(got.labels, ref.labels):
            mismatched.append(seed)
    report(4, "SC-SR lambda=1e-8 equals layer-1 clustering", not mismatched,
           f"20 seeds, mismatches {mismatched}", time.perf_counter() - t0, 30)


def test_c5_combination_beats_single_layers():
    t0 = time.perf_counter()
    scores = {name: [] for name in ("layer0", "layer1", "sc-sr", "sc-ged", "sc-sum", "sc-al")}
    for seed in range(20):
        mlg, truth = complementary_suite(seed)
        scores["layer0"].append(nmi(spectral_cluster(mlg[0], 4, KM), truth))
        scores["layer1"].append(nmi(spectral_cluster(mlg[1], 4, KM), truth))
        scores["sc-sr"].append(nmi(cluster_sr(mlg, 4, SrConfig(km=KM)), truth))
        scores["sc-ged"].append(nmi(cluster_ged(mlg, 4, km=KM), truth))
        scores["sc-sum"].append(nmi(sc_sum(mlg, 4, km=KM), truth))
        with warnings.catch_warnings():
            warnings.simplefilter("ignore", RuntimeWarning)
            scores["sc-al"].append(nmi(sc_al(mlg, 4, KM), truth))
    med = {k: statistics.median(v) for k, v in scores.items()}
    best = max(med["layer0"], med["layer1"])
    ok = all(med[m] > best for m in ("sc-sr", "sc-ged", "sc-sum", "sc-al"))
    detail = ", ".join(f"{k} {v:.4f}" for k, v in med.items())
    report(5, "median NMI of every combiner > best single layer", ok,
           f"best single {best:.4f}; {detail}", time.perf_counter() - t0, 300)


def test_c6_metric_oracles():
    t0 = time.perf_counter()
    rng = np.random.default_rng(11)
    worst = 0.0
    for _ in range(1000):
        n = int(rng.integers(2, 13))
        ka, kb = int(rng.integers(1, n + 1)), int(rng.integers(1, n + 1))
        a, b = rng.integers(0, ka, n).tolist(), rng.integers(0, kb, n).tolist()
        worst = max(worst, abs(purity(a, b) - brute_purity(a, b)), abs(nmi(a, b) - brute_nmi(a, b)),
                    abs(rand_index(a, b) - brute_rand(a, b)))
    report(6, "purity/NMI/RI vs brute-force oracles", worst <= 1e-12,
           f"1000 pairs, max |diff| {worst:.1e} (<= 1e-12)", time.perf_counter() - t0, 5)


METHODS_M1 = {
    "sc-sum": lambda mlg: sc_sum(mlg, 4, km=KM),
    "sc-al": lambda mlg: sc_al(mlg, 4, KM),
    "k-kmeans": lambda mlg: kernel_kmeans_sum(mlg, 4, km=KM),
    "sc-ged": lambda mlg: cluster_ged(mlg, 4, km=KM),
    "sc-sr": lambda mlg: cluster_sr(mlg, 4, SrConfig(km=KM)),
}


def _m1_mismatches(suite):
    out = {m: 0 for m in METHODS_M1}
    for seed in range(10):
        mlg, _ = suite(seed)
        ref = spectral_cluster(mlg[0], 4, KM).labels
        for name, fn in METHODS_M1.items():
            out[name] += not np.array_equal(fn(mlg).labels, ref)
    return out


def test_c7_single_layer_reduction():
    t0 = time.perf_counter()
    clear = _m1_mismatches(reduction_suite)
    elapsed = time.perf_counter() - t0
    # informational: in a borderline regime the L_sym kernel and the alpha
    # shrinkage of SC-GED can move single boundary vertices
    border = _m1_mismatches(borderline_suite)
    report(7, "M=1 label identity with sc", not any(clear.values()),
           f"10 SBM (n=100,k=4,p=.5/.05) mismatches {clear}; "
           f"borderline p=.3/.05 (info only) {border}", elapsed, 60)


def test_c8_spectral_sanity():
    t0 = time.perf_counter()
    rng = np.random.default_rng(5)
    checked, worst_l1, worst_dev, fiedler_fail = 0, 0.0, 0.0, 0
    for suite, count in SUITES:
        for seed in range(count):
            for g in suite(seed)[0]:
                if connected_components(np.asarray(g.weights), directed=False)[0] != 1:
                    continue
                checked += 1
                dec = decompose(g, "rw")
                u1 = dec.eigenvectors[:, 0]
                worst_l1 = max(worst_l1, abs(float(dec.eigenvalues[0])))
                worst_dev = max(worst_dev, float(np.max(np.abs(u1 - u1.mean()))))
                L = laplacian(g, "comb")
                lam2 = decompose(g, "comb").eigenvalues[1]
                F = rng.normal(size=(1000, g.n))
                F -= F.mean(axis=1, keepdims=True)
                F /= np.linalg.norm(F, axis=1, keepdims=True)
                fiedler_fail += int(np.einsum("ij,jk,ik->i", F, L, F).min() < lam2 - 1e-9)
    ok = checked > 0 and worst_l1 < 1e-10 and worst_dev < 1e-8 and fiedler_fail == 0
    report(8, "spectral sanity on every suite graph", ok,
           f"{checked} connected graphs, max |lambda_1| {worst_l1:.1e}, max u_1 deviation "
           f"{worst_dev:.1e}, Fiedler violations {fiedler_fail} (1000 draws each)",
           time.perf_counter() - t0)


def test_c9_greedy_order_prefers_informative_layer():
    t0 = time.perf_counter()
    hits = 0
    for seed in range(20):
        mlg, _ = ordering_suite(seed)
        hits += solve_sr(mlg, 4, SrConfig(order=(0,), km=KM)).order[1] == 1
    report(9, "greedy order picks B before C", hits >= 18, f"{hits}/20 seeds (>= 18)",
           time.perf_counter() - t0, 120)


if __name__ == "__main__":
    for name, fn in list(globals().items()):
        if name.startswith("test_c"):
            try:
                fn()
            except AssertionError:
                pass
    passed = sum(ok for ok, _ in RESULTS.values())
    print(f"{passed}/{len(RESULTS)} criteria passed")
    sys.exit(0 if passed == len(RESULTS) else 1)
