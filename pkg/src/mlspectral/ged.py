"""Joint eigen-decomposition of several random-walk Laplacians (SC-GED).

Every layer Laplacian ``L_i`` is approximated as ``P diag(lam_i) Q`` with a
shared basis ``P`` and an approximate inverse ``Q``. The objective is

    S = 1/2 sum_i ||L_i - P Lam_i Q||_F^2
        + alpha/2 (||P||_F^2 + ||Q||_F^2) + beta/2 ||PQ - I||_F^2

and is minimised by alternating solves over ``P`` and ``Q``. Each half-step
is a strictly convex quadratic when ``alpha > 0``; it is solved with L-BFGS
by default, or by one dense linear solve with ``inner="exact"``.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import List, Optional, Sequence

import numpy as np

from . import lbfgs
from .exceptions import ConfigError, SingularInit
from .graph import MultiLayerGraph, laplacian
from .spectral import (Clustering, KMeansConfig, decompose, kmeans,
                       most_informative_layer)


@dataclass(frozen=True, eq=False)
class GedProblem:
    laplacians: tuple
    eigenvalues: tuple
    alpha: float = 10.0
    beta: float = 100.0

    def __post_init__(self):
        Ls = tuple(np.asarray(L, dtype=np.float64) for L in self.laplacians)
        lams = tuple(np.asarray(v, dtype=np.float64) for v in self.eigenvalues)
        if not Ls or len(Ls) != len(lams):
            raise ConfigError("need one eigenvalue vector per Laplacian")
        n = Ls[0].shape[0]
        for L, v in zip(Ls, lams):
            if L.shape != (n, n) or v.shape != (n,):
                raise ConfigError("all Laplacians must be n x n with length-n eigenvalues")
            if np.any(np.diff(v) < 0):
                raise ConfigError("eigenvalues must be sorted ascending")
        if self.alpha < 0 or self.beta < 0:
            raise ConfigError("alpha and beta must be non-negative")
        for a in Ls + lams:
            a.setflags(write=False)
        object.__setattr__(self, "laplacians", Ls)
        object.__setattr__(self, "eigenvalues", lams)

    @property
    def n(self) -> int:
        return self.laplacians[0].shape[0]

    @property
    def M(self) -> int:
        return len(self.laplacians)

    @classmethod
    def from_graph(cls, mlg: MultiLayerGraph, alpha=10.0, beta=100.0) -> "GedProblem":
        Ls = [laplacian(g, "rw") for g in mlg]
        lams = [decompose(g, "rw").eigenvalues for g in mlg]
        return cls(tuple(Ls), tuple(lams), alpha, beta)


@dataclass(frozen=True)
class GedSolverConfig:
    init_layer: Optional[int] = 0
    max_outer: int = 50
    outer_tol: float = 1e-6
    lbfgs_memory: int = 10
    lbfgs_max_iters: int = 200
    lbfgs_grad_tol: float = 1e-6
    inner: str = "lbfgs"

    def __post_init__(self):
        if self.inner not in ("lbfgs", "exact"):
            raise ConfigError(f"unknown inner solver {self.inner!r}")
        if self.max_outer < 1 or self.lbfgs_memory < 1 or self.lbfgs_max_iters < 1:
            raise ConfigError("iteration counts and memory must be >= 1")


@dataclass
class GedSolution:
    P: np.ndarray
    Q: np.ndarray
    objective_trace: List[float] = field(default_factory=list)
    init_layer: int = 0
    rejected_steps: int = 0


def _residuals(P, Q, prob):
    return [L - (P * lam[None, :]) @ Q for L, lam in zip(prob.laplacians, prob.eigenvalues)]


def ged_objective(P, Q, prob: GedProblem) -> float:
    R = _residuals(P, Q, prob)
    E = P @ Q - np.eye(prob.n)
    data = sum(float(np.sum(r * r)) for r in R)
    return 0.5 * data + 0.5 * prob.alpha * (float(np.sum(P * P)) + float(np.sum(Q * Q))) \
        + 0.5 * prob.beta * float(np.sum(E * E))


def ged_grad_P(P, Q, prob: GedProblem) -> np.ndarray:
    G = prob.alpha * P + prob.beta * (P @ Q - np.eye(prob.n)) @ Q.T
    for r, lam in zip(_residuals(P, Q, prob), prob.eigenvalues):
        G -= (r @ Q.T) * lam[None, :]
    return G


def ged_grad_Q(P, Q, prob: GedProblem) -> np.ndarray:
    G = prob.alpha * Q + prob.beta * P.T @ (P @ Q - np.eye(prob.n))
    for r, lam in zip(_residuals(P, Q, prob), prob.eigenvalues):
        G -= lam[:, None] * (P.T @ r)
    return G


def _p_system(Q, prob):
    """With ``Q`` fixed, ``S(P) = 1/2 <P, P A> - <P, B> + c`` and ``dS/dP = P A - B``."""
    QQ = Q @ Q.T
    A = prob.alpha * np.eye(prob.n) + prob.beta * QQ
    B = prob.beta * Q.T
    for L, lam in zip(prob.laplacians, prob.eigenvalues):
        A += lam[:, None] * QQ * lam[None, :]
        B += (L @ Q.T) * lam[None, :]
    c = 0.5 * sum(float(np.sum(L * L)) for L in prob.laplacians) \
        + 0.5 * prob.beta * prob.n + 0.5 * prob.alpha * float(np.sum(Q * Q))
    return A, B, c


def _q_system(P, prob):
    """With ``P`` fixed, ``S(Q) = 1/2 <Q, A Q> - <Q, B> + c`` and ``dS/dQ = A Q - B``."""
    PP = P.T @ P
    A = prob.alpha * np.eye(prob.n) + prob.beta * PP
    B = prob.beta * P.T
    for L, lam in zip(prob.laplacians, prob.eigenvalues):
        A += lam[:, None] * PP * lam[None, :]
        B += lam[:, None] * (P.T @ L)
    c = 0.5 * sum(float(np.sum(L * L)) for L in prob.laplacians) \
        + 0.5 * prob.beta * prob.n + 0.5 * prob.alpha * float(np.sum(P * P))
    return A, B, c


def _update_P(P, Q, prob, cfg):
    A, B, c = _p_system(Q, prob)
    if cfg.inner == "exact":
        return _solve_sym(A, B.T).T
    n = prob.n

    def fg(x):
        X = x.reshape(n, n)
        G = X @ A
        return 0.5 * float(np.sum(X * G)) - float(np.sum(X * B)) + c, (G - B).ravel()
    return _lbfgs(fg, P, cfg).reshape(n, n)


def _update_Q(P, Q, prob, cfg):
    A, B, c = _q_system(P, prob)
    if cfg.inner == "exact":
        return _solve_sym(A, B)
    n = prob.n

    def fg(x):
        X = x.reshape(n, n)
        G = A @ X
        return 0.5 * float(np.sum(X * G)) - float(np.sum(X * B)) + c, (G - B).ravel()
    return _lbfgs(fg, Q, cfg).reshape(n, n)


def _solve_sym(A, B):
    try:
        return np.linalg.solve(A, B)
    except np.linalg.LinAlgError:
        return np.linalg.lstsq(A, B, rcond=None)[0]


def _lbfgs(fg, X0, cfg):
    return lbfgs.minimize(fg, X0, memory=cfg.lbfgs_memory, max_iters=cfg.lbfgs_max_iters,
                          grad_tol=cfg.lbfgs_grad_tol).x


def initial_factors(prob: GedProblem, layer_eigenvectors: np.ndarray):
    P = np.array(layer_eigenvectors, dtype=np.float64)
    cond = np.linalg.cond(P)
    if not np.isfinite(cond) or cond > 1e12:
        raise SingularInit(f"initial eigenvector matrix has condition number {cond:.3g}")
    return P, np.linalg.inv(P)


def solve_ged(prob: GedProblem, cfg: GedSolverConfig = GedSolverConfig(),
              init_vectors: Optional[np.ndarray] = None) -> GedSolution:
    """Alternate P- and Q-updates until the relative decrease drops below ``outer_tol``.

    ``init_vectors`` are the eigenvectors of the initial layer's random-walk
    Laplacian; ``objective_trace[0]`` is the objective at initialisation and
    one entry is appended after each full (P, Q) sweep.
    """
    if init_vectors is None:
        raise ConfigError("solve_ged needs the initial layer's eigenvectors")
    P, Q = initial_factors(prob, init_vectors)
    f = ged_objective(P, Q, prob)
    trace = [f]
    rejected = 0
    for _ in range(cfg.max_outer):
        # a half-step is kept only if it does not raise the exact objective
        P_new = _update_P(P, Q, prob, cfg)
        f_new = ged_objective(P_new, Q, prob)
        if f_new <= f:
            P, f = P_new, f_new
        else:
            rejected += 1
        Q_new = _update_Q(P, Q, prob, cfg)
        f_new = ged_objective(P, Q_new, prob)
        if f_new <= f:
            Q, f = Q_new, f_new
        else:
            rejected += 1
        trace.append(f)
        prev, cur = trace[-2], trace[-1]
        if prev - cur <= cfg.outer_tol * max(abs(prev), np.finfo(float).tiny):
            break
    return GedSolution(P, Q, trace, cfg.init_layer if cfg.init_layer is not None else 0, rejected)


def resolve_init_layer(mlg: MultiLayerGraph, init_layer) -> int:
    if init_layer is None or init_layer == "auto":
        return most_informative_layer(mlg)
    idx = int(init_layer)
    if not 0 <= idx < mlg.M:
        raise ConfigError(f"init_layer {idx} out of range for {mlg.M} layers")
    return idx


def run_ged(mlg: MultiLayerGraph, alpha=10.0, beta=100.0,
            cfg: GedSolverConfig = GedSolverConfig()) -> GedSolution:
    prob = GedProblem.from_graph(mlg, alpha, beta)
    layer = resolve_init_layer(mlg, cfg.init_layer)
    sol = solve_ged(prob, cfg, decompose(mlg[layer], "rw").eigenvectors)
    sol.init_layer = layer
    return sol


def cluster_ged(mlg: MultiLayerGraph, k: int, cfg: GedSolverConfig = GedSolverConfig(),
                km: KMeansConfig = KMeansConfig(), alpha=10.0, beta=100.0) -> Clustering:
    if not 1 <= k <= mlg.n:
        raise ValueError(f"k={k} out of range [1, {mlg.n}]")
    sol = run_ged(mlg, alpha, beta, cfg)
    return kmeans(sol.P[:, :k], k, km)
