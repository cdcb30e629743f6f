"""Limited-memory BFGS with Armijo backtracking, for smooth unconstrained problems."""
from __future__ import annotations

from collections import deque
from dataclasses import dataclass

import numpy as np


@dataclass
class LbfgsResult:
    x: np.ndarray
    fun: float
    grad_norm: float
    iterations: int
    converged: bool


def _direction(g, S, Y, rho):
    q = g.copy()
    alphas = []
    for s, y, r in zip(reversed(S), reversed(Y), reversed(rho)):
        a = r * np.dot(s, q)
        alphas.append(a)
        q -= a * y
    if S:
        s, y = S[-1], Y[-1]
        q *= np.dot(s, y) / np.dot(y, y)
    for (s, y, r), a in zip(zip(S, Y, rho), reversed(alphas)):
        b = r * np.dot(y, q)
        q += (a - b) * s
    return -q


def minimize(fun_and_grad, x0, memory=10, max_iters=200, grad_tol=1e-6,
             c1=1e-4, shrink=0.5, max_backtracks=60) -> LbfgsResult:
    """Minimise ``f`` given ``fun_and_grad(x) -> (f, g)`` on flat vectors.

    Every accepted step satisfies the sufficient-decrease condition, so the
    returned value never exceeds ``f(x0)``. Curvature pairs with
    ``s.y <= 1e-12 |s||y|`` are skipped.
    """
    x = np.array(x0, dtype=np.float64, copy=True).ravel()
    f, g = fun_and_grad(x)
    S, Y, rho = deque(maxlen=memory), deque(maxlen=memory), deque(maxlen=memory)
    gnorm = float(np.linalg.norm(g))
    it = 0
    while it < max_iters and gnorm > grad_tol:
        d = _direction(g, S, Y, rho)
        slope = float(np.dot(g, d))
        if slope >= 0:
            S.clear(); Y.clear(); rho.clear()
            d = -g
            slope = -gnorm ** 2
        t = 1.0 if S else min(1.0, 1.0 / gnorm)
        for _ in range(max_backtracks):
            x_new = x + t * d
            f_new, g_new = fun_and_grad(x_new)
            if f_new <= f + c1 * t * slope:
                break
            t *= shrink
        else:
            break
        s, y = x_new - x, g_new - g
        sy = float(np.dot(s, y))
        if sy > 1e-12 * np.linalg.norm(s) * np.linalg.norm(y):
            S.append(s); Y.append(y); rho.append(1.0 / sy)
        x, f, g = x_new, f_new, g_new
        gnorm = float(np.linalg.norm(g))
        it += 1
    return LbfgsResult(x, float(f), gnorm, it, gnorm <= grad_tol)
