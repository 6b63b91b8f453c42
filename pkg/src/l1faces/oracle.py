"""Independent numerical solvers used to cross-check the exact machinery."""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .exact import Vec, mat, shape, vec
from .lp import OPTIMAL, LinearSystem, lp_solve

TAU_SIGN = 1e-9


class NonPositiveLambda(ValueError):
    pass


@dataclass
class OracleResult:
    x: np.ndarray
    objective: float
    kkt_residual: float
    iterations: int
    converged: bool
    history: list = field(default_factory=list, repr=False)


def largest_eigenvalue(M: np.ndarray, tol: float = 1e-12, max_iter: int = 100_000) -> float:
    """Power iteration for a symmetric positive semidefinite matrix."""
    k = M.shape[0]
    if k == 0 or not np.any(M):
        return 0.0
    v = np.ones(k) / np.sqrt(k) + np.linspace(0.0, 1e-3, k)
    v /= np.linalg.norm(v)
    est = 0.0
    for _ in range(max_iter):
        w = M @ v
        nw = np.linalg.norm(w)
        if nw == 0.0:
            # start vector orthogonal to the range; restart on a coordinate axis
            v = np.eye(k)[int(np.argmax(np.diag(M)))]
            continue
        new = float(v @ w)
        v = w / nw
        if abs(new - est) <= tol * max(abs(new), 1e-300):
            return float(v @ (M @ v))
        est = new
    return float(v @ (M @ v))


def soft_threshold(z: np.ndarray, t: float) -> np.ndarray:
    return np.sign(z) * np.maximum(np.abs(z) - t, 0.0)


def lasso_objective(A, b, lam, x) -> float:
    r = A @ x - b
    return float(np.abs(x).sum() + (r @ r) / (2.0 * lam))


def kkt_residual(A, b, lam: float, x, tau_sign: float = TAU_SIGN) -> float:
    """Violation of A^T(b - Ax) in lam * subdifferential of ||.||_1 at x."""
    A = np.asarray(A, dtype=float)
    b = np.asarray(b, dtype=float)
    x = np.asarray(x, dtype=float)
    g = A.T @ (b - A @ x)
    on = np.abs(x) > tau_sign
    res = np.where(on, np.abs(g - lam * np.sign(x)), np.maximum(0.0, np.abs(g) - lam))
    out = float(res.max()) if res.size else 0.0
    if lam == 0:
        out += float(np.abs(A @ x - b).max())
    return out


def prox_grad_lasso(A, b, lam: float, tol: float = 1e-10, max_iter: int = 100_000,
                    x0=None) -> OracleResult:
    """Accelerated proximal gradient (FISTA) with function-value restart.

    Minimises ||x||_1 + ||Ax - b||^2 / (2 lam).  When an accelerated step
    would increase the objective, momentum is reset and a plain proximal
    gradient step from the current iterate is taken instead, so the
    objective sequence never increases.
    """
    if lam <= 0:
        raise NonPositiveLambda(f"lambda must be positive, got {lam}")
    A = np.asarray(A, dtype=float)
    b = np.asarray(b, dtype=float)
    n = A.shape[1]
    L = largest_eigenvalue(A.T @ A)
    if L == 0.0:
        x = np.zeros(n)
        return OracleResult(x, lasso_objective(A, b, lam, x), kkt_residual(A, b, lam, x), 0, True)
    step, thr = 1.0 / L, lam / L
    Atb = A.T @ b
    AtA = A.T @ A

    def prox_step(z):
        return soft_threshold(z - step * (AtA @ z - Atb), thr)

    x = np.zeros(n) if x0 is None else np.asarray(x0, dtype=float).copy()
    fx = lasso_objective(A, b, lam, x)
    history = [fx]
    y, t = x.copy(), 1.0
    res = kkt_residual(A, b, lam, x)
    it = 0
    while res > tol and it < max_iter:
        it += 1
        x_new = prox_step(y)
        f_new = lasso_objective(A, b, lam, x_new)
        if f_new > fx:
            t = 1.0
            x_new = prox_step(x)
            f_new = lasso_objective(A, b, lam, x_new)
            y = x_new.copy()
        else:
            t_new = 0.5 * (1.0 + np.sqrt(1.0 + 4.0 * t * t))
            y = x_new + ((t - 1.0) / t_new) * (x_new - x)
            t = t_new
        x, fx = x_new, f_new
        history.append(fx)
        res = kkt_residual(A, b, lam, x)
    return OracleResult(x, fx, res, it, res <= tol, history)


def bp_lp(A, b) -> Vec:
    """Exact basis pursuit: min ||x||_1 s.t. Ax = b, via x = u - v, u, v >= 0."""
    A = mat(A)
    b = vec(b)
    m, n = shape(A)
    eqs = [(tuple(row) + tuple(-a for a in row), bi) for row, bi in zip(A, b)]
    ineqs = [(tuple(-1 if j == k else 0 for j in range(2 * n)), 0) for k in range(2 * n)]
    out = lp_solve((1,) * (2 * n), "min", LinearSystem(2 * n, eqs, ineqs))
    if out.status != OPTIMAL:
        raise ValueError(f"basis pursuit LP is {out.status}")
    u, v = out.point[:n], out.point[n:]
    return tuple(a - c for a, c in zip(u, v))
