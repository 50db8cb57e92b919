"""Dense two-phase tableau simplex with Bland's anti-cycling rule.

Solves ``max/min c @ x`` subject to ``A_ub @ x <= b_ub``, ``A_eq @ x == b_eq``
and ``x >= 0``.  Intended for the small time-share programs of the oracle.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

OPTIMAL, INFEASIBLE, UNBOUNDED = "optimal", "infeasible", "unbounded"


@dataclass
class LPResult:
    status: str
    x: np.ndarray | None = None
    objective: float | None = None
    duals_ub: np.ndarray | None = None
    duals_eq: np.ndarray | None = None
    duality_gap: float | None = None
    iterations: int = 0

    @property
    def ok(self) -> bool:
        return self.status == OPTIMAL


def _pivot(T: np.ndarray, basis: list, r: int, j: int) -> None:
    T[r] /= T[r, j]
    col = T[:, j].copy()
    col[r] = 0.0
    T -= np.outer(col, T[r])
    basis[r] = j


def _simplex(T: np.ndarray, basis: list, n_cols: int, tol: float, max_iter: int) -> tuple[str, int]:
    """Minimize with the reduced-cost row stored as the last row of ``T``."""
    it = 0
    m = T.shape[0] - 1
    while it < max_iter:
        cost = T[-1, :n_cols]
        entering = np.flatnonzero(cost < -tol)
        if entering.size == 0:
            return OPTIMAL, it
        j = int(entering[0])  # Bland: lowest index
        col = T[:m, j]
        rows = np.flatnonzero(col > tol)
        if rows.size == 0:
            return UNBOUNDED, it
        ratios = T[rows, -1] / col[rows]
        best = ratios.min()
        tied = rows[ratios <= best + tol * max(1.0, abs(best))]
        r = int(min(tied, key=lambda i: basis[i]))  # Bland: lowest basic index leaves
        _pivot(T, basis, r, j)
        it += 1
    raise RuntimeError("simplex iteration limit reached")


def lp_solve(c, A_ub=None, b_ub=None, A_eq=None, b_eq=None, maximize: bool = False,
             tol: float = 1e-9, max_iter: int = 50_000) -> LPResult:
    c = np.asarray(c, dtype=float)
    n = len(c)
    A_ub = np.zeros((0, n)) if A_ub is None else np.atleast_2d(np.asarray(A_ub, dtype=float))
    b_ub = np.zeros(0) if b_ub is None else np.asarray(b_ub, dtype=float)
    A_eq = np.zeros((0, n)) if A_eq is None else np.atleast_2d(np.asarray(A_eq, dtype=float))
    b_eq = np.zeros(0) if b_eq is None else np.asarray(b_eq, dtype=float)
    m_ub, m_eq = len(b_ub), len(b_eq)
    m = m_ub + m_eq
    cmin = -c if maximize else c

    # equality form over [x, slack]
    A = np.zeros((m, n + m_ub))
    A[:m_ub, :n] = A_ub
    A[:m_ub, n:] = np.eye(m_ub)
    A[m_ub:, :n] = A_eq
    b = np.concatenate([b_ub, b_eq])
    sign = np.where(b < 0, -1.0, 1.0)
    A *= sign[:, None]
    b = b * sign
    nv = n + m_ub
    cfull = np.concatenate([cmin, np.zeros(m_ub)])

    # phase 1: artificial per row
    T = np.zeros((m + 1, nv + m + 1))
    T[:m, :nv] = A
    T[:m, nv:nv + m] = np.eye(m)
    T[:m, -1] = b
    T[-1, :nv] = -A.sum(axis=0)
    T[-1, -1] = -b.sum()
    basis = list(range(nv, nv + m))
    _, it1 = _simplex(T, basis, nv + m, tol, max_iter)
    if -T[-1, -1] > tol * max(1.0, np.abs(b).max(initial=0.0)) * 10:
        return LPResult(INFEASIBLE, iterations=it1)

    # drive zero-level artificials out of the basis, dropping redundant rows
    keep = []
    for r in range(m):
        if basis[r] >= nv:
            cand = np.flatnonzero(np.abs(T[r, :nv]) > tol)
            if cand.size == 0:
                continue
            _pivot(T, basis, r, int(cand[0]))
        keep.append(r)
    T = np.vstack([T[keep][:, list(range(nv)) + [T.shape[1] - 1]], np.zeros((1, nv + 1))])
    basis = [basis[r] for r in keep]
    rows = np.array(keep, dtype=int)

    # phase 2
    T[-1, :nv] = cfull
    T[-1, -1] = 0.0
    for r, j in enumerate(basis):
        T[-1] -= T[-1, j] * T[r]
    status, it2 = _simplex(T, basis, nv, tol, max_iter)
    if status == UNBOUNDED:
        return LPResult(UNBOUNDED, iterations=it1 + it2)

    xfull = np.zeros(nv)
    for r, j in enumerate(basis):
        xfull[j] = T[r, -1]
    xfull[np.abs(xfull) < tol] = 0.0
    x = xfull[:n]
    obj_min = float(cfull @ xfull)

    # duals of the min problem from the final basis: B^T y = c_B
    y = np.zeros(m)
    if len(basis):
        B = A[np.ix_(rows, basis)]
        y[rows] = np.linalg.solve(B.T, cfull[basis])
    y *= sign
    dual_obj = float(np.concatenate([b_ub, b_eq]) @ y)
    gap = abs(obj_min - dual_obj)
    if maximize:
        y = -y
    return LPResult(
        OPTIMAL,
        x=x,
        objective=-obj_min if maximize else obj_min,
        duals_ub=y[:m_ub],
        duals_eq=y[m_ub:],
        duality_gap=gap,
        iterations=it1 + it2,
    )
