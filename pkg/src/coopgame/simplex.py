"""Dense two-phase tableau simplex with Bland's rule.

Small problems only: a few hundred rows, tens of columns.  Variables are
free; each is split into a nonnegative pair internally.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

PIVOT_TOL = 1e-10


class LPError(ArithmeticError):
    pass


@dataclass(frozen=True)
class LPResult:
    status: str  # "optimal" | "infeasible" | "unbounded"
    x: np.ndarray | None
    fun: float | None
    iterations: int


def _pivot(T: np.ndarray, basis: list[int], row: int, col: int):
    T[row] /= T[row, col]
    col_vals = T[:, col].copy()
    col_vals[row] = 0.0
    T -= np.outer(col_vals, T[row])
    T[:, col] = 0.0
    T[row, col] = 1.0
    basis[row] = col


def _run(T: np.ndarray, basis: list[int], allowed: int, tol: float, max_iter: int) -> tuple[str, int]:
    """Minimise the objective in the last row over the first ``allowed`` columns."""
    it = 0
    while True:
        reduced = T[-1, :allowed]
        entering = np.flatnonzero(reduced < -tol)
        if entering.size == 0:
            return "optimal", it
        col = int(entering[0])
        column = T[:-1, col]
        rows = np.flatnonzero(column > tol)
        if rows.size == 0:
            return "unbounded", it
        ratios = T[rows, -1] / column[rows]
        best = ratios.min()
        ties = rows[ratios <= best + tol * max(1.0, abs(best))]
        row = int(min(ties, key=lambda r: basis[r]))
        _pivot(T, basis, row, col)
        it += 1
        if it > max_iter:
            raise LPError("simplex iteration limit reached")


def linprog(
    c,
    A_ub=None,
    b_ub=None,
    A_eq=None,
    b_eq=None,
    tol: float = PIVOT_TOL,
    max_iter: int = 50_000,
) -> LPResult:
    """Minimise ``c @ x`` subject to ``A_ub x <= b_ub`` and ``A_eq x == b_eq``, ``x`` free."""
    c = np.asarray(c, dtype=np.float64)
    n = c.size
    A_ub = np.zeros((0, n)) if A_ub is None else np.asarray(A_ub, dtype=np.float64).reshape(-1, n)
    b_ub = np.zeros(0) if b_ub is None else np.asarray(b_ub, dtype=np.float64).reshape(-1)
    A_eq = np.zeros((0, n)) if A_eq is None else np.asarray(A_eq, dtype=np.float64).reshape(-1, n)
    b_eq = np.zeros(0) if b_eq is None else np.asarray(b_eq, dtype=np.float64).reshape(-1)
    m_ub, m_eq = A_ub.shape[0], A_eq.shape[0]
    m = m_ub + m_eq

    # row equilibration on the structural coefficients
    A = np.vstack([A_ub, A_eq])
    b = np.concatenate([b_ub, b_eq])
    scale = np.abs(A).max(axis=1, initial=0.0)
    scale[scale == 0] = 1.0
    A = A / scale[:, None]
    b = b / scale

    # columns: x+ (n), x- (n), slacks (m_ub), artificials (as needed)
    A = np.hstack([A, -A, np.zeros((m, m_ub))])
    A[np.arange(m_ub), 2 * n + np.arange(m_ub)] = 1.0

    neg = b < 0
    A[neg] *= -1
    b[neg] *= -1

    basis: list[int] = []
    art_rows = []
    for i in range(m):
        if i < m_ub and not neg[i]:
            basis.append(2 * n + i)
        else:
            basis.append(-1)
            art_rows.append(i)
    n_core = A.shape[1]
    n_art = len(art_rows)
    T = np.zeros((m + 1, n_core + n_art + 1))
    T[:m, :n_core] = A
    T[:m, -1] = b
    for k, i in enumerate(art_rows):
        T[i, n_core + k] = 1.0
        basis[i] = n_core + k

    iters = 0
    if n_art:
        # phase 1 objective: sum of artificials, expressed in nonbasic terms
        T[-1, :] = 0.0
        T[-1, n_core : n_core + n_art] = 1.0
        for i in art_rows:
            T[-1] -= T[i]
        status, it = _run(T, basis, n_core + n_art, tol, max_iter)
        iters += it
        if -T[-1, -1] > tol * max(1.0, float(np.abs(b).max(initial=0.0))) * 10:
            return LPResult("infeasible", None, None, iters)
        # drive remaining zero-level artificials out of the basis
        keep = []
        for i in range(m):
            if basis[i] >= n_core:
                cand = np.flatnonzero(np.abs(T[i, :n_core]) > tol)
                if cand.size:
                    _pivot(T, basis, i, int(cand[0]))
                    keep.append(i)
            else:
                keep.append(i)
        T = np.vstack([T[keep], T[-1:]])
        basis = [basis[i] for i in keep]
        T = np.delete(T, np.s_[n_core : n_core + n_art], axis=1)

    cost = np.concatenate([c, -c, np.zeros(m_ub)])
    T[-1, :] = 0.0
    T[-1, :n_core] = cost
    for i, j in enumerate(basis):
        if cost[j] != 0.0:
            T[-1] -= cost[j] * T[i]
    status, it = _run(T, basis, n_core, tol, max_iter)
    iters += it
    if status == "unbounded":
        return LPResult("unbounded", None, None, iters)
    z = np.zeros(n_core)
    for i, j in enumerate(basis):
        z[j] = T[i, -1]
    x = z[:n] - z[n : 2 * n]
    return LPResult("optimal", x, float(c @ x), iters)
