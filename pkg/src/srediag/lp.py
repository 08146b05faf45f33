"""Small dense linear programs.

    maximize    c . x
    subject to  A_eq x == b_eq
                A_ub x <= b_ub
                lower <= x <= upper      (entries may be infinite)

Solved with a two-phase tableau simplex and Bland's rule, so every solve
terminates. Problems here have at most ~100 variables; there is no sparsity
or revised-simplex machinery. When the optimum is degenerate the returned
maximizer is one vertex of the optimal face and callers must not depend on
which one.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np

from . import config


class LpStatus(enum.Enum):
    OPTIMAL = "optimal"
    INFEASIBLE = "infeasible"
    UNBOUNDED = "unbounded"
    NUMERICAL_FAILURE = "numerical_failure"


class LpError(RuntimeError):
    """An LP that should be solvable came back without an optimum."""


def _matrix(M, ncols):
    if M is None:
        return np.zeros((0, ncols))
    M = np.asarray(M, dtype=float)
    if M.ndim == 1:
        M = M.reshape(1, -1) if M.size else np.zeros((0, ncols))
    return M


@dataclass(frozen=True)
class LinearProgram:
    objective: np.ndarray
    A_eq: np.ndarray = None
    b_eq: np.ndarray = None
    A_ub: np.ndarray = None
    b_ub: np.ndarray = None
    lower: np.ndarray = None
    upper: np.ndarray = None

    def __post_init__(self):
        c = np.asarray(self.objective, dtype=float).reshape(-1)
        n = c.size
        A_eq, A_ub = _matrix(self.A_eq, n), _matrix(self.A_ub, n)
        b_eq = np.asarray(self.b_eq if self.b_eq is not None else [], dtype=float).reshape(-1)
        b_ub = np.asarray(self.b_ub if self.b_ub is not None else [], dtype=float).reshape(-1)
        lo = np.zeros(n) if self.lower is None else np.broadcast_to(
            np.asarray(self.lower, dtype=float), (n,)).copy()
        hi = np.full(n, np.inf) if self.upper is None else np.broadcast_to(
            np.asarray(self.upper, dtype=float), (n,)).copy()
        if A_eq.shape[1] != n or A_ub.shape[1] != n:
            raise ValueError("constraint matrices must have one column per variable")
        if A_eq.shape[0] != b_eq.size or A_ub.shape[0] != b_ub.size:
            raise ValueError("constraint rows and right-hand sides differ in length")
        if np.any(lo > hi):
            raise ValueError("lower bound exceeds upper bound")
        if np.any(lo == np.inf) or np.any(hi == -np.inf):
            raise ValueError("bounds must admit a finite value")
        for name, arr in (("objective", c), ("A_eq", A_eq), ("b_eq", b_eq), ("A_ub", A_ub), ("b_ub", b_ub)):
            if not np.all(np.isfinite(arr)):
                raise ValueError(f"{name} has non-finite entries")
        for name, val in (("objective", c), ("A_eq", A_eq), ("b_eq", b_eq), ("A_ub", A_ub),
                          ("b_ub", b_ub), ("lower", lo), ("upper", hi)):
            val.setflags(write=False)
            object.__setattr__(self, name, val)

    @property
    def num_vars(self) -> int:
        return self.objective.size

    def violation(self, x) -> float:
        """Largest constraint violation of ``x`` (0 when feasible)."""
        x = np.asarray(x, dtype=float)
        worst = 0.0
        if self.A_eq.size:
            worst = max(worst, float(np.max(np.abs(self.A_eq @ x - self.b_eq))))
        if self.A_ub.size:
            worst = max(worst, float(np.max(self.A_ub @ x - self.b_ub, initial=0.0)))
        worst = max(worst, float(np.max(self.lower - x, initial=0.0)))
        worst = max(worst, float(np.max(x - self.upper, initial=0.0)))
        return worst


@dataclass(frozen=True)
class LpSolution:
    status: LpStatus
    value: float
    point: np.ndarray | None
    iterations: int

    @property
    def optimal(self) -> bool:
        return self.status is LpStatus.OPTIMAL


class _Tableau:
    """Dense simplex tableau ``[B^-1 A | B^-1 b]`` with its basis."""

    def __init__(self, A, rhs, basis, pivot_tol):
        self.T = np.hstack([A, rhs.reshape(-1, 1)])
        self.basis = list(basis)
        self.pivot_tol = pivot_tol
        self.iterations = 0

    def pivot(self, row, col):
        T = self.T
        prow = T[row] / T[row, col]
        T -= np.outer(T[:, col], prow)
        T[row] = prow
        self.basis[row] = col
        self.iterations += 1

    def maximize(self, cost, allowed, max_iter):
        """Run Bland-rule pivots for ``max cost . z`` using columns in ``allowed``.

        Returns "optimal", "unbounded" or "iteration_limit".
        """
        T = self.T
        tol = self.pivot_tol
        while True:
            if self.iterations >= max_iter:
                return "iteration_limit"
            cb = cost[self.basis]
            reduced = cost - cb @ T[:, :-1]
            entering = next((j for j in allowed if reduced[j] > tol), None)
            if entering is None:
                return "optimal"
            column = T[:, entering]
            rows = np.flatnonzero(column > tol)
            if rows.size == 0:
                return "unbounded"
            ratios = T[rows, -1] / column[rows]
            best = ratios.min()
            ties = rows[ratios <= best + tol * max(1.0, abs(best))]
            leaving = min(ties, key=lambda r: self.basis[r])
            self.pivot(leaving, entering)


def solve(lp: LinearProgram, *, pivot_tol: float = config.PIVOT_TOL,
          feas_tol: float = config.LP_FEAS_TOL, check_tol: float = config.LP_CHECK_TOL,
          max_iter: int = 50_000) -> LpSolution:
    """Maximize ``lp`` and return a certified :class:`LpSolution`.

    Optimal points are re-checked against the original constraints; a point
    that fails the re-check at ``check_tol`` is reported as
    ``NUMERICAL_FAILURE`` instead of being returned as optimal.
    """
    n = lp.num_vars
    lo, hi = lp.lower, lp.upper

    # x = offset + M s with s >= 0
    offset = np.zeros(n)
    cols = []
    box_rows = []
    for j in range(n):
        if np.isfinite(lo[j]):
            offset[j] = lo[j]
            cols.append((j, 1.0))
            if np.isfinite(hi[j]):
                box_rows.append((len(cols) - 1, hi[j] - lo[j]))
        elif np.isfinite(hi[j]):
            offset[j] = hi[j]
            cols.append((j, -1.0))
        else:
            cols.append((j, 1.0))
            cols.append((j, -1.0))
    k = len(cols)
    M = np.zeros((n, k))
    for col, (j, sign) in enumerate(cols):
        M[j, col] = sign

    eq_A = lp.A_eq @ M
    eq_b = lp.b_eq - lp.A_eq @ offset
    ub_A = lp.A_ub @ M
    ub_b = lp.b_ub - lp.A_ub @ offset
    if box_rows:
        extra = np.zeros((len(box_rows), k))
        for r, (col, width) in enumerate(box_rows):
            extra[r, col] = 1.0
        ub_A = np.vstack([ub_A, extra])
        ub_b = np.concatenate([ub_b, [w for _, w in box_rows]])

    m_eq, m_ub = eq_A.shape[0], ub_A.shape[0]
    m = m_eq + m_ub
    # columns: s (k) | slacks (m_ub) | artificials (added below)
    A = np.zeros((m, k + m_ub))
    A[:m_eq, :k] = eq_A
    A[m_eq:, :k] = ub_A
    A[m_eq:, k:] = np.eye(m_ub)
    rhs = np.concatenate([eq_b, ub_b])
    flip = rhs < 0
    A[flip] *= -1.0
    rhs[flip] *= -1.0

    basis = [None] * m
    for r in range(m_eq, m):
        if not flip[r]:
            basis[r] = k + (r - m_eq)
    need_art = [r for r in range(m) if basis[r] is None]
    n_struct = k + m_ub
    art = np.zeros((m, len(need_art)))
    for a, r in enumerate(need_art):
        art[r, a] = 1.0
        basis[r] = n_struct + a
    tab = _Tableau(np.hstack([A, art]), rhs, basis, pivot_tol)
    n_total = n_struct + len(need_art)

    def failed():
        return LpSolution(LpStatus.NUMERICAL_FAILURE, float("nan"), None, tab.iterations)

    if need_art:
        cost1 = np.zeros(n_total)
        cost1[n_struct:] = -1.0
        outcome = tab.maximize(cost1, range(n_total), max_iter)
        if outcome != "optimal":
            return failed()
        infeas = float(np.sum(tab.T[:, -1][np.array(tab.basis) >= n_struct]))
        if infeas > feas_tol * max(1.0, float(np.max(np.abs(rhs), initial=0.0))):
            return LpSolution(LpStatus.INFEASIBLE, float("nan"), None, tab.iterations)
        # drive artificials out of the basis, dropping redundant rows
        r = 0
        while r < tab.T.shape[0]:
            if tab.basis[r] >= n_struct:
                cands = np.flatnonzero(np.abs(tab.T[r, :n_struct]) > pivot_tol)
                if cands.size:
                    tab.pivot(r, int(cands[0]))
                else:
                    tab.T = np.delete(tab.T, r, axis=0)
                    del tab.basis[r]
                    continue
            r += 1
        tab.T = np.delete(tab.T, np.s_[n_struct:n_total], axis=1)

    c_s = np.concatenate([lp.objective @ M, np.zeros(m_ub)])
    outcome = tab.maximize(c_s, range(n_struct), max_iter)
    if outcome == "unbounded":
        return LpSolution(LpStatus.UNBOUNDED, float("inf"), None, tab.iterations)
    if outcome != "optimal":
        return failed()

    z = np.zeros(n_struct)
    for r, var in enumerate(tab.basis):
        z[var] = tab.T[r, -1]
    x = offset + M @ z[:k]
    # snap onto finite bounds within tolerance
    x = np.where(np.abs(x - lo) <= feas_tol, lo, x)
    x = np.where(np.abs(x - hi) <= feas_tol, hi, x)
    scale = max(1.0, float(np.max(np.abs(np.concatenate([lp.b_eq, lp.b_ub])), initial=0.0)))
    if lp.violation(x) > check_tol * scale:
        return failed()
    return LpSolution(LpStatus.OPTIMAL, float(lp.objective @ x), x, tab.iterations)


def solve_or_raise(lp: LinearProgram, **kwargs) -> LpSolution:
    sol = solve(lp, **kwargs)
    if not sol.optimal:
        raise LpError(f"linear program returned {sol.status.value}")
    return sol
