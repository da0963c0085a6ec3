"""Two-phase primal simplex for pure-equality, box-bounded LPs.

Revised simplex with an LU-factored basis and product-form eta updates;
Dantzig pricing with a Bland fallback after a degenerate-pivot streak.
Deterministic: identical model and config give identical pivots and
identical output.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.sparse as sp
from scipy.linalg import lu_factor, lu_solve

STATUS_OPTIMAL = "optimal"
STATUS_INFEASIBLE = "infeasible"
STATUS_ITERATION_LIMIT = "iteration-limit"


class SolverError(RuntimeError):
    pass


@dataclass
class SolverConfig:
    pivot_tol: float = 1e-9
    feas_tol: float = 1e-7
    opt_tol: float = 1e-7
    degenerate_streak: int = 50
    iteration_factor: int = 100
    refactor_every: int = 100


@dataclass
class SolverResult:
    status: str
    objective: float
    values: np.ndarray
    iterations: int


@dataclass
class _Program:
    A: sp.csc_matrix
    b: np.ndarray
    c: np.ndarray
    lower: np.ndarray
    upper: np.ndarray


def _assemble(model) -> _Program:
    m, n = model.nrows, model.ncols
    data, ri, ci = [], [], []
    b = np.zeros(m)
    for k, (cols, coefs, rhs) in enumerate(model.rows):
        b[k] = rhs
        for j, c in zip(cols, coefs):
            ri.append(k)
            ci.append(j)
            data.append(c)
    A = sp.csc_matrix((data, (ri, ci)), shape=(m, n))
    return _Program(A, b, model.objective.astype(float),
                    model.lower.astype(float), model.upper.astype(float))


class _Simplex:
    """One bounded-variable simplex run over the artificial-augmented
    program.  Column layout: structural 0..n-1, artificials n..n+m-1.

    Nonbasic variables sit exactly at a bound; `at_upper` records which.
    The basis inverse is held as an LU factorization of a snapshot basis
    plus a list of eta updates, rebuilt every `refactor_every` pivots.
    """

    def __init__(self, prog: _Program, cfg: SolverConfig):
        self.cfg = cfg
        self.m, self.n = prog.A.shape
        m, n = self.m, self.n
        self.A = sp.hstack(
            [prog.A, sp.identity(m, format="csc")], format="csc")
        self.lower = np.concatenate([prog.lower, np.zeros(m)])
        self.upper = np.concatenate([prog.upper, np.full(m, np.inf)])
        self.x = np.concatenate([prog.lower.copy(), np.zeros(m)])
        resid = prog.b - prog.A @ prog.lower
        # flip artificial columns so their starting values are non-negative
        self.art_sign = np.where(resid >= 0, 1.0, -1.0)
        for k in range(m):
            col = n + k
            s0, s1 = self.A.indptr[col], self.A.indptr[col + 1]
            self.A.data[s0:s1] *= self.art_sign[k]
        self.x[n:] = np.abs(resid)
        self.basis = np.arange(n, n + m)
        self.in_basis = np.zeros(n + m, dtype=bool)
        self.in_basis[n:] = True
        self.at_upper = np.zeros(n + m, dtype=bool)
        self.b = prog.b
        self.lu = lu_factor(np.diag(self.art_sign))
        self.etas = []        # (leaving slot, B^-1 a_entering)
        self.iterations = 0
        self.degen_streak = 0

    def _ftran(self, v: np.ndarray) -> np.ndarray:
        x = lu_solve(self.lu, v)
        for l, w in self.etas:
            t = x[l] / w[l]
            if t != 0.0:
                x -= w * t
            x[l] = t
        return x

    def _btran(self, v: np.ndarray) -> np.ndarray:
        x = v.astype(float).copy()
        for l, w in reversed(self.etas):
            x[l] = (x[l] - w @ x + w[l] * x[l]) / w[l]
        return lu_solve(self.lu, x, trans=1)

    def _refactor(self):
        B = self.A[:, self.basis].toarray()
        self.lu = lu_factor(B)
        diag = np.abs(np.diag(self.lu[0]))
        if not np.all(np.isfinite(self.lu[0])) or np.min(diag) < 1e-12:
            raise SolverError("singular basis during refactorization")
        self.etas = []
        xn = self.x.copy()
        xn[self.basis] = 0.0
        self.x[self.basis] = self._ftran(self.b - self.A @ xn)

    def _reduced_costs(self, c):
        y = self._btran(c[self.basis])
        return c - self.A.T @ y

    def optimize(self, c, iter_limit) -> str:
        """Maximize c.x from the current basis; returns a status string."""
        tol = self.cfg.opt_tol
        movable = self.upper - self.lower > 0
        while True:
            if self.iterations >= iter_limit:
                return STATUS_ITERATION_LIMIT
            d = self._reduced_costs(c)
            cand = ~self.in_basis & movable
            up_ok = cand & ~self.at_upper & (d > tol)
            dn_ok = cand & self.at_upper & (d < -tol)
            eligible = np.nonzero(up_ok | dn_ok)[0]
            if eligible.size == 0:
                return STATUS_OPTIMAL
            if self.degen_streak >= self.cfg.degenerate_streak:
                j = int(eligible[0])  # Bland
            else:
                j = int(eligible[np.argmax(np.abs(d[eligible]))])
            self._pivot(j, -1.0 if self.at_upper[j] else 1.0)
            self.iterations += 1
            if len(self.etas) >= self.cfg.refactor_every:
                self._refactor()

    def _pivot(self, j: int, sign: float):
        """Move entering variable j in direction `sign` until a bound blocks."""
        cfg = self.cfg
        w = self._ftran(self.A[:, [j]].toarray().ravel())
        xb = self.x[self.basis]
        t_best = self.upper[j] - self.lower[j]  # bound-to-bound flip
        leave = -1
        for k in range(self.m):
            wk = sign * w[k]
            if wk > cfg.pivot_tol:
                t = (xb[k] - self.lower[self.basis[k]]) / wk
            elif wk < -cfg.pivot_tol:
                t = (self.upper[self.basis[k]] - xb[k]) / (-wk)
            else:
                continue
            take = t < t_best - 1e-12 or (
                t <= t_best + 1e-12
                and (leave < 0 or self.basis[k] < self.basis[leave]))
            if take:
                t_best = min(t, t_best)
                leave = k
        if not np.isfinite(t_best):
            raise SolverError("unbounded direction in bounded model")
        t_best = max(t_best, 0.0)
        self.degen_streak = self.degen_streak + 1 if t_best <= 1e-12 else 0
        self.x[self.basis] = xb - sign * t_best * w
        self.x[j] += sign * t_best
        if leave < 0:
            # entering variable flipped to its other bound, basis unchanged
            self.at_upper[j] = not self.at_upper[j]
            self.x[j] = self.upper[j] if self.at_upper[j] else self.lower[j]
            return
        out = self.basis[leave]
        wk = sign * w[leave]
        self.at_upper[out] = wk < 0
        self.x[out] = self.upper[out] if self.at_upper[out] else self.lower[out]
        self.basis[leave] = j
        self.in_basis[out] = False
        self.in_basis[j] = True
        self.etas.append((leave, w))


def _presolve(prog: _Program):
    """Substitute out variables fixed by their bounds, drop settled rows.

    Returns (reduced program, kept column indices, fixed value vector).
    The reduced program is None when everything is fixed.
    """
    fixed = prog.upper - prog.lower <= 0
    keep = np.nonzero(~fixed)[0]
    xfix = np.where(fixed, prog.lower, 0.0)
    b = prog.b - prog.A @ xfix
    rows = []
    A = prog.A.tocsr()
    for k in range(A.shape[0]):
        cols = A.indices[A.indptr[k]:A.indptr[k + 1]]
        if np.any(~fixed[cols]):
            rows.append(k)
        elif abs(b[k]) > 1e-9:
            return None, keep, xfix, False
    if keep.size == 0:
        ok = len(rows) == 0
        return None, keep, xfix, ok
    red = _Program(prog.A[np.ix_(rows)][:, keep].tocsc(), b[rows],
                   prog.c[keep], prog.lower[keep], prog.upper[keep])
    return red, keep, xfix, True


def solve(model, config: SolverConfig | None = None) -> SolverResult:
    cfg = config or SolverConfig()
    full = _assemble(model)
    prog, keep, xfix, consistent = _presolve(full)
    if not consistent:
        return SolverResult(STATUS_INFEASIBLE, float("nan"), xfix, 0)
    if prog is None:
        return SolverResult(STATUS_OPTIMAL, float(full.c @ xfix), xfix, 0)
    m, n = prog.A.shape

    def expand(values):
        x = xfix.copy()
        x[keep] = values
        return x

    if m == 0:
        x = expand(np.where(prog.c > 0, prog.upper, prog.lower))
        return SolverResult(STATUS_OPTIMAL, float(full.c @ x), x, 0)
    sx = _Simplex(prog, cfg)
    iter_limit = cfg.iteration_factor * (m + n)

    phase1 = np.zeros(n + m)
    phase1[n:] = -1.0
    status = sx.optimize(phase1, iter_limit)
    if status != STATUS_OPTIMAL:
        return SolverResult(status, float("nan"), expand(sx.x[:n]),
                            sx.iterations)
    if sx.x[n:].sum() > cfg.feas_tol:
        return SolverResult(STATUS_INFEASIBLE, float("nan"),
                            expand(sx.x[:n]), sx.iterations)
    # pin artificials at zero for phase 2
    sx.upper[n:] = 0.0
    sx.x[n:] = np.maximum(sx.x[n:], 0.0)
    phase2 = np.zeros(n + m)
    phase2[:n] = prog.c
    sx.degen_streak = 0
    status = sx.optimize(phase2, iter_limit)
    values = expand(sx.x[:n])
    obj = float(full.c @ values)
    return SolverResult(status, obj if status == STATUS_OPTIMAL else float("nan"),
                        values, sx.iterations)


def check_solution(model, values, tol: float = 1e-7) -> dict:
    """Independent residual report for a candidate solution."""
    values = np.asarray(values, dtype=float)
    max_row = 0.0
    for cols, coefs, rhs in model.rows:
        res = abs(sum(c * values[j] for j, c in zip(cols, coefs)) - rhs)
        max_row = max(max_row, res)
    max_bound = max(
        float(np.max(model.lower - values, initial=0.0)),
        float(np.max(values - model.upper, initial=0.0)),
    )
    objective = float(np.dot(model.objective, values))
    return {
        "max_row_residual": max_row,
        "max_bound_violation": max_bound,
        "objective": objective,
        "feasible": max_row <= tol and max_bound <= tol,
    }
