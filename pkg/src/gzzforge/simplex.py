"""Bounded-variable revised simplex over the sign-pattern frame.

The constraint matrix is never stored. Column m carries the pairwise sign
products s_i s_j of encoding m over the strict upper triangle; every pair row
is a Walsh character of the index bits, so pricing all 2^(n-1) columns at once
is a single fast Walsh-Hadamard transform.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import ConvergenceError
from .frame import Encoding
from .hollow import pairs
from .walsh import fwht

PIVOT_TOL = 1e-11
STALL_LIMIT = 40
REFACTOR_EVERY = 64


class FrameOracle:
    """Implicit column access to the (pairs x 2^(n-1)) sign-product matrix."""

    def __init__(self, n: int):
        self.n = n
        self.rows = n * (n - 1) // 2
        self.ncols = 1 << (n - 1)
        ii, jj = pairs(n)
        masks = np.where(jj == n - 1, 1 << ii, (1 << ii) | (1 << jj))
        self.masks = masks.astype(np.int64)

    def column(self, m: int) -> np.ndarray:
        s = Encoding(self.n, int(m)).signs
        ii, jj = pairs(self.n)
        return (s[ii] * s[jj]).astype(float)

    def score_all(self, y: np.ndarray) -> np.ndarray:
        """V^T y for every column, via one Walsh transform."""
        coef = np.zeros(self.ncols)
        coef[self.masks] = y
        return fwht(coef)

    def apply(self, w: np.ndarray) -> np.ndarray:
        """V @ w for a full-length weight vector."""
        return fwht(w)[self.masks]


@dataclass
class SimplexResult:
    status: str
    objective: float
    iterations: int
    basis: np.ndarray = field(repr=False)
    x_basis: np.ndarray = field(repr=False)
    nonbasic_values: np.ndarray = field(repr=False)

    def solution(self) -> np.ndarray:
        """Dense value vector over the real columns."""
        x = self.nonbasic_values.copy()
        for i, j in enumerate(self.basis):
            if j < len(x):
                x[j] = self.x_basis[i]
        return x


class _Engine:
    def __init__(self, oracle, rhs, lower, upper, pivot_rule, tol, max_iter):
        rows, ncols = oracle.rows, oracle.ncols
        self.oracle = oracle
        self.rows = rows
        self.ncols = ncols
        self.rhs = np.asarray(rhs, float)
        self.tol = tol
        self.pivot_rule = pivot_rule
        self.max_iter = max_iter
        # bound arrays cover real columns then one artificial per row
        self.lo = np.concatenate([lower, np.zeros(rows)])
        self.hi = np.concatenate([upper, np.full(rows, np.inf)])
        self.at_upper = np.zeros(ncols + rows, bool)
        self.basic = np.zeros(ncols + rows, bool)
        self.iterations = 0

        resid = self.rhs - self.oracle.apply(self._nonbasic_real())
        self.sigma = np.where(resid >= 0.0, 1.0, -1.0)
        self.basis = np.arange(ncols, ncols + rows)
        self.basic[self.basis] = True
        self.x_b = np.abs(resid)
        self.b_inv = np.diag(self.sigma)
        self.changes = 0

    def _nonbasic_real(self) -> np.ndarray:
        vals = np.where(self.at_upper[: self.ncols],
                        np.where(np.isfinite(self.hi[: self.ncols]),
                                 self.hi[: self.ncols], 0.0),
                        self.lo[: self.ncols])
        vals[self.basic[: self.ncols]] = 0.0
        return vals

    def column_of(self, j: int) -> np.ndarray:
        if j >= self.ncols:
            e = np.zeros(self.rows)
            e[j - self.ncols] = self.sigma[j - self.ncols]
            return e
        return self.oracle.column(j)

    def refactor(self):
        B = np.column_stack([self.column_of(j) for j in self.basis])
        self.b_inv = np.linalg.inv(B)
        contrib = self.oracle.apply(self._nonbasic_real())
        self.x_b = self.b_inv @ (self.rhs - contrib)
        self.changes = 0

    def _pivot(self, q, w, r, t, direction):
        self.x_b += t * (-direction * w)
        leave = self.basis[r]
        # the leaving variable exits at whichever bound it just hit
        self.at_upper[leave] = (-direction * w[r]) > 0
        self.basic[leave] = False
        enter_value = self.lo[q] + t if direction > 0 else self.hi[q] - t
        self.basis[r] = q
        self.basic[q] = True
        self.x_b[r] = enter_value
        piv = self.b_inv[r] / w[r]
        self.b_inv -= np.outer(w, piv)
        self.b_inv[r] = piv
        self.changes += 1
        if self.changes >= REFACTOR_EVERY:
            self.refactor()

    def run_phase(self, cost_real, cost_art):
        costs = np.concatenate([cost_real, cost_art])
        stall = 0
        bland = self.pivot_rule == "bland"
        while True:
            self.iterations += 1
            if self.iterations > self.max_iter:
                raise ConvergenceError(
                    f"simplex exceeded {self.max_iter} iterations")
            y = costs[self.basis] @ self.b_inv
            d = cost_real - self.oracle.score_all(y)
            nb = ~self.basic[: self.ncols]
            open_box = self.hi[: self.ncols] > self.lo[: self.ncols]
            elig_lo = nb & ~self.at_upper[: self.ncols] & open_box & (d < -self.tol)
            elig_hi = nb & self.at_upper[: self.ncols] & (d > self.tol)
            any_elig = elig_lo | elig_hi
            if not any_elig.any():
                return
            if bland or stall > STALL_LIMIT:
                q = int(np.nonzero(any_elig)[0][0])
            else:
                viol = np.where(elig_lo, -d, np.where(elig_hi, d, -np.inf))
                q = int(np.argmax(viol))
            direction = -1.0 if self.at_upper[q] else 1.0
            w = self.b_inv @ self.column_of(q)
            delta = -direction * w
            lim = np.full(self.rows, np.inf)
            falling = delta < -PIVOT_TOL
            rising = delta > PIVOT_TOL
            lim[falling] = (self.x_b[falling] - self.lo[self.basis[falling]]) / (
                -delta[falling])
            lim[rising] = (self.hi[self.basis[rising]] - self.x_b[rising]) / (
                delta[rising])
            lim = np.maximum(lim, 0.0)
            flip_t = self.hi[q] - self.lo[q]
            r = int(np.argmin(lim))
            if bland or stall > STALL_LIMIT:
                best = lim[r]
                ties = np.nonzero(lim <= best + PIVOT_TOL)[0]
                if len(ties):
                    r = int(ties[np.argmin(self.basis[ties])])
            else:
                best = lim[r]
                ties = np.nonzero(lim <= best + PIVOT_TOL)[0]
                if len(ties) > 1:
                    r = int(ties[np.argmax(np.abs(delta[ties]))])
            t = min(float(lim[r]), float(flip_t))
            if not np.isfinite(t):
                raise ConvergenceError("unbounded simplex direction")
            if t < PIVOT_TOL:
                stall += 1
            else:
                stall = 0
            if flip_t <= lim[r]:
                self.x_b += flip_t * delta
                self.at_upper[q] = ~self.at_upper[q]
            else:
                self._pivot(q, w, r, t, direction)

    def drive_out_artificials(self):
        for r in range(self.rows):
            if self.basis[r] < self.ncols:
                continue
            scores = self.oracle.score_all(self.b_inv[r])
            scores[self.basic[: self.ncols]] = 0.0
            q = int(np.argmax(np.abs(scores)))
            if abs(scores[q]) < 1e-9:
                continue
            w = self.b_inv @ self.column_of(q)
            self._pivot(q, w, r, 0.0, 1.0 if not self.at_upper[q] else -1.0)


def solve_frame_lp(oracle: FrameOracle, rhs, cost, lower, upper, *,
                   pivot_rule: str = "dantzig-with-bland-fallback",
                   tol: float = 1e-9, max_iter: int | None = None) -> SimplexResult:
    """Minimize cost @ x subject to V x = rhs and lower <= x <= upper.

    Two-phase: artificial variables form the starting basis, then real costs
    take over with the artificials pinned at zero.
    """
    cost = np.asarray(cost, float)
    lower = np.asarray(lower, float)
    upper = np.asarray(upper, float)
    if max_iter is None:
        max_iter = max(5000, 60 * oracle.rows + 4 * oracle.ncols)
    eng = _Engine(oracle, rhs, lower, upper, pivot_rule, tol, max_iter)

    eng.run_phase(np.zeros(oracle.ncols), np.ones(oracle.rows))
    art_total = sum(eng.x_b[i] for i in range(oracle.rows)
                    if eng.basis[i] >= oracle.ncols)
    if art_total > 1e-7:
        return SimplexResult("infeasible", float("nan"), eng.iterations,
                             eng.basis.copy(), eng.x_b.copy(),
                             eng._nonbasic_real())
    eng.drive_out_artificials()
    eng.hi[oracle.ncols:] = 0.0

    eng.run_phase(cost, np.zeros(oracle.rows))
    eng.refactor()
    nb_vals = eng._nonbasic_real()
    obj = float(cost @ nb_vals)
    for i, j in enumerate(eng.basis):
        if j < oracle.ncols:
            obj += cost[j] * eng.x_b[i]
    return SimplexResult("optimal", obj, eng.iterations,
                         eng.basis.copy(), eng.x_b.copy(), nb_vals)
