"""Time-optimal decomposition of coupling targets over the sign frame.

A target M in the space of hollow symmetric matrices is written as a
nonnegative combination sum(lambda_m * m m^T) over sign vectors m whose last
entry is +1. The LP minimizes total evolution time 1^T lambda; the MIP
additionally prices each active encoding (an X layer) and confines every
nonzero lambda to a hardware window [eps_l, eps_u].
"""

from __future__ import annotations

import heapq
import itertools
import json
import logging
import math
from dataclasses import dataclass, field

import numpy as np

from .errors import DimensionError, InfeasibleError
from .frame import Encoding, outer_product
from .hollow import HollowSymmetric, pairs
from .simplex import FrameOracle, solve_frame_lp

log = logging.getLogger(__name__)

EXACT_TRUNCATION_CAP = 16
DROP_TOL = 1e-12


@dataclass(frozen=True)
class Decomposition:
    """Weighted sign-pattern decomposition; lambdas are seconds."""

    n: int
    terms: tuple[tuple[int, float], ...]

    def __post_init__(self):
        object.__setattr__(self, "terms", tuple(
            (int(i), float(l)) for i, l in self.terms))
        limit = 1 << (self.n - 1)
        for index, lam in self.terms:
            if not 0 <= index < limit:
                raise ValueError(f"encoding index {index} out of range for n={self.n}")
            if lam < 0:
                raise ValueError(f"negative duration {lam}")

    @property
    def total_time(self) -> float:
        return float(sum(lam for _, lam in self.terms))

    @property
    def encoding_cost(self) -> int:
        return sum(1 for _, lam in self.terms if lam > 0)

    def reconstruct(self) -> HollowSymmetric:
        acc = HollowSymmetric.zeros(self.n)
        for index, lam in self.terms:
            acc = acc + outer_product(Encoding(self.n, index)) * lam
        return acc

    def to_json(self) -> str:
        return json.dumps({
            "n": self.n,
            "terms": [{"index": i, "lambda": lam} for i, lam in self.terms],
            "total_time": self.total_time,
            "encoding_cost": self.encoding_cost,
        }, indent=2)

    @classmethod
    def from_json(cls, text: str) -> "Decomposition":
        data = json.loads(text)
        return cls(int(data["n"]),
                   tuple((t["index"], t["lambda"]) for t in data["terms"]))


@dataclass(frozen=True)
class SolveOptions:
    feas_tol: float = 1e-9
    pivot_rule: str = "dantzig-with-bland-fallback"
    eps_l: float = 27e-6
    eps_u: float | None = None
    alpha: float = 0.5
    mip_rel_gap: float = 0.6
    node_limit: int = 100_000
    qubit_cap: int = 14

    def __post_init__(self):
        if self.pivot_rule not in ("bland", "dantzig-with-bland-fallback"):
            raise ValueError(f"unknown pivot rule {self.pivot_rule!r}")
        if not 0.0 <= self.alpha <= 1.0:
            raise ValueError("alpha must lie in [0, 1]")
        if self.eps_l < 0:
            raise ValueError("eps_l must be nonnegative")
        if self.eps_u is not None:
            if not self.eps_l < self.eps_u:
                raise ValueError("need eps_l < eps_u")
            if math.isinf(self.eps_u) and self.alpha != 1.0:
                raise ValueError(
                    "an unbounded eps_u leaves the encoding count unpriced; "
                    "only alpha=1 is meaningful then")


def hadamard_quotient(A: HollowSymmetric, J: HollowSymmetric) -> HollowSymmetric:
    """Entrywise target-over-coupling quotient M_ij = A_ij / J_ij (seconds)."""
    if A.n != J.n:
        raise DimensionError(f"size mismatch: {A.n} vs {J.n}")
    out = np.zeros_like(A.upper)
    ii, jj = pairs(A.n)
    for k in range(len(out)):
        a, j = A.upper[k], J.upper[k]
        if a == 0.0:
            continue
        if j == 0.0:
            raise ValueError(
                f"target has weight on pair ({ii[k]}, {jj[k]}) but the "
                "coupling vanishes there")
        out[k] = a / j
    return HollowSymmetric(A.n, out)


def _check_cap(M: HollowSymmetric, opts: SolveOptions):
    if M.n > opts.qubit_cap:
        raise DimensionError(
            f"n={M.n} exceeds the solver cap {opts.qubit_cap} "
            f"(2^(n-1) columns would be materialized)")


def _extract(n: int, values: dict[int, float]) -> Decomposition:
    terms = tuple(sorted((i, v) for i, v in values.items() if v > DROP_TOL))
    return Decomposition(n, terms)


def solve_lp(M: HollowSymmetric, opts: SolveOptions | None = None) -> Decomposition:
    """Minimum-total-time nonnegative decomposition (always feasible)."""
    opts = opts or SolveOptions()
    _check_cap(M, opts)
    if M.max_abs() == 0.0:
        return Decomposition(M.n, ())
    oracle = FrameOracle(M.n)
    res = solve_frame_lp(
        oracle, M.upper,
        np.ones(oracle.ncols), np.zeros(oracle.ncols),
        np.full(oracle.ncols, np.inf),
        pivot_rule=opts.pivot_rule, tol=opts.feas_tol)
    if res.status != "optimal":
        raise InfeasibleError("frame LP reported infeasible; target is not "
                              "a hollow symmetric matrix of matching size")
    values = {}
    for i, j in enumerate(res.basis):
        if j < oracle.ncols and res.x_basis[i] > DROP_TOL:
            values[int(j)] = float(res.x_basis[i])
    return _extract(M.n, values)


@dataclass(order=True)
class _Node:
    bound: float
    seq: int
    fixed0: frozenset = field(compare=False)
    fixed1: frozenset = field(compare=False)
    solution: dict = field(compare=False)


def _solve_relaxation(oracle, M, opts, eps_u, fixed0, fixed1):
    ncols = oracle.ncols
    cost = np.full(ncols, opts.alpha + (1.0 - opts.alpha) / eps_u
                   if math.isfinite(eps_u) else opts.alpha)
    lower = np.zeros(ncols)
    upper = np.full(ncols, eps_u)
    for j in fixed0:
        upper[j] = 0.0
    for j in fixed1:
        cost[j] = opts.alpha
        lower[j] = opts.eps_l
    res = solve_frame_lp(oracle, M.upper, cost, lower, upper,
                         pivot_rule=opts.pivot_rule, tol=opts.feas_tol)
    if res.status != "optimal":
        return None, math.inf
    x = res.solution()
    values = {int(j): float(v) for j, v in enumerate(x) if v > DROP_TOL}
    bound = res.objective + (1.0 - opts.alpha) * len(fixed1)
    return values, bound


def _mip_feasible(values, fixed1, opts, eps_u):
    for j, v in values.items():
        if v < opts.eps_l - 1e-9 or v > eps_u + 1e-9:
            return False
    for j in fixed1:
        if values.get(j, 0.0) < opts.eps_l - 1e-9:
            return False
    return True


def _true_objective(values, opts):
    return (opts.alpha * sum(values.values())
            + (1.0 - opts.alpha) * len(values))


def solve_mip(M: HollowSymmetric, opts: SolveOptions | None = None) -> Decomposition:
    """Branch-and-bound over encoding activations.

    Every emitted duration lies in [eps_l, eps_u]; the objective
    alpha * total_time + (1 - alpha) * encoding_cost is brought within
    mip_rel_gap of the best-bound certificate.
    """
    opts = opts or SolveOptions()
    _check_cap(M, opts)
    if M.max_abs() == 0.0:
        return Decomposition(M.n, ())
    eps_u = opts.eps_u if opts.eps_u is not None else 1.5 * M.max_abs()
    if not opts.eps_l < eps_u:
        raise InfeasibleError(
            f"window [{opts.eps_l}, {eps_u}] is empty for this target")
    oracle = FrameOracle(M.n)

    counter = itertools.count()
    incumbent: dict[int, float] | None = None
    incumbent_obj = math.inf

    values, bound = _solve_relaxation(oracle, M, opts, eps_u,
                                      frozenset(), frozenset())
    if values is None:
        raise InfeasibleError(
            f"no decomposition fits every duration inside "
            f"[{opts.eps_l}, {eps_u}]; widen the window")
    heap = [_Node(bound, next(counter), frozenset(), frozenset(), values)]
    explored = 0

    def harvest(values, fixed1):
        nonlocal incumbent, incumbent_obj
        if not _mip_feasible(values, fixed1, opts, eps_u):
            return
        obj = _true_objective(values, opts)
        if obj < incumbent_obj - 1e-12:
            incumbent, incumbent_obj = dict(values), obj

    while heap:
        node = heapq.heappop(heap)
        if incumbent is not None:
            gap = (incumbent_obj - node.bound) / max(abs(incumbent_obj), 1e-30)
            if gap <= opts.mip_rel_gap or node.bound >= incumbent_obj - 1e-12:
                break
        explored += 1
        if explored > opts.node_limit:
            log.warning("node limit %d reached; returning incumbent with "
                        "relative gap %.3g", opts.node_limit,
                        (incumbent_obj - node.bound) / max(abs(incumbent_obj), 1e-30)
                        if incumbent is not None else math.inf)
            break
        harvest(node.solution, node.fixed1)

        free_frac = []
        for j, v in node.solution.items():
            if j in node.fixed1 or j in node.fixed0:
                continue
            b_hat = v / eps_u if math.isfinite(eps_u) else 1.0
            frac = min(b_hat, 1.0 - b_hat)
            if frac > 1e-9:
                free_frac.append((frac, j))
        if not free_frac:
            continue
        free_frac.sort(key=lambda fj: (-fj[0], fj[1]))
        branch = free_frac[0][1]

        for child_fixed0, child_fixed1 in (
                (node.fixed0 | {branch}, node.fixed1),
                (node.fixed0, node.fixed1 | {branch})):
            vals, bound = _solve_relaxation(oracle, M, opts, eps_u,
                                            child_fixed0, child_fixed1)
            if vals is None:
                continue
            if incumbent is not None and bound >= incumbent_obj - 1e-12:
                harvest(vals, child_fixed1)
                continue
            harvest(vals, child_fixed1)
            heapq.heappush(heap, _Node(bound, next(counter),
                                       child_fixed0, child_fixed1, vals))

    if incumbent is None:
        raise InfeasibleError(
            f"no decomposition fits every duration inside "
            f"[{opts.eps_l}, {eps_u}]; widen the window")
    clipped = {j: min(max(v, opts.eps_l), eps_u) for j, v in incumbent.items()}
    return _extract(M.n, clipped)


def truncate(d: Decomposition, J: HollowSymmetric, eps: float):
    """Drop evolution steps of duration <= eps.

    Returns (kept decomposition, analytic error bound, exact error or None).
    The exact diagonal-phase error is enumerated only for n <= 16.
    """
    if d.n != J.n:
        raise DimensionError(f"size mismatch: {d.n} vs {J.n}")
    kept = tuple(t for t in d.terms if t[1] > eps)
    dropped = tuple(t for t in d.terms if t[1] <= eps)
    dropped_time = sum(lam for _, lam in dropped)
    bound = 0.25 * 2.0 * float(np.sum(np.abs(J.upper))) * dropped_time

    exact = None
    if d.n <= EXACT_TRUNCATION_CAP:
        if not dropped:
            exact = 0.0
        else:
            delta = HollowSymmetric.zeros(d.n)
            for index, lam in dropped:
                delta = delta + outer_product(Encoding(d.n, index)) * lam
            phase_coupling = HollowSymmetric(d.n, delta.upper * J.upper)
            from .circuit import gzz_phases
            phases = gzz_phases(phase_coupling).phases
            # |e^{i a} - e^{i b}| = 2 |sin((a-b)/2)|: half the phase gap
            exact = float(np.max(np.abs(np.sin(0.5 * phases))))
    return Decomposition(d.n, kept), float(bound), exact
