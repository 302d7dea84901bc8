"""Random-instance scaling studies.

Each benchmark draws binary coupling targets (upper-triangular entries
uniform over {0,1}), synthesizes them for a trap preset, and reports
realization time plus encoding cost per sample.  Samples are independent
solves and run on a process pool; rows come back ordered by (n, sample)
regardless of worker scheduling.  Error bars are the min/max deviation
from the per-n mean.
"""

import csv
import io
import math
import os
from concurrent.futures import ProcessPoolExecutor

import numpy as np

from .cliffordpass import compile_cx_layer
from .hollow import HollowSymmetric
from .qftpass import build_Aj
from .solver import SolveOptions, hadamard_quotient, solve_lp, solve_mip, truncate
from .trapmodel import TrapParams, coupling_matrix

GZZ_MODES = ("lp", "mip", "naive")


def worker_count(tasks: int) -> int:
    """Pool width: min(cpu count, GZZ_FORGE_THREADS, task count)."""
    cap = os.cpu_count() or 1
    env = os.environ.get("GZZ_FORGE_THREADS")
    if env:
        try:
            cap = min(cap, int(env))
        except ValueError:
            raise ValueError(f"GZZ_FORGE_THREADS must be an integer, got {env!r}")
    return max(1, min(cap, tasks))


def random_binary_coupling(n: int, rng) -> HollowSymmetric:
    """Uniform {0,1} upper triangle, redrawn if identically zero."""
    m = n * (n - 1) // 2
    while True:
        upper = rng.integers(0, 2, size=m).astype(float)
        if upper.any():
            return HollowSymmetric(n, upper)


def _preset_coupling(params: TrapParams, n: int) -> HollowSymmetric:
    if params.N != n:
        params = TrapParams(N=n, mass=params.mass, charge=params.charge,
                            omega_z=params.omega_z, B1=params.B1,
                            mu=params.mu, mF=params.mF[:1] * n,
                            rabi=params.rabi)
    return coupling_matrix(params)


def _run_pool(worker, tasks):
    if not tasks:
        return []
    width = worker_count(len(tasks))
    if width == 1:
        return [worker(t) for t in tasks]
    with ProcessPoolExecutor(max_workers=width) as pool:
        return list(pool.map(worker, tasks))


def _gzz_sample(task):
    n, idx, seed, mode, params_json = task
    rng = np.random.default_rng([seed, n, idx])
    A = random_binary_coupling(n, rng)
    if mode == "naive":
        # one ZZ pulse per set entry: angle A_ij at rate J_ij
        J = _preset_coupling(TrapParams.from_json(params_json), n)
        nz = A.upper != 0
        total = float(np.sum(A.upper[nz] / J.upper[nz]))
        cost = int(np.sum(A.upper))
    else:
        J = _preset_coupling(TrapParams.from_json(params_json), n)
        M = hadamard_quotient(A, J)
        solve = solve_lp if mode == "lp" else solve_mip
        d = solve(M, SolveOptions(eps_u=1.5 * M.max_abs() if mode == "mip" else None))
        total = d.total_time
        cost = d.encoding_cost
    return {"n": n, "sample": idx, "mode": mode,
            "total_time": total, "encoding_cost": cost}


def bench_gzz(n_range, samples: int, mode: str, params: TrapParams,
              seed: int = 0) -> list:
    if mode not in GZZ_MODES:
        raise ValueError(f"mode must be one of {GZZ_MODES}, got {mode!r}")
    pj = params.to_json()
    tasks = [(n, i, seed, mode, pj) for n in n_range for i in range(samples)]
    return _run_pool(_gzz_sample, tasks)


def _truncation_sample(task):
    n, idx, seed, eps_l, params_json = task
    rng = np.random.default_rng([seed, n, idx])
    A = random_binary_coupling(n, rng)
    J = _preset_coupling(TrapParams.from_json(params_json), n)
    d = solve_lp(hadamard_quotient(A, J))
    kept, bound, exact = truncate(d, J, eps_l)
    return {"n": n, "sample": idx, "bound": bound,
            "exact": exact if exact is not None else "",
            "dropped": d.encoding_cost - kept.encoding_cost}


def bench_truncation(n_range, eps_l: float, params: TrapParams,
                     samples: int = 20, seed: int = 0) -> list:
    pj = params.to_json()
    tasks = [(n, i, seed, eps_l, pj) for n in n_range for i in range(samples)]
    return _run_pool(_truncation_sample, tasks)


def _dircx_sample(task):
    n, idx, seed = task
    rng = np.random.default_rng([seed, n, idx])
    B = np.eye(n, dtype=np.uint8)
    while True:
        bits = rng.integers(0, 2, size=n * (n - 1) // 2)
        if bits.any():
            break
    B[np.tril_indices(n, -1)] = bits
    _, report = compile_cx_layer(B, with_report=True)
    return {"n": n, "sample": idx, "encoding_cost": report["encoding_cost"],
            "baseline_cost": report["baseline_cost"],
            "gzz": report["gzz"], "cz": report["cz"]}


def bench_dircx(n_range, samples: int, seed: int = 0) -> list:
    tasks = [(n, i, seed) for n in n_range for i in range(samples)]
    return _run_pool(_dircx_sample, tasks)


def bench_qft(n_range, params: TrapParams) -> list:
    """LP vs sequential realization of the largest grouped rotation block.

    The naive column realizes each controlled phase as its own ZZ pulse:
    angle a needs time a/(4 J_ij), and the block has 2(n-2) entries.
    """
    rows = []
    for n in n_range:
        if n < 3:
            raise ValueError("grouped-rotation bench needs n >= 3")
        J = _preset_coupling(params, n)
        A1 = build_Aj(n, 1)
        M = hadamard_quotient(HollowSymmetric(n, A1.upper * 0.25), J)
        naive_total = float(np.sum(M.upper))
        naive_cost = int(np.count_nonzero(A1.upper))
        d = solve_lp(M)
        rows.append({"n": n, "mode": "naive", "total_time": naive_total,
                     "encoding_cost": naive_cost})
        rows.append({"n": n, "mode": "lp", "total_time": d.total_time,
                     "encoding_cost": d.encoding_cost})
    return rows


def summarize(rows, metrics) -> list:
    """Per-n mean and min/max deviation from the mean for each metric."""
    out = []
    for n in sorted({r["n"] for r in rows}):
        vals = [r for r in rows if r["n"] == n]
        agg = {"n": n, "samples": len(vals)}
        for key in metrics:
            data = np.array([float(v[key]) for v in vals])
            mean = float(np.mean(data))
            agg[f"{key}_mean"] = mean
            agg[f"{key}_err_lo"] = mean - float(np.min(data))
            agg[f"{key}_err_hi"] = float(np.max(data)) - mean
        out.append(agg)
    return out


def rows_to_csv(rows, fieldnames=None) -> str:
    if not rows:
        return ""
    fieldnames = fieldnames or list(rows[0])
    buf = io.StringIO()
    w = csv.DictWriter(buf, fieldnames=fieldnames)
    w.writeheader()
    w.writerows(rows)
    return buf.getvalue()


def write_svg_chart(summary, metric: str, path: str, *, title: str = "",
                    log_y: bool = False) -> None:
    """Static line chart with error bars from a summarize() table."""
    try:
        import matplotlib
    except ImportError:
        raise RuntimeError("SVG output needs matplotlib; pip install matplotlib")
    matplotlib.use("svg")
    import matplotlib.pyplot as plt

    ns = [row["n"] for row in summary]
    mean = [row[f"{metric}_mean"] for row in summary]
    lo = [row[f"{metric}_err_lo"] for row in summary]
    hi = [row[f"{metric}_err_hi"] for row in summary]
    fig, ax = plt.subplots(figsize=(5, 3.4))
    ax.errorbar(ns, mean, yerr=[lo, hi], marker="o", capsize=3)
    ax.set_xlabel("n")
    ax.set_ylabel(metric)
    if log_y and all(v > 0 for v in mean):
        ax.set_yscale("log")
    if title:
        ax.set_title(title)
    fig.tight_layout()
    fig.savefig(path, format="svg")
    plt.close(fig)
