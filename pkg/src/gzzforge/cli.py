"""Command-line front end.

Subcommands: trap (preset inspection), synth (LP/MIP pulse synthesis),
schedule (X-layer circuit emission), compile (the circuit passes),
verify (simulator-backed equivalence checks) and bench (CSV scaling
studies).  Exit codes: 0 ok, 1 verification failure, 2 input error,
3 infeasible.
"""

import argparse
import json
import math
import sys

import numpy as np

from . import bench as bench_mod
from .chempass import dynamics_census, dynamics_circuit, givens_compile, \
    givens_layer_compile
from .circuit import Circuit, DiagonalPhases, dump_circuit, \
    equal_up_to_global_phase, gcx, gzz_phases, load_circuit, simulate_dense, \
    simulate_diagonal
from .cliffordpass import BruhatLayers, compile_bruhat, compile_cx_layer, \
    compile_cz_layer
from .diagpass import compile_diagonal, phase_poly_from_table
from .errors import GzzForgeError, InfeasibleError
from .hollow import HollowSymmetric
from .qftpass import qft_census, qft_compile, qft_reference
from .schedule import emit_gzz_circuit, order_encodings
from .solver import Decomposition, SolveOptions, hadamard_quotient, \
    solve_lp, solve_mip, truncate
from .trapmodel import TrapParams, coupling_matrix, equilibrium_positions

EXIT_OK = 0
EXIT_VERIFY = 1
EXIT_INPUT = 2
EXIT_INFEASIBLE = 3


def load_matrix(path: str) -> HollowSymmetric:
    """Hollow symmetric matrix from JSON: {"n", "upper"} or dense rows."""
    with open(path) as fp:
        obj = json.load(fp)
    if isinstance(obj, dict):
        return HollowSymmetric.from_json(obj)
    return HollowSymmetric.from_dense(np.asarray(obj, dtype=float))


def load_bit_matrix(path: str) -> np.ndarray:
    """0/1 matrix from JSON rows or '0110' text lines."""
    with open(path) as fp:
        text = fp.read()
    stripped = text.lstrip()
    if stripped.startswith("["):
        return np.asarray(json.loads(text), dtype=np.uint8)
    rows = [[int(ch) for ch in line.strip()]
            for line in text.splitlines() if line.strip()]
    return np.asarray(rows, dtype=np.uint8)


def parse_n_range(text: str) -> list:
    """Comma-separated sizes; 'a:b' spans are inclusive."""
    out = []
    for piece in text.split(","):
        piece = piece.strip()
        if ":" in piece:
            lo, hi = piece.split(":", 1)
            out.extend(range(int(lo), int(hi) + 1))
        else:
            out.append(int(piece))
    if not out or any(v < 1 for v in out):
        raise ValueError(f"bad size range {text!r}")
    return out


def trap_params(args, n: int | None = None) -> TrapParams:
    if getattr(args, "params", None):
        with open(args.params) as fp:
            return TrapParams.from_json(fp.read())
    if n is None:
        n = getattr(args, "ions", 10)
    return TrapParams.preset(args.preset, N=n)


def emit(text: str, out: str | None) -> None:
    if out:
        with open(out, "w") as fp:
            fp.write(text if text.endswith("\n") else text + "\n")
    else:
        print(text)


def circuit_report(c: Circuit) -> dict:
    names = sorted({g.name for g in c.gates})
    return {"qubits": c.n, "gates": len(c.gates),
            "counts": {name: c.count(name) for name in names}}


# ---------------------------------------------------------------------------
# subcommand handlers

def cmd_trap(args) -> int:
    p = trap_params(args)
    pos = equilibrium_positions(p)
    J = coupling_matrix(p)
    out = {
        "params": json.loads(p.to_json()),
        "length_scale_m": p.length_scale,
        "positions_m": pos.tolist(),
        "coupling_rad_per_s": J.to_json(),
    }
    emit(json.dumps(out, indent=2), args.out)
    return EXIT_OK


def cmd_synth(args) -> int:
    target = load_matrix(args.target)
    if args.coupling or args.params or args.preset_given:
        J = load_matrix(args.coupling) if args.coupling else \
            coupling_matrix(trap_params(args, n=target.n))
        M = hadamard_quotient(target, J)
    else:
        J = None
        M = target
    opts = SolveOptions(eps_l=args.eps_l, eps_u=args.eps_u, alpha=args.alpha,
                        mip_rel_gap=args.gap, node_limit=args.node_limit)
    d = solve_mip(M, opts) if args.mode == "mip" else solve_lp(M, opts)
    obj = json.loads(d.to_json())
    resid = (d.reconstruct() + M * -1.0).max_abs()
    obj["residual"] = resid
    if args.truncate is not None:
        if J is None:
            raise ValueError("--truncate needs a trap preset or --coupling")
        kept, bound, exact = truncate(d, J, args.truncate)
        obj["truncation"] = {"eps": args.truncate, "bound": bound,
                             "exact": exact,
                             "dropped": d.encoding_cost - kept.encoding_cost}
        obj["kept_terms"] = json.loads(kept.to_json())["terms"]
    emit(json.dumps(obj, indent=2), args.out)
    return EXIT_OK


def cmd_schedule(args) -> int:
    with open(args.decomposition) as fp:
        d = Decomposition.from_json(fp.read())
    J = load_matrix(args.coupling) if args.coupling else \
        coupling_matrix(trap_params(args, n=d.n))
    sched = order_encodings(d, args.heuristic)
    circ = emit_gzz_circuit(d, J, args.heuristic)
    report = {"x_gates": sched.x_gate_count, "layers": sched.layer_count,
              "total_time": d.total_time}
    if args.out:
        dump_circuit(circ, args.out)
        report["circuit"] = args.out
    print(json.dumps(report, indent=2))
    return EXIT_OK


def cmd_compile(args) -> int:
    if args.pass_name == "cx":
        B = load_bit_matrix(args.matrix)
        circ, report = compile_cx_layer(B, with_report=True)
    elif args.pass_name == "cz":
        A = load_matrix(args.coupling)
        circ = compile_cz_layer(A)
        report = {"gzz": circ.count("GZZ"),
                  "encoding_cost": circ.count("GZZ")}
    elif args.pass_name == "qft":
        circ = qft_compile(args.n, with_swaps=args.swaps,
                           keep_gcrz=args.keep_gcrz)
        report = {"census": qft_census(args.n)}
    elif args.pass_name == "givens":
        circ = givens_layer_compile(args.phi, args.n) if args.n else \
            givens_compile(args.phi)
        report = {}
    elif args.pass_name == "dynamics":
        with open(args.spec) as fp:
            spec = json.load(fp)
        A_list = [HollowSymmetric.from_json(a) for a in spec["couplings"]]
        circ = dynamics_circuit(spec["m"], A_list, spec["phis"],
                                spec["theta0"], spec["theta1"], spec["n"])
        report = {"census": dynamics_census(spec["m"], spec["n"])}
    elif args.pass_name == "diagonal":
        with open(args.table) as fp:
            table = np.asarray(json.load(fp), dtype=float)
        p = phase_poly_from_table(table)
        anc = "auto" if args.ancillas == "auto" else 0
        circ, report = compile_diagonal(p, allow_size2=args.allow_size2,
                                        ancillas=anc)
    else:
        with open(args.record) as fp:
            rec = BruhatLayers.from_json(json.load(fp))
        circ, report = compile_bruhat(rec, with_report=True)

    full = circuit_report(circ)
    full.update(report)
    if args.out:
        dump_circuit(circ, args.out)
        full["circuit"] = args.out
    print(json.dumps(full, indent=2))
    return EXIT_OK


def _verify_diagonal_table(circ: Circuit, table: np.ndarray, tol: float):
    """Diagonality plus phase match on the ancilla-zero block."""
    k = int(table.size).bit_length() - 1
    if 1 << k != table.size or circ.n < k:
        return False, "table size is not a power of two matching the circuit"
    U = simulate_dense(circ)
    off = float(np.max(np.abs(U - np.diag(np.diag(U)))))
    if off > tol:
        return False, f"not diagonal (off-diagonal mass {off:.3e})"
    diag = np.diag(U).reshape(1 << k, -1)[:, 0]
    got = DiagonalPhases(k, np.angle(diag))
    want = DiagonalPhases(k, 2.0 * math.pi * table)
    ok = got.agrees_with(want, tol)
    return ok, "phases agree" if ok else "diagonal phases disagree"


def cmd_verify(args) -> int:
    circ = load_circuit(args.circuit)
    tol = args.tol
    if args.gzz:
        A = load_matrix(args.gzz)
        want = gzz_phases(A)
        try:
            got = simulate_diagonal(circ)
            ok = got.agrees_with(want, tol)
        except GzzForgeError:
            U = simulate_dense(circ)
            V = np.diag(np.exp(1j * want.phases))
            ok = circ.n == A.n and equal_up_to_global_phase(U, V, tol)
        detail = f"gzz reference {args.gzz}"
    elif args.qft is not None:
        U = simulate_dense(circ)
        ok = circ.n == args.qft and \
            equal_up_to_global_phase(U, qft_reference(args.qft), tol)
        detail = f"qft n={args.qft}"
    elif args.gcx:
        B = load_bit_matrix(args.gcx)
        U = simulate_dense(circ)
        V = simulate_dense(Circuit(B.shape[0], (gcx(B),)))
        ok = circ.n == B.shape[0] and equal_up_to_global_phase(U, V, tol)
        detail = f"gcx reference {args.gcx}"
    else:
        with open(args.phases) as fp:
            table = np.asarray(json.load(fp), dtype=float)
        ok, note = _verify_diagonal_table(circ, table, tol)
        detail = f"phase table {args.phases}: {note}"
    print(f"{'PASS' if ok else 'FAIL'} {args.circuit} vs {detail}")
    return EXIT_OK if ok else EXIT_VERIFY


def cmd_bench(args) -> int:
    kind = args.bench_name
    ns = parse_n_range(args.n)
    if kind == "gzz":
        rows = bench_mod.bench_gzz(ns, args.samples, args.mode,
                                   trap_params(args), seed=args.seed)
        metrics = ("total_time", "encoding_cost")
    elif kind == "truncation":
        rows = bench_mod.bench_truncation(ns, args.eps_l, trap_params(args),
                                          samples=args.samples, seed=args.seed)
        metrics = ("bound",)
    elif kind == "dircx":
        rows = bench_mod.bench_dircx(ns, args.samples, seed=args.seed)
        metrics = ("encoding_cost", "baseline_cost")
    else:
        rows = bench_mod.bench_qft(ns, trap_params(args))
        metrics = ()
    emit(bench_mod.rows_to_csv(rows).rstrip("\n"), args.out)
    if metrics:
        summary = bench_mod.summarize(rows, metrics)
        if args.summary:
            emit(bench_mod.rows_to_csv(summary).rstrip("\n"), args.summary)
        if args.svg:
            metric = args.metric or metrics[0]
            if f"{metric}_mean" not in summary[0]:
                raise ValueError(f"unknown metric {metric!r} for bench {kind}")
            bench_mod.write_svg_chart(summary, metric, args.svg,
                                      title=f"bench {kind}",
                                      log_y=metric == "total_time")
    elif args.summary or args.svg:
        raise ValueError(f"bench {kind} has no aggregate summary")
    return EXIT_OK


# ---------------------------------------------------------------------------
# parser

def _add_trap_opts(p, with_ions: bool = True):
    p.add_argument("--preset", default="yb171-paper",
                   help="trap preset name (default yb171-paper)")
    if with_ions:
        p.add_argument("--ions", type=int, default=10,
                       help="ion count for the preset (default 10)")
    p.add_argument("--params", help="TrapParams JSON file overriding --preset")


def build_parser() -> argparse.ArgumentParser:
    top = argparse.ArgumentParser(
        prog="gzzforge",
        description="Global-ZZ pulse synthesis and circuit compilation.")
    sub = top.add_subparsers(dest="command", required=True)

    p = sub.add_parser("trap", help="inspect a trap preset")
    _add_trap_opts(p)
    p.add_argument("--out")
    p.set_defaults(func=cmd_trap)

    p = sub.add_parser("synth", help="decompose a coupling target into pulses")
    p.add_argument("target", help="hollow symmetric matrix JSON")
    _add_trap_opts(p, with_ions=False)
    p.add_argument("--coupling", help="hardware J matrix JSON "
                   "(otherwise derived from the preset when requested)")
    p.add_argument("--use-preset", dest="preset_given", action="store_true",
                   help="divide the target by the preset J before solving")
    p.add_argument("--mode", choices=("lp", "mip"), default="lp")
    p.add_argument("--eps-l", type=float, default=27e-6)
    p.add_argument("--eps-u", type=float, default=None)
    p.add_argument("--alpha", type=float, default=0.5)
    p.add_argument("--gap", type=float, default=0.6)
    p.add_argument("--node-limit", type=int, default=100_000)
    p.add_argument("--truncate", type=float, default=None,
                   help="drop pulses shorter than this after solving")
    p.add_argument("--out")
    p.set_defaults(func=cmd_synth)

    p = sub.add_parser("schedule", help="emit the X-layer pulse circuit")
    p.add_argument("decomposition", help="decomposition JSON from synth")
    _add_trap_opts(p, with_ions=False)
    p.add_argument("--coupling", help="hardware J matrix JSON")
    p.add_argument("--heuristic", choices=("nearest-neighbor", "nn-2opt"),
                   default="nn-2opt")
    p.add_argument("--out", help="circuit text file")
    p.set_defaults(func=cmd_schedule)

    p = sub.add_parser("compile", help="run a circuit pass")
    passes = p.add_subparsers(dest="pass_name", required=True)

    q = passes.add_parser("cx", help="directed CX layer")
    q.add_argument("--matrix", required=True,
                   help="unit lower-triangular 0/1 matrix (JSON or bit rows)")
    q.add_argument("--out")

    q = passes.add_parser("cz", help="CZ layer as one GZZ")
    q.add_argument("--coupling", required=True, help="0/1 hollow matrix JSON")
    q.add_argument("--out")

    q = passes.add_parser("qft", help="grouped-rotation QFT")
    q.add_argument("--n", type=int, required=True)
    q.add_argument("--swaps", action="store_true",
                   help="append the bit-reversal swap network")
    q.add_argument("--keep-gcrz", action="store_true",
                   help="keep symbolic GCRZ blocks instead of realizing them")
    q.add_argument("--out")

    q = passes.add_parser("givens", help="Givens rotation (pair or layer)")
    q.add_argument("--phi", type=float, required=True)
    q.add_argument("--n", type=int, default=0,
                   help="even width compiles a full neighbor layer")
    q.add_argument("--out")

    q = passes.add_parser("dynamics", help="alternating evolution sequence")
    q.add_argument("--spec", required=True,
                   help='JSON {"n","m","phis","theta0","theta1","couplings"}')
    q.add_argument("--out")

    q = passes.add_parser("diagonal", help="diagonal phase function")
    q.add_argument("--table", required=True,
                   help="JSON list of 2^k phase values (turns)")
    q.add_argument("--allow-size2", action="store_true",
                   help="route weight-2 terms through the layer pipeline")
    q.add_argument("--ancillas", choices=("auto", "0"), default="auto")
    q.add_argument("--out")

    q = passes.add_parser("clifford", help="Bruhat-form Clifford record")
    q.add_argument("--record", required=True, help="layer record JSON")
    q.add_argument("--out")

    p.set_defaults(func=cmd_compile)

    p = sub.add_parser("verify", help="check a circuit against a reference")
    p.add_argument("circuit", help="circuit text file")
    ref = p.add_mutually_exclusive_group(required=True)
    ref.add_argument("--gzz", help="coupling matrix JSON")
    ref.add_argument("--qft", type=int, help="qubit count")
    ref.add_argument("--gcx", help="0/1 matrix file")
    ref.add_argument("--phases", help="JSON phase table (turns)")
    p.add_argument("--tol", type=float, default=1e-9)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("bench", help="random-instance scaling studies")
    benches = p.add_subparsers(dest="bench_name", required=True)
    for name, extra in (("gzz", ("mode",)), ("truncation", ("eps_l",)),
                        ("dircx", ()), ("qft", ())):
        q = benches.add_parser(name)
        q.add_argument("--n", default="4:12",
                       help="sizes, e.g. 4:12 or 3,5,7 (default 4:12)")
        if name != "qft":
            q.add_argument("--samples", type=int, default=20)
            q.add_argument("--seed", type=int, default=0)
        if name != "dircx":
            _add_trap_opts(q, with_ions=False)
        if "mode" in extra:
            q.add_argument("--mode", choices=bench_mod.GZZ_MODES, default="lp")
        if "eps_l" in extra:
            q.add_argument("--eps-l", type=float, default=27e-6)
        q.add_argument("--out", help="per-sample CSV (default stdout)")
        q.add_argument("--summary", help="per-n aggregate CSV")
        q.add_argument("--svg", help="error-bar chart of --metric")
        q.add_argument("--metric", default=None)
    p.set_defaults(func=cmd_bench)
    return top


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except InfeasibleError as exc:
        print(f"error: infeasible: {exc}", file=sys.stderr)
        return EXIT_INFEASIBLE
    except (GzzForgeError, ValueError, OSError, KeyError,
            json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
