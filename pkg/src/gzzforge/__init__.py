"""gzzforge: compile and schedule global ZZ entangling layers.

The package decomposes arbitrary pairwise ZZ coupling targets into
time-optimal sequences of fixed-Ising evolutions interleaved with X-gate
layers, and compiles Clifford layers, the QFT, Givens-rotation layers and
general diagonal unitaries down to those multi-qubit GZZ primitives.
Everything is verifiable at desk scale through brute-force simulators.
"""

from .chempass import (
    dynamics_census,
    dynamics_circuit,
    givens_compile,
    givens_layer_compile,
    givens_reference,
    neighbor_pairs,
)
from .circuit import (
    Angle,
    Circuit,
    DiagonalPhases,
    Gate,
    dump_circuit,
    equal_up_to_global_phase,
    evolve,
    gcrz_decompose,
    gcx,
    gzz,
    gzz_phases,
    load_circuit,
    parse_circuit,
    simulate_dense,
    simulate_diagonal,
)
from .cliffordpass import (
    BruhatLayers,
    clifford_layer_counts,
    compile_bruhat,
    compile_cx_layer,
    compile_cz_layer,
    fully_directed_cost,
)
from .diagpass import (
    PhasePolynomial,
    compile_diagonal,
    order_layers,
    parallelize_supports,
    phase_poly_from_table,
    place_hadamards,
    term_circuit,
)
from .errors import (
    ConvergenceError,
    DimensionError,
    GzzForgeError,
    InfeasibleError,
    ParseError,
    SimulationError,
)
from .frame import (
    Encoding,
    frame_bound_check,
    frame_columns,
    gram_entry,
    outer_product,
    sign_matrix,
)
from .hollow import HollowSymmetric, pair_index
from .qftpass import build_Aj, qft_census, qft_compile, qft_reference
from .schedule import (
    Schedule,
    emit_gzz_circuit,
    order_encodings,
    schedule_for_order,
)
from .solver import (
    Decomposition,
    SolveOptions,
    hadamard_quotient,
    solve_lp,
    solve_mip,
    truncate,
)
from .trapmodel import (
    TrapParams,
    coupling_matrix,
    equilibrium_positions,
    transition_frequency,
)
from .walsh import fwht, ifwht

__version__ = "0.1.0"

__all__ = [
    "Angle",
    "BruhatLayers",
    "Circuit",
    "ConvergenceError",
    "Decomposition",
    "DiagonalPhases",
    "DimensionError",
    "Encoding",
    "Gate",
    "GzzForgeError",
    "HollowSymmetric",
    "InfeasibleError",
    "ParseError",
    "PhasePolynomial",
    "Schedule",
    "SimulationError",
    "SolveOptions",
    "TrapParams",
    "build_Aj",
    "clifford_layer_counts",
    "compile_bruhat",
    "compile_cx_layer",
    "compile_cz_layer",
    "compile_diagonal",
    "coupling_matrix",
    "dump_circuit",
    "dynamics_census",
    "dynamics_circuit",
    "emit_gzz_circuit",
    "equal_up_to_global_phase",
    "equilibrium_positions",
    "evolve",
    "frame_bound_check",
    "frame_columns",
    "fully_directed_cost",
    "fwht",
    "gcrz_decompose",
    "gcx",
    "givens_compile",
    "givens_layer_compile",
    "givens_reference",
    "gram_entry",
    "gzz",
    "gzz_phases",
    "hadamard_quotient",
    "ifwht",
    "load_circuit",
    "neighbor_pairs",
    "order_encodings",
    "order_layers",
    "outer_product",
    "pair_index",
    "parallelize_supports",
    "parse_circuit",
    "phase_poly_from_table",
    "place_hadamards",
    "qft_census",
    "qft_compile",
    "qft_reference",
    "schedule_for_order",
    "sign_matrix",
    "simulate_dense",
    "simulate_diagonal",
    "solve_lp",
    "solve_mip",
    "term_circuit",
    "transition_frequency",
    "truncate",
]
