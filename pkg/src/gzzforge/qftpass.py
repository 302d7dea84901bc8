"""Quantum Fourier transform compilation onto CS + global controlled-RZ layers.

The target is the swapless QFT: output qubits come out in bit-reversed
order, which avoids a trailing layer of swaps on hardware where qubit
labels are just bookkeeping.  Every other column of the textbook ladder
is folded into a single global controlled-RZ gate whose coupling matrix
carries the remaining small-angle rotations for two adjacent controls
at once; those gates then decompose into one GZZ plus local RZ
corrections.

Angle bookkeeping: the A_j coupling matrices store twice the controlled
phase (the GCRZ convention used in circuit diagrams here), so the
emitted gate is GCRZ(A_j / 2).
"""

from __future__ import annotations

import math

import numpy as np

from .circuit import (
    Circuit,
    cs,
    cx,
    gcrz,
    gcrz_decompose,
    h,
)
from .errors import DimensionError
from .hollow import HollowSymmetric

DENSE_CAP = 10

TWO_PI = 2.0 * math.pi


def _bit_reverse(idx: int, n: int) -> int:
    out = 0
    for _ in range(n):
        out = (out << 1) | (idx & 1)
        idx >>= 1
    return out


def qft_reference(n: int) -> np.ndarray:
    """Dense swapless QFT matrix: DFT rows permuted by bit reversal.

    Column x holds the transform of |x>; row y of the plain DFT moves to
    row reverse(y), i.e. the output register reads back bit-reversed.
    """
    if not 1 <= n <= DENSE_CAP:
        raise DimensionError(f"qft_reference supports 1 <= n <= {DENSE_CAP}, got {n}")
    dim = 1 << n
    grid = np.arange(dim)
    mat = np.exp(2j * np.pi * np.outer(grid, grid) / dim) / math.sqrt(dim)
    rev = np.array([_bit_reverse(i, n) for i in range(dim)])
    return mat[rev]


def build_Aj(n: int, j: int) -> HollowSymmetric:
    """Coupling matrix for the j-th folded rotation block, 1-based j.

    The block acts on qubits j-1 .. n-1 of the full register (size
    n-j+1 here, indexed locally from 0).  Rows 0 and 1 carry the
    controlled phases owed to the not-yet-processed qubits: qubit 0
    owes 2pi/2^l to local qubit l, qubit 1 owes twice that, since it
    sits one ladder step later.
    """
    if not 1 <= j <= n - 2:
        raise DimensionError(f"block index must satisfy 1 <= j <= n-2, got j={j}, n={n}")
    size = n - j + 1
    entries = {}
    for col in range(2, size):
        entries[(0, col)] = TWO_PI * 2.0 ** (-col)
        entries[(1, col)] = TWO_PI * 2.0 ** (-(col - 1))
    return HollowSymmetric.from_pairs(size, entries)


def _embed(block: HollowSymmetric, n: int, offset: int) -> HollowSymmetric:
    entries = {}
    m = block.n
    for i in range(m):
        for jj in range(i + 1, m):
            v = block.entry(i, jj)
            if v != 0.0:
                entries[(i + offset, jj + offset)] = v
    return HollowSymmetric.from_pairs(n, entries)


def _swap_layer(n: int) -> list:
    gates = []
    for q in range(n // 2):
        p = n - 1 - q
        gates.extend([cx(q, p), cx(p, q), cx(q, p)])
    return gates


def qft_compile(n: int, *, with_swaps: bool = False, keep_gcrz: bool = False) -> Circuit:
    """QFT as H / CS columns plus one GCRZ block per processed qubit pair.

    Qubits are consumed two per round: H on the first, a CS tying it to
    the second, H on the second, then a single GCRZ holding every
    remaining small rotation both of them owe.  By default each GCRZ is
    decomposed into a global phase, one GZZ and local RZ corrections,
    with the corrections on the two finished qubits pushed to the end of
    the circuit and the rest pulled to the front (both moves only cross
    diagonal gates).  ``keep_gcrz`` leaves the symbolic GCRZ gates in
    place instead.

    ``with_swaps`` appends a reversal layer (three CX per pair) so the
    result is the standard-order QFT rather than the bit-reversed one.
    """
    if n < 1:
        raise DimensionError(f"need at least one qubit, got {n}")
    prologue = []
    main = []
    epilogue = []
    for k in range(0, n, 2):
        main.append(h(k))
        if k + 1 < n:
            main.append(cs(k, k + 1))
            main.append(h(k + 1))
        if k <= n - 3:
            coupling = _embed(build_Aj(n, k + 1), n, k) * 0.5
            if keep_gcrz:
                main.append(gcrz(coupling))
                continue
            for g in gcrz_decompose(coupling).gates:
                if g.name == "RZ":
                    if g.qubits[0] in (k, k + 1):
                        epilogue.append(g)
                    else:
                        prologue.append(g)
                else:
                    main.append(g)
    gates = prologue + main + epilogue
    if with_swaps:
        gates.extend(_swap_layer(n))
    return Circuit(n, tuple(gates))


def qft_census(n: int) -> dict:
    """Closed-form gate counts for the compiled QFT: H, CS, GCRZ blocks."""
    if n < 1:
        raise DimensionError(f"need at least one qubit, got {n}")
    return {"h": n, "cs": n // 2, "gcrz": (n - 1) // 2}
