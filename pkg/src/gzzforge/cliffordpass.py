"""CX and CZ layer compilation onto all-to-all GZZ entanglers.

A layer of CZ gates is one GZZ plus local S powers.  A layer of CX
fan-outs is rewritten as interleaved Hadamard / CZ-fan-out columns;
two table sweeps then cancel or shift the Hadamards and pool adjacent
fan-outs into few wide GZZ gates.  Column tables read left to right in
diagram order, which is *operator* order: the leftmost column is the
last one applied.  Emission into a time-ordered circuit reverses them.
"""

import math
from dataclasses import dataclass

import numpy as np

from .circuit import Circuit, cz, gzz, h, phase, s, sdg, x, z
from .errors import DimensionError
from .hollow import HollowSymmetric


def _as_binary_matrix(B) -> np.ndarray:
    mat = np.asarray(B)
    if mat.ndim != 2 or mat.shape[0] != mat.shape[1]:
        raise DimensionError(f"expected a square matrix, got shape {mat.shape}")
    if not np.isin(mat, (0, 1)).all():
        raise DimensionError("matrix entries must be 0 or 1")
    return mat.astype(np.int64)


# ---------------------------------------------------------------------------
# CZ layers

def compile_cz_layer(A: HollowSymmetric) -> Circuit:
    """Compile a layer of CZ gates (edges of the 0/1 matrix A).

    prod_{i<j} CZ_ij^{A_ij} equals e^{-i pi E/4} GZZ(pi A/4) prod_i
    S_i^{deg(i)} with E the edge count and deg the vertex degrees, so a
    nonzero layer always costs exactly one GZZ.
    """
    if not np.isin(A.upper, (0.0, 1.0)).all():
        raise DimensionError("CZ layer coupling must be a 0/1 matrix")
    edges = int(round(float(A.upper.sum())))
    if edges == 0:
        return Circuit(A.n)
    deg = A.to_dense().sum(axis=1).astype(np.int64)
    gates = [phase(-math.pi * edges / 4), gzz(A * (math.pi / 4))]
    for q in range(A.n):
        k = int(deg[q]) % 4
        if k == 1:
            gates.append(s(q))
        elif k == 2:
            gates.append(z(q))
        elif k == 3:
            gates.append(sdg(q))
    return Circuit(A.n, gates)


def graph_state_circuit(A: HollowSymmetric) -> Circuit:
    """Preparation circuit for the graph state of the 0/1 adjacency A."""
    layer = compile_cz_layer(A)
    return Circuit(A.n, tuple(h(q) for q in range(A.n)) + layer.gates)


# ---------------------------------------------------------------------------
# CX layer tables

@dataclass(frozen=True)
class CZTables:
    """Interleaved column tables for a CX fan-out layer.

    The diagram reads H column 0, CZ column 0, H column 1, ..., CZ
    column k-1, H column k.  Row q of a CZ column marks qubit q in that
    fan-out (first set row is the control); row q of an H column marks
    an H gate.  A fan-out with no targets carries no gate and its
    column stays all zero.
    """

    n: int
    t_cz: np.ndarray
    t_h: np.ndarray

    def __post_init__(self):
        tcz = np.asarray(self.t_cz, dtype=bool)
        th = np.asarray(self.t_h, dtype=bool)
        if tcz.ndim != 2 or th.ndim != 2:
            raise DimensionError("tables must be two-dimensional")
        if tcz.shape[0] != self.n or th.shape[0] != self.n:
            raise DimensionError(
                f"tables need {self.n} rows, got {tcz.shape[0]} and {th.shape[0]}"
            )
        k = tcz.shape[1]
        want = k + 1 if k else 0
        if th.shape[1] != want:
            raise DimensionError(
                f"H table needs {want} columns for {k} fan-out columns, "
                f"got {th.shape[1]}"
            )
        object.__setattr__(self, "t_cz", tcz)
        object.__setattr__(self, "t_h", th)

    @property
    def k(self) -> int:
        return self.t_cz.shape[1]

    def cz_column(self, j: int) -> set:
        return set(map(int, np.flatnonzero(self.t_cz[:, j])))

    def h_column(self, j: int) -> set:
        return set(map(int, np.flatnonzero(self.t_h[:, j])))

    def __eq__(self, other):
        if not isinstance(other, CZTables):
            return NotImplemented
        return (
            self.n == other.n
            and np.array_equal(self.t_cz, other.t_cz)
            and np.array_equal(self.t_h, other.t_h)
        )


def cx_layer_to_tables(B) -> CZTables:
    """Canonical tables for the CX layer of a unit lower-triangular B.

    Column j holds the fan-out with control j and targets the set rows
    of B below the diagonal; every qubit except the first starts with
    an H pair (one in column 0, one in its own column).
    """
    mat = _as_binary_matrix(B)
    n = mat.shape[0]
    if not np.diag(mat).all():
        raise DimensionError("CX layer matrix must have a unit diagonal")
    if np.triu(mat, 1).any():
        raise DimensionError(
            "CX layer matrix must be lower triangular "
            "(reverse the qubit order for upper-triangular input)"
        )
    strict = np.tril(mat, -1)
    if n == 1 or not strict.any():
        return CZTables(n, np.zeros((n, 0), bool), np.zeros((n, 0), bool))
    k = n - 1
    tcz = np.zeros((n, k), bool)
    for j in range(k):
        targets = np.flatnonzero(strict[:, j])
        if targets.size:
            tcz[j, j] = True
            tcz[targets, j] = True
    th = np.zeros((n, k + 1), bool)
    th[1:, 0] = True
    for q in range(1, n):
        th[q, q] = True
    return CZTables(n, tcz, th)


def tables_to_circuit(t: CZTables) -> Circuit:
    """Uncompiled H / CZ realization of the tables, gates in time order."""
    if t.k == 0:
        return Circuit(t.n)
    gates = []

    def emit_h(col):
        gates.extend(h(q) for q in sorted(t.h_column(col)))

    emit_h(t.k)
    for j in range(t.k - 1, -1, -1):
        sup = sorted(t.cz_column(j))
        if len(sup) >= 2:
            gates.extend(cz(sup[0], q) for q in sup[1:])
        emit_h(j)
    return Circuit(t.n, gates)


def baseline_cost(t: CZTables) -> int:
    """Encoding cost of the tables as one GZZ per fan-out column."""
    total = 0
    for j in range(t.k):
        size = int(t.t_cz[:, j].sum())
        total += size * (size - 1) // 2
    return total


def move_hadamards(t: CZTables) -> CZTables:
    """Cancel or shift the per-qubit H pairs (first table sweep).

    Row sweep over qubits 1..n-1: when no fan-out left of a qubit's own
    column targets it, its H pair cancels outright; when the last such
    fan-out ends at column i-1 the right H stays put (or parks in the
    final column if nothing needs it on the right); otherwise it moves
    left, next to the blocking fan-out.
    """
    if t.k == 0:
        return t
    tcz = t.t_cz
    th = t.t_h.copy()
    n = t.n
    h_max = 0
    for i in range(1, n):
        th[i, i] = False
        left = np.flatnonzero(tcz[i, :i])
        if left.size == 0:
            th[i, 0] = False
        else:
            c = int(left[-1]) + 1
            if c == i:
                if not tcz[i, i:].any():
                    th[i, n - 1] = True
                else:
                    th[i, i] = True
            else:
                h_max = max(h_max, c)
                th[i, h_max] = True
    return CZTables(n, tcz.copy(), th)


# ---------------------------------------------------------------------------
# fan-out grouping (second table sweep)

@dataclass(frozen=True)
class LayerGroup:
    """One diagram region: an H layer, then standalone CZ gates and at
    most one pooled CZ-type edge bag to its right."""

    hadamards: tuple
    cz_pairs: tuple
    fan_edges: frozenset

    def fan_support(self) -> set:
        return {q for e in self.fan_edges for q in e}


def _column_edges(col: set) -> set:
    control = min(col)
    return {(control, q) for q in col if q != control}


def move_cz(t: CZTables) -> tuple:
    """Pool fan-out columns into few wide gates (second table sweep).

    Expects tables already swept by move_hadamards.  Columns are walked
    left to right.  A column with no H directly to its left slides left
    and pools with the previous column's gate (stopping early only at
    an H layer acting on it).  A blocked column whose right H layer is
    a single gate on one of its targets splits: that target comes off
    as a bare two-qubit CZ and the remainder moves right, seeding the
    pool of the next region.  Returns LayerGroups in diagram order.
    """
    if t.k == 0:
        return ()
    # mutable region state: [h set, cz list, pooled edge set]
    layers = [[t.h_column(0), [], set()]]
    last_rest = 0
    prev_split = False
    for j in range(t.k):
        col = t.cz_column(j)
        right_h = t.h_column(j + 1)
        placed_pending = False
        if len(col) >= 2:
            own = len(layers) - 1
            # the column's own left slot; an empty slot never blocks
            blocked = (not prev_split) and bool(t.h_column(j) & col)
            if blocked:
                control = min(col)
                single = len(right_h) == 1 and min(right_h) in col
                if len(col) == 2:
                    layers[own][1].append((control, max(col)))
                    last_rest = own
                elif single and min(right_h) != control:
                    hq = min(right_h)
                    layers[own][1].append((control, hq))
                    layers.append([set(right_h), [], _column_edges(col - {hq})])
                    last_rest = len(layers) - 1
                    placed_pending = True
                else:
                    layers[own][2] ^= _column_edges(col)
                    last_rest = own
            else:
                idx = len(layers) - 1
                while idx > last_rest and not (layers[idx][0] & col):
                    idx -= 1
                layers[idx][2] ^= _column_edges(col)
                last_rest = idx
        prev_split = placed_pending
        if not placed_pending and right_h:
            layers.append([set(right_h), [], set()])
    groups = []
    for h_set, czs, fan in layers:
        if h_set or czs or fan:
            groups.append(
                LayerGroup(tuple(sorted(h_set)), tuple(czs), frozenset(fan))
            )
    return tuple(groups)


def grouping_cost(groups) -> dict:
    """Gate census and encoding cost of a move_cz grouping."""
    enc = 0
    cz_count = 0
    gzz_count = 0
    for grp in groups:
        cz_count += len(grp.cz_pairs)
        enc += len(grp.cz_pairs)
        if len(grp.fan_edges) == 1:
            cz_count += 1
            enc += 1
        elif grp.fan_edges:
            gzz_count += 1
            size = len(grp.fan_support())
            enc += size * (size - 1) // 2
    return {"cz": cz_count, "gzz": gzz_count, "encoding_cost": enc}


def grouping_to_circuit(groups, n: int) -> Circuit:
    """Emit a grouping as a time-ordered circuit (regions reversed)."""
    gates = []
    for grp in reversed(groups):
        if len(grp.fan_edges) == 1:
            (a, b), = grp.fan_edges
            gates.append(cz(a, b))
        elif grp.fan_edges:
            adj = HollowSymmetric.from_pairs(n, {e: 1.0 for e in grp.fan_edges})
            gates.extend(compile_cz_layer(adj).gates)
        gates.extend(cz(a, b) for a, b in grp.cz_pairs)
        gates.extend(h(q) for q in grp.hadamards)
    return Circuit(n, gates)


def _relabel_groups(groups, n: int):
    """Map qubit q -> n-1-q in every group (for reversed-order input)."""

    def flip_pair(a, b):
        return tuple(sorted((n - 1 - a, n - 1 - b)))

    out = []
    for grp in groups:
        out.append(
            LayerGroup(
                tuple(sorted(n - 1 - q for q in grp.hadamards)),
                tuple(flip_pair(a, b) for a, b in grp.cz_pairs),
                frozenset(flip_pair(a, b) for a, b in grp.fan_edges),
            )
        )
    return tuple(out)


def compile_cx_layer(B, *, with_report: bool = False):
    """Full pipeline for one CX layer: tables, both sweeps, emission.

    Accepts a unit lower-triangular 0/1 matrix; a unit upper-triangular
    one is compiled in reversed qubit order and relabeled back.
    """
    mat = _as_binary_matrix(B)
    n = mat.shape[0]
    if not np.diag(mat).all():
        raise DimensionError("CX layer matrix must have a unit diagonal")
    lower = np.tril(mat, -1)
    upper = np.triu(mat, 1)
    if lower.any() and upper.any():
        raise DimensionError("CX layer matrix must be triangular")
    reversed_order = upper.any()
    work = mat[::-1, ::-1] if reversed_order else mat
    tables = cx_layer_to_tables(work)
    groups = move_cz(move_hadamards(tables))
    if reversed_order:
        groups = _relabel_groups(groups, n)
    circ = grouping_to_circuit(groups, n)
    if not with_report:
        return circ
    report = grouping_cost(groups)
    report["baseline_cost"] = baseline_cost(tables)
    return circ, report


# ---------------------------------------------------------------------------
# closed-form counts

def fully_directed_cost(n: int) -> tuple:
    """(encoding_cost, cz_count, gzz_count) for the all-ones lower
    triangular CX layer under the column-splitting scheme."""
    if n < 1:
        raise DimensionError(f"need n >= 1, got {n}")
    if n == 1:
        return (0, 0, 0)
    cz_count = (n - 1 + 1) // 2
    gzz_count = (n - 1) // 2
    enc = cz_count
    for i in range(gzz_count):
        m = n - 2 * i
        enc += m * (m - 1) // 2
    return (enc, cz_count, gzz_count)


def clifford_layer_counts(n: int, parity=None) -> tuple:
    """(gzz_total, cz_total) for a compiled nine-layer normal form
    -X-Z-CX-CZ-S-H-CX-CZ-S- with fully directed CX layers and nonzero
    CZ layers.  `parity` ("odd"/"even" or 1/0), when given, must match n."""
    if n < 2:
        raise DimensionError(f"need n >= 2, got {n}")
    if parity is not None:
        want = {"odd": 1, "even": 0, 1: 1, 0: 0}.get(parity)
        if want is None:
            raise ValueError(f"parity must be 'odd' or 'even', got {parity!r}")
        if n % 2 != want:
            raise ValueError(f"n={n} does not have parity {parity!r}")
    gzz_total = 2 * ((n - 1) // 2) + 2
    cz_total = 2 * (n // 2)
    return (gzz_total, cz_total)


# ---------------------------------------------------------------------------
# nine-layer normal form records

def _as_mask(bits, n: int, name: str) -> tuple:
    seq = tuple(int(b) for b in bits)
    if len(seq) != n or any(b not in (0, 1) for b in seq):
        raise DimensionError(f"{name} layer must be {n} bits of 0/1")
    return seq


@dataclass(frozen=True)
class BruhatLayers:
    """Nine-layer Clifford record, time order: X, Z, CX, CZ, S, H, CX,
    CZ, S.  Pauli, S, and H layers are 0/1 masks; CX layers are unit
    triangular 0/1 matrices; CZ layers are 0/1 couplings."""

    n: int
    x: tuple
    z: tuple
    cx1: np.ndarray
    cz1: HollowSymmetric
    s1: tuple
    h: tuple
    cx2: np.ndarray
    cz2: HollowSymmetric
    s2: tuple

    def __post_init__(self):
        n = self.n
        for name in ("x", "z", "s1", "h", "s2"):
            object.__setattr__(self, name, _as_mask(getattr(self, name), n, name))
        for name in ("cx1", "cx2"):
            mat = _as_binary_matrix(getattr(self, name))
            if mat.shape != (n, n):
                raise DimensionError(f"{name} must be {n}x{n}")
            object.__setattr__(self, name, mat)
        for name in ("cz1", "cz2"):
            a = getattr(self, name)
            if a.n != n:
                raise DimensionError(f"{name} is on {a.n} qubits, record has {n}")

    def to_json(self) -> dict:
        return {
            "n": self.n,
            "x": list(self.x),
            "z": list(self.z),
            "cx1": self.cx1.tolist(),
            "cz1": self.cz1.to_json(),
            "s1": list(self.s1),
            "h": list(self.h),
            "cx2": self.cx2.tolist(),
            "cz2": self.cz2.to_json(),
            "s2": list(self.s2),
        }

    @classmethod
    def from_json(cls, obj: dict) -> "BruhatLayers":
        return cls(
            n=int(obj["n"]),
            x=obj["x"],
            z=obj["z"],
            cx1=np.asarray(obj["cx1"]),
            cz1=HollowSymmetric.from_json(obj["cz1"]),
            s1=obj["s1"],
            h=obj["h"],
            cx2=np.asarray(obj["cx2"]),
            cz2=HollowSymmetric.from_json(obj["cz2"]),
            s2=obj["s2"],
        )


def compile_bruhat(rec: BruhatLayers, *, with_report: bool = False):
    """Concatenate the compiled pieces of a nine-layer record."""
    gates = []
    gates.extend(x(q) for q in range(rec.n) if rec.x[q])
    gates.extend(z(q) for q in range(rec.n) if rec.z[q])
    cx_a, rep_a = compile_cx_layer(rec.cx1, with_report=True)
    gates.extend(cx_a.gates)
    gates.extend(compile_cz_layer(rec.cz1).gates)
    gates.extend(s(q) for q in range(rec.n) if rec.s1[q])
    gates.extend(h(q) for q in range(rec.n) if rec.h[q])
    cx_b, rep_b = compile_cx_layer(rec.cx2, with_report=True)
    gates.extend(cx_b.gates)
    gates.extend(compile_cz_layer(rec.cz2).gates)
    gates.extend(s(q) for q in range(rec.n) if rec.s2[q])
    circ = Circuit(rec.n, gates)
    if not with_report:
        return circ
    gzz_total = rep_a["gzz"] + rep_b["gzz"]
    enc_total = rep_a["encoding_cost"] + rep_b["encoding_cost"]
    for layer in (rec.cz1, rec.cz2):
        if layer.upper.any():
            gzz_total += 1
            size = int((layer.to_dense().sum(axis=1) > 0).sum())
            enc_total += size * (size - 1) // 2
    report = {
        "gzz": gzz_total,
        "cz": rep_a["cz"] + rep_b["cz"],
        "encoding_cost": enc_total,
    }
    return circ, report
