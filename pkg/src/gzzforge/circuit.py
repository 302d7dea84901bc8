"""Gate IR, gate semantics, and brute-force verification oracles.

Circuits are ordered gate sequences in time order: gates[0] is applied
first. Qubits are 0-based internally and 1-based in the text format. Basis
states are read most-significant-bit first, so qubit 0 owns the top bit of
a basis index.

Gate conventions (x, y denote classical bits):

    RZ(a)|x>   = e^{i a x}|x>            (diagonal, not the half-angle form)
    ZZ(a)|xy>  = e^{i a (x XOR y)}|xy>
    CRZ(a)|xy> = e^{i a x y}|xy>,  CZ = CRZ(pi),  CS = CRZ(pi/2)
    S = RZ(pi/2)
    GZZ(A)     = e^{(i/2) Z^T A Z}: phase(x) = sum_{i<j} A_ij (-1)^{x_i+x_j}
    GCRZ(A)    = prod_{i<j} CRZ(A_ij)
    GCX(B)|x>  = |Bx> over F_2
    EVOLVE(J,t) = GZZ(t J)
    RX, RY use the standard half-angle convention e^{-i X a/2}, e^{-i Y a/2}

Two simulators serve as oracles: a diagonal-phase simulator that tracks
X conjugation as index relabeling (fast, diagonal circuits only) and a
dense unitary simulator capped at 10 qubits.
"""

from __future__ import annotations

import json
import math
import os
from dataclasses import dataclass, field

import numpy as np

from .errors import DimensionError, ParseError, SimulationError
from .hollow import HollowSymmetric, pairs

DENSE_QUBIT_CAP = 10
DIAGONAL_QUBIT_CAP = 20


@dataclass(frozen=True)
class Angle:
    """A rotation angle, kept exact in units of pi when possible.

    Clifford-adjacent angles (S powers, CZ layers) are multiples of pi and
    survive text round-trips bit-exactly as '<coef>pi'; everything else is
    a plain float in radians.
    """

    coef: float
    pi: bool = False

    @property
    def value(self) -> float:
        return self.coef * math.pi if self.pi else self.coef

    def text(self) -> str:
        return f"{self.coef!r}pi" if self.pi else f"{self.coef!r}"

    @classmethod
    def parse(cls, token: str) -> "Angle":
        if token.endswith("pi"):
            return cls(float(token[:-2]), True)
        return cls(float(token))

    @classmethod
    def of(cls, value) -> "Angle":
        return value if isinstance(value, Angle) else cls(float(value))


# gate name -> (has_angle, qubit arity); payload gates handled separately
_SIMPLE_GATES = {
    "H": (False, 1),
    "X": (False, 1),
    "Z": (False, 1),
    "S": (False, 1),
    "SDG": (False, 1),
    "SX": (False, 1),
    "SXDG": (False, 1),
    "RZ": (True, 1),
    "RX": (True, 1),
    "RY": (True, 1),
    "CX": (False, 2),
    "CZ": (False, 2),
    "CS": (False, 2),
    "CRZ": (True, 2),
    "ZZ": (True, 2),
    "PHASE": (True, 0),
}
_PAYLOAD_GATES = {"GZZ", "GCRZ", "GCX", "EVOLVE"}


@dataclass(frozen=True, eq=False)
class Gate:
    name: str
    qubits: tuple = ()
    angle: Angle | None = None
    coupling: HollowSymmetric | None = None
    binary: np.ndarray | None = None
    duration: float | None = None
    ref: str | None = None

    def __post_init__(self):
        if self.name in _SIMPLE_GATES:
            has_angle, arity = _SIMPLE_GATES[self.name]
            if len(self.qubits) != arity:
                raise DimensionError(
                    f"{self.name} takes {arity} qubit(s), got {self.qubits}"
                )
            if has_angle != (self.angle is not None):
                raise DimensionError(f"bad angle payload for {self.name}")
        elif self.name in _PAYLOAD_GATES:
            if self.name == "GCX":
                if self.binary is None:
                    raise DimensionError("GCX needs a binary matrix")
            elif self.coupling is None:
                raise DimensionError(f"{self.name} needs a coupling matrix")
            if self.name == "EVOLVE" and self.duration is None:
                raise DimensionError("EVOLVE needs a duration")
        else:
            raise DimensionError(f"unknown gate {self.name!r}")
        if len(set(self.qubits)) != len(self.qubits):
            raise DimensionError(f"repeated qubit in {self.name} {self.qubits}")

    def __eq__(self, other):
        if not isinstance(other, Gate):
            return NotImplemented
        return (
            self.name == other.name
            and self.qubits == other.qubits
            and self.angle == other.angle
            and self.coupling == other.coupling
            and (
                self.binary is None
                and other.binary is None
                or self.binary is not None
                and other.binary is not None
                and np.array_equal(self.binary, other.binary)
            )
            and self.duration == other.duration
        )

    def __repr__(self):
        parts = [self.name]
        if self.angle is not None:
            parts.append(self.angle.text())
        parts.extend(str(q + 1) for q in self.qubits)
        if self.coupling is not None:
            parts.append(f"<{self.coupling.n}q coupling>")
        if self.binary is not None:
            parts.append(f"<{self.binary.shape[0]}x{self.binary.shape[1]} bits>")
        if self.duration is not None:
            parts.append(f"t={self.duration!r}")
        return f"Gate({' '.join(parts)})"


# ---------------------------------------------------------------------------
# gate constructors

def h(q): return Gate("H", (q,))
def x(q): return Gate("X", (q,))
def z(q): return Gate("Z", (q,))
def s(q): return Gate("S", (q,))
def sdg(q): return Gate("SDG", (q,))
def sx(q): return Gate("SX", (q,))
def sxdg(q): return Gate("SXDG", (q,))
def rz(angle, q): return Gate("RZ", (q,), angle=Angle.of(angle))
def rx(angle, q): return Gate("RX", (q,), angle=Angle.of(angle))
def ry(angle, q): return Gate("RY", (q,), angle=Angle.of(angle))
def cx(control, target): return Gate("CX", (control, target))
def cz(i, j): return Gate("CZ", (i, j))
def cs(i, j): return Gate("CS", (i, j))
def crz(angle, i, j): return Gate("CRZ", (i, j), angle=Angle.of(angle))
def zz(angle, i, j): return Gate("ZZ", (i, j), angle=Angle.of(angle))
def phase(angle): return Gate("PHASE", (), angle=Angle.of(angle))
def gzz(A: HollowSymmetric, ref=None): return Gate("GZZ", (), coupling=A, ref=ref)
def gcrz(A: HollowSymmetric, ref=None): return Gate("GCRZ", (), coupling=A, ref=ref)


def gcx(B, ref=None) -> Gate:
    mat = np.asarray(B, dtype=np.int64) % 2
    if mat.ndim != 2 or mat.shape[0] != mat.shape[1]:
        raise DimensionError(f"GCX matrix must be square, got {mat.shape}")
    if not _f2_invertible(mat):
        raise DimensionError("GCX matrix is singular over F2")
    return Gate("GCX", (), binary=mat, ref=ref)


def evolve(J: HollowSymmetric, t: float, ref=None) -> Gate:
    return Gate("EVOLVE", (), coupling=J, duration=float(t), ref=ref)


@dataclass(frozen=True, eq=False)
class Circuit:
    n: int
    gates: tuple = ()

    def __post_init__(self):
        object.__setattr__(self, "gates", tuple(self.gates))
        if self.n < 1:
            raise DimensionError(f"circuit needs n >= 1, got {self.n}")
        for g in self.gates:
            for q in g.qubits:
                if not 0 <= q < self.n:
                    raise DimensionError(
                        f"qubit {q} out of range for n={self.n} in {g!r}"
                    )
            if g.coupling is not None and g.coupling.n != self.n:
                raise DimensionError(
                    f"{g.name} coupling has n={g.coupling.n}, circuit has {self.n}"
                )
            if g.binary is not None and g.binary.shape[0] != self.n:
                raise DimensionError(
                    f"GCX matrix is {g.binary.shape[0]}x{g.binary.shape[1]}, "
                    f"circuit has n={self.n}"
                )

    def __eq__(self, other):
        if not isinstance(other, Circuit):
            return NotImplemented
        return self.n == other.n and self.gates == other.gates

    def __len__(self):
        return len(self.gates)

    def __add__(self, other: "Circuit") -> "Circuit":
        if other.n != self.n:
            raise DimensionError(f"size mismatch: {self.n} vs {other.n}")
        return Circuit(self.n, self.gates + other.gates)

    def count(self, name: str) -> int:
        return sum(1 for g in self.gates if g.name == name)


# ---------------------------------------------------------------------------
# diagonal-phase simulation

@dataclass(frozen=True, eq=False)
class DiagonalPhases:
    n: int
    phases: np.ndarray

    def __post_init__(self):
        arr = np.asarray(self.phases, dtype=np.float64).copy()
        if arr.shape != (1 << self.n,):
            raise DimensionError(
                f"need 2^{self.n} phases, got shape {arr.shape}"
            )
        arr.setflags(write=False)
        object.__setattr__(self, "phases", arr)

    def __add__(self, other: "DiagonalPhases") -> "DiagonalPhases":
        if other.n != self.n:
            raise DimensionError(f"size mismatch: {self.n} vs {other.n}")
        return DiagonalPhases(self.n, self.phases + other.phases)

    def agrees_with(self, other: "DiagonalPhases", tol: float = 1e-9) -> bool:
        """Equality modulo 2*pi and one global phase."""
        if other.n != self.n:
            return False
        za = np.exp(1j * (self.phases - self.phases[0]))
        zb = np.exp(1j * (other.phases - other.phases[0]))
        return bool(np.abs(za - zb).max() <= tol)


def _bit(idx: np.ndarray, q: int, n: int) -> np.ndarray:
    return (idx >> (n - 1 - q)) & 1


def _pair_phase_sum(A: HollowSymmetric, signed: bool) -> np.ndarray:
    """sum_{i<j} A_ij * s_i s_j (signed) or * x_i x_j over all basis states."""
    n = A.n
    idx = np.arange(1 << n)
    bits = np.empty((1 << n, n))
    for q in range(n):
        bits[:, q] = _bit(idx, q, n)
    vec = 1.0 - 2.0 * bits if signed else bits
    dense = A.to_dense()
    return ((vec @ dense) * vec).sum(axis=1) / 2.0


def gzz_phases(A: HollowSymmetric) -> DiagonalPhases:
    """Diagonal phases of GZZ(A): phase(x) = sum_{i<j} A_ij (-1)^{x_i+x_j}."""
    if A.n > DIAGONAL_QUBIT_CAP:
        raise DimensionError(f"n={A.n} exceeds diagonal cap {DIAGONAL_QUBIT_CAP}")
    return DiagonalPhases(A.n, _pair_phase_sum(A, signed=True))


def simulate_diagonal(c: Circuit) -> DiagonalPhases:
    """Exact phase vector of a diagonal circuit.

    X gates are allowed and tracked as index relabeling; they must cancel
    by the end of the circuit, otherwise the operator is not diagonal.
    """
    n = c.n
    if n > DIAGONAL_QUBIT_CAP:
        raise DimensionError(f"n={n} exceeds diagonal cap {DIAGONAL_QUBIT_CAP}")
    dim = 1 << n
    idx = np.arange(dim)
    phi = np.zeros(dim)
    mask = 0
    for g in c.gates:
        if g.name == "X":
            bit = 1 << (n - 1 - g.qubits[0])
            phi = phi[idx ^ bit]
            mask ^= bit
        elif g.name in ("RZ", "Z", "S", "SDG"):
            a = {"Z": math.pi, "S": math.pi / 2, "SDG": -math.pi / 2}.get(g.name)
            if a is None:
                a = g.angle.value
            phi = phi + a * _bit(idx, g.qubits[0], n)
        elif g.name == "ZZ":
            xi = _bit(idx, g.qubits[0], n)
            xj = _bit(idx, g.qubits[1], n)
            phi = phi + g.angle.value * (xi ^ xj)
        elif g.name in ("CRZ", "CZ", "CS"):
            a = {"CZ": math.pi, "CS": math.pi / 2}.get(g.name)
            if a is None:
                a = g.angle.value
            phi = phi + a * (_bit(idx, g.qubits[0], n) & _bit(idx, g.qubits[1], n))
        elif g.name == "PHASE":
            phi = phi + g.angle.value
        elif g.name == "GZZ":
            phi = phi + _pair_phase_sum(g.coupling, signed=True)
        elif g.name == "GCRZ":
            phi = phi + _pair_phase_sum(g.coupling, signed=False)
        elif g.name == "EVOLVE":
            phi = phi + _pair_phase_sum(g.duration * g.coupling, signed=True)
        else:
            raise SimulationError(f"{g.name} is not diagonal (or an X gate)")
    if mask != 0:
        raise SimulationError("X gates do not cancel; operator is not diagonal")
    return DiagonalPhases(n, phi)


# ---------------------------------------------------------------------------
# dense simulation

_SQ = {
    "H": np.array([[1, 1], [1, -1]]) / math.sqrt(2),
    "X": np.array([[0, 1], [1, 0]], dtype=complex),
    "S": np.diag([1, 1j]),
    "SDG": np.diag([1, -1j]),
    "SX": np.array([[1 + 1j, 1 - 1j], [1 - 1j, 1 + 1j]]) / 2,
    "SXDG": np.array([[1 - 1j, 1 + 1j], [1 + 1j, 1 - 1j]]) / 2,
}


def _single_qubit_matrix(g: Gate) -> np.ndarray:
    if g.name in _SQ:
        return _SQ[g.name]
    a = g.angle.value
    if g.name == "RZ":
        return np.diag([1.0, np.exp(1j * a)])
    if g.name == "RX":
        c_, s_ = math.cos(a / 2), math.sin(a / 2)
        return np.array([[c_, -1j * s_], [-1j * s_, c_]])
    if g.name == "RY":
        c_, s_ = math.cos(a / 2), math.sin(a / 2)
        return np.array([[c_, -s_], [s_, c_]])
    raise SimulationError(f"no single-qubit matrix for {g.name}")


def _gcx_permutation(B: np.ndarray, n: int) -> np.ndarray:
    """p[x] = index of B x over F2, with qubit 0 as the top bit."""
    idx = np.arange(1 << n)
    bits = np.empty((1 << n, n), dtype=np.int64)
    for q in range(n):
        bits[:, q] = _bit(idx, q, n)
    out_bits = bits @ B.T % 2
    weights = 1 << (n - 1 - np.arange(n))
    return out_bits @ weights


def simulate_dense(c: Circuit) -> np.ndarray:
    """Exact 2^n x 2^n unitary of the circuit, gates applied in order."""
    n = c.n
    if n > DENSE_QUBIT_CAP:
        raise DimensionError(f"n={n} exceeds dense cap {DENSE_QUBIT_CAP}")
    dim = 1 << n
    idx = np.arange(dim)
    U = np.eye(dim, dtype=complex)

    def apply_single(mat, q):
        nonlocal U
        # axis q of the row index (qubit 0 = leftmost axis)
        T = U.reshape((2,) * n + (dim,))
        T = np.tensordot(mat, T, axes=([1], [q]))
        U = np.moveaxis(T, 0, q).reshape(dim, dim)

    def apply_diag(phi):
        nonlocal U
        U = np.exp(1j * phi)[:, None] * U

    def apply_perm(p):
        nonlocal U
        V = np.empty_like(U)
        V[p] = U
        U = V

    for g in c.gates:
        if g.name in ("H", "SX", "SXDG", "RX", "RY"):
            apply_single(_single_qubit_matrix(g), g.qubits[0])
        elif g.name == "X":
            apply_perm(idx ^ (1 << (n - 1 - g.qubits[0])))
        elif g.name in ("Z", "S", "SDG", "RZ"):
            a = {"Z": math.pi, "S": math.pi / 2, "SDG": -math.pi / 2}.get(g.name)
            if a is None:
                a = g.angle.value
            apply_diag(a * _bit(idx, g.qubits[0], n))
        elif g.name == "CX":
            control, target = g.qubits
            flip = _bit(idx, control, n) << (n - 1 - target)
            apply_perm(idx ^ flip)
        elif g.name == "GCX":
            apply_perm(_gcx_permutation(g.binary, n))
        else:
            sub = Circuit(n, (g,))
            apply_diag(simulate_diagonal(sub).phases)
    return U


def equal_up_to_global_phase(U, V, tol: float = 1e-9) -> bool:
    """min over phases of ||U - e^{i phi} V||_max <= tol, phi from the
    largest-magnitude entry of V."""
    U = np.asarray(U)
    V = np.asarray(V)
    if U.shape != V.shape:
        return False
    k = np.argmax(np.abs(V))
    v = V.flat[k]
    if abs(v) <= tol:
        return bool(np.abs(U).max(initial=0.0) <= tol)
    w = U.flat[k]
    if abs(w) == 0.0:
        return False
    phi = w / abs(w) * abs(v) / v
    return bool(np.abs(U - phi * V).max() <= tol)


# ---------------------------------------------------------------------------
# layer algebra

def gcrz_decompose(A: HollowSymmetric) -> Circuit:
    """GCRZ(A) as a global phase, one GZZ(A/4), and local RZ gates.

    Uses CRZ(a) = RZ(a/2) (x) RZ(a/2) . ZZ(-a/2) on every pair at once:
    the result is e^{-i a/4} GZZ(A/4) prod_i RZ(b_i/2) with a the sum of
    the upper entries and b_i the row sums.
    """
    n = A.n
    if not A.upper.any():
        return Circuit(n)
    a = float(A.upper.sum())
    b = A.to_dense().sum(axis=1)
    gates = [phase(-a / 4), gzz(A * 0.25)]
    gates.extend(rz(b[i] / 2, i) for i in range(n) if b[i] != 0.0)
    return Circuit(n, gates)


def gcx_apply(B, bits) -> np.ndarray:
    """B x over F2 for a bit vector x."""
    mat = np.asarray(B, dtype=np.int64) % 2
    vec = np.asarray(bits, dtype=np.int64) % 2
    if mat.ndim != 2 or mat.shape[0] != mat.shape[1] or vec.shape != (mat.shape[0],):
        raise DimensionError(
            f"shape mismatch: B {mat.shape}, x {vec.shape}"
        )
    if not _f2_invertible(mat):
        raise DimensionError("GCX matrix is singular over F2")
    return mat @ vec % 2


def _f2_invertible(B: np.ndarray) -> bool:
    m = (B % 2).astype(np.int8).copy()
    k = m.shape[0]
    row = 0
    for col in range(k):
        piv = None
        for r in range(row, k):
            if m[r, col]:
                piv = r
                break
        if piv is None:
            return False
        m[[row, piv]] = m[[piv, row]]
        for r in range(k):
            if r != row and m[r, col]:
                m[r] ^= m[row]
        row += 1
    return True


# ---------------------------------------------------------------------------
# text format

def dump_circuit(c: Circuit, path: str) -> None:
    """Write circuit text; coupling/binary payloads go to side files.

    Payload gates reference side files as '@<name>'. A gate with a `ref`
    keeps it (round-trip stability); otherwise the file is named
    <stem>.g<k>.json (couplings) or <stem>.g<k>.bin (GCX bit matrices).
    """
    base_dir = os.path.dirname(os.path.abspath(path))
    stem = os.path.splitext(os.path.basename(path))[0]
    lines = [f"QUBITS {c.n}"]
    for k, g in enumerate(c.gates):
        if g.name in _PAYLOAD_GATES:
            ext = "bin" if g.name == "GCX" else "json"
            ref = g.ref if g.ref is not None else f"{stem}.g{k}.{ext}"
            target = os.path.join(base_dir, ref)
            if g.name == "GCX":
                with open(target, "w") as fp:
                    for r in g.binary:
                        fp.write("".join(str(int(v)) for v in r) + "\n")
            else:
                with open(target, "w") as fp:
                    json.dump(g.coupling.to_json(), fp)
            if g.name == "EVOLVE":
                lines.append(f"EVOLVE @{ref} {g.duration!r}")
            else:
                lines.append(f"{g.name} @{ref}")
        else:
            parts = [g.name]
            if g.angle is not None:
                parts.append(g.angle.text())
            parts.extend(str(q + 1) for q in g.qubits)
            lines.append(" ".join(parts))
    with open(path, "w") as fp:
        fp.write("\n".join(lines) + "\n")


def load_circuit(path: str) -> Circuit:
    with open(path) as fp:
        text = fp.read()
    return parse_circuit(text, base_dir=os.path.dirname(os.path.abspath(path)))


def parse_circuit(text: str, base_dir: str | None = None) -> Circuit:
    """Parse circuit text. Lines: 'QUBITS n' header (optional), comments
    starting with '#', then one gate per line with 1-based qubits."""
    n = None
    records = []
    max_qubit = 0
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        tokens = line.split()
        head = tokens[0].upper()
        try:
            if head == "QUBITS":
                n = int(tokens[1])
                continue
            if head in _PAYLOAD_GATES:
                ref = tokens[1]
                if not ref.startswith("@"):
                    raise ParseError(f"{head} expects '@file', got {ref!r}")
                ref = ref[1:]
                if base_dir is None:
                    raise ParseError(f"{head} needs a base directory for {ref!r}")
                target = os.path.join(base_dir, ref)
                if head == "GCX":
                    with open(target) as fp:
                        rows = [r.strip() for r in fp if r.strip()]
                    mat = np.array([[int(ch) for ch in r] for r in rows])
                    g = gcx(mat, ref=ref)
                elif head == "EVOLVE":
                    with open(target) as fp:
                        J = HollowSymmetric.from_json(json.load(fp))
                    g = evolve(J, float(tokens[2]), ref=ref)
                else:
                    with open(target) as fp:
                        A = HollowSymmetric.from_json(json.load(fp))
                    g = gzz(A, ref=ref) if head == "GZZ" else gcrz(A, ref=ref)
                records.append(g)
                if g.coupling is not None:
                    max_qubit = max(max_qubit, g.coupling.n)
                if g.binary is not None:
                    max_qubit = max(max_qubit, g.binary.shape[0])
                continue
            if head not in _SIMPLE_GATES:
                raise ParseError(f"unknown gate {head!r}")
            has_angle, arity = _SIMPLE_GATES[head]
            pos = 1
            angle = None
            if has_angle:
                angle = Angle.parse(tokens[pos])
                pos += 1
            qubits = tuple(int(t) - 1 for t in tokens[pos:])
            if len(qubits) != arity:
                raise ParseError(
                    f"{head} takes {arity} qubit(s), got {len(qubits)}"
                )
            if any(q < 0 for q in qubits):
                raise ParseError("qubit indices are 1-based")
            records.append(Gate(head, qubits, angle=angle))
            if qubits:
                max_qubit = max(max_qubit, max(qubits) + 1)
        except ParseError:
            raise
        except (ValueError, IndexError, OSError, DimensionError, KeyError) as exc:
            raise ParseError(f"line {lineno}: {raw.strip()!r}: {exc}") from exc
    if n is None:
        n = max(max_qubit, 1)
    return Circuit(n, records)
