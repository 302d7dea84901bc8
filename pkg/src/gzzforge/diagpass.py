"""Diagonal unitaries as phase polynomials compiled onto GZZ layers.

Any diagonal unitary is e^{2 pi i f(x)} for a pseudo-Boolean f, and f
expands uniquely over parity functions chi_y(x) = y.x mod 2 (valued in
{0,1}).  Single- and two-variable terms are easy (RZ and ZZ); larger
terms are realized as Hadamard-conjugated CZ fans around an anchor
qubit.  Fans of terms with disjoint supports run in parallel, adjacent
fans merge into one GZZ with shared CZ pairs cancelling, and anchors
are chained through running support intersections so the interior
Hadamard gates cancel too.  Chains whose intersection empties either
borrow an ancilla qubit or start a fresh Hadamard pair.

Emission tracks a pending XOR-set of CZ pairs plus the set of qubits
currently under Hadamard conjugation; a pending pair is flushed into a
GZZ slot just before any non-commuting gate on one of its qubits.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from itertools import permutations

import numpy as np

from .circuit import Circuit, cz, gzz, h, phase, rz, x
from .cliffordpass import compile_cz_layer
from .errors import DimensionError
from .hollow import HollowSymmetric
from .walsh import fwht, ifwht

TABLE_CAP = 16
TWO_PI = 2.0 * math.pi

_ZERO_TOL = 1e-12


@dataclass(frozen=True)
class PhasePolynomial:
    """Parity expansion of f: coefficients keyed by parity bitmask.

    Masks live in table-index space: qubit q is bit n-1-q, matching the
    basis order of the simulators.  Coefficients are kept raw; phase
    periodicity (alpha mod 1) is applied at compile time.
    """

    n: int
    coeffs: dict
    constant: float = 0.0

    def __post_init__(self):
        object.__setattr__(self, "coeffs", {
            int(y): float(a) for y, a in self.coeffs.items()})
        for y in self.coeffs:
            if not 1 <= y < (1 << self.n):
                raise DimensionError(f"parity mask {y} out of range for n={self.n}")

    def support(self, mask: int) -> tuple:
        return tuple(q for q in range(self.n) if (mask >> (self.n - 1 - q)) & 1)

    def table(self) -> np.ndarray:
        """Phase table f(x) for all 2^n inputs, rebuilt exactly."""
        dim = 1 << self.n
        chars = np.zeros(dim)
        total = 0.0
        for y, a in self.coeffs.items():
            chars[y] = -a / 2.0
            total += a
        chars[0] = self.constant + total / 2.0
        return fwht(chars)


def phase_poly_from_table(values) -> PhasePolynomial:
    """Exact parity expansion of a length-2^n phase table."""
    table = np.asarray(values, dtype=np.float64)
    dim = table.size
    n = dim.bit_length() - 1
    if dim != 1 << n or n < 1:
        raise DimensionError(f"table length must be a power of two, got {dim}")
    if n > TABLE_CAP:
        raise DimensionError(f"phase tables support n <= {TABLE_CAP}, got {n}")
    chars = ifwht(table)
    coeffs = {}
    for y in range(1, dim):
        alpha = -2.0 * chars[y]
        if alpha != 0.0:
            coeffs[y] = alpha
    return PhasePolynomial(n, coeffs, float(table[0]))


def term_circuit(y, alpha: float, i: int, n: int | None = None) -> Circuit:
    """One parity term as a Hadamard-conjugated CZ fan around anchor i.

    y is the support (iterable of qubit indices).  The anchor carries
    the conjugating Hadamards and the RZ(2 pi alpha) rotation; every
    other support qubit controls one CZ in each fan.
    """
    supp = sorted(set(int(q) for q in y))
    if len(supp) < 3:
        raise DimensionError(f"term needs support size >= 3, got {len(supp)}")
    if i not in supp:
        raise DimensionError(f"anchor {i} not in support {supp}")
    if n is None:
        n = supp[-1] + 1
    fan = [cz(l, i) for l in supp if l != i]
    gates = [h(i), *fan, h(i), rz(TWO_PI * alpha, i), h(i), *fan, h(i)]
    return Circuit(n, tuple(gates))


def parallelize_supports(supports) -> list:
    """Greedy layering of supports into disjoint groups.

    Seeds each layer with the largest remaining support (lexicographic
    ties), then repeatedly appends the disjoint support that maximizes
    the union, i.e. the largest disjoint one.  Returns layers in
    creation order, each a list of frozensets in append order.
    """
    pool = [frozenset(s) for s in supports]
    if len(set(pool)) != len(pool):
        raise DimensionError("duplicate supports")
    key = lambda s: (-len(s), tuple(sorted(s)))
    layers = []
    pool.sort(key=key)
    while pool:
        seed = pool.pop(0)
        layer = [seed]
        union = set(seed)
        while True:
            best = None
            for s in pool:
                if not (union & s):
                    if best is None or key(s) < key(best):
                        best = s
            if best is None:
                break
            layer.append(best)
            union |= best
            pool.remove(best)
        layers.append(layer)
    return layers


def _matching_overlap(u, v) -> int:
    """Largest total intersection over pairings of two equal-size layers."""
    r = len(u)
    if r <= 7:
        best = 0
        for perm in permutations(range(r)):
            best = max(best, sum(len(u[i] & v[perm[i]]) for i in range(r)))
        return best
    # greedy fallback for very wide layers
    total = 0
    taken = set()
    pairs = sorted(((len(a & b), ai, bi) for ai, a in enumerate(u)
                    for bi, b in enumerate(v)),
                   key=lambda t: (-t[0], t[1], t[2]))
    seen_a = set()
    for w, ai, bi in pairs:
        if ai in seen_a or bi in taken:
            continue
        seen_a.add(ai)
        taken.add(bi)
        total += w
    return total


@dataclass(frozen=True)
class LayerOrder:
    order: tuple
    canceled_cz: int
    shared: tuple


def order_layers(layers) -> LayerOrder:
    """Sequence the layers of one group to maximize consecutive overlap.

    Shared support size between two layers is the best chain-aligned
    pairing of their supports.  The path is built nearest-neighbor from
    every start and improved by 2-opt; each consecutive shared pair
    later cancels twice as many CZ gates.
    """
    k = len(layers)
    if k == 0:
        raise DimensionError("no layers to order")
    if k == 1:
        return LayerOrder((0,), 0, ((0,),))
    shared = [[0] * k for _ in range(k)]
    for a in range(k):
        for b in range(a + 1, k):
            w = _matching_overlap(layers[a], layers[b])
            shared[a][b] = shared[b][a] = w

    def path_weight(seq):
        return sum(shared[seq[i]][seq[i + 1]] for i in range(len(seq) - 1))

    best = None
    for start in range(k):
        seq = [start]
        left = set(range(k)) - {start}
        while left:
            nxt = max(sorted(left), key=lambda j: (shared[seq[-1]][j], -j))
            seq.append(nxt)
            left.remove(nxt)
        if best is None or path_weight(seq) > path_weight(best):
            best = seq
    improved = True
    passes = 0
    while improved and passes < 200:
        improved = False
        passes += 1
        for a in range(k - 1):
            for b in range(a + 1, k):
                cand = best[:a] + best[a:b + 1][::-1] + best[b + 1:]
                if path_weight(cand) > path_weight(best):
                    best = cand
                    improved = True
    if best[0] > best[-1]:
        best = best[::-1]
    return LayerOrder(tuple(best), 2 * path_weight(best),
                      tuple(tuple(row) for row in shared))


@dataclass(frozen=True)
class ChainPlan:
    """Anchor assignment for one ordered group of layers."""

    anchors: dict          # (layer_pos, support) -> anchor qubit
    extended: dict         # (layer_pos, support) -> support incl. ancilla
    ancillas: int
    chains: tuple          # tuples of (layer_pos, support)


def place_hadamards(ordered_layers, *, ancillas="auto", ancilla_base=None) -> ChainPlan:
    """Chain supports across consecutive layers and pick anchor qubits.

    Each chain keeps the running intersection of its supports; the
    anchor is its smallest member.  A support joins the chain with the
    largest intersection.  When every intersection empties, either an
    ancilla qubit is appended to the whole chain and becomes its anchor
    (mode "auto"), or the chain is closed and a new Hadamard pair starts
    (mode 0).
    """
    if ancillas not in ("auto", 0, "0"):
        raise DimensionError(f"ancillas must be 'auto' or 0, got {ancillas!r}")
    auto = ancillas == "auto"
    layers = [list(layer) for layer in ordered_layers]
    if not layers:
        return ChainPlan({}, {}, 0, ())
    if ancilla_base is None:
        ancilla_base = 1 + max((q for layer in layers for s in layer for q in s),
                               default=-1)
    chains = []
    done = []
    next_anc = ancilla_base
    for pos, layer in enumerate(layers):
        if pos == 0:
            for s in sorted(layer, key=lambda s: tuple(sorted(s))):
                chains.append({"members": [(pos, s)], "inter": set(s), "anc": None})
            continue
        todo = sorted(layer, key=lambda s: tuple(sorted(s)))
        free = list(range(len(chains)))
        assigned = []
        while todo:
            pick = None
            for s in todo:
                for ci in free:
                    w = len(chains[ci]["inter"] & s)
                    cand = (-w, tuple(sorted(s)), ci)
                    if pick is None or cand < pick[0]:
                        pick = (cand, s, ci)
            _, s, ci = pick
            todo.remove(s)
            free.remove(ci)
            assigned.append((s, ci))
        for s, ci in assigned:
            chain = chains[ci]
            new_inter = chain["inter"] & s
            if new_inter or chain["anc"] is not None:
                chain["members"].append((pos, s))
                if chain["anc"] is None:
                    chain["inter"] = new_inter
            elif auto:
                chain["anc"] = next_anc
                next_anc += 1
                chain["members"].append((pos, s))
                chain["inter"] = set()
            else:
                done.append(chain)
                chains[ci] = {"members": [(pos, s)], "inter": set(s), "anc": None}
    done.extend(chains)
    anchors = {}
    extended = {}
    for chain in done:
        if chain["anc"] is not None:
            anchor = chain["anc"]
        else:
            anchor = min(chain["inter"])
        for pos, s in chain["members"]:
            anchors[(pos, s)] = anchor
            extended[(pos, s)] = s | {anchor}
    return ChainPlan(anchors, extended, next_anc - ancilla_base,
                     tuple(tuple(c["members"]) for c in done))


def _fan_edges(support, anchor):
    return {frozenset((q, anchor)) for q in support if q != anchor}


def _edge_support(edges):
    out = set()
    for e in edges:
        out |= e
    return out


class _Emitter:
    """Gate stream with pending CZ pairs and open Hadamard tracking."""

    def __init__(self, width):
        self.width = width
        self.gates = []
        self.pending = set()
        self.open_h = set()
        self.gzz_slots = 0
        self.encoding_cost = 0
        self.edges_emitted = 0

    def flush(self, touching=None):
        if touching is None:
            edges = set(self.pending)
        else:
            edges = {e for e in self.pending if e & touching}
        if not edges:
            return
        self.pending -= edges
        entries = {tuple(sorted(e)): 1.0 for e in edges}
        adj = HollowSymmetric.from_pairs(self.width, entries)
        self.gates.extend(compile_cz_layer(adj).gates)
        size = len(_edge_support(edges))
        self.gzz_slots += 1
        self.encoding_cost += size * (size - 1) // 2
        self.edges_emitted += len(edges)

    def hadamard(self, q):
        self.flush({q})
        self.gates.append(h(q))

    def close_stale(self, keep, touched):
        for q in sorted(self.open_h - keep):
            if q in touched:
                self.hadamard(q)
                self.open_h.remove(q)

    def open_anchors(self, anchors):
        for q in sorted(anchors - self.open_h):
            self.hadamard(q)
            self.open_h.add(q)

    def finish(self):
        self.flush(None)
        for q in sorted(self.open_h):
            self.hadamard(q)
        self.open_h.clear()


def _is_half(alpha: float) -> bool:
    return abs(alpha - 0.5) <= _ZERO_TOL


def _reduce_mod1(alpha: float) -> float:
    a = alpha % 1.0
    if a > 1.0 - _ZERO_TOL:
        a = 0.0
    return a


def compile_diagonal(p: PhasePolynomial, *, allow_size2: bool = False,
                     ancillas="auto") -> tuple:
    """Compile e^{2 pi i f} into local gates plus merged GZZ slots.

    Returns (circuit, report).  Size-1 terms become RZ gates and size-2
    terms pool into a single GZZ unless ``allow_size2`` routes them
    through the fan pipeline (more parallelization, as in wide layers).
    The report counts GZZ slots, the support-based encoding cost, the
    per-term baseline, ancillas, and both CZ cancellation figures: the
    shared-support formula (2 * sum of consecutive overlaps) and the
    physical recount (naive fan CZ count minus emitted pairs).
    """
    n = p.n
    singles = []
    pairs = []
    hard = []
    for mask in sorted(p.coeffs):
        alpha = _reduce_mod1(p.coeffs[mask])
        if alpha <= _ZERO_TOL:
            continue
        supp = p.support(mask)
        if len(supp) == 1:
            singles.append((supp[0], alpha))
        elif len(supp) == 2 and not allow_size2:
            pairs.append((supp, alpha))
        else:
            hard.append((frozenset(supp), alpha))

    alpha_of = dict(hard)
    layers = parallelize_supports([s for s, _ in hard])
    groups = {}
    for layer in layers:
        groups.setdefault(len(layer), []).append(layer)

    plans = []
    canceled_cz = 0
    report_layers = []
    anc_peak = 0
    for r in sorted(groups, reverse=True):
        ordering = order_layers(groups[r])
        ordered = [groups[r][i] for i in ordering.order]
        plan = place_hadamards(ordered, ancillas=ancillas, ancilla_base=n)
        anc_peak = max(anc_peak, plan.ancillas)
        canceled_cz += ordering.canceled_cz
        plans.append((ordered, plan))
        report_layers.append([tuple(tuple(sorted(s)) for s in layer)
                              for layer in ordered])

    width = n + anc_peak
    em = _Emitter(width)

    # easy terms lead the circuit as a purely diagonal prefix
    if pairs:
        em.gates.append(phase(sum(math.pi * a for _, a in pairs)))
        coupling = HollowSymmetric.from_pairs(
            width, {tuple(sorted(s)): -math.pi * a for s, a in pairs})
        em.gates.append(gzz(coupling))
        size = len({q for s, _ in pairs for q in s})
        em.gzz_slots += 1
        em.encoding_cost += size * (size - 1) // 2
    for q, a in singles:
        em.gates.append(rz(TWO_PI * a, q))

    naive_cz = sum(2 * (len(s) - 1) for s, _ in hard)
    for ordered, plan in plans:
        for pos, layer in enumerate(ordered):
            terms = sorted(((plan.extended[(pos, s)], plan.anchors[(pos, s)], s)
                            for s in layer), key=lambda t: t[1])
            anchors = {t[1] for t in terms}
            touched = set().union(*(t[0] for t in terms))
            em.close_stale(anchors, touched)
            em.open_anchors(anchors)
            for ext, anchor, _ in terms:
                em.pending ^= _fan_edges(ext, anchor)
            em.flush(anchors)
            for _, anchor, s in terms:
                alpha = alpha_of[s]
                if _is_half(alpha):
                    em.gates.append(x(anchor))
                else:
                    em.gates.extend([h(anchor), rz(TWO_PI * alpha, anchor),
                                     h(anchor)])
            for ext, anchor, _ in terms:
                em.pending ^= _fan_edges(ext, anchor)
    em.finish()

    baseline = sum(1 for _ in pairs)
    baseline += sum(2 * (len(s) if len(s) == 2 else len(s) * (len(s) - 1) // 2)
                    for s, _ in hard)
    circuit = Circuit(width, tuple(em.gates))
    report = {
        "gzz": em.gzz_slots,
        "encoding_cost": em.encoding_cost,
        "ancillas": anc_peak,
        "cz_canceled": canceled_cz,
        "cz_canceled_physical": naive_cz - em.edges_emitted,
        "baseline_cost": baseline,
        "layers": report_layers,
        "hadamards": circuit.count("H"),
        "x_gates": circuit.count("X"),
    }
    return circuit, report
