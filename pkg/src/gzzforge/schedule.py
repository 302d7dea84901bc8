"""Ordering encodings into X layers around always-on Ising evolutions.

Consecutive evolution steps under different sign encodings need an X layer
whose mask is the XOR of the two encodings; the cheapest realization of a
decomposition is a traveling-salesman tour over encoding masks in Hamming
distance, entered from and exited to the unflipped frame.
"""

from __future__ import annotations

from dataclasses import dataclass

from .circuit import Circuit, evolve, x
from .errors import DimensionError
from .hollow import HollowSymmetric
from .solver import Decomposition

TWO_OPT_PASS_LIMIT = 200


@dataclass(frozen=True)
class Schedule:
    """X-flip masks interleaved with evolution durations.

    Bit k of a mask flips qubit k; the last qubit's sign is pinned and never
    appears in a mask.
    """

    n: int
    steps: tuple[tuple[int, float], ...]
    trailing_xflip: int

    @property
    def x_gate_count(self) -> int:
        total = sum(mask.bit_count() for mask, _ in self.steps)
        return total + self.trailing_xflip.bit_count()

    @property
    def layer_count(self) -> int:
        return len(self.steps) + 1

    def realized_masks(self) -> tuple[int, ...]:
        """Cumulative parity before each evolution; telescopes the flips."""
        out, cur = [], 0
        for mask, _ in self.steps:
            cur ^= mask
            out.append(cur)
        return tuple(out)


def schedule_for_order(d: Decomposition, order: list[int]) -> Schedule:
    """Schedule realizing d's terms in the given visiting order."""
    terms = list(d.terms)
    if sorted(order) != list(range(len(terms))):
        raise ValueError("order must be a permutation of the term positions")
    steps = []
    prev = 0
    for pos in order:
        index, lam = terms[pos]
        steps.append((prev ^ index, lam))
        prev = index
    return Schedule(d.n, tuple(steps), prev)


def _tour_cost(masks: list[int], order: list[int]) -> int:
    cost, prev = 0, 0
    for pos in order:
        cost += (prev ^ masks[pos]).bit_count()
        prev = masks[pos]
    return cost + prev.bit_count()


def _nearest_neighbor(masks: list[int]) -> list[int]:
    remaining = set(range(len(masks)))
    order, cur = [], 0
    while remaining:
        nxt = min(remaining,
                  key=lambda j: ((cur ^ masks[j]).bit_count(), j))
        order.append(nxt)
        cur = masks[nxt]
        remaining.remove(nxt)
    return order


def _two_opt(masks: list[int], order: list[int]) -> list[int]:
    def dist(a, b):
        return (a ^ b).bit_count()

    path = list(order)
    k = len(path)
    for _ in range(TWO_OPT_PASS_LIMIT):
        improved = False
        for i in range(k - 1):
            before = masks[path[i - 1]] if i > 0 else 0
            for j in range(i + 1, k):
                after = masks[path[j + 1]] if j + 1 < k else 0
                old = dist(before, masks[path[i]]) + dist(masks[path[j]], after)
                new = dist(before, masks[path[j]]) + dist(masks[path[i]], after)
                if new < old:
                    path[i:j + 1] = reversed(path[i:j + 1])
                    improved = True
        if not improved:
            return path
    return path


def order_encodings(d: Decomposition, heuristic: str = "nn-2opt") -> Schedule:
    """Minimize X gates over encoding visiting orders.

    Endpoints are pinned to the all-plus encoding on both ends, so the tour
    pays for entering the first encoding and undoing the last one.
    """
    if heuristic not in ("nearest-neighbor", "nn-2opt"):
        raise ValueError(f"unknown heuristic {heuristic!r}")
    terms = [t for t in d.terms if t[1] > 0]
    if not terms:
        raise ValueError("cannot schedule an empty decomposition")
    live = Decomposition(d.n, tuple(terms))
    masks = [index for index, _ in terms]
    order = _nearest_neighbor(masks)
    if heuristic == "nn-2opt":
        order = _two_opt(masks, order)
    return schedule_for_order(live, order)


def emit_gzz_circuit(d: Decomposition, J: HollowSymmetric,
                     heuristic: str = "nn-2opt") -> Circuit:
    """Physical realization: X layers around Evolve(J, t) pulses.

    The simulated diagonal phases equal GZZ(J o sum(lambda m m^T)).
    """
    if d.n != J.n:
        raise DimensionError(f"size mismatch: {d.n} vs {J.n}")
    if not d.terms:
        return Circuit(d.n, ())
    sched = order_encodings(d, heuristic)
    gates = []
    for mask, lam in sched.steps:
        gates.extend(x(q) for q in range(d.n) if (mask >> q) & 1)
        gates.append(evolve(J, lam))
    gates.extend(x(q) for q in range(d.n)
                 if (sched.trailing_xflip >> q) & 1)
    return Circuit(d.n, gates)
