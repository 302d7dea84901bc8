import math

import numpy as np
import pytest

from gzzforge.circuit import gzz, gzz_phases, simulate_diagonal
from gzzforge.frame import Encoding, outer_product
from gzzforge.hollow import HollowSymmetric
from gzzforge.schedule import (
    Schedule,
    emit_gzz_circuit,
    order_encodings,
    schedule_for_order,
)
from gzzforge.solver import Decomposition, SolveOptions, hadamard_quotient, solve_lp


def random_hollow(n, rng, lo=0.5, hi=2.0):
    iu = np.triu_indices(n, 1)
    vals = rng.uniform(lo, hi, len(iu[0])) * rng.choice([-1.0, 1.0], len(iu[0]))
    return HollowSymmetric(n, vals)


def target_coupling(d: Decomposition, J: HollowSymmetric) -> HollowSymmetric:
    acc = HollowSymmetric.zeros(d.n)
    for index, lam in d.terms:
        acc = acc + outer_product(Encoding(d.n, index)) * lam
    return HollowSymmetric(d.n, acc.upper * J.upper)


class TestSchedule:
    def test_single_allplus_term(self):
        d = Decomposition(3, ((0, 0.4),))
        s = order_encodings(d)
        assert s.x_gate_count == 0
        assert s.layer_count == 2
        assert s.steps == ((0, 0.4),)
        assert s.trailing_xflip == 0

    def test_two_terms_one_flip(self):
        # all-plus plus a single-sign-flip encoding: 0 + 1 + 1 gates
        d = Decomposition(3, ((0, 0.3), (1, 0.2)))
        s = order_encodings(d)
        assert s.x_gate_count == 2
        assert s.layer_count == 3

    def test_telescoping_masks(self):
        rng = np.random.default_rng(4)
        for n in (3, 5, 7):
            M = random_hollow(n, rng)
            d = solve_lp(M, SolveOptions())
            s = order_encodings(d)
            assert sorted(s.realized_masks()) == sorted(i for i, _ in d.terms)

    def test_heuristic_ordering_quality(self):
        rng = np.random.default_rng(8)
        for n in (4, 5, 6, 7, 8):
            M = random_hollow(n, rng)
            d = solve_lp(M, SolveOptions())
            index_order = schedule_for_order(d, list(range(len(d.terms))))
            nn = order_encodings(d, "nearest-neighbor")
            opt = order_encodings(d, "nn-2opt")
            assert opt.x_gate_count <= nn.x_gate_count
            assert nn.x_gate_count <= index_order.x_gate_count

    def test_empty_rejected(self):
        with pytest.raises(ValueError):
            order_encodings(Decomposition(3, ()))

    def test_unknown_heuristic(self):
        with pytest.raises(ValueError):
            order_encodings(Decomposition(3, ((0, 1.0),)), "christofides")

    def test_order_validation(self):
        d = Decomposition(3, ((0, 1.0), (1, 1.0)))
        with pytest.raises(ValueError):
            schedule_for_order(d, [0, 0])


class TestEmitGzzCircuit:
    def test_empty_decomposition_identity(self):
        J = HollowSymmetric.from_pairs(3, {(0, 1): 1.0})
        c = emit_gzz_circuit(Decomposition(3, ()), J)
        assert c.gates == ()

    def test_single_pair_duration(self):
        J = HollowSymmetric.from_pairs(2, {(0, 1): 2 * math.pi * 50.0})
        A = HollowSymmetric.from_pairs(2, {(0, 1): math.pi / 4})
        M = hadamard_quotient(A, J)
        d = solve_lp(M, SolveOptions())
        c = emit_gzz_circuit(d, J)
        evolutions = [g for g in c.gates if g.name == "EVOLVE"]
        assert len(evolutions) == 1
        assert evolutions[0].duration == pytest.approx(
            (math.pi / 4) / (2 * math.pi * 50.0))
        assert c.count("X") == 0

    def test_phases_match_target(self):
        rng = np.random.default_rng(12)
        for n in range(2, 9):
            for _ in range(5):
                J = random_hollow(n, rng)
                A = random_hollow(n, rng, lo=0.1, hi=1.0)
                M = hadamard_quotient(A, J)
                d = solve_lp(M, SolveOptions())
                circ = emit_gzz_circuit(d, J)
                got = simulate_diagonal(circ)
                want = gzz_phases(target_coupling(d, J))
                assert got.agrees_with(want, tol=1e-9)
                want_direct = gzz_phases(A)
                assert got.agrees_with(want_direct, tol=1e-9)

    def test_order_independence(self):
        rng = np.random.default_rng(77)
        n = 5
        J = random_hollow(n, rng)
        M = random_hollow(n, rng, lo=0.1, hi=1.0)
        d = solve_lp(M, SolveOptions())
        reference = None
        for seed in range(5):
            perm = np.random.default_rng(seed).permutation(len(d.terms))
            sched = schedule_for_order(d, list(perm))
            gates = []
            from gzzforge.circuit import evolve, x
            for mask, lam in sched.steps:
                gates.extend(x(q) for q in range(n) if (mask >> q) & 1)
                gates.append(evolve(J, lam))
            gates.extend(x(q) for q in range(n)
                         if (sched.trailing_xflip >> q) & 1)
            from gzzforge.circuit import Circuit
            phases = simulate_diagonal(Circuit(n, gates))
            if reference is None:
                reference = phases
            else:
                assert phases.agrees_with(reference, tol=1e-9)

    def test_mismatched_sizes(self):
        from gzzforge.errors import DimensionError
        with pytest.raises(DimensionError):
            emit_gzz_circuit(Decomposition(3, ()),
                             HollowSymmetric.zeros(4))
