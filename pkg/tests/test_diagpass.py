import math

import numpy as np
import pytest

from gzzforge.circuit import simulate_dense
from gzzforge.diagpass import (
    ChainPlan,
    PhasePolynomial,
    compile_diagonal,
    order_layers,
    parallelize_supports,
    phase_poly_from_table,
    place_hadamards,
    term_circuit,
)
from gzzforge.errors import DimensionError


def parity_vector(n, support):
    idx = np.arange(1 << n)
    par = np.zeros(1 << n, dtype=np.int64)
    for q in support:
        par ^= (idx >> (n - 1 - q)) & 1
    return par


def table_from_terms(n, terms, constant=0.0):
    out = np.full(1 << n, constant)
    for support, alpha in terms:
        out = out + alpha * parity_vector(n, support)
    return out


def example_table():
    supports = [(0, 1), (2, 3), (3, 4), (1, 4), (0, 1, 2), (2, 3, 4),
                (1, 2, 3, 4)]
    return table_from_terms(5, [(s, 0.5) for s in supports])


def check_diagonal(circ, n_data, table, tol=1e-10):
    """Dense unitary must be diagonal and phase-match e^{2 pi i f} on the
    data block (ancillas, if any, in |0>)."""
    mat = simulate_dense(circ)
    assert np.max(np.abs(mat - np.diag(np.diag(mat)))) <= tol
    pad = circ.n - n_data
    diag = np.diag(mat).reshape(1 << n_data, -1)[:, 0] if pad else np.diag(mat)
    ratio = diag / np.exp(2j * np.pi * table)
    assert np.max(np.abs(ratio - ratio[0])) <= tol


class TestPhasePolynomial:
    def test_single_parity_term(self):
        table = table_from_terms(4, [((1, 2), 1.0)])
        p = phase_poly_from_table(table)
        assert len(p.coeffs) == 1
        ((mask, alpha),) = p.coeffs.items()
        assert p.support(mask) == (1, 2)
        assert alpha == pytest.approx(1.0, abs=1e-14)

    def test_constant_table(self):
        p = phase_poly_from_table(np.full(8, 0.37))
        assert p.coeffs == {}
        assert p.constant == pytest.approx(0.37)

    def test_random_round_trip(self):
        rng = np.random.default_rng(5)
        for _ in range(20):
            table = rng.uniform(-2, 2, 16)
            p = phase_poly_from_table(table)
            assert np.max(np.abs(p.table() - table)) <= 1e-12

    def test_caps_and_validation(self):
        with pytest.raises(DimensionError):
            phase_poly_from_table(np.zeros(12))
        with pytest.raises(DimensionError):
            phase_poly_from_table(np.zeros(1 << 17))
        with pytest.raises(DimensionError):
            PhasePolynomial(2, {4: 1.0})

    def test_worked_example_coefficients(self):
        p = phase_poly_from_table(example_table())
        got = sorted((p.support(m), a) for m, a in p.coeffs.items())
        assert [s for s, _ in got] == [
            (0, 1), (0, 1, 2), (1, 2, 3, 4), (1, 4), (2, 3), (2, 3, 4),
            (3, 4)]
        assert all(a == pytest.approx(0.5, abs=1e-14) for _, a in got)


class TestTermCircuit:
    def test_half_alpha_phases(self):
        circ = term_circuit((0, 1, 2), 0.5, 0)
        mat = simulate_dense(circ)
        expect = np.exp(1j * math.pi * parity_vector(3, (0, 1, 2)))
        assert np.max(np.abs(np.diag(mat) - expect)) <= 1e-12
        assert np.max(np.abs(mat - np.diag(np.diag(mat)))) <= 1e-12

    def test_anchor_choice_is_immaterial(self):
        for alpha in (0.5, 0.23):
            a = simulate_dense(term_circuit((0, 2, 3), alpha, 0, n=4))
            b = simulate_dense(term_circuit((0, 2, 3), alpha, 3, n=4))
            assert np.max(np.abs(a - b)) <= 1e-12

    def test_census(self):
        circ = term_circuit((1, 2, 4, 5), 0.3, 2)
        assert circ.count("H") == 4
        assert circ.count("CZ") == 6
        assert circ.count("RZ") == 1

    def test_validation(self):
        with pytest.raises(DimensionError):
            term_circuit((0, 1), 0.5, 0)
        with pytest.raises(DimensionError):
            term_circuit((0, 1, 2), 0.5, 3)


class TestParallelize:
    def test_small_example(self):
        layers = parallelize_supports([{1, 2}, {3, 4}, {1, 3}])
        assert layers == [[frozenset({1, 2}), frozenset({3, 4})],
                          [frozenset({1, 3})]]

    def test_pairwise_intersecting(self):
        layers = parallelize_supports([{0, 1, 2}, {0, 1, 3}, {1, 2, 3}])
        assert all(len(layer) == 1 for layer in layers)

    def test_worked_example_grouping(self):
        supports = [{0, 1}, {2, 3}, {3, 4}, {1, 4}, {0, 1, 2}, {2, 3, 4},
                    {1, 2, 3, 4}]
        layers = parallelize_supports(supports)
        by_size = {}
        for layer in layers:
            by_size.setdefault(len(layer), []).append(
                {tuple(sorted(s)) for s in layer})
        assert by_size[1] == [{(1, 2, 3, 4)}]
        assert by_size[2] == [
            {(0, 1, 2), (3, 4)},
            {(2, 3, 4), (0, 1)},
            {(1, 4), (2, 3)},
        ]

    def test_rejects_duplicates(self):
        with pytest.raises(DimensionError):
            parallelize_supports([{0, 1, 2}, {0, 1, 2}])


class TestOrderLayers:
    def layers(self):
        return [
            [frozenset({0, 1, 2}), frozenset({3, 4})],
            [frozenset({2, 3, 4}), frozenset({0, 1})],
            [frozenset({1, 4}), frozenset({2, 3})],
        ]

    def test_shared_support_matrix(self):
        out = order_layers(self.layers())
        assert out.shared == ((0, 4, 2), (4, 0, 3), (2, 3, 0))

    def test_order_and_cancellation(self):
        out = order_layers(self.layers())
        assert out.order == (0, 1, 2)
        assert out.canceled_cz == 14

    def test_single_layer(self):
        out = order_layers([[frozenset({0, 1, 2})]])
        assert out.order == (0,)
        assert out.canceled_cz == 0

    def test_two_layers(self):
        out = order_layers([[frozenset({0, 1, 2})], [frozenset({1, 2, 3})]])
        assert out.order == (0, 1)
        assert out.canceled_cz == 4


class TestPlaceHadamards:
    def test_worked_example_anchors(self):
        layers = [
            [frozenset({0, 1, 2}), frozenset({3, 4})],
            [frozenset({2, 3, 4}), frozenset({0, 1})],
            [frozenset({1, 4}), frozenset({2, 3})],
        ]
        plan = place_hadamards(layers)
        assert plan.ancillas == 0
        assert plan.anchors[(0, frozenset({0, 1, 2}))] == 1
        assert plan.anchors[(1, frozenset({0, 1}))] == 1
        assert plan.anchors[(2, frozenset({1, 4}))] == 1
        assert plan.anchors[(0, frozenset({3, 4}))] == 3
        assert plan.anchors[(1, frozenset({2, 3, 4}))] == 3
        assert plan.anchors[(2, frozenset({2, 3}))] == 3

    def test_disjoint_chains_need_two_ancillas(self):
        layers = [
            [frozenset({0, 1, 2}), frozenset({3, 4, 5})],
            [frozenset({6, 7, 8}), frozenset({9, 10, 11})],
        ]
        plan = place_hadamards(layers, ancillas="auto")
        assert plan.ancillas == 2
        anchors = {plan.anchors[key] for key in plan.anchors}
        assert anchors == {12, 13}

    def test_disabled_ancillas_split_chains(self):
        layers = [
            [frozenset({0, 1, 2}), frozenset({3, 4, 5})],
            [frozenset({6, 7, 8}), frozenset({9, 10, 11})],
        ]
        plan = place_hadamards(layers, ancillas=0)
        assert plan.ancillas == 0
        assert len(plan.chains) == 4

    def test_validation(self):
        with pytest.raises(DimensionError):
            place_hadamards([], ancillas="many")


class TestCompileDiagonal:
    def test_worked_example_report(self):
        p = phase_poly_from_table(example_table())
        circ, rep = compile_diagonal(p, allow_size2=True)
        assert rep["gzz"] == 6
        assert circ.count("GZZ") == 6
        assert rep["encoding_cost"] == 29
        assert rep["baseline_cost"] == 40
        assert rep["cz_canceled"] == 14
        assert rep["cz_canceled_physical"] == 8
        assert rep["ancillas"] == 0
        assert rep["hadamards"] == 4
        assert rep["x_gates"] == 7

    def test_worked_example_layer_order(self):
        p = phase_poly_from_table(example_table())
        _, rep = compile_diagonal(p, allow_size2=True)
        assert rep["layers"][0] == [
            ((0, 1, 2), (3, 4)),
            ((2, 3, 4), (0, 1)),
            ((1, 4), (2, 3)),
        ]
        assert rep["layers"][1] == [((1, 2, 3, 4),)]

    def test_worked_example_phases(self):
        p = phase_poly_from_table(example_table())
        circ, _ = compile_diagonal(p, allow_size2=True)
        check_diagonal(circ, 5, example_table())

    def test_easy_only_function(self):
        table = table_from_terms(4, [((0,), 0.3), ((1, 3), 0.2), ((0, 2), 0.9)])
        circ, rep = compile_diagonal(phase_poly_from_table(table))
        assert circ.count("GZZ") == 1
        assert circ.count("RZ") == 1
        assert rep["ancillas"] == 0
        check_diagonal(circ, 4, table)

    def test_random_round_trip(self):
        rng = np.random.default_rng(31)
        for n in range(3, 8):
            for _ in range(10):
                table = rng.uniform(-1, 1, 1 << n)
                p = phase_poly_from_table(table)
                circ, _ = compile_diagonal(p)
                check_diagonal(circ, n, table)

    def test_random_round_trip_size2_pipeline(self):
        rng = np.random.default_rng(77)
        for n in (4, 5):
            for _ in range(10):
                table = rng.uniform(-1, 1, 1 << n)
                circ, _ = compile_diagonal(phase_poly_from_table(table),
                                           allow_size2=True)
                check_diagonal(circ, n, table)

    def test_chained_group_census(self):
        # three overlapping supports chain into |L|+1 GZZ and 2 H
        terms = [((0, 1, 2), 0.5), ((0, 1, 3), 0.5), ((0, 1, 4), 0.5)]
        table = table_from_terms(5, terms)
        circ, rep = compile_diagonal(phase_poly_from_table(table))
        assert circ.count("GZZ") == 4
        assert circ.count("H") == 2
        assert rep["ancillas"] == 0
        check_diagonal(circ, 5, table)

    def test_ancilla_chain_round_trip(self):
        # running intersection empties on the third support
        terms = [((0, 1, 2), 0.25), ((0, 1, 3), 0.5), ((2, 3, 4), 0.7)]
        table = table_from_terms(5, terms)
        circ, rep = compile_diagonal(phase_poly_from_table(table),
                                     ancillas="auto")
        assert rep["ancillas"] == 1
        assert circ.n == 6
        check_diagonal(circ, 5, table)

    def test_ancillas_disabled_round_trip(self):
        terms = [((0, 1, 2), 0.25), ((0, 1, 3), 0.5), ((2, 3, 4), 0.7)]
        table = table_from_terms(5, terms)
        circ, rep = compile_diagonal(phase_poly_from_table(table), ancillas=0)
        assert rep["ancillas"] == 0
        assert circ.n == 5
        assert circ.count("H") > 2
        check_diagonal(circ, 5, table)

    def test_general_alpha_uses_rz_not_x(self):
        table = table_from_terms(4, [((0, 1, 2), 0.2)])
        circ, _ = compile_diagonal(phase_poly_from_table(table))
        assert circ.count("X") == 0
        assert circ.count("RZ") == 1
        check_diagonal(circ, 4, table)

    def test_coefficients_reduced_mod_one(self):
        base = table_from_terms(4, [((0, 1, 2), 0.25)])
        shifted = table_from_terms(4, [((0, 1, 2), 2.25)])
        a, _ = compile_diagonal(phase_poly_from_table(base))
        b, _ = compile_diagonal(phase_poly_from_table(shifted))
        assert a.gates == b.gates
