import math

import numpy as np
import pytest

from gzzforge.chempass import (
    dynamics_census,
    dynamics_circuit,
    givens_compile,
    givens_layer_compile,
    givens_reference,
    neighbor_pairs,
)
from gzzforge.circuit import equal_up_to_global_phase, simulate_dense
from gzzforge.errors import DimensionError
from gzzforge.hollow import HollowSymmetric


class TestReference:
    def test_structure(self):
        mat = givens_reference(0.3)
        assert mat[0, 0] == 1 and mat[3, 3] == 1
        assert mat[1, 1] == pytest.approx(math.cos(0.3))
        assert mat[1, 2] == pytest.approx(math.sin(0.3))
        assert mat[2, 1] == pytest.approx(-math.sin(0.3))

    def test_orthogonal(self):
        rng = np.random.default_rng(7)
        for phi in rng.uniform(-math.pi, math.pi, 10):
            mat = givens_reference(phi)
            assert np.allclose(mat @ mat.conj().T, np.eye(4), atol=1e-14)

    def test_composition(self):
        a, b = 0.4, 1.1
        assert np.allclose(
            givens_reference(a) @ givens_reference(b),
            givens_reference(a + b), atol=1e-14)


class TestGivensCompile:
    def test_random_angles(self):
        rng = np.random.default_rng(42)
        for phi in rng.uniform(-2 * math.pi, 2 * math.pi, 100):
            got = simulate_dense(givens_compile(phi))
            assert equal_up_to_global_phase(got, givens_reference(phi), 1e-12)

    def test_two_zz_gates(self):
        c = givens_compile(0.7)
        zzs = [g for g in c.gates if g.name == "ZZ"]
        assert len(zzs) == 2
        assert all(g.angle.value == -0.7 for g in zzs)

    def test_column_order(self):
        names = [g.name for g in givens_compile(1.0).gates]
        assert names == [
            "S", "S", "H", "SX", "SDG", "H", "H", "ZZ",
            "H", "H", "ZZ", "SXDG", "S", "H", "SDG", "SDG",
        ]

    def test_zero_angle_is_identity(self):
        got = simulate_dense(givens_compile(0.0))
        assert equal_up_to_global_phase(got, np.eye(4), 1e-12)


class TestGivensLayer:
    def test_rejects_odd_width(self):
        with pytest.raises(DimensionError):
            givens_layer_compile(0.5, 3)
        with pytest.raises(DimensionError):
            givens_layer_compile(0.5, 0)

    def test_two_qubits_reduce_to_single_rotation(self):
        rng = np.random.default_rng(3)
        for phi in rng.uniform(-math.pi, math.pi, 20):
            got = simulate_dense(givens_layer_compile(phi, 2))
            assert equal_up_to_global_phase(got, givens_reference(phi), 1e-12)

    def test_four_qubits_match_kron(self):
        rng = np.random.default_rng(4)
        for phi in rng.uniform(-math.pi, math.pi, 20):
            got = simulate_dense(givens_layer_compile(phi, 4))
            ref = np.kron(givens_reference(phi), givens_reference(phi))
            assert equal_up_to_global_phase(got, ref, 1e-10)

    def test_exactly_two_gzz(self):
        for n in (2, 4, 6):
            c = givens_layer_compile(0.9, n)
            assert c.count("GZZ") == 2

    def test_gzz_coupling_is_half_angle_on_pairs(self):
        c = givens_layer_compile(0.9, 6)
        for g in c.gates:
            if g.name == "GZZ":
                assert g.coupling.entry(0, 1) == pytest.approx(0.45)
                assert g.coupling.entry(2, 3) == pytest.approx(0.45)
                assert g.coupling.entry(4, 5) == pytest.approx(0.45)
                assert g.coupling.entry(0, 2) == 0.0

    def test_neighbor_pairs_validation(self):
        with pytest.raises(DimensionError):
            neighbor_pairs(5)
        pairs = neighbor_pairs(4)
        assert pairs.entry(0, 1) == 1.0 and pairs.entry(2, 3) == 1.0
        assert pairs.entry(1, 2) == 0.0


def gzz_dense(A):
    n = A.n
    dim = 1 << n
    idx = np.arange(dim)
    phases = np.zeros(dim)
    for i in range(n):
        for j in range(i + 1, n):
            v = A.entry(i, j)
            if v:
                bi = (idx >> (n - 1 - i)) & 1
                bj = (idx >> (n - 1 - j)) & 1
                phases = phases + v * (-1.0) ** (bi + bj)
    return np.diag(np.exp(1j * phases))


def rz_layer_dense(theta0, theta1, n):
    dim = 1 << n
    idx = np.arange(dim)
    phases = np.zeros(dim)
    for q in range(n):
        bit = (idx >> (n - 1 - q)) & 1
        phases = phases + (theta0 if q % 2 == 0 else theta1) * bit
    return np.diag(np.exp(1j * phases))


class TestDynamics:
    def test_census_m3_n4(self):
        A = [HollowSymmetric.from_pairs(4, {(0, 2): 0.3}),
             HollowSymmetric.from_pairs(4, {(1, 3): 0.2})]
        c = dynamics_circuit(3, A, [0.1, 0.2, 0.3, 0.4], 0.5, 0.6, 4)
        cen = dynamics_census(3, 4)
        assert cen == {"gzz_pair_layers": 8, "gzz_couplings": 2, "rz": 4}
        assert c.count("GZZ") == 10
        assert c.count("RZ") == 4

    def test_single_layer_has_no_coupling_gzz(self):
        c = dynamics_circuit(1, [], [0.3, 0.4], 0.0, 0.0, 4)
        assert c.count("GZZ") == 4
        assert dynamics_census(1, 4)["gzz_couplings"] == 0

    def test_length_validation(self):
        with pytest.raises(DimensionError):
            dynamics_circuit(2, [], [0.1, 0.2, 0.3], 0.0, 0.0, 4)
        with pytest.raises(DimensionError):
            dynamics_circuit(2, [HollowSymmetric.zeros(4)], [0.1, 0.2], 0.0, 0.0, 4)
        with pytest.raises(DimensionError):
            dynamics_circuit(2, [HollowSymmetric.zeros(6)],
                             [0.1, 0.2, 0.3], 0.0, 0.0, 4)
        with pytest.raises(DimensionError):
            dynamics_circuit(0, [], [0.1], 0.0, 0.0, 4)

    def test_all_zero_parameters_give_identity(self):
        c = dynamics_circuit(2, [HollowSymmetric.zeros(2)], [0.0, 0.0, 0.0],
                             0.0, 0.0, 2)
        got = simulate_dense(c)
        assert equal_up_to_global_phase(got, np.eye(4), 1e-10)

    def test_theta_alternation(self):
        c = dynamics_circuit(1, [], [0.0, 0.0], 0.25, 0.75, 4)
        angles = {g.qubits[0]: g.angle.value for g in c.gates if g.name == "RZ"}
        assert angles == {0: 0.25, 1: 0.75, 2: 0.25, 3: 0.75}

    def test_dense_against_matrix_product(self):
        rng = np.random.default_rng(11)
        for n in (2, 4):
            pair_kron = lambda phi: givens_reference(phi) if n == 2 else np.kron(
                givens_reference(phi), givens_reference(phi))
            for _ in range(5):
                phis = rng.uniform(-1, 1, 3)
                t0, t1 = rng.uniform(-1, 1, 2)
                upper = np.triu(rng.uniform(-1, 1, (n, n)), 1)
                A = HollowSymmetric.from_dense(upper + upper.T)
                c = dynamics_circuit(2, [A], list(phis), t0, t1, n)
                expect = (pair_kron(phis[2]) @ gzz_dense(A) @ pair_kron(phis[1])
                          @ rz_layer_dense(t0, t1, n) @ pair_kron(phis[0]))
                assert equal_up_to_global_phase(simulate_dense(c), expect, 1e-10)
