import math

import numpy as np
import pytest

from gzzforge.circuit import equal_up_to_global_phase, simulate_dense
from gzzforge.errors import DimensionError
from gzzforge.hollow import HollowSymmetric
from gzzforge.qftpass import build_Aj, qft_census, qft_compile, qft_reference
from gzzforge.solver import solve_lp

TWO_PI = 2.0 * math.pi


def plain_dft(n):
    dim = 1 << n
    grid = np.arange(dim)
    return np.exp(2j * np.pi * np.outer(grid, grid) / dim) / math.sqrt(dim)


class TestReference:
    def test_single_qubit_is_hadamard(self):
        expect = np.array([[1, 1], [1, -1]]) / math.sqrt(2)
        assert np.allclose(qft_reference(1), expect, atol=1e-15)

    def test_two_qubits_bit_reversed(self):
        # rows of the 4x4 DFT reordered 0,2,1,3
        w = 1j
        dft = np.array([[w ** (x * y) for x in range(4)] for y in range(4)]) / 2.0
        expect = dft[[0, 2, 1, 3]]
        assert np.allclose(qft_reference(2), expect, atol=1e-15)

    def test_unitary(self):
        for n in range(1, 11):
            mat = qft_reference(n)
            eye = np.eye(1 << n)
            assert np.max(np.abs(mat @ mat.conj().T - eye)) <= 1e-12

    def test_caps(self):
        with pytest.raises(DimensionError):
            qft_reference(0)
        with pytest.raises(DimensionError):
            qft_reference(11)


class TestBuildAj:
    def test_first_block_four_qubits(self):
        mat = build_Aj(4, 1).to_dense()
        assert mat.shape == (4, 4)
        assert np.allclose(mat[0], [0, 0, TWO_PI / 4, TWO_PI / 8])
        assert np.allclose(mat[1], [0, 0, TWO_PI / 2, TWO_PI / 4])

    def test_last_block_is_three_qubits(self):
        for n in range(3, 9):
            blk = build_Aj(n, n - 2)
            assert blk.n == 3
            assert blk.entry(0, 2) == TWO_PI / 4
            assert blk.entry(1, 2) == TWO_PI / 2

    def test_block_size(self):
        for n in range(3, 9):
            for j in range(1, n - 1):
                assert build_Aj(n, j).n == n - j + 1

    def test_index_validation(self):
        with pytest.raises(DimensionError):
            build_Aj(5, 0)
        with pytest.raises(DimensionError):
            build_Aj(5, 4)
        with pytest.raises(DimensionError):
            build_Aj(2, 1)


class TestCompile:
    def test_matches_reference(self):
        for n in range(1, 7):
            ref = qft_reference(n)
            got = simulate_dense(qft_compile(n))
            assert equal_up_to_global_phase(got, ref, 1e-9)

    def test_symbolic_form_matches_reference(self):
        for n in range(1, 7):
            got = simulate_dense(qft_compile(n, keep_gcrz=True))
            assert equal_up_to_global_phase(got, qft_reference(n), 1e-9)

    def test_with_swaps_gives_standard_order(self):
        for n in range(1, 7):
            got = simulate_dense(qft_compile(n, with_swaps=True))
            assert equal_up_to_global_phase(got, plain_dft(n), 1e-9)

    def test_swap_layer_is_three_cx_per_pair(self):
        for n in range(2, 7):
            extra = len(qft_compile(n, with_swaps=True).gates) - len(qft_compile(n).gates)
            assert extra == 3 * (n // 2)

    def test_single_qubit(self):
        c = qft_compile(1)
        assert [g.name for g in c.gates] == ["H"]

    def test_two_qubits(self):
        c = qft_compile(2)
        assert [g.name for g in c.gates] == ["H", "CS", "H"]
        assert c.gates[1].qubits == (0, 1)

    def test_census_counts(self):
        for n in range(1, 10):
            cen = qft_census(n)
            assert cen["cs"] == math.ceil((n - 1) / 2)
            assert cen["gcrz"] == (n - 1) // 2
            sym = qft_compile(n, keep_gcrz=True)
            assert sym.count("H") == cen["h"] == n
            assert sym.count("CS") == cen["cs"]
            assert sym.count("GCRZ") == cen["gcrz"]
            real = qft_compile(n)
            assert real.count("GZZ") == cen["gcrz"]
            assert real.count("CS") == cen["cs"]
            assert real.count("H") == n

    def test_five_qubit_census(self):
        c = qft_compile(5, keep_gcrz=True)
        assert c.count("CS") == 2
        assert c.count("GCRZ") == 2
        assert c.count("H") == 5

    def test_boundary_rz_zones(self):
        # corrections for finished qubit pairs sit at the end, the rest
        # lead the circuit; nothing else may cross the H/CS/GZZ core
        c = qft_compile(5)
        names = [g.name for g in c.gates]
        first_h = names.index("H")
        last_h = len(names) - 1 - names[::-1].index("H")
        head = c.gates[:first_h]
        tail = c.gates[last_h + 1:]
        assert all(g.name == "RZ" for g in head)
        assert all(g.name == "RZ" for g in tail)
        assert {g.qubits[0] for g in head} == {2, 3, 4}
        assert {g.qubits[0] for g in tail} == {0, 1, 2, 3}

    def test_rz_angles_are_dyadic(self):
        for n in range(2, 8):
            for g in qft_compile(n).gates:
                if g.name == "RZ":
                    scaled = g.angle.value / TWO_PI * (1 << (n + 2))
                    assert abs(scaled - round(scaled)) <= 1e-9

    def test_rejects_empty_register(self):
        with pytest.raises(DimensionError):
            qft_compile(0)


class TestSynthesisFeasibility:
    def test_lp_handles_small_entries(self):
        # the couplings inside the compiled blocks fall off as 2^-l yet
        # stay representable: reconstruction residual at machine level
        for n in (4, 7, 10):
            c = qft_compile(n)
            for g in c.gates:
                if g.name == "GZZ":
                    d = solve_lp(g.coupling)
                    resid = (d.reconstruct() - g.coupling).max_abs()
                    assert resid <= 1e-8
                    assert d.encoding_cost <= n * (n - 1) // 2
