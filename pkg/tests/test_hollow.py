import numpy as np
import pytest

from gzzforge.errors import DimensionError
from gzzforge.hollow import HollowSymmetric, pair_index, pairs
from gzzforge.walsh import fwht, ifwht, popcounts


def test_pair_index_matches_triu_order():
    for n in (2, 3, 5, 8):
        iu, ju = pairs(n)
        for k, (i, j) in enumerate(zip(iu, ju)):
            assert pair_index(n, int(i), int(j)) == k


def test_pair_index_rejects_bad_pairs():
    with pytest.raises(DimensionError):
        pair_index(4, 2, 2)
    with pytest.raises(DimensionError):
        pair_index(4, 3, 1)
    with pytest.raises(DimensionError):
        pair_index(4, 0, 4)


def test_dense_round_trip():
    rng = np.random.default_rng(7)
    for n in (1, 2, 4, 7):
        h = HollowSymmetric(n, rng.standard_normal(n * (n - 1) // 2))
        d = h.to_dense()
        assert np.array_equal(d, d.T)
        assert np.all(np.diag(d) == 0)
        assert HollowSymmetric.from_dense(d) == h


def test_from_dense_validates():
    with pytest.raises(DimensionError):
        HollowSymmetric.from_dense(np.array([[0.0, 1.0], [2.0, 0.0]]))
    with pytest.raises(DimensionError):
        HollowSymmetric.from_dense(np.array([[1.0, 2.0], [2.0, 0.0]]))
    with pytest.raises(DimensionError):
        HollowSymmetric.from_dense(np.zeros((2, 3)))


def test_entry_and_from_pairs():
    h = HollowSymmetric.from_pairs(4, {(0, 2): 1.5, (1, 3): -2.0})
    assert h.entry(0, 2) == 1.5
    assert h.entry(2, 0) == 1.5
    assert h.entry(1, 3) == -2.0
    assert h.entry(0, 1) == 0.0
    assert h.entry(2, 2) == 0.0


def test_arithmetic():
    a = HollowSymmetric(3, [1.0, 2.0, 3.0])
    b = HollowSymmetric(3, [0.5, -1.0, 0.0])
    assert (a + b).upper.tolist() == [1.5, 1.0, 3.0]
    assert (a - b).upper.tolist() == [0.5, 3.0, 3.0]
    assert (2 * a).upper.tolist() == [2.0, 4.0, 6.0]
    assert (-a).upper.tolist() == [-1.0, -2.0, -3.0]
    assert a.max_abs() == 3.0
    assert a.inner(b) == 0.5 - 2.0


def test_inner_matches_upper_dot_of_dense():
    rng = np.random.default_rng(3)
    for _ in range(5):
        a = HollowSymmetric(5, rng.standard_normal(10))
        b = HollowSymmetric(5, rng.standard_normal(10))
        full = float((a.to_dense() * b.to_dense()).sum())
        assert full == pytest.approx(2.0 * a.inner(b), rel=1e-12)


def test_json_round_trip():
    h = HollowSymmetric(3, [0.25, -1.0, 1e-7])
    assert HollowSymmetric.from_json(h.to_json()) == h


def test_upper_is_immutable():
    h = HollowSymmetric.zeros(3)
    with pytest.raises(ValueError):
        h.upper[0] = 1.0


def test_fwht_involution_and_parity():
    rng = np.random.default_rng(11)
    for k in (0, 1, 3, 6):
        f = rng.standard_normal(1 << k)
        assert np.allclose(ifwht(fwht(f)), f, atol=1e-12)
        # brute-force character sum
        F = fwht(f)
        for y in range(min(1 << k, 16)):
            ref = sum(
                f[x] * (-1) ** ((x & y).bit_count() & 1) for x in range(1 << k)
            )
            assert F[y] == pytest.approx(ref, abs=1e-9)


def test_fwht_rejects_bad_length():
    with pytest.raises(ValueError):
        fwht([1.0, 2.0, 3.0])


def test_popcounts():
    assert popcounts(8).tolist() == [0, 1, 1, 2, 1, 2, 2, 3]
