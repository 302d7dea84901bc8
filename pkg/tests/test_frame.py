import numpy as np
import pytest

from gzzforge.errors import DimensionError
from gzzforge.frame import (
    Encoding,
    frame_bound_check,
    frame_columns,
    gram_entry,
    outer_product,
    sign_matrix,
)
from gzzforge.hollow import pairs


def brute_gram(a: Encoding, b: Encoding) -> int:
    sa, sb = a.signs, b.signs
    iu, ju = pairs(a.n)
    return int(np.sum(sa[iu] * sa[ju] * sb[iu] * sb[ju]))


def test_outer_product_examples():
    assert outer_product(Encoding(2, 0)).upper.tolist() == [1.0]
    # signs (-1, +1, +1): pair products for (0,1), (0,2), (1,2)
    assert outer_product(Encoding(3, 1)).upper.tolist() == [-1.0, -1.0, 1.0]


def test_outer_product_sign_symmetry():
    iu, ju = pairs(4)
    for index in range(8):
        m = Encoding(4, index)
        s = -m.signs
        assert np.array_equal(outer_product(m).upper, (s[iu] * s[ju]).astype(float))


def test_frame_columns_counts_and_order():
    assert len(frame_columns(2)) == 2
    cols = frame_columns(3)
    assert [tuple(c.signs) for c in cols] == [
        (1, 1, 1),
        (-1, 1, 1),
        (1, -1, 1),
        (-1, -1, 1),
    ]
    assert len(frame_columns(13)) == 4096


def test_frame_columns_rejects_small_n():
    with pytest.raises(DimensionError):
        frame_columns(1)


def test_encoding_validation():
    with pytest.raises(DimensionError):
        Encoding(3, 4)
    with pytest.raises(DimensionError):
        Encoding(3, -1)


def test_last_sign_always_plus():
    for n in (2, 3, 5):
        for c in frame_columns(n):
            assert c.signs[-1] == 1


def test_no_duplicates_and_injective():
    for n in (3, 4, 5):
        cols = frame_columns(n)
        assert len({c.index for c in cols}) == len(cols)
        uppers = {tuple(outer_product(c).upper) for c in cols}
        assert len(uppers) == len(cols)


def test_gram_entry_examples():
    for n in (3, 4, 6):
        m = Encoding(n, 0)
        assert gram_entry(m, m) == n * (n - 1) // 2
    # n=4, distance 1
    assert gram_entry(Encoding(4, 0), Encoding(4, 1)) == 0


def test_gram_entry_matches_brute_force():
    rng = np.random.default_rng(42)
    for n in range(2, 11):
        hi = 1 << (n - 1)
        for _ in range(1000):
            a = Encoding(n, int(rng.integers(hi)))
            b = Encoding(n, int(rng.integers(hi)))
            assert gram_entry(a, b) == brute_gram(a, b)


def test_gram_entry_rejects_mismatched_n():
    with pytest.raises(DimensionError):
        gram_entry(Encoding(3, 0), Encoding(4, 0))


def test_balanced_exact():
    for n in range(2, 13):
        signs = sign_matrix(n)
        iu, ju = pairs(n)
        sums = (signs[:, iu] * signs[:, ju]).sum(axis=0)
        assert np.array_equal(sums, np.zeros(iu.size, dtype=np.int64))


def test_frame_constant_hand_case_n2():
    report = frame_bound_check(2, 10, rng=np.random.default_rng(0))
    assert report.frame_constant == pytest.approx(2.0, abs=1e-12)
    assert report.frame_constant_full == pytest.approx(4.0, abs=1e-12)
    assert report.balanced


def test_frame_constant_stable():
    for n in (3, 5, 8):
        report = frame_bound_check(n, 50, rng=np.random.default_rng(n))
        assert report.spread <= 1e-9
        assert report.frame_constant == pytest.approx(float(1 << (n - 1)), abs=1e-9)
        assert report.balanced


def test_frame_bound_check_rejects_out_of_range():
    with pytest.raises(DimensionError):
        frame_bound_check(13, 1)
