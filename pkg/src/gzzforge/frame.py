"""The encoding frame: sign vectors m and their outer products m m^T.

Conjugating a fixed Ising evolution by a layer of X gates flips the signs
of the couplings on the flipped qubits, so the reachable coupling
directions are exactly the outer products m m^T (diagonal dropped) of sign
vectors m in {-1,+1}^n. Since m and -m give the same product, the last
entry is pinned to +1 and each encoding is keyed by the (n-1)-bit integer
whose bit k records a minus sign on qubit k. The 2^(n-1) distinct products
form a balanced tight frame on hollow symmetric matrices; `gram_entry` and
`frame_bound_check` are the numeric oracles for that structure.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DimensionError
from .hollow import HollowSymmetric, pairs


@dataclass(frozen=True)
class Encoding:
    n: int
    index: int

    def __post_init__(self):
        if self.n < 2:
            raise DimensionError(f"encodings need n >= 2, got {self.n}")
        if not 0 <= self.index < 1 << (self.n - 1):
            raise DimensionError(
                f"index {self.index} out of range for n={self.n}"
            )

    @property
    def signs(self) -> np.ndarray:
        """Sign vector in {-1,+1}^n with the last entry +1."""
        bits = (self.index >> np.arange(self.n)) & 1
        return (1 - 2 * bits).astype(np.int64)

    def flips(self) -> int:
        """The index read as an X-layer bit mask (bit k flips qubit k)."""
        return self.index


def frame_columns(n: int) -> list[Encoding]:
    """All 2^(n-1) canonical encodings, in index order."""
    if n < 2:
        raise DimensionError(f"frame needs n >= 2, got {n}")
    return [Encoding(n, k) for k in range(1 << (n - 1))]


def sign_matrix(n: int) -> np.ndarray:
    """(2^(n-1), n) matrix whose rows are the canonical sign vectors."""
    idx = np.arange(1 << (n - 1), dtype=np.int64)
    bits = (idx[:, None] >> np.arange(n)[None, :]) & 1
    return 1 - 2 * bits


def outer_product(m: Encoding) -> HollowSymmetric:
    """m m^T with the diagonal zeroed; entries are +/-1."""
    s = m.signs
    iu, ju = pairs(m.n)
    return HollowSymmetric(m.n, (s[iu] * s[ju]).astype(np.float64))


def gram_entry(m: Encoding, mprime: Encoding) -> int:
    """Inner product of two frame columns over strict upper triangles.

    Closed form n(n-1)/2 - 2*d*(n-d) where d is the Hamming distance of
    the underlying bit patterns; equals the brute-force sum
    sum_{i<j} m_i m_j m'_i m'_j.
    """
    if m.n != mprime.n:
        raise DimensionError(f"size mismatch: {m.n} vs {mprime.n}")
    n = m.n
    d = (m.index ^ mprime.index).bit_count()
    return n * (n - 1) // 2 - 2 * d * (n - d)


@dataclass(frozen=True)
class FrameReport:
    n: int
    samples: int
    frame_constant: float
    frame_constant_full: float
    spread: float
    balanced: bool


def frame_bound_check(n: int, samples: int, *, rng=None) -> FrameReport:
    """Empirically verify tightness and balance of the encoding frame.

    For random unit-norm M (upper-triangle 2-norm) the sum of squared frame
    coefficients sum_m <M, m m^T>^2 should be the constant 2^(n-1),
    independent of M. Under the full-matrix Frobenius inner product every
    coefficient doubles and the norm gains a factor sqrt(2), so the
    constant becomes 2^n; both conventions are reported. Balance means the
    columns sum to the zero matrix, checked in exact integers.
    """
    if not 2 <= n <= 12:
        raise DimensionError(f"frame_bound_check supports n in [2, 12], got {n}")
    if rng is None:
        rng = np.random.default_rng(0)
    signs = sign_matrix(n)
    iu, ju = pairs(n)
    columns = signs[:, iu] * signs[:, ju]

    balanced = bool((columns.sum(axis=0) == 0).all())

    target = float(1 << (n - 1))
    constants = np.empty(samples)
    for k in range(samples):
        u = rng.standard_normal(iu.size)
        u /= np.linalg.norm(u)
        constants[k] = float(((columns @ u) ** 2).sum())
    mean = float(constants.mean()) if samples else target
    spread = float(np.abs(constants - target).max()) if samples else 0.0
    return FrameReport(
        n=n,
        samples=samples,
        frame_constant=mean,
        frame_constant_full=2.0 * mean,
        spread=spread,
        balanced=balanced,
    )
