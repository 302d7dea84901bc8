"""Fast Walsh-Hadamard transform over the hypercube.

The transform used here is the unnormalized +/-1 character sum

    F[y] = sum_x f[x] * (-1)^{popcount(x & y)}

so applying it twice multiplies by 2**k. It shows up twice in the package:
extracting parity coefficients of pseudo-Boolean phase functions, and
pricing all 2^(n-1) frame columns of the synthesis LP in one pass.
"""

from __future__ import annotations

import numpy as np


def fwht(values) -> np.ndarray:
    """Unnormalized Walsh-Hadamard transform of a length 2**k vector."""
    a = np.asarray(values, dtype=np.float64).copy()
    m = a.size
    if m == 0 or (m & (m - 1)) != 0:
        raise ValueError(f"length must be a power of two, got {m}")
    h = 1
    while h < m:
        a = a.reshape(-1, 2, h)
        s = a[:, 0, :] + a[:, 1, :]
        d = a[:, 0, :] - a[:, 1, :]
        a = np.stack([s, d], axis=1)
        h *= 2
    return a.reshape(m)


def ifwht(values) -> np.ndarray:
    """Inverse transform: fwht scaled by 1/2**k."""
    a = fwht(values)
    return a / a.size


def popcounts(upto: int) -> np.ndarray:
    """Vector of popcount(x) for x in [0, upto)."""
    x = np.arange(upto, dtype=np.uint64)
    counts = np.zeros(upto, dtype=np.int64)
    while x.any():
        counts += (x & 1).astype(np.int64)
        x >>= 1
    return counts
