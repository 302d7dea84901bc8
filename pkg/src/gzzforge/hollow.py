"""Hollow symmetric matrices stored as strict upper triangles.

Every coupling-like object in the package (targets A, device couplings J,
Hadamard quotients M, the QFT blocks, the next-neighbor chain) lives in the
space of real symmetric matrices with vanishing diagonal. The LP and MIP
operate directly on the n(n-1)/2 upper-triangle vector, so that vector is
the canonical storage; dense views are materialized only on demand.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DimensionError


def pair_index(n: int, i: int, j: int) -> int:
    """Position of the (i, j) entry, i < j both 0-based, in row-major
    strict-upper order. Matches np.triu_indices(n, 1)."""
    if not 0 <= i < j < n:
        raise DimensionError(f"need 0 <= i < j < n, got i={i}, j={j}, n={n}")
    return i * n - i * (i + 1) // 2 + (j - i - 1)


def pairs(n: int):
    """Row and column index arrays of the strict upper triangle."""
    return np.triu_indices(n, 1)


@dataclass(frozen=True, eq=False)
class HollowSymmetric:
    n: int
    upper: np.ndarray

    def __post_init__(self):
        arr = np.asarray(self.upper, dtype=np.float64)
        expected = self.n * (self.n - 1) // 2
        if self.n < 1:
            raise DimensionError(f"n must be >= 1, got {self.n}")
        if arr.ndim != 1 or arr.size != expected:
            raise DimensionError(
                f"upper triangle of an n={self.n} matrix has {expected} entries, "
                f"got shape {arr.shape}"
            )
        arr = arr.copy()
        arr.setflags(write=False)
        object.__setattr__(self, "upper", arr)

    @classmethod
    def zeros(cls, n: int) -> "HollowSymmetric":
        return cls(n, np.zeros(n * (n - 1) // 2))

    @classmethod
    def from_dense(cls, mat, *, tol: float = 1e-9) -> "HollowSymmetric":
        """Build from a full matrix, verifying symmetry and zero diagonal."""
        m = np.asarray(mat, dtype=np.float64)
        if m.ndim != 2 or m.shape[0] != m.shape[1]:
            raise DimensionError(f"expected a square matrix, got shape {m.shape}")
        scale = max(1.0, float(np.abs(m).max()) if m.size else 1.0)
        if np.abs(m - m.T).max(initial=0.0) > tol * scale:
            raise DimensionError("matrix is not symmetric")
        if np.abs(np.diag(m)).max(initial=0.0) > tol * scale:
            raise DimensionError("matrix diagonal is not zero")
        iu, ju = pairs(m.shape[0])
        return cls(m.shape[0], m[iu, ju])

    @classmethod
    def from_pairs(cls, n: int, entries) -> "HollowSymmetric":
        """Build from {(i, j): value} with 0-based i < j."""
        upper = np.zeros(n * (n - 1) // 2)
        for (i, j), value in dict(entries).items():
            upper[pair_index(n, i, j)] = value
        return cls(n, upper)

    def to_dense(self) -> np.ndarray:
        out = np.zeros((self.n, self.n))
        iu, ju = pairs(self.n)
        out[iu, ju] = self.upper
        out[ju, iu] = self.upper
        return out

    def entry(self, i: int, j: int) -> float:
        if i == j:
            return 0.0
        if i > j:
            i, j = j, i
        return float(self.upper[pair_index(self.n, i, j)])

    def inner(self, other: "HollowSymmetric") -> float:
        """Inner product over the strict upper triangle (each pair once)."""
        if other.n != self.n:
            raise DimensionError(f"size mismatch: {self.n} vs {other.n}")
        return float(self.upper @ other.upper)

    def max_abs(self) -> float:
        return float(np.abs(self.upper).max(initial=0.0))

    def __add__(self, other: "HollowSymmetric") -> "HollowSymmetric":
        if not isinstance(other, HollowSymmetric):
            return NotImplemented
        if other.n != self.n:
            raise DimensionError(f"size mismatch: {self.n} vs {other.n}")
        return HollowSymmetric(self.n, self.upper + other.upper)

    def __sub__(self, other: "HollowSymmetric") -> "HollowSymmetric":
        if not isinstance(other, HollowSymmetric):
            return NotImplemented
        if other.n != self.n:
            raise DimensionError(f"size mismatch: {self.n} vs {other.n}")
        return HollowSymmetric(self.n, self.upper - other.upper)

    def __mul__(self, scalar) -> "HollowSymmetric":
        return HollowSymmetric(self.n, self.upper * float(scalar))

    __rmul__ = __mul__

    def __neg__(self) -> "HollowSymmetric":
        return HollowSymmetric(self.n, -self.upper)

    def __eq__(self, other) -> bool:
        if not isinstance(other, HollowSymmetric):
            return NotImplemented
        return self.n == other.n and np.array_equal(self.upper, other.upper)

    def __repr__(self) -> str:
        return f"HollowSymmetric(n={self.n}, upper={self.upper.tolist()!r})"

    def to_json(self) -> dict:
        return {"n": self.n, "upper": [float(v) for v in self.upper]}

    @classmethod
    def from_json(cls, obj: dict) -> "HollowSymmetric":
        return cls(int(obj["n"]), np.asarray(obj["upper"], dtype=np.float64))
