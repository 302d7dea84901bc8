"""Ion-trap coupling matrices from first principles.

A linear chain in a harmonic axial trap equilibrates where Coulomb repulsion
balances the confinement. The qubit-qubit coupling is the inverse Hessian of
the total potential at that equilibrium, scaled by the magnetic gradient, and
masked so magnetically insensitive qubits (m_F = 0) decouple.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass

import numpy as np

from .errors import ConvergenceError
from .hollow import HollowSymmetric

HBAR = 1.054571817e-34          # J s
COULOMB_K = 8.9875517923e9      # N m^2 / C^2
ELEMENTARY_CHARGE = 1.602176634e-19
ATOMIC_MASS = 1.66053906660e-27
BOHR_MAGNETON = 9.2740100783e-24
F0_YB171 = 12.642812118466e9    # Hz, clock transition

CouplingMatrix = HollowSymmetric

NEWTON_TOL = 1e-12
NEWTON_MAX_STEPS = 200


@dataclass(frozen=True)
class TrapParams:
    N: int
    mass: float
    charge: float
    omega_z: float
    B1: float
    mu: float
    mF: tuple[int, ...]
    rabi: float | None = None   # metadata only; not used in J

    def __post_init__(self):
        object.__setattr__(self, "mF", tuple(int(v) for v in self.mF))
        if self.N < 1:
            raise ValueError("need at least one ion")
        if self.omega_z <= 0 or self.mass <= 0 or self.charge <= 0:
            raise ValueError("mass, charge and omega_z must be positive")
        if self.B1 < 0:
            raise ValueError("B1 must be nonnegative")
        if len(self.mF) != self.N:
            raise ValueError(f"need {self.N} mF values, got {len(self.mF)}")
        if any(v not in (-1, 0, 1) for v in self.mF):
            raise ValueError("mF values must lie in {-1, 0, +1}")

    @property
    def length_scale(self) -> float:
        """Characteristic spacing (K q^2 / (M omega_z^2))^(1/3) in meters."""
        return (COULOMB_K * self.charge ** 2
                / (self.mass * self.omega_z ** 2)) ** (1.0 / 3.0)

    @classmethod
    def preset(cls, name: str, N: int = 10) -> "TrapParams":
        if name == "yb171-paper":
            return cls(
                N=N,
                mass=171 * ATOMIC_MASS,
                charge=ELEMENTARY_CHARGE,
                omega_z=2 * math.pi * 100e3,
                B1=100.0,
                mu=BOHR_MAGNETON,
                mF=(1,) * N,
                rabi=2 * math.pi * 100e3,
            )
        raise ValueError(f"unknown preset {name!r}")

    def to_json(self) -> str:
        return json.dumps({
            "N": self.N, "mass": self.mass, "charge": self.charge,
            "omega_z": self.omega_z, "B1": self.B1, "mu": self.mu,
            "mF": list(self.mF), "rabi": self.rabi,
        }, indent=2)

    @classmethod
    def from_json(cls, text: str) -> "TrapParams":
        data = json.loads(text)
        return cls(N=int(data["N"]), mass=data["mass"], charge=data["charge"],
                   omega_z=data["omega_z"], B1=data["B1"], mu=data["mu"],
                   mF=tuple(data["mF"]), rabi=data.get("rabi"))


def _scaled_gradient(u: np.ndarray) -> np.ndarray:
    d = u[:, None] - u[None, :]
    np.fill_diagonal(d, 1.0)
    f = d / np.abs(d) ** 3
    np.fill_diagonal(f, 0.0)
    return u - np.sum(f, axis=1)


def _scaled_potential(u: np.ndarray) -> float:
    d = np.abs(u[:, None] - u[None, :])
    iu = np.triu_indices(len(u), 1)
    return float(0.5 * np.sum(u ** 2) + np.sum(1.0 / d[iu]))


def _scaled_hessian(u: np.ndarray) -> np.ndarray:
    d = u[:, None] - u[None, :]
    np.fill_diagonal(d, np.inf)
    cubed = 2.0 / np.abs(d) ** 3
    H = -cubed
    np.fill_diagonal(H, 1.0 + np.sum(cubed, axis=1))
    return H


def equilibrium_positions(p: TrapParams) -> np.ndarray:
    """Axial equilibrium positions in meters, strictly increasing."""
    n = p.N
    if n == 1:
        return np.zeros(1)
    u = np.linspace(-n / 4.0, n / 4.0, n)
    for _ in range(NEWTON_MAX_STEPS):
        g = _scaled_gradient(u)
        if np.max(np.abs(g)) < NEWTON_TOL:
            return u * p.length_scale
        step = np.linalg.solve(_scaled_hessian(u), -g)
        t = 1.0
        v0 = _scaled_potential(u)
        for _ in range(60):
            cand = u + t * step
            if np.all(np.diff(cand) > 0) and _scaled_potential(cand) <= v0:
                break
            t *= 0.5
        else:
            raise ConvergenceError("equilibrium line search stalled")
        u = u + t * step
    raise ConvergenceError(
        f"equilibrium Newton did not reach {NEWTON_TOL} in "
        f"{NEWTON_MAX_STEPS} steps")


def hessian(p: TrapParams, zbar: np.ndarray) -> np.ndarray:
    """Potential curvature at the equilibrium, SI units (J/m^2)."""
    u = np.asarray(zbar, float) / p.length_scale
    H = p.mass * p.omega_z ** 2 * _scaled_hessian(u)
    eigs = np.linalg.eigvalsh(H)
    if np.min(eigs) <= 0:
        raise ValueError("Hessian is not positive definite; "
                         "unstable equilibrium")
    return H


def coupling_matrix(p: TrapParams) -> CouplingMatrix:
    """Qubit-qubit coupling J in rad/s.

    J = (1/hbar)(mu B1 / 2)^2 H_V^{-1} with the diagonal zeroed, then
    projected on the magnetically sensitive qubits via the m_F outer mask.
    """
    zbar = equilibrium_positions(p)
    H = hessian(p, zbar)
    J = (1.0 / HBAR) * (p.mu * p.B1 / 2.0) ** 2 * np.linalg.inv(H)
    np.fill_diagonal(J, 0.0)
    mask = np.outer(p.mF, p.mF).astype(float)
    return HollowSymmetric.from_dense(J * mask)


def transition_frequency(mF_i: int, B: float, *, f0: float = F0_YB171,
                         mu: float = BOHR_MAGNETON) -> float:
    """First-order Zeeman-shifted transition frequency, rad/s."""
    if mF_i not in (-1, 0, 1):
        raise ValueError("mF must lie in {-1, 0, +1}")
    if B < 0:
        raise ValueError("field must be nonnegative")
    return 2 * math.pi * f0 + mF_i * mu * B / HBAR
