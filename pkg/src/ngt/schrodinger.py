"""Crank-Nicolson evolution of the linear 1D Schrödinger equation.

The propagator matrix uses the three-point Laplacian with zero ghost values
beyond a dirichlet grid (or cyclic wrap on a periodic grid), so the packet
must stay well away from the box edges. ``apply_hamiltonian`` evaluates H on
a field with the module-wide stencils from ``ngt.grid``; it matches the
propagator's H at every interior node.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import List, Optional

import numpy as np
import scipy.sparse as sparse
from scipy.sparse.linalg import splu

from .errors import GridMismatchError, InvalidParamsError
from .grid import ComplexField, GridSpec, RealField, _d1, _d2


@dataclass(frozen=True)
class PhysicalConstants:
    hbar: float = 1.0
    mass: float = 1.0

    def __post_init__(self):
        if not (self.hbar > 0 and self.mass > 0):
            raise InvalidParamsError("hbar and mass must be positive")

    def to_dict(self) -> dict:
        return {"hbar": self.hbar, "mass": self.mass}


@dataclass(frozen=True, eq=False)
class Potential:
    kind: str = "free"
    omega: float = 0.0
    table: Optional[RealField] = None

    def __post_init__(self):
        if self.kind not in ("free", "harmonic", "tabulated"):
            raise InvalidParamsError(f"unknown potential kind {self.kind!r}")
        if self.kind == "harmonic" and not self.omega > 0:
            raise InvalidParamsError("harmonic potential needs omega > 0")
        if self.kind == "tabulated" and self.table is None:
            raise InvalidParamsError("tabulated potential needs a RealField table")

    @classmethod
    def free(cls) -> "Potential":
        return cls("free")

    @classmethod
    def harmonic(cls, omega: float = 1.0) -> "Potential":
        return cls("harmonic", omega=omega)

    @classmethod
    def tabulated(cls, table: RealField) -> "Potential":
        return cls("tabulated", table=table)

    def values(self, grid: GridSpec, constants: PhysicalConstants = PhysicalConstants()) -> np.ndarray:
        if self.kind == "free":
            return np.zeros(grid.n_points)
        if self.kind == "harmonic":
            return 0.5 * constants.mass * self.omega**2 * grid.x**2
        if self.table.grid != grid:
            raise GridMismatchError("tabulated potential lives on a different grid")
        return np.asarray(self.table.values)

    def to_dict(self) -> dict:
        d = {"kind": self.kind}
        if self.kind == "harmonic":
            d["omega"] = self.omega
        elif self.kind == "tabulated":
            d["values"] = [float(v) for v in self.table.values]
        return d


@dataclass(frozen=True)
class EvolutionConfig:
    dt: float
    steps: int
    constants: PhysicalConstants = PhysicalConstants()

    def __post_init__(self):
        if not self.dt > 0:
            raise InvalidParamsError("dt must be positive")
        if int(self.steps) != self.steps or self.steps < 0:
            raise InvalidParamsError("steps must be a nonnegative integer")


@dataclass(frozen=True, eq=False)
class Trajectory:
    """Dense record of an evolution; ``psi[k]`` is the state at ``times[k]``."""
    grid: GridSpec
    times: np.ndarray
    psi: np.ndarray

    def __post_init__(self):
        if self.psi.shape != (len(self.times), self.grid.n_points):
            raise GridMismatchError("trajectory array shape does not match times/grid")

    @property
    def dt(self) -> float:
        return float(self.times[1] - self.times[0]) if len(self.times) > 1 else 0.0

    @property
    def states(self) -> List[ComplexField]:
        return [ComplexField(self.grid, row) for row in self.psi]

    def __len__(self) -> int:
        return len(self.times)


def hamiltonian_matrix(grid: GridSpec, V: Potential,
                       constants: PhysicalConstants = PhysicalConstants()) -> sparse.csc_matrix:
    n = grid.n_points
    kin = constants.hbar**2 / (2 * constants.mass * grid.dx**2)
    H = sparse.diags([np.full(n - 1, -kin), 2 * kin + V.values(grid, constants), np.full(n - 1, -kin)],
                     [-1, 0, 1], format="lil", dtype=complex)
    if grid.periodic:
        H[0, n - 1] = -kin
        H[n - 1, 0] = -kin
    return H.tocsc()


def apply_hamiltonian(psi: ComplexField, V: Potential,
                      constants: PhysicalConstants = PhysicalConstants()) -> ComplexField:
    g = psi.grid
    v = psi.values
    Hv = -constants.hbar**2 / (2 * constants.mass) * _d2(v, g.dx, g.periodic) + V.values(g, constants) * v
    return psi.with_values(Hv)


class CrankNicolson:
    """Factorized propagator (I + i dt H / 2 hbar)^-1 (I - i dt H / 2 hbar)."""

    def __init__(self, grid: GridSpec, V: Potential, cfg: EvolutionConfig):
        self.grid = grid
        H = hamiltonian_matrix(grid, V, cfg.constants)
        a = 0.5j * cfg.dt / cfg.constants.hbar
        eye = sparse.identity(grid.n_points, dtype=complex, format="csc")
        self._lhs = splu((eye + a * H).tocsc())
        self._rhs = (eye - a * H).tocsr()

    def step(self, v: np.ndarray) -> np.ndarray:
        out = self._lhs.solve(self._rhs @ v)
        if not np.all(np.isfinite(out)):
            raise FloatingPointError("Crank-Nicolson solve produced non-finite values")
        return out


def cn_step(psi: ComplexField, V: Potential, cfg: EvolutionConfig) -> ComplexField:
    return psi.with_values(CrankNicolson(psi.grid, V, cfg).step(psi.values))


def evolve(psi0: ComplexField, V: Potential, cfg: EvolutionConfig) -> Trajectory:
    prop = CrankNicolson(psi0.grid, V, cfg)
    out = np.empty((cfg.steps + 1, psi0.grid.n_points), dtype=complex)
    out[0] = psi0.values
    for k in range(cfg.steps):
        out[k + 1] = prop.step(out[k])
    times = cfg.dt * np.arange(cfg.steps + 1)
    return Trajectory(psi0.grid, times, out)


def probability_density(psi: ComplexField) -> RealField:
    v = psi.values
    return RealField(psi.grid, v.real**2 + v.imag**2)


def current_density(psi: ComplexField,
                    constants: PhysicalConstants = PhysicalConstants()) -> RealField:
    g = psi.grid
    v = psi.values
    return RealField(g, constants.hbar / constants.mass * np.imag(np.conj(v) * _d1(v, g.dx, g.periodic)))


def position_variance(psi: ComplexField) -> float:
    rho = np.abs(psi.values) ** 2
    x = psi.grid.x
    norm = rho.sum()
    mean = (x * rho).sum() / norm
    return float(((x - mean) ** 2 * rho).sum() / norm)


def phase_rate(traj: Trajectory, reference: Optional[ComplexField] = None) -> float:
    """Least-squares slope of the unwrapped phase of <reference|psi(t)>."""
    ref = traj.psi[0] if reference is None else reference.values
    overlap = traj.psi @ np.conj(ref)
    phase = np.unwrap(np.angle(overlap))
    slope, _ = np.polyfit(traj.times, phase, 1)
    return float(slope)
