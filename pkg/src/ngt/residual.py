"""Nonlinear functionals and the Doebner-Goldin residual.

If psi solves the linear Schrödinger equation, then psi' = N_{1,gamma}[psi]
solves

    i hbar d_t psi' = (-hbar^2/2m Lap + V) psi'
                      + hbar^2 gamma / 4m (i R2 + 2 R1 - 2 R4) psi'
                      - hbar^2 gamma^2 / 8m (2 R2 - R5) psi'
                      - hbar/2 * gamma_dot * ln(rho) psi'

where rho = |psi'|^2, j = (hbar/m) Im(conj(psi') grad psi'), and

    R1 = (m/hbar) grad(j) / rho        R2 = Lap(rho) / rho
    R4 = (m/hbar) j grad(rho) / rho^2   R5 = (grad rho)^2 / rho^2

``residual`` checks this on a Crank-Nicolson trajectory by comparing a
central time difference of psi' against the right-hand side.

Nodes with rho below floor_rel**2 * max(rho) (equivalently, amplitude below
floor_rel * max|psi|) are masked: the functionals read 0 there and the
logarithm is clamped.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Dict, Optional

import numpy as np

from .errors import GridMismatchError, TrajectoryTooShortError
from .gauge import _apply_field_unchecked
from .grid import DEFAULT_FLOOR_REL, ComplexField, RealField, _d1, _d2
from .schrodinger import PhysicalConstants, Potential, Trajectory

BOUNDARY_EXCLUDE = 3


@dataclass(frozen=True)
class GammaSchedule:
    """gamma(t) = gamma0 + gamma_rate * t."""
    gamma0: float = 0.0
    gamma_rate: float = 0.0

    def __post_init__(self):
        if not (np.isfinite(self.gamma0) and np.isfinite(self.gamma_rate)):
            raise ValueError("gamma schedule must be finite")

    def __call__(self, t):
        return self.gamma0 + self.gamma_rate * t

    def to_dict(self) -> dict:
        return {"gamma0": self.gamma0, "gamma_rate": self.gamma_rate}


def _density_mask(rho: np.ndarray, floor_rel: float) -> np.ndarray:
    return rho < floor_rel**2 * np.max(rho, axis=-1, keepdims=True)


def _safe_ratio(num, den, mask):
    return np.where(mask, 0.0, num / np.where(mask, 1.0, den))


def _check_pair(rho: RealField, j: RealField) -> None:
    if rho.grid != j.grid:
        raise GridMismatchError("rho and j must share a grid")


def r1(rho: RealField, j: RealField, constants: PhysicalConstants = PhysicalConstants(),
       floor_rel: float = DEFAULT_FLOOR_REL) -> RealField:
    _check_pair(rho, j)
    g = rho.grid
    mask = _density_mask(rho.values, floor_rel)
    val = constants.mass / constants.hbar * _safe_ratio(_d1(j.values, g.dx, g.periodic), rho.values, mask)
    return RealField(g, val, mask)


def r2(rho: RealField, floor_rel: float = DEFAULT_FLOOR_REL) -> RealField:
    g = rho.grid
    mask = _density_mask(rho.values, floor_rel)
    return RealField(g, _safe_ratio(_d2(rho.values, g.dx, g.periodic), rho.values, mask), mask)


def r4(rho: RealField, j: RealField, constants: PhysicalConstants = PhysicalConstants(),
       floor_rel: float = DEFAULT_FLOOR_REL) -> RealField:
    _check_pair(rho, j)
    g = rho.grid
    mask = _density_mask(rho.values, floor_rel)
    grad = _d1(rho.values, g.dx, g.periodic)
    val = constants.mass / constants.hbar * _safe_ratio(j.values * grad, rho.values**2, mask)
    return RealField(g, val, mask)


def r5(rho: RealField, floor_rel: float = DEFAULT_FLOOR_REL) -> RealField:
    g = rho.grid
    mask = _density_mask(rho.values, floor_rel)
    grad = _d1(rho.values, g.dx, g.periodic)
    return RealField(g, _safe_ratio(grad**2, rho.values**2, mask), mask)


def _rhs_values(psi: np.ndarray, Vx: np.ndarray, gamma, gamma_dot, dx: float, periodic: bool,
                constants: PhysicalConstants, floor_rel: float):
    """Right-hand side on arrays of shape (..., n); gamma may broadcast per row."""
    hbar, m = constants.hbar, constants.mass
    gamma = np.asarray(gamma, dtype=float)[..., None] if np.ndim(gamma) else gamma
    rho = np.abs(psi) ** 2
    mask = _density_mask(rho, floor_rel)
    dpsi = _d1(psi, dx, periodic)
    j = hbar / m * np.imag(np.conj(psi) * dpsi)
    grad_rho = _d1(rho, dx, periodic)
    R1 = m / hbar * _safe_ratio(_d1(j, dx, periodic), rho, mask)
    R2 = _safe_ratio(_d2(rho, dx, periodic), rho, mask)
    R4 = m / hbar * _safe_ratio(j * grad_rho, rho**2, mask)
    R5 = _safe_ratio(grad_rho**2, rho**2, mask)
    floor = floor_rel**2 * np.max(rho, axis=-1, keepdims=True)
    log_rho = np.log(np.maximum(rho, floor))

    linear = -hbar**2 / (2 * m) * _d2(psi, dx, periodic) + Vx * psi
    nonlinear = (hbar**2 * gamma / (4 * m) * (1j * R2 + 2 * R1 - 2 * R4)
                 - hbar**2 * gamma**2 / (8 * m) * (2 * R2 - R5)
                 - 0.5 * hbar * gamma_dot * log_rho)
    return linear + nonlinear * psi, mask


def dg_rhs(psi_t: ComplexField, V: Potential, gamma: float, gamma_dot: float,
           constants: PhysicalConstants = PhysicalConstants(),
           floor_rel: float = DEFAULT_FLOOR_REL) -> ComplexField:
    """Doebner-Goldin right-hand side evaluated on the transformed field.

    Masked (near-zero) nodes are flagged in the returned field's mask.
    """
    g = psi_t.grid
    vals, mask = _rhs_values(psi_t.values, V.values(g, constants), gamma, gamma_dot,
                             g.dx, g.periodic, constants, floor_rel)
    return ComplexField(g, vals, mask)


@dataclass
class ResidualReport:
    times: np.ndarray
    residual_l2: np.ndarray
    field_l2: np.ndarray
    masked_counts: np.ndarray
    boundary_excluded: int = BOUNDARY_EXCLUDE
    summary: Dict[str, Optional[float]] = field(default_factory=dict)

    @property
    def relative(self) -> np.ndarray:
        return self.residual_l2 / self.field_l2

    @property
    def max_relative_residual(self) -> float:
        return float(np.max(self.relative))

    def to_dict(self) -> dict:
        return {
            "times": self.times.tolist(),
            "residual_l2": self.residual_l2.tolist(),
            "field_l2": self.field_l2.tolist(),
            "masked_counts": self.masked_counts.tolist(),
            "boundary_excluded": self.boundary_excluded,
            "summary": dict(self.summary),
        }


def transformed_trajectory(traj: Trajectory, schedule: GammaSchedule,
                           floor_rel: float = DEFAULT_FLOOR_REL) -> np.ndarray:
    """psi'_k = N_{1, gamma(t_k)}[psi_k] for every saved state."""
    out = np.empty_like(traj.psi)
    for k, (t, row) in enumerate(zip(traj.times, traj.psi)):
        out[k] = _apply_field_unchecked(1.0, schedule(t), ComplexField(traj.grid, row), floor_rel).values
    return out


def residual(traj: Trajectory, V: Potential, schedule: GammaSchedule,
             constants: PhysicalConstants = PhysicalConstants(),
             floor_rel: float = DEFAULT_FLOOR_REL,
             transformed: Optional[np.ndarray] = None) -> ResidualReport:
    """Defect of the nonlinear equation on the gauge-transformed trajectory.

    Evaluated at every interior time with a central difference in t. The
    first and last ``BOUNDARY_EXCLUDE`` nodes and masked nodes are left out of
    the norms. ``transformed`` overrides the default psi' = N_{1,gamma(t)}[psi].
    """
    if len(traj) < 3:
        raise TrajectoryTooShortError("residual needs at least three saved states")
    g = traj.grid
    dt = traj.dt
    psi_t = transformed_trajectory(traj, schedule, floor_rel) if transformed is None else transformed
    mid = psi_t[1:-1]
    times = traj.times[1:-1]
    lhs = 1j * constants.hbar * (psi_t[2:] - psi_t[:-2]) / (2 * dt)
    rhs, mask = _rhs_values(mid, V.values(g, constants), schedule(times), schedule.gamma_rate,
                            g.dx, g.periodic, constants, floor_rel)
    keep = ~mask
    keep[:, :BOUNDARY_EXCLUDE] = False
    keep[:, -BOUNDARY_EXCLUDE:] = False
    res = np.where(keep, lhs - rhs, 0.0)
    est = np.where(keep, lhs, 0.0)
    res_l2 = np.sqrt(g.dx * np.sum(np.abs(res) ** 2, axis=-1))
    est_l2 = np.sqrt(g.dx * np.sum(np.abs(est) ** 2, axis=-1))
    report = ResidualReport(times, res_l2, est_l2, mask.sum(axis=-1))
    report.summary = {"max_relative_residual": report.max_relative_residual,
                      "refinement_ratio": None}
    return report


@dataclass
class RefinementStudy:
    reports: list
    n_points: list
    dts: list

    @property
    def max_relative(self) -> list:
        return [r.max_relative_residual for r in self.reports]

    @property
    def ratios(self) -> list:
        m = self.max_relative
        return [m[i] / m[i + 1] for i in range(len(m) - 1)]


def refinement_study(initial, V: Potential, schedule: GammaSchedule, n_points: int,
                     x_min: float, x_max: float, dt: float, steps: int,
                     constants: PhysicalConstants = PhysicalConstants(), levels: int = 2,
                     floor_rel: float = DEFAULT_FLOOR_REL) -> RefinementStudy:
    """Residuals on successively halved (dx, dt) over the same time span.

    ``initial`` maps a GridSpec to the starting ComplexField. Each level
    halves dx exactly (dirichlet node count n -> 2n - 1) and dt, doubling
    the step count.
    """
    from .grid import make_grid
    from .schrodinger import EvolutionConfig, evolve

    reports, ns, dts = [], [], []
    n, h, k = n_points, dt, steps
    for _ in range(levels):
        g = make_grid(n, x_min, x_max)
        traj = evolve(initial(g), V, EvolutionConfig(h, k, constants))
        rep = residual(traj, V, schedule, constants, floor_rel)
        reports.append(rep)
        ns.append(n)
        dts.append(h)
        n, h, k = 2 * n - 1, h / 2, 2 * k
    study = RefinementStudy(reports, ns, dts)
    for rep, ratio in zip(reports, study.ratios):
        rep.summary["refinement_ratio"] = ratio
    return study
