"""Gauge transformations of projectors and density matrices.

Entry (i, j) of a transformed matrix is

    rho[i, j] * exp((lam - 1) * 1j * Arg rho[i, j]
                    + 0.5j * gamma_c * ln(rho[i, i] / rho[j, j]))

with Arg the principal branch. Both exponent terms vanish on the diagonal,
so position densities are untouched for every (lam, gamma_c). A nonzero
imaginary part of gamma_c breaks Hermiticity.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .errors import (BadWeightsError, GridMismatchError, InvalidParamsError,
                     NonPositiveDiagonalError)
from .gauge import GaugeParams, apply_field
from .grid import DEFAULT_FLOOR_REL, ComplexField, GridSpec, principal_arg


@dataclass(frozen=True)
class ComplexGaugeParams:
    lam: float
    gamma_c: complex = 0j

    def __post_init__(self):
        lam, g = float(self.lam), complex(self.gamma_c)
        if lam == 0:
            raise InvalidParamsError("lambda must be nonzero")
        if not (np.isfinite(lam) and np.isfinite(g)):
            raise InvalidParamsError("parameters must be finite")
        object.__setattr__(self, "lam", lam)
        object.__setattr__(self, "gamma_c", g)

    @classmethod
    def from_real(cls, p: GaugeParams) -> "ComplexGaugeParams":
        return cls(p.lam, complex(p.gamma))


@dataclass(frozen=True, eq=False)
class DensityMatrix:
    grid: GridSpec
    values: np.ndarray
    mask: Optional[np.ndarray] = field(default=None, repr=False)

    def __post_init__(self):
        v = np.asarray(self.values, dtype=complex)
        n = self.grid.n_points
        if v.shape != (n, n):
            raise GridMismatchError(f"density matrix shape {v.shape} does not match grid ({n}, {n})")
        if not np.all(np.isfinite(v)):
            raise ValueError("density matrix contains non-finite entries")
        v.setflags(write=False)
        object.__setattr__(self, "values", v)

    @property
    def diagonal(self) -> np.ndarray:
        return np.real(np.diag(self.values)).copy()

    def trace(self) -> float:
        """Discrete trace, i.e. the integral of rho(x, x)."""
        return float(np.sum(self.diagonal) * self.grid.dx)


def projector_from(psi: ComplexField) -> DensityMatrix:
    v = psi.values
    return DensityMatrix(psi.grid, np.outer(v, np.conj(v)))


def apply_density(p: ComplexGaugeParams, rho: DensityMatrix,
                  floor_rel: float = DEFAULT_FLOOR_REL) -> DensityMatrix:
    """Transform rho entrywise; diagonal entries come back exactly unchanged.

    floor_rel is measured on the amplitude sqrt(rho(x, x)), the same scale
    the field-level transformation clamps ``|psi|`` on. Diagonals below the
    floor are clamped inside the log ratio, and entries with
    |rho[i, j]| < floor_rel**2 * max|rho| (where Arg is meaningless) are
    flagged in the result's mask.
    """
    v = rho.values
    d = np.real(np.diag(v))
    if np.any(d <= 0) or np.any(np.abs(np.imag(np.diag(v))) > 1e-12 * d.max(initial=0.0)):
        raise NonPositiveDiagonalError("diagonal entries must be real and strictly positive")
    amp = np.sqrt(d)
    amp_floor = floor_rel * amp.max()
    log_amp = np.log(np.maximum(amp, amp_floor))
    # ln(rho_ii / rho_jj) = 2 (ln a_i - ln a_j)
    log_ratio = 2.0 * (log_amp[:, None] - log_amp[None, :])
    mag = np.abs(v)
    mask = (mag < floor_rel**2 * mag.max()) | (amp < amp_floor)[:, None] | (amp < amp_floor)[None, :]
    exponent = (p.lam - 1.0) * 1j * principal_arg(v) + 0.5j * p.gamma_c * log_ratio
    return DensityMatrix(rho.grid, v * np.exp(exponent), mask=mask)


def _same_grid(a: DensityMatrix, b: DensityMatrix) -> None:
    if a.grid != b.grid:
        raise GridMismatchError("density matrices live on different grids")


def diagonal_deviation(rho: DensityMatrix, rho_t: DensityMatrix) -> float:
    _same_grid(rho, rho_t)
    d = np.diag(rho.values)
    return float(np.max(np.abs(np.diag(rho_t.values) - d)) / np.max(np.real(d)))


def hermiticity_deviation(rho: DensityMatrix) -> float:
    v = rho.values
    scale = np.max(np.abs(v))
    if scale == 0:
        return 0.0
    return float(np.max(np.abs(v - v.conj().T)) / scale)


def mix(rho1: DensityMatrix, rho2: DensityMatrix, p1: float, p2: float) -> DensityMatrix:
    _same_grid(rho1, rho2)
    if p1 < 0 or p2 < 0 or abs(p1 + p2 - 1.0) > 1e-12:
        raise BadWeightsError(f"weights ({p1}, {p2}) are not a convex pair")
    return DensityMatrix(rho1.grid, p1 * rho1.values + p2 * rho2.values)


@dataclass
class ConvexityReport:
    offdiag_gap: float
    diag_gap: float

    def to_dict(self) -> dict:
        return {"offdiag_gap": self.offdiag_gap, "diag_gap": self.diag_gap}


def convexity_report(rho1: DensityMatrix, rho2: DensityMatrix, p1: float, p2: float,
                     p: ComplexGaugeParams,
                     floor_rel: float = DEFAULT_FLOOR_REL) -> ConvexityReport:
    """Transform-then-mix against mix-then-transform.

    Off the diagonal the two generally differ; on the diagonal the
    transformed mixture equals the plain mixture of diagonals.
    """
    L = apply_density(p, mix(rho1, rho2, p1, p2), floor_rel).values
    R = mix(apply_density(p, rho1, floor_rel), apply_density(p, rho2, floor_rel), p1, p2).values
    off = ~np.eye(rho1.grid.n_points, dtype=bool)
    mixed_diag = p1 * np.diag(rho1.values) + p2 * np.diag(rho2.values)
    return ConvexityReport(
        offdiag_gap=float(np.max(np.abs(L - R)[off])),
        diag_gap=float(np.max(np.abs(np.diag(L) - mixed_diag))),
    )


@dataclass
class FieldConsistency:
    """Density-level vs field-level transformation of a pure state."""
    max_deviation: float
    branch_cut: np.ndarray  # entries where the two constructions may legitimately differ

    @property
    def n_mismatch(self) -> int:
        return int(self.branch_cut.sum())


def field_consistency(p: GaugeParams, psi: ComplexField,
                      floor_rel: float = DEFAULT_FLOOR_REL) -> FieldConsistency:
    """Compare apply_density on the projector with the projector of apply_field.

    The two agree wherever lam * Arg(rho_ij) equals lam * (Arg psi_i - Arg psi_j)
    modulo 2*pi. For non-integer lam that fails exactly on entries whose
    phase difference leaves (-pi, pi]; those entries are excluded from
    max_deviation and returned as ``branch_cut``.
    """
    rho_t = apply_density(ComplexGaugeParams.from_real(p), projector_from(psi), floor_rel)
    ref = projector_from(apply_field(p, psi, floor_rel))
    a = principal_arg(psi.values)
    diff = a[:, None] - a[None, :]
    if p.lam == round(p.lam):
        cut = np.zeros(diff.shape, dtype=bool)
    else:
        cut = (diff <= -np.pi) | (diff > np.pi)
    scale = np.max(np.abs(ref.values))
    dev = np.abs(rho_t.values - ref.values)[~cut]
    return FieldConsistency(float(dev.max(initial=0.0) / scale), cut)
