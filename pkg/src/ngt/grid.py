"""Uniform 1D grids, sampled fields and finite-difference operators.

Fields are thin immutable wrappers around numpy arrays. The difference
operators are second order everywhere: central stencils in the interior,
periodic wrap on periodic grids and one-sided second-order stencils at the
edges of dirichlet grids.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Optional, Union

import numpy as np

from .errors import AllZeroFieldError, GridMismatchError, InvalidRangeError

DEFAULT_FLOOR_REL = 1e-12
MIN_POINTS = 8


class Boundary(str, enum.Enum):
    DIRICHLET = "dirichlet"
    PERIODIC = "periodic"


@dataclass(frozen=True)
class GridSpec:
    n_points: int
    x_min: float
    dx: float
    boundary: Boundary = Boundary.DIRICHLET

    def __post_init__(self):
        if int(self.n_points) != self.n_points or self.n_points < MIN_POINTS:
            raise InvalidRangeError(f"n_points must be an integer >= {MIN_POINTS}, got {self.n_points}")
        if not (np.isfinite(self.dx) and self.dx > 0):
            raise InvalidRangeError(f"dx must be positive, got {self.dx}")
        object.__setattr__(self, "boundary", Boundary(self.boundary))

    @property
    def x(self) -> np.ndarray:
        return self.x_min + self.dx * np.arange(self.n_points)

    @property
    def periodic(self) -> bool:
        return self.boundary is Boundary.PERIODIC

    def to_dict(self) -> dict:
        return {"n_points": int(self.n_points), "x_min": float(self.x_min),
                "dx": float(self.dx), "boundary": self.boundary.value}

    @classmethod
    def from_dict(cls, d: dict) -> "GridSpec":
        return cls(int(d["n_points"]), float(d["x_min"]), float(d["dx"]), Boundary(d["boundary"]))


def make_grid(n_points: int, x_min: float, x_max: float,
              boundary: Union[Boundary, str] = Boundary.DIRICHLET) -> GridSpec:
    """Grid covering [x_min, x_max].

    Dirichlet grids include both end points; periodic grids omit x_max, which
    is identified with x_min.
    """
    boundary = Boundary(boundary)
    if not x_max > x_min:
        raise InvalidRangeError(f"x_max ({x_max}) must exceed x_min ({x_min})")
    if n_points < MIN_POINTS:
        raise InvalidRangeError(f"n_points must be >= {MIN_POINTS}, got {n_points}")
    cells = n_points if boundary is Boundary.PERIODIC else n_points - 1
    return GridSpec(int(n_points), float(x_min), (x_max - x_min) / cells, boundary)


def _check_values(grid: GridSpec, values: np.ndarray, kind: str) -> None:
    if values.ndim != 1 or values.shape[0] != grid.n_points:
        raise GridMismatchError(
            f"{kind} has shape {values.shape}, grid expects ({grid.n_points},)")
    if not np.all(np.isfinite(values)):
        raise ValueError(f"{kind} contains non-finite values")


@dataclass(frozen=True, eq=False)
class ComplexField:
    grid: GridSpec
    values: np.ndarray
    mask: Optional[np.ndarray] = field(default=None, repr=False)

    def __post_init__(self):
        v = np.asarray(self.values, dtype=complex)
        _check_values(self.grid, v, "ComplexField")
        v.setflags(write=False)
        object.__setattr__(self, "values", v)

    def with_values(self, values, mask=None) -> "ComplexField":
        return ComplexField(self.grid, values, mask)


@dataclass(frozen=True, eq=False)
class RealField:
    grid: GridSpec
    values: np.ndarray
    mask: Optional[np.ndarray] = field(default=None, repr=False)

    def __post_init__(self):
        v = np.asarray(self.values)
        if np.iscomplexobj(v):
            raise TypeError("RealField values must be real")
        v = v.astype(float)
        _check_values(self.grid, v, "RealField")
        v.setflags(write=False)
        object.__setattr__(self, "values", v)

    def with_values(self, values, mask=None) -> "RealField":
        return RealField(self.grid, values, mask)


Field = Union[RealField, ComplexField]


@dataclass(frozen=True, eq=False)
class HydroField:
    """Amplitude/phase pair with A = ln|psi| and B the continuous phase.

    ``mask`` flags nodes whose modulus was clamped to the relative floor.
    """
    grid: GridSpec
    A: RealField
    B: RealField
    mask: np.ndarray

    def __post_init__(self):
        if self.A.grid != self.grid or self.B.grid != self.grid:
            raise GridMismatchError("A and B must live on the hydro field's grid")
        m = np.asarray(self.mask, dtype=bool)
        if m.shape != (self.grid.n_points,):
            raise GridMismatchError("mask length does not match grid")
        m.setflags(write=False)
        object.__setattr__(self, "mask", m)


def field_from_function(grid: GridSpec, fn) -> ComplexField:
    return ComplexField(grid, np.asarray(fn(grid.x), dtype=complex))


def amplitude_floor(modulus: np.ndarray, floor_rel: float) -> np.ndarray:
    """Clamp threshold(s): floor_rel times the max modulus along the last axis."""
    peak = np.max(modulus, axis=-1, keepdims=True)
    return floor_rel * peak


def wrap_phase(phi):
    """Map angles to (-pi, pi]."""
    w = np.mod(phi + np.pi, 2 * np.pi) - np.pi
    return np.where(w == -np.pi, np.pi, w)


def principal_arg(z):
    """Principal argument in (-pi, pi]; np.angle can return -pi for -0.0 imaginary parts."""
    a = np.angle(z)
    return np.where(a == -np.pi, np.pi, a)


def decompose(psi: ComplexField, floor_rel: float = DEFAULT_FLOOR_REL) -> HydroField:
    """Split a field into (ln|psi|, unwrapped phase).

    The phase is anchored at the principal argument of node 0 and unwrapped
    by a left-to-right scan: each node receives the 2*pi multiple that brings
    it closest to its left neighbour. The scan is a prefix sum over wrapped
    increments, so it is inherently sequential in x. Nodes with
    |psi| < floor_rel * max|psi| are clamped in A, masked, and take the phase
    of the nearest unmasked node to their left.

    Fields whose true phase changes by pi or more between adjacent nodes
    cannot be unwrapped correctly.
    """
    if not 0 < floor_rel <= 1e-6:
        raise InvalidRangeError(f"floor_rel must lie in (0, 1e-6], got {floor_rel}")
    v = psi.values
    r = np.abs(v)
    peak = r.max()
    if peak == 0:
        raise AllZeroFieldError("cannot decompose an identically zero field")
    floor = floor_rel * peak
    mask = r < floor
    A = np.log(np.maximum(r, floor))

    arg = principal_arg(v)
    good = np.flatnonzero(~mask)
    # Node 0 anchors the scan even if masked; unmasked nodes then unwrap
    # relative to the most recent phase value to their left.
    anchors = np.concatenate(([0], good[good > 0]))
    inc = wrap_phase(np.diff(arg[anchors]))
    B_scan = arg[0] + np.concatenate(([0.0], np.cumsum(inc)))
    # Snap to arg + 2*pi*k so round-off in the prefix sum does not accumulate.
    a_anchor = arg[anchors]
    B_anchor = a_anchor + 2 * np.pi * np.round((B_scan - a_anchor) / (2 * np.pi))
    # Forward-fill: every node takes the phase of the last anchor at or before it.
    idx = np.searchsorted(anchors, np.arange(len(v)), side="right") - 1
    B = B_anchor[idx]
    return HydroField(psi.grid, RealField(psi.grid, A), RealField(psi.grid, B), mask)


def reconstruct(h: HydroField) -> ComplexField:
    return ComplexField(h.grid, np.exp(h.A.values + 1j * h.B.values), mask=h.mask)


def _d1(values: np.ndarray, dx: float, periodic: bool) -> np.ndarray:
    """First derivative along the last axis."""
    if periodic:
        return (np.roll(values, -1, axis=-1) - np.roll(values, 1, axis=-1)) / (2 * dx)
    out = np.empty_like(values)
    out[..., 1:-1] = (values[..., 2:] - values[..., :-2]) / (2 * dx)
    out[..., 0] = (-3 * values[..., 0] + 4 * values[..., 1] - values[..., 2]) / (2 * dx)
    out[..., -1] = (3 * values[..., -1] - 4 * values[..., -2] + values[..., -3]) / (2 * dx)
    return out


def _d2(values: np.ndarray, dx: float, periodic: bool) -> np.ndarray:
    """Second derivative along the last axis."""
    if periodic:
        return (np.roll(values, -1, axis=-1) - 2 * values + np.roll(values, 1, axis=-1)) / dx**2
    out = np.empty_like(values)
    out[..., 1:-1] = (values[..., 2:] - 2 * values[..., 1:-1] + values[..., :-2]) / dx**2
    # four-point one-sided stencils keep the edges second order
    out[..., 0] = (2 * values[..., 0] - 5 * values[..., 1] + 4 * values[..., 2] - values[..., 3]) / dx**2
    out[..., -1] = (2 * values[..., -1] - 5 * values[..., -2] + 4 * values[..., -3] - values[..., -4]) / dx**2
    return out


def gradient(f: Field) -> Field:
    g = f.grid
    return f.with_values(_d1(f.values, g.dx, g.periodic), f.mask)


def laplacian(f: Field) -> Field:
    g = f.grid
    return f.with_values(_d2(f.values, g.dx, g.periodic), f.mask)


def l2_norm(f: Field) -> float:
    return float(np.sqrt(f.grid.dx * np.sum(np.abs(f.values) ** 2)))
