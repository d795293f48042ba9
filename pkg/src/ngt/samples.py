"""Reusable test states: Gaussian packets and random smooth fields."""
from __future__ import annotations

import numpy as np

from .grid import ComplexField, GridSpec, HydroField, RealField


def gaussian_packet(grid: GridSpec, width: float = 1.0, x0: float = 0.0, k0: float = 0.0,
                    normalized: bool = True) -> ComplexField:
    """exp(-(x - x0)^2 / (2 width^2) + i k0 x), optionally scaled to unit L2 norm."""
    x = grid.x
    v = np.exp(-((x - x0) ** 2) / (2 * width**2) + 1j * k0 * x)
    if normalized:
        v = v * (np.pi * width**2) ** -0.25
    return ComplexField(grid, v)


def _smooth(grid: GridSpec, rng: np.random.Generator, n_modes: int) -> np.ndarray:
    """Random trigonometric sum with max |value| == 1."""
    L = grid.dx * grid.n_points
    t = (grid.x - grid.x_min) / L
    k = np.arange(1, n_modes + 1)
    a = rng.normal(size=n_modes) / k
    b = rng.normal(size=n_modes) / k
    s = (a[:, None] * np.cos(2 * np.pi * k[:, None] * t) + b[:, None] * np.sin(2 * np.pi * k[:, None] * t)).sum(0)
    s = s + rng.normal() * 0.3
    return s / np.max(np.abs(s))


def random_smooth_field(grid: GridSpec, rng: np.random.Generator, log_amp: float = 0.5,
                        phase_amp: float = 6.0, n_modes: int = 4) -> ComplexField:
    """Nonvanishing field exp(a + i b) with |a| <= log_amp and |b| <= phase_amp."""
    a = log_amp * _smooth(grid, rng, n_modes)
    b = phase_amp * _smooth(grid, rng, n_modes)
    return ComplexField(grid, np.exp(a + 1j * b))


def random_hydro_field(grid: GridSpec, rng: np.random.Generator, log_amp: float = 1.0,
                       phase_amp: float = 20.0, n_modes: int = 4) -> HydroField:
    A = RealField(grid, log_amp * _smooth(grid, rng, n_modes))
    B = RealField(grid, phase_amp * _smooth(grid, rng, n_modes))
    return HydroField(grid, A, B, np.zeros(grid.n_points, dtype=bool))
