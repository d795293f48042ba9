#!/usr/bin/env python3
"""Gauge transformations of density matrices.

The diagonal rho(x, x) never moves. A real gamma keeps rho Hermitian, an
imaginary one does not, and a transformed mixture only matches the mixture
of transformed states on the diagonal.
"""
import numpy as np

from ngt import (ComplexField, ComplexGaugeParams, apply_density, convexity_report,
                 diagonal_deviation, hermiticity_deviation, make_grid, projector_from)
from ngt.samples import gaussian_packet

grid = make_grid(128, -8, 8)
x = grid.x

# asymmetric witness: rho_ii / rho_jj != 1 away from the centre
rho = projector_from(ComplexField(grid, np.exp(-(x - 1) ** 2 / 2)))
for gc in (0.7, 1j, 0.7 + 0.5j):
    out = apply_density(ComplexGaugeParams(1.0, gc), rho)
    print(f"gamma_c = {gc!s:>10}: diagonal dev = {diagonal_deviation(rho, out):.1e}, "
          f"hermiticity dev = {hermiticity_deviation(out):.3f}")

a = projector_from(gaussian_packet(grid, 1.0, -1.0))
b = projector_from(gaussian_packet(grid, 1.0, 1.0))
rep = convexity_report(a, b, 0.5, 0.5, ComplexGaugeParams(1.0, 1.0))
print("\nmix-then-transform vs transform-then-mix:")
print(f"  diagonal gap     = {rep.diag_gap:.1e}")
print(f"  off-diagonal gap = {rep.offdiag_gap:.3f}")
