#!/usr/bin/env python3
"""The (A, B) = (ln|psi|, continuous phase) picture.

NGT acts on the column (A, B) through [[1, 0], [gamma, lam]], so composing
transformations is just multiplying matrices, for any nonzero lambda.
"""
import numpy as np

from ngt import (GaugeParams, apply_hydro, compose, decompose, inverse, make_grid, reconstruct)
from ngt.samples import random_smooth_field

rng = np.random.default_rng(1)
grid = make_grid(256, -5, 5)
psi = random_smooth_field(grid, rng, log_amp=1.0, phase_amp=15.0)
h = decompose(psi)
print(f"phase range after unwrapping: [{h.B.values.min():.2f}, {h.B.values.max():.2f}]")

p1, p2 = GaugeParams(1.5, 0.3), GaugeParams(-2.7, -1.1)
pc = compose(p2, p1)
print("p2 o p1 =", (pc.lam, pc.gamma))
print("matrix product agrees:", np.allclose(p2.matrix @ p1.matrix, pc.matrix))

seq = apply_hydro(p2, apply_hydro(p1, h)).B.values
direct = apply_hydro(pc, h).B.values
print(f"sequential vs composed, max |dB| = {np.max(np.abs(seq - direct)):.2e}")

back = apply_hydro(inverse(p1), apply_hydro(p1, h)).B.values
print(f"inverse round trip, max |dB| = {np.max(np.abs(back - h.B.values)):.2e}")

conj = reconstruct(apply_hydro(GaugeParams(-1, 0), h)).values
print("N_(-1,0) is complex conjugation:", np.array_equal(conj, np.conj(reconstruct(h).values)))

out = reconstruct(apply_hydro(pc, h)).values
print(f"modulus change: {np.max(np.abs(np.abs(out) - np.abs(psi.values)) / np.abs(psi.values)):.1e}")
