#!/usr/bin/env python3
"""Why lambda = 3/2 breaks the composition law on the principal branch.

Apply psi -> |psi| exp(i*lam*Arg psi) twice and compare with the composed
map lam' = lam**2 = 9/4. Then redo it keeping track of the sheet index,
which makes the two agree again.
"""
import math

import numpy as np

from ngt import (BranchedValue, GaugeParams, apply_branched, counterexample_report)

PI = math.pi

rep = counterexample_report(1.5, PI / 4, 3 * PI / 4)
for pt in rep.points:
    print(f"Arg in = {pt.arg_in / PI:+.4f} pi   once = {pt.arg_single / PI:+.4f} pi   "
          f"twice = {pt.arg_double / PI:+.4f} pi   composed = {pt.arg_direct / PI:+.4f} pi   "
          f"{'equal' if pt.equal else 'DIFFERENT'}")

# the first application of 3/2 to 3pi/4 lands at 9pi/8, past pi, so the
# principal Arg folds it back to -7pi/8 and the second application starts
# from the wrong sheet
print()
p = GaugeParams(1.5, 0.0)
v = BranchedValue(1.0, 3 * PI / 4, 0)
w = apply_branched(p, v)
ww = apply_branched(p, w)
direct = apply_branched(GaugeParams(9 / 4, 0.0), v)
print(f"branched once : arg = {w.arg / PI:+.4f} pi, m = {w.m}")
print(f"branched twice: arg = {ww.arg / PI:+.4f} pi, m = {ww.m}")
print(f"N_(9/4)       : arg = {direct.arg / PI:+.4f} pi, m = {direct.m}")

# integer lambda never has this problem: sweep random arguments
rng = np.random.default_rng(0)
bad = 0
for a1, a2 in rng.uniform(-PI, PI, size=(500, 2)):
    bad += sum(not pt.equal for pt in counterexample_report(2.0, a1, a2).points)
print(f"\nlambda = 2: {bad} mismatches over 1000 random arguments")
