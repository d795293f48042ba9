"""Nonlinear gauge transformations of quantum states on a 1D grid."""
from .density import (ComplexGaugeParams, DensityMatrix, apply_density, convexity_report,
                      diagonal_deviation, hermiticity_deviation, mix, projector_from)
from .gauge import (BranchedValue, GaugeClass, GaugeParams, apply_branched, apply_field,
                    apply_hydro, apply_pointwise, compose, counterexample_report, inverse)
from .grid import (Boundary, ComplexField, GridSpec, HydroField, RealField, decompose,
                   gradient, l2_norm, laplacian, make_grid, reconstruct)
from .residual import GammaSchedule, ResidualReport, dg_rhs, r1, r2, r4, r5, residual
from .schrodinger import (EvolutionConfig, PhysicalConstants, Potential, Trajectory,
                          cn_step, current_density, evolve, probability_density)

__version__ = "0.1.0"
