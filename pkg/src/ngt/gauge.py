"""Nonlinear gauge transformations of wave functions.

A transformation is labelled by (lambda, gamma) and acts as

    psi -> |psi| exp(i*lambda*arg(psi) + i*gamma*ln|psi|).

Three realizations live here:

* ``apply_pointwise`` / ``apply_field`` use the principal branch of arg.
  Composition follows the affine law only inside the principal
  (|lambda| <= 1) and integer classes, and both are semigroups.
* ``apply_branched`` carries an integer sheet index along with the value,
  which restores the group law for any nonzero lambda.
* ``apply_hydro`` acts linearly on (ln|psi|, continuous phase) through the
  lower-triangular matrix [[1, 0], [gamma, lambda]]; this is a group action.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from typing import List, Optional

import numpy as np

from .errors import (BelowFloorError, ClassMismatchError, InvalidParamsError,
                     NotInvertibleError)
from .grid import (DEFAULT_FLOOR_REL, ComplexField, HydroField, RealField,
                   principal_arg, wrap_phase)

TWO_PI = 2 * math.pi


class GaugeClass(str, enum.Enum):
    PRINCIPAL = "principal"
    INTEGER = "integer"
    UNRESTRICTED = "unrestricted"


@dataclass(frozen=True)
class GaugeParams:
    lam: float
    gamma: float = 0.0
    kind: GaugeClass = GaugeClass.UNRESTRICTED

    def __post_init__(self):
        kind = GaugeClass(self.kind)
        object.__setattr__(self, "kind", kind)
        lam, gamma = float(self.lam), float(self.gamma)
        if not (math.isfinite(lam) and math.isfinite(gamma)):
            raise InvalidParamsError("lambda and gamma must be finite")
        if lam == 0:
            raise InvalidParamsError("lambda must be nonzero")
        if kind is GaugeClass.PRINCIPAL and abs(lam) > 1:
            raise InvalidParamsError(f"principal class needs |lambda| <= 1, got {lam}")
        if kind is GaugeClass.INTEGER and lam != round(lam):
            raise InvalidParamsError(f"integer class needs integral lambda, got {lam}")
        object.__setattr__(self, "lam", lam)
        object.__setattr__(self, "gamma", gamma)

    @classmethod
    def infer(cls, lam: float, gamma: float = 0.0) -> "GaugeParams":
        """Pick the narrowest class admitting lam (principal wins for |lam| <= 1)."""
        if abs(lam) <= 1:
            return cls(lam, gamma, GaugeClass.PRINCIPAL)
        if lam == round(lam):
            return cls(lam, gamma, GaugeClass.INTEGER)
        return cls(lam, gamma, GaugeClass.UNRESTRICTED)

    @property
    def matrix(self) -> np.ndarray:
        """Lower-triangular action on the column (A, B)."""
        return np.array([[1.0, 0.0], [self.gamma, self.lam]])

    def to_dict(self) -> dict:
        return {"lambda": self.lam, "gamma": self.gamma, "class": self.kind.value}


IDENTITY = GaugeParams(1.0, 0.0, GaugeClass.UNRESTRICTED)


def compose(outer: GaugeParams, inner: GaugeParams) -> GaugeParams:
    """Parameters of ``outer`` applied after ``inner``: (l'l, l'g + g')."""
    if outer.kind is not inner.kind:
        raise ClassMismatchError(
            f"cannot compose {outer.kind.value} with {inner.kind.value} parameters")
    return GaugeParams(outer.lam * inner.lam, outer.lam * inner.gamma + outer.gamma, outer.kind)


def inverse(p: GaugeParams) -> GaugeParams:
    if p.kind is not GaugeClass.UNRESTRICTED and abs(p.lam) != 1:
        raise NotInvertibleError(
            f"{p.kind.value} class is only a semigroup; lambda={p.lam} has no inverse in it")
    return GaugeParams(1.0 / p.lam, -p.gamma / p.lam, p.kind)


def _require_pointwise_class(p: GaugeParams) -> None:
    if p.kind is GaugeClass.UNRESTRICTED:
        raise ClassMismatchError(
            "principal-branch application needs the principal or integer class; "
            "use apply_branched or apply_hydro for unrestricted lambda")


def _principal_transform(lam: float, gamma: float, z: complex) -> complex:
    r = abs(z)
    return r * complex(math.cos(lam * _arg(z) + gamma * math.log(r)),
                       math.sin(lam * _arg(z) + gamma * math.log(r)))


def _arg(z: complex) -> float:
    a = math.atan2(z.imag, z.real)
    return math.pi if a == -math.pi else a


def apply_pointwise(p: GaugeParams, z: complex, floor: float = 0.0) -> complex:
    _require_pointwise_class(p)
    z = complex(z)
    if abs(z) <= 0 or abs(z) < floor:
        raise BelowFloorError(f"|z| = {abs(z)} is below the floor {floor}")
    return _principal_transform(p.lam, p.gamma, z)


def _field_phase(values: np.ndarray, lam: float, gamma: float, floor_rel: float):
    r = np.abs(values)
    floor = floor_rel * r.max() if r.size else 0.0
    mask = r < floor
    log_r = np.log(np.maximum(r, floor)) if floor > 0 else np.log(r)
    return r, lam * principal_arg(values) + gamma * log_r, mask


def apply_field(p: GaugeParams, psi: ComplexField,
                floor_rel: float = DEFAULT_FLOOR_REL) -> ComplexField:
    """Principal-branch transformation at every node.

    Nodes below floor_rel * max|psi| keep their modulus; their phase uses the
    clamped logarithm and they are flagged in the result's mask.
    """
    _require_pointwise_class(p)
    return _apply_field_unchecked(p.lam, p.gamma, psi, floor_rel)


def _apply_field_unchecked(lam, gamma, psi, floor_rel):
    if not psi.values.any():
        return psi.with_values(psi.values, np.ones(psi.grid.n_points, dtype=bool))
    r, phase, mask = _field_phase(psi.values, lam, gamma, floor_rel)
    return psi.with_values(r * np.exp(1j * phase), mask)


@dataclass(frozen=True)
class BranchedValue:
    """A complex number together with the sheet of arg it lives on.

    The total phase is ``arg + 2*pi*m``.
    """
    modulus: float
    arg: float
    m: int = 0

    def __post_init__(self):
        if not self.modulus >= 0:
            raise InvalidParamsError("modulus must be nonnegative")
        if not -math.pi < self.arg <= math.pi:
            raise InvalidParamsError(f"arg must lie in (-pi, pi], got {self.arg}")
        if int(self.m) != self.m:
            raise InvalidParamsError("branch index must be an integer")
        object.__setattr__(self, "m", int(self.m))

    @property
    def total_phase(self) -> float:
        return self.arg + TWO_PI * self.m

    @property
    def value(self) -> complex:
        return self.modulus * complex(math.cos(self.arg), math.sin(self.arg))

    @classmethod
    def from_phase(cls, modulus: float, theta: float) -> "BranchedValue":
        """Split a total phase into principal arg and sheet index."""
        n = math.ceil((theta - math.pi) / TWO_PI)
        arg = theta - TWO_PI * n
        # guard the rounding edges so arg stays in (-pi, pi]
        if arg <= -math.pi:
            n -= 1
            arg += TWO_PI
        elif arg > math.pi:
            n += 1
            arg -= TWO_PI
        return cls(modulus, arg, n)


def apply_branched(p: GaugeParams, v: BranchedValue, floor: float = 0.0) -> BranchedValue:
    if p.kind is not GaugeClass.UNRESTRICTED:
        raise ClassMismatchError("branch-tracked application takes unrestricted parameters")
    if v.modulus <= 0 or v.modulus < floor:
        raise BelowFloorError(f"modulus {v.modulus} is below the floor {floor}")
    theta = p.lam * v.arg + TWO_PI * v.m * p.lam + p.gamma * math.log(v.modulus)
    return BranchedValue.from_phase(v.modulus, theta)


def branched_at(h: HydroField, i: int) -> BranchedValue:
    """Value at node i with its sheet index read off the continuous phase."""
    b = float(h.B.values[i])
    arg = float(wrap_phase(b))
    return BranchedValue(math.exp(h.A.values[i]), arg, int(round((b - arg) / TWO_PI)))


def branched_from_hydro(h: HydroField) -> List[BranchedValue]:
    return [branched_at(h, i) for i in range(h.grid.n_points)]


def apply_hydro(p: GaugeParams, h: HydroField) -> HydroField:
    B = p.gamma * h.A.values + p.lam * h.B.values
    return HydroField(h.grid, h.A, RealField(h.grid, B), h.mask)


@dataclass
class PointComparison:
    arg_in: float
    arg_single: float
    arg_double: float
    arg_direct: float
    equal: bool

    @property
    def deviation(self) -> float:
        return abs(float(wrap_phase(self.arg_double - self.arg_direct)))


@dataclass
class CounterexampleReport:
    lam: float
    gamma: float
    kind: GaugeClass
    points: List[PointComparison] = field(default_factory=list)

    @property
    def max_deviation(self) -> float:
        return max((pt.deviation for pt in self.points), default=0.0)

    def to_dict(self) -> dict:
        return {
            "lambda": self.lam,
            "gamma": self.gamma,
            "class": self.kind.value,
            "points": [
                {"arg_in": pt.arg_in, "arg_single": pt.arg_single,
                 "arg_double": pt.arg_double, "arg_direct": pt.arg_direct,
                 "equal": pt.equal}
                for pt in self.points
            ],
            "max_deviation": self.max_deviation,
        }


def counterexample_report(lam: float = 1.5, arg1: float = math.pi / 4,
                          arg2: Optional[float] = 3 * math.pi / 4,
                          gamma: float = 0.0, tol: float = 1e-12) -> CounterexampleReport:
    """Compare twice-applied principal-branch NGT with the composed one.

    Each test point is the unit-modulus value exp(i*arg). For non-integer
    |lambda| > 1 the second application sees a wrapped argument, which the
    composed transformation never does.
    """
    p = GaugeParams.infer(lam, gamma)
    direct = compose(GaugeParams(lam, gamma), GaugeParams(lam, gamma))
    report = CounterexampleReport(lam, gamma, p.kind)
    for arg in (arg1, arg2):
        if arg is None:
            continue
        z = complex(math.cos(arg), math.sin(arg))
        once = _principal_transform(lam, gamma, z)
        twice = _principal_transform(lam, gamma, once)
        comp = _principal_transform(direct.lam, direct.gamma, z)
        a2, ad = _arg(twice), _arg(comp)
        report.points.append(PointComparison(
            arg_in=arg, arg_single=_arg(once), arg_double=a2, arg_direct=ad,
            equal=abs(float(wrap_phase(a2 - ad))) <= tol))
    return report
