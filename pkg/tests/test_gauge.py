import math

import numpy as np
import pytest
from hypothesis import assume, given, settings, strategies as st

from ngt.errors import BelowFloorError, ClassMismatchError, InvalidParamsError, NotInvertibleError
from ngt.gauge import (BranchedValue, GaugeClass, GaugeParams, apply_branched, apply_field,
                       apply_hydro, apply_pointwise, branched_at, compose, counterexample_report,
                       inverse)
from ngt.grid import ComplexField, decompose, make_grid, reconstruct
from ngt.samples import random_hydro_field, random_smooth_field

PI = math.pi
P, I, U = GaugeClass.PRINCIPAL, GaugeClass.INTEGER, GaugeClass.UNRESTRICTED


def test_params_validation():
    with pytest.raises(InvalidParamsError):
        GaugeParams(0.0, 1.0)
    with pytest.raises(InvalidParamsError):
        GaugeParams(1.5, 0.0, P)
    with pytest.raises(InvalidParamsError):
        GaugeParams(2.5, 0.0, I)
    assert GaugeParams.infer(0.5).kind is P
    assert GaugeParams.infer(-3).kind is I
    assert GaugeParams.infer(1.5).kind is U


def test_compose_examples():
    assert compose(GaugeParams(1.5, 0), GaugeParams(1.5, 0)) == GaugeParams(9 / 4, 0)
    p = GaugeParams(0.3, -0.7, P)
    assert compose(GaugeParams(1, 0, P), p) == p
    assert compose(GaugeParams(2, 1, I), GaugeParams(3, 0.5, I)) == GaugeParams(6, 2, I)


def test_compose_class_mismatch():
    with pytest.raises(ClassMismatchError):
        compose(GaugeParams(1, 0, P), GaugeParams(2, 0, I))


def test_inverse_examples():
    assert inverse(GaugeParams(2, 4)) == GaugeParams(0.5, -2)
    assert inverse(GaugeParams(1, 0.3)) == GaugeParams(1, -0.3)
    assert inverse(GaugeParams(-1, 0, P)) == GaugeParams(-1, 0, P)
    p = GaugeParams(-2.7, 1.1)
    assert compose(inverse(p), p) == GaugeParams(1.0, 0.0)


@pytest.mark.parametrize("p", [GaugeParams(0.5, 0, P), GaugeParams(2, 0, I)])
def test_semigroup_classes_are_not_invertible(p):
    with pytest.raises(NotInvertibleError):
        inverse(p)


def test_apply_pointwise_examples():
    z = 1 + 2j
    assert apply_pointwise(GaugeParams(1, 0, P), z) == pytest.approx(z, abs=1e-15)
    assert apply_pointwise(GaugeParams(-1, 0, P), z) == pytest.approx(1 - 2j, abs=1e-15)
    assert apply_pointwise(GaugeParams(1, PI / 2, P), math.e) == pytest.approx(1j * math.e, abs=1e-15)


def test_apply_pointwise_guards():
    with pytest.raises(ClassMismatchError):
        apply_pointwise(GaugeParams(1.5, 0), 1j)
    with pytest.raises(BelowFloorError):
        apply_pointwise(GaugeParams(1, 0, P), 0j)
    with pytest.raises(BelowFloorError):
        apply_pointwise(GaugeParams(1, 0, P), 1e-5, floor=1e-3)


def test_single_application_at_three_quarters_pi():
    rep = counterexample_report(1.5, 3 * PI / 4, None)
    assert abs(rep.points[0].arg_single - (-7 * PI / 8)) < 1e-12


def _field(n=256, L=3.0):
    g = make_grid(n, -L, L)
    return ComplexField(g, np.exp(-g.x**2 / 2 + 3j * g.x))


def test_apply_field_identity_and_modulus():
    psi = _field()
    np.testing.assert_allclose(apply_field(GaugeParams(1, 0, I), psi).values, psi.values, rtol=1e-15, atol=0)
    for p in (GaugeParams(0.37, -1.3, P), GaugeParams(-3, 2.2, I)):
        out = apply_field(p, psi)
        r = np.abs(psi.values)
        assert np.max(np.abs(np.abs(out.values) - r) / r) < 1e-14


def test_apply_field_semigroup_example():
    psi = _field()
    p1, p2 = GaugeParams(0.5, 0.3, P), GaugeParams(0.5, -0.1, P)
    pc = compose(p2, p1)
    assert (pc.lam, pc.gamma) == pytest.approx((0.25, 0.05))
    seq = apply_field(p2, apply_field(p1, psi)).values
    np.testing.assert_allclose(seq, apply_field(pc, psi).values, rtol=0, atol=1e-12)


def test_apply_field_rejects_unrestricted():
    with pytest.raises(ClassMismatchError):
        apply_field(GaugeParams(1.5, 0), _field())


def test_apply_field_masks_tiny_nodes():
    g = make_grid(16, 0, 1)
    v = np.ones(16, dtype=complex)
    v[3] = 1e-20
    out = apply_field(GaugeParams(1, 0.5, P), ComplexField(g, v))
    assert out.mask[3] and out.mask.sum() == 1
    assert abs(out.values[3]) == pytest.approx(1e-20)


def test_principal_law_needs_intermediate_phase_in_range():
    # gamma*ln|psi| pushes the intermediate phase past pi: the second
    # principal-branch application re-wraps it and the law fails
    g = make_grid(64, -1, 1)
    psi = ComplexField(g, np.exp(-4 + 0j) * np.ones(64))  # ln|psi| = -4
    p1, p2 = GaugeParams(0.5, 1.0, P), GaugeParams(0.5, 0.0, P)
    seq = apply_field(p2, apply_field(p1, psi)).values
    direct = apply_field(compose(p2, p1), psi).values
    assert np.max(np.abs(seq - direct)) > 1e-3


@settings(max_examples=40, deadline=None)
@given(st.integers(-5, 5), st.integers(-5, 5), st.floats(-3, 3), st.floats(-3, 3), st.integers(0, 2**32 - 1))
def test_integer_class_law_holds_for_any_gamma(l1, l2, g1, g2, seed):
    assume(l1 != 0 and l2 != 0)
    rng = np.random.default_rng(seed)
    psi = random_smooth_field(make_grid(128, -4, 4), rng, log_amp=2.0, phase_amp=10.0)
    p1, p2 = GaugeParams(l1, g1, I), GaugeParams(l2, g2, I)
    seq = apply_field(p2, apply_field(p1, psi)).values
    direct = apply_field(compose(p2, p1), psi).values
    assert np.max(np.abs(seq - direct)) / np.max(np.abs(psi.values)) < 1e-12


@settings(max_examples=50, deadline=None)
@given(st.floats(-1, 1), st.floats(-1, 1), st.floats(-1, 1), st.floats(-1, 1))
def test_semigroup_closure(l1, l2, g1, g2):
    # keep the product lambda representable (tiny pairs underflow to 0)
    assume(abs(l1) > 1e-100 and abs(l2) > 1e-100)
    pc = compose(GaugeParams(l1, g1, P), GaugeParams(l2, g2, P))
    assert pc.kind is P and abs(pc.lam) <= 1
    pi = compose(GaugeParams(round(3 * l1) or 1, g1, I), GaugeParams(round(3 * l2) or -1, g2, I))
    assert pi.kind is I


def test_conjugation_is_n_minus_one():
    psi = _field()
    out = apply_field(GaugeParams(-1, 0, P), psi).values
    np.testing.assert_allclose(out, np.conj(psi.values), rtol=1e-15, atol=0)
    h = decompose(psi)
    assert np.array_equal(reconstruct(apply_hydro(GaugeParams(-1, 0), h)).values,
                          np.conj(reconstruct(h).values))


# -- branch-tracked realization ------------------------------------------------

def test_apply_branched_identity():
    v = BranchedValue(0.7, -2.0, 3)
    assert apply_branched(GaugeParams(1, 0), v) == v


def test_apply_branched_worked_example():
    p = GaugeParams(1.5, 0)
    v = BranchedValue(1.0, 3 * PI / 4, 0)
    w = apply_branched(p, v)
    assert w.m == 1 and abs(w.arg - (-7 * PI / 8)) < 1e-12
    w2 = apply_branched(p, w)
    assert w2.m == 1 and abs(w2.arg - (-5 * PI / 16)) < 1e-12
    direct = apply_branched(GaugeParams(9 / 4, 0), v)
    assert direct.m == 1 and abs(direct.arg - (-5 * PI / 16)) < 1e-12


@settings(max_examples=100, deadline=None)
@given(st.floats(0.1, 4), st.booleans(), st.floats(-3, 3), st.floats(0.01, 10),
       st.floats(-PI + 1e-9, PI), st.integers(-5, 5))
def test_apply_branched_inverse_round_trip(lam, neg, gamma, r, arg, m):
    p = GaugeParams(-lam if neg else lam, gamma)
    v = BranchedValue(r, arg, m)
    back = apply_branched(inverse(p), apply_branched(p, v))
    assert back.modulus == v.modulus
    assert abs(back.total_phase - v.total_phase) < 1e-12 * max(1.0, abs(v.total_phase))


def test_branched_value_validation():
    with pytest.raises(InvalidParamsError):
        BranchedValue(1.0, -PI, 0)
    with pytest.raises(BelowFloorError):
        apply_branched(GaugeParams(2, 0), BranchedValue(0.0, 0.0))
    with pytest.raises(ClassMismatchError):
        apply_branched(GaugeParams(2, 0, I), BranchedValue(1.0, 0.0))


def test_from_phase_keeps_arg_half_open():
    v = BranchedValue.from_phase(1.0, PI)
    assert v.arg == PI and v.m == 0
    v = BranchedValue.from_phase(1.0, -PI)
    assert v.arg == PI and v.m == -1


def test_branched_agrees_with_hydro():
    rng = np.random.default_rng(7)
    g = make_grid(200, -5, 5)
    psi = random_smooth_field(g, rng, log_amp=1.0, phase_amp=15.0)
    h = decompose(psi)
    p = GaugeParams(-2.3, 0.8)
    hb = apply_hydro(p, h).B.values
    for i in range(g.n_points):
        w = apply_branched(p, branched_at(h, i))
        assert abs(w.total_phase - hb[i]) < 1e-12


# -- hydrodynamic realization --------------------------------------------------

def test_apply_hydro_matrix_action():
    g = make_grid(8, 0, 7)
    h = random_hydro_field(g, np.random.default_rng(0))
    from ngt.grid import HydroField, RealField
    h = HydroField(g, RealField(g, np.ones(8)), RealField(g, np.full(8, 2.0)), np.zeros(8, bool))
    out = apply_hydro(GaugeParams(2, 3), h)
    np.testing.assert_array_equal(out.A.values, 1)
    np.testing.assert_array_equal(out.B.values, 7)
    same = apply_hydro(GaugeParams(1, 0), h)
    np.testing.assert_array_equal(same.B.values, h.B.values)


@settings(max_examples=60, deadline=None)
@given(st.floats(0.1, 5), st.floats(0.1, 5), st.floats(-3, 3), st.floats(-3, 3),
       st.booleans(), st.booleans(), st.integers(0, 2**32 - 1))
def test_hydro_group_law(l1, l2, g1, g2, n1, n2, seed):
    h = random_hydro_field(make_grid(64, -2, 2), np.random.default_rng(seed))
    p1, p2 = GaugeParams(-l1 if n1 else l1, g1), GaugeParams(-l2 if n2 else l2, g2)
    seq = apply_hydro(p2, apply_hydro(p1, h))
    direct = apply_hydro(compose(p2, p1), h)
    np.testing.assert_allclose(seq.B.values, direct.B.values, rtol=0, atol=1e-12)
    back = apply_hydro(inverse(p1), apply_hydro(p1, h))
    np.testing.assert_allclose(back.B.values, h.B.values, rtol=0, atol=1e-12)


# -- counterexample -------------------------------------------------------------

def test_counterexample_reference_values():
    rep = counterexample_report()
    p1, p2 = rep.points
    assert p1.equal and abs(p1.arg_double - 9 * PI / 16) < 1e-12 and abs(p1.arg_direct - 9 * PI / 16) < 1e-12
    assert not p2.equal
    assert abs(p2.arg_double - 11 * PI / 16) < 1e-12
    assert abs(p2.arg_direct - (-5 * PI / 16)) < 1e-12
    d = rep.to_dict()
    assert d["class"] == "unrestricted" and d["max_deviation"] == pytest.approx(PI)


def test_counterexample_zero_argument_is_fine():
    rep = counterexample_report(1.5, 0.0, None)
    assert len(rep.points) == 1 and rep.points[0].equal


def test_counterexample_integer_lambda_never_breaks():
    rng = np.random.default_rng(11)
    args = rng.uniform(-PI, PI, size=1000)
    for a1, a2 in zip(args[::2], args[1::2]):
        rep = counterexample_report(2.0, a1, a2)
        assert all(p.equal for p in rep.points)
