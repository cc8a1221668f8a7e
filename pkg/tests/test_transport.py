import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import builtin_corpus, ivp_transport
from holonomy_lab.algebra import SU2Element, su2_distance
from holonomy_lab.curve import make_builtin
from holonomy_lab.errors import MVanishes, OutOfDomain, StepBudgetExceeded
from holonomy_lab.transport import (
    IntegratorOptions, holonomy, holonomy_aniso, holonomy_sweep, residual_second_order,
    track_derivatives,
)

CORPUS = builtin_corpus()


def test_trivial_cases(circle, parabola):
    for curve in (circle, parabola):
        assert holonomy(curve, 0.0, 1.0).g == SU2Element.identity()
        assert holonomy(curve, 7.0, 0.0).g == SU2Element.identity()
        assert holonomy_aniso(curve, (0, 0, 0), 1.0).g == SU2Element.identity()


def test_line_quarter_turn(xline):
    g = holonomy(xline, math.pi, 0.5).g
    assert abs(g.a) < 1e-8 and abs(g.b - 1j) < 1e-8


def test_line_anisotropic_uses_first_component(xline):
    for cvec in [(2.0, 5.0, -3.0), (-1.5, 0.0, 9.0)]:
        g = holonomy_aniso(xline, cvec, 1.3).g
        c1 = cvec[0]
        assert abs(g.a - math.cos(c1 * 1.3)) < 1e-10
        assert abs(g.b - 1j * math.sin(c1 * 1.3)) < 1e-10


@pytest.mark.parametrize("c", [-37.0, -2.0, 0.7, 12.0, 80.0])
def test_against_generic_ode_solver(parabola, c):
    a, b = ivp_transport(parabola, c, 1.2)
    g = holonomy(parabola, c, 1.2).g
    assert abs(g.a - a) < 1e-9 and abs(g.b - b) < 1e-9


def test_aniso_against_generic_ode_solver(parabola, spiral):
    for curve in (parabola, spiral):
        cvec = (3.0, -1.5, 7.0)
        a, b = ivp_transport(curve, None, 1.1, cvec=cvec)
        g = holonomy_aniso(curve, cvec, 1.1).g
        assert abs(g.a - a) < 1e-9 and abs(g.b - b) < 1e-9


def test_diagonal_equals_isotropic(circle):
    for c in (0.3, 17.0, -60.0):
        assert su2_distance(holonomy_aniso(circle, (c, c, c), 1.0).g, holonomy(circle, c, 1.0).g) < 1e-12


@settings(max_examples=30, deadline=None)
@given(st.sampled_from(range(len(CORPUS))), st.floats(-100, 100), st.floats(0, 1))
def test_unitarity_drift(i, c, frac):
    curve = CORPUS[i]
    t = curve.domain[0] + frac * min(curve.length, 10.0)
    r = holonomy(curve, c, t)
    assert r.unitarity_drift <= 1e-9
    assert abs(r.g.norm2 - 1) < 1e-14


@settings(max_examples=25, deadline=None)
@given(st.sampled_from(range(len(CORPUS))), st.floats(-50, 50), st.floats(0.05, 0.95), st.floats(0.05, 1))
def test_composition(i, c, f1, f2):
    curve = CORPUS[i]
    T = min(curve.length, 6.0)
    t1 = f1 * T
    t2 = t1 + f2 * (T - t1)
    whole = holonomy(curve, c, t2).g
    first = holonomy(curve, c, t1).g
    second = holonomy(curve, c, t2, t0=t1).g
    assert su2_distance(whole, second @ first) < 1e-9


@settings(max_examples=25, deadline=None)
@given(st.sampled_from(range(len(CORPUS))), st.floats(-50, 50), st.floats(0.05, 1))
def test_reversal(i, c, f):
    curve = CORPUS[i]
    t = f * min(curve.length, 6.0)
    fwd = holonomy(curve, c, t).g
    back = holonomy(curve, c, 0.0, t0=t).g
    assert su2_distance(back, fwd.inverse()) < 1e-9


def test_order_of_accuracy(parabola):
    def run(step):
        opts = IntegratorOptions(base_step=step, oscillation_factor=20)
        return holonomy(parabola, 1.0, 1.4, opts).g

    ref = run(0.3 / 8)
    e1 = su2_distance(run(0.3), ref)
    e2 = su2_distance(run(0.15), ref)
    assert e1 > 1e-13
    assert e1 / e2 >= 12


def test_step_rule():
    o = IntegratorOptions()
    assert o.step_size(0.5) == 0.01
    assert o.step_size(1000.0) == pytest.approx(2 * math.pi / 40000)
    with pytest.raises(ValueError):
        IntegratorOptions(oscillation_factor=10)
    with pytest.raises(ValueError):
        IntegratorOptions(base_step=0)


def test_errors(circle):
    with pytest.raises(OutOfDomain):
        holonomy(circle, 1.0, 7.0)
    with pytest.raises(StepBudgetExceeded):
        holonomy(circle, 1e4, 6.0, IntegratorOptions(max_steps=1000))
    with pytest.raises(ValueError):
        holonomy(circle, 2e6, 1.0)


def test_sweep_matches_single_runs(circle):
    cs = np.array([-5.0, 0.0, 3.5, 40.0])
    a, b, drift, steps = holonomy_sweep(circle, cs, 2.0)
    for i, c in enumerate(cs):
        r = holonomy(circle, c, 2.0)
        assert (a[i], b[i], steps[i]) == (r.g.a, r.g.b, r.steps)


def test_dense_track_agrees_with_endpoint(parabola):
    r = holonomy(parabola, 25.0, 1.4, dense=True)
    tr = r.track
    assert tr.t[0] == 0 and tr.t[-1] == 1.4
    assert tr.a[0] == 1 and tr.b[0] == 0
    assert su2_distance(SU2Element.unchecked(tr.a[-1], tr.b[-1]), holonomy(parabola, 25.0, 1.4).g) < 1e-12
    k = len(tr.t) // 2
    mid = holonomy(parabola, 25.0, tr.t[k]).g
    assert abs(mid.a - tr.a[k]) < 1e-9 and abs(mid.b - tr.b[k]) < 1e-9


def test_track_derivatives_match_finite_differences(circle):
    tr = holonomy(circle, 3.0, 2.0, dense=True, opts=IntegratorOptions(base_step=1e-3, dense_samples=100000)).track
    a, da, dda, b, db, ddb = track_derivatives(circle, 3.0, tr.t, tr.a, tr.b)
    h = tr.t[1] - tr.t[0]
    fd = (tr.a[2:] - tr.a[:-2]) / (2 * h)
    assert np.max(np.abs(fd - da[1:-1])) < 1e-4
    fd2 = (da[2:] - da[:-2]) / (2 * h)
    assert np.max(np.abs(fd2 - dda[1:-1])) < 1e-3


def test_second_order_residuals(xline, circle):
    for c in (1.0, 10.0, 100.0):
        tr = holonomy(xline, c, 3.0, dense=True).track
        assert max(residual_second_order(xline, c, tr)) < 1e-9
    tr = holonomy(circle, 10.0, 2 * math.pi, dense=True).track
    assert max(residual_second_order(circle, 10.0, tr)) < 1e-6 * 100
    tr = holonomy(circle, 0.0, 2.0, dense=True).track
    assert residual_second_order(circle, 0.0, tr) == (0.0, 0.0)


def test_residual_needs_m():
    zline = make_builtin("line", {"direction": [0.0, 0.0, 1.0]})
    tr = holonomy(zline, 2.0, 1.0, dense=True).track
    with pytest.raises(MVanishes):
        residual_second_order(zline, 2.0, tr)


def test_results_are_bit_reproducible(parabola):
    r1 = holonomy(parabola, 123.4, 1.1)
    r2 = holonomy(parabola, 123.4, 1.1)
    assert (r1.g.a, r1.g.b) == (r2.g.a, r2.g.b)
