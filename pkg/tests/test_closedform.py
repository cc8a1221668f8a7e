import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from holonomy_lab.algebra import SU2Element, su2_distance
from holonomy_lab.closedform import (
    ap_plus_decay_decompose, delta, envelope_phi, f_function, line_solution, periodic_part,
    spiral_arrays, spiral_solution, zero_lattice,
)
from holonomy_lab.curve import SpiralParams, classify, make_builtin
from holonomy_lab.errors import DegenerateLine, NonPositiveC
from holonomy_lab.transport import holonomy

CIRCLE = SpiralParams(1.0, 0.0, -1j, 0.0)
L2 = SpiralParams(2.0, 0.0, 1.0, 0.0)


@st.composite
def spiral_params(draw):
    lam = draw(st.floats(-5, 5).filter(lambda x: abs(x) > 1e-3))
    n0 = draw(st.floats(-0.99, 0.99))
    phase = draw(st.floats(-math.pi, math.pi))
    m0 = math.sqrt(1 - n0 * n0) * complex(math.cos(phase), math.sin(phase))
    return SpiralParams(lam, -lam * n0, m0, n0)


def test_delta_examples():
    assert delta(3.5, SpiralParams(0.0, 0.0, 1.0, 0.0)) == 3.5
    assert delta(-3.5, SpiralParams(0.0, 0.0, 1.0, 0.0)) == 3.5
    assert delta(2.0, L2) == pytest.approx(2.2360680, abs=1e-7)
    p = SpiralParams(2.0, 1.2, 0.8, 0.6)
    assert delta(0.6, p) == pytest.approx(math.sqrt(4 - 1.44) / 2, abs=1e-15)
    edge = SpiralParams(2.0, -2.0, 0.0, 1.0)
    assert delta(-1.0, edge) == 0.0


def test_line_solution_examples():
    assert line_solution(1.0, 0.0, 0.0, 3.0) == SU2Element.identity()
    g = line_solution(1.0, 0.0, math.pi, 0.5)
    assert abs(g.a) < 1e-15 and abs(g.b - 1j) < 1e-15
    t = 0.7
    for c in np.linspace(-20, 20, 41):
        g1 = line_solution(0.6j, 0.8, c, t)
        g2 = line_solution(0.6j, 0.8, c + 2 * math.pi / t, t)
        assert su2_distance(g1, g2) < 1e-12


def test_spiral_solution_examples():
    assert spiral_solution(CIRCLE, 5.0, 0.0) == SU2Element.identity()
    c0 = math.sqrt(math.pi**2 - 0.25)
    g = spiral_solution(CIRCLE, c0, 1.0)
    assert abs(g.b) < 1e-15 and abs(abs(g.a) - 1) < 1e-15


@given(st.floats(-50, 50), st.floats(0, 5), st.floats(-1, 1), st.floats(-math.pi, math.pi))
def test_spiral_reduces_to_line(c, t, n0, ph):
    m0 = math.sqrt(1 - n0 * n0) * complex(math.cos(ph), math.sin(ph))
    p = SpiralParams(0.0, 0.0, m0, n0)
    assert su2_distance(spiral_solution(p, c, t), line_solution(m0, n0, c, t)) < 1e-12


@given(spiral_params(), st.floats(-100, 100), st.floats(0, 5))
def test_spiral_unitary_and_b_equals_f(p, c, t):
    g = spiral_solution(p, c, t)
    assert abs(g.norm2 - 1) < 1e-10
    assert abs(abs(g.b) - abs(p.m0) * abs(f_function(c, p, t))) < 1e-12


def test_spiral_near_vertex_uses_limit():
    p = SpiralParams(2.0, 2.0, 0.0, -1.0)  # |varkappa| = |lam|: Delta vanishes at c = 1
    g = spiral_solution(p, 1.0, 3.0)
    assert abs(g.norm2 - 1) < 1e-14
    near = spiral_solution(p, 1.0 + 1e-9, 3.0)
    assert su2_distance(g, near) < 1e-7
    assert f_function(1.0, p, 3.0) == 3.0


@pytest.mark.parametrize("family,params", [
    ("line", {"direction": [0.0, 0.6, 0.8]}),
    ("circle", {"radius": 1.0}),
    ("circle", {"radius": 0.5}),
    ("spiral", {"rate": -1.0, "n0": 0.6}),
    ("spiral", {"radius": 1.5, "pitch": -2.0}),
])
def test_closed_form_matches_integrator(family, params):
    curve = make_builtin(family, params, domain=(0.0, 5.0) if family == "line" else None)
    cls = classify(curve)
    for c in (-100, -10, -1, 0.5, 1, 10, 100):
        for t in (0.1, 1.0, min(5.0, curve.domain[1])):
            d = su2_distance(holonomy(curve, c, t).g, spiral_solution(cls.params, c, t))
            assert d < 1e-8, (c, t, d)


def test_f_function_examples():
    assert np.all(f_function(np.linspace(-5, 5, 11), L2, 0.0) == 0)
    assert abs(f_function(math.sqrt(3), L2, math.pi)) < 1e-10
    cs = np.linspace(1e4, 1e4 + 10, 20001)
    assert np.max(np.abs(f_function(cs, CIRCLE, 1.0))) == pytest.approx(1.0, abs=1e-6)


def test_f_periodic_for_lines():
    p = SpiralParams(0.0, 0.0, 1.0, 0.0)
    t = 1.7
    c = np.linspace(-50, 50, 10001)
    assert np.max(np.abs(f_function(c, p, t) - f_function(c + 2 * math.pi / t, p, t))) < 1e-10


def test_envelope_examples():
    assert envelope_phi(2.0, L2) == pytest.approx(0.8944272, abs=1e-7)
    a, b = envelope_phi(np.array([math.sqrt(3), math.sqrt(8)]), L2)
    assert a < b < 1
    assert envelope_phi(1e6 * 2, L2) == pytest.approx(1.0, abs=1e-6)
    with pytest.raises(NonPositiveC):
        envelope_phi(0.0, L2)


@given(spiral_params())
def test_envelope_increasing_to_one(p):
    c = np.geomspace(1e-3, 1e5, 400)
    phi = envelope_phi(c, p)
    if p.varkappa <= 0:
        assert np.all(np.diff(phi) > -1e-15)
    assert abs(phi[-1] - 1) < 1e-4


def test_zero_lattice_example():
    z = zero_lattice(L2, math.pi, 5)
    assert z.k0 == 1
    assert z.zeros[1][1] == pytest.approx(0.0, abs=1e-15)
    assert z.zeros[2][1] == pytest.approx(1.7320508, abs=1e-7)
    assert z.zeros[3][1] == pytest.approx(2.8284271, abs=1e-7)
    pos = z.positive()
    assert np.all(np.diff(pos) > 0)
    assert np.max(np.abs(f_function(pos, L2, math.pi))) < 1e-10
    assert np.max(np.abs(f_function(z.negative(), L2, math.pi))) < 1e-10


@settings(deadline=None)
@given(spiral_params(), st.floats(0.1, 10))
def test_zero_lattice_zeros_vanish(p, t):
    z = zero_lattice(p, t, 60)
    expected = max(1, math.ceil(t / (2 * math.pi) * math.sqrt(p.lam**2 - p.varkappa**2) - 1e-12))
    assert z.k0 == expected
    for lo, hi in z.zeros.values():
        assert abs(f_function(lo, p, t)) < 1e-10 * max(1, abs(lo))
        assert abs(f_function(hi, p, t)) < 1e-10 * max(1, abs(hi))


def test_zero_lattice_gap_limit():
    z = zero_lattice(L2, math.pi, 10_001)
    gap = z.zeros[10_001][1] - z.zeros[10_000][1]
    assert abs(gap - 1.0) < 1e-6
    with pytest.raises(DegenerateLine):
        zero_lattice(SpiralParams(0.0, 0.0, 1.0, 0.0), 1.0, 3)


def test_decomposition():
    c = np.linspace(0, 1e4, 200001)
    d = ap_plus_decay_decompose(CIRCLE, 1.0, c)
    mid = d.residual[np.argmin(np.abs(c - 1e3))]
    assert d.residual_sup_tail < 10 * mid
    # decay across decades
    decades = [d.residual[(c >= 10**k) & (c < 10 ** (k + 1))].max() for k in (1, 2, 3)]
    assert decades[0] > decades[1] > decades[2]
    # the periodic part repeats with period 2 pi / t on the tail
    tail = c[c >= 9e3]
    pa, pb = periodic_part(CIRCLE, tail, 1.0)
    qa, qb = periodic_part(CIRCLE, tail + 2 * math.pi, 1.0)
    assert max(np.max(np.abs(pa - qa)), np.max(np.abs(pb - qb))) < 1e-9
    line = ap_plus_decay_decompose(SpiralParams(0.0, 0.0, 1.0, 0.0), 1.0, c[:1000])
    assert line.residual_sup_tail == 0 and np.all(line.residual == 0)


def test_decomposition_matches_exact_on_line():
    p = SpiralParams(0.0, 0.0, 0.6, 0.8)
    c = np.linspace(-30, 30, 301)
    pa, pb = periodic_part(p, c, 1.3)
    a, b = spiral_arrays(p, c, 1.3)
    assert np.max(np.abs(pa - a)) < 1e-14 and np.max(np.abs(pb - b)) < 1e-14
