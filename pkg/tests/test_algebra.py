import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy.linalg import expm

from holonomy_lab.algebra import (
    TAU1, TAU2, TAU3, SU2Element, commutator, exp_generator, generator_matrix, mul_arrays,
    norm2_arrays, su2_conjugate, su2_distance, su2_inverse, su2_mul,
)

angles = st.floats(-10, 10, allow_nan=False)


@st.composite
def elements(draw):
    # Hopf coordinates cover SU(2)
    eta = draw(st.floats(0, math.pi / 2))
    x1, x2 = draw(angles), draw(angles)
    return SU2Element(math.cos(eta) * complex(math.cos(x1), math.sin(x1)),
                      math.sin(eta) * complex(math.cos(x2), math.sin(x2)))


def test_tau_brackets_exact():
    def br(x, y):
        return x @ y - y @ x

    assert np.array_equal(br(TAU1, TAU2), 2 * TAU3)
    assert np.array_equal(br(TAU2, TAU3), 2 * TAU1)
    assert np.array_equal(br(TAU3, TAU1), 2 * TAU2)


def test_norm_checked_at_construction():
    with pytest.raises(ValueError):
        SU2Element(1.0, 1e-5)
    SU2Element(1.0, 1e-7)  # |b|^2 = 1e-14 is within tolerance


def test_renormalize_restores_norm():
    g = SU2Element.unchecked(1.001, 0.002j).renormalize()
    assert abs(g.norm2 - 1) < 1e-15


def test_matrix_form_and_determinant():
    g = SU2Element(0.6, 0.8j)
    m = g.matrix()
    assert np.allclose(m, [[0.6, 0.8j], [0.8j, 0.6]])
    assert abs(np.linalg.det(m) - 1) < 1e-15
    assert SU2Element.from_matrix(m) == g


def test_mul_identity_and_hand_product():
    g = SU2Element(0.6, 0.8j)
    assert su2_mul(SU2Element.identity(), g) == g
    p = su2_mul(SU2Element(0, 1j), SU2Element(0, 1j))
    assert p.a == -1 and p.b == 0


@given(elements(), elements())
def test_mul_matches_matrix_product(g, h):
    assert np.allclose((g @ h).matrix(), g.matrix() @ h.matrix(), atol=1e-14)


@given(elements())
def test_inverse_law(g):
    assert su2_distance(g @ su2_inverse(g), SU2Element.identity()) < 1e-12


def test_conjugate_examples():
    X = np.array([[1 + 2j, 3], [4j, -1]])
    assert np.allclose(su2_conjugate(SU2Element.identity(), X), X)
    h = SU2Element(1 / math.sqrt(2), -1 / math.sqrt(2))
    Y = su2_conjugate(h, TAU3)
    assert abs(Y[0, 0]) < 1e-15 and abs(Y[1, 1]) < 1e-15
    assert abs(Y[0, 1]) > 0.5


@given(elements(), st.lists(st.floats(-5, 5), min_size=8, max_size=8))
def test_conjugate_preserves_trace_and_det(h, xs):
    X = np.array(xs[:4]).reshape(2, 2) + 1j * np.array(xs[4:]).reshape(2, 2)
    Y = su2_conjugate(h, X)
    assert abs(np.trace(Y) - np.trace(X)) < 1e-12 * (1 + np.abs(X).sum())
    assert abs(np.linalg.det(Y) - np.linalg.det(X)) < 1e-12 * (1 + np.abs(X).sum()) ** 2


def test_distance_examples():
    g = SU2Element(0.6, 0.8j)
    assert su2_distance(g, g) == 0
    assert su2_distance(SU2Element(1, 0), SU2Element(-1, 0)) == pytest.approx(2 * math.sqrt(2), abs=1e-15)


@given(elements(), elements(), elements())
def test_distance_metric(g, h, k):
    assert su2_distance(g, h) == pytest.approx(su2_distance(h, g), abs=1e-15)
    assert su2_distance(g, k) <= su2_distance(g, h) + su2_distance(h, k) + 1e-14
    assert su2_distance(g, h) == pytest.approx(np.linalg.norm(g.matrix() - h.matrix()), abs=1e-13)


def test_long_products_keep_norm():
    rng = np.random.default_rng(7)
    n = 1_000_000
    p = rng.normal(size=n) * 0.1
    q = (rng.normal(size=n) + 1j * rng.normal(size=n)) * 0.1
    a, b = exp_generator(p, q)
    pa, pb = 1.0 + 0j, 0j
    # sequential left multiplication without renormalization
    for j in range(200_000):
        pa, pb = pa * a[j] - pb * np.conj(b[j]), pa * b[j] + pb * np.conj(a[j])
    assert abs(abs(pa) ** 2 + abs(pb) ** 2 - 1) < 1e-6
    # the tree reduction used by the integrator over all 10^6 factors
    while a.size > 1:
        if a.size % 2:
            a, b = np.append(a, 1.0 + 0j), np.append(b, 0j)
        a, b = mul_arrays(a[1::2], b[1::2], a[0::2], b[0::2])
    assert abs(norm2_arrays(a, b)[0] - 1) < 1e-6


@given(st.floats(-3, 3), st.floats(-3, 3), st.floats(-3, 3))
def test_exp_generator_matches_expm(p, qr, qi):
    a, b = exp_generator(np.array([p]), np.array([complex(qr, qi)]))
    ref = expm(generator_matrix(p, complex(qr, qi)))
    assert np.allclose(SU2Element.unchecked(a[0], b[0]).matrix(), ref, atol=1e-13)


@given(st.lists(st.floats(-3, 3), min_size=6, max_size=6))
def test_commutator_matches_matrices(v):
    p1, q1, p2, q2 = v[0], complex(v[1], v[2]), v[3], complex(v[4], v[5])
    cp, cq = commutator(p1, q1, p2, q2)
    X, Y = generator_matrix(p1, q1), generator_matrix(p2, q2)
    assert np.allclose(generator_matrix(cp, cq), X @ Y - Y @ X, atol=1e-12)
