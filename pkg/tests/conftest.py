import math

import numpy as np
import pytest
from scipy.integrate import solve_ivp

from holonomy_lab.curve import PolynomialComponents, make_builtin, reparametrize_arclength

ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)


def ivp_transport(curve, c, t, cvec=None, rtol=1e-13, atol=1e-14):
    """Independent oracle: the 2x2 transport ODE through a generic Runge-Kutta solver."""
    c1, c2, c3 = cvec if cvec is not None else (c, c, c)

    def rhs(s, y):
        a, b = y[0] + 1j * y[1], y[2] + 1j * y[3]
        fa = curve.frame_arrays(np.array([s]))
        m, n = fa.m[0], fa.n[0]
        p = c3 * n
        q = c1 * m.real + 1j * c2 * m.imag
        da = 1j * (p * a - q * np.conj(b))
        db = 1j * (p * b + q * np.conj(a))
        return [da.real, da.imag, db.real, db.imag]

    sol = solve_ivp(rhs, (curve.domain[0], t), [1.0, 0.0, 0.0, 0.0], method="DOP853",
                    rtol=rtol, atol=atol)
    y = sol.y[:, -1]
    return complex(y[0], y[1]), complex(y[2], y[3])


def parabola_arc():
    """Unit-speed reparametrization of (u, u^2, 0), u in [0, 1]."""
    return reparametrize_arclength(PolynomialComponents([0.0, 1.0], [0.0, 0.0, 1.0], [0.0], (0.0, 1.0)))


def parabola_length(u):
    return (2 * u * math.sqrt(1 + 4 * u * u) + math.asinh(2 * u)) / 4


@pytest.fixture(scope="session")
def circle():
    return make_builtin("circle", {"radius": 1.0})


@pytest.fixture(scope="session")
def xline():
    return make_builtin("line", {"direction": [1.0, 0.0, 0.0]}, domain=(0.0, 10.0))


@pytest.fixture(scope="session")
def spiral():
    return make_builtin("spiral", {"rate": -1.0, "n0": 0.6})


@pytest.fixture(scope="session")
def parabola():
    return parabola_arc()


def builtin_corpus():
    s = 1 / math.sqrt(3)
    return [
        make_builtin("line", {"direction": [1.0, 0.0, 0.0]}, domain=(0.0, 10.0)),
        make_builtin("line", {"direction": [s, s, s]}, domain=(0.0, 10.0)),
        make_builtin("circle", {"radius": 1.0}),
        make_builtin("circle", {"radius": 2.5}),
        make_builtin("spiral", {"rate": -1.0, "n0": 0.6}),
        make_builtin("spiral", {"radius": 1.0, "pitch": 2.0}),
        make_builtin("spiral", {"rate": 2.0, "n0": -0.3, "phase": 0.4}),
    ]
