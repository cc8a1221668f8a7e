"""Decay of the endpoint energy E_a(c, t) in c.

Lines keep E_a at rounding level.  The circle and a parabola arc show
``|E_a| ~ 1/c``; the slope is fitted to the per-period envelope.

    python demos/energy_decay.py
"""
import numpy as np

from holonomy_lab.curve import PolynomialComponents, make_builtin, reparametrize_arclength
from holonomy_lab.energy import decay_scan


def main(t=1.0):
    curves = {
        "line":     make_builtin("line", {"direction": [0.6, 0.0, 0.8]}, domain=(0.0, 10.0)),
        "circle":   make_builtin("circle", {"radius": 1.0}),
        "spiral":   make_builtin("spiral", {"rate": -1.0, "n0": 0.6}),
        "parabola": reparametrize_arclength(PolynomialComponents([0.0, 1.0], [0.0, 0.0, 1.0], [0.0], (0.0, 1.0))),
    }
    grid = np.geomspace(10, 1e4, 16)
    print(f"{'curve':<10}{'max|E_a|':>12}{'|E_a| at c_max':>16}{'exponent':>10}")
    for name, curve in curves.items():
        tr = decay_scan(curve, t, grid)
        v = np.abs(tr.values)
        print(f"{name:<10}{v.max():>12.3e}{v[-1]:>16.3e}{tr.fitted_exponent:>10.4f}")


if __name__ == "__main__":
    main()
