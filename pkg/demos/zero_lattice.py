"""Zeros of f(c) = (c/Delta) sin(Delta t) for a spiral and their spacing.

The zeros sit at ``varkappa/2 +- sqrt(pi^2 k^2/t^2 - (lam^2 - varkappa^2)/4)``
and their gaps tend to ``pi/t``, while the envelope ``c/Delta`` climbs to 1.

    python demos/zero_lattice.py
"""
import math

from holonomy_lab.closedform import envelope_phi, f_function, zero_lattice
from holonomy_lab.curve import classify, make_builtin


def main(t=math.pi):
    p = classify(make_builtin("spiral", {"rate": -2.0, "n0": 0.3})).params
    zl = zero_lattice(p, t, 10_000)
    print(f"lam = {p.lam:g}, varkappa = {p.varkappa:g}, t = {t:.6g}, k0 = {zl.k0}")
    print(f"{'k':>6}{'c_-k':>14}{'c_+k':>14}{'|f(c_+k)|':>12}{'gap - pi/t':>13}{'phi':>12}")
    pos = zl.positive()
    for k in (zl.k0, zl.k0 + 1, zl.k0 + 2, 10, 100, 1000, 10_000):
        i = k - zl.k0
        lo, hi = zl.zeros[k]
        gap = pos[i] - pos[i - 1] - math.pi / t if i > 0 else float("nan")
        phi = envelope_phi(hi, p) if hi > 0 else float("nan")
        print(f"{k:>6}{lo:>14.6f}{hi:>14.6f}{abs(f_function(hi, p, t)):>12.1e}{gap:>13.2e}{phi:>12.8f}")


if __name__ == "__main__":
    main()
