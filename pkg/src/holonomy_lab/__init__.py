"""Numerical laboratory for SU(2) transports of scaled homogeneous connections.

The transport ``g_c(t)`` of ``c (tau1 dx + tau2 dy + tau3 dz)`` along a
unit-speed curve is computed as a function of the scale ``c``; the package
measures whether it behaves almost periodically in ``c``.
"""
__version__ = "0.1.0"

from .algebra import SU2Element, su2_conjugate, su2_distance, su2_inverse, su2_mul  # noqa: E402
from .curve import (  # noqa: E402
    Classification,
    SpiralParams,
    classify,
    conjugate_frame,
    curve_from_spec,
    fit_varkappa,
    frame,
    load_curve,
    make_builtin,
    reparametrize_arclength,
)
from .transport import (  # noqa: E402
    IntegratorOptions,
    holonomy,
    holonomy_aniso,
    holonomy_sweep,
    residual_second_order,
)

__all__ = [
    "SU2Element", "su2_mul", "su2_inverse", "su2_conjugate", "su2_distance",
    "SpiralParams", "Classification", "classify", "conjugate_frame", "curve_from_spec",
    "fit_varkappa", "frame", "load_curve", "make_builtin", "reparametrize_arclength",
    "IntegratorOptions", "holonomy", "holonomy_aniso", "holonomy_sweep", "residual_second_order",
]
