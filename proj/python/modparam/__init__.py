"""Exact q-series identities for modular parametrizations, period lattices
from Eichler integrals, and finiteness bounds.

Rationals cross the boundary as strings ("num/den") so exact arithmetic never
passes through floating point.
"""

from ._core import (
    ModparamError,
    Series,
    curve_ap,
    cwz_genus_upper,
    eisenstein,
    eta_quotient,
    finiteness_check,
    genus_cusps,
    md_gcd,
    ode_fit,
    ode_solve,
    ode_verify,
    periods,
    selfcheck,
    watkins_lower,
)

__all__ = [
    "ModparamError",
    "Series",
    "curve_ap",
    "cwz_genus_upper",
    "eisenstein",
    "eta_quotient",
    "finiteness_check",
    "genus_cusps",
    "md_gcd",
    "ode_fit",
    "ode_solve",
    "ode_verify",
    "periods",
    "selfcheck",
    "watkins_lower",
]
