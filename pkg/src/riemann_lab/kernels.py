"""Backend selection for the hot numerical kernels.

The compiled extension is preferred; the pure-Python module is used when it
cannot be imported or when the environment variable ``RIEMANN_LAB_PURE`` is
set to a non-empty value other than ``0``.
"""
from __future__ import annotations

import os

from riemann_lab import _pykernels

_force_pure = os.environ.get("RIEMANN_LAB_PURE", "") not in ("", "0")

if _force_pure:
    _impl = _pykernels
    BACKEND = "python"
else:
    try:
        from riemann_lab import _kernels as _impl  # type: ignore[no-redef]

        BACKEND = "cython"
    except ImportError:
        _impl = _pykernels
        BACKEND = "python"

ei = _impl.ei
ei_complex = _impl.ei_complex
si = _impl.si
si_array = _impl.si_array
li_array = _impl.li_array
riemann_principal = _impl.riemann_principal
term_sum = _impl.term_sum
li_rho_sum = _impl.li_rho_sum
numerov = _impl.numerov

__all__ = [
    "BACKEND",
    "ei",
    "ei_complex",
    "si",
    "si_array",
    "li_array",
    "riemann_principal",
    "term_sum",
    "li_rho_sum",
    "numerov",
]
