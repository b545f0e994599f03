"""Special functions: logarithmic, exponential and sine integrals, Beta."""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy import integrate

from riemann_lab import kernels


class DomainError(ValueError):
    """Argument outside the domain of a special function."""


@dataclass(frozen=True)
class PrincipalValueConfig:
    """Settings for the principal-value quadrature of li(x).

    ``epsilon_split`` is the half-width of the symmetric exclusion around
    t = 1; three successively halved widths are Richardson-extrapolated to 0.
    """

    epsilon_split: float = 0.01
    quad_rel_tol: float = 1e-10

    def __post_init__(self):
        if not 0.0 < self.epsilon_split < 0.5:
            raise ValueError("epsilon_split must lie in (0, 0.5)")
        if not 0.0 < self.quad_rel_tol <= 1e-3:
            raise ValueError("quad_rel_tol must lie in (0, 1e-3]")


def _inv_log(t):
    return 1.0 / math.log(t)


def _quad(a, b, rtol):
    val, _ = integrate.quad(_inv_log, a, b, epsabs=0.0, epsrel=rtol, limit=200)
    return val


def log_integral(x: float, cfg: PrincipalValueConfig | None = None) -> float:
    """Riemann's li(x) = PV int_0^x dt / ln t by direct quadrature.

    The exclusion [1 - e, 1 + e] leaves an error with odd powers of e only
    (e + e^3/36 + ...), so two Richardson steps over e, e/2, e/4 remove the
    e and e^3 terms.
    """
    cfg = cfg or PrincipalValueConfig()
    x = float(x)
    if x <= 0.0 or x == 1.0:
        raise DomainError(f"li(x) undefined at x={x}")
    rtol = min(cfg.quad_rel_tol, 1e-6) * 1e-2
    if x < 1.0:
        return _quad(0.0, x, rtol)

    eps = min(cfg.epsilon_split, 0.5 * (x - 1.0))

    def excluded(e):
        return _quad(0.0, 1.0 - e, rtol) + _quad(1.0 + e, x, rtol)

    f1, f2, f4 = excluded(eps), excluded(eps / 2), excluded(eps / 4)
    r1 = 2.0 * f2 - f1
    r2 = 2.0 * f4 - f2
    return (8.0 * r2 - r1) / 7.0


def li(x):
    """Fast vectorised li(x) = Ei(ln x) for x > 0, x != 1."""
    x = np.asarray(x, dtype=float)
    if np.any(x <= 0.0) or np.any(x == 1.0):
        raise DomainError("li(x) needs x > 0 and x != 1")
    out = kernels.li_array(x)
    return float(out) if out.ndim == 0 else out


def exp_integral(z):
    """Exponential integral Ei(z) on the principal branch.

    Real input returns a float, complex input a complex. Li(x^rho) is taken
    as ``exp_integral(rho * log(x))``.
    """
    if isinstance(z, complex) or np.iscomplexobj(z):
        z = complex(z)
        if z == 0:
            raise DomainError("Ei(0) is undefined")
        if z.imag == 0.0:
            return complex(kernels.ei(z.real))
        return kernels.ei_complex(z)
    z = float(z)
    if z == 0.0:
        raise DomainError("Ei(0) is undefined")
    return kernels.ei(z)


def sine_integral_shifted(x):
    """si(x) = Si(x) - pi/2 for x >= 0; vectorised over arrays."""
    arr = np.asarray(x, dtype=float)
    if np.any(arr < 0.0):
        raise DomainError("si(x) needs x >= 0")
    if arr.ndim == 0:
        return kernels.si(float(arr))
    return kernels.si_array(arr)


def beta_function(a: float, b: float) -> float:
    if a <= 0.0 or b <= 0.0:
        raise DomainError("Beta function needs positive arguments")
    return math.exp(math.lgamma(a) + math.lgamma(b) - math.lgamma(a + b))
