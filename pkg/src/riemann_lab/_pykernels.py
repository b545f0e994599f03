"""Pure-Python implementations of the numerical kernels.

Used when the compiled ``_kernels`` extension is unavailable or when
``RIEMANN_LAB_PURE=1`` is set. Must stay call-compatible with ``_kernels.pyx``.
"""
from __future__ import annotations

import cmath
import math

import numpy as np

EULER_GAMMA = 0.57721566490153286061
_EPS = 1e-16
_MAX_ITER = 5000


def _ei_series(z):
    # gamma + log z + sum z^n / (n n!)
    term = z
    total = z
    n = 1
    while n < _MAX_ITER:
        n += 1
        term *= z * (n - 1) / (n * n)
        total += term
        if abs(term) <= _EPS * abs(total):
            break
    if isinstance(z, complex):
        return EULER_GAMMA + cmath.log(z) + total
    return EULER_GAMMA + math.log(abs(z)) + total


def _ei_asymptotic(z):
    # e^z / z * sum k! / z^k, truncated at the smallest term
    term = 1.0
    total = 1.0
    k = 0
    while k < 200:
        k += 1
        nxt = term * k / z
        if abs(nxt) >= abs(term):
            break
        term = nxt
        total += term
        if abs(term) <= _EPS * abs(total):
            break
    if isinstance(z, complex):
        return cmath.exp(z) / z * total
    return math.exp(z) / z * total


def _e1_cf(w):
    # modified Lentz evaluation of the E1 continued fraction
    tiny = 1e-300
    b = w + 1.0
    c = 1.0 / tiny
    d = 1.0 / b
    h = d
    for i in range(1, _MAX_ITER):
        an = -float(i * i)
        b += 2.0
        d = an * d + b
        if d == 0:
            d = tiny
        c = b + an / c
        if c == 0:
            c = tiny
        d = 1.0 / d
        delta = c * d
        h *= delta
        if abs(delta - 1.0) < _EPS:
            break
    if isinstance(w, complex):
        return h * cmath.exp(-w)
    return h * math.exp(-w)


def ei(x):
    """Real exponential integral Ei(x), x != 0."""
    x = float(x)
    if x == 0.0:
        raise ValueError("Ei is singular at 0")
    if x < -1.0:
        return -_e1_cf(-x)
    if x <= 40.0:
        return _ei_series(x)
    return _ei_asymptotic(x)


def ei_complex(z):
    """Principal-branch Ei(z) for complex z != 0."""
    z = complex(z)
    if z == 0:
        raise ValueError("Ei is singular at 0")
    u, v = z.real, z.imag
    r = abs(z)
    if r < 2.0:
        return _ei_series(z)
    if u > 0.0 and abs(v) < u:
        if r <= 40.0:
            return _ei_series(z)
        return _ei_asymptotic(z)
    val = -_e1_cf(-z)
    if v > 0.0:
        val += 1j * math.pi
    elif v < 0.0:
        val -= 1j * math.pi
    return val


def si(x):
    """Shifted sine integral si(x) = Si(x) - pi/2 for x >= 0."""
    x = float(x)
    if x <= 4.0:
        term = x
        total = x
        n = 0
        x2 = x * x
        while abs(term) > _EPS * abs(total) and n < 200:
            n += 1
            term *= -x2 / ((2 * n) * (2 * n + 1))
            total += term / (2 * n + 1)
        return total - math.pi / 2
    return _e1_cf(1j * x).imag


def si_array(x):
    x = np.asarray(x, dtype=float)
    return np.array([si(v) for v in x.ravel()]).reshape(x.shape)


def li_array(x):
    x = np.asarray(x, dtype=float)
    return np.array([ei(math.log(v)) for v in x.ravel()]).reshape(x.shape)


def riemann_principal(x):
    x = np.asarray(x, dtype=float)
    out = np.zeros_like(x)
    m = x >= 2.0
    if np.any(m):
        xm = x[m]
        out[m] = xm / np.log(xm) * li_array(xm)
    return out


def term_sum(x, a, alpha):
    """Leading-term fluctuation sum S(x) over conjugate zero pairs."""
    x = np.asarray(x, dtype=float)
    a = np.asarray(a, dtype=float)
    alpha = np.asarray(alpha, dtype=float)
    out = np.zeros(x.shape)
    if a.size == 0:
        return out
    flat = out.ravel()
    xs = x.ravel()
    denom = a * a + alpha * alpha
    for i, xv in enumerate(xs):
        lx = math.log(xv)
        ph = alpha * lx
        num = 2.0 * a * np.cos(ph) + 2.0 * alpha * np.sin(ph)
        flat[i] = -np.sum(np.exp(a * lx) * num / denom) / lx
    return flat.reshape(x.shape)


def li_rho_sum(x, a, alpha):
    """Sum over zeros of Li(x^rho) + Li(x^conj(rho)) = 2 Re Ei(rho log x)."""
    x = np.asarray(x, dtype=float)
    out = np.zeros(x.shape)
    flat = out.ravel()
    for i, xv in enumerate(x.ravel()):
        lx = math.log(xv)
        s = 0.0
        for av, al in zip(a, alpha):
            s += 2.0 * ei_complex(complex(av * lx, al * lx)).real
        flat[i] = s
    return flat.reshape(x.shape)


def numerov(f, h):
    """Integrate psi'' = f psi outward from psi(0) = 0.

    Returns the sampled solution and the number of sign changes strictly
    inside the grid.
    """
    f = np.asarray(f, dtype=float)
    n = f.size
    psi = np.zeros(n)
    if n < 2:
        return psi, 0
    psi[1] = h
    c = h * h / 12.0
    nodes = 0
    last_sign = 1
    for i in range(1, n - 1):
        psi[i + 1] = (2.0 * psi[i] * (1.0 + 5.0 * c * f[i])
                      - psi[i - 1] * (1.0 - c * f[i - 1])) / (1.0 - c * f[i + 1])
        if abs(psi[i + 1]) > 1e200:
            psi[: i + 2] *= 1e-200
        if i + 1 < n - 1 and psi[i + 1] != 0.0:
            s = 1 if psi[i + 1] > 0 else -1
            if s != last_sign:
                nodes += 1
                last_sign = s
    return psi, nodes
