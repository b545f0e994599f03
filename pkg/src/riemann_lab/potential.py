"""Potentials: the sweep family and the Riemann potentials built from J(x).

Every model is a frozen dataclass that is vectorised through ``__call__`` and
has a scalar fast path ``value`` for use inside adaptive quadrature. All
models carry a hard wall at x <= 0, returned as ``inf``. Variants that divide
by log(x) are defined as 0 on (0, 2) and only use their formula for x >= 2.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from functools import cached_property

import numpy as np
from scipy import integrate

from riemann_lab import kernels
from riemann_lab.specfun import li, sine_integral_shifted
from riemann_lab.zeros import ZeroSet

RIEMANN_CUTOFF = 2.0


class SMode(str, enum.Enum):
    TERM_SUM = "term-sum"
    BLOCK_INTEGRAL = "block-integral"
    RIEMANN_CLOSED_FORM = "riemann-closed"


class ModeMismatchError(ValueError):
    pass


def _as_array(x):
    arr = np.asarray(x, dtype=float)
    return arr, arr.ndim == 0


def _wrap(out, scalar):
    return float(out) if scalar else out


class Potential:
    """Shared plumbing; subclasses implement ``_positive(x)`` for x > 0."""

    name = "potential"
    breakpoints: tuple[float, ...] = ()
    floor = 0.0

    def __call__(self, x):
        arr, scalar = _as_array(x)
        out = np.full(arr.shape, np.inf)
        pos = arr > 0.0
        if np.any(pos):
            out[pos] = self._positive(arr[pos])
        return _wrap(out, scalar)

    def value(self, x: float) -> float:
        if x <= 0.0:
            return math.inf
        return float(self._positive(np.array([x]))[0])

    def params(self) -> dict:
        return {"model": self.name}


@dataclass(frozen=True)
class Log(Potential):
    name = "log"
    floor = -math.inf

    def _positive(self, x):
        return np.log(x)

    def value(self, x):
        return math.inf if x <= 0.0 else math.log(x)


@dataclass(frozen=True)
class Linear(Potential):
    name = "linear"

    def _positive(self, x):
        return x.copy()

    def value(self, x):
        return math.inf if x <= 0.0 else x


@dataclass(frozen=True)
class Quadratic(Potential):
    name = "quadratic"

    def _positive(self, x):
        return x * x

    def value(self, x):
        return math.inf if x <= 0.0 else x * x


@dataclass(frozen=True)
class Exponential(Potential):
    name = "exponential"
    floor = 1.0

    def _positive(self, x):
        return np.exp(x)

    def value(self, x):
        return math.inf if x <= 0.0 else math.exp(x)


@dataclass(frozen=True)
class PowerNearHarmonic(Potential):
    """x**(2 - epsilon), approaching the harmonic well from below."""

    epsilon: float = 0.1
    name = "power-near-harmonic"

    def __post_init__(self):
        if not 0.0 < self.epsilon <= 0.5:
            raise ValueError("epsilon must lie in (0, 0.5]")

    def _positive(self, x):
        return x ** (2.0 - self.epsilon)

    def value(self, x):
        return math.inf if x <= 0.0 else x ** (2.0 - self.epsilon)

    def params(self):
        return {"model": self.name, "epsilon": self.epsilon}


@dataclass(frozen=True)
class LogCorrected(Potential):
    """x**2 / log(x)**b for x >= 2, zero on (0, 2)."""

    b: int = 2
    name = "log-corrected"
    breakpoints = (RIEMANN_CUTOFF,)

    def __post_init__(self):
        if self.b not in (1, 2):
            raise ValueError("b must be 1 or 2")

    def _positive(self, x):
        out = np.zeros_like(x)
        m = x >= RIEMANN_CUTOFF
        out[m] = x[m] ** 2 / np.log(x[m]) ** self.b
        return out

    def value(self, x):
        if x <= 0.0:
            return math.inf
        if x < RIEMANN_CUTOFF:
            return 0.0
        return x * x / math.log(x) ** self.b

    def params(self):
        return {"model": self.name, "b": self.b}


@dataclass(frozen=True)
class RiemannPrincipal(Potential):
    """(x / ln x) li(x) for x >= 2, zero on (0, 2)."""

    name = "riemann-principal"
    breakpoints = (RIEMANN_CUTOFF,)

    def _positive(self, x):
        return kernels.riemann_principal(x)

    def value(self, x):
        if x <= 0.0:
            return math.inf
        if x < RIEMANN_CUTOFF:
            return 0.0
        lx = math.log(x)
        return x / lx * kernels.ei(lx)


@dataclass(frozen=True)
class RiemannFull(Potential):
    """Principal part plus the zero-driven fluctuation (x / ln x) S(x)."""

    zeros: ZeroSet = field(default_factory=ZeroSet.empty)
    s_mode: SMode = SMode.TERM_SUM
    name = "riemann-full"
    breakpoints = (RIEMANN_CUTOFF,)

    def _positive(self, x):
        return (kernels.riemann_principal(x)
                + perturbation_potential(x, self.zeros, self.s_mode))

    @cached_property
    def floor(self):
        xs = np.linspace(RIEMANN_CUTOFF, 100.0, 2000)
        return min(0.0, float(np.min(self._positive(xs))))

    def params(self):
        return {"model": self.name, "zeros": len(self.zeros), "s_mode": self.s_mode.value}


@dataclass(frozen=True)
class RiemannIntegralForm(Potential):
    """(2 / ln x) * integral_2^x J(y) dy for x >= 2, zero on (0, 2)."""

    zeros: ZeroSet = field(default_factory=ZeroSet.empty)
    name = "riemann-integral"
    breakpoints = (RIEMANN_CUTOFF,)

    def _positive(self, x):
        out = np.zeros_like(x)
        m = x >= RIEMANN_CUTOFF
        if np.any(m):
            out[m] = integral_form_potential(x[m], self.zeros)
        return out

    def params(self):
        return {"model": self.name, "zeros": len(self.zeros)}


MODEL_NAMES = (
    "log", "linear", "quadratic", "exponential", "power-near-harmonic",
    "log-corrected", "riemann-principal", "riemann-full", "riemann-integral",
)

SWEEP_FAMILY = ("log", "linear", "quadratic", "exponential",
                "power-near-harmonic", "log-corrected")


def make_model(name: str, *, epsilon: float = 0.1, b: int = 2,
               zeros: ZeroSet | None = None,
               s_mode: SMode = SMode.TERM_SUM) -> Potential:
    simple = {
        "log": Log, "linear": Linear, "quadratic": Quadratic,
        "exponential": Exponential, "riemann-principal": RiemannPrincipal,
    }
    if name in simple:
        return simple[name]()
    if name == "power-near-harmonic":
        return PowerNearHarmonic(epsilon)
    if name == "log-corrected":
        return LogCorrected(b)
    if name in ("riemann-full", "riemann-integral"):
        if zeros is None:
            raise ValueError(f"model {name!r} needs a zero set")
        if name == "riemann-full":
            return RiemannFull(zeros, SMode(s_mode))
        return RiemannIntegralForm(zeros)
    raise ValueError(f"unknown model {name!r}; choose from {', '.join(MODEL_NAMES)}")


def eval_potential(model: Potential, x):
    return model(x)


def _require_cutoff(arr):
    if np.any(arr < RIEMANN_CUTOFF):
        raise ValueError("the Riemann fluctuation terms are defined for x >= 2")


def fluctuation_S(x, zeros: ZeroSet, mode: SMode = SMode.TERM_SUM):
    """Oscillating zero contribution S(x) in one of three forms.

    TERM_SUM keeps the leading asymptotic term of Li(x^rho) for every
    conjugate pair, summed in ascending height. BLOCK_INTEGRAL replaces each
    run of equal real part by its continuum integral with the log-height
    density frozen at the run's first zero. RIEMANN_CLOSED_FORM is the
    one-block critical-line version anchored at the lowest zero.
    """
    arr, scalar = _as_array(x)
    _require_cutoff(arr)
    mode = SMode(mode)
    if len(zeros) == 0:
        return _wrap(np.zeros(arr.shape), scalar)
    if mode is SMode.TERM_SUM:
        out = kernels.term_sum(arr, zeros.a, zeros.alpha)
    elif mode is SMode.BLOCK_INTEGRAL:
        out = _block_integral_S(arr, zeros)
    else:
        if not zeros.on_critical_line:
            raise ModeMismatchError("the closed form needs every real part equal to 1/2")
        out = _riemann_closed_S(arr, float(zeros.alpha[0]))
    return _wrap(np.asarray(out, dtype=float), scalar)


def _block_integral_S(x, zeros: ZeroSet):
    lx = np.log(x)
    total = np.zeros_like(x)
    for start, stop, a in zeros.blocks():
        lo = float(zeros.alpha[start])
        hi = float(zeros.alpha[stop - 1])
        si_part = (sine_integral_shifted(hi * lx) - sine_integral_shifted(lo * lx)) * (1.0 + a * lx)
        cos_part = (a / lo) * (-np.cos(hi * lx) / hi + np.cos(lo * lx) / lo)
        total += x ** a * (si_part + cos_part) * math.log(lo)
    return -2.0 / lx * total


def _riemann_closed_S(x, alpha1):
    lx = np.log(x)
    s = sine_integral_shifted(alpha1 * lx)
    bracket = s + 0.5 * lx * s - np.cos(alpha1 * lx) / (2.0 * alpha1)
    return 2.0 * np.sqrt(x) / lx * bracket * math.log(alpha1)


def perturbation_potential(x, zeros: ZeroSet, mode: SMode = SMode.TERM_SUM):
    """(x / ln x) S(x) for x >= 2 and 0 on (0, 2)."""
    arr, scalar = _as_array(x)
    out = np.zeros(arr.shape)
    m = arr >= RIEMANN_CUTOFF
    if np.any(m) and len(zeros):
        xm = arr[m]
        out[m] = xm / np.log(xm) * fluctuation_S(xm, zeros, mode)
    return _wrap(out, scalar)


def j_explicit(x, zeros: ZeroSet, include_trivial: bool = False):
    """li(x) minus the paired Li(x^rho) terms, truncated at len(zeros).

    The two small terms of the full explicit formula (-log 2 and the integral
    over (x, inf) of dt / (t (t^2 - 1) log t)) are left out unless
    ``include_trivial`` is set.
    """
    arr, scalar = _as_array(x)
    _require_cutoff(arr)
    out = np.asarray(li(arr), dtype=float)
    if len(zeros):
        out = out - kernels.li_rho_sum(arr, zeros.a, zeros.alpha)
    if include_trivial:
        out = out + np.vectorize(_trivial_terms)(arr)
    return _wrap(out, scalar)


def _trivial_terms(x: float) -> float:
    tail = integrate.quad(lambda t: 1.0 / (t * (t * t - 1.0) * math.log(t)), x, math.inf)[0]
    return tail - math.log(2.0)


def _prime_pi_table(n: int) -> np.ndarray:
    sieve = np.ones(n + 1, dtype=bool)
    sieve[:2] = False
    for p in range(2, int(math.isqrt(n)) + 1):
        if sieve[p]:
            sieve[p * p:: p] = False
    return np.cumsum(sieve)


def _iroot(n: int, k: int) -> int:
    r = int(round(n ** (1.0 / k)))
    while r ** k > n:
        r -= 1
    while (r + 1) ** k <= n:
        r += 1
    return r


def j_prime_power_oracle(x):
    """J(x) = sum_k pi(x^(1/k)) / k with exact prime counts (right-continuous)."""
    arr, scalar = _as_array(x)
    _require_cutoff(arr)
    top = int(math.floor(float(np.max(arr))))
    pi = _prime_pi_table(top)
    out = np.zeros(arr.shape)
    flat = out.ravel()
    for i, xv in enumerate(arr.ravel()):
        n = int(math.floor(xv))
        total = 0.0
        k = 1
        while True:
            r = _iroot(n, k)
            if r < 2:
                break
            total += pi[r] / k
            k += 1
        flat[i] = total
    return _wrap(out, scalar)


def integral_form_potential(x, zeros: ZeroSet, rtol: float = 1e-10):
    """(2 / ln x) * integral_2^x J(y) dy, by cumulative adaptive quadrature."""
    arr, scalar = _as_array(x)
    _require_cutoff(arr)
    order = np.argsort(arr.ravel())
    xs = arr.ravel()[order]

    def jfun(y):
        return float(j_explicit(y, zeros))

    # oscillation scale of the highest zero sets the subdivision budget
    limit = 200 + (int(zeros.alpha[-1]) * 4 if len(zeros) else 0)
    cumulative = np.empty_like(xs)
    acc = 0.0
    prev = RIEMANN_CUTOFF
    for i, xv in enumerate(xs):
        if xv > prev:
            acc += integrate.quad(jfun, prev, xv, epsrel=rtol, limit=limit)[0]
            prev = xv
        cumulative[i] = acc
    out = np.empty_like(xs)
    out[order] = 2.0 / np.log(xs) * cumulative
    return _wrap(out.reshape(arr.shape), scalar)
