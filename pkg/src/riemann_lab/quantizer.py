"""Semiclassical (WKB) quantisation on the half-line with a hard wall at 0.

Phase integrals use the substitution x = x_T - t**2, which removes the
inverse-square-root behaviour at the turning point, so the integrand in t is
smooth up to the potential's own breakpoints.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np
from scipy import integrate, optimize
from scipy.interpolate import PchipInterpolator

from riemann_lab.potential import Potential
from riemann_lab.spectrum import Spectrum


class NoBracketError(ValueError):
    """Energy lies below the potential's range, or no root bracket was found."""


class QuadratureError(RuntimeError):
    pass


class TurningPointError(ValueError):
    """WKB wavefunction requested inside the Airy patch around x_T."""


@dataclass(frozen=True)
class QuantizationRule:
    """Eigenvalue condition phi(E_N) = mu * pi * (N + nu)."""

    mu: float
    nu: float
    name: str = "custom"

    def __post_init__(self):
        if self.mu <= 0.0:
            raise ValueError("mu must be positive")

    def target(self, n) -> float:
        return self.mu * math.pi * (n + self.nu)


PAPER_RULE = QuantizationRule(2.0, 0.25, "paper")
STANDARD_RULE = QuantizationRule(1.0, 0.75, "standard")
RULES = {"paper": PAPER_RULE, "standard": STANDARD_RULE}


def get_rule(rule) -> QuantizationRule:
    if isinstance(rule, QuantizationRule):
        return rule
    try:
        return RULES[rule]
    except KeyError:
        raise ValueError(f"unknown rule {rule!r}; use 'paper' or 'standard'") from None


@dataclass(frozen=True)
class PhaseResult:
    energy: float
    x_t: float
    phi: float
    quad_error_estimate: float


def turning_point(model: Potential, E: float, rtol: float = 1e-12) -> float:
    """Largest x with V(x) = E (or the jump that V steps over E at)."""
    if not E > model.floor:
        raise NoBracketError(f"E={E} is not above the potential floor {model.floor}")
    hi = 1.0
    while model.value(hi) <= E:
        hi *= 2.0
        if hi > 1e300:
            raise NoBracketError(f"potential never exceeds E={E}")
    # scan for the last upward crossing so local dips cannot trap the bisection
    xs = np.geomspace(hi * 2.0 ** -12, hi * 4.0, 600)
    below = np.asarray(model(xs)) <= E
    if np.any(below):
        k = int(np.flatnonzero(below)[-1])
        lo, hi = float(xs[k]), float(xs[k + 1])
    else:
        lo, hi = 0.0, float(xs[0])
    while hi - lo > rtol * hi:
        mid = 0.5 * (lo + hi)
        if model.value(mid) <= E:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def _t_points(model: Potential, x_t: float) -> list[float]:
    return sorted(math.sqrt(x_t - b) for b in model.breakpoints if 0.0 < b < x_t)


def phase_integral(model: Potential, E: float, rtol: float = 1e-12) -> PhaseResult:
    """phi(E) = int_0^{x_T} sqrt(E - V(x)) dx."""
    x_t = turning_point(model, E)

    def integrand(t):
        d = E - model.value(x_t - t * t)
        return 2.0 * t * math.sqrt(d) if d > 0.0 else 0.0

    t_end = math.sqrt(x_t)
    phi, err = integrate.quad(integrand, 0.0, t_end, points=_t_points(model, x_t) or None,
                              epsabs=0.0, epsrel=rtol, limit=1000)
    if phi > 0.0 and err > 1e-9 * phi:
        raise QuadratureError(f"phase integral at E={E} did not converge (err={err:g})")
    return PhaseResult(float(E), x_t, phi, err)


def _phi(model: Potential, E: float) -> float:
    if not E > model.floor:
        return 0.0
    return phase_integral(model, E).phi


def counting_function(model: Potential, E: float, rule=PAPER_RULE) -> float:
    """Smooth WKB staircase phi(E) / (mu pi) - nu."""
    rule = get_rule(rule)
    return _phi(model, E) / (rule.mu * math.pi) - rule.nu


def wkb_eigenvalue(model: Potential, n: int, rule=PAPER_RULE, *,
                   start: float | None = None, rtol: float = 1e-12) -> float:
    """E_N solving phi(E_N) = mu pi (N + nu)."""
    if n < 0:
        raise ValueError("quantum number must be non-negative")
    rule = get_rule(rule)
    target = rule.target(n)

    def f(E):
        return _phi(model, E) - target

    if start is not None and f(start) < 0.0:
        lo = float(start)
    elif math.isfinite(model.floor):
        lo = float(model.floor)
    else:
        lo, step = 0.0, 1.0
        while f(lo) >= 0.0:
            lo -= step
            step *= 2.0
    step = max(1.0, abs(lo))
    hi = lo + step
    while f(hi) < 0.0:
        lo = hi
        step *= 2.0
        hi = lo + step
        if step > 1e300:
            raise NoBracketError(f"no bracket for level {n}")
    return optimize.brentq(f, lo, hi, xtol=1e-300, rtol=max(rtol, 4.5e-16), maxiter=500)


def wkb_spectrum(model: Potential, n_values, rule=PAPER_RULE) -> Spectrum:
    rule = get_rule(rule)
    ns = np.asarray(sorted(set(int(n) for n in n_values)), dtype=int)
    energies = []
    prev = None
    for n in ns:
        e = wkb_eigenvalue(model, int(n), rule, start=prev)
        energies.append(e)
        prev = e
    return Spectrum(np.array(energies), ns,
                    {"method": "wkb", "rule": rule.name, "mu": rule.mu, "nu": rule.nu})


def density_of_states(model: Potential, E: float, rule=PAPER_RULE,
                      rel_step: float = 1e-4) -> float:
    """dN/dE from a central difference of the phase integral."""
    rule = get_rule(rule)
    h = rel_step * max(abs(E), 1.0)
    dphi = (_phi(model, E + h) - _phi(model, E - h)) / (2.0 * h)
    return dphi / (rule.mu * math.pi)


_GL_X, _GL_W = np.polynomial.legendre.leggauss(8)


def gauss_panels(a: float, b: float, freq: float):
    """8-point Gauss-Legendre nodes and weights on [a, b], one panel per period."""
    n = int(math.ceil((b - a) * freq / (2.0 * math.pi))) + 8
    edges = np.linspace(a, b, n + 1)
    half = 0.5 * np.diff(edges)
    mid = 0.5 * (edges[1:] + edges[:-1])
    nodes = (mid[:, None] + half[:, None] * _GL_X[None, :]).ravel()
    weights = (half[:, None] * _GL_W[None, :]).ravel()
    return nodes, weights


def _odd(n: int) -> int:
    return n if n % 2 else n + 1


def _extrapolate_start(w):
    # value at t = 0 from the next two nodes (the node itself is 0/0)
    if w.size > 2:
        w[0] = max(2.0 * w[1] - w[2], 0.0)
    return w


@dataclass(eq=False)
class WkbState:
    """Sampled WKB eigenstate at one energy.

    Inside the well psi = A sin(phi(x)) / (E - V)**(1/4) with phi(0) = 0;
    beyond x_T psi = A exp(-kappa(x)) / (V - E)**(1/4). Both are sampled on
    substituted grids (x = x_T -+ t**2) that keep the integrands smooth.
    """

    model: Potential
    energy: float
    x_t: float
    phi_total: float
    norm_A: float
    node_count: int
    inner_mass: float
    tail_mass: float
    patch: float
    _t: np.ndarray = field(repr=False)
    _cum: np.ndarray = field(repr=False)
    _w: np.ndarray = field(repr=False)
    _piece_edges: list = field(repr=False)
    _s: np.ndarray = field(repr=False)
    _kappa: np.ndarray = field(repr=False)
    _tail_w: np.ndarray = field(repr=False)

    def _phase_at_t(self, t):
        return self.phi_total - PchipInterpolator(self._t, self._cum)(t)

    def __call__(self, x):
        arr = np.atleast_1d(np.asarray(x, dtype=float))
        out = np.zeros(arr.shape)
        lo = self.x_t * (1.0 - self.patch)
        hi = self.x_t * (1.0 + self.patch)
        if np.any((arr > lo) & (arr < hi)):
            raise TurningPointError(
                f"WKB form undefined within {self.patch:g} x_T of x_T={self.x_t:g}")
        inner = (arr > 0.0) & (arr <= lo)
        if np.any(inner):
            xi = arr[inner]
            ph = self._phase_at_t(np.sqrt(self.x_t - xi))
            d = np.maximum(self.energy - np.asarray(self.model(xi)), 1e-300)
            out[inner] = self.norm_A * np.sin(ph) / d ** 0.25
        outer = arr >= hi
        if np.any(outer):
            xo = arr[outer]
            s = np.sqrt(xo - self.x_t)
            inside = s <= self._s[-1]
            kap = np.full(s.shape, np.inf)
            kap[inside] = PchipInterpolator(self._s, self._kappa)(s[inside])
            d = np.maximum(np.asarray(self.model(xo)) - self.energy, 1e-300)
            out[outer] = self.norm_A * np.exp(-kap) / d ** 0.25
        return float(out[0]) if np.ndim(x) == 0 else out

    def expectation(self, f) -> float:
        """A^2 * int_0^{x_T} sin^2(phi) f(x) / sqrt(E - V) dx (tail excluded)."""
        total = 0.0
        for a, b in self._piece_edges:
            t = self._t[a:b]
            x = self.x_t - t * t
            y = np.sin(self.phi_total - self._cum[a:b]) ** 2 * self._w[a:b] * np.asarray(f(x))
            total += integrate.simpson(y, x=t)
        return self.norm_A ** 2 * total

    def patch_integral(self, f, freq: float = 0.0) -> float:
        """A^2 * int of sin^2(phi) f / sqrt(E - V) over [x_T (1 - patch), x_T].

        The integrable turning-point singularity is removed by x = x_T - t**2;
        ``freq`` is the highest angular frequency of f in x.
        """
        t_hi = math.sqrt(self.patch * self.x_t)
        rate = 2.0 * t_hi * (math.sqrt(max(self.energy - min(self.model.floor, 0.0), 1.0)) + freq)
        t, wq = gauss_panels(0.0, t_hi, rate)
        x = self.x_t - t * t
        d = self.energy - np.asarray(self.model(x))
        with np.errstate(divide="ignore", invalid="ignore"):
            w = np.where(d > 0.0, 2.0 * t / np.sqrt(d), 0.0)
        y = np.sin(self._phase_at_t(t)) ** 2 * w * np.asarray(f(x))
        return self.norm_A ** 2 * float(np.sum(wq * y))

    @property
    def tail_probability(self) -> float:
        return self.norm_A ** 2 * self.tail_mass


def _points_for(length, rate, per_radian):
    return _odd(max(401, int(math.ceil(length * rate * per_radian)) + 1))


def _build_state(model: Potential, E: float, patch: float, per_radian: float,
                 tail_decay: float) -> WkbState:
    x_t = turning_point(model, E)
    t_end = math.sqrt(x_t)
    edges = [0.0] + _t_points(model, x_t) + [t_end]
    lowest = min(0.0, model.floor) if math.isfinite(model.floor) else None
    ts, cums, ws, piece_edges = [], [], [], []
    acc = 0.0
    offset = 0
    for a, b in zip(edges[:-1], edges[1:]):
        if b - a <= 0.0:
            continue
        if lowest is None:
            rate = 2.0 * b * math.sqrt(max(E - model.value(max(x_t - b * b, 1e-300)), 1.0))
        else:
            rate = 2.0 * b * math.sqrt(E - lowest)
        m = _points_for(b - a, rate, per_radian)
        t = np.linspace(a, b, m)
        x = x_t - t * t
        if a == 0.0:
            x[0] = x_t
        # the far end of the last piece is the wall at x = 0
        if b == t_end:
            x[-1] = max(x[-1], 1e-300)
        d = np.maximum(E - np.asarray(model(np.maximum(x, 1e-300))), 0.0)
        p = 2.0 * t * np.sqrt(d)
        with np.errstate(divide="ignore", invalid="ignore"):
            w = np.where(d > 0.0, 2.0 * t / np.sqrt(d), 0.0)
        if a == 0.0:
            w = _extrapolate_start(w)
        if b == t_end and not np.isfinite(w[-1]):
            w[-1] = w[-2]
        cum = acc + integrate.cumulative_simpson(p, x=t, initial=0.0)
        acc = float(cum[-1])
        if ts:
            # drop the duplicated edge node; its left value wins for the phase
            t, cum, w = t[1:], cum[1:], w[1:]
            piece_edges.append((offset - 1, offset + t.size))
        else:
            piece_edges.append((0, t.size))
        ts.append(t)
        cums.append(cum)
        ws.append(w)
        offset += t.size
    t_all = np.concatenate(ts)
    cum_all = np.concatenate(cums)
    w_all = np.concatenate(ws)
    phi_total = float(cum_all[-1])

    inner = 0.0
    for a, b in piece_edges:
        t = t_all[a:b]
        y = np.sin(phi_total - cum_all[a:b]) ** 2 * w_all[a:b]
        inner += integrate.simpson(y, x=t)

    s, kappa, tail_w = _tail(model, E, x_t, tail_decay, per_radian)
    tail = integrate.simpson(np.exp(-2.0 * kappa) * tail_w, x=s)
    A = 1.0 / math.sqrt(inner + tail)
    nodes = max(int(math.ceil(phi_total / math.pi)) - 1, 0)
    return WkbState(model, float(E), x_t, phi_total, A, nodes, inner, tail, patch,
                    t_all, cum_all, w_all, piece_edges, s, kappa, tail_w)


def _tail(model, E, x_t, decay, per_radian):
    s_max = max(0.5, 0.1 * math.sqrt(x_t))
    while True:
        m = _odd(max(801, int(per_radian * 40)))
        s = np.linspace(0.0, s_max, m)
        x = x_t + s * s
        d = np.maximum(np.asarray(model(x)) - E, 0.0)
        q = 2.0 * s * np.sqrt(d)
        kappa = integrate.cumulative_simpson(q, x=s, initial=0.0)
        if kappa[-1] >= decay or s_max > 1e6:
            break
        s_max *= 2.0
    with np.errstate(divide="ignore", invalid="ignore"):
        w = np.where(d > 0.0, 2.0 * s / np.sqrt(d), 0.0)
    w = _extrapolate_start(w)
    return s, kappa, w


@lru_cache(maxsize=256)
def wkb_state(model: Potential, E: float, patch: float = 0.05,
              per_radian: float = 16.0, tail_decay: float = 20.0) -> WkbState:
    return _build_state(model, float(E), patch, per_radian, tail_decay)


def wkb_wavefunction(model: Potential, E: float, x, patch: float = 0.05):
    """Normalised WKB wavefunction at x; raises inside the Airy patch."""
    return wkb_state(model, float(E), patch)(x)


@dataclass(frozen=True)
class NormResult:
    A_numeric: float
    A_closed: float
    tail_probability: float


def closed_form_norm(x_t: float) -> float:
    """Stationary-phase amplitude A from the log(x_T) expansion."""
    lx = math.log(x_t)
    a2 = 1.0 / (math.sqrt(2.0) * lx + (2.0 * x_t / lx ** 3) ** (-2.0 / 3.0))
    return math.sqrt(a2)


def wkb_norm(model: Potential, E: float) -> NormResult:
    st = wkb_state(model, float(E))
    return NormResult(st.norm_A, closed_form_norm(st.x_t), st.tail_probability)
