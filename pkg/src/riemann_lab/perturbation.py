"""First-order energy shifts from the zero-driven part of the Riemann potential."""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np
from scipy.interpolate import CubicSpline

from riemann_lab.potential import (RIEMANN_CUTOFF, Potential, SMode, fluctuation_S,
                                   perturbation_potential)
from riemann_lab.quantizer import (PAPER_RULE, gauss_panels, get_rule, turning_point,
                                   wkb_eigenvalue, wkb_state)
from riemann_lab.schrodinger import GridSpec, solve_spectrum
from riemann_lab.specfun import DomainError, beta_function
from riemann_lab.zeros import ZeroSet

class StateSource(str, enum.Enum):
    WKB = "wkb"
    EXACT = "exact"


class ClosedForm(str, enum.Enum):
    LINEAR = "linear"
    RH = "rh"
    INTEGRAL = "integral"


class MissingStateError(IndexError):
    pass


class DivergenceError(RuntimeError):
    pass


@dataclass(frozen=True)
class ClosedFormParams:
    delta: float = 1.5
    alpha_1: float = 14.134725141734693

    def __post_init__(self):
        if not self.delta > 0.0:
            raise ValueError("delta must be positive")
        if not self.alpha_1 > 0.0:
            raise ValueError("alpha_1 must be positive")

    @classmethod
    def from_zeros(cls, zeros: ZeroSet, delta: float = 1.5) -> "ClosedFormParams":
        if len(zeros) == 0:
            return cls(delta)
        return cls(delta, float(zeros.alpha[0]))

    @property
    def C(self) -> float:
        return beta_function(self.delta + 1.0, 0.5)


# the RH closed form carries 3pi/4 while the linear application uses
# B(5/2, 1/2) = 3pi/8; both are kept and reported
RH_PREFACTOR = 3.0 * math.pi / 4.0


@dataclass(frozen=True)
class MatrixElement:
    value: float
    tail_bound: float
    energy: float
    x_t: float
    source: str

    def __float__(self):
        return self.value


@dataclass(frozen=True)
class PerturbedLevel:
    N: int
    E_N0: float
    E_N1_numeric: float
    E_N1_closed: float
    x_T: float
    tail_bound: float = 0.0


def _integrate_density(density, x_lo, x_hi, zeros, mode, k_max, alpha_budget):
    """int density(x) V_RP(x) dx over [x_lo, x_hi] in the variable u = ln x."""
    if x_hi <= x_lo or len(zeros) == 0:
        return 0.0
    top = max(float(zeros.alpha[-1]), alpha_budget)
    u, w = gauss_panels(math.log(x_lo), math.log(x_hi), top + 2.0 * k_max * x_hi)
    x = np.exp(u)
    return float(np.sum(w * x * density(x) * perturbation_potential(x, zeros, mode)))


@lru_cache(maxsize=16)
def _exact_states(model0: Potential, count: int, grid: GridSpec):
    spec = solve_spectrum(model0, grid, count, wavefunctions=True)
    x_max = spec.provenance["x_max"]
    x = np.concatenate(([0.0], spec.x, [x_max]))
    return spec, x


def first_order_numeric(model0: Potential, zeros: ZeroSet, mode: SMode, n: int,
                        source: StateSource | str = StateSource.EXACT, *,
                        rule=PAPER_RULE, energy: float | None = None,
                        grid: GridSpec | None = None, count: int | None = None,
                        alpha_budget: float = 0.0, patch: float = 0.05,
                        patch_mode: str = "exclude") -> MatrixElement:
    """<psi_N| V_RP |psi_N> restricted to [0, x_T].

    ``source`` picks the WKB state at ``energy`` (default: the WKB level N
    under ``rule``) or the grid eigenvector of level N. The part beyond x_T
    is left out; its size is returned as ``tail_bound``. For WKB states the
    Airy patch below x_T is either skipped (``patch_mode="exclude"``, its
    weight then joins the bound) or integrated through the turning-point
    substitution (``"substitute"``).
    """
    if patch_mode not in ("exclude", "substitute"):
        raise ValueError("patch_mode must be 'exclude' or 'substitute'")
    source = StateSource(source)
    mode = SMode(mode)
    if n < 0:
        raise MissingStateError("quantum number must be non-negative")
    if source is StateSource.WKB:
        E = wkb_eigenvalue(model0, n, get_rule(rule)) if energy is None else float(energy)
        st = wkb_state(model0, E, patch)
        x_t = st.x_t
        k_max = math.sqrt(max(E - min(model0.floor, 0.0), 1.0))
        hi = x_t * (1.0 - patch)
        val = _integrate_density(lambda x: st(x) ** 2, RIEMANN_CUTOFF, hi, zeros, mode,
                                 k_max, alpha_budget)
        v_edge = _max_abs_vrp(zeros, mode, hi, 3.0 * x_t)
        if patch_mode == "substitute" and len(zeros):
            top = max(float(zeros.alpha[-1]), alpha_budget)
            val += st.patch_integral(lambda x: perturbation_potential(x, zeros, mode),
                                     freq=top / max(hi, RIEMANN_CUTOFF))
            skipped = st.tail_probability
        else:
            skipped = st.tail_probability + st.patch_integral(np.ones_like)
        return MatrixElement(val, skipped * v_edge, E, x_t, source.value)

    grid = grid or GridSpec()
    count = n + 1 if count is None else count
    if n >= count:
        raise MissingStateError(f"level {n} not among the {count} solved states")
    spec, x = _exact_states(model0, int(count), grid)
    E = float(spec.eigenvalues[n])
    psi = np.concatenate(([0.0], spec.wavefunctions[n], [0.0]))
    spline = CubicSpline(x, psi)
    x_t = turning_point(model0, E)
    k_max = math.sqrt(max(E - min(model0.floor, 0.0), 1.0))
    val = _integrate_density(lambda t: spline(t) ** 2, RIEMANN_CUTOFF, x_t, zeros, mode,
                             k_max, alpha_budget)
    beyond = x >= x_t
    tail_mass = float(np.trapezoid(psi[beyond] ** 2, x[beyond])) if np.count_nonzero(beyond) > 1 else 0.0
    tail = tail_mass * _max_abs_vrp(zeros, mode, x_t, float(x[-1]))
    return MatrixElement(val, tail, E, x_t, source.value)


def _max_abs_vrp(zeros, mode, lo, hi):
    if len(zeros) == 0 or hi <= RIEMANN_CUTOFF:
        return 0.0
    xs = np.linspace(max(lo, RIEMANN_CUTOFF), hi, 512)
    return float(np.max(np.abs(perturbation_potential(xs, zeros, mode))))


def _check_xt(x_t):
    if not x_t >= RIEMANN_CUTOFF:
        raise DomainError(f"closed forms need x_T >= 2, got {x_t}")


def rh_closed_form(x_t: float, params: ClosedFormParams) -> float:
    _check_xt(x_t)
    a1 = params.alpha_1
    lx = math.log(x_t)
    amp = RH_PREFACTOR * x_t ** 1.5 / lx ** 2 * math.log(a1) / a1
    return -amp * math.cos(a1 * lx)


def rh_closed_form_correction(x_t: float, params: ClosedFormParams) -> float:
    """Size of the dropped O(1/log x_T) term of the RH closed form."""
    return abs(rh_closed_form(x_t, params)) / math.log(x_t)


def _F(x: float, a1: float) -> float:
    lx = math.log(x)
    return -x ** 1.5 / lx * (1.5 * math.cos(a1 * lx) + a1 * math.sin(a1 * lx))


def integral_closed_form(x_t: float, params: ClosedFormParams) -> float:
    _check_xt(x_t)
    a1 = params.alpha_1
    pre = 2.0 ** 0.75 * 3.0 * math.pi / (4.0 * (2.25 + a1 * a1) * math.log(x_t))
    return -pre * (_F(x_t, a1) - _F(RIEMANN_CUTOFF, a1)) * math.log(a1) / a1


def first_order_closed(x_t: float, params: ClosedFormParams | None = None,
                       form: ClosedForm | str = ClosedForm.LINEAR, *,
                       zeros: ZeroSet | None = None, mode: SMode = SMode.TERM_SUM) -> float:
    """Closed-form E_N1 at turning point x_T.

    LINEAR is C * V_RP(x_T) with C = B(delta + 1, 1/2) and needs ``zeros``;
    RH and INTEGRAL use only alpha_1.
    """
    form = ClosedForm(form)
    params = params or (ClosedFormParams.from_zeros(zeros) if zeros is not None
                        else ClosedFormParams())
    if form is ClosedForm.RH:
        return rh_closed_form(x_t, params)
    if form is ClosedForm.INTEGRAL:
        return integral_closed_form(x_t, params)
    _check_xt(x_t)
    if zeros is None:
        raise ValueError("the linear application needs a zero set")
    return params.C * float(perturbation_potential(x_t, zeros, mode))


def perturbed_spectrum(model0: Potential, zeros: ZeroSet, mode: SMode, n_values,
                       rule=PAPER_RULE, *, source: StateSource | str = StateSource.WKB,
                       form: ClosedForm | str = ClosedForm.LINEAR,
                       params: ClosedFormParams | None = None,
                       grid: GridSpec | None = None) -> list[PerturbedLevel]:
    rule = get_rule(rule)
    source = StateSource(source)
    params = params or ClosedFormParams.from_zeros(zeros)
    ns = sorted(set(int(n) for n in n_values))
    count = (max(ns) + 1) if ns else 0
    out = []
    prev = None
    for n in ns:
        e0 = wkb_eigenvalue(model0, n, rule, start=prev)
        prev = e0
        x_t = turning_point(model0, e0)
        if len(zeros) == 0:
            out.append(PerturbedLevel(n, e0, 0.0, 0.0, x_t))
            continue
        if source is StateSource.WKB:
            me = first_order_numeric(model0, zeros, mode, n, source, energy=e0)
        else:
            me = first_order_numeric(model0, zeros, mode, n, source, grid=grid, count=count)
        closed = first_order_closed(max(x_t, RIEMANN_CUTOFF), params, form, zeros=zeros,
                                    mode=mode)
        out.append(PerturbedLevel(n, e0, me.value, closed, x_t, me.tail_bound))
    return out


@dataclass(frozen=True)
class AttractorStep:
    step: int
    alpha: np.ndarray = field(repr=False)
    max_shift: float
    mean_shift: float


def attractor_iteration(zeros: ZeroSet, rule=PAPER_RULE, steps: int = 1, *,
                        n_levels: int | None = None, model0: Potential | None = None,
                        params: ClosedFormParams | None = None,
                        mode: SMode = SMode.TERM_SUM) -> list[AttractorStep]:
    """Iterate alpha_N <- E_N0 + C (x_T / ln x_T) S(x_T) on the first n_levels zeros.

    Exploratory only. Zeros above n_levels stay as given; the updated heights
    are re-sorted so the set stays ascending.
    """
    from riemann_lab.potential import RiemannPrincipal

    if steps < 1:
        raise ValueError("steps must be at least 1")
    rule = get_rule(rule)
    model0 = model0 or RiemannPrincipal()
    params = params or ClosedFormParams.from_zeros(zeros)
    n_levels = len(zeros) if n_levels is None else int(n_levels)
    energies = np.array(wkb_spectrum_values(model0, n_levels, rule))
    x_t = np.array([max(turning_point(model0, e), RIEMANN_CUTOFF) for e in energies])
    current = zeros
    history = []
    for k in range(1, steps + 1):
        old = np.array(current.alpha[:n_levels])
        if old.size < n_levels:
            # levels without a zero start from the unperturbed energy
            old = np.concatenate((old, energies[old.size:]))
        if len(current):
            s = np.asarray(fluctuation_S(x_t, current, mode))
        else:
            s = np.zeros(n_levels)
        new = energies + params.C * x_t / np.log(x_t) * s
        if np.any(np.abs(new) > 10.0 * np.abs(old)):
            raise DivergenceError(f"a height grew more than tenfold at step {k}")
        shift = np.abs(new - old)
        alpha = np.concatenate((new, current.alpha[n_levels:]))
        a_part = np.concatenate((np.asarray(current.a)[:n_levels],
                                 np.full(max(n_levels - len(current), 0), 0.5),
                                 np.asarray(current.a)[n_levels:]))
        history.append(AttractorStep(k, alpha, float(shift.max(initial=0.0)),
                                     float(shift.mean()) if shift.size else 0.0))
        order = np.argsort(alpha, kind="stable")
        if np.any(alpha <= 0.0) or np.any(np.diff(alpha[order]) <= 0.0):
            raise DivergenceError(f"heights collapsed or turned non-positive at step {k}")
        current = ZeroSet(a_part[order], alpha[order], "synthetic")
    return history


def wkb_spectrum_values(model0, count, rule):
    out, prev = [], None
    for n in range(count):
        prev = wkb_eigenvalue(model0, n, rule, start=prev)
        out.append(prev)
    return out
