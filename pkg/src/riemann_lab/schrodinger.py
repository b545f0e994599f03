"""Grid eigenvalue solver for -psi'' + V psi = E psi on (0, x_max), psi = 0 at both ends."""
from __future__ import annotations

import math
from dataclasses import dataclass, replace

import numpy as np
from scipy import linalg

from riemann_lab import kernels
from riemann_lab.potential import Potential
from riemann_lab.quantizer import STANDARD_RULE, turning_point, wkb_eigenvalue
from riemann_lab.spectrum import Spectrum

METHODS = ("fd", "numerov")

# 3-point Gauss-Legendre on [-1, 1]
_GL_NODES = np.array([-math.sqrt(0.6), 0.0, math.sqrt(0.6)])
_GL_WEIGHTS = np.array([5.0, 8.0, 5.0]) / 9.0


class GridTooCoarseError(RuntimeError):
    """Richardson consistency check failed after all refinements."""


@dataclass(frozen=True)
class GridSpec:
    """Discretisation settings.

    x_max <= 0 means "choose from the WKB estimate". With ``auto_extend`` the
    domain is widened to 1.25 x_T of the highest requested level and until the
    barrier integral beyond x_T reaches ``decay``.
    """

    x_max: float = 0.0
    n_points: int = 2000
    method: str = "fd"
    rel_tol: float = 1e-7
    margin: float = 1.25
    decay: float = 25.0
    auto_extend: bool = True
    refinements: int = 3
    points_per_radian: float = 12.0

    def __post_init__(self):
        if self.n_points < 1000:
            raise ValueError("n_points must be at least 1000")
        if self.method not in METHODS:
            raise ValueError(f"method must be one of {METHODS}")
        if not self.auto_extend and not self.x_max > 0.0:
            raise ValueError("a fixed grid needs x_max > 0")
        if not 0.0 < self.rel_tol < 1e-2:
            raise ValueError("rel_tol must lie in (0, 1e-2)")


def _cell_average(model: Potential, x: np.ndarray, h: float) -> np.ndarray:
    lo = x - 0.5 * h
    mid = 0.5 * h * _GL_NODES
    vals = np.asarray(model((x[:, None] + mid[None, :]).ravel())).reshape(x.size, 3)
    avg = vals @ _GL_WEIGHTS / 2.0
    for b in model.breakpoints:
        k = int(math.floor((b - lo[0]) / h))
        if 0 <= k < x.size and lo[k] < b < lo[k] + h:
            avg[k] = _split_average(model, lo[k], lo[k] + h, b)
    return avg


def _split_average(model, a, c, b):
    total = 0.0
    for u, v in ((a, b), (b, c)):
        xs = 0.5 * (u + v) + 0.5 * (v - u) * _GL_NODES
        total += 0.5 * (v - u) * float(np.dot(_GL_WEIGHTS, model(xs)))
    return total / (c - a)


def _point_values(model: Potential, x: np.ndarray, h: float) -> np.ndarray:
    # Numerov keeps its fourth order with point values; only jump cells are averaged
    vals = np.asarray(model(x), dtype=float)
    for b in model.breakpoints:
        k = int(round(b / h)) - 1
        for j in (k - 1, k, k + 1):
            if 0 <= j < x.size and x[j] - 0.5 * h < b < x[j] + 0.5 * h:
                vals[j] = _split_average(model, x[j] - 0.5 * h, x[j] + 0.5 * h, b)
    return vals


def _fd_levels(model, x_max, n, count, vectors=False):
    h = x_max / (n + 1)
    x = h * np.arange(1, n + 1)
    diag = 2.0 / h ** 2 + _cell_average(model, x, h)
    off = np.full(n - 1, -1.0 / h ** 2)
    if vectors:
        w, v = linalg.eigh_tridiagonal(diag, off, select="i", select_range=(0, count - 1))
        return w, x, v.T
    w = linalg.eigh_tridiagonal(diag, off, eigvals_only=True, select="i",
                                select_range=(0, count - 1))
    return w, x, None


def _zero_count(psi: np.ndarray) -> int:
    s = np.sign(psi[1:])
    s = s[s != 0.0]
    return int(np.count_nonzero(s[1:] != s[:-1]))


def _numerov_level(model, x_max, n, level, guess, rtol=1e-12):
    h = x_max / n
    x = h * np.arange(n + 1)
    v = _point_values(model, np.maximum(x, 1e-300), h)
    v[0] = v[1] if not np.isfinite(v[0]) else v[0]

    def shoot(E):
        psi, _ = kernels.numerov(v - E, h)
        return psi

    def count(E):
        return _zero_count(shoot(E))

    width = 1e-3 * max(abs(guess), 1.0)
    lo, hi = guess - width, guess + width
    while count(lo) > level:
        lo -= width
        width *= 2.0
    width = 1e-3 * max(abs(guess), 1.0)
    while count(hi) <= level:
        hi += width
        width *= 2.0
    while hi - lo > 1e-6 * max(abs(hi), 1.0):
        mid = 0.5 * (lo + hi)
        if count(mid) > level:
            hi = mid
        else:
            lo = mid
    f_lo = shoot(lo)[-1]
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        f_mid = shoot(mid)[-1]
        if (f_mid > 0.0) == (f_lo > 0.0):
            lo, f_lo = mid, f_mid
        else:
            hi = mid
        if hi - lo <= rtol * max(abs(hi), 1.0):
            break
    return 0.5 * (lo + hi)


def _richardson(e0, e1, e2, p):
    f = 2.0 ** p
    r1 = (f * e1 - e0) / (f - 1.0)
    r2 = (f * e2 - e1) / (f - 1.0)
    return r1, r2


def _decay_point(model, E, x_t, decay):
    """Smallest x beyond x_T where int_{x_T}^x sqrt(V - E) reaches ``decay``."""
    step = 0.02 * max(x_t, 1.0)
    acc, x = 0.0, x_t
    prev = 0.0
    while acc < decay:
        nxt = math.sqrt(max(model.value(x + step) - E, 0.0))
        acc += 0.5 * (prev + nxt) * step
        prev = nxt
        x += step
        if x > 1e8 * max(x_t, 1.0):
            break
    return x


def choose_x_max(model: Potential, grid: GridSpec, count: int, energy: float | None = None) -> float:
    if not grid.auto_extend:
        return grid.x_max
    if energy is None:
        energy = wkb_eigenvalue(model, count - 1, STANDARD_RULE)
    energy = energy + 0.05 * abs(energy) + 1.0
    x_t = turning_point(model, energy)
    return max(grid.x_max, grid.margin * x_t, _decay_point(model, energy, x_t, grid.decay))


def _grid_points(model, grid, x_max, energy):
    lowest = model.floor if math.isfinite(model.floor) else min(0.0, float(model.value(1e-12)))
    k = math.sqrt(max(energy - min(lowest, 0.0), 1.0))
    return max(grid.n_points, int(math.ceil(grid.points_per_radian * x_max * k)))


def solve_spectrum(model: Potential, grid: GridSpec | None = None, count: int = 5,
                   wavefunctions: bool = False) -> Spectrum:
    """Lowest ``count`` eigenvalues, Richardson-extrapolated over h, h/2, h/4."""
    if count < 1:
        raise ValueError("count must be at least 1")
    grid = grid or GridSpec()
    x_max = choose_x_max(model, grid, count)
    energies, n, x, vecs = _solve_validated(model, grid, x_max, count, wavefunctions)
    if grid.auto_extend:
        # iterate once with the extrapolated top level
        x_new = choose_x_max(model, grid, count, energy=float(energies[-1]))
        if x_new > x_max * (1.0 + 1e-9):
            x_max = x_new
            energies, n, x, vecs = _solve_validated(model, grid, x_max, count, wavefunctions)
    prov = {"method": grid.method, "x_max": x_max, "n_points": n,
            "rel_tol": grid.rel_tol, "extrapolation": "richardson h, h/2, h/4"}
    return Spectrum(energies, np.arange(count), prov, x, vecs)


def _solve_validated(model, grid, x_max, count, want_vectors):
    n = _grid_points(model, grid, x_max, wkb_eigenvalue(model, count - 1, STANDARD_RULE))
    worst = float("nan")
    for _ in range(grid.refinements + 1):
        fine, x, vecs = _fd_levels(model, x_max, 2 * n, count, vectors=want_vectors)
        if grid.method == "fd":
            e0, _, _ = _fd_levels(model, x_max, n, count)
            e2, _, _ = _fd_levels(model, x_max, 4 * n, count)
            r1, r2 = _richardson(e0, fine, e2, 2)
        else:
            levels = np.empty((3, count))
            for j, m in enumerate((n, 2 * n, 4 * n)):
                for lvl in range(count):
                    levels[j, lvl] = _numerov_level(model, x_max, m, lvl, fine[lvl])
            r1, r2 = _richardson(levels[0], levels[1], levels[2], 4)
        scale = np.maximum(np.abs(r2), 1e-300)
        worst = float(np.max(np.abs(r2 - r1) / scale))
        if worst < 10.0 * grid.rel_tol:
            if want_vectors:
                vecs = _normalise(x, vecs, x_max)
            return r2, 2 * n, x, vecs
        n *= 2
    raise GridTooCoarseError(
        f"Richardson estimates disagree by {worst:.3g} relative (> {10 * grid.rel_tol:g})")


def _normalise(x, vecs, x_max):
    h = x[1] - x[0]
    out = np.empty_like(vecs)
    for i, v in enumerate(vecs):
        # interior nodes only; both boundary samples are zero
        v = v / math.sqrt(float(np.sum(v * v)) * h)
        k = int(np.flatnonzero(np.abs(v) > 1e-8 * np.max(np.abs(v)))[0])
        out[i] = v if v[k] > 0 else -v
    return out


def eigenfunction(model: Potential, grid: GridSpec | None, n: int, count: int | None = None):
    """(x, psi) for level n on the validated grid, boundary samples included."""
    count = n + 1 if count is None else count
    if not 0 <= n < count:
        raise IndexError(f"level {n} outside 0..{count - 1}")
    spec = solve_spectrum(model, grid, count, wavefunctions=True)
    x = np.concatenate(([0.0], spec.x, [spec.provenance["x_max"]]))
    psi = np.concatenate(([0.0], spec.wavefunctions[n], [0.0]))
    return x, psi


def node_count(psi) -> int:
    """Sign changes of psi strictly inside the domain."""
    return _zero_count(np.asarray(psi)[:-1])


def with_method(grid: GridSpec, method: str) -> GridSpec:
    return replace(grid, method=method)
