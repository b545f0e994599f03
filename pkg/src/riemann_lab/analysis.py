"""Staircases, dispersion-law fits, spectrum/zero comparisons and report output."""
from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

from riemann_lab.spectrum import Spectrum
from riemann_lab.zeros import ZeroSet

LAWS = ("power", "linear-log", "exp", "log")
MIN_FIT_SAMPLES = 20


class UnderdeterminedFitError(ValueError):
    pass


class EmptyWindowError(ValueError):
    pass


class DegenerateInputError(ValueError):
    pass


@dataclass(frozen=True, eq=False)
class CountingCurve:
    """Inclusive staircase samples: counts[k] = #{levels <= energies[k]}."""

    energies: np.ndarray
    counts: np.ndarray
    model: str = ""
    rule: str = ""

    def __post_init__(self):
        e = np.asarray(self.energies, dtype=float)
        n = np.asarray(self.counts, dtype=float)
        if e.shape != n.shape or e.ndim != 1:
            raise ValueError("energies and counts must be 1-D and equally long")
        if e.size > 1 and (np.any(np.diff(e) < 0.0) or np.any(np.diff(n) < 0.0)):
            raise ValueError("staircase samples must be ascending")
        object.__setattr__(self, "energies", e)
        object.__setattr__(self, "counts", n)

    def __len__(self):
        return int(self.energies.size)

    def __call__(self, E):
        """Step value N(E); below the first sample it is counts[0] - 1."""
        k = np.searchsorted(self.energies, E, side="right")
        base = self.counts[0] - 1.0 if self.counts.size else 0.0
        padded = np.concatenate(([base], self.counts))
        return padded[k]

    def window(self, lo: float, hi: float) -> "CountingCurve":
        m = (self.energies >= lo) & (self.energies <= hi)
        return CountingCurve(self.energies[m], self.counts[m], self.model, self.rule)


def staircase(spectrum: Spectrum, model: str = "", rule: str | None = None) -> CountingCurve:
    if len(spectrum) == 0:
        raise DegenerateInputError("empty spectrum")
    rule = spectrum.provenance.get("rule", "") if rule is None else rule
    return CountingCurve(spectrum.eigenvalues, spectrum.indices + 1.0, model, rule)


def zero_staircase(zs: ZeroSet) -> CountingCurve:
    return CountingCurve(zs.alpha, np.arange(1, len(zs) + 1, dtype=float), "zeros", "")


def riemann_mean_count(E):
    """(E / 2pi)(log(E / 2pi) - 1)."""
    u = np.asarray(E, dtype=float) / (2.0 * math.pi)
    return u * (np.log(u) - 1.0)


@dataclass(frozen=True)
class DispersionFit:
    law: str
    params: dict
    rms_residual: float
    window: tuple[float, float]
    n_samples: int


def fit_dispersion(curve: CountingCurve, law: str = "power",
                   window: tuple[float, float] | None = None) -> DispersionFit:
    """Least-squares fit of N(E) to one of the laws in ``LAWS``.

    power:      log N = p log E + c             (residual in log N)
    linear-log: N = (E/2pi)(log(E/2pi) - 1) + c (relative residual)
    exp:        log N = r E + c                 (residual in log N)
    log:        N = s log E + c                 (relative residual)
    """
    if law not in LAWS:
        raise ValueError(f"unknown law {law!r}; choose from {LAWS}")
    if window is not None:
        curve = curve.window(*window)
    E, N = curve.energies, curve.counts
    if E.size < MIN_FIT_SAMPLES:
        raise UnderdeterminedFitError(
            f"{E.size} samples in the fit window, need at least {MIN_FIT_SAMPLES}")
    win = (float(E[0]), float(E[-1]))
    if law in ("power", "exp"):
        if np.any(N <= 0.0) or (law == "power" and np.any(E <= 0.0)):
            raise UnderdeterminedFitError("log fits need positive samples")
        xs = np.log(E) if law == "power" else E
        slope, icpt = np.polyfit(xs, np.log(N), 1)
        resid = np.log(N) - (slope * xs + icpt)
        key = "exponent" if law == "power" else "rate"
        params = {key: float(slope), "log_prefactor": float(icpt)}
    elif law == "linear-log":
        base = riemann_mean_count(E)
        c = float(np.mean(N - base))
        resid = (N - base - c) / N
        params = {"offset": c}
    else:
        slope, icpt = np.polyfit(np.log(E), N, 1)
        resid = (N - (slope * np.log(E) + icpt)) / N
        params = {"slope": float(slope), "offset": float(icpt)}
    rms = float(np.sqrt(np.mean(resid ** 2)))
    return DispersionFit(law, params, rms, win, int(E.size))


def envelope_exponent(x, y, blocks: int = 5) -> float:
    """Log-log slope of the RMS of y over equal-count blocks of ascending x.

    Sign changes make log|y| useless for a direct fit; block RMS tracks the
    amplitude of an oscillating sequence instead.
    """
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    if x.size < 2 * blocks or blocks < 3:
        raise UnderdeterminedFitError("need at least 3 blocks of 2 samples each")
    order = np.argsort(x)
    px, py = [], []
    for chunk in np.array_split(order, blocks):
        px.append(float(np.exp(np.mean(np.log(x[chunk])))))
        py.append(float(np.sqrt(np.mean(y[chunk] ** 2))))
    if min(py) <= 0.0:
        raise UnderdeterminedFitError("a block has zero amplitude")
    return float(np.polyfit(np.log(px), np.log(py), 1)[0])


@dataclass(frozen=True)
class CountComparison:
    window: tuple[float, float]
    shift: float
    mean_abs_residual: float
    max_abs_residual: float
    mean_count: float
    n_points: int

    @property
    def relative(self) -> float:
        return self.mean_abs_residual / self.mean_count if self.mean_count else math.inf


def compare_counts(spectrum: Spectrum, zs: ZeroSet, window: tuple[float, float]) -> CountComparison:
    """N_spectrum(E) - N_zeros(E) over a window, after the median constant shift.

    The shift absorbs the O(1) offset between quantisation rules. Residuals
    are sampled at every step of either staircase inside the window.
    """
    lo, hi = float(window[0]), float(window[1])
    if len(spectrum) == 0 or len(zs) == 0:
        raise EmptyWindowError("both sequences must be non-empty")
    lo_eff = max(lo, float(spectrum.eigenvalues[0]), float(zs.alpha[0]))
    hi_eff = min(hi, float(spectrum.eigenvalues[-1]), float(zs.alpha[-1]))
    if not lo_eff < hi_eff:
        raise EmptyWindowError(f"window [{lo}, {hi}] does not overlap both sequences")
    s_curve, z_curve = staircase(spectrum), zero_staircase(zs)
    pts = np.concatenate(([lo_eff, hi_eff], spectrum.eigenvalues, zs.alpha))
    pts = np.unique(pts[(pts >= lo_eff) & (pts <= hi_eff)])
    d = s_curve(pts) - z_curve(pts)
    shift = float(np.median(d))
    r = np.abs(d - shift)
    return CountComparison((lo_eff, hi_eff), shift, float(r.mean()), float(r.max()),
                           float(np.mean(z_curve(pts))), int(pts.size))


@dataclass(frozen=True, eq=False)
class Histogram:
    edges: np.ndarray
    counts: np.ndarray
    spacings: np.ndarray = field(repr=False)

    @property
    def fractions(self) -> np.ndarray:
        return self.counts / max(self.counts.sum(), 1)


def zero_density(T):
    """Mean zero density (1/2pi) log(T/2pi)."""
    return np.log(np.asarray(T, dtype=float) / (2.0 * math.pi)) / (2.0 * math.pi)


def spacing_histogram(values: Sequence[float], bins: int,
                      density: Callable | None = None, upper: float = 4.0) -> Histogram:
    """Histogram of consecutive gaps unfolded by ``density`` and scaled to mean 1."""
    if bins <= 0:
        raise ValueError("bins must be positive")
    v = np.asarray(values, dtype=float)
    if v.size < 2:
        raise DegenerateInputError("need at least two values")
    gaps = np.diff(v)
    if np.any(gaps <= 0.0):
        raise DegenerateInputError("values must be strictly increasing")
    if density is not None:
        gaps = gaps * np.asarray(density(0.5 * (v[1:] + v[:-1])), dtype=float)
    s = gaps / gaps.mean()
    top = max(upper, float(s.max()) * (1.0 + 1e-12))
    counts, edges = np.histogram(s, bins=bins, range=(0.0, top))
    return Histogram(edges, counts, s)


# ---------------------------------------------------------------- reports


def format_value(v) -> str:
    if isinstance(v, (bool, np.bool_)):
        return "true" if v else "false"
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    if isinstance(v, (float, np.floating)):
        v = float(v)
        if math.isnan(v):
            return "nan"
        if math.isinf(v):
            return "inf" if v > 0 else "-inf"
        return f"{v:.12g}"
    return str(v)


def _json_value(v):
    if isinstance(v, (bool, np.bool_)):
        return bool(v)
    if isinstance(v, (int, np.integer)):
        return int(v)
    if isinstance(v, (float, np.floating)):
        v = float(v)
        return float(format_value(v)) if math.isfinite(v) else format_value(v)
    if isinstance(v, dict):
        return {k: _json_value(x) for k, x in v.items()}
    if isinstance(v, (list, tuple)):
        return [_json_value(x) for x in v]
    return v


@dataclass
class Report:
    """Tabular result with run metadata.

    CSV: ``# key: value`` metadata lines, a header row, then one record per
    row. JSON: ``{"metadata": {...}, "columns": [...], "rows": [[...], ...]}``.
    Floats carry 12 significant digits in both.
    """

    columns: list[str]
    rows: list[list] = field(default_factory=list)
    metadata: dict = field(default_factory=dict)

    def add(self, *values):
        if len(values) != len(self.columns):
            raise ValueError(f"expected {len(self.columns)} values, got {len(values)}")
        self.rows.append(list(values))

    def to_csv(self) -> str:
        buf = io.StringIO()
        for k, v in self.metadata.items():
            buf.write(f"# {k}: {format_value(v)}\n")
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(self.columns)
        for row in self.rows:
            w.writerow([format_value(v) for v in row])
        return buf.getvalue()

    def to_json(self) -> str:
        doc = {"metadata": _json_value(self.metadata), "columns": list(self.columns),
               "rows": [[_json_value(v) for v in row] for row in self.rows]}
        return json.dumps(doc, indent=2) + "\n"

    def render(self, fmt: str = "csv") -> str:
        if fmt == "csv":
            return self.to_csv()
        if fmt == "json":
            return self.to_json()
        raise ValueError(f"unknown format {fmt!r}")


def csv_data_section(text: str) -> str:
    """CSV text without its ``#`` metadata lines."""
    return "".join(line for line in text.splitlines(keepends=True) if not line.startswith("#"))
