"""Riemann-zero tables, synthetic off-line zero configurations, counting law."""
from __future__ import annotations

import math
import os
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterator, Sequence

import numpy as np

ZEROS_ENV_VAR = "RIEMANN_LAB_ZEROS"
BUNDLED_ZEROS = Path(__file__).with_name("data") / "zeros.txt"


class ZeroTableError(ValueError):
    """Malformed or mis-ordered zero table."""


@dataclass(frozen=True)
class Zero:
    """Nontrivial zero a + i*alpha; its conjugate is always implied."""

    a: float
    alpha: float

    def __post_init__(self):
        if not 0.0 < self.a < 1.0:
            raise ValueError(f"real part {self.a} outside the strip (0, 1)")
        if not self.alpha > 0.0:
            raise ValueError(f"imaginary part must be positive, got {self.alpha}")


@dataclass(frozen=True, eq=False)
class ZeroSet:
    """Immutable, alpha-ascending collection of zeros."""

    a: np.ndarray
    alpha: np.ndarray
    source: str = "synthetic"
    label: str = field(default="", compare=False)

    def __post_init__(self):
        a = np.array(self.a, dtype=float).ravel()
        alpha = np.array(self.alpha, dtype=float).ravel()
        if a.shape != alpha.shape:
            raise ValueError("a and alpha must have the same length")
        if a.size:
            if np.any(a <= 0.0) or np.any(a >= 1.0):
                raise ValueError("real parts must lie strictly inside (0, 1)")
            if np.any(alpha <= 0.0):
                raise ValueError("imaginary parts must be positive")
            if np.any(np.diff(alpha) <= 0.0):
                raise ZeroTableError("zeros must be strictly ascending in alpha")
        a.setflags(write=False)
        alpha.setflags(write=False)
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "alpha", alpha)

    @classmethod
    def from_zeros(cls, zeros: Sequence[Zero], source: str = "synthetic") -> "ZeroSet":
        return cls([z.a for z in zeros], [z.alpha for z in zeros], source)

    @classmethod
    def critical_line(cls, alphas, source: str = "synthetic") -> "ZeroSet":
        alphas = np.asarray(alphas, dtype=float)
        return cls(np.full(alphas.shape, 0.5), alphas, source)

    @classmethod
    def empty(cls) -> "ZeroSet":
        return cls([], [], "synthetic")

    def __len__(self) -> int:
        return int(self.alpha.size)

    def __iter__(self) -> Iterator[Zero]:
        for a, al in zip(self.a, self.alpha):
            yield Zero(float(a), float(al))

    def __getitem__(self, idx):
        if isinstance(idx, slice):
            return ZeroSet(self.a[idx], self.alpha[idx], self.source)
        return Zero(float(self.a[idx]), float(self.alpha[idx]))

    def head(self, k: int) -> "ZeroSet":
        return self[:k]

    def with_alphas(self, alpha) -> "ZeroSet":
        return ZeroSet(self.a, alpha, self.source)

    def with_a(self, a) -> "ZeroSet":
        return ZeroSet(a, self.alpha, self.source)

    @property
    def on_critical_line(self) -> bool:
        return bool(np.all(self.a == 0.5))

    def blocks(self) -> list[tuple[int, int, float]]:
        """Maximal runs of equal real part as (start, stop, a) index ranges."""
        out = []
        n = len(self)
        start = 0
        for i in range(1, n + 1):
            if i == n or self.a[i] != self.a[start]:
                out.append((start, i, float(self.a[start])))
                start = i
        return out

    def __eq__(self, other):
        if not isinstance(other, ZeroSet):
            return NotImplemented
        return (np.array_equal(self.a, other.a)
                and np.array_equal(self.alpha, other.alpha))

    def __hash__(self):
        return hash((self.a.tobytes(), self.alpha.tobytes()))


def default_zero_path() -> Path:
    env = os.environ.get(ZEROS_ENV_VAR)
    return Path(env) if env else BUNDLED_ZEROS


def load_zeros(path=None, limit: int | None = None) -> ZeroSet:
    """Read a table of zero heights, one decimal number per line.

    Blank lines and lines starting with ``#`` are skipped. Every zero is
    placed on the critical line.
    """
    path = Path(path) if path is not None else default_zero_path()
    alphas: list[float] = []
    with open(path, encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, start=1):
            if limit is not None and len(alphas) >= limit:
                break
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            try:
                value = float(line.split()[0])
            except ValueError:
                raise ZeroTableError(f"{path}:{lineno}: cannot parse {line!r}") from None
            if not math.isfinite(value) or value <= 0.0:
                raise ZeroTableError(f"{path}:{lineno}: zero height must be positive, got {line!r}")
            if alphas and value <= alphas[-1]:
                raise ZeroTableError(
                    f"{path}:{lineno}: {value} does not exceed previous height {alphas[-1]}")
            alphas.append(value)
    return ZeroSet.critical_line(alphas, source="file")


@dataclass(frozen=True)
class StretchSpec:
    """Piecewise-constant real parts over consecutive blocks of a base set."""

    blocks: tuple[tuple[int, float], ...]
    base: ZeroSet

    def __post_init__(self):
        object.__setattr__(self, "blocks", tuple((int(c), float(a)) for c, a in self.blocks))
        for count, a_value in self.blocks:
            if count <= 0:
                raise ValueError("block counts must be positive")
            if not 0.0 < a_value < 1.0:
                raise ValueError(f"block real part {a_value} outside (0, 1)")

    @property
    def total(self) -> int:
        return sum(c for c, _ in self.blocks)


def synthesize_stretch(spec: StretchSpec) -> ZeroSet:
    """Assign each block's real part to the matching run of base heights."""
    if spec.total > len(spec.base):
        raise ValueError(
            f"blocks cover {spec.total} zeros but the base set has {len(spec.base)}")
    a = np.concatenate([np.full(c, v) for c, v in spec.blocks]) if spec.blocks else np.array([])
    return ZeroSet(a, spec.base.alpha[: spec.total], "synthetic")


def average_zero_count(T: float) -> float:
    """Mean number of zeros up to height T: (T/2pi)(log(T/2pi) - 1)."""
    u = T / (2.0 * math.pi)
    return u * (math.log(u) - 1.0)


def empirical_zero_count(zs: ZeroSet, T: float) -> int:
    """Number of zeros with alpha <= T."""
    return int(np.searchsorted(zs.alpha, T, side="right"))
