from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np


@dataclass(frozen=True, eq=False)
class Spectrum:
    """Ordered eigenvalues with the quantum numbers they belong to.

    ``provenance`` records how the levels were produced (WKB rule or solver
    grid). ``x`` and ``wavefunctions`` are filled only by the grid solver
    when eigenvectors were requested; rows of ``wavefunctions`` align with
    ``eigenvalues``.
    """

    eigenvalues: np.ndarray
    indices: np.ndarray | None = None
    provenance: dict = field(default_factory=dict)
    x: np.ndarray | None = None
    wavefunctions: np.ndarray | None = None

    def __post_init__(self):
        ev = np.asarray(self.eigenvalues, dtype=float)
        idx = (np.arange(ev.size) if self.indices is None
               else np.asarray(self.indices, dtype=int))
        if idx.shape != ev.shape:
            raise ValueError("indices and eigenvalues differ in length")
        if ev.size > 1 and np.any(np.diff(ev) <= 0.0):
            raise ValueError("eigenvalues must be strictly increasing")
        object.__setattr__(self, "eigenvalues", ev)
        object.__setattr__(self, "indices", idx)

    def __len__(self):
        return int(self.eigenvalues.size)

    def level(self, n: int) -> float:
        pos = np.flatnonzero(self.indices == n)
        if pos.size == 0:
            raise IndexError(f"level {n} not in spectrum")
        return float(self.eigenvalues[pos[0]])

    def wavefunction(self, n: int) -> np.ndarray:
        if self.wavefunctions is None:
            raise IndexError("spectrum was computed without wavefunctions")
        pos = np.flatnonzero(self.indices == n)
        if pos.size == 0:
            raise IndexError(f"level {n} not in spectrum")
        return self.wavefunctions[pos[0]]
