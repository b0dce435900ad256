"""Periodic transverse grid and two-component mean-field state."""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace

import numpy as np

from .errors import ValidationError


@dataclass(frozen=True)
class Grid:
    """Uniform periodic grid of ``n`` points with spacing ``dy``, centred on 0."""

    n: int
    dy: float

    def __post_init__(self):
        problems = []
        if self.n < 16 or self.n & (self.n - 1):
            problems.append(f"grid size must be a power of two >= 16, got {self.n}")
        if not (math.isfinite(self.dy) and self.dy > 0):
            problems.append(f"grid spacing must be finite and > 0, got {self.dy!r}")
        if problems:
            raise ValidationError(problems)

    @classmethod
    def commensurate(cls, n: int, period: float, periods: int) -> "Grid":
        """Grid whose length is exactly ``periods`` times ``period``."""
        return cls(n, period * periods / n)

    @property
    def length(self) -> float:
        return self.n * self.dy

    @property
    def y(self) -> np.ndarray:
        return (np.arange(self.n) - self.n // 2) * self.dy

    @property
    def k(self) -> np.ndarray:
        """Angular wavenumbers in FFT order."""
        return 2.0 * np.pi * np.fft.fftfreq(self.n, d=self.dy)


@dataclass(frozen=True, eq=False)
class MatterState:
    """Amplitudes ``psi`` of shape ``(2, n)`` at longitudinal coordinate ``z``.

    ``z`` is the master propagation variable; component ``j`` has spent time
    ``(z - z0) / v_j`` in the field.
    """

    grid: Grid
    psi: np.ndarray
    z: float = 0.0
    meta: dict = field(default_factory=dict, compare=False)

    def __post_init__(self):
        psi = np.asarray(self.psi, dtype=complex)
        if psi.shape != (2, self.grid.n):
            raise ValidationError(f"psi must have shape (2, {self.grid.n}), got {psi.shape}")
        object.__setattr__(self, "psi", psi)

    @property
    def densities(self) -> np.ndarray:
        return np.abs(self.psi) ** 2

    @property
    def norms(self) -> np.ndarray:
        """Per-component ``sum |psi|^2 dy``."""
        return np.sum(self.densities, axis=1) * self.grid.dy

    def replace(self, **changes) -> "MatterState":
        return replace(self, **changes)

    def equals(self, other: "MatterState") -> bool:
        """Bitwise equality of grid, amplitudes and ``z``."""
        return self.grid == other.grid and self.z == other.z and np.array_equal(self.psi, other.psi)


def uniform_state(grid: Grid, densities, z: float = 0.0) -> MatterState:
    amp = np.sqrt(np.asarray(densities, dtype=float))[:, None] * np.ones(grid.n)
    return MatterState(grid, amp.astype(complex), z)


def gaussian_state(grid: Grid, peak_densities, width: float, z: float = 0.0, center: float = 0.0) -> MatterState:
    """Packets with density ``rho_j exp(-(y - y0)^2 / w^2)``."""
    y = grid.y
    env = np.exp(-((y - center) ** 2) / (2.0 * width**2))
    amp = np.sqrt(np.asarray(peak_densities, dtype=float))[:, None] * env
    return MatterState(grid, amp.astype(complex), z, {"packet_width": width})


def packet_width(state: MatterState) -> np.ndarray:
    """Gaussian-equivalent width ``sqrt(2) * rms`` of each component's density.

    Periodic grid: the rms is taken about the density-weighted mean with
    coordinates centred on the grid. A uniform density counts as infinitely wide.
    """
    y = state.grid.y
    rho = state.densities
    out = np.empty(2)
    for j in range(2):
        tot = rho[j].sum()
        if tot == 0:
            out[j] = 0.0
            continue
        if np.ptp(rho[j]) <= 1e-12 * rho[j].max():
            out[j] = math.inf
            continue
        mean = (rho[j] * y).sum() / tot
        out[j] = math.sqrt(2.0 * (rho[j] * (y - mean) ** 2).sum() / tot)
    return out
