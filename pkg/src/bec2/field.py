"""Standing-wave laser field inside a homogeneous two-component medium.

Two counter-propagating beams with wavevectors ``+n k_L`` and ``-n k_L`` form
a standing wave whose Rabi-frequency intensity is

    |Omega_j^+(y, z)|^2 = Omega_j^2 exp(-z^2 / w_L^2) cos^2(n k_L y)

The medium only rescales the wavelength through the constant index ``n``;
reflections at the medium boundary are ignored.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

import numpy as np

from .errors import DomainError, ResolutionError, ValidationError


@dataclass(frozen=True)
class FieldConfig:
    """Standing-wave parameters in internal units.

    ``refractive_index`` may be left as ``None`` to have it derived from the
    peak densities of the mixture (see :func:`bec2.raman_nath.assemble_spectrum`);
    profile evaluation requires it to be resolved first.
    """

    vacuum_wavenumber: float
    envelope_width: float
    peak_rabi: tuple[float, float]
    refractive_index: float | None = None

    def __post_init__(self):
        problems = []
        if not (math.isfinite(self.vacuum_wavenumber) and self.vacuum_wavenumber > 0):
            problems.append(f"field.vacuum_wavenumber must be finite and > 0, got {self.vacuum_wavenumber!r}")
        if not (math.isfinite(self.envelope_width) and self.envelope_width > 0):
            problems.append(f"field.envelope_width must be finite and > 0, got {self.envelope_width!r}")
        if len(self.peak_rabi) != 2:
            problems.append("field.peak_rabi must have exactly two entries")
        else:
            for j, om in enumerate(self.peak_rabi, start=1):
                if not (math.isfinite(om) and om >= 0):
                    problems.append(f"field.peak_rabi[{j}] must be finite and >= 0, got {om!r}")
        n = self.refractive_index
        if n is not None:
            if isinstance(n, complex) or not (math.isfinite(n) and n > 0):
                problems.append(f"field.refractive_index must be real and > 0, got {n!r}")
        if problems:
            raise ValidationError(problems)
        object.__setattr__(self, "peak_rabi", tuple(float(x) for x in self.peak_rabi))

    def with_index(self, n: float) -> "FieldConfig":
        return replace(self, refractive_index=n)

    @property
    def medium_wavenumber(self) -> float:
        """``n k_L``; raises if the index has not been resolved."""
        if self.refractive_index is None:
            raise DomainError("refractive index not resolved; call with_index() first")
        return self.refractive_index * self.vacuum_wavenumber

    @property
    def intensity_period(self) -> float:
        """Spatial period pi/(n k_L) of cos^2(n k_L y)."""
        return math.pi / self.medium_wavenumber


def envelope(config: FieldConfig, z):
    """Gaussian longitudinal envelope ``exp(-z^2/w_L^2)`` (no factor 2)."""
    z = np.asarray(z, dtype=float)
    return np.exp(-(z / config.envelope_width) ** 2)


def rabi_sq_profile(config: FieldConfig, species_index: int, y, z=0.0):
    """Squared Rabi frequency seen by component ``species_index`` (1 or 2)."""
    if species_index not in (1, 2):
        raise DomainError(f"species_index must be 1 or 2, got {species_index!r}")
    om = config.peak_rabi[species_index - 1]
    y = np.asarray(y, dtype=float)
    out = om * om * envelope(config, z) * np.cos(config.medium_wavenumber * y) ** 2
    return out if out.ndim else float(out)


def standing_wave_amplitude(config: FieldConfig, y, z=0.0):
    """Transverse field amplitude ``exp(-z^2/2w_L^2) cos(n k_L y)`` (unit peak)."""
    y = np.asarray(y, dtype=float)
    return np.sqrt(envelope(config, z)) * np.cos(config.medium_wavenumber * y)


def helmholtz_residual(config: FieldConfig, y, field) -> float:
    """Normalised residual of ``d^2E/dy^2 + (n k_L)^2 E = 0`` on a uniform grid.

    Second derivatives use three-point central differences, so the residual of
    an exact standing wave falls as ``dy^2``. Only interior points are checked.
    """
    y = np.asarray(y, dtype=float)
    field = np.asarray(field)
    if y.ndim != 1 or y.shape != field.shape or y.size < 3:
        raise ResolutionError("y and field must be 1-D arrays of equal length >= 3")
    dy = np.diff(y)
    h = dy[0]
    if h <= 0 or not np.allclose(dy, h, rtol=1e-9, atol=0.0):
        raise ResolutionError("grid must be uniform and increasing")
    kn = config.medium_wavenumber
    if config.intensity_period / h < 4:
        raise ResolutionError(
            f"need at least 4 points per period pi/(n k_L)={config.intensity_period:g}; dy={h:g}"
        )
    lap = (field[2:] - 2.0 * field[1:-1] + field[:-2]) / h**2
    scale = kn**2 * np.max(np.abs(field))
    if scale == 0:
        raise DomainError("field is identically zero")
    return float(np.max(np.abs(lap + kn**2 * field[1:-1])) / scale)
