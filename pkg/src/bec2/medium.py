"""Effective-medium optics of a two-component gas of polarizable atoms.

All functions take a :class:`MediumSample` whose fields may be scalars or
numpy arrays of matching shape (one entry per grid point). The central
quantity is the polarization sum ``S = alpha_1 rho_1 + alpha_2 rho_2``; the
Lorentz-Lorenz local-field correction enters through the screening factor
``1 - (4 pi / 3) S``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Literal

import numpy as np

from .errors import DomainError, SingularDetuningError, SingularMediumError
from .params import FOUR_PI_3

EIGHT_PI_3 = 8.0 * math.pi / 3.0

# |1 - (4pi/3) S| below this is treated as the pole of chi and n
SCREENING_TOL = 1e-12
# |Delta_loc| / |Delta| below this is treated as a vanishing local detuning
DETUNING_TOL = 1e-9

Mode = Literal["full", "expanded"]


@dataclass(frozen=True)
class MediumSample:
    """Densities and polarizabilities at one point (or an array of points)."""

    density_1: float | np.ndarray
    density_2: float | np.ndarray
    alpha_1: float
    alpha_2: float

    def __post_init__(self):
        if np.any(np.asarray(self.density_1) < 0) or np.any(np.asarray(self.density_2) < 0):
            raise DomainError("densities must be >= 0")

    @classmethod
    def single(cls, density: float, alpha: float) -> "MediumSample":
        """Sample with the second component absent."""
        return cls(density, 0.0, alpha, 0.0)


def polarization_sum(sample: MediumSample):
    """``S = alpha_1 rho_1 + alpha_2 rho_2``."""
    return sample.alpha_1 * sample.density_1 + sample.alpha_2 * sample.density_2


def screening_factor(sample: MediumSample):
    """``1 - (4 pi / 3) S``, equal to ``Delta_loc / Delta``."""
    return 1.0 - FOUR_PI_3 * polarization_sum(sample)


def local_detuning(sample: MediumSample, bare_detuning: float):
    """Local detuning ``Delta * (1 - (4 pi / 3) S)``. Total; never raises."""
    return bare_detuning * screening_factor(sample)


def _checked_screening(sample: MediumSample):
    den = screening_factor(sample)
    bad = np.abs(den) <= SCREENING_TOL
    if np.any(bad):
        where = "" if np.ndim(den) == 0 else f" at index {int(np.flatnonzero(bad)[0])}"
        raise SingularMediumError(
            f"screening factor 1-(4pi/3)S vanishes{where}: medium is at the Lorentz-Lorenz pole",
            sample,
        )
    return den


def susceptibility(sample: MediumSample):
    """Dielectric susceptibility ``chi = S / (1 - (4 pi / 3) S)``."""
    den = _checked_screening(sample)
    return polarization_sum(sample) / den


def index_squared(sample: MediumSample):
    """Maxwell-Garnett ``n^2 = (1 + (8 pi / 3) S) / (1 - (4 pi / 3) S)``."""
    den = _checked_screening(sample)
    return (1.0 + EIGHT_PI_3 * polarization_sum(sample)) / den


def refractive_index(sample: MediumSample):
    """Principal square root of the Maxwell-Garnett ``n^2``.

    Returns a float (or float array) when ``n^2 >= 0`` everywhere; otherwise a
    complex value is returned, which callers treat as the evanescent flag.
    """
    n2 = index_squared(sample)
    if np.ndim(n2) == 0:
        n2 = float(n2)
        return math.sqrt(n2) if n2 >= 0 else complex(0.0, math.sqrt(-n2))
    if np.all(n2 >= 0):
        return np.sqrt(n2)
    return np.emath.sqrt(n2)


def is_evanescent(n) -> bool:
    return bool(np.iscomplexobj(n))


def nonlinear_potential(
    sample: MediumSample,
    rabi_sq,
    bare_detuning: float,
    mode: Mode = "full",
    hbar: float = 1.0,
):
    """Light-shift potential felt by a ground-state atom.

    ``full`` keeps the complete local-field denominator,
    ``hbar Delta |Omega|^2 / (4 Delta_loc^2)``; ``expanded`` is its first-order
    expansion in ``S``, ``(hbar / 4 Delta) |Omega|^2 (1 + (8 pi / 3) S)``, i.e.
    the coupled Gross-Pitaevskii form.
    """
    if bare_detuning == 0:
        raise DomainError("zero bare detuning")
    if mode == "full":
        dloc = local_detuning(sample, bare_detuning)
        bad = np.abs(dloc) <= DETUNING_TOL * abs(bare_detuning)
        if np.any(bad):
            idx = None if np.ndim(dloc) == 0 else int(np.flatnonzero(bad)[0])
            raise SingularDetuningError(
                "local detuning vanishes" + ("" if idx is None else f" at grid index {idx}"),
                sample,
                idx,
            )
        return hbar * bare_detuning * rabi_sq / (4.0 * dloc * dloc)
    if mode == "expanded":
        return hbar / (4.0 * bare_detuning) * rabi_sq * (1.0 + EIGHT_PI_3 * polarization_sum(sample))
    raise DomainError(f"unknown potential mode {mode!r}")
