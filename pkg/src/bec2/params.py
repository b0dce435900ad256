"""Physical parameter types and the internal unit system.

Internally hbar = 1, lengths are measured in units of ``1/k_ref`` and
frequencies in units of a reference frequency ``omega_ref``. Every formula of
the mean-field model can then be written without explicit constants. The
laboratory side is described by a :class:`UnitSystem`, which also carries the
values of hbar and of the Coulomb constant ``1/(4 pi eps0)`` in the user's
units (both 1 for an already-internal parameter set, SI values via
:meth:`UnitSystem.si`).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, fields, replace
from typing import Sequence

import scipy.constants as cst

from .errors import DomainError, ValidationError
from .field import FieldConfig

FOUR_PI_3 = 4.0 * math.pi / 3.0


@dataclass(frozen=True)
class Species:
    """One atomic component.

    Attributes
    ----------
    mass : float
        Atomic mass, > 0.
    detuning : float
        Laser detuning from the atomic transition, nonzero.
    dipole_moment : float
        Transition dipole moment, >= 0.
    group_velocity : float
        Longitudinal beam velocity, > 0. Maps z to t = z / v.
    """

    mass: float
    detuning: float
    dipole_moment: float = 0.0
    group_velocity: float = 1.0

    def __post_init__(self):
        problems = _species_problems(self, "species")
        if problems:
            raise ValidationError(problems)

    @property
    def momentum(self) -> float:
        return self.mass * self.group_velocity


def _species_problems(s: Species, label: str) -> list[str]:
    out = []
    for f in fields(s):
        v = getattr(s, f.name)
        if not math.isfinite(v):
            out.append(f"{label}.{f.name} must be finite, got {v!r}")
    if math.isfinite(s.mass) and s.mass <= 0:
        out.append(f"{label}.mass must be > 0, got {s.mass!r}")
    if math.isfinite(s.group_velocity) and s.group_velocity <= 0:
        out.append(f"{label}.group_velocity must be > 0, got {s.group_velocity!r}")
    if math.isfinite(s.dipole_moment) and s.dipole_moment < 0:
        out.append(f"{label}.dipole_moment must be >= 0, got {s.dipole_moment!r}")
    return out


def polarizability(species: Species, index: int | None = None, hbar: float = 1.0) -> float:
    """Atomic polarizability ``alpha = -d^2 / (hbar * Delta)``."""
    if species.detuning == 0:
        who = f"species {index}" if index is not None else "species"
        raise DomainError(f"{who}: zero detuning, polarizability undefined")
    return -(species.dipole_moment**2) / (hbar * species.detuning)


def effective_volume(species: Species, index: int | None = None, hbar: float = 1.0) -> float:
    """Effective volume ``V = -(4 pi / 3) alpha``; positive for blue detuning."""
    return -FOUR_PI_3 * polarizability(species, index, hbar)


@dataclass(frozen=True)
class Mixture:
    """Two species and their (peak) ground-state densities."""

    species: tuple[Species, Species]
    densities: tuple[float, float]

    def __post_init__(self):
        problems = []
        if len(self.species) != 2:
            problems.append("mixture needs exactly two species")
        if len(self.densities) != 2:
            problems.append("mixture needs exactly two densities")
        for j, s in enumerate(self.species, start=1):
            if s.detuning == 0:
                problems.append(f"species {j}: detuning must be nonzero")
        for j, rho in enumerate(self.densities, start=1):
            if not (math.isfinite(rho) and rho >= 0):
                problems.append(f"density {j} must be finite and >= 0, got {rho!r}")
        if problems:
            raise ValidationError(problems)
        object.__setattr__(self, "species", tuple(self.species))
        object.__setattr__(self, "densities", tuple(float(r) for r in self.densities))

    @classmethod
    def from_epsilon(cls, species: Sequence[Species], epsilon: Sequence[float]) -> "Mixture":
        """Build from the dimensionless products ``eps_j = alpha_j * rho_j``."""
        rho = []
        for j, (s, eps) in enumerate(zip(species, epsilon), start=1):
            a = polarizability(s, j)
            if eps == 0:
                rho.append(0.0)
            elif a == 0:
                raise DomainError(f"species {j}: eps={eps} requested but polarizability is zero")
            else:
                rho.append(eps / a)
        return cls(tuple(species), tuple(rho))

    @property
    def alphas(self) -> tuple[float, float]:
        return tuple(polarizability(s, j) for j, s in enumerate(self.species, start=1))

    @property
    def volumes(self) -> tuple[float, float]:
        return tuple(effective_volume(s, j) for j, s in enumerate(self.species, start=1))

    @property
    def epsilons(self) -> tuple[float, float]:
        a1, a2 = self.alphas
        return (a1 * self.densities[0], a2 * self.densities[1])

    def sample(self):
        from .medium import MediumSample

        a1, a2 = self.alphas
        return MediumSample(self.densities[0], self.densities[1], a1, a2)

    def with_densities(self, densities) -> "Mixture":
        return replace(self, densities=tuple(densities))


@dataclass(frozen=True)
class UnitSystem:
    """Conversion between user (laboratory) units and internal units.

    ``reference_wavenumber`` fixes the length unit ``1/k_ref``;
    ``reference_frequency`` fixes the (angular) frequency unit. ``hbar`` and
    ``coulomb_constant`` are expressed in the user's units.
    """

    reference_wavenumber: float = 1.0
    reference_frequency: float = 1.0
    hbar: float = 1.0
    coulomb_constant: float = 1.0

    def __post_init__(self):
        problems = []
        for f in fields(self):
            v = getattr(self, f.name)
            if not (isinstance(v, (int, float)) and math.isfinite(v) and v > 0):
                problems.append(f"units.{f.name} must be finite and > 0, got {v!r}")
        if problems:
            raise ValidationError(problems)

    @classmethod
    def si(cls, wavenumber: float, frequency: float | None = None, mass: float | None = None):
        """SI units. Without ``frequency`` the recoil frequency ``hbar k^2 / 2m`` is used."""
        if frequency is None:
            if mass is None:
                raise ValidationError("units: need a reference frequency or a mass for the recoil default")
            frequency = cst.hbar * wavenumber**2 / (2.0 * mass)
        return cls(wavenumber, frequency, cst.hbar, 1.0 / (4.0 * math.pi * cst.epsilon_0))

    def factor(self, kind: str) -> float:
        """Multiplier taking a user-unit value of ``kind`` to internal units."""
        k, w = self.reference_wavenumber, self.reference_frequency
        if kind == "length":
            return k
        if kind == "wavenumber":
            return 1.0 / k
        if kind == "time":
            return w
        if kind == "frequency":
            return 1.0 / w
        if kind == "velocity":
            return k / w
        if kind == "mass":
            return w / (self.hbar * k * k)
        if kind == "density":
            return 1.0 / k**3
        if kind == "dipole":
            return math.sqrt(self.coulomb_constant * k**3 / (self.hbar * w))
        if kind == "dimensionless":
            return 1.0
        raise KeyError(kind)

    def to_internal(self, value: float, kind: str) -> float:
        return value * self.factor(kind)

    def to_user(self, value: float, kind: str) -> float:
        return value / self.factor(kind)


_SPECIES_KINDS = {
    "mass": "mass",
    "detuning": "frequency",
    "dipole_moment": "dipole",
    "group_velocity": "velocity",
}


@dataclass(frozen=True)
class PhysicalConfig:
    """Complete physical description of a run, in one unit system."""

    species: tuple[Species, Species]
    densities: tuple[float, float]
    field: FieldConfig
    packet_width: float | None = None


def _convert(config: PhysicalConfig, units: UnitSystem, forward: bool) -> PhysicalConfig:
    conv = units.to_internal if forward else units.to_user
    species = tuple(
        Species(**{name: conv(getattr(s, name), kind) for name, kind in _SPECIES_KINDS.items()})
        for s in config.species
    )
    f = config.field
    field = FieldConfig(
        vacuum_wavenumber=conv(f.vacuum_wavenumber, "wavenumber"),
        envelope_width=conv(f.envelope_width, "length"),
        peak_rabi=tuple(conv(om, "frequency") for om in f.peak_rabi),
        refractive_index=f.refractive_index,
    )
    densities = tuple(conv(r, "density") for r in config.densities)
    width = None if config.packet_width is None else conv(config.packet_width, "length")
    return PhysicalConfig(species, densities, field, width)


def to_internal(config: PhysicalConfig, units: UnitSystem) -> PhysicalConfig:
    """Convert a laboratory-unit configuration to internal units."""
    _check_finite(config)
    return _convert(config, units, forward=True)


def to_user(config: PhysicalConfig, units: UnitSystem) -> PhysicalConfig:
    """Inverse of :func:`to_internal`."""
    return _convert(config, units, forward=False)


def _check_finite(config: PhysicalConfig):
    problems = []
    for j, r in enumerate(config.densities, start=1):
        if not math.isfinite(r):
            problems.append(f"density {j} must be finite")
    if config.packet_width is not None and not (math.isfinite(config.packet_width) and config.packet_width > 0):
        problems.append("packet_width must be finite and > 0")
    if problems:
        raise ValidationError(problems)
