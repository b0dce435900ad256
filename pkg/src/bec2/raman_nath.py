"""Analytic Raman-Nath diffraction of a two-component beam.

Neglecting transverse kinetic energy, crossing the standing wave imprints the
phase ``-tau_j (1 + cos 2 n k_L y)`` on component ``j``. The Jacobi-Anger
expansion of that phase gives momentum orders ``2 q n k_L`` with probabilities
``J_q(tau_j)^2``, where

    g_j   = Omega_j^2 / (16 Delta_j) * w_L / v_j * sqrt(pi)
    tau_j = 2 g_j / (1 + V_1 rho_1 + V_2 rho_2)^2

and ``V_j`` is the effective volume of species ``j``.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field

import numpy as np

from .bessel import bessel_j_orders
from .errors import DomainError, SingularDetuningError
from .field import FieldConfig
from .medium import SCREENING_TOL, is_evanescent, refractive_index
from .params import Mixture, Species
from .state import MatterState, packet_width

# packets narrower than this many laser periods 2 pi/(n k_L) trigger a warning
WIDE_PACKET_PERIODS = 10.0
DEFAULT_EXTRA_ORDERS = 20

_MINUS_I_POWERS = np.array([1.0, -1j, -1.0, 1j])


class PacketWidthWarning(UserWarning):
    """The atomic packet is too narrow for a clean diffraction pattern."""


def coupling_strength(species: Species, field: FieldConfig, index: int) -> float:
    """``g_j = (Omega_j^2 / 16 Delta_j) (w_L / v_j) sqrt(pi)``; sign follows the detuning."""
    if species.detuning == 0:
        raise DomainError(f"species {index}: zero detuning")
    if not species.group_velocity > 0:
        raise DomainError(f"species {index}: group velocity must be > 0")
    om = field.peak_rabi[index - 1]
    return om * om / (16.0 * species.detuning) * (field.envelope_width / species.group_velocity) * math.sqrt(math.pi)


def screening_denominator(mixture: Mixture) -> float:
    """``1 + V_1 rho_1 + V_2 rho_2`` (equals ``Delta_loc / Delta``)."""
    v1, v2 = mixture.volumes
    return 1.0 + v1 * mixture.densities[0] + v2 * mixture.densities[1]


def tau(g: float, mixture: Mixture) -> float:
    """Pulse-area parameter ``tau_j = 2 g_j / (1 + V_1 rho_1 + V_2 rho_2)^2``."""
    den = screening_denominator(mixture)
    if abs(den) <= SCREENING_TOL:
        raise SingularDetuningError("1 + V1 rho1 + V2 rho2 vanishes (local detuning zero)", mixture)
    return 2.0 * g / (den * den)


def default_max_order(taus) -> int:
    """``ceil(max |tau|) + 20``, or 0 when no component is diffracted."""
    if all(t == 0 for t in taus):
        return 0
    return int(math.ceil(max(abs(t) for t in taus))) + DEFAULT_EXTRA_ORDERS


def order_probabilities(tau_j: float, max_order: int) -> tuple[np.ndarray, np.ndarray]:
    """Orders ``-Q..Q`` and probabilities ``J_q(tau)^2``."""
    if max_order < 0:
        raise DomainError(f"max_order must be >= 0, got {max_order}")
    orders, jq = bessel_j_orders(tau_j, max_order)
    return orders, jq * jq


def diffraction_angle(q, species: Species, n: float, k_l: float, hbar: float = 1.0):
    """Deflection angle from ``tan a = 2 q n hbar k_L / (m v)``; odd in ``q``."""
    p = species.mass * species.group_velocity
    if not p > 0:
        raise DomainError("m v must be > 0")
    arg = 2.0 * np.asarray(q, dtype=float) * n * hbar * k_l / p
    out = np.sign(arg) * np.arctan(np.abs(arg))
    return float(out) if out.ndim == 0 else out


def check_packet_width(width: float, n: float, k_l: float) -> str | None:
    """Return (and emit) a warning message if ``w_y < 10 * 2 pi / (n k_L)``."""
    limit = WIDE_PACKET_PERIODS * 2.0 * math.pi / (n * k_l)
    if width < limit:
        msg = f"packet width {width:g} below {limit:g} (= {WIDE_PACKET_PERIODS:g} laser periods)"
        warnings.warn(msg, PacketWidthWarning, stacklevel=3)
        return msg
    return None


def far_field_state(
    incident: MatterState,
    taus,
    n: float,
    k_l: float,
    max_order: int | None = None,
    width: float | None = None,
) -> MatterState:
    """Far-field amplitudes from the truncated Bessel series.

    ``psi(y, +inf) = psi(y, -inf) e^{-i tau} sum_q e^{2 i q n k_L y} (-i)^q J_q(tau)``
    """
    if max_order is None:
        max_order = default_max_order(taus)
    if width is None:
        width = float(np.min(packet_width(incident)))
    notes = []
    msg = check_packet_width(width, n, k_l)
    if msg:
        notes.append(msg)
    y = incident.grid.y
    out = np.empty_like(incident.psi)
    for j in range(2):
        t = float(taus[j])
        if t == 0.0:
            out[j] = incident.psi[j]
            continue
        orders, jq = bessel_j_orders(t, max_order)
        coef = _MINUS_I_POWERS[orders % 4] * jq
        grating = np.exp(2j * n * k_l * np.outer(orders, y))
        out[j] = incident.psi[j] * np.exp(-1j * t) * (coef @ grating)
    meta = dict(incident.meta)
    meta["warnings"] = meta.get("warnings", []) + notes
    return incident.replace(psi=out, meta=meta)


@dataclass(frozen=True)
class DiffractionSpectrum:
    orders: np.ndarray
    probabilities: np.ndarray  # shape (2, 2Q+1)
    angles: np.ndarray  # shape (2, 2Q+1), radians
    tau: tuple[float, float]
    g: tuple[float, float]
    refractive_index: float
    angles_coincide: bool
    warnings: list = field(default_factory=list)

    @property
    def separated(self) -> bool:
        """Components land at different angles in at least one populated order."""
        return (not self.angles_coincide) and any(t != 0.0 for t in self.tau)

    @property
    def max_order(self) -> int:
        return int(self.orders[-1])

    def rows(self):
        for j in range(2):
            for i, q in enumerate(self.orders):
                yield (j + 1, int(q), float(self.probabilities[j, i]), float(self.angles[j, i]))

    def summary(self) -> dict:
        return {
            "tau": list(self.tau),
            "g": list(self.g),
            "refractive_index": self.refractive_index,
            "max_order": self.max_order,
            "angles_coincide": self.angles_coincide,
            "separated": self.separated,
            "total_probability": [float(p.sum()) for p in self.probabilities],
            "warnings": list(self.warnings),
        }


def resolve_index(mixture: Mixture, field: FieldConfig) -> FieldConfig:
    """Field with ``n`` fixed: the explicit override if set, else Maxwell-Garnett at peak density."""
    if field.refractive_index is not None:
        return field
    n = refractive_index(mixture.sample())
    if is_evanescent(n):
        raise DomainError(f"n^2 < 0 at peak densities (n = {n}); standing wave does not propagate")
    return field.with_index(n)


def assemble_spectrum(
    mixture: Mixture,
    field: FieldConfig,
    max_order: int | None = None,
    width: float | None = None,
) -> DiffractionSpectrum:
    """Diffraction orders, probabilities and angles for both components."""
    field = resolve_index(mixture, field)
    n, k_l = field.refractive_index, field.vacuum_wavenumber
    gs = tuple(coupling_strength(s, field, j) for j, s in enumerate(mixture.species, start=1))
    taus = tuple(tau(g, mixture) for g in gs)
    if max_order is None:
        max_order = default_max_order(taus)
    notes = []
    if width is not None:
        msg = check_packet_width(width, n, k_l)
        if msg:
            notes.append(msg)
    probs, angles = [], []
    for s, t in zip(mixture.species, taus):
        orders, p = order_probabilities(t, max_order)
        probs.append(p)
        angles.append(diffraction_angle(orders, s, n, k_l))
    s1, s2 = mixture.species
    coincide = bool(np.array_equal(angles[0], angles[1])) or math.isclose(
        s1.momentum, s2.momentum, rel_tol=1e-12, abs_tol=0.0
    )
    return DiffractionSpectrum(
        orders=orders,
        probabilities=np.array(probs),
        angles=np.array(angles),
        tau=taus,
        g=gs,
        refractive_index=n,
        angles_coincide=coincide,
        warnings=notes,
    )
