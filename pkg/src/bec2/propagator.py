"""Split-step Fourier propagation of the coupled ground-state mean fields.

Each component obeys

    i dpsi_j/dt = [-(1/2m_j) d^2/dy^2 + U_j(y, z; rho_1, rho_2)] psi_j

with ``U_j`` the local-field light-shift potential of :mod:`bec2.medium`.
The longitudinal coordinate ``z`` is the master clock: a step ``dz`` advances
component ``j`` by ``dt_j = dz / v_j``, so both components stay registered at
the same position in the laser envelope.

One step is Strang-split: half a potential step evaluated at ``z`` with the
current densities, a full kinetic step in Fourier space, and half a potential
step at ``z + dz`` with the updated densities. Because the potential is real,
each potential sub-step leaves the densities untouched and is exact.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from typing import Callable, Iterable, Literal

import numpy as np

from .errors import DomainError, NumericBlowupError, ValidationError
from .field import FieldConfig
from .medium import MediumSample, local_detuning, nonlinear_potential
from .params import Species, polarizability
from .state import MatterState, packet_width

Mode = Literal["full", "expanded"]

# sanity bound on the potential phase accumulated in one step
MAX_PHASE_PER_STEP = 0.5
# integration window in units of the envelope width
DEFAULT_WINDOW = 6.0


class StepSizeWarning(UserWarning):
    pass


class WrapAroundWarning(UserWarning):
    pass


@dataclass(frozen=True)
class EvolveConfig:
    """Parameters of a propagation run.

    ``dz`` is the step of the master coordinate; ``envelope=False`` holds the
    field at its peak (``z`` then only serves as the clock). ``kinetic=False``
    is the Raman-Nath (thin grating) approximation.
    """

    species: tuple[Species, Species]
    field: FieldConfig
    dz: float
    steps: int
    mode: Mode = "full"
    kinetic: bool = True
    envelope: bool = True
    observe_every: int = 0

    def __post_init__(self):
        problems = []
        if not (math.isfinite(self.dz) and self.dz > 0):
            problems.append(f"dz must be finite and > 0, got {self.dz!r}")
        if int(self.steps) != self.steps or self.steps < 0:
            problems.append(f"steps must be a non-negative integer, got {self.steps!r}")
        if self.mode not in ("full", "expanded"):
            problems.append(f"mode must be 'full' or 'expanded', got {self.mode!r}")
        if self.field.refractive_index is None:
            problems.append("field.refractive_index must be resolved before propagation")
        if self.observe_every < 0:
            problems.append("observe_every must be >= 0")
        if len(self.species) != 2:
            problems.append("exactly two species required")
        else:
            for j, s in enumerate(self.species, start=1):
                if s.detuning == 0:
                    problems.append(f"species {j}: detuning must be nonzero")
        if problems:
            raise ValidationError(problems)

    @property
    def alphas(self) -> tuple[float, float]:
        return tuple(polarizability(s, j) for j, s in enumerate(self.species, start=1))

    def time_steps(self) -> tuple[float, float]:
        return tuple(self.dz / s.group_velocity for s in self.species)


def crossing_config(
    species,
    field: FieldConfig,
    steps: int,
    window: float = DEFAULT_WINDOW,
    **kwargs,
) -> tuple[EvolveConfig, float]:
    """Config for a full passage through the Gaussian beam.

    Returns the config and the starting coordinate ``-window * w_L``; the run
    ends at ``+window * w_L``.
    """
    span = 2.0 * window * field.envelope_width
    cfg = EvolveConfig(tuple(species), field, span / steps, steps, **kwargs)
    return cfg, -window * field.envelope_width


class _Stepper:
    """Precomputed operators for one (state grid, config) pair."""

    def __init__(self, grid, config: EvolveConfig):
        self.config = config
        self.alphas = config.alphas
        self.detunings = tuple(s.detuning for s in config.species)
        self.rabi_sq = [om * om for om in config.field.peak_rabi]
        self.standing = np.cos(config.field.medium_wavenumber * grid.y) ** 2
        self.half_dt = [0.5 * dt for dt in config.time_steps()]
        k = grid.k
        self.kinetic = [
            np.exp(-1j * k * k / (2.0 * s.mass) * dt) for s, dt in zip(config.species, config.time_steps())
        ]
        self.w = config.field.envelope_width

    def envelope(self, z: float) -> float:
        if not self.config.envelope:
            return 1.0
        return math.exp(-((z / self.w) ** 2))

    def potentials(self, psi: np.ndarray, z: float) -> list[np.ndarray]:
        rho = np.abs(psi) ** 2
        sample = MediumSample(rho[0], rho[1], *self.alphas)
        env = self.envelope(z)
        return [
            nonlinear_potential(sample, self.rabi_sq[j] * env * self.standing, self.detunings[j], self.config.mode)
            for j in range(2)
        ]

    def half_potential(self, psi: np.ndarray, z: float) -> np.ndarray:
        pots = self.potentials(psi, z)
        out = np.empty_like(psi)
        for j in range(2):
            out[j] = psi[j] * np.exp(-1j * pots[j] * self.half_dt[j])
        return out

    def step(self, psi: np.ndarray, z: float, z_next: float) -> np.ndarray:
        psi = self.half_potential(psi, z)
        if self.config.kinetic:
            psi = np.fft.ifft(np.fft.fft(psi, axis=1) * np.array(self.kinetic), axis=1)
        return self.half_potential(psi, z_next)


def step(state: MatterState, config: EvolveConfig) -> MatterState:
    """Advance ``state`` by one Strang step of length ``config.dz``."""
    stepper = _Stepper(state.grid, config)
    z_next = state.z + config.dz
    psi = stepper.step(state.psi, state.z, z_next)
    _check_finite(psi, 0)
    return state.replace(psi=psi, z=z_next)


def _check_finite(psi, step_index):
    if not np.all(np.isfinite(psi)):
        raise NumericBlowupError(f"non-finite amplitudes after step {step_index}", step_index)


@dataclass(frozen=True)
class ExcitedFraction:
    """Adiabatically eliminated excited-state populations ``|phi_e|^2``."""

    populations: np.ndarray  # shape (2, n)
    adiabaticity: np.ndarray  # shape (2,), max |phi_e|^2 / |psi_g|^2


def excited_state_diagnostic(state: MatterState, config: EvolveConfig) -> ExcitedFraction:
    """``|phi_ej|^2 = |Omega_j^+|^2 |psi_gj|^2 / (4 Delta_loc^2)`` at ``state.z``."""
    stepper = _Stepper(state.grid, config)
    rho = state.densities
    sample = MediumSample(rho[0], rho[1], *stepper.alphas)
    env = stepper.envelope(state.z)
    pops = np.empty_like(rho)
    metric = np.zeros(2)
    for j in range(2):
        rabi_sq = stepper.rabi_sq[j] * env * stepper.standing
        dloc = local_detuning(sample, stepper.detunings[j])
        # reuse the singularity check of the full potential
        nonlinear_potential(sample, rabi_sq, stepper.detunings[j], "full")
        ratio = rabi_sq / (4.0 * dloc * dloc)
        pops[j] = ratio * rho[j]
        occupied = rho[j] > 0
        metric[j] = float(np.max(ratio[occupied])) if np.any(occupied) else 0.0
    return ExcitedFraction(pops, metric)


@dataclass
class EvolveResult:
    state: MatterState
    series: dict
    warnings: list


Observer = Callable[[int, MatterState], None]


def evolve(
    state: MatterState,
    config: EvolveConfig,
    observers: Iterable[Observer] = (),
) -> EvolveResult:
    """Run ``config.steps`` Strang steps starting from ``state``.

    Records ``z``, norms and adiabaticity metrics at step 0, every
    ``observe_every`` steps (if > 0) and at the final step, and passes the
    same states to ``observers``. Deterministic: no randomness anywhere.
    """
    observers = list(observers)
    notes = _preflight(state, config)
    stepper = _Stepper(state.grid, config)
    series = {k: [] for k in ("step", "z", "norm_1", "norm_2", "adiabaticity_1", "adiabaticity_2")}

    def record(i, st):
        norms = st.norms
        adi = excited_state_diagnostic(st, config).adiabaticity
        for key, val in zip(series, (i, st.z, norms[0], norms[1], adi[0], adi[1])):
            series[key].append(val)
        for obs in observers:
            obs(i, st)

    record(0, state)
    psi, z = state.psi, state.z
    for i in range(1, config.steps + 1):
        z_next = z + config.dz
        psi = stepper.step(psi, z, z_next)
        z = z_next
        _check_finite(psi, i)
        if i == config.steps or (config.observe_every and i % config.observe_every == 0):
            record(i, state.replace(psi=psi, z=z))
    final = state.replace(psi=psi, z=z) if config.steps else state
    return EvolveResult(final, {k: np.asarray(v) for k, v in series.items()}, notes)


def _preflight(state: MatterState, config: EvolveConfig) -> list[str]:
    notes = []
    stepper = _Stepper(state.grid, config)
    pots = stepper.potentials(state.psi, 0.0 if config.envelope else state.z)
    for j in range(2):
        phase = float(np.max(np.abs(pots[j]))) * 2.0 * stepper.half_dt[j]
        if phase > MAX_PHASE_PER_STEP:
            msg = f"component {j + 1}: potential phase per step {phase:.3g} exceeds {MAX_PHASE_PER_STEP}"
            warnings.warn(msg, StepSizeWarning, stacklevel=3)
            notes.append(msg)
    width = state.meta.get("packet_width")
    if width is not None and width > state.grid.length / 8:
        msg = f"packet width {width:g} exceeds L/8 = {state.grid.length / 8:g}; periodic wrap-around likely"
        warnings.warn(msg, WrapAroundWarning, stacklevel=3)
        notes.append(msg)
    return notes


def momentum_spectrum(state: MatterState) -> tuple[np.ndarray, np.ndarray]:
    """Wavenumbers (ascending) and per-component weights ``|psi_k|^2 dy / N``.

    Weights sum to the component norms (Parseval).
    """
    grid = state.grid
    amp = np.fft.fft(state.psi, axis=1)
    weights = np.abs(amp) ** 2 * grid.dy / grid.n
    order = np.argsort(grid.k, kind="stable")
    return grid.k[order], weights[:, order]


def order_weights(state: MatterState, n: float, k_l: float, max_order: int) -> tuple[np.ndarray, np.ndarray]:
    """Normalised weights in the momentum bins ``k = 2 q n k_L``, ``|q| <= max_order``.

    The grid length must hold an integer number of grating periods
    ``pi / (n k_L)``; otherwise the orders do not fall on FFT bins.
    """
    grid = state.grid
    cells = grid.length * n * k_l / math.pi
    if abs(cells - round(cells)) > 1e-9 * max(1.0, cells):
        raise DomainError(f"grid length holds {cells:.6g} grating periods; must be an integer")
    cells = int(round(cells))
    if max_order * cells >= grid.n // 2:
        raise DomainError(f"order {max_order} exceeds the grid's Nyquist limit")
    amp = np.fft.fft(state.psi, axis=1)
    weights = np.abs(amp) ** 2 * grid.dy / grid.n
    orders = np.arange(-max_order, max_order + 1)
    picked = weights[:, (orders * cells) % grid.n]
    return orders, picked / state.norms[:, None]
