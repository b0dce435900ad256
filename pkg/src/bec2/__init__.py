"""Two-component ultracold gases in off-resonant light.

Local-field corrected mean-field optics (Lorentz-Lorenz local detuning,
Maxwell-Garnett index), analytic Raman-Nath diffraction of a two-component
beam, and a split-step propagator that checks it numerically.
"""

__version__ = "0.1.0"

from .errors import (
    Bec2Error,
    DomainError,
    NumericBlowupError,
    ResolutionError,
    SingularDetuningError,
    SingularMediumError,
    ValidationError,
)
from .field import FieldConfig, rabi_sq_profile
from .medium import MediumSample, local_detuning, nonlinear_potential, refractive_index, susceptibility
from .params import Mixture, PhysicalConfig, Species, UnitSystem, effective_volume, polarizability, to_internal, to_user
from .propagator import EvolveConfig, crossing_config, evolve, momentum_spectrum, order_weights, step
from .raman_nath import DiffractionSpectrum, assemble_spectrum, diffraction_angle, order_probabilities
from .state import Grid, MatterState, gaussian_state, uniform_state
