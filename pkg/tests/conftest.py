import math

import pytest

from bec2.field import FieldConfig
from bec2.params import Mixture, Species


@pytest.fixture
def species_pair():
    # opposite detuning signs, different momenta m*v
    return (Species(1.0, 50.0, 0.3, 2.0), Species(1.7, -80.0, 0.25, 1.5))


@pytest.fixture
def mixture(species_pair):
    return Mixture(species_pair, (0.2, 0.3))


@pytest.fixture
def field():
    return FieldConfig(1.0, 10.0, (4.0, 5.0))


def tuned_field(mixture, target_tau, width=10.0):
    """Field whose Rabi frequencies give |tau_j| == target_tau for both components."""
    from bec2.raman_nath import assemble_spectrum

    probe = assemble_spectrum(mixture, FieldConfig(1.0, width, (1.0, 1.0)))
    om = tuple(math.sqrt(abs(target_tau / t)) for t in probe.tau)
    return FieldConfig(1.0, width, om)
