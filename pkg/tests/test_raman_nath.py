import math

import numpy as np
import pytest

from bec2.errors import DomainError, SingularDetuningError
from bec2.field import FieldConfig
from bec2.params import Mixture, Species, effective_volume
from bec2.raman_nath import (
    PacketWidthWarning,
    assemble_spectrum,
    coupling_strength,
    diffraction_angle,
    far_field_state,
    order_probabilities,
    tau,
)
from bec2.state import Grid, gaussian_state, uniform_state
from bec2.propagator import order_weights

pytestmark = pytest.mark.filterwarnings("ignore::bec2.raman_nath.PacketWidthWarning")


def test_coupling_strength_examples():
    s = Species(1.0, 100.0, 0.0, 1.0)
    assert coupling_strength(s, FieldConfig(1.0, 10.0, (0.0, 1.0)), 1) == 0.0
    g = coupling_strength(s, FieldConfig(1.0, 10.0, (4.0, 0.0)), 1)
    assert g == pytest.approx(0.1 * math.sqrt(math.pi), rel=1e-15)
    assert g == pytest.approx(0.177245, abs=1e-6)
    flipped = coupling_strength(Species(1.0, -100.0, 0.0, 1.0), FieldConfig(1.0, 10.0, (4.0, 0.0)), 1)
    assert flipped == -g


def _mixture_with_screening(total):
    """Mixture whose V_1 rho_1 + V_2 rho_2 equals ``total`` (blue-detuned species 1)."""
    s1 = Species(1.0, 1.0, 1.0)  # V_1 = 4pi/3
    s2 = Species(1.0, 2.0, 0.0)
    return Mixture((s1, s2), (total / effective_volume(s1), 0.0))


def test_tau_examples():
    assert tau(1.0, _mixture_with_screening(0.0)) == 2.0
    assert tau(1.0, _mixture_with_screening(1.0)) == pytest.approx(0.5, rel=1e-15)
    s1 = Species(1.0, -1.0, 1.0)  # V_1 = -4pi/3
    m = Mixture((s1, Species(1.0, 2.0)), (1.0 / (4 * math.pi / 3), 0.0))
    with pytest.raises(SingularDetuningError):
        tau(1.0, m)


def test_order_probabilities_examples():
    q, p = order_probabilities(0.0, 3)
    assert list(q) == [-3, -2, -1, 0, 1, 2, 3]
    assert p[3] == 1.0 and np.all(np.delete(p, 3) == 0.0)
    q, p = order_probabilities(1.0, 25)
    # J_0(1)^2 from the series oracle (0.5855275, not the 0.585508 sometimes quoted)
    assert p[25] == pytest.approx(0.5855275, abs=1e-7)
    assert p[26] == pytest.approx(0.193644, abs=1e-6)
    assert np.array_equal(p, p[::-1])
    assert np.sum(p) >= 1 - 1e-10


def test_diffraction_angle_examples():
    s = Species(2.0, 1.0, 0.0, 1.0)
    assert diffraction_angle(0, s, 1.0, 1.0) == 0.0
    assert diffraction_angle(1, s, 1.0, 1.0) == pytest.approx(math.pi / 4, rel=1e-15)
    q = np.arange(-30, 31)
    a = diffraction_angle(q, s, 1.07, 1.0)
    assert np.array_equal(a[::-1], -a)
    other = Species(0.5, -3.0, 1.0, 4.0)  # same m*v
    assert np.array_equal(diffraction_angle(q, other, 1.07, 1.0), a)


def test_spectrum_without_light():
    sp = (Species(1.0, 5.0, 0.1), Species(2.0, -5.0, 0.1))
    spec = assemble_spectrum(Mixture(sp, (0.1, 0.1)), FieldConfig(1.0, 1.0, (0.0, 0.0)))
    assert spec.max_order == 0
    assert spec.probabilities.tolist() == [[1.0], [1.0]]
    assert spec.angles.tolist() == [[0.0], [0.0]]
    assert not spec.separated


def test_spectrum_invariants(mixture, field):
    spec = assemble_spectrum(mixture, field)
    assert spec.max_order == math.ceil(max(abs(t) for t in spec.tau)) + 20
    for p in spec.probabilities:
        assert 1 - 1e-10 <= p.sum() <= 1 + 1e-12
        assert np.array_equal(p, p[::-1])
    assert spec.separated  # m1 v1 = 2.0, m2 v2 = 2.55


def test_separation_predicate_at_equal_momenta(field):
    sp = (Species(1.0, 50.0, 0.3, 2.0), Species(2.0, -80.0, 0.25, 1.0))
    spec = assemble_spectrum(Mixture(sp, (0.2, 0.3)), field)
    assert spec.angles_coincide and not spec.separated


def test_denser_medium_weakens_diffraction():
    s1, s2 = Species(1.0, 10.0, 1.0), Species(1.5, 20.0, 1.0)
    f = FieldConfig(1.0, 3.0, (2.0, 3.0))
    m0 = Mixture((s1, s2), (0.05, 0.05))
    base = 1 + sum(v * r for v, r in zip(m0.volumes, m0.densities))
    # scale densities so that the screening denominator doubles
    scale = (2 * base - 1) / (base - 1)
    m1 = m0.with_densities(tuple(r * scale for r in m0.densities))
    t0 = assemble_spectrum(m0, f.with_index(1.0)).tau
    t1 = assemble_spectrum(m1, f.with_index(1.0)).tau
    assert np.allclose(np.array(t0) / np.array(t1), 4.0, rtol=1e-13)


def test_resolved_index_from_peak_density(mixture, field):
    from bec2.medium import refractive_index

    spec = assemble_spectrum(mixture, field)
    assert spec.refractive_index == refractive_index(mixture.sample())
    assert assemble_spectrum(mixture, field.with_index(1.25)).refractive_index == 1.25


def test_evanescent_medium_refused():
    s = Species(1.0, 1.0, 1.0)  # alpha = -1
    m = Mixture((s, s), (0.1, 0.1))  # (8pi/3) S = -1.68 < -1
    with pytest.raises(DomainError, match="n\\^2 < 0"):
        assemble_spectrum(m, FieldConfig(1.0, 1.0, (1.0, 1.0)))


def _grid(n=1.0):
    return Grid.commensurate(512, math.pi / n, 16)


def test_far_field_identity_at_zero_tau():
    g = _grid()
    st = gaussian_state(g, (1.0, 0.5), width=g.length / 10)
    out = far_field_state(st, (0.0, 0.0), 1.0, 1.0)
    assert np.array_equal(out.psi, st.psi)


def test_far_field_equals_phase_imprint():
    n = 1.05
    g = _grid(n)
    st = gaussian_state(g, (1.0, 0.5), width=g.length / 10)
    taus = (1.3, -2.2)
    out = far_field_state(st, taus, n, 1.0)
    for j, t in enumerate(taus):
        direct = st.psi[j] * np.exp(-1j * t * (1 + np.cos(2 * n * g.y)))
        assert np.max(np.abs(out.psi[j] - direct)) <= 1e-12
    assert np.allclose(out.norms, st.norms, rtol=1e-12, atol=0)
    assert np.array_equal(np.abs(out.psi[0]) ** 2 > 0, np.abs(st.psi[0]) ** 2 > 0)


@pytest.mark.parametrize("t", [0.3, 1.0, 2.0, 5.0])
def test_far_field_momentum_weights_are_bessel_squares(t):
    g = _grid()
    st = uniform_state(g, (1.0, 2.0))
    out = far_field_state(st, (t, t / 2), 1.0, 1.0)
    q, w = order_weights(out, 1.0, 1.0, 10)
    for j, tj in enumerate((t, t / 2)):
        _, p = order_probabilities(tj, 10)
        assert np.max(np.abs(w[j] - p)) <= 1e-8


def test_narrow_packet_warns():
    g = _grid()
    st = gaussian_state(g, (1.0, 1.0), width=2.0)
    with pytest.warns(PacketWidthWarning, match="below"):
        out = far_field_state(st, (1.0, 1.0), 1.0, 1.0)
    assert out.meta["warnings"]
