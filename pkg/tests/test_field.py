import math

import numpy as np
import pytest

from bec2.errors import DomainError, ResolutionError, ValidationError
from bec2.field import FieldConfig, helmholtz_residual, rabi_sq_profile, standing_wave_amplitude


@pytest.fixture
def cfg():
    return FieldConfig(1.3, 2.0, (2.0, 0.5), refractive_index=1.1)


def test_profile_examples(cfg):
    assert rabi_sq_profile(cfg, 1, 0.0, 0.0) == 4.0
    node = math.pi / (2 * cfg.medium_wavenumber)
    assert rabi_sq_profile(cfg, 2, node, 0.7) == pytest.approx(0.0, abs=1e-30)
    unit = FieldConfig(1.0, 1.0, (2.0, 0.0), refractive_index=1.0)
    assert rabi_sq_profile(unit, 1, 0.0, 1.0) == pytest.approx(4 * math.exp(-1), abs=1e-15)
    assert rabi_sq_profile(unit, 1, 0.0, 1.0) == pytest.approx(1.471518, abs=1e-6)


def test_profile_bounds_and_period(cfg):
    y = np.linspace(-20, 20, 4001)
    p = rabi_sq_profile(cfg, 1, y, 0.3)
    assert np.all(p >= 0) and np.all(p <= 4.0)
    shifted = rabi_sq_profile(cfg, 1, y + cfg.intensity_period, 0.3)
    assert np.allclose(shifted, p, rtol=0, atol=1e-12)


def test_period_average_is_half_peak(cfg):
    n = 256
    y = np.arange(n) * cfg.intensity_period / n
    assert np.mean(rabi_sq_profile(cfg, 1, y)) == pytest.approx(2.0, abs=1e-10)


def test_profile_requires_resolved_index():
    with pytest.raises(DomainError):
        rabi_sq_profile(FieldConfig(1.0, 1.0, (1.0, 1.0)), 1, 0.0)
    with pytest.raises(DomainError):
        rabi_sq_profile(FieldConfig(1.0, 1.0, (1.0, 1.0), 1.0), 3, 0.0)


def test_field_validation():
    with pytest.raises(ValidationError) as info:
        FieldConfig(0.0, -1.0, (1.0, -2.0), refractive_index=-1.0)
    assert len(info.value.problems) == 4


def _residual(cfg, pts_per_period):
    period = 2 * math.pi / cfg.medium_wavenumber
    y = np.arange(3 * pts_per_period) * period / pts_per_period
    return helmholtz_residual(cfg, y, standing_wave_amplitude(cfg, y))


def test_helmholtz_residual_floor_and_order(cfg):
    r64 = _residual(cfg, 64)
    r128 = _residual(cfg, 128)
    assert r64 <= 1e-3
    assert 3.5 <= r64 / r128 <= 4.5
    # matches the leading truncation term (k dy)^2 / 12
    assert r64 == pytest.approx((2 * math.pi / 64) ** 2 / 12, rel=1e-3)


def test_helmholtz_rejects_coarse_grid(cfg):
    y = np.arange(10) * cfg.intensity_period / 3
    with pytest.raises(ResolutionError):
        helmholtz_residual(cfg, y, standing_wave_amplitude(cfg, y))
