import math

import pytest

from bec2.config import ConfigError, dump_config, parse_config, set_path, sweep_points
from bec2.params import UnitSystem

MINIMAL = """
species:
  - {mass: 1.0, detuning: 50.0, dipole_moment: 0.3, group_velocity: 2.0}
  - {mass: 1.7, detuning: -80.0, dipole_moment: 0.25, group_velocity: 1.5}
mixture: {densities: [0.2, 0.3]}
field: {vacuum_wavenumber: 1.0, envelope_width: 10.0, peak_rabi: [4.0, 5.0]}
"""


def test_minimal_config_fills_defaults():
    cfg = parse_config(MINIMAL)
    assert cfg.data["simulation"]["grid_points"] == 1024
    assert cfg.data["output"]["format"] == "csv"
    assert cfg.data["units"]["hbar"] == 1.0
    # Q materialised from the resolved taus
    assert cfg.data["diffraction"]["max_order"] == 21
    assert cfg.warnings == []


def test_problems_name_the_offending_field():
    text = MINIMAL.replace("mass: 1.7", "mass: -1.7").replace("envelope_width: 10.0", "envelope_width: 0")
    with pytest.raises(ConfigError) as info:
        parse_config(text)
    msgs = " ".join(info.value.problems)
    assert "species[2].mass" in msgs
    assert "field.envelope_width" in msgs


def test_parse_error_reports_line():
    with pytest.raises(ConfigError, match="line 3"):
        parse_config("species:\n  - {mass: 1\nfield: [\n")


def test_unknown_section_rejected():
    with pytest.raises(ConfigError, match="unknown section"):
        parse_config(MINIMAL + "bogus: 1\n")


def test_epsilon_takes_precedence_with_warning():
    cfg = parse_config(MINIMAL.replace("densities: [0.2, 0.3]", "densities: [0.2, 0.3], epsilon: [-0.01, 0.02]"))
    assert any("epsilon" in w for w in cfg.warnings)
    mix = cfg.mixture()
    assert mix.epsilons == pytest.approx((-0.01, 0.02), rel=1e-12)


def test_epsilon_with_wrong_sign_is_rejected():
    # alpha_1 < 0 for a positive detuning, so a positive epsilon needs a negative density
    with pytest.raises(ConfigError):
        parse_config(MINIMAL.replace("densities: [0.2, 0.3]", "epsilon: [0.01, 0.0]"))


def test_echo_round_trips():
    cfg = parse_config(MINIMAL)
    again = parse_config(dump_config(cfg))
    assert again == cfg
    assert again.hash() == cfg.hash()


def test_si_units_are_converted():
    text = MINIMAL + "units: {preset: si, reference_wavenumber: 8.0e6, reference_frequency: 1.0e3}\n"
    cfg = parse_config(text)
    u = cfg.units
    assert isinstance(u, UnitSystem)
    assert cfg.physical().field.vacuum_wavenumber == pytest.approx(1.0 / 8.0e6)


def test_sweep_points_are_cartesian():
    text = MINIMAL + (
        "sweep:\n"
        "  - {parameter: mixture.densities.0, start: 0.0, stop: 0.2, count: 3}\n"
        "  - {parameter: field.envelope_width, start: 5.0, stop: 10.0, count: 2}\n"
    )
    pts = sweep_points(parse_config(text))
    assert len(pts) == 6
    values, cfg = pts[-1]
    assert values == {"mixture.densities.0": 0.2, "field.envelope_width": 10.0}
    assert cfg.data["mixture"]["densities"][0] == 0.2
    assert cfg.data["sweep"] == []


def test_set_path_does_not_mutate():
    data = {"a": {"b": [1, 2]}}
    out = set_path(data, "a.b.1", 5)
    assert data["a"]["b"] == [1, 2] and out["a"]["b"] == [1, 5]


def test_output_dir_env_fallback(monkeypatch):
    cfg = parse_config(MINIMAL)
    monkeypatch.setenv("BEC2_OUT", "/tmp/somewhere")
    assert str(cfg.output_dir()) == "/tmp/somewhere"
    assert str(cfg.output_dir("x")) == "x"
    monkeypatch.delenv("BEC2_OUT")
    assert str(cfg.output_dir()) == "bec2_out"


def test_singular_config_leaves_order_unresolved():
    text = MINIMAL.replace("detuning: 50.0, dipole_moment: 0.3", "detuning: -1.0, dipole_moment: 1.0")
    text = text.replace("densities: [0.2, 0.3]", f"densities: [{3 / (4 * math.pi)!r}, 0.0]")
    cfg = parse_config(text)
    assert cfg.data["diffraction"]["max_order"] is None
    assert any("unresolved" in w for w in cfg.warnings)
