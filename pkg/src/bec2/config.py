"""Run configuration: YAML parsing, validation, defaults and echo.

A configuration is a nested mapping; every section is optional except
``species`` (two entries) and ``field``. :func:`parse_config` returns a
:class:`RunConfig` whose ``data`` holds the fully materialised mapping, so
``parse_config(dump_config(cfg))`` reproduces ``cfg`` exactly.
"""

from __future__ import annotations

import copy
import hashlib
import json
import math
import os
import re
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any

import yaml

from .errors import Bec2Error, DomainError, ValidationError
from .field import FieldConfig
from .params import Mixture, PhysicalConfig, Species, UnitSystem, to_internal

DEFAULTS: dict[str, Any] = {
    "units": {
        "preset": "internal",
        "reference_wavenumber": 1.0,
        "reference_frequency": None,
        "hbar": None,
        "coulomb_constant": None,
    },
    "mixture": {"densities": [0.0, 0.0], "epsilon": None},
    "field": {"refractive_index": None},
    "diffraction": {"max_order": None, "auto_order": None, "packet_width": None},
    "simulation": {
        "grid_points": 1024,
        "periods": 16,
        "initial": "uniform",
        "initial_file": None,
        "packet_width": None,
        "steps": 2000,
        "window": 6.0,
        "dz": None,
        "mode": "full",
        "kinetic": False,
        "envelope": True,
        "observe_every": 100,
        "snapshot_format": "binary",
    },
    "sweep": [],
    "output": {"dir": None, "format": "csv", "plot": False},
}

SPECIES_DEFAULTS = {"dipole_moment": 0.0, "group_velocity": 1.0}

_REQUIRED_FIELD = ("vacuum_wavenumber", "envelope_width", "peak_rabi")


class ConfigError(ValidationError):
    pass


@dataclass
class RunConfig:
    """Validated, fully materialised configuration."""

    data: dict
    warnings: list = field(default_factory=list)

    def __eq__(self, other):
        return isinstance(other, RunConfig) and self.data == other.data

    @property
    def units(self) -> UnitSystem:
        u = self.data["units"]
        return UnitSystem(u["reference_wavenumber"], u["reference_frequency"], u["hbar"], u["coulomb_constant"])

    def lab(self) -> PhysicalConfig:
        sp = tuple(Species(**s) for s in self.data["species"])
        f = self.data["field"]
        field_cfg = FieldConfig(f["vacuum_wavenumber"], f["envelope_width"], tuple(f["peak_rabi"]), f["refractive_index"])
        return PhysicalConfig(sp, tuple(self.data["mixture"]["densities"]), field_cfg, self.data["diffraction"]["packet_width"])

    def physical(self) -> PhysicalConfig:
        """Internal-unit physics; densities resolved from ``epsilon`` when given."""
        phys = to_internal(self.lab(), self.units)
        eps = self.data["mixture"]["epsilon"]
        if eps is not None:
            mix = Mixture.from_epsilon(phys.species, eps)
            phys = PhysicalConfig(phys.species, mix.densities, phys.field, phys.packet_width)
        return phys

    def mixture(self) -> Mixture:
        phys = self.physical()
        return Mixture(phys.species, phys.densities)

    def output_dir(self, override=None) -> Path:
        d = override or self.data["output"]["dir"] or os.environ.get("BEC2_OUT") or "bec2_out"
        return Path(d)

    def hash(self) -> str:
        return config_hash(self.data)


def config_hash(data: dict) -> str:
    return hashlib.sha256(json.dumps(data, sort_keys=True).encode()).hexdigest()


def _merge(defaults, given):
    out = copy.deepcopy(defaults)
    for k, v in given.items():
        if isinstance(v, dict) and isinstance(out.get(k), dict):
            out[k] = _merge(out[k], v)
        else:
            out[k] = copy.deepcopy(v)
    return out


def _num(x) -> bool:
    return isinstance(x, (int, float)) and not isinstance(x, bool) and math.isfinite(x)


class _Loader(yaml.SafeLoader):
    """SafeLoader that also reads ``1e6`` and ``8.0e6`` as floats (YAML 1.2 style)."""


_Loader.add_implicit_resolver(
    "tag:yaml.org,2002:float",
    re.compile(
        r"""^(?:[-+]?(?:[0-9][0-9_]*)\.[0-9_]*(?:[eE][-+]?[0-9]+)?
        |[-+]?(?:[0-9][0-9_]*)(?:[eE][-+]?[0-9]+)
        |\.[0-9_]+(?:[eE][-+]?[0-9]+)?
        |[-+]?\.(?:inf|Inf|INF)
        |\.(?:nan|NaN|NAN))$""",
        re.X,
    ),
    list("-+0123456789."),
)


def load_yaml(source) -> dict:
    """Parse YAML text or a path to YAML. Syntax errors report the line."""
    if isinstance(source, Path) or (isinstance(source, str) and "\n" not in source and Path(source).is_file()):
        text = Path(source).read_text()
    else:
        text = source
    try:
        raw = yaml.load(text, Loader=_Loader)
    except yaml.YAMLError as exc:
        mark = getattr(exc, "problem_mark", None)
        where = f"line {mark.line + 1}, column {mark.column + 1}: " if mark else ""
        raise ConfigError(f"parse error: {where}{getattr(exc, 'problem', exc)}") from exc
    if raw is None:
        raw = {}
    if not isinstance(raw, dict):
        raise ConfigError("configuration must be a mapping at top level")
    return raw


def parse_config(source) -> RunConfig:
    """Parse and validate a configuration given as YAML text, a path, or a dict."""
    raw = source if isinstance(source, dict) else load_yaml(source)
    unknown = sorted(set(raw) - set(DEFAULTS) - {"species"})
    data = _merge(DEFAULTS, raw)
    problems = [f"unknown section {k!r}" for k in unknown]
    warnings: list[str] = []

    species = data.get("species")
    if not isinstance(species, list) or len(species) != 2:
        problems.append("species: exactly two entries required")
        species = []
    resolved_species = []
    for j, s in enumerate(species, start=1):
        if not isinstance(s, dict):
            problems.append(f"species[{j}]: must be a mapping")
            continue
        s = {**SPECIES_DEFAULTS, **s}
        extra = set(s) - {"mass", "detuning", "dipole_moment", "group_velocity"}
        problems += [f"species[{j}].{k}: unknown key" for k in sorted(extra)]
        for key in ("mass", "detuning"):
            if key not in s:
                problems.append(f"species[{j}].{key}: required")
        for key, v in s.items():
            if key in extra or key not in s:
                continue
            if not _num(v):
                problems.append(f"species[{j}].{key}: must be a finite number, got {v!r}")
        if all(_num(s.get(k)) for k in ("mass", "detuning", "dipole_moment", "group_velocity")):
            if s["mass"] <= 0:
                problems.append(f"species[{j}].mass: must be > 0, got {s['mass']!r}")
            if s["detuning"] == 0:
                problems.append(f"species[{j}].detuning: must be nonzero")
            if s["group_velocity"] <= 0:
                problems.append(f"species[{j}].group_velocity: must be > 0, got {s['group_velocity']!r}")
            if s["dipole_moment"] < 0:
                problems.append(f"species[{j}].dipole_moment: must be >= 0, got {s['dipole_moment']!r}")
        resolved_species.append({k: float(v) if _num(v) else v for k, v in s.items()})
    data["species"] = resolved_species

    problems += _check_units(data)
    problems += _check_mixture(data, warnings, "densities" in (raw.get("mixture") or {}))
    problems += _check_field(data)
    problems += _check_simulation(data)
    problems += _check_sweep(data)
    problems += _check_output(data)
    if problems:
        raise ConfigError(problems)

    cfg = RunConfig(data, warnings)
    try:
        cfg.mixture()
    except ValidationError as exc:
        raise ConfigError(exc.problems) from exc
    except DomainError as exc:
        raise ConfigError(str(exc)) from exc
    _materialise_derived(cfg)
    return cfg


def _check_units(data) -> list[str]:
    u = data["units"]
    out = []
    if u["preset"] not in ("internal", "si"):
        return [f"units.preset: must be 'internal' or 'si', got {u['preset']!r}"]
    if u["preset"] == "internal":
        for key in ("reference_frequency", "hbar", "coulomb_constant"):
            if u[key] is None:
                u[key] = 1.0
    else:
        import scipy.constants as cst

        if u["hbar"] is None:
            u["hbar"] = cst.hbar
        if u["coulomb_constant"] is None:
            u["coulomb_constant"] = 1.0 / (4.0 * math.pi * cst.epsilon_0)
        if u["reference_frequency"] is None and data["species"] and _num(data["species"][0].get("mass")):
            k = u["reference_wavenumber"]
            if _num(k):
                u["reference_frequency"] = u["hbar"] * k * k / (2.0 * data["species"][0]["mass"])
    for key in ("reference_wavenumber", "reference_frequency", "hbar", "coulomb_constant"):
        v = u[key]
        if not (_num(v) and v > 0):
            out.append(f"units.{key}: must be finite and > 0, got {v!r}")
        else:
            u[key] = float(v)
    return out


def _pair(v) -> bool:
    return isinstance(v, list) and len(v) == 2 and all(_num(x) for x in v)


def _check_mixture(data, warnings, densities_given) -> list[str]:
    m = data["mixture"]
    out = []
    extra = set(m) - {"densities", "epsilon"}
    out += [f"mixture.{k}: unknown key" for k in sorted(extra)]
    if m["epsilon"] is not None:
        if not _pair(m["epsilon"]):
            out.append("mixture.epsilon: must be a list of two finite numbers")
        elif densities_given:
            warnings.append("mixture: both densities and epsilon given; epsilon takes precedence")
        m["densities"] = [0.0, 0.0]
        if _pair(m["epsilon"]):
            m["epsilon"] = [float(x) for x in m["epsilon"]]
    if not _pair(m["densities"]):
        out.append("mixture.densities: must be a list of two finite numbers")
    elif any(x < 0 for x in m["densities"]):
        out.append("mixture.densities: must be >= 0")
    else:
        m["densities"] = [float(x) for x in m["densities"]]
    return out


def _check_field(data) -> list[str]:
    f = data["field"]
    out = [f"field.{k}: required" for k in _REQUIRED_FIELD if k not in f]
    out += [f"field.{k}: unknown key" for k in sorted(set(f) - set(_REQUIRED_FIELD) - {"refractive_index"})]
    for key in ("vacuum_wavenumber", "envelope_width"):
        if key in f:
            if not (_num(f[key]) and f[key] > 0):
                out.append(f"field.{key}: must be finite and > 0, got {f[key]!r}")
            else:
                f[key] = float(f[key])
    if "peak_rabi" in f:
        if not _pair(f["peak_rabi"]) or any(x < 0 for x in f["peak_rabi"]):
            out.append("field.peak_rabi: must be two finite numbers >= 0")
        else:
            f["peak_rabi"] = [float(x) for x in f["peak_rabi"]]
    n = f["refractive_index"]
    if n is not None:
        if not (_num(n) and n > 0):
            out.append(f"field.refractive_index: must be null or > 0, got {n!r}")
        else:
            f["refractive_index"] = float(n)
    d = data["diffraction"]
    if d["max_order"] is not None and not (isinstance(d["max_order"], int) and d["max_order"] >= 0):
        out.append("diffraction.max_order: must be a non-negative integer or null")
    if d["auto_order"] is None:
        d["auto_order"] = d["max_order"] is None
    elif not isinstance(d["auto_order"], bool):
        out.append("diffraction.auto_order: must be true, false or null")
    if d["packet_width"] is not None:
        if not (_num(d["packet_width"]) and d["packet_width"] > 0):
            out.append("diffraction.packet_width: must be > 0")
        else:
            d["packet_width"] = float(d["packet_width"])
    return out


def _check_simulation(data) -> list[str]:
    s = data["simulation"]
    out = [f"simulation.{k}: unknown key" for k in sorted(set(s) - set(DEFAULTS["simulation"]))]
    n = s["grid_points"]
    if not (isinstance(n, int) and n >= 16 and not n & (n - 1)):
        out.append(f"simulation.grid_points: must be a power of two >= 16, got {n!r}")
    if not (isinstance(s["periods"], int) and s["periods"] >= 1):
        out.append("simulation.periods: must be a positive integer")
    if s["initial"] not in ("uniform", "gaussian", "file"):
        out.append(f"simulation.initial: must be uniform, gaussian or file, got {s['initial']!r}")
    if s["initial"] == "file" and not s["initial_file"]:
        out.append("simulation.initial_file: required when initial is 'file'")
    if s["initial"] == "gaussian" and not (_num(s["packet_width"]) and s["packet_width"] > 0):
        out.append("simulation.packet_width: required (> 0) for gaussian initial state")
    if not (isinstance(s["steps"], int) and s["steps"] >= 0):
        out.append("simulation.steps: must be a non-negative integer")
    if not (_num(s["window"]) and s["window"] > 0):
        out.append("simulation.window: must be > 0")
    if s["dz"] is not None and not (_num(s["dz"]) and s["dz"] > 0):
        out.append("simulation.dz: must be null or > 0")
    if s["mode"] not in ("full", "expanded"):
        out.append("simulation.mode: must be 'full' or 'expanded'")
    for key in ("kinetic", "envelope"):
        if not isinstance(s[key], bool):
            out.append(f"simulation.{key}: must be true or false")
    if not (isinstance(s["observe_every"], int) and s["observe_every"] >= 0):
        out.append("simulation.observe_every: must be a non-negative integer")
    if s["snapshot_format"] not in ("binary", "csv"):
        out.append("simulation.snapshot_format: must be 'binary' or 'csv'")
    return out


def _check_sweep(data) -> list[str]:
    sw = data["sweep"]
    if isinstance(sw, dict):
        sw = data["sweep"] = [sw]
    if not isinstance(sw, list):
        return ["sweep: must be a list of axes"]
    out = []
    for i, ax in enumerate(sw):
        if not isinstance(ax, dict) or set(ax) - {"parameter", "start", "stop", "count"}:
            out.append(f"sweep[{i}]: needs keys parameter, start, stop, count")
            continue
        for key in ("start", "stop"):
            if not _num(ax.get(key)):
                out.append(f"sweep[{i}].{key}: must be a finite number")
        if not (isinstance(ax.get("count"), int) and ax["count"] >= 1):
            out.append(f"sweep[{i}].count: must be an integer >= 1")
        if not isinstance(ax.get("parameter"), str):
            out.append(f"sweep[{i}].parameter: must be a dotted path")
        elif not _path_exists(data, ax["parameter"]):
            out.append(f"sweep[{i}].parameter: {ax['parameter']!r} does not exist")
        else:
            ax["start"], ax["stop"] = float(ax["start"]), float(ax["stop"])
    return out


def _check_output(data) -> list[str]:
    o = data["output"]
    out = []
    if o["format"] not in ("csv", "json"):
        out.append("output.format: must be csv or json")
    if not isinstance(o["plot"], bool):
        out.append("output.plot: must be true or false")
    return out


def _walk(data, path):
    parts = path.split(".")
    node = data
    for p in parts[:-1]:
        node = node[int(p)] if isinstance(node, list) else node[p]
    last = parts[-1]
    return node, (int(last) if isinstance(node, list) else last)


def _path_exists(data, path) -> bool:
    try:
        node, key = _walk(data, path)
        node[key]
        return True
    except (KeyError, IndexError, ValueError, TypeError):
        return False


def set_path(data: dict, path: str, value) -> dict:
    """Copy of ``data`` with the dotted ``path`` (list indices as integers) set to ``value``."""
    out = copy.deepcopy(data)
    node, key = _walk(out, path)
    node[key] = value
    return out


def _materialise_derived(cfg: RunConfig):
    from .raman_nath import assemble_spectrum

    d = cfg.data["diffraction"]
    if d["auto_order"]:
        d["max_order"] = None
        try:
            d["max_order"] = assemble_spectrum(cfg.mixture(), cfg.physical().field).max_order
        except Bec2Error as exc:
            cfg.warnings.append(f"diffraction.max_order left unresolved: {exc}")


def dump_config(cfg: RunConfig) -> str:
    """Materialised configuration as YAML; re-parses to an equal RunConfig."""
    return yaml.safe_dump(cfg.data, sort_keys=True)


def sweep_points(cfg: RunConfig) -> list[tuple[dict, RunConfig]]:
    """Cartesian product of the sweep axes; one RunConfig per point."""
    import itertools

    import numpy as np

    axes = cfg.data["sweep"]
    if not axes:
        return [({}, cfg)]
    grids = [[(ax["parameter"], float(v)) for v in np.linspace(ax["start"], ax["stop"], ax["count"])] for ax in axes]
    out = []
    for combo in itertools.product(*grids):
        data = copy.deepcopy(cfg.data)
        data["sweep"] = []
        for path, value in combo:
            data = set_path(data, path, value)
        out.append((dict(combo), parse_config(data)))
    return out
