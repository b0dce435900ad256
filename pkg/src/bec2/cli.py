"""Command-line front end: ``bec2 {index,chi,diffract,simulate,sweep,validate}``.

Exit codes
----------
0   success
2   invalid configuration or parameters
3   singular medium or vanishing local detuning
4   numeric blow-up during evolution
5   acceptance check failure (``validate``)
130 interrupted; the partial manifest is written with ``complete: false``
"""

from __future__ import annotations

import argparse
import math
import signal
import sys
import warnings
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path

import numpy as np

from . import __version__
from .config import ConfigError, RunConfig, dump_config, parse_config, sweep_points
from .errors import (
    Bec2Error,
    DomainError,
    NumericBlowupError,
    SingularDetuningError,
    SingularMediumError,
    ValidationError,
)
from .io import Manifest, load_snapshot, save_snapshot, write_json, write_table
from .medium import is_evanescent, polarization_sum, refractive_index, susceptibility
from .propagator import EvolveConfig, evolve, order_weights
from .raman_nath import assemble_spectrum, resolve_index
from .state import Grid, gaussian_state, uniform_state

EXIT_OK = 0
EXIT_VALIDATION = 2
EXIT_SINGULAR = 3
EXIT_BLOWUP = 4
EXIT_CHECK_FAILED = 5
EXIT_INTERRUPTED = 130


def exit_code_for(exc: BaseException) -> int:
    if isinstance(exc, (SingularMediumError, SingularDetuningError)):
        return EXIT_SINGULAR
    if isinstance(exc, NumericBlowupError):
        return EXIT_BLOWUP
    if isinstance(exc, (ValidationError, DomainError)):
        return EXIT_VALIDATION
    return 1


class Run:
    """Output directory, manifest and summary of one command invocation."""

    def __init__(self, cfg: RunConfig, out: Path, command: str):
        self.cfg = cfg
        self.out = out
        self.command = command
        out.mkdir(parents=True, exist_ok=True)
        self.manifest = Manifest(out)
        self.warnings = list(cfg.warnings)
        p = out / "config_resolved.yaml"
        p.write_text(dump_config(cfg))
        self.manifest.add(p)

    def table(self, name, header, rows):
        return self.manifest.add(write_table(self.out / name, header, rows, self.cfg.data["output"]["format"]))

    def finish(self, extra=None, complete=True) -> Path:
        summary = {
            "command": self.command,
            "tool_version": __version__,
            "config_hash": self.cfg.hash(),
            "complete": complete,
            "warnings": self.warnings,
            "manifest": self.manifest.entries(),
        }
        summary.update(extra or {})
        return write_json(self.out / "summary.json", summary)


def derived_quantities(cfg: RunConfig) -> dict:
    """alpha_j, V_j, chi, n (and g_j, tau_j where defined) in internal units."""
    mix = cfg.mixture()
    out = {"densities": list(mix.densities), "alpha": list(mix.alphas), "volume": list(mix.volumes), "epsilon": list(mix.epsilons)}
    sample = mix.sample()
    out["S"] = polarization_sum(sample)
    try:
        out["chi"] = susceptibility(sample)
        n = refractive_index(sample)
        out["refractive_index"] = n
    except SingularMediumError:
        out["chi"] = out["refractive_index"] = None
    return out


# index / chi ---------------------------------------------------------------


def medium_rows(cfg: RunConfig):
    header = ["rho_1", "rho_2", "S", "chi", "n", "n_imag", "flags"]
    rows = []
    points = sweep_points(cfg)
    params = list(points[0][0])
    for values, pcfg in sorted(points, key=lambda p: tuple(p[0].values())):
        mix = pcfg.mixture()
        sample = mix.sample()
        s = polarization_sum(sample)
        try:
            chi = susceptibility(sample)
            n = refractive_index(sample)
            flag = "evanescent" if is_evanescent(n) else ""
            n_re, n_im = (n.real, n.imag) if is_evanescent(n) else (n, 0.0)
        except SingularMediumError:
            chi = n_re = n_im = math.nan
            flag = "singular"
        rows.append([*values.values(), *mix.densities, s, chi, n_re, n_im, flag])
    return params + header, rows


def cmd_medium(cfg: RunConfig, out: Path, name: str) -> int:
    run = Run(cfg, out, name)
    header, rows = medium_rows(cfg)
    run.table(name, header, rows)
    run.finish({"rows": len(rows)})
    return EXIT_OK


# diffract ------------------------------------------------------------------


def diffract(cfg: RunConfig):
    phys = cfg.physical()
    mix = cfg.mixture()
    width = phys.packet_width
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always")
        spec = assemble_spectrum(mix, phys.field, cfg.data["diffraction"]["max_order"], width)
    return spec, [str(w.message) for w in caught]


def cmd_diffract(cfg: RunConfig, out: Path, plot: bool = False) -> int:
    run = Run(cfg, out, "diffract")
    spec, notes = diffract(cfg)
    run.warnings += notes
    run.table("spectrum", ["species", "q", "probability", "angle_rad"], spec.rows())
    if plot or cfg.data["output"]["plot"]:
        run.table(
            "spectrum_plot",
            ["q", "probability_1", "probability_2"],
            zip(spec.orders.tolist(), spec.probabilities[0], spec.probabilities[1]),
        )
    summary = spec.summary()
    summary["derived"] = derived_quantities(cfg)
    run.finish({"spectrum": summary})
    return EXIT_OK


# simulate ------------------------------------------------------------------


def build_initial_state(cfg: RunConfig, field, z0: float):
    sim = cfg.data["simulation"]
    phys = cfg.physical()
    if sim["initial"] == "file":
        st = load_snapshot(sim["initial_file"])
        return st.replace(z=z0)
    grid = Grid.commensurate(sim["grid_points"], field.intensity_period, sim["periods"])
    if sim["initial"] == "gaussian":
        width = cfg.units.to_internal(sim["packet_width"], "length")
        return gaussian_state(grid, phys.densities, width, z=z0)
    return uniform_state(grid, phys.densities, z=z0)


def cmd_simulate(cfg: RunConfig, out: Path) -> int:
    run = Run(cfg, out, "simulate")
    sim = cfg.data["simulation"]
    mix = cfg.mixture()
    field = resolve_index(mix, cfg.physical().field)
    w = field.envelope_width
    z0 = -sim["window"] * w
    dz = cfg.units.to_internal(sim["dz"], "length") if sim["dz"] else 2 * sim["window"] * w / max(sim["steps"], 1)
    evo = EvolveConfig(
        mix.species, field, dz, sim["steps"], sim["mode"], sim["kinetic"], sim["envelope"], sim["observe_every"]
    )
    state = build_initial_state(cfg, field, z0)
    fmt = sim["snapshot_format"]
    run.manifest.add(save_snapshot(state, out / "snapshot_initial", fmt))
    extra = {"derived": derived_quantities(cfg), "grid": {"N": state.grid.n, "dy": state.grid.dy}, "dz": dz}
    if sim["steps"] == 0:
        run.finish(extra)
        return EXIT_OK

    records = []

    def observer(i, st):
        norms = st.norms
        records.append([i, st.z, *((st.z - z0) / s.group_velocity for s in mix.species), *norms])

    try:
        with warnings.catch_warnings(record=True) as caught:
            warnings.simplefilter("always")
            res = evolve(state, evo, observers=[observer])
        run.warnings += [str(c.message) for c in caught]
    except KeyboardInterrupt:
        _write_series(run, records, None)
        run.finish(extra, complete=False)
        return EXIT_INTERRUPTED
    final = res.state
    _write_series(run, records, res.series)
    run.manifest.add(save_snapshot(final, out / "snapshot_final", fmt))

    spec = assemble_spectrum(mix, field, cfg.data["diffraction"]["max_order"])
    cells = final.grid.length * field.refractive_index * field.vacuum_wavenumber / math.pi
    q_max = min(spec.max_order, (final.grid.n // 2 - 1) // max(int(round(cells)), 1))
    if q_max < spec.max_order:
        spec = assemble_spectrum(mix, field, q_max)
    try:
        q, weights = order_weights(final, field.refractive_index, field.vacuum_wavenumber, q_max)
        rows = [
            (j + 1, int(qq), float(weights[j, i]), float(spec.probabilities[j, i]))
            for j in range(2)
            for i, qq in enumerate(q)
        ]
        run.table("final_orders", ["species", "q", "weight", "analytic_probability"], rows)
        extra["max_order_deviation"] = float(np.max(np.abs(weights - spec.probabilities)))
    except DomainError as exc:
        run.warnings.append(f"order weights not extracted: {exc}")
    extra["spectrum"] = spec.summary()
    extra["final_norms"] = final.norms.tolist()
    run.finish(extra)
    return EXIT_OK


def _write_series(run: Run, records, series):
    header = ["step", "z", "t_1", "t_2", "norm_1", "norm_2", "adiabaticity_1", "adiabaticity_2"]
    adi = {}
    if series is not None:
        adi = dict(zip(series["step"].tolist(), zip(series["adiabaticity_1"], series["adiabaticity_2"])))
    rows = [r + list(adi.get(r[0], (math.nan, math.nan))) for r in records]
    run.table("timeseries", header, rows)


# sweep ---------------------------------------------------------------------


def _sweep_point(args):
    index, values, data, out = args
    cfg = parse_config(data)
    point_dir = Path(out) / f"point_{index:04d}"
    try:
        cmd_diffract(cfg, point_dir)
        spec, _ = diffract(cfg)
        return [*values.values(), *spec.tau, spec.refractive_index, *spec.probabilities[:, spec.max_order], spec.separated, "ok"]
    except Bec2Error as exc:
        nan = math.nan
        return [*values.values(), nan, nan, nan, nan, nan, False, type(exc).__name__]


def cmd_sweep(cfg: RunConfig, out: Path, jobs: int = 1) -> int:
    run = Run(cfg, out, "sweep")
    points = sorted(sweep_points(cfg), key=lambda p: tuple(p[0].values()))
    params = list(points[0][0])
    tasks = [(i, v, pc.data, str(out)) for i, (v, pc) in enumerate(points)]
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            rows = list(pool.map(_sweep_point, tasks))
    else:
        rows = [_sweep_point(t) for t in tasks]
    header = params + ["tau_1", "tau_2", "n", "P0_1", "P0_2", "separated", "status"]
    run.table("sweep", header, rows)
    for i in range(len(tasks)):
        run.manifest.add(out / f"point_{i:04d}" / "summary.json")
    run.finish({"points": len(rows)})
    return EXIT_OK


# validate ------------------------------------------------------------------


def cmd_validate(out: Path | None, faults=(), only=None) -> int:
    from .validate import report, run_checks

    results = run_checks(faults=faults, only=only)
    for r in results:
        print(r.line())
    rep = report(results)
    if out is not None:
        out.mkdir(parents=True, exist_ok=True)
        write_json(out / "validation.json", rep)
    return EXIT_OK if rep["passed"] else EXIT_CHECK_FAILED


# entry point ---------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", type=Path, help="YAML configuration file")
    common.add_argument("--out", type=Path, help="output directory (default: $BEC2_OUT or ./bec2_out)")
    common.add_argument("--format", choices=("csv", "json"), help="table format")
    common.add_argument("--jobs", type=int, default=1, help="parallel sweep points")
    common.add_argument("--seedless", action="store_true", default=True, help="no RNG anywhere (always on)")

    p = argparse.ArgumentParser(prog="bec2", description=__doc__.split("\n")[0])
    p.add_argument("--version", action="version", version=__version__)
    sub = p.add_subparsers(dest="command", required=True)
    sub.add_parser("index", parents=[common], help="refractive index table")
    sub.add_parser("chi", parents=[common], help="susceptibility table")
    d = sub.add_parser("diffract", parents=[common], help="analytic diffraction spectrum")
    d.add_argument("--plot", action="store_true", help="also write plot-data table")
    sub.add_parser("simulate", parents=[common], help="split-step propagation")
    sub.add_parser("sweep", parents=[common], help="diffraction over the configured sweep axes")
    v = sub.add_parser("validate", parents=[common], help="run the acceptance checks")
    v.add_argument("--only", type=int, nargs="+", help="criterion ids to run")
    v.add_argument("--inject-fault", choices=("bessel",), action="append", default=[], help="test hook")
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    if args.command == "validate":
        return cmd_validate(args.out, args.inject_fault, set(args.only) if args.only else None)
    if args.config is None:
        print("error: --config is required", file=sys.stderr)
        return EXIT_VALIDATION

    def _term(signum, frame):
        raise KeyboardInterrupt

    prev = signal.signal(signal.SIGTERM, _term)
    try:
        cfg = parse_config(args.config)
        if args.format:
            cfg.data["output"]["format"] = args.format
        out = cfg.output_dir(args.out)
        for w in cfg.warnings:
            print(f"warning: {w}", file=sys.stderr)
        if args.command in ("index", "chi"):
            return cmd_medium(cfg, out, args.command)
        if args.command == "diffract":
            return cmd_diffract(cfg, out, args.plot)
        if args.command == "simulate":
            return cmd_simulate(cfg, out)
        if args.command == "sweep":
            return cmd_sweep(cfg, out, args.jobs)
    except ConfigError as exc:
        for prob in exc.problems:
            print(f"config error: {prob}", file=sys.stderr)
        return EXIT_VALIDATION
    except Bec2Error as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return exit_code_for(exc)
    except KeyboardInterrupt:
        return EXIT_INTERRUPTED
    finally:
        signal.signal(signal.SIGTERM, prev)
    return EXIT_VALIDATION


if __name__ == "__main__":
    sys.exit(main())
