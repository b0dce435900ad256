"""Acceptance checks with measured values.

Each check returns a :class:`CheckResult`; :func:`run_checks` runs them all.
Sampling uses an unscrambled Halton sequence, so no random generator (and no
seed) is involved anywhere.
"""

from __future__ import annotations

import math
import time
from dataclasses import asdict, dataclass, field
from typing import Callable

import numpy as np
from scipy.stats import qmc

from . import bessel as _bessel
from .field import FieldConfig, helmholtz_residual, standing_wave_amplitude
from .medium import (
    EIGHT_PI_3,
    MediumSample,
    index_squared,
    local_detuning,
    nonlinear_potential,
    refractive_index,
    susceptibility,
)
from .params import FOUR_PI_3, Mixture, Species
from .propagator import EvolveConfig, crossing_config, evolve, order_weights
from .raman_nath import assemble_spectrum, coupling_strength, diffraction_angle, tau
from .state import Grid, gaussian_state, uniform_state

BesselOrders = Callable[[float, int], tuple]


@dataclass
class CheckResult:
    id: int
    name: str
    passed: bool
    measured: dict
    threshold: str
    seconds: float = 0.0

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        vals = ", ".join(f"{k}={_fmt(v)}" for k, v in self.measured.items())
        return f"[{status}] {self.id:2d} {self.name}: {vals} (require {self.threshold})"


def _fmt(v):
    if isinstance(v, float):
        return f"{v:.4g}"
    if isinstance(v, (list, tuple)):
        return "[" + ", ".join(_fmt(x) for x in v) + "]"
    return str(v)


def _halton(n, d):
    return qmc.Halton(d, scramble=False).random(n + 1)[1:]


# reference two-species setup shared by several checks
REF_SPECIES = (Species(1.0, 50.0, 0.3, 2.0), Species(1.7, -80.0, 0.25, 1.5))
REF_DENSITIES = (0.2, 0.3)


def check_vacuum_limits() -> CheckResult:
    vac = MediumSample(0.0, 0.0, -0.3, 0.7)
    mix = Mixture(REF_SPECIES, (0.0, 0.0))
    f = FieldConfig(1.0, 7.0, (3.0, 4.0))
    gs = [coupling_strength(s, f, j) for j, s in enumerate(REF_SPECIES, start=1)]
    ok = {
        "chi_zero": susceptibility(vac) == 0.0,
        "n_one": refractive_index(vac) == 1.0,
        "dloc_equal": local_detuning(vac, 13.5) == 13.5,
        "tau_2g": all(tau(g, mix) == 2.0 * g for g in gs),
    }
    return CheckResult(1, "vacuum limits", all(ok.values()), ok, "exact equality")


def _valid_samples(n=1000):
    # densities in [0, 10], alphas in [-0.005, 0.005]: |(4pi/3) S| <= 0.42
    u = _halton(n, 4)
    return MediumSample(10 * u[:, 0], 10 * u[:, 1], 0.01 * u[:, 2] - 0.005, 0.01 * u[:, 3] - 0.005)


def check_maxwell_garnett() -> CheckResult:
    s = _valid_samples()
    n2 = index_squared(s)
    err = float(np.max(np.abs(n2 - (1 + 4 * math.pi * susceptibility(s))) / np.abs(n2)))
    return CheckResult(2, "Maxwell-Garnett identity", err <= 1e-14, {"max_rel_err": err, "samples": 1000}, "<= 1e-14")


def check_clausius_mossotti() -> CheckResult:
    s = _valid_samples()
    two = refractive_index(MediumSample(s.density_1, 0.0 * s.density_1, s.alpha_1, s.alpha_2))
    x = s.alpha_1 * s.density_1
    cm = np.sqrt((1 + EIGHT_PI_3 * x) / (1 - FOUR_PI_3 * x))
    err = float(np.max(np.abs(two - cm) / cm))
    return CheckResult(3, "Clausius-Mossotti reduction", err <= 1e-14, {"max_rel_err": err, "samples": 1000}, "<= 1e-14")


def check_bessel(bessel_orders: BesselOrders = _bessel.bessel_j_orders) -> CheckResult:
    worst_sum = 1.0
    for x in (0.1, 1.0, 5.0, 10.0, 50.0):
        _, j = bessel_orders(x, math.ceil(x) + 20)
        worst_sum = min(worst_sum, float(np.sum(j * j)))
    worst_series = 0.0
    for x in (0.1, 0.5, 1.0, 2.0, 5.0, 7.5, 10.0):
        orders, j = bessel_orders(x, 15)
        ref = np.array([_bessel.bessel_j_series(int(q), x) for q in orders])
        worst_series = max(worst_series, float(np.max(np.abs(j - ref))))
    ok = worst_sum >= 1 - 1e-10 and worst_series <= 1e-12
    return CheckResult(
        4,
        "Bessel completeness and series agreement",
        ok,
        {"min_completeness": worst_sum, "max_series_err": worst_series},
        "sum >= 1-1e-10, series err <= 1e-12",
    )


def _tuned_field(mixture, target, width=10.0):
    probe = assemble_spectrum(mixture, FieldConfig(1.0, width, (1.0, 1.0)))
    return FieldConfig(1.0, width, tuple(math.sqrt(abs(target / t)) for t in probe.tau))


def check_raman_nath_oracle(steps: int = 2000, n_points: int = 1024) -> CheckResult:
    mix = Mixture(REF_SPECIES, REF_DENSITIES)
    worst = 0.0
    taus = []
    for target in (0.5, 1.0, 2.0, 5.0):
        spec = assemble_spectrum(mix, _tuned_field(mix, target))
        f = _tuned_field(mix, target).with_index(spec.refractive_index)
        grid = Grid.commensurate(n_points, f.intensity_period, 16)
        cfg, z0 = crossing_config(mix.species, f, steps, kinetic=False)
        out = evolve(uniform_state(grid, mix.densities, z0), cfg).state
        _, w = order_weights(out, f.refractive_index, f.vacuum_wavenumber, 10)
        q0 = spec.max_order
        worst = max(worst, float(np.max(np.abs(w - spec.probabilities[:, q0 - 10 : q0 + 11]))))
        taus.append([round(t, 12) for t in spec.tau])
    return CheckResult(
        5,
        "Raman-Nath numeric vs analytic",
        worst <= 1e-6,
        {"max_abs_err": worst, "taus": taus, "N": n_points, "steps": steps},
        "<= 1e-6 for |q| <= 10",
    )


STRANG_SPECIES = (Species(1.0, 20.0, 1.0, 1.0), Species(2.0, -30.0, 1.2, 0.8))
STRANG_FIELD = FieldConfig(1.0, 2.0, (6.0, 7.0), refractive_index=1.0)


def _smooth_state(n=256):
    grid = Grid.commensurate(n, math.pi, 16)
    return gaussian_state(grid, (0.8, 0.6), width=grid.length / 12, z=-3.0)


def check_norm_conservation(steps: int = 10_000) -> CheckResult:
    st = _smooth_state()
    cfg = EvolveConfig(STRANG_SPECIES, STRANG_FIELD, dz=0.005, steps=steps, mode="full", kinetic=True, envelope=False)
    out = evolve(st, cfg).state
    drift = (np.abs(out.norms - st.norms) / st.norms).tolist()
    return CheckResult(6, "norm conservation", max(drift) <= 1e-10, {"rel_drift": drift, "steps": steps}, "<= 1e-10")


def strang_errors(base: int = 100, span: float = 6.0):
    st = _smooth_state()

    def run(steps):
        cfg = EvolveConfig(STRANG_SPECIES, STRANG_FIELD, dz=span / steps, steps=steps, kinetic=True, envelope=True)
        return evolve(st, cfg).state.psi

    ref = run(16 * base)
    e1 = float(np.linalg.norm(run(base) - ref))
    e2 = float(np.linalg.norm(run(2 * base) - ref))
    return e1, e2


def check_strang_order() -> CheckResult:
    e1, e2 = strang_errors()
    ratio = e1 / e2
    return CheckResult(
        7, "Strang convergence", 3.5 <= ratio <= 4.5, {"err_dt": e1, "err_dt/2": e2, "ratio": ratio}, "ratio in [3.5, 4.5]"
    )


def check_full_vs_expanded() -> CheckResult:
    # pointwise: sweep (4pi/3) S over [-0.05, 0.05]
    x = np.linspace(-0.05, 0.05, 401)
    x = x[x != 0]
    s_sum = x / FOUR_PI_3
    sample = MediumSample(np.abs(s_sum), 0 * x, np.sign(s_sum), 0.0)
    delta, rabi_sq = 3.0, 2.0
    scale = rabi_sq / (4 * abs(delta))
    diff = np.abs(nonlinear_potential(sample, rabi_sq, delta, "full") - nonlinear_potential(sample, rabi_sq, delta, "expanded"))
    c_point = float(np.max(diff / scale / s_sum**2))
    c_point_x = float(np.max(diff / scale / x**2))

    # evolved: Gaussian packets crossing the beam with kinetic energy on
    sp = (Species(1.0, 40.0, 1.0, 1.0), Species(1.5, -60.0, 1.0, 1.0))
    mix = Mixture.from_epsilon(sp, (-0.0119, 0.0))  # (4pi/3)|S| = 0.0498 at the peak
    s_peak = abs(sum(mix.epsilons))
    f = FieldConfig(1.0, 3.0, (8.0, 8.0), refractive_index=1.0)
    grid = Grid.commensurate(256, math.pi, 16)
    st = gaussian_state(grid, mix.densities, width=grid.length / 10)
    finals = []
    for mode in ("full", "expanded"):
        cfg, z0 = crossing_config(sp, f, 2000, mode=mode)
        finals.append(evolve(st.replace(z=z0), cfg).state)
    j = 0  # component 2 is empty
    l2 = float(np.sqrt(np.sum(np.abs(finals[0].psi[j] - finals[1].psi[j]) ** 2) / np.sum(np.abs(st.psi[j]) ** 2)))
    s0 = sp[j]
    phase = f.peak_rabi[j] ** 2 / (4 * abs(s0.detuning)) * math.sqrt(math.pi) * f.envelope_width / s0.group_velocity
    c_evolved = l2 / (phase * s_peak**2)
    ok = c_point <= 10 and c_evolved <= 10
    return CheckResult(
        8,
        "full vs expanded potential",
        ok,
        {
            "C_pointwise": c_point,
            "C_evolved": c_evolved,
            "C_pointwise_in_(4pi/3)S": c_point_x,
        },
        "|full-expanded| <= 10 S^2 (S = alpha_1 rho_1 + alpha_2 rho_2)",
    )


def check_separation() -> CheckResult:
    q = np.arange(-25, 26)
    a = Species(1.0, 10.0, 0.2, 2.0)
    equal = Species(2.0, -20.0, 0.2, 1.0)
    mismatch = Species(2.0, -20.0, 0.2, 1.01)
    n, k = 1.03, 1.0
    same = np.array_equal(diffraction_angle(q, a, n, k), diffraction_angle(q, equal, n, k))
    nz = q != 0
    differ = bool(np.all(diffraction_angle(q[nz], a, n, k) != diffraction_angle(q[nz], mismatch, n, k)))
    f = FieldConfig(1.0, 5.0, (2.0, 2.0))
    s_eq = assemble_spectrum(Mixture((a, equal), (0.1, 0.1)), f)
    s_mm = assemble_spectrum(Mixture((a, mismatch), (0.1, 0.1)), f)
    ok = same and differ and s_eq.angles_coincide and not s_eq.separated and s_mm.separated
    return CheckResult(
        9,
        "component separation predicate",
        ok,
        {"equal_momenta_coincide": bool(same), "mismatch_all_differ": differ, "predicate_ok": s_mm.separated and not s_eq.separated},
        "coincide iff m1 v1 = m2 v2",
    )


def check_constant_detuning_ray() -> CheckResult:
    sp = (Species(1.0, 25.0, 1.0), Species(1.0, -40.0, 1.1))
    a1, a2 = Mixture(sp, (0.0, 0.0)).alphas
    r0 = np.array([0.5, 0.8])
    t = np.linspace(0.0, 3.0 * r0[0] * a1, 64)  # rho_1 grows by a factor of 4
    rho1, rho2 = r0[0] + t / a1, r0[1] - t / a2
    worst = 0.0
    for s in sp:
        d = local_detuning(MediumSample(rho1, rho2, a1, a2), s.detuning)
        worst = max(worst, float(np.max(np.abs(d - d[0]) / abs(d[0]))))
    growth = float(rho1[-1] / rho1[0])
    return CheckResult(
        10,
        "constant local detuning ray",
        worst <= 1e-12 and growth >= 4 - 1e-12 and bool(np.all(rho2 >= 0)),
        {"max_rel_variation": worst, "density_growth": growth},
        "<= 1e-12 over a 4x density change",
    )


def check_helmholtz() -> CheckResult:
    f = FieldConfig(1.0, 3.0, (1.0, 1.0), refractive_index=1.07)
    period = 2 * math.pi / f.medium_wavenumber
    res = []
    for pts in (64, 128):
        y = np.arange(4 * pts) * period / pts
        res.append(helmholtz_residual(f, y, standing_wave_amplitude(f, y)))
    ratio = res[0] / res[1]
    return CheckResult(
        11,
        "Helmholtz residual",
        res[0] <= 1e-3 and 3.5 <= ratio <= 4.5,
        {"residual_64": res[0], "residual_128": res[1], "ratio": ratio},
        "<= 1e-3 at 64 pts/period, ratio in [3.5, 4.5]",
    )


CHECKS = [
    check_vacuum_limits,
    check_maxwell_garnett,
    check_clausius_mossotti,
    check_bessel,
    check_raman_nath_oracle,
    check_norm_conservation,
    check_strang_order,
    check_full_vs_expanded,
    check_separation,
    check_constant_detuning_ray,
    check_helmholtz,
]


def perturbed_bessel(rel: float = 1e-6) -> BesselOrders:
    """Fault-injection hook: Bessel table scaled by ``1 - rel``."""

    def orders(x, q):
        o, j = _bessel.bessel_j_orders(x, q)
        return o, j * (1.0 - rel)

    return orders


def run_checks(faults=(), only=None) -> list[CheckResult]:
    out = []
    for i, check in enumerate(CHECKS, start=1):
        if only is not None and i not in only:
            continue
        t0 = time.perf_counter()
        if check is check_bessel and "bessel" in faults:
            r = check(perturbed_bessel())
        else:
            r = check()
        r.seconds = time.perf_counter() - t0
        out.append(r)
    return out


def report(results) -> dict:
    return {
        "passed": all(r.passed for r in results),
        "criteria": [asdict(r) for r in results],
    }
