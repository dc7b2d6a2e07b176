"""Acceptance suite: one test group per criterion, at the stated tolerances and time limits.

A PASS/FAIL line per criterion is printed in the terminal summary.
"""

import math
import time
from dataclasses import replace

import mpmath
import numpy as np
import pytest

from conftest import random_local_symplectic
from gravent.analytics import (
    casimir_crossover_distance,
    nu_squeezed_first_order,
    nu_thermal_first_order,
    t_max_squeezed,
    t_max_thermal,
)
from gravent.boundcheck import sample_standard_form_array, search_sqrt_epsilon_states, verify_bound
from gravent.dynamics import evolve_phase, propagator_from_phase, series_from_phase
from gravent.gaussian import CovarianceMatrix, StandardFormParams, standard_form_invariants, symplectic_eigenvalue
from gravent.params import SystemParams, derive_params
from gravent.precision import Precision, det4
from gravent.states import standard_form_state, thermal_state, two_mode_squeezed_state
from gravent.sweeps import (
    SweepSpec,
    detectable_points,
    evaluate_point,
    find_omega_min,
    find_omega_opt,
    fit_omega_opt_powerlaw,
    run_sweep,
    t_max_numeric,
)

REFERENCE = SystemParams(m=1e-15, omega=1e3, d=1e-4)
FIG_FIXED = SystemParams(m=1e-15, omega=1e3, d=1e-4, T=1e-10)


class Timer:
    def __enter__(self):
        self.start = time.perf_counter()
        return self

    def __exit__(self, *exc):
        self.elapsed = time.perf_counter() - self.start


# 1. Threshold temperature


@pytest.mark.criterion(1, "thermal threshold temperature")
def test_threshold_temperature():
    with Timer() as timer:
        closed = t_max_thermal(REFERENCE)
        numeric = t_max_numeric(REFERENCE, (closed / 10, closed * 10))
    print(f"T_max closed form {closed:.5e} K, numeric root {numeric:.5e} K, {timer.elapsed:.3f} s")
    assert closed == pytest.approx(1.7e-10, rel=0.02)
    assert 1e-10 <= closed < 1e-9
    assert numeric == pytest.approx(closed, rel=0.05)
    assert timer.elapsed < 1.0


# 2. Entanglement against trap frequency


@pytest.fixture(scope="module")
def omega_curve():
    spec = SweepSpec("omega", 5e2, 3e3, 200, FIG_FIXED, digits=50)
    with Timer() as timer:
        curve = run_sweep(spec)
        omega_min = find_omega_min(FIG_FIXED, (5e2, 6.5e2))
        spot = [
            evaluate_point(replace(FIG_FIXED, omega=float(curve[i].x)), engine="exact", precision=50)
            for i in (40, 120, 199)
        ]
    return curve, omega_min, spot, timer.elapsed


@pytest.mark.criterion(2, "E_N against omega at T = 1e-10 K")
def test_curve_onset_and_peak(omega_curve):
    curve, omega_min, _, elapsed = omega_curve
    x = np.array([float(pt.x) for pt in curve])
    en = np.array([float(pt.log_negativity) for pt in curve])
    peak = int(np.argmax(en))
    first_positive = int(np.argmax(en > 0))
    print(
        f"omega_min {omega_min:.2f} rad/s, first entangled grid point {x[first_positive]:.2f}, "
        f"peak E_N {en[peak]:.4e} at {x[peak]:.2f} rad/s, {elapsed:.2f} s"
    )
    assert omega_min == pytest.approx(5.6e2, rel=0.1)
    assert np.all(en[x < omega_min] == 0)
    assert x[first_positive - 1] < omega_min <= x[first_positive]
    assert 0 < peak < len(curve) - 1
    assert 5.5e2 <= x[peak] <= 7e2
    assert en[peak] == pytest.approx(5e-19, rel=0.3)


@pytest.mark.criterion(2, "E_N against omega at T = 1e-10 K")
def test_curve_single_maximum_and_decay(omega_curve):
    curve, _, _, elapsed = omega_curve
    en = np.array([float(pt.log_negativity) for pt in curve])
    peak = int(np.argmax(en))
    assert np.all(np.diff(en[: peak + 1]) >= 0)
    assert np.all(np.diff(en[peak:]) < 0)
    assert detectable_points(curve) == []
    assert elapsed < 30


@pytest.mark.criterion(2, "E_N against omega at T = 1e-10 K")
def test_curve_uses_extended_precision_and_matches_exact_engine(omega_curve):
    curve, _, spot, _ = omega_curve
    # nu itself resolves its ~1e-20 distance from 1, which binary64 cannot
    with mpmath.workdps(50):
        gap = 1 - curve[120].nu
        assert gap != 0
        assert abs(gap / curve[120].one_minus_nu - 1) < mpmath.mpf(10) ** -25
    for i, exact in zip((40, 120, 199), spot):
        assert float(exact.one_minus_nu) == pytest.approx(float(curve[i].one_minus_nu), rel=1e-6, abs=1e-30)
    opt = find_omega_opt(FIG_FIXED, (5e2, 3e3))
    assert 5.5e2 <= opt.omega_opt <= 7e2


# 3. Power-law fit of the optimal frequency


@pytest.mark.criterion(3, "power-law fit of omega_opt(T)")
def test_power_law_fit():
    temps = np.logspace(-15, 0, 16)
    with Timer() as timer:
        fit = fit_omega_opt_powerlaw(temps, SystemParams(m=1e-15, omega=1.0, d=1e-4, T=1.0))
    print(f"omega_opt = {fit.prefactor:.4e} T^{fit.exponent:.4f}, rms log10 residual {fit.residual:.3f}, {timer.elapsed:.2f} s")
    assert 0.99 <= fit.exponent <= 1.09
    assert 1.4e13 / 2 <= fit.prefactor <= 1.4e13 * 2
    assert timer.elapsed < 300


# 4. Bound on entanglement enhancement


@pytest.mark.criterion(4, "universal bound on relative change of nu")
def test_bound_at_desk_scale_coupling():
    eps = 1e-3
    with Timer() as timer:
        report = verify_bound(42, 10_000, eps, phases=(math.pi / 4, math.pi / 2, 1.0), tol_factor=10)
    print(
        f"n={report.n_samples} eps={eps}: min relative change {report.min_relative_change:.6e}, "
        f"violations {report.violations}, acceptance {report.acceptance_rate:.3f}, {timer.elapsed:.2f} s"
    )
    assert report.violations == 0
    assert report.min_relative_change >= -eps * (1 + 10 * eps)
    saturating = [r for r in report.saturating_families_checked if r.phase == math.pi / 2]
    assert {r.family for r in saturating} >= {"thermal_theta_1", "tms_r_1"}
    for record in saturating:
        assert abs(record.relative_change + eps) <= 10 * eps**2, record
    assert timer.elapsed < 300


@pytest.mark.criterion(4, "universal bound on relative change of nu")
def test_bound_at_tiny_coupling_in_extended_precision():
    eps = 1e-10
    with Timer() as timer:
        report = verify_bound(7, 100, eps, precision=Precision.extended(50))
    print(f"n=100 eps=1e-10 at 50 digits: min relative change {report.min_relative_change:.6e}, {timer.elapsed:.2f} s")
    assert report.violations == 0
    assert report.min_relative_change >= -eps * (1 + 10 * eps)
    for record in report.saturating_families_checked:
        if record.phase == math.pi / 2:
            assert abs(record.relative_change + eps) <= 10 * eps**2
    assert timer.elapsed < 300


# 5. Convergence order of the first-order formulas

EPS_LADDER = (1e-2, 5e-3, 2.5e-3, 1.25e-3)
PHASES = np.linspace(0, 2 * math.pi, 97)


def _max_error(state, first_order, eps):
    return max(abs(symplectic_eigenvalue(evolve_phase(state, eps, ph)).nu - first_order(eps, ph)) for ph in PHASES)


CASES = {
    "thermal theta=1": (thermal_state(1.0), lambda e, ph: nu_thermal_first_order(1.0, e, ph).nu),
    "thermal theta=1.5": (thermal_state(1.5), lambda e, ph: nu_thermal_first_order(1.5, e, ph).nu),
    "squeezed r=1": (two_mode_squeezed_state(1.0), lambda e, ph: nu_squeezed_first_order(1.0, e, ph).nu),
    "squeezed r=-1": (two_mode_squeezed_state(-1.0), lambda e, ph: nu_squeezed_first_order(-1.0, e, ph).nu),
}


@pytest.mark.criterion(5, "second-order convergence of first-order nu")
@pytest.mark.parametrize("case", list(CASES))
def test_convergence_order(case):
    state, first_order = CASES[case]
    with Timer() as timer:
        errors = [_max_error(state, first_order, eps) for eps in EPS_LADDER]
    ratios = [a / b for a, b in zip(errors, errors[1:])]
    print(f"{case}: errors {['%.3e' % e for e in errors]}, ratios {['%.3f' % r for r in ratios]}, {timer.elapsed:.2f} s")
    assert all(3.5 <= r <= 4.5 for r in ratios)
    assert timer.elapsed < 10


# 6. No state with sqrt(eps) scaling


@pytest.mark.criterion(6, "no physical state changes like sqrt(eps)")
def test_sqrt_epsilon_impossibility():
    with Timer() as timer:
        hits = search_sqrt_epsilon_states(42, 100_000)
    print(f"search over 1e5 samples: {len(hits)} hits, {timer.elapsed:.2f} s")
    assert hits == []
    assert timer.elapsed < 60


# 7. Structural invariants

N_CASES = 1000


def _canonical(p):
    """Representative with c >= |d| under local swaps and joint sign flips of (c, d)."""
    c, d = p.c, p.d
    if abs(d) > abs(c):
        c, d = d, c
    if c < 0:
        c, d = -c, -d
    return StandardFormParams(p.a, p.b, c, d)


@pytest.fixture(scope="module")
def invariant_cases():
    rng = np.random.default_rng(2024)
    samples, _ = sample_standard_form_array(99, N_CASES)
    eps = rng.uniform(0, 0.1, N_CASES)
    phases = rng.uniform(0, 100, N_CASES)
    locals_ = [random_local_symplectic(rng) for _ in range(N_CASES)]
    return samples, eps, phases, locals_


@pytest.mark.criterion(7, "structural invariants over randomized cases")
def test_propagator_invariants(invariant_cases):
    _, eps, phases, _ = invariant_cases
    with Timer() as timer:
        worst_defect = worst_gap = 0.0
        for e, ph in zip(eps, phases):
            closed = propagator_from_phase(e, ph)
            series = series_from_phase(e, ph)
            worst_defect = max(worst_defect, closed.symplectic_defect)
            worst_gap = max(worst_gap, float(np.max(np.abs((closed.entries - series.entries).astype(float)))))
    print(f"{N_CASES} propagators: symplectic defect {worst_defect:.2e}, closed vs series {worst_gap:.2e}, {timer.elapsed:.2f} s")
    assert worst_defect <= 1e-12
    assert worst_gap <= 1e-12
    assert timer.elapsed < 60


@pytest.mark.criterion(7, "structural invariants over randomized cases")
def test_covariance_invariants(invariant_cases):
    samples, eps, phases, locals_ = invariant_cases
    with Timer() as timer:
        worst_det = worst_round_trip = worst_nu = 0.0
        for row, e, ph, s in zip(samples, eps, phases, locals_):
            p = StandardFormParams(*row)
            sigma0 = standard_form_state(p)
            evolved = evolve_phase(sigma0, e, ph)
            d0 = float(det4(sigma0.entries))
            worst_det = max(worst_det, abs(float(det4(evolved.entries)) - d0) / d0)

            moved = CovarianceMatrix.symmetrized(s @ sigma0.to_float() @ s.T)
            back = standard_form_invariants(moved)
            worst_round_trip = max(
                worst_round_trip, max(abs(x - y) for x, y in zip(back.astuple(), _canonical(p).astuple()))
            )

            nu0 = symplectic_eigenvalue(sigma0).nu
            worst_nu = max(worst_nu, abs(symplectic_eigenvalue(moved).nu - nu0) / nu0)
    print(
        f"{N_CASES} states: det drift {worst_det:.2e}, standard-form round trip {worst_round_trip:.2e}, "
        f"local invariance of nu {worst_nu:.2e}, {timer.elapsed:.2f} s"
    )
    assert worst_det <= 1e-12
    assert worst_round_trip <= 1e-10
    assert worst_nu <= 1e-12
    assert timer.elapsed < 60


# 8. Casimir-Polder crossover


@pytest.mark.criterion(8, "Casimir-Polder crossover distance")
def test_casimir_crossover():
    with Timer() as timer:
        D = casimir_crossover_distance(1e-15, rho=2200.0, eps_r=math.inf, ratio=0.1)
    print(f"crossover distance {D:.4e} m")
    assert 1e-4 <= D <= 1e-3
    assert timer.elapsed < 1


# 9. Squeezed-state temperature window


@pytest.mark.criterion(9, "squeezed-state threshold temperature")
def test_squeezed_threshold():
    with Timer() as timer:
        eps_phys = derive_params(REFERENCE).eps_hat
        t_sq = t_max_squeezed(1.0, 0.0, 1e3)
        t_sq_phys = t_max_squeezed(1.0, eps_phys, 1e3)
        t_th = t_max_thermal(REFERENCE)
        ladder = [t_max_squeezed(r, eps_phys, 1e3) for r in np.linspace(0.05, 30, 200)]
    print(f"T_max squeezed(r=1) {t_sq:.4e} K, thermal {t_th:.4e} K, ratio {t_sq / t_th:.1f}")
    assert t_sq == pytest.approx(9.9e-9, rel=0.02)
    assert t_sq_phys == pytest.approx(t_sq, rel=1e-12)
    assert t_sq / t_th > 50
    assert all(b > a for a, b in zip(ladder, ladder[1:]))
    assert timer.elapsed < 1
