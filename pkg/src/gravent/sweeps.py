"""Parameter sweeps, optimal/minimal trap frequency, numeric threshold temperature
and the power-law fit of the optimal frequency against temperature."""

from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, replace
from typing import Any, List, Optional, Sequence, Tuple

import numpy as np
from scipy import optimize

from .analytics import nu_squeezed_first_order
from .dynamics import evolve_phase
from .errors import DomainError, NoInteriorMaximum, NoSignChange
from .gaussian import EntanglementResult, symplectic_eigenvalue
from .params import CODATA, PhysicalConstants, SystemParams, derive_params
from .precision import STANDARD, Precision, as_precision
from .states import thermal_squeezed_state

VARIABLES = ("omega", "T", "m", "d", "r")
ENGINES = ("first_order", "exact")
DETECTION_THRESHOLD = 0.95


@dataclass(frozen=True)
class SweepSpec:
    """One-dimensional sweep of ``variable`` over [lo, hi].

    ``phase=None`` maximises entanglement over one period of omega' t; a float
    fixes omega' t. ``digits=None`` runs in binary64.
    """

    variable: str
    lo: float
    hi: float
    points: int
    fixed: SystemParams
    spacing: str = "log"
    phase: Optional[float] = None
    engine: str = "first_order"
    digits: Optional[int] = None
    constants: PhysicalConstants = CODATA
    phase_grid: int = 64

    def __post_init__(self):
        if self.variable not in VARIABLES:
            raise DomainError(f"unknown sweep variable {self.variable!r}")
        if self.engine not in ENGINES:
            raise DomainError(f"unknown engine {self.engine!r}")
        if self.spacing not in ("log", "linear"):
            raise DomainError(f"unknown spacing {self.spacing!r}")
        if not self.lo < self.hi:
            raise DomainError("sweep range needs lo < hi")
        if self.points < 2:
            raise DomainError("sweep needs at least 2 points")
        if self.phase_grid < 64:
            raise DomainError("time maximisation needs at least 64 phase samples")

    @property
    def precision(self) -> Precision:
        return as_precision(self.digits)

    def grid(self) -> np.ndarray:
        if self.spacing == "log":
            return np.logspace(math.log10(self.lo), math.log10(self.hi), self.points)
        return np.linspace(self.lo, self.hi, self.points)


@dataclass(frozen=True)
class CurvePoint:
    x: Any
    nu: Any
    one_minus_nu: Any
    log_negativity: Any

    @property
    def detectable(self) -> bool:
        """nu below the ~0.05 experimental resolution around 1."""
        return self.nu < DETECTION_THRESHOLD


@dataclass(frozen=True)
class FitResult:
    """omega_opt ~ prefactor * T**exponent; residual is the rms of log10 residuals."""

    prefactor: float
    exponent: float
    residual: float
    temperatures: Tuple[float, ...] = field(default=(), compare=False)
    omega_opt: Tuple[float, ...] = field(default=(), compare=False)


@dataclass(frozen=True)
class OmegaOptimum:
    omega_opt: float
    en_max: float
    one_minus_nu: float


def _with(params: SystemParams, variable: str, value) -> SystemParams:
    return replace(params, **{variable: value})


def evaluate_point(
    params: SystemParams,
    constants: PhysicalConstants = CODATA,
    phase: Optional[float] = None,
    engine: str = "first_order",
    precision=STANDARD,
    phase_grid: int = 64,
) -> EntanglementResult:
    """Entanglement after evolving the thermal (optionally squeezed) initial state.

    With ``phase=None`` the result is the most entangled point in time: for the
    first-order engine the better of |sin| = 1 and sin = 0, for the exact engine
    a dense phase grid over one period refined by a bounded scalar search.
    """
    prec = as_precision(precision)
    dp = derive_params(params, constants, prec)
    r = params.r or 0.0
    with prec.workspace():
        theta = dp.theta if dp.theta is not None else prec.scalar(1)
        tm1 = dp.theta_minus_one if dp.theta_minus_one is not None else prec.scalar(0)
        if engine == "first_order":
            phases = [prec.lib.pi / 2, prec.scalar(0)] if phase is None else [phase]
            results = [nu_squeezed_first_order(r, dp.eps_hat, ph, theta, tm1, prec) for ph in phases]
            return max(results, key=lambda res: res.one_minus_nu)

        sigma0 = thermal_squeezed_state(theta, r, prec)

        def at(ph):
            return symplectic_eigenvalue(evolve_phase(sigma0, dp.epsilon, ph))

        if phase is not None:
            return at(phase)
        two_pi = 2 * math.pi
        grid = [two_pi * i / phase_grid for i in range(phase_grid)]
        values = [at(ph) for ph in grid]
        best = max(range(phase_grid), key=lambda i: values[i].one_minus_nu)
        lo, hi = grid[best] - two_pi / phase_grid, grid[best] + two_pi / phase_grid
        refined = optimize.minimize_scalar(
            lambda ph: -float(at(ph).one_minus_nu),
            bounds=(lo, hi),
            method="bounded",
            options={"xatol": 1e-10},
        )
        candidate = at(refined.x)
        return candidate if candidate.one_minus_nu >= values[best].one_minus_nu else values[best]


def _point_task(args) -> CurvePoint:
    spec, x = args
    params = _with(spec.fixed, spec.variable, float(x))
    res = evaluate_point(params, spec.constants, spec.phase, spec.engine, spec.precision, spec.phase_grid)
    with spec.precision.workspace():
        x = spec.precision.scalar(x)
    return CurvePoint(x, res.nu, res.one_minus_nu, res.log_negativity)


def run_sweep(spec: SweepSpec, workers: int = 1) -> List[CurvePoint]:
    """Evaluate every grid point; output order follows the grid regardless of ``workers``."""
    tasks = [(spec, x) for x in spec.grid()]
    if workers <= 1:
        return [_point_task(t) for t in tasks]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(_point_task, tasks, chunksize=max(1, len(tasks) // (4 * workers))))


def en_vs_omega_curve(spec: SweepSpec, workers: int = 1) -> List[CurvePoint]:
    if spec.variable != "omega":
        raise DomainError("en_vs_omega_curve sweeps omega")
    return run_sweep(spec, workers)


def detectable_points(curve: Sequence[CurvePoint]) -> List[CurvePoint]:
    return [pt for pt in curve if pt.detectable]


def entanglement_gap(omega: float, fixed: SystemParams, constants: PhysicalConstants = CODATA) -> float:
    """Signed 1 - nu at the time of maximal entanglement (first order, binary64).

    Positive means entangled. For a thermal state this is theta*eps_hat - (theta - 1).
    """
    res = evaluate_point(_with(fixed, "omega", omega), constants)
    return float(res.one_minus_nu)


def find_omega_opt(
    fixed: SystemParams,
    bracket: Tuple[float, float],
    constants: PhysicalConstants = CODATA,
    grid_points: int = 64,
    rtol: float = 1e-4,
) -> OmegaOptimum:
    """Trap frequency maximising the logarithmic negativity.

    A log-spaced coarse grid locates the maximum of 1 - nu, then golden-section
    search refines it to relative width ``rtol``.

    Raises:
        NoInteriorMaximum: the coarse grid is maximal at an endpoint.
    """
    lo, hi = bracket
    grid = np.logspace(math.log10(lo), math.log10(hi), grid_points)
    gaps = np.array([entanglement_gap(w, fixed, constants) for w in grid])
    i = int(np.argmax(gaps))
    if i == 0 or i == grid_points - 1:
        raise NoInteriorMaximum(f"1 - nu is maximal at the bracket edge omega = {grid[i]:.6g}")
    omega_opt = optimize.golden(
        lambda w: -entanglement_gap(w, fixed, constants),
        brack=(grid[i - 1], grid[i], grid[i + 1]),
        tol=rtol / 2,
    )
    res = evaluate_point(_with(fixed, "omega", float(omega_opt)), constants)
    return OmegaOptimum(float(omega_opt), float(res.log_negativity), float(res.one_minus_nu))


def _bisect_log(f, lo: float, hi: float, rtol: float) -> float:
    flo, fhi = f(lo), f(hi)
    if flo == 0:
        return lo
    if fhi == 0:
        return hi
    if (flo > 0) == (fhi > 0):
        raise NoSignChange(f"no sign change on [{lo:.6g}, {hi:.6g}]")
    u = optimize.bisect(lambda v: f(math.exp(v)), math.log(lo), math.log(hi), xtol=rtol, rtol=4 * np.finfo(float).eps)
    return math.exp(u)


def find_omega_min(
    fixed: SystemParams,
    bracket: Tuple[float, float],
    constants: PhysicalConstants = CODATA,
    rtol: float = 1e-6,
) -> float:
    """Onset frequency of entanglement: root of 1 - nu(omega) by bisection.

    Raises:
        NoSignChange: 1 - nu has the same sign at both ends of the bracket.
    """
    return _bisect_log(lambda w: entanglement_gap(w, fixed, constants), *bracket, rtol)


def t_max_numeric(
    fixed: SystemParams,
    bracket: Tuple[float, float],
    constants: PhysicalConstants = CODATA,
    engine: str = "first_order",
    precision=STANDARD,
    rtol: float = 1e-6,
) -> float:
    """Temperature at which nu at omega' t = pi/2 crosses 1, by bisection in log T."""
    prec = as_precision(precision)

    def gap(T):
        res = evaluate_point(_with(fixed, "T", T), constants, phase=math.pi / 2, engine=engine, precision=prec)
        return float(res.one_minus_nu)

    return _bisect_log(gap, *bracket, rtol)


def power_law_fit(x: Sequence[float], y: Sequence[float]) -> FitResult:
    """Least squares line through (log10 x, log10 y)."""
    lx, ly = np.log10(np.asarray(x, float)), np.log10(np.asarray(y, float))
    slope, intercept = np.polyfit(lx, ly, 1)
    resid = ly - (slope * lx + intercept)
    return FitResult(
        float(10**intercept),
        float(slope),
        float(np.sqrt(np.mean(resid**2))),
        tuple(float(v) for v in x),
        tuple(float(v) for v in y),
    )


def default_omega_bracket(T: float, constants: PhysicalConstants = CODATA) -> Tuple[float, float]:
    """Bracket spanning hbar omega / kB T from 1 to 500, which contains the optimum."""
    scale = constants.kB * T / constants.hbar
    return scale, 500 * scale


def _opt_task(args) -> float:
    T, fixed, constants = args
    params = replace(fixed, T=T)
    lo, hi = default_omega_bracket(T, constants)
    rate = 2 * constants.G * fixed.m / fixed.d**3
    lo = max(lo, 2 * math.sqrt(rate))
    return find_omega_opt(params, (lo, hi), constants).omega_opt


def fit_omega_opt_powerlaw(
    T_grid: Sequence[float],
    fixed: SystemParams,
    constants: PhysicalConstants = CODATA,
    workers: int = 1,
) -> FitResult:
    """Fit omega_opt(T) = prefactor * T**exponent on a log-log scale."""
    T_grid = [float(T) for T in T_grid]
    if len(T_grid) < 8:
        raise DomainError("power-law fit needs at least 8 temperatures")
    tasks = [(T, fixed, constants) for T in T_grid]
    if workers <= 1:
        omegas = [_opt_task(t) for t in tasks]
    else:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            omegas = list(pool.map(_opt_task, tasks))
    return power_law_fit(T_grid, omegas)
