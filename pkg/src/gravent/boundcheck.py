"""Monte-Carlo and algebraic checks of the universal lower bound
(nu(t) - nu(0)) / nu(0) >= -eps over Gaussian initial states, its saturation by
thermal and two-mode squeezed states, and the absence of sqrt(eps) scaling."""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field
from typing import List, Optional, Sequence, Tuple

import numpy as np

from .dynamics import evolve_phase, propagator_batch
from .errors import AcceptanceTooLow, BoundViolation, DomainError, ImpossibilityViolated
from .gaussian import StandardFormParams, bona_fide_mask, symplectic_eigenvalue, symplectic_eigenvalue_batch
from .precision import STANDARD, as_precision
from .states import standard_form_state, thermal_standard_form, tms_standard_form

logger = logging.getLogger(__name__)

_BATCH = 4096
MIN_ACCEPTANCE = 1e-3


class StandardFormSamples(list):
    """List of :class:`StandardFormParams` that also carries the acceptance rate."""

    def __init__(self, items=(), acceptance_rate: float = float("nan"), array: Optional[np.ndarray] = None):
        super().__init__(items)
        self.acceptance_rate = acceptance_rate
        self.array = array


def sample_standard_form_array(seed: int, n: int, a_max: float = 3.0) -> Tuple[np.ndarray, float]:
    """Rejection-sample ``n`` physical (a, b, c, d) rows.

    a, b ~ U[1/2, a_max] and c, d ~ U[-sqrt(ab), sqrt(ab)]; a draw is kept when
    all four physicality inequalities hold. Draws happen in fixed-size batches,
    so the first k samples for a given seed do not depend on ``n``.

    Raises:
        AcceptanceTooLow: fewer than 1 in 1000 draws accepted.
    """
    if not a_max > 0.5:
        raise DomainError("a_max must exceed 1/2")
    if n < 1:
        raise DomainError("need at least one sample")
    rng = np.random.default_rng(seed)
    kept: List[np.ndarray] = []
    n_kept = drawn = 0
    while n_kept < n:
        a = rng.uniform(0.5, a_max, _BATCH)
        b = rng.uniform(0.5, a_max, _BATCH)
        half = np.sqrt(a * b)
        c = rng.uniform(-1.0, 1.0, _BATCH) * half
        d = rng.uniform(-1.0, 1.0, _BATCH) * half
        drawn += _BATCH
        ok = bona_fide_mask(a, b, c, d)
        kept.append(np.column_stack([a, b, c, d])[ok])
        n_kept += int(ok.sum())
        if n_kept / drawn < MIN_ACCEPTANCE:
            raise AcceptanceTooLow(f"acceptance rate {n_kept / drawn:.2e} with a_max = {a_max}")
    rate = n_kept / drawn
    return np.concatenate(kept)[:n], rate


def sample_standard_form(seed: int, n: int, a_max: float = 3.0) -> StandardFormSamples:
    arr, rate = sample_standard_form_array(seed, n, a_max)
    logger.debug("standard-form sampler: %d samples, acceptance %.3f", n, rate)
    return StandardFormSamples((StandardFormParams(*map(float, row)) for row in arr), rate, arr)


def relative_change_exact(p: StandardFormParams, eps, phase, precision=STANDARD):
    """(nu(t) - nu(0)) / nu(0) after exact evolution to omega' t = ``phase``."""
    prec = as_precision(precision)
    if not 0 < eps <= 0.1:
        raise DomainError("eps must lie in (0, 0.1]")
    sigma0 = standard_form_state(p, prec)
    nu0 = symplectic_eigenvalue(sigma0).nu
    nut = symplectic_eigenvalue(evolve_phase(sigma0, eps, phase)).nu
    with prec.workspace():
        return (nut - nu0) / nu0


def assemble_batch(params: np.ndarray) -> np.ndarray:
    a, b, c, d = np.asarray(params, float).T
    out = np.zeros((len(a), 4, 4))
    out[:, 0, 0] = out[:, 1, 1] = a
    out[:, 2, 2] = out[:, 3, 3] = b
    out[:, 0, 2] = out[:, 2, 0] = c
    out[:, 1, 3] = out[:, 3, 1] = d
    return out


def relative_change_batch(params: np.ndarray, eps: float, phases: Sequence[float]) -> np.ndarray:
    """Binary64 relative change for every (sample, phase) pair, shape (N, P)."""
    sigma0 = assemble_batch(params)
    nu0, _ = symplectic_eigenvalue_batch(sigma0)
    props = propagator_batch(eps, np.asarray(phases, float))
    out = np.empty((len(sigma0), len(props)))
    for j, s in enumerate(props):
        evolved = np.einsum("ij,njk,lk->nil", s, sigma0, s)
        evolved = (evolved + np.swapaxes(evolved, 1, 2)) / 2
        nut, _ = symplectic_eigenvalue_batch(evolved)
        out[:, j] = (nut - nu0) / nu0
    return out


@dataclass(frozen=True)
class SaturationRecord:
    family: str
    phase: float
    relative_change: float


@dataclass
class SampleReport:
    n_samples: int
    eps: float
    min_relative_change: float
    argmin_params: Optional[StandardFormParams]
    violations: int
    saturating_families_checked: List[SaturationRecord] = field(default_factory=list)
    phases: Tuple[float, ...] = ()
    phase_minima: Tuple[float, ...] = ()
    acceptance_rate: float = float("nan")
    digits: Optional[int] = None
    tol_factor: float = 10.0

    @property
    def threshold(self) -> float:
        return -self.eps * (1 + self.tol_factor * self.eps)


SATURATING_FAMILIES = (
    ("thermal_theta_1", lambda prec: thermal_standard_form(1, prec)),
    ("thermal_theta_2", lambda prec: thermal_standard_form(2, prec)),
    ("tms_r_1", lambda prec: tms_standard_form(1, prec)),
)


def verify_bound(
    seed: int,
    n: int,
    eps: float,
    phases: Sequence[float] = (math.pi / 4, math.pi / 2, 1.0),
    precision=STANDARD,
    a_max: float = 3.0,
    tol_factor: float = 10.0,
    strict: bool = True,
) -> SampleReport:
    """Check (nu(t) - nu(0)) / nu(0) >= -eps (1 + tol_factor * eps) over random states.

    Binary64 runs are vectorised; extended-precision runs evaluate each sample
    individually. The saturating thermal and squeezed families are evaluated at
    every phase and recorded.

    Raises:
        BoundViolation: with ``strict``, on the first (lowest index) violation.
    """
    prec = as_precision(precision)
    if not 0 < eps <= 1e-2:
        raise DomainError("bound verification expects 0 < eps <= 1e-2")
    phases = tuple(float(ph) for ph in phases)
    samples, rate = sample_standard_form_array(seed, n, a_max)
    threshold = -eps * (1 + tol_factor * eps)

    if prec.is_extended:
        rel = np.array(
            [[float(relative_change_exact(StandardFormParams(*row), eps, ph, prec)) for ph in phases] for row in samples]
        )
    else:
        rel = relative_change_batch(samples, eps, phases)
    if np.isnan(rel).any():
        raise DomainError("unphysical evolved covariance encountered during bound check")

    per_sample = rel.min(axis=1)
    idx = int(np.argmin(per_sample))  # first occurrence on ties
    bad = np.flatnonzero(per_sample < threshold)
    if strict and len(bad):
        i = int(bad[0])
        raise BoundViolation(StandardFormParams(*map(float, samples[i])), float(per_sample[i]))

    records = []
    for name, make in SATURATING_FAMILIES:
        p = make(prec)
        for ph in phases:
            records.append(SaturationRecord(name, ph, float(relative_change_exact(p, eps, ph, prec))))

    return SampleReport(
        n_samples=n,
        eps=eps,
        min_relative_change=float(per_sample[idx]),
        argmin_params=StandardFormParams(*map(float, samples[idx])),
        violations=int(len(bad)),
        saturating_families_checked=records,
        phases=phases,
        phase_minima=tuple(float(v) for v in rel.min(axis=0)),
        acceptance_rate=rate,
        digits=prec.digits,
        tol_factor=tol_factor,
    )


def _constructed_family() -> np.ndarray:
    """Degenerate a = b, c = d states plus squeezed and thermal members."""
    rows = []
    for a in np.linspace(0.5, 3.0, 11):
        for frac in np.linspace(-0.9, 0.9, 7):
            c = frac * math.sqrt(max(a * a - 0.25, 0.0))
            rows.append((a, a, c, c))
    for r in np.linspace(0.1, 2.0, 6):
        rows.append((math.cosh(r) / 2, math.cosh(r) / 2, math.sinh(r) / 2, -math.sinh(r) / 2))
    rows = np.array(rows)
    return rows[bona_fide_mask(*rows.T)]


def search_sqrt_epsilon_states(seed: int, n: int, a_max: float = 3.0, include_constructed: bool = True) -> List[StandardFormParams]:
    """Search for states with alpha != 0 and Delta0^2 = 4 det(sigma).

    Such a state would make nu change like sqrt(eps). Alongside the search the
    algebraic argument is verified on every sample: Delta0^2 - 4 det(sigma) is a
    quadratic in d whose discriminant equals 16 (c^2 - ab)(a^2 - b^2)^2; physical
    states have c^2 < ab, so a real root needs a = b, whose double root d = c
    makes alpha vanish.

    Returns:
        Offending parameter sets (expected empty).

    Raises:
        ImpossibilityViolated: a step of the algebraic argument fails on a sample.
    """
    arr, _ = sample_standard_form_array(seed, n, a_max)
    if include_constructed:
        arr = np.vstack([arr, _constructed_family()])
    a, b, c, d = arr.T

    # Delta0^2 - 4 det sigma, directly and as the quadratic in d.
    delta0 = a * a + b * b - 2 * c * d
    det_sigma = (a * b - c * c) * (a * b - d * d)
    direct = delta0**2 - 4 * det_sigma
    qa = 4 * a * b
    qb = -4 * (a * a + b * b) * c
    qc = (a * a - b * b) ** 2 + 4 * a * b * c * c
    quadratic = qa * d * d + qb * d + qc
    scale = np.maximum(1.0, delta0**2)
    _require(np.abs(direct - quadratic) <= 1e-12 * scale * 16, arr, "quadratic form of Delta0^2 - 4 det(sigma)")

    disc = qb * qb - 4 * qa * qc
    factored = 16 * (c * c - a * b) * (a * a - b * b) ** 2
    _require(np.abs(disc - factored) <= 1e-10 * np.maximum(1.0, np.abs(qb * qb)), arr, "discriminant factorisation")
    _require(c * c < a * b, arr, "c^2 < ab for physical states")

    real_root = factored >= 0  # with c^2 < ab this is exactly a == b
    _require(a[real_root] == b[real_root], arr[real_root], "real root implies a = b")
    root = -qb[real_root] / (2 * qa[real_root])
    _require(np.isclose(root, c[real_root], rtol=1e-12, atol=1e-14), arr[real_root], "double root d = c")
    alpha_at_root = 2 * (a[real_root] + b[real_root]) * (c[real_root] - root)
    _require(np.abs(alpha_at_root) <= 1e-12, arr[real_root], "alpha vanishes at the root")

    alpha = 2 * (a + b) * (c - d)
    hits = (np.abs(alpha) > 1e-8) & (np.abs(direct) <= 1e-10 * scale)
    return [StandardFormParams(*map(float, row)) for row in arr[hits]]


def _require(ok, rows, step: str) -> None:
    ok = np.asarray(ok, bool)
    if not ok.all():
        i = int(np.flatnonzero(~ok)[0])
        raise ImpossibilityViolated(StandardFormParams(*map(float, rows[i])), f"algebraic step failed: {step}")
