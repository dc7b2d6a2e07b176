"""Quadratic Hamiltonian, symplectic propagator and covariance-matrix evolution.

The Hamiltonian is H = X^T H X without a factor 1/2, so the propagator is
S(t) = exp((2t/hbar) Omega H). In units of the shifted frequency this is
exp(phase * A) with phase = omega' t and

    A = [[0, 1, 0, 0], [-1, 0, -eps, 0], [0, 0, 0, 1], [-eps, 0, -1, 0]].

The production propagator uses the normal modes (q1 +- q2)/sqrt(2), which
oscillate at omega' sqrt(1 +- eps). A scaling-and-squaring Taylor exponential
of the same generator is kept as an independent check.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Any, Optional

import numpy as np

from .errors import EpsilonOutOfRange
from .gaussian import CovarianceMatrix, symplectic_form
from .params import CODATA, DerivedParams, PhysicalConstants
from .precision import STANDARD, Precision, as_precision, max_abs


@dataclass(frozen=True)
class Propagator:
    entries: np.ndarray
    phase: Any
    epsilon: Any
    symplectic_defect: Any
    t: Optional[Any] = None
    precision: Precision = STANDARD


def hamiltonian_matrix(dp: DerivedParams, k: PhysicalConstants = CODATA) -> np.ndarray:
    """(hbar omega' / 2) [[1, 0, eps, 0], [0, 1, 0, 0], [eps, 0, 1, 0], [0, 0, 0, 1]] in joules."""
    prec = dp.precision
    with prec.workspace():
        scale = prec.scalar(k.hbar) * dp.omega_prime / 2
        eps = dp.epsilon
        return prec.array(
            [
                [scale, 0, scale * eps, 0],
                [0, scale, 0, 0],
                [scale * eps, 0, scale, 0],
                [0, 0, 0, scale],
            ]
        )


def generator(eps, precision=STANDARD) -> np.ndarray:
    """Dimensionless generator A such that S = exp(omega' t * A)."""
    prec = as_precision(precision)
    with prec.workspace():
        e = prec.scalar(eps)
        return prec.array([[0, 1, 0, 0], [-1, 0, -e, 0], [0, 0, 0, 1], [-e, 0, -1, 0]])


def symplectic_defect(s: np.ndarray, precision=STANDARD):
    """max |S Omega S^T - Omega| over entries."""
    prec = as_precision(precision)
    with prec.workspace():
        omega = symplectic_form(prec)
        return max_abs(s @ omega @ s.T - omega)


def _check_eps(eps) -> None:
    if not -1 < eps < 1:
        raise EpsilonOutOfRange(f"coupling eps = {float(eps)} must satisfy |eps| < 1")


def _mode_block(phase, stiffness, lib, two_pi):
    """Evolution of one normal mode with frequency omega' sqrt(stiffness)."""
    root = lib.sqrt(stiffness)
    arg = lib.remainder(phase * root, two_pi)
    c, s = lib.cos(arg), lib.sin(arg)
    return c, s / root, -root * s


def propagator_from_phase(eps, phase, precision=STANDARD, t=None) -> Propagator:
    """Closed-form propagator for coupling ``eps`` after ``phase = omega' t``."""
    prec = as_precision(precision)
    _check_eps(eps)
    with prec.workspace():
        lib = prec.lib
        eps = prec.scalar(eps)
        phase = prec.scalar(phase)
        two_pi = 2 * lib.pi
        cp, xp, yp = _mode_block(phase, 1 + eps, lib, two_pi)
        cm, xm, ym = _mode_block(phase, 1 - eps, lib, two_pi)
        # Back-transform from (q+, k+, q-, k-): S = 1/2 [[B+ + B-, B+ - B-], [B+ - B-, B+ + B-]].
        c_sum, c_dif = (cp + cm) / 2, (cp - cm) / 2
        x_sum, x_dif = (xp + xm) / 2, (xp - xm) / 2
        y_sum, y_dif = (yp + ym) / 2, (yp - ym) / 2
        s = prec.array(
            [
                [c_sum, x_sum, c_dif, x_dif],
                [y_sum, c_sum, y_dif, c_dif],
                [c_dif, x_dif, c_sum, x_sum],
                [y_dif, c_dif, y_sum, c_sum],
            ]
        )
        defect = symplectic_defect(s, prec)
    return Propagator(s, phase, eps, defect, t, prec)


def propagator_closed_form(dp: DerivedParams, t) -> Propagator:
    prec = dp.precision
    with prec.workspace():
        phase = dp.omega_prime * prec.scalar(t)
    return propagator_from_phase(dp.epsilon, phase, prec, t=t)


def series_from_phase(eps, phase, precision=STANDARD, t=None) -> Propagator:
    """exp(phase * A) by scaling and squaring a truncated Taylor series.

    The argument is halved until its infinity norm is at most 1/2; the series is
    summed until the next term falls below the working precision.
    """
    prec = as_precision(precision)
    _check_eps(eps)
    with prec.workspace():
        phase = prec.scalar(phase)
        a = generator(eps, prec) * phase
        norm = max(sum(abs(v) for v in row) for row in a)
        squarings = 0
        if norm > 0.5:
            squarings = int(math.ceil(math.log2(float(norm) / 0.5)))
        b = a / prec.scalar(2**squarings)
        cutoff = 10.0 ** (-(prec.digits + 3)) if prec.is_extended else 1e-18
        result = prec.identity(4)
        term = prec.identity(4)
        for n in range(1, 400):
            term = term @ b / n
            result = result + term
            if max_abs(term) < cutoff:
                break
        for _ in range(squarings):
            result = result @ result
        defect = symplectic_defect(result, prec)
    return Propagator(result, phase, prec.scalar(eps), defect, t, prec)


def propagator_series(dp: DerivedParams, t) -> Propagator:
    prec = dp.precision
    with prec.workspace():
        phase = dp.omega_prime * prec.scalar(t)
    return series_from_phase(dp.epsilon, phase, prec, t=t)


def evolve_with(sigma0: CovarianceMatrix, s: Propagator) -> CovarianceMatrix:
    prec = sigma0.precision
    with prec.workspace():
        m = prec.array(s.entries)
        out = m @ sigma0.entries @ m.T
    return CovarianceMatrix.symmetrized(out, prec)


def evolve_phase(sigma0: CovarianceMatrix, eps, phase) -> CovarianceMatrix:
    """sigma(t) = S sigma(0) S^T for coupling ``eps`` at ``phase = omega' t``."""
    return evolve_with(sigma0, propagator_from_phase(eps, phase, sigma0.precision))


def evolve(sigma0: CovarianceMatrix, dp: DerivedParams, t) -> CovarianceMatrix:
    prec = sigma0.precision
    with prec.workspace():
        phase = prec.scalar(dp.omega_prime) * prec.scalar(t)
    return evolve_phase(sigma0, dp.epsilon, phase)


def propagator_batch(eps: float, phases: np.ndarray) -> np.ndarray:
    """Closed-form propagators (binary64) for an array of phases, shape (N, 4, 4)."""
    _check_eps(eps)
    phases = np.asarray(phases, dtype=float)
    two_pi = 2 * np.pi
    out = np.empty(phases.shape + (4, 4))
    blocks = []
    for stiff in (1 + eps, 1 - eps):
        root = np.sqrt(stiff)
        arg = np.remainder(phases * root + np.pi, two_pi) - np.pi
        c, s = np.cos(arg), np.sin(arg)
        blocks.append((c, s / root, -root * s))
    (cp, xp, yp), (cm, xm, ym) = blocks
    cs, cd = (cp + cm) / 2, (cp - cm) / 2
    xs, xd = (xp + xm) / 2, (xp - xm) / 2
    ys, yd = (yp + ym) / 2, (yp - ym) / 2
    rows = [
        [cs, xs, cd, xd],
        [ys, cs, yd, cd],
        [cd, xd, cs, xs],
        [yd, cd, ys, cs],
    ]
    for i in range(4):
        for j in range(4):
            out[..., i, j] = rows[i][j]
    return out
