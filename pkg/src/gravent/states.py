"""Initial covariance matrices: thermal, two-mode squeezed and general standard form."""

from __future__ import annotations

from .errors import BonaFideViolation, UnphysicalTheta
from .gaussian import (
    CovarianceMatrix,
    StandardFormParams,
    assemble_standard_form,
    bona_fide_standard_form,
)
from .precision import STANDARD, as_precision


def thermal_state(theta, precision=STANDARD) -> CovarianceMatrix:
    """theta/2 * I for two uncorrelated oscillators at thermal factor ``theta``."""
    prec = as_precision(precision)
    if theta < 1:
        raise UnphysicalTheta(f"theta must be >= 1, got {theta}")
    with prec.workspace():
        t = prec.scalar(theta)
        return CovarianceMatrix(prec.array([[t / 2 if i == j else 0 for j in range(4)] for i in range(4)]), prec)


def two_mode_squeezed_state(r, precision=STANDARD) -> CovarianceMatrix:
    """Two-mode squeezed vacuum. Positive ``r`` reduces Var(q1 - q2) to exp(-r)."""
    return thermal_squeezed_state(1, r, precision)


def thermal_squeezed_state(theta, r, precision=STANDARD) -> CovarianceMatrix:
    """Two-mode squeezing applied to a thermal state: theta times the squeezed vacuum."""
    prec = as_precision(precision)
    if theta < 1:
        raise UnphysicalTheta(f"theta must be >= 1, got {theta}")
    with prec.workspace():
        lib = prec.lib
        r = prec.scalar(r)
        t = prec.scalar(theta)
        ch = t * lib.cosh(r) / 2
        sh = t * lib.sinh(r) / 2
        return CovarianceMatrix(
            prec.array(
                [
                    [ch, 0, sh, 0],
                    [0, ch, 0, -sh],
                    [sh, 0, ch, 0],
                    [0, -sh, 0, ch],
                ]
            ),
            prec,
        )


def standard_form_state(p: StandardFormParams, precision=STANDARD) -> CovarianceMatrix:
    """Covariance matrix with diagonal (a, a, b, b), c at (q1, q2) and d at (k1, k2).

    Raises:
        BonaFideViolation: listing every violated physicality inequality.
    """
    prec = as_precision(precision)
    with prec.workspace():
        check = bona_fide_standard_form(p, tol=prec.tolerance)
        if not check.passed:
            raise BonaFideViolation(check.violated)
        return CovarianceMatrix(assemble_standard_form(p, prec), prec)


def tms_standard_form(r, precision=STANDARD) -> StandardFormParams:
    prec = as_precision(precision)
    with prec.workspace():
        lib = prec.lib
        r = prec.scalar(r)
        return StandardFormParams(lib.cosh(r) / 2, lib.cosh(r) / 2, lib.sinh(r) / 2, -lib.sinh(r) / 2)


def thermal_standard_form(theta, precision=STANDARD) -> StandardFormParams:
    prec = as_precision(precision)
    with prec.workspace():
        t = prec.scalar(theta)
        return StandardFormParams(t / 2, t / 2, prec.scalar(0), prec.scalar(0))
