"""Two-mode Gaussian states: covariance matrices, PPT symplectic eigenvalue,
negativity measures, physicality checks and the (a, b, c, d) standard form.

Quadrature ordering is (q1, k1, q2, k2) and the vacuum covariance is I/2, so
nu = 1 is the separability threshold.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any, Optional, Tuple

import mpmath
import numpy as np

from .errors import (
    InvariantInconsistency,
    NegativeDiscriminant,
    NonPositiveNu,
    NotPositiveDefinite,
    NotSymmetric,
)
from .precision import STANDARD, Precision, as_precision, det2, det4


def symplectic_form(precision=STANDARD) -> np.ndarray:
    """Omega = [[0, 1], [-1, 0]] (+) [[0, 1], [-1, 0]]."""
    w = np.array([[0, 1], [-1, 0]])
    return as_precision(precision).array(np.kron(np.eye(2), w))


@dataclass(frozen=True)
class CovarianceMatrix:
    """Symmetric, positive definite 4x4 covariance matrix.

    ``entries`` is float64 in standard precision and an object array of mpf in
    extended precision. Symmetry is checked exactly, positive definiteness by a
    Cholesky factorisation.
    """

    entries: np.ndarray
    precision: Precision = STANDARD

    def __post_init__(self):
        prec = as_precision(self.precision)
        object.__setattr__(self, "precision", prec)
        with prec.workspace():
            arr = prec.array(self.entries)
        if arr.shape != (4, 4):
            raise ValueError(f"covariance matrix must be 4x4, got {arr.shape}")
        if any(arr[i, j] != arr[j, i] for i in range(4) for j in range(i + 1, 4)):
            raise NotSymmetric("covariance matrix is not symmetric")
        _check_positive_definite(arr, prec)
        arr.setflags(write=False)
        object.__setattr__(self, "entries", arr)

    @classmethod
    def symmetrized(cls, entries, precision=STANDARD) -> "CovarianceMatrix":
        """Build from a numerically almost symmetric matrix by averaging with its transpose."""
        prec = as_precision(precision)
        with prec.workspace():
            arr = prec.array(entries)
            arr = (arr + arr.T) / 2
        return cls(arr, prec)

    @property
    def alpha(self) -> np.ndarray:
        return self.entries[:2, :2]

    @property
    def beta(self) -> np.ndarray:
        return self.entries[2:, 2:]

    @property
    def gamma(self) -> np.ndarray:
        return self.entries[:2, 2:]

    def det(self):
        with self.precision.workspace():
            return det4(self.entries)

    def to_float(self) -> np.ndarray:
        return np.array(self.entries, dtype=float)

    def with_precision(self, precision) -> "CovarianceMatrix":
        return CovarianceMatrix(self.entries, as_precision(precision))


def _check_positive_definite(arr: np.ndarray, prec: Precision) -> None:
    if prec.is_extended:
        with prec.workspace():
            try:
                mpmath.cholesky(mpmath.matrix(arr.tolist()))
            except ValueError as exc:
                raise NotPositiveDefinite("covariance matrix is not positive definite") from exc
    else:
        try:
            np.linalg.cholesky(arr)
        except np.linalg.LinAlgError as exc:
            raise NotPositiveDefinite("covariance matrix is not positive definite") from exc


@dataclass(frozen=True)
class StandardFormParams:
    a: Any
    b: Any
    c: Any
    d: Any

    def astuple(self) -> tuple:
        return (self.a, self.b, self.c, self.d)

    def to_float(self) -> "StandardFormParams":
        return StandardFormParams(*(float(v) for v in self.astuple()))


@dataclass(frozen=True)
class EntanglementResult:
    """Symplectic eigenvalue of the partial transpose and derived measures.

    ``one_minus_nu`` is computed independently of ``nu`` so that it keeps full
    relative accuracy when nu is within rounding of 1. ``log_negativity`` is in
    bits. ``Delta`` and ``det_sigma`` are None for results that come from
    closed-form approximations rather than a covariance matrix.
    """

    nu: Any
    one_minus_nu: Any
    negativity: Any
    log_negativity: Any
    Delta: Any = None
    det_sigma: Any = None

    @property
    def entangled(self) -> bool:
        return self.one_minus_nu > 0


def entanglement_measures(nu, one_minus_nu=None, precision=STANDARD) -> Tuple[Any, Any]:
    """Negativity and logarithmic negativity (bits) from nu.

    Pass ``one_minus_nu`` when it is known more accurately than ``1 - nu``.
    """
    precision = as_precision(precision)
    with precision.workspace():
        lib = precision.lib
        nu = precision.scalar(nu)
        omn = 1 - nu if one_minus_nu is None else precision.scalar(one_minus_nu)
        zero = precision.scalar(0)
        negativity = max(zero, omn / (2 * nu))
        if abs(omn) < 0.5:
            log_neg = -lib.log1p(-omn) / lib.ln2
        else:
            log_neg = -lib.log(nu) / lib.ln2
        return negativity, max(zero, log_neg)


def make_result(nu, one_minus_nu, precision=STANDARD, Delta=None, det_sigma=None) -> EntanglementResult:
    negativity, log_neg = entanglement_measures(nu, one_minus_nu, precision)
    return EntanglementResult(nu, one_minus_nu, negativity, log_neg, Delta, det_sigma)


def symplectic_eigenvalue(sigma: CovarianceMatrix, tol: Optional[float] = None) -> EntanglementResult:
    """Smallest symplectic eigenvalue of the partially transposed state.

    nu^2 = 2 (Delta - sqrt(Delta^2 - 4 det sigma)), evaluated as
    8 det sigma / (Delta + sqrt(...)) so that strongly entangled states do not
    lose digits, and 1 - nu = (1 - 2 Delta + 2 sqrt(...)) / (1 + nu).

    The discriminant Delta^2 - 4 det sigma is not formed by subtraction. After
    local reduction to blocks a I, b I and a correlation block with rotation
    invariants q, r it equals (a - b)^2 ((a + b)^2 - 4 det gamma) + 16 ab r^2,
    a sum of non-negative terms. Direct subtraction would lose half the digits
    near degenerate spectra (e.g. locally squeezed thermal states).

    Raises:
        NegativeDiscriminant: (a + b)^2 < 4 det gamma beyond ``tol``.
        NonPositiveNu: det sigma <= 0.
    """
    prec = sigma.precision
    tol = prec.tolerance if tol is None else tol
    with prec.workspace():
        lib = prec.lib
        det_gamma = det2(sigma.gamma)
        delta = det2(sigma.alpha) + det2(sigma.beta) - 2 * det_gamma
        det_sigma = det4(sigma.entries)
        a, b, g = _local_reduction(sigma.alpha, sigma.beta, sigma.gamma, lib)
        spread = (a + b) ** 2 - 4 * det_gamma
        if spread < 0:
            if spread < -tol * (a + b) ** 2:
                raise NegativeDiscriminant(
                    f"(a + b)^2 - 4 det(gamma) = {float(spread):.3e} < 0: covariance matrix is unphysical"
                )
            spread = prec.scalar(0)
        disc = (a - b) ** 2 * spread + 16 * a * b * _anti_part_sq(g)
        root = lib.sqrt(disc)
        if not det_sigma > 0 or not delta + root > 0:
            raise NonPositiveNu("symplectic eigenvalue radicand is not positive")
        nu = lib.sqrt(8 * det_sigma / (delta + root))
        one_minus_nu = (1 - 2 * delta + 2 * root) / (1 + nu)
    return make_result(nu, one_minus_nu, prec, Delta=delta, det_sigma=det_sigma)


def _d2(blk):
    return blk[..., 0, 0] * blk[..., 1, 1] - blk[..., 0, 1] * blk[..., 1, 0]


def _inv_sqrt_batch(m: np.ndarray) -> np.ndarray:
    """Vectorised :func:`_inv_sqrt_2x2` for an (N, 2, 2) stack."""
    s = np.sqrt(_d2(m))
    t = np.sqrt(m[:, 0, 0] + m[:, 1, 1] + 2 * s)
    p = m + s[:, None, None] * np.eye(2)
    scale = np.sqrt(s) * t / _d2(p)
    adj = np.stack([np.stack([p[:, 1, 1], -p[:, 0, 1]], -1), np.stack([-p[:, 1, 0], p[:, 0, 0]], -1)], -2)
    return adj * scale[:, None, None]


def symplectic_eigenvalue_batch(entries: np.ndarray, tol: float = 1e-12) -> Tuple[np.ndarray, np.ndarray]:
    """Vectorised binary64 version of :func:`symplectic_eigenvalue` for an (N, 4, 4) stack.

    Returns ``(nu, one_minus_nu)``; rows with an unphysical discriminant are NaN.
    """
    s = np.asarray(entries, dtype=float)
    alpha, beta, gamma = s[:, :2, :2], s[:, 2:, 2:], s[:, :2, 2:]
    det_gamma = _d2(gamma)
    delta = _d2(alpha) + _d2(beta) - 2 * det_gamma
    det_sigma = np.linalg.det(s)
    a, b = np.sqrt(_d2(alpha)), np.sqrt(_d2(beta))
    g = _inv_sqrt_batch(alpha) @ gamma @ np.swapaxes(_inv_sqrt_batch(beta), 1, 2)
    f = (g[:, 0, 0] - g[:, 1, 1]) / 2
    h = (g[:, 1, 0] + g[:, 0, 1]) / 2
    spread = (a + b) ** 2 - 4 * det_gamma
    bad = spread < -tol * (a + b) ** 2
    disc = (a - b) ** 2 * np.maximum(spread, 0.0) + 16 * a * b * (f * f + h * h)
    root = np.sqrt(disc)
    nu = np.sqrt(8 * det_sigma / (delta + root))
    omn = (1 - 2 * delta + 2 * root) / (1 + nu)
    nu[bad] = np.nan
    omn[bad] = np.nan
    return nu, omn


def bona_fide_min_eigenvalue(sigma) -> Any:
    """Smallest eigenvalue of the Hermitian matrix sigma + (i/2) Omega."""
    if isinstance(sigma, CovarianceMatrix):
        prec, arr = sigma.precision, sigma.entries
    else:
        prec, arr = STANDARD, np.asarray(sigma, dtype=float)
    omega = symplectic_form(prec)
    if prec.is_extended:
        with prec.workspace():
            m = mpmath.matrix(4, 4)
            for i in range(4):
                for j in range(4):
                    m[i, j] = mpmath.mpc(arr[i, j], omega[i, j] / 2)
            evals = mpmath.eigh(m, eigvals_only=True)
            return min(evals[i] for i in range(4))
    return float(np.linalg.eigvalsh(arr + 0.5j * omega).min())


def bona_fide_general(sigma, tol: Optional[float] = None) -> bool:
    """True iff sigma + (i/2) Omega >= -tol (uncertainty principle)."""
    prec = sigma.precision if isinstance(sigma, CovarianceMatrix) else STANDARD
    tol = prec.tolerance if tol is None else tol
    return bool(bona_fide_min_eigenvalue(sigma) >= -tol)


# Names of the four standard-form physicality inequalities, in order.
DIAGONAL = "diagonal"            # a, b >= 1/2
FIRST_MINOR = "first_minor"      # ab >= c^2 + b/(4a)
SUM_RULE = "sum_rule"            # 2ab - 1/2 >= c^2 + d^2
DETERMINANT = "determinant"      # (2cd - 1/2)^2 >= a^2 + b^2 - 4ab(ab - c^2 - d^2)
BONA_FIDE_CONDITIONS = (DIAGONAL, FIRST_MINOR, SUM_RULE, DETERMINANT)


@dataclass(frozen=True)
class BonaFideCheck:
    passed: bool
    violated: Tuple[str, ...] = field(default_factory=tuple)

    def __bool__(self) -> bool:
        return self.passed


def standard_form_margins(a, b, c, d):
    """(lhs - rhs) for each of the four inequalities; works elementwise on arrays."""
    diag = np.minimum(a, b) - 0.5 if isinstance(a, np.ndarray) else min(a, b) - 0.5
    first = a * b - c**2 - b / (4 * a)
    sum_rule = 2 * a * b - 0.5 - c**2 - d**2
    lhs = (2 * c * d - 0.5) ** 2
    rhs = a**2 + b**2 - 4 * a * b * (a * b - c**2 - d**2)
    return diag, first, sum_rule, lhs - rhs, (lhs, rhs)


def bona_fide_mask(a, b, c, d, tol: float = 1e-12) -> np.ndarray:
    """Vectorised pass/fail of all four inequalities (equality passes within ``tol``)."""
    a, b, c, d = (np.asarray(v, dtype=float) for v in (a, b, c, d))
    diag, first, sum_rule, det_margin, (lhs, rhs) = standard_form_margins(a, b, c, d)
    scale = np.maximum(1.0, np.maximum(np.abs(lhs), np.abs(rhs)))
    return (
        (diag >= -tol)
        & (first >= -tol * np.maximum(1.0, a * b))
        & (sum_rule >= -tol * np.maximum(1.0, 2 * a * b))
        & (det_margin >= -tol * scale)
    )


def bona_fide_standard_form(p: StandardFormParams, tol: float = 1e-12) -> BonaFideCheck:
    """Evaluate the four standard-form physicality inequalities.

    Boundary equality counts as a pass (pure states sit on the boundary).
    """
    a, b, c, d = p.astuple()
    diag, first, sum_rule, det_margin, (lhs, rhs) = standard_form_margins(a, b, c, d)
    scale = max(1.0, abs(float(lhs)), abs(float(rhs)))
    checks = (
        (DIAGONAL, diag >= -tol),
        (FIRST_MINOR, first >= -tol * max(1.0, abs(float(a * b)))),
        (SUM_RULE, sum_rule >= -tol * max(1.0, abs(float(2 * a * b)))),
        (DETERMINANT, det_margin >= -tol * scale),
    )
    violated = tuple(name for name, ok in checks if not ok)
    return BonaFideCheck(not violated, violated)


def assemble_standard_form(p: StandardFormParams, precision=STANDARD) -> np.ndarray:
    a, b, c, d = p.astuple()
    return as_precision(precision).array(
        [[a, 0, c, 0], [0, a, 0, d], [c, 0, b, 0], [0, d, 0, b]]
    )


def _inv_sqrt_2x2(m, lib):
    """(det m)^{1/4} * m^{-1/2} for a 2x2 symmetric positive definite block.

    The result is a 2x2 symplectic matrix S with S m S^T = sqrt(det m) * I.
    """
    s = lib.sqrt(det2(m))
    t = lib.sqrt(m[0, 0] + m[1, 1] + 2 * s)
    # sqrt(m) = (m + s I) / t, so sqrt(m)^{-1} = t (m + s I)^{-1} = t * adj(m + s I) / det(m + s I)
    p00, p01, p10, p11 = m[0, 0] + s, m[0, 1], m[1, 0], m[1, 1] + s
    det_p = p00 * p11 - p01 * p10
    scale = lib.sqrt(s) * t / det_p
    return np.array([[p11 * scale, -p01 * scale], [-p10 * scale, p00 * scale]], dtype=object)


def _local_reduction(alpha, beta, gamma, lib):
    """a = sqrt(det alpha), b = sqrt(det beta) and the correlation block after
    the local symplectic maps that send alpha to a I and beta to b I."""
    a = lib.sqrt(det2(alpha))
    b = lib.sqrt(det2(beta))
    s1 = _inv_sqrt_2x2(alpha, lib)
    s2 = _inv_sqrt_2x2(beta, lib)
    g = np.dot(np.dot(s1, np.asarray(gamma, dtype=object)), s2.T)
    return a, b, g


def _anti_part_sq(m):
    """Squared rotation invariant r^2 of the part of m that anticommutes with J."""
    f = (m[0, 0] - m[1, 1]) / 2
    g = (m[1, 0] + m[0, 1]) / 2
    return f * f + g * g


def _signed_singular_values(m, lib):
    """Rotation-only SVD values of a 2x2 matrix: m = R1 diag(x, y) R2 with x >= |y|."""
    e = (m[0, 0] + m[1, 1]) / 2
    f = (m[0, 0] - m[1, 1]) / 2
    g = (m[1, 0] + m[0, 1]) / 2
    h = (m[1, 0] - m[0, 1]) / 2
    q = lib.sqrt(e * e + h * h)
    r = lib.sqrt(f * f + g * g)
    return q + r, q - r


def standard_form_invariants(sigma: CovarianceMatrix, tol: Optional[float] = None) -> StandardFormParams:
    """Reduce sigma to standard form (a, b, c, d) by local symplectic operations.

    The local blocks are first made proportional to the identity, then the
    correlation block is diagonalised by local rotations. The result is checked
    against the local invariants det(gamma) = cd and
    det(sigma) = (ab - c^2)(ab - d^2). Convention: c >= |d|.

    Raises:
        InvariantInconsistency: the reduction disagrees with the invariants, or
            the quadratic for c^2, d^2 has no real roots beyond tolerance.
    """
    prec = sigma.precision
    tol = prec.tolerance * 100 if tol is None else tol
    with prec.workspace():
        lib = prec.lib
        alpha, beta, gamma = sigma.alpha, sigma.beta, sigma.gamma
        a, b, g = _local_reduction(alpha, beta, gamma, lib)
        c, d = _signed_singular_values(g, lib)

        p = det2(gamma)
        det_sigma = det4(sigma.entries)
        s = (a * a * b * b + p * p - det_sigma) / (a * b)
        scale = max(1, abs(s)) ** 2
        if s * s - 4 * p * p < -tol * scale:
            raise InvariantInconsistency(
                "local invariants admit no real standard form: "
                f"s^2 - 4p^2 = {float(s * s - 4 * p * p):.3e}"
            )
        if abs(c * d - p) > tol * max(1, abs(p)) or abs(c * c + d * d - s) > tol * max(1, abs(s)):
            raise InvariantInconsistency("local reduction disagrees with the local invariants")
        return StandardFormParams(a, b, c, d)


def standard_form_delta0(p: StandardFormParams):
    a, b, c, d = p.astuple()
    return a * a + b * b - 2 * c * d


def standard_form_det(p: StandardFormParams):
    a, b, c, d = p.astuple()
    return (a * b - c * c) * (a * b - d * d)
