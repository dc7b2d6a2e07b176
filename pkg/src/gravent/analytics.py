"""Closed-form perturbative results in the small coupling eps.

Phases are omega' t in radians. ``eps_hat`` denotes 2Gm/(d^3 omega^2) (bare
frequency); formulas accept either coupling since they differ at O(eps^2).
Logarithms in the temperature thresholds are natural logarithms.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Any

from .errors import DegenerateDiscriminant, GeometryInvalid, LogDomain
from .gaussian import EntanglementResult, StandardFormParams, make_result
from .params import CODATA, PhysicalConstants, SystemParams
from .precision import STANDARD, as_precision

# States with |a - b| and |c - d| below this are treated as exactly degenerate.
ALPHA_TOL = 1e-12


@dataclass(frozen=True)
class SfExpansion:
    """Delta(eps) ~ Delta0 + alpha * eps + beta * eps^2 for a standard-form state."""

    Delta0: Any
    alpha: Any
    beta: Any

    def __call__(self, eps):
        return self.Delta0 + self.alpha * eps + self.beta * eps**2


def nu_thermal_first_order(theta, eps_hat, phase, theta_minus_one=None, precision=STANDARD) -> EntanglementResult:
    """nu_T = theta (1 - eps_hat |sin phase|) for a thermal initial state.

    ``theta_minus_one`` should be supplied whenever theta is within rounding of 1.
    """
    prec = as_precision(precision)
    with prec.workspace():
        lib = prec.lib
        theta = prec.scalar(theta)
        tm1 = theta - 1 if theta_minus_one is None else prec.scalar(theta_minus_one)
        shift = prec.scalar(eps_hat) * abs(lib.sin(prec.scalar(phase)))
        nu = theta * (1 - shift)
        one_minus_nu = theta * shift - tm1
    return make_result(nu, one_minus_nu, prec)


def nu_squeezed_first_order(r, eps_hat, phase, theta=1, theta_minus_one=None, precision=STANDARD) -> EntanglementResult:
    """First-order nu for a (thermally scaled) two-mode squeezed initial state.

    r != 0: nu = theta e^{-|r|} (1 - sign(r) eps_hat sin^2 phase);
    r == 0: the linear term vanishes and nu = theta (1 - eps_hat |sin phase|).
    """
    prec = as_precision(precision)
    if r == 0:
        return nu_thermal_first_order(theta, eps_hat, phase, theta_minus_one, prec)
    with prec.workspace():
        lib = prec.lib
        r = prec.scalar(r)
        theta = prec.scalar(theta)
        sign = 1 if r > 0 else -1
        nu0 = theta * lib.exp(-abs(r))
        shift = sign * prec.scalar(eps_hat) * lib.sin(prec.scalar(phase)) ** 2
        nu = nu0 * (1 - shift)
        one_minus_nu = (1 - nu0) + nu0 * shift
    return make_result(nu, one_minus_nu, prec)


def t_max_thermal(p: SystemParams, k: PhysicalConstants = CODATA) -> float:
    """hbar omega / (kB ln(d^3 omega^2 / Gm)): highest temperature with nu_T < 1."""
    ratio = p.d**3 * p.omega**2 / (k.G * p.m) if k.G > 0 else math.inf
    if not ratio > 1:
        raise LogDomain(f"d^3 omega^2 / Gm = {ratio:.6g} must exceed 1")
    return k.hbar * p.omega / (k.kB * math.log(ratio))


def t_max_squeezed(r: float, eps: float, omega: float, k: PhysicalConstants = CODATA) -> float:
    """hbar omega / (kB ln((e^r + 1 - eps) / (e^r - 1 + eps))) for a squeezed thermal state."""
    if r > 700:
        return math.inf
    den = math.expm1(r) + eps
    # numerator - denominator = 2 (1 - eps)
    if not den > 0 or not eps < 1:
        raise LogDomain(f"threshold ratio (e^r + 1 - eps)/(e^r - 1 + eps) must exceed 1 (r={r}, eps={eps})")
    return k.hbar * omega / (k.kB * math.log1p(2 * (1 - eps) / den))


def delta_squeezed_second_order(r, eps, phase, precision=STANDARD):
    """Second-order expansion of Delta for an evolved two-mode squeezed vacuum."""
    prec = as_precision(precision)
    with prec.workspace():
        lib = prec.lib
        r, eps, x = prec.scalar(r), prec.scalar(eps), prec.scalar(phase)
        ch2 = lib.cosh(2 * r)
        quad = (
            ch2 * (-8 * x**2 - 8 * lib.cos(2 * x) + 7)
            + 2 * lib.sinh(r) ** 2 * lib.cos(4 * x)
            + 8 * x**2
            + 1
        )
        return ch2 / 2 + eps * lib.sinh(2 * r) * lib.sin(x) ** 2 + eps**2 * quad / 16


def sf_expansion(p: StandardFormParams, phase, omega_t=None, precision=STANDARD) -> SfExpansion:
    """Coefficients of Delta(eps) for an evolved standard-form state.

    ``phase`` enters the sin^2 of the linear term; ``omega_t`` (default: the
    same value) enters the secular and harmonic terms of the quadratic one.
    """
    prec = as_precision(precision)
    with prec.workspace():
        lib = prec.lib
        a, b, c, d = (prec.scalar(v) for v in p.astuple())
        x = prec.scalar(phase)
        w = x if omega_t is None else prec.scalar(omega_t)
        delta0 = a * a + b * b - 2 * c * d
        alpha = 2 * (a + b) * (c - d) * lib.sin(x) ** 2
        beta = (
            4 * (a + b) ** 2
            - c * c
            - d * d
            - 14 * c * d
            - 8 * ((a - b) ** 2 + (c - d) ** 2) * w**2
            - 4 * ((a + b) ** 2 - 4 * c * d) * lib.cos(2 * w)
            + (c - d) * ((c - d) * lib.cos(4 * w) - 8 * (c + d) * w * lib.sin(2 * w))
        ) / 8
        return SfExpansion(delta0, alpha, beta)


def relative_change_first_order(p: StandardFormParams, eps, phase, precision=STANDARD):
    """First-order (nu(t) - nu(0)) / nu(0) for a standard-form initial state.

    a == b, c == d (so alpha == 0 and Delta0^2 == 4 det sigma):
        -eps sqrt(beta / (2 Delta0)) = -eps |sin phase|.
    otherwise: -alpha eps / (2 sqrt(Delta0^2 - 4 det sigma)), which is 0 when alpha == 0.

    Delta0^2 - 4 det sigma is evaluated as (a - b)^2 ((a + b)^2 - 4cd) + 4ab (c - d)^2,
    which has no cancellation, so nearly degenerate states keep their linear term.

    Raises:
        DegenerateDiscriminant: alpha != 0 while Delta0^2 == 4 det sigma (no
            physical state does this).
    """
    prec = as_precision(precision)
    with prec.workspace():
        lib = prec.lib
        a, b, c, d = (prec.scalar(v) for v in p.astuple())
        eps = prec.scalar(eps)
        exp = sf_expansion(p, phase, precision=prec)
        disc = (a - b) ** 2 * ((a + b) ** 2 - 4 * c * d) + 4 * a * b * (c - d) ** 2
        if abs(a - b) <= ALPHA_TOL and abs(c - d) <= ALPHA_TOL:
            # Delta0^2 = 4 det sigma and alpha = 0: the leading term is of order eps
            return -eps * lib.sqrt(max(exp.beta, 0) / (2 * exp.Delta0))
        if disc > 0:
            return -exp.alpha * eps / (2 * lib.sqrt(disc))
        if exp.alpha == 0:
            return prec.scalar(0)
        raise DegenerateDiscriminant("alpha != 0 with Delta0^2 = 4 det(sigma): sqrt(eps) scaling requested")


def entanglement_bound(eps):
    """Lower bound -eps on (nu(t) - nu(0)) / nu(0) over all Gaussian initial states."""
    if eps < 0:
        raise ValueError("eps must be non-negative")
    return -eps


def dielectric_factor(eps_r: float) -> float:
    """((eps_r - 1) / (eps_r + 2)); tends to 1 for a perfect reflector."""
    if math.isinf(eps_r):
        return 1.0
    return (eps_r - 1) / (eps_r + 2)


def casimir_polder_potential(R: float, D: float, eps_r: float = math.inf, k: PhysicalConstants = CODATA) -> float:
    """Retarded Casimir-Polder energy 23 hbar c R^6 / (4 pi D^7) * eta^2 between two spheres.

    Raises:
        GeometryInvalid: D <= 5R, outside the far-separation regime.
    """
    if not D > 5 * R:
        raise GeometryInvalid(f"separation {D} m must exceed five radii ({5 * R} m)")
    eta = dielectric_factor(eps_r)
    return 23 * k.hbar * k.c * R**6 / (4 * math.pi * D**7) * eta**2


def sphere_radius(m: float, rho: float) -> float:
    return (3 * m / (4 * math.pi * rho)) ** (1 / 3)


def casimir_crossover_distance(
    m: float,
    rho: float = 2200.0,
    eps_r: float = math.inf,
    ratio: float = 0.1,
    k: PhysicalConstants = CODATA,
) -> float:
    """Separation where the Casimir-Polder energy equals ``ratio`` times Gm^2/D.

    Defaults: fused silica density, perfect-reflector dielectric factor and a
    tenfold suppression relative to gravity.
    """
    if not (m > 0 and rho > 0):
        raise ValueError("mass and density must be positive")
    if not 0 < ratio <= 1:
        raise ValueError("ratio must lie in (0, 1]")
    R = sphere_radius(m, rho)
    eta = dielectric_factor(eps_r)
    return (23 * k.hbar * k.c * R**6 * eta**2 / (4 * math.pi * ratio * k.G * m**2)) ** (1 / 6)
