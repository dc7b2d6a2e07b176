"""Physical constants, experimental inputs and the derived dimensionless couplings.

Frequencies are angular (rad/s) throughout.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any, Optional

from scipy import constants as _codata

from .errors import DeltaSingular, DomainError, TrapUnstable
from .precision import STANDARD, Precision, as_precision

# Above this exponent math.expm1 overflows; use the asymptotic form instead.
_EXPM1_LIMIT = 700.0


@dataclass(frozen=True)
class PhysicalConstants:
    """SI constants (CODATA via scipy). Override fields for unit-scaling tests.

    ``G = 0`` is accepted and switches the gravitational coupling off.
    """

    G: float = _codata.G
    hbar: float = _codata.hbar
    kB: float = _codata.k
    c: float = _codata.c

    def __post_init__(self):
        if self.G < 0:
            raise DomainError("G must be non-negative")
        for name in ("hbar", "kB", "c"):
            if getattr(self, name) <= 0:
                raise DomainError(f"{name} must be positive")

    def as_dict(self) -> dict:
        return {"G": self.G, "hbar": self.hbar, "kB": self.kB, "c": self.c}


CODATA = PhysicalConstants()


@dataclass(frozen=True)
class SystemParams:
    """Two identical particles of mass ``m`` in traps of angular frequency ``omega``
    separated by ``d``. ``T`` (kelvin) and squeezing ``r`` are optional."""

    m: float
    omega: float
    d: float
    T: Optional[float] = None
    r: Optional[float] = None

    def __post_init__(self):
        if not self.m > 0:
            raise DomainError(f"mass must be positive, got {self.m}")
        if not self.omega > 0:
            raise DomainError(f"omega must be positive, got {self.omega}")
        if not self.d > 0:
            raise DomainError(f"separation must be positive, got {self.d}")
        if self.T is not None and not self.T >= 0:
            raise DomainError(f"temperature must be non-negative, got {self.T}")

    def as_dict(self) -> dict:
        return {"m": self.m, "omega": self.omega, "d": self.d, "T": self.T, "r": self.r}


@dataclass(frozen=True)
class DerivedParams:
    """Quantities derived from :class:`SystemParams`.

    ``epsilon`` uses the shifted frequency ``omega_prime``; ``eps_hat`` uses the
    bare ``omega`` (the two differ at second order). ``theta_minus_one`` is kept
    separately because it is routinely far below binary64 resolution around 1.
    ``delta`` is None when its denominator is non-positive.
    """

    omega_prime: Any
    delta: Any
    epsilon: Any
    eps_hat: Any
    theta: Any = None
    theta_minus_one: Any = None
    precision: Precision = field(default=STANDARD, compare=False)


def coupling_rate(p: SystemParams, k: PhysicalConstants = CODATA, precision=STANDARD):
    """2Gm/d^3 in s^-2."""
    precision = as_precision(precision)
    with precision.workspace():
        s = precision.scalar
        return 2 * s(k.G) * s(p.m) / s(p.d) ** 3


def theta_minus_one(T, omega, k: PhysicalConstants = CODATA, precision=STANDARD):
    """coth(hbar*omega / 2 kB T) - 1 evaluated without cancellation.

    Uses coth(x) - 1 = 2 / (exp(2x) - 1); exactly 0 at T = 0.
    """
    precision = as_precision(precision)
    with precision.workspace():
        s, lib = precision.scalar, precision.lib
        if T == 0:
            return s(0)
        two_x = s(k.hbar) * s(omega) / (s(k.kB) * s(T))
        if not precision.is_extended and two_x > _EXPM1_LIMIT:
            return 2.0 * lib.exp(-two_x)
        return 2 / lib.expm1(two_x)


def theta_of_temperature(T, omega, k: PhysicalConstants = CODATA, precision=STANDARD):
    """Thermal variance factor coth(hbar*omega / 2 kB T); 1 at T = 0."""
    precision = as_precision(precision)
    with precision.workspace():
        return 1 + theta_minus_one(T, omega, k, precision)


def derive_params(
    p: SystemParams,
    k: PhysicalConstants = CODATA,
    precision=STANDARD,
    strict_delta: bool = False,
) -> DerivedParams:
    """Shifted frequency, equilibrium shift, coupling and thermal factor.

    Raises:
        TrapUnstable: omega^2 <= 2Gm/d^3.
        DeltaSingular: only with ``strict_delta``, when omega^2 d^3 <= 4Gm.
    """
    precision = as_precision(precision)
    with precision.workspace():
        s, lib = precision.scalar, precision.lib
        G, m, d, omega = s(k.G), s(p.m), s(p.d), s(p.omega)
        rate = 2 * G * m / d**3
        omega_prime_sq = omega**2 - rate
        if not omega_prime_sq > 0:
            raise TrapUnstable(
                f"omega^2 = {float(omega**2):.6g} does not exceed 2Gm/d^3 = {float(rate):.6g}"
            )
        denom = omega**2 * d**3 - 4 * G * m
        if denom > 0:
            delta = G * m * d / denom
        elif strict_delta:
            raise DeltaSingular("omega^2 d^3 - 4Gm <= 0; equilibrium shift undefined")
        else:
            delta = None
        theta = tm1 = None
        if p.T is not None:
            tm1 = theta_minus_one(p.T, p.omega, k, precision)
            theta = 1 + tm1
        return DerivedParams(
            omega_prime=lib.sqrt(omega_prime_sq),
            delta=delta,
            epsilon=rate / omega_prime_sq,
            eps_hat=rate / omega**2,
            theta=theta,
            theta_minus_one=tm1,
            precision=precision,
        )
