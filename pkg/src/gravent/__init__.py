"""Gravitationally induced entanglement between two harmonically trapped particles,
in the Gaussian covariance-matrix formalism."""

__version__ = "0.1.0"

from .params import (
    CODATA,
    DerivedParams,
    PhysicalConstants,
    SystemParams,
    derive_params,
    theta_minus_one,
    theta_of_temperature,
)
from .precision import Precision
from .gaussian import (
    CovarianceMatrix,
    EntanglementResult,
    StandardFormParams,
    bona_fide_general,
    bona_fide_standard_form,
    entanglement_measures,
    standard_form_invariants,
    symplectic_eigenvalue,
)
from .states import standard_form_state, thermal_state, two_mode_squeezed_state
from .dynamics import evolve, propagator_closed_form, propagator_series

__all__ = [
    "CODATA",
    "CovarianceMatrix",
    "DerivedParams",
    "EntanglementResult",
    "PhysicalConstants",
    "Precision",
    "StandardFormParams",
    "SystemParams",
    "bona_fide_general",
    "bona_fide_standard_form",
    "derive_params",
    "entanglement_measures",
    "evolve",
    "propagator_closed_form",
    "propagator_series",
    "standard_form_invariants",
    "standard_form_state",
    "symplectic_eigenvalue",
    "theta_minus_one",
    "theta_of_temperature",
    "thermal_state",
    "two_mode_squeezed_state",
]
