"""Phase-space flows of Toda-like prey-predator models."""

from ._todaflow import (
    DomainError,
    IoError,
    NumericalFailure,
    UsageError,
    ValidityError,
    bessel_k,
    elliptic_k,
    energy,
    gaussian_currents,
    gaussian_divergence,
    im_erf_offset,
    integrate_orbit,
    orbit_period,
    purity,
    quantum_trajectory,
    quantum_velocity,
    run_cli,
    sample_field,
    stagnation_points,
    thermal_observables,
    toda_closed_period,
    validity_boundary,
    z0,
    z_st,
)

__all__ = [
    "DomainError",
    "IoError",
    "NumericalFailure",
    "UsageError",
    "ValidityError",
    "bessel_k",
    "elliptic_k",
    "energy",
    "gaussian_currents",
    "gaussian_divergence",
    "im_erf_offset",
    "integrate_orbit",
    "orbit_period",
    "purity",
    "quantum_trajectory",
    "quantum_velocity",
    "run_cli",
    "sample_field",
    "stagnation_points",
    "thermal_observables",
    "toda_closed_period",
    "validity_boundary",
    "z0",
    "z_st",
]
