"""Laser-assisted decay of quasistationary states.

Thin wrapper over the compiled extension: imaginary-time-method spectra and
rates for a 1D rectangular-barrier model, plus a grid TDSE reference solver.
All quantities are in atomic units.
"""

from _qsdecay import (  # noqa: F401
    BarrierSpec,
    DimlessParams,
    Envelope,
    FieldSpec,
    ItmSettings,
    QSState,
    RateSummary,
    SaddlePoint,
    action_full,
    action_weakfield,
    derive_state,
    dimensionless,
    exit_velocity,
    field_free_action,
    field_free_rate,
    peak_momenta,
    pulse_net_momentum,
    solve_saddles_monochromatic,
    solve_saddles_pulse,
    spectrum_monochromatic,
    spectrum_pulse,
    tdse_ground_state,
    total_rate_monochromatic,
    validity_report,
)

__all__ = [
    "BarrierSpec",
    "DimlessParams",
    "Envelope",
    "FieldSpec",
    "ItmSettings",
    "QSState",
    "RateSummary",
    "SaddlePoint",
    "action_full",
    "action_weakfield",
    "derive_state",
    "dimensionless",
    "exit_velocity",
    "field_free_action",
    "field_free_rate",
    "peak_momenta",
    "pulse_net_momentum",
    "solve_saddles_monochromatic",
    "solve_saddles_pulse",
    "spectrum_monochromatic",
    "spectrum_pulse",
    "tdse_ground_state",
    "total_rate_monochromatic",
    "validity_report",
]
