"""Python bindings for the mean-field charging game."""

from ._mfgrid import (
    A1Violated,
    A3Violated,
    ModelError,
    ModelParams,
    Population,
    SimulationError,
    TimeGrid,
    converge,
    deviate,
    draw_population,
    lmi_nash,
    lmi_nash_threshold,
    lmi_social,
    nash_diagnostics,
    riccati,
    simulate,
    social_coercivity_holds,
    social_diagnostics,
    solve_nash,
    solve_social,
    verify_riccati,
)

__all__ = [
    "A1Violated",
    "A3Violated",
    "ModelError",
    "ModelParams",
    "Population",
    "SimulationError",
    "TimeGrid",
    "converge",
    "deviate",
    "draw_population",
    "lmi_nash",
    "lmi_nash_threshold",
    "lmi_social",
    "nash_diagnostics",
    "riccati",
    "simulate",
    "social_coercivity_holds",
    "social_diagnostics",
    "solve_nash",
    "solve_social",
    "verify_riccati",
]
