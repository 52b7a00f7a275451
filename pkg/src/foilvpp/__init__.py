"""Resistance prediction for sailing yachts fitted with lifting foils."""

from .equilibrium import (
    EquilibriumState,
    Flag,
    SolverTolerances,
    YachtConfig,
    bare_hull_resistance,
    solve_equilibrium,
)
from .hull import KNOT, HullSample, HullSurfaceSet, evaluate, fit_surfaces, froude_number
from .polar import PolarTable, efficiency, interpolate, parse_polar
from .sweep import SweepRequest, SweepResult, compare, crossover, run_sweep
from .wing import (
    ArSample,
    FoilGeometry,
    RatioCurve,
    builtin_drag_ratio,
    builtin_lift_ratio,
    corrected_coefficients,
    evaluate_ratio,
    fit_ratio_curve,
    foil_forces,
    richardson_extrapolate,
)

__version__ = "0.1.0"

__all__ = [
    "ArSample",
    "EquilibriumState",
    "Flag",
    "FoilGeometry",
    "HullSample",
    "HullSurfaceSet",
    "KNOT",
    "PolarTable",
    "RatioCurve",
    "SolverTolerances",
    "SweepRequest",
    "SweepResult",
    "YachtConfig",
    "bare_hull_resistance",
    "builtin_drag_ratio",
    "builtin_lift_ratio",
    "compare",
    "corrected_coefficients",
    "crossover",
    "efficiency",
    "evaluate",
    "evaluate_ratio",
    "fit_ratio_curve",
    "fit_surfaces",
    "foil_forces",
    "froude_number",
    "interpolate",
    "parse_polar",
    "richardson_extrapolate",
    "run_sweep",
    "solve_equilibrium",
]
