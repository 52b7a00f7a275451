"""
Vertical-force / pitch-moment equilibrium of a foil-assisted hull at one speed.

The main foil sits at the centre of gravity and only lifts; the rudder foil
sits aft on a lever arm and trims out the hull pitch moment. At a given
speed the solver

1. evaluates hull forces at the working displacement (initially the target),
2. finds the rudder pitch that cancels the hull pitch moment,
3. finds the main-foil pitch whose lift carries the weight not supported by
   buoyancy, hull lift and rudder lift,
4. if the main foil cannot reach that lift inside its pitch limits, clamps it
   and solves for the displacement that restores vertical balance (the
   rudder is re-trimmed at every trial displacement),
5. adds foil drags to hull resistance.

Lift is taken as purely vertical and drag as purely longitudinal.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from typing import Callable

from . import hull as _hull
from . import polar as _polar
from .errors import NoVerticalBalance
from .hull import GRAVITY, HullSurfaceSet
from .wing import (
    DEFAULT_INTERFERENCE_EFFICIENCY,
    FoilGeometry,
    RatioCurve,
    builtin_drag_ratio,
    builtin_lift_ratio,
    evaluate_ratio,
    interference_factors,
)


class Flag(str, Enum):
    MAIN_FOIL_SATURATED = "MainFoilSaturated"
    RUDDER_SATURATED = "RudderSaturated"
    EXTRAPOLATED = "Extrapolated"
    NOT_CONVERGED = "NotConverged"

    def __str__(self):
        return self.value


@dataclass(frozen=True)
class SolverTolerances:
    angle: float = 1e-3  # deg
    displacement: float = 0.01  # kg
    force: float = 0.5  # N
    moment: float = 0.5  # N m
    max_iter: int = 50  # bisection steps per bracket


@dataclass(frozen=True)
class YachtConfig:
    total_displacement: float
    target_displacement: float
    main_foil: FoilGeometry
    rudder_foil: FoilGeometry
    surfaces: HullSurfaceSet
    water_density: float = 1025.0
    gravity: float = GRAVITY
    interference_efficiency: float = DEFAULT_INTERFERENCE_EFFICIENCY
    lift_curve: RatioCurve = field(default_factory=builtin_lift_ratio)
    drag_curve: RatioCurve = field(default_factory=builtin_drag_ratio)

    def __post_init__(self):
        if not 0 <= self.target_displacement <= self.total_displacement:
            raise ValueError(
                f"need 0 <= target ({self.target_displacement!r}) <= total ({self.total_displacement!r})"
            )
        if self.main_foil.x_position != 0:
            raise ValueError("main foil must sit at the centre of gravity (x_position = 0)")
        if self.rudder_foil.x_position == 0:
            raise ValueError("rudder foil needs a non-zero lever arm")
        if not (self.water_density > 0 and self.gravity > 0):
            raise ValueError("water_density and gravity must be positive")
        interference_factors(self.interference_efficiency)


@dataclass(frozen=True)
class EquilibriumState:
    speed: float
    alpha_main: float
    alpha_rudder: float
    residual_displacement: float
    hull_rx: float
    main_drag: float
    rudder_drag: float
    total_resistance: float
    vertical_residual: float
    moment_residual: float
    flags: frozenset = frozenset()
    main_lift: float = 0.0
    rudder_lift: float = 0.0
    hull_fz: float = 0.0
    hull_my: float = 0.0

    @property
    def converged(self) -> bool:
        return Flag.NOT_CONVERGED not in self.flags


class _Foil:
    """Lift/drag of one assembly at a fixed speed, as functions of pitch.

    Arithmetic mirrors ``wing.foil_forces`` so results agree bit for bit.
    """

    def __init__(self, geom: FoilGeometry, config: YachtConfig, speed: float):
        self.geom = geom
        ar = geom.aspect_ratio
        kl, kd = interference_factors(config.interference_efficiency)
        self._rl, self._kl = evaluate_ratio(config.lift_curve, ar), kl
        self._rd, self._kd = evaluate_ratio(config.drag_curve, ar), kd
        self._qs = 0.5 * config.water_density * speed * speed * geom.area

    def lift(self, alpha: float) -> float:
        cl = _polar.interpolate(self.geom.section, alpha).cl
        return self._qs * (cl * self._rl * self._kl)

    def drag(self, alpha: float) -> float:
        cd = _polar.interpolate(self.geom.section, alpha).cd
        return self._qs * (cd * self._rd * self._kd)

    def min_drag_alpha(self) -> float:
        return _polar.min_drag_alpha(self.geom.section, self.geom.alpha_min, self.geom.alpha_max)


def _bracket(func: Callable[[float], float], lo: float, hi: float, xtol: float, ftol: float, max_iter: int):
    """Bisection on ``[lo, hi]``.

    Returns ``(x, status)`` where status is ``"root"``, ``"flat"`` (|f| within
    ``ftol`` at both ends, ``x`` is None), ``"clamped"`` (no sign change, ``x``
    is the end with the smaller |f|) or ``"stalled"`` (iteration cap hit).
    """
    f_lo, f_hi = func(lo), func(hi)
    if abs(f_lo) <= ftol and abs(f_hi) <= ftol and lo != hi:
        return None, "flat"
    if f_lo == 0.0 or (lo == hi and abs(f_lo) <= ftol):
        return lo, "root"
    if f_hi == 0.0:
        return hi, "root"
    if (f_lo < 0.0) == (f_hi < 0.0):
        return (lo if abs(f_lo) <= abs(f_hi) else hi), "clamped"
    best, best_f = (lo, f_lo) if abs(f_lo) <= abs(f_hi) else (hi, f_hi)
    for _ in range(max_iter):
        mid = 0.5 * (lo + hi)
        f_mid = func(mid)
        if abs(f_mid) < abs(best_f):
            best, best_f = mid, f_mid
        if f_mid == 0.0 or (hi - lo <= 2 * xtol and abs(f_mid) <= ftol):
            return mid, "root"
        if (f_mid < 0.0) == (f_lo < 0.0):
            lo, f_lo = mid, f_mid
        else:
            hi = mid
    return best, "stalled"


def solve_equilibrium(
    config: YachtConfig, speed: float, tolerances: SolverTolerances | None = None
) -> EquilibriumState:
    """Solve foil pitches and residual displacement at ``speed`` m/s.

    Raises:
        OutOfDomain: ``speed`` outside the hull data.
        NoVerticalBalance: no displacement between the target and the
            total displacement (or between 0 and the target, when the
            foils over-lift at their lower pitch limit) balances the weight.
    """
    tol = tolerances or SolverTolerances()
    _hull.check_speed(config.surfaces, speed)
    g = config.gravity
    total = config.total_displacement
    main = _Foil(config.main_foil, config, speed)
    rudder = _Foil(config.rudder_foil, config, speed)
    x_r = config.rudder_foil.x_position
    flags = set()

    def trim_rudder(my: float):
        """Rudder pitch cancelling ``my``; returns (alpha, lift, saturated, ok)."""
        geom = config.rudder_foil
        alpha, status = _bracket(
            lambda a: rudder.lift(a) * x_r + my, geom.alpha_min, geom.alpha_max, tol.angle, tol.moment, tol.max_iter
        )
        if status == "flat":
            alpha = rudder.min_drag_alpha()
        return alpha, rudder.lift(alpha), status == "clamped", status != "stalled"

    def required_lift(disp: float):
        forces = _hull.evaluate(config.surfaces, speed, disp)
        alpha_r, lift_r, _, _ = trim_rudder(forces.my)
        return g * (total - disp) - forces.fz - lift_r

    disp = config.target_displacement
    forces = _hull.evaluate(config.surfaces, speed, disp)
    alpha_r, lift_r, rudder_sat, rudder_ok = trim_rudder(forces.my)
    f_req = g * (total - disp) - forces.fz - lift_r

    geom = config.main_foil
    alpha_m, status = _bracket(
        lambda a: main.lift(a) - f_req, geom.alpha_min, geom.alpha_max, tol.angle, tol.force, tol.max_iter
    )
    converged = status != "stalled"
    if status == "flat":
        alpha_m = main.min_drag_alpha()
    elif status == "clamped":
        flags.add(Flag.MAIN_FOIL_SATURATED)
        lift_m = main.lift(alpha_m)
        if f_req > lift_m:
            lo, hi = config.target_displacement, total
        else:
            lo, hi = 0.0, config.target_displacement
        new_disp, d_status = _bracket(
            lambda d: required_lift(d) - lift_m, lo, hi, tol.displacement, tol.force, tol.max_iter
        )
        if d_status == "flat":
            new_disp = config.target_displacement
        elif d_status == "clamped":
            raise NoVerticalBalance(
                f"no displacement in [{lo:g}, {hi:g}] kg balances the weight at {speed:g} m/s "
                f"with the main foil clamped at {alpha_m:g} deg"
            )
        converged = converged and d_status != "stalled"
        disp = new_disp
        forces = _hull.evaluate(config.surfaces, speed, disp)
        alpha_r, lift_r, rudder_sat, rudder_ok = trim_rudder(forces.my)

    lift_m = main.lift(alpha_m)
    vertical = g * (total - disp) - forces.fz - lift_r - lift_m
    moment = lift_r * x_r + forces.my
    if rudder_sat:
        flags.add(Flag.RUDDER_SATURATED)
    if forces.extrapolated:
        flags.add(Flag.EXTRAPOLATED)
    if (
        not (converged and rudder_ok)
        or abs(vertical) > tol.force
        or (not rudder_sat and abs(moment) > tol.moment)
    ):
        flags.add(Flag.NOT_CONVERGED)

    main_drag = main.drag(alpha_m)
    rudder_drag = rudder.drag(alpha_r)
    return EquilibriumState(
        speed=speed,
        alpha_main=alpha_m,
        alpha_rudder=alpha_r,
        residual_displacement=disp,
        hull_rx=forces.rx,
        main_drag=main_drag,
        rudder_drag=rudder_drag,
        total_resistance=forces.rx + main_drag + rudder_drag,
        vertical_residual=vertical,
        moment_residual=moment,
        flags=frozenset(flags),
        main_lift=lift_m,
        rudder_lift=lift_r,
        hull_fz=forces.fz,
        hull_my=forces.my,
    )


def bare_hull_resistance(config: YachtConfig, speed: float) -> float:
    """Resistance of the hull without foils at full displacement."""
    return _hull.evaluate(config.surfaces, speed, config.total_displacement).rx
