"""
Run configuration: flat ``key = value`` text with ``#`` comments and dotted
keys for nested groups, e.g.::

    hull_file = hull.txt
    lwl_m = 9.15
    total_displacement_kg = 1500
    target_displacement_kg = 500
    polar_file = naca4412.txt
    main_foil.chord_m = 0.20
    main_foil.span_m = 0.60
    main_foil.element_count = 2
    main_foil.alpha_min_deg = -2
    main_foil.alpha_max_deg = 6
    rudder_foil.chord_m = 0.05
    rudder_foil.span_m = 0.20
    rudder_foil.element_count = 2
    rudder_foil.x_position_m = -4.5
    rudder_foil.alpha_min_deg = -6
    rudder_foil.alpha_max_deg = 6
    speed.min_kn = 3
    speed.max_kn = 9
    speed.step_kn = 0.25

Relative file paths resolve against the directory of the config file.
"""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path

from .equilibrium import SolverTolerances, YachtConfig
from .errors import ConfigError
from .hull import GRAVITY, fit_surfaces, load_hull_samples, load_surfaces
from .polar import load_polar
from .sweep import speed_grid
from .wing import DEFAULT_INTERFERENCE_EFFICIENCY, FoilGeometry, builtin_drag_ratio, builtin_lift_ratio, load_ratio_curve

_FOIL_KEYS = {"polar_file", "chord_m", "span_m", "element_count", "x_position_m", "alpha_min_deg", "alpha_max_deg"}
_KNOWN = {
    "label",
    "hull_file",
    "surfaces_file",
    "lwl_m",
    "polar_file",
    "total_displacement_kg",
    "target_displacement_kg",
    "water_density_kgm3",
    "gravity_ms2",
    "interference_efficiency",
    "lift_ratio_file",
    "drag_ratio_file",
    "speed.min_kn",
    "speed.max_kn",
    "speed.step_kn",
    "tolerance.angle_deg",
    "tolerance.displacement_kg",
    "tolerance.force_n",
    "tolerance.moment_nm",
    "tolerance.max_iter",
} | {f"{foil}.{k}" for foil in ("main_foil", "rudder_foil") for k in _FOIL_KEYS}


def parse_kv(text: str) -> dict[str, str]:
    out = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        key, sep, value = line.partition("=")
        key, value = key.strip(), value.strip()
        if not sep or not key:
            raise ConfigError(f"line {lineno}: expected 'key = value', got {raw.strip()!r}")
        if key not in _KNOWN:
            raise ConfigError(f"line {lineno}: unknown key {key!r}")
        if key in out:
            raise ConfigError(f"line {lineno}: duplicate key {key!r}")
        out[key] = value
    return out


@dataclass(frozen=True)
class RunConfig:
    yacht: YachtConfig
    label: str
    speeds: tuple[float, ...] | None
    tolerances: SolverTolerances


class _Reader:
    def __init__(self, kv: dict[str, str], base: Path):
        self.kv = kv
        self.base = base

    def number(self, key, default=None, cast=float):
        if key not in self.kv:
            if default is None:
                raise ConfigError(f"missing required key {key!r}")
            return default
        try:
            return cast(self.kv[key])
        except ValueError:
            raise ConfigError(f"{key}: not a valid number: {self.kv[key]!r}") from None

    def path(self, key, fallback=None):
        value = self.kv.get(key) or (self.kv.get(fallback) if fallback else None)
        if value is None:
            return None
        p = Path(value)
        return p if p.is_absolute() else self.base / p


def _foil(r: _Reader, prefix: str, default_x: float | None) -> FoilGeometry:
    polar_path = r.path(f"{prefix}.polar_file", "polar_file")
    if polar_path is None:
        raise ConfigError(f"no polar file for {prefix} (set {prefix}.polar_file or polar_file)")
    return FoilGeometry(
        chord=r.number(f"{prefix}.chord_m"),
        span=r.number(f"{prefix}.span_m"),
        section=load_polar(polar_path),
        alpha_min=r.number(f"{prefix}.alpha_min_deg"),
        alpha_max=r.number(f"{prefix}.alpha_max_deg"),
        element_count=r.number(f"{prefix}.element_count", 1, int),
        x_position=r.number(f"{prefix}.x_position_m", default_x),
    )


def load_run_config(path: str | Path) -> RunConfig:
    """Read and validate a run config; data files are loaded eagerly."""
    path = Path(path)
    r = _Reader(parse_kv(path.read_text()), path.parent)

    surfaces_path, hull_path = r.path("surfaces_file"), r.path("hull_file")
    if surfaces_path is not None:
        surfaces = load_surfaces(surfaces_path)
    elif hull_path is not None:
        surfaces = fit_surfaces(load_hull_samples(hull_path), r.number("lwl_m"))
    else:
        raise ConfigError("set hull_file (with lwl_m) or surfaces_file")

    lift_path, drag_path = r.path("lift_ratio_file"), r.path("drag_ratio_file")
    yacht = YachtConfig(
        total_displacement=r.number("total_displacement_kg"),
        target_displacement=r.number("target_displacement_kg"),
        main_foil=_foil(r, "main_foil", 0.0),
        rudder_foil=_foil(r, "rudder_foil", None),
        surfaces=surfaces,
        water_density=r.number("water_density_kgm3", 1025.0),
        gravity=r.number("gravity_ms2", GRAVITY),
        interference_efficiency=r.number("interference_efficiency", DEFAULT_INTERFERENCE_EFFICIENCY),
        lift_curve=load_ratio_curve(lift_path) if lift_path else builtin_lift_ratio(),
        drag_curve=load_ratio_curve(drag_path) if drag_path else builtin_drag_ratio(),
    )

    speeds = None
    if any(k.startswith("speed.") for k in r.kv):
        speeds = tuple(speed_grid(r.number("speed.min_kn"), r.number("speed.max_kn"), r.number("speed.step_kn")))

    defaults = SolverTolerances()
    tolerances = SolverTolerances(
        angle=r.number("tolerance.angle_deg", defaults.angle),
        displacement=r.number("tolerance.displacement_kg", defaults.displacement),
        force=r.number("tolerance.force_n", defaults.force),
        moment=r.number("tolerance.moment_nm", defaults.moment),
        max_iter=r.number("tolerance.max_iter", defaults.max_iter, int),
    )
    return RunConfig(yacht, r.kv.get("label", path.stem), speeds, tolerances)
