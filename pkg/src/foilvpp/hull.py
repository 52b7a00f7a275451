"""
Bare-hull force data and quadratic response surfaces.

Each of resistance ``rx``, hydrodynamic vertical force ``fz`` and pitch
moment ``my`` (about the centre of gravity) is modelled as

    f(V, D) = a0 + a1*V + a2*D + a3*V**2 + a4*V*D + a5*D**2

with V in m/s and D the displacement in kg. Sample files carry speed in
knots; everything past the parser is SI.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from pathlib import Path
from typing import NamedTuple, Sequence

import numpy as np

from .errors import MalformedRow, OutOfDomain, RankDeficient, TooFewSamples

KNOT = 0.514444  # m/s
GRAVITY = 9.80665

SAMPLE_HEADER = ("speed_kn", "displacement_kg", "rx_n", "fz_n", "my_nm")


@dataclass(frozen=True)
class HullSample:
    speed: float
    displacement: float
    rx: float
    fz: float
    my: float

    def __post_init__(self):
        for name in ("speed", "displacement", "rx", "fz", "my"):
            object.__setattr__(self, name, float(getattr(self, name)))
        values = (self.speed, self.displacement, self.rx, self.fz, self.my)
        if not all(math.isfinite(v) for v in values):
            raise ValueError(f"non-finite hull sample {values!r}")
        if self.speed < 0 or self.displacement < 0:
            raise ValueError(f"speed and displacement must be non-negative, got {values[:2]!r}")


@dataclass(frozen=True)
class FitDomain:
    v_min: float
    v_max: float
    d_min: float
    d_max: float

    def __post_init__(self):
        for name in ("v_min", "v_max", "d_min", "d_max"):
            object.__setattr__(self, name, float(getattr(self, name)))
        if not (self.v_min < self.v_max and self.d_min < self.d_max):
            raise RankDeficient(f"degenerate fit domain {self!r}")


@dataclass(frozen=True)
class HullSurface:
    coefficients: tuple[float, float, float, float, float, float]
    fit_domain: FitDomain
    rms_residual: float = 0.0

    def __post_init__(self):
        coeffs = tuple(float(c) for c in self.coefficients)
        if len(coeffs) != 6:
            raise ValueError(f"a quadratic surface has 6 coefficients, got {len(coeffs)}")
        object.__setattr__(self, "coefficients", coeffs)
        object.__setattr__(self, "rms_residual", float(self.rms_residual))

    def __call__(self, speed, displacement):
        a0, a1, a2, a3, a4, a5 = self.coefficients
        v, d = speed, displacement
        return a0 + a1 * v + a2 * d + a3 * v * v + a4 * v * d + a5 * d * d


@dataclass(frozen=True)
class HullSurfaceSet:
    rx_surface: HullSurface
    fz_surface: HullSurface
    my_surface: HullSurface
    lwl: float

    def __post_init__(self):
        object.__setattr__(self, "lwl", float(self.lwl))
        dom = self.rx_surface.fit_domain
        if self.fz_surface.fit_domain != dom or self.my_surface.fit_domain != dom:
            raise ValueError("rx, fz and my surfaces must share one fit domain")

    @property
    def fit_domain(self) -> FitDomain:
        return self.rx_surface.fit_domain


class HullForces(NamedTuple):
    rx: float
    fz: float
    my: float
    extrapolated: bool = False


def _quadratic_basis(v: np.ndarray, d: np.ndarray) -> np.ndarray:
    return np.column_stack([np.ones_like(v), v, d, v * v, v * d, d * d])


def _to_raw(b: np.ndarray, vc: float, sv: float, dc: float, sd: float) -> tuple[float, ...]:
    """Expand coefficients in u=(V-vc)/sv, w=(D-dc)/sd back to raw V, D."""
    b0, b1, b2, b3, b4, b5 = b
    a3 = b3 / sv**2
    a4 = b4 / (sv * sd)
    a5 = b5 / sd**2
    a1 = b1 / sv - 2 * a3 * vc - a4 * dc
    a2 = b2 / sd - 2 * a5 * dc - a4 * vc
    a0 = b0 - b1 * vc / sv - b2 * dc / sd + a3 * vc**2 + a4 * vc * dc + a5 * dc**2
    return tuple(float(x) for x in (a0, a1, a2, a3, a4, a5))


def fit_surfaces(samples: Sequence[HullSample], lwl: float) -> HullSurfaceSet:
    """Least-squares quadratic surfaces for rx, fz and my.

    Raises:
        TooFewSamples: fewer than 6 samples.
        RankDeficient: the samples do not pin down a full quadratic (for
            instance all on one line, or fewer than 3 distinct speeds).
    """
    if len(samples) < 6:
        raise TooFewSamples(f"a quadratic surface needs at least 6 samples, got {len(samples)}")
    if not lwl > 0:
        raise ValueError(f"lwl must be positive, got {lwl!r}")
    v = np.array([s.speed for s in samples], dtype=float)
    d = np.array([s.displacement for s in samples], dtype=float)
    domain = FitDomain(float(v.min()), float(v.max()), float(d.min()), float(d.max()))

    vc, sv = 0.5 * (domain.v_min + domain.v_max), 0.5 * (domain.v_max - domain.v_min)
    dc, sd = 0.5 * (domain.d_min + domain.d_max), 0.5 * (domain.d_max - domain.d_min)
    basis = _quadratic_basis((v - vc) / sv, (d - dc) / sd)
    sv_ = np.linalg.svd(basis, compute_uv=False)
    if sv_[-1] <= 1e-10 * sv_[0]:
        raise RankDeficient("sample layout does not determine a quadratic in (speed, displacement)")

    surfaces = []
    for name in ("rx", "fz", "my"):
        y = np.array([getattr(s, name) for s in samples], dtype=float)
        b = np.linalg.lstsq(basis, y, rcond=None)[0]
        coeffs = _to_raw(b, vc, sv, dc, sd)
        fitted = HullSurface(coeffs, domain)
        resid = y - np.array([fitted(vi, di) for vi, di in zip(v, d)])
        surfaces.append(HullSurface(coeffs, domain, float(np.sqrt(np.mean(resid**2)))))
    return HullSurfaceSet(*surfaces, lwl=float(lwl))


def _check_range(quantity: str, value: float, lo: float, hi: float) -> None:
    slack = 1e-9 * (hi - lo)
    if not (lo - slack <= value <= hi + slack):
        raise OutOfDomain(quantity, value, (lo, hi))


def check_speed(surfaces: HullSurfaceSet, speed: float) -> None:
    dom = surfaces.fit_domain
    _check_range("speed", speed, dom.v_min, dom.v_max)


def evaluate(surfaces: HullSurfaceSet, speed: float, displacement: float) -> HullForces:
    """Hull forces at (speed m/s, displacement kg).

    A displacement of exactly 0 means the hull is clear of the water and
    returns zeros. Between 0 and the smallest fitted displacement the
    polynomial is extrapolated and ``extrapolated`` is set.

    Raises:
        OutOfDomain: speed outside the fitted range, or displacement
            negative or above the fitted maximum.
    """
    dom = surfaces.fit_domain
    _check_range("speed", speed, dom.v_min, dom.v_max)
    _check_range("displacement", displacement, 0.0, dom.d_max)
    if displacement <= 0.0:
        return HullForces(0.0, 0.0, 0.0, False)
    return HullForces(
        surfaces.rx_surface(speed, displacement),
        surfaces.fz_surface(speed, displacement),
        surfaces.my_surface(speed, displacement),
        displacement < dom.d_min,
    )


def froude_number(surfaces: HullSurfaceSet, speed: float) -> float:
    return speed / math.sqrt(GRAVITY * surfaces.lwl)


# --- file formats -------------------------------------------------------------


def parse_hull_samples(text: str) -> list[HullSample]:
    """Rows ``speed_kn displacement_kg rx_n fz_n my_nm``; speed converted to m/s."""
    samples = []
    first = True
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        fields = line.split()
        if first and tuple(f.lower() for f in fields) == SAMPLE_HEADER:
            first = False
            continue
        first = False
        if len(fields) != 5:
            raise MalformedRow(f"line {lineno}: expected 5 fields, got {len(fields)}")
        try:
            kn, disp, rx, fz, my = (float(f) for f in fields)
            samples.append(HullSample(kn * KNOT, disp, rx, fz, my))
        except ValueError as exc:
            raise MalformedRow(f"line {lineno}: {exc}") from None
    return samples


def format_hull_samples(samples: Sequence[HullSample]) -> str:
    out = [" ".join(SAMPLE_HEADER)]
    for s in samples:
        out.append(f"{s.speed / KNOT!r} {s.displacement!r} {s.rx!r} {s.fz!r} {s.my!r}")
    return "\n".join(out) + "\n"


def format_surfaces(surfaces: HullSurfaceSet) -> str:
    """Three coefficient lines (``a0..a5 rms``) and one domain line
    (``v_min_ms v_max_ms d_min_kg d_max_kg lwl_m``)."""
    dom = surfaces.fit_domain
    out = ["# quadratic response surfaces: a0 a1 a2 a3 a4 a5 rms  (V in m/s, D in kg)"]
    for name, surf in (("rx", surfaces.rx_surface), ("fz", surfaces.fz_surface), ("my", surfaces.my_surface)):
        out.append(f"# {name}")
        out.append(" ".join(repr(c) for c in surf.coefficients + (surf.rms_residual,)))
    out.append("# v_min_ms v_max_ms d_min_kg d_max_kg lwl_m")
    out.append(f"{dom.v_min!r} {dom.v_max!r} {dom.d_min!r} {dom.d_max!r} {surfaces.lwl!r}")
    return "\n".join(out) + "\n"


def parse_surfaces(text: str) -> HullSurfaceSet:
    rows = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        try:
            rows.append([float(f) for f in line.split()])
        except ValueError:
            raise MalformedRow(f"line {lineno}: non-numeric field") from None
    if len(rows) != 4 or any(len(r) not in (6, 7) for r in rows[:3]) or len(rows[3]) != 5:
        raise MalformedRow("surface file needs three coefficient lines and one domain line")
    *dom, lwl = rows[3]
    domain = FitDomain(*dom)
    surfs = [HullSurface(tuple(r[:6]), domain, r[6] if len(r) == 7 else 0.0) for r in rows[:3]]
    return HullSurfaceSet(*surfs, lwl=lwl)


def load_hull_samples(path: str | Path) -> list[HullSample]:
    return parse_hull_samples(Path(path).read_text())


def load_surfaces(path: str | Path) -> HullSurfaceSet:
    return parse_surfaces(Path(path).read_text())
