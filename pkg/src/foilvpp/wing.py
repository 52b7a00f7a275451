"""
Finite-span corrections for 2D section data.

Section coefficients are multiplied by empirical ratio curves of the form

    C/C_inf = 1 + c1/AR + c2/AR**2 + ... + cn/AR**n

with AR = span/chord of a single element, then knocked down for the
interference of the struts that carry the foil. The module also holds the
convergence-study helpers used to build such curves from finite-wing runs:
generalized Richardson extrapolation over a geometric AR sequence and a
fixed-intercept least-squares fit of the ratio polynomial.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, NamedTuple, Sequence

import numpy as np

from . import polar as _polar
from .errors import (
    MalformedRow,
    NonMonotoneSequence,
    NonPositiveAR,
    OutOfRange,
    RankDeficient,
    ZeroAsymptote,
    ZeroDifference,
)
from .polar import Coefficients, PolarTable

DEFAULT_INTERFERENCE_EFFICIENCY = 0.9

# NACA 4412 at 4 deg, RANSE sweep AR 2..48
_DRAG_RATIO_COEFFS = (-0.110, 217.261, -2742.862, 16343.289, -51940.417, 83982.370)
_LIFT_RATIO_COEFFS = (-0.239, -35.349, 340.353, -1461.250, 2927.150, -2191.410)


@dataclass(frozen=True)
class RatioCurve:
    """Coefficients ``c1..cn`` of ``1 + sum(c_k / AR**k)``."""

    coefficients: tuple[float, ...]

    def __post_init__(self):
        object.__setattr__(self, "coefficients", tuple(float(c) for c in self.coefficients))

    @property
    def degree(self) -> int:
        return len(self.coefficients)

    def __call__(self, ar: float) -> float:
        return evaluate_ratio(self, ar)


ZERO_CURVE = RatioCurve(())


def builtin_drag_ratio() -> RatioCurve:
    return RatioCurve(_DRAG_RATIO_COEFFS)


def builtin_lift_ratio() -> RatioCurve:
    return RatioCurve(_LIFT_RATIO_COEFFS)


def evaluate_ratio(curve: RatioCurve, ar: float) -> float:
    if not ar > 0:
        raise NonPositiveAR(f"aspect ratio must be positive, got {ar!r}")
    x = 1.0 / ar
    # Horner in 1/AR
    acc = 0.0
    for c in reversed(curve.coefficients):
        acc = (acc + c) * x
    return 1.0 + acc


@dataclass(frozen=True)
class FoilGeometry:
    """One foil assembly.

    ``span`` is the span of a single element; the assembly area is
    ``chord * span * element_count``. An ``element_count`` of 0 describes an
    absent foil: coefficients are still defined but forces vanish.
    ``x_position`` is measured from the centre of gravity, positive forward.
    """

    chord: float
    span: float
    section: PolarTable
    alpha_min: float
    alpha_max: float
    element_count: int = 1
    x_position: float = 0.0

    def __post_init__(self):
        if not (self.chord > 0 and self.span > 0):
            raise ValueError(f"chord and span must be positive, got {self.chord!r}, {self.span!r}")
        if int(self.element_count) != self.element_count or self.element_count < 0:
            raise ValueError(f"element_count must be a non-negative integer, got {self.element_count!r}")
        if not self.alpha_min < self.alpha_max:
            raise ValueError("alpha_min must be below alpha_max")
        lo, hi = self.section.alpha_range
        if self.alpha_min < lo or self.alpha_max > hi:
            raise OutOfRange(self.alpha_min if self.alpha_min < lo else self.alpha_max, (lo, hi))

    @property
    def aspect_ratio(self) -> float:
        return self.span / self.chord

    @property
    def area(self) -> float:
        return self.chord * self.span * self.element_count


class ForcePair(NamedTuple):
    lift: float
    drag: float


def interference_factors(interference_efficiency: float) -> tuple[float, float]:
    """(lift multiplier, drag multiplier) so that cl/cd drops by exactly
    ``interference_efficiency``; the penalty is split evenly as a square root.
    """
    if not 0.0 < interference_efficiency <= 1.0:
        raise ValueError(f"interference_efficiency must lie in (0, 1], got {interference_efficiency!r}")
    root = math.sqrt(interference_efficiency)
    return root, 1.0 / root


def corrected_coefficients(
    geom: FoilGeometry,
    alpha: float,
    interference_efficiency: float = DEFAULT_INTERFERENCE_EFFICIENCY,
    lift_curve: RatioCurve | None = None,
    drag_curve: RatioCurve | None = None,
) -> Coefficients:
    """Finite-span (cl, cd) of ``geom`` at ``alpha`` degrees."""
    if not geom.alpha_min <= alpha <= geom.alpha_max:
        raise OutOfRange(alpha, (geom.alpha_min, geom.alpha_max))
    lift_curve = builtin_lift_ratio() if lift_curve is None else lift_curve
    drag_curve = builtin_drag_ratio() if drag_curve is None else drag_curve
    ar = geom.aspect_ratio
    kl, kd = interference_factors(interference_efficiency)
    cl, cd = _polar.interpolate(geom.section, alpha)
    return Coefficients(cl * evaluate_ratio(lift_curve, ar) * kl, cd * evaluate_ratio(drag_curve, ar) * kd)


def foil_forces(
    geom: FoilGeometry,
    alpha: float,
    speed: float,
    rho: float = 1025.0,
    interference_efficiency: float = DEFAULT_INTERFERENCE_EFFICIENCY,
    lift_curve: RatioCurve | None = None,
    drag_curve: RatioCurve | None = None,
) -> ForcePair:
    """Lift and drag [N] of the whole assembly at ``speed`` m/s."""
    if speed < 0:
        raise ValueError(f"speed must be non-negative, got {speed!r}")
    if not rho > 0:
        raise ValueError(f"rho must be positive, got {rho!r}")
    cl, cd = corrected_coefficients(geom, alpha, interference_efficiency, lift_curve, drag_curve)
    qs = 0.5 * rho * speed * speed * geom.area
    return ForcePair(qs * cl, qs * cd)


# --- convergence study -------------------------------------------------------


@dataclass(frozen=True)
class ArSample:
    ar: float
    value: float

    def __post_init__(self):
        if not self.ar > 0:
            raise NonPositiveAR(f"aspect ratio must be positive, got {self.ar!r}")
        if not math.isfinite(self.value):
            raise ValueError(f"sample value must be finite, got {self.value!r}")


class RichardsonResult(NamedTuple):
    asymptote: float
    order: float


def richardson_extrapolate(
    f_coarse: float, f_medium: float, f_fine: float, refinement_ratio: float = 2.0
) -> RichardsonResult:
    """Observed order and extrapolated limit of a three-term sequence.

    ``p = log(|f1 - f2| / |f2 - f3|) / log(r)`` and
    ``f_inf = f3 + (f3 - f2) / (r**p - 1)``.

    Raises:
        ZeroDifference: two consecutive values coincide.
        NonMonotoneSequence: the differences change sign (oscillatory
            convergence, no order defined).
    """
    if not refinement_ratio > 1:
        raise ValueError(f"refinement_ratio must exceed 1, got {refinement_ratio!r}")
    d21 = f_coarse - f_medium
    d32 = f_medium - f_fine
    if d21 == 0 or d32 == 0:
        raise ZeroDifference("consecutive samples are equal; order undefined")
    if (d21 > 0) != (d32 > 0):
        raise NonMonotoneSequence(f"oscillating sequence {f_coarse!r}, {f_medium!r}, {f_fine!r}")
    order = math.log(abs(d21) / abs(d32)) / math.log(refinement_ratio)
    denom = refinement_ratio**order - 1.0
    if denom == 0:
        raise ZeroDifference("differences do not shrink; no finite asymptote")
    return RichardsonResult(f_fine + (f_fine - f_medium) / denom, order)


def fit_ratio_curve(samples: Sequence[ArSample], asymptote: float, degree: int = 6) -> RatioCurve:
    """Least-squares ratio polynomial through ``value/asymptote`` with the
    intercept pinned at 1.

    Raises:
        ZeroAsymptote: ``asymptote`` is zero.
        RankDeficient: fewer than ``degree + 1`` distinct aspect ratios, or a
            singular basis.
    """
    if asymptote == 0:
        raise ZeroAsymptote("cannot normalize by a zero asymptote")
    if not 1 <= degree <= 6:
        raise ValueError(f"degree must be in 1..6, got {degree!r}")
    ar = np.array([s.ar for s in samples], dtype=float)
    if len(np.unique(ar)) < degree + 1:
        raise RankDeficient(f"degree {degree} needs {degree + 1} distinct AR values, got {len(np.unique(ar))}")
    y = np.array([s.value for s in samples], dtype=float) / asymptote - 1.0

    # scale 1/AR to O(1) and normalize columns before solving
    s = ar.min()
    x = s / ar
    basis = np.column_stack([x**k for k in range(1, degree + 1)])
    norms = np.linalg.norm(basis, axis=0)
    sol, _, rank, _ = np.linalg.lstsq(basis / norms, y, rcond=None)
    if rank < degree:
        raise RankDeficient(f"basis rank {rank} < {degree}")
    coeffs = sol / norms * s ** np.arange(1, degree + 1)
    return RatioCurve(tuple(float(c) for c in coeffs))


# --- file formats -------------------------------------------------------------


def _data_rows(lines: Iterable[str]):
    for lineno, raw in enumerate(lines, start=1):
        line = raw.strip()
        if line and not line.startswith("#"):
            yield lineno, line.split()


def parse_ar_samples(text: str) -> list[ArSample]:
    """Rows of ``ar value``; ``#`` comments and an ``ar value`` header allowed."""
    samples = []
    for lineno, fields in _data_rows(text.splitlines()):
        if not samples and [f.lower() for f in fields[:2]] == ["ar", "value"]:
            continue
        if len(fields) < 2:
            raise MalformedRow(f"line {lineno}: expected 'ar value'")
        try:
            samples.append(ArSample(float(fields[0]), float(fields[1])))
        except ValueError as exc:
            raise MalformedRow(f"line {lineno}: {exc}") from None
    return samples


def format_ratio_curve(curve: RatioCurve) -> str:
    return " ".join(["1.0"] + [repr(c) for c in curve.coefficients]) + "\n"


def parse_ratio_curve(text: str) -> RatioCurve:
    rows = list(_data_rows(text.splitlines()))
    if len(rows) != 1:
        raise MalformedRow(f"ratio curve file must hold exactly one data line, got {len(rows)}")
    lineno, fields = rows[0]
    try:
        values = [float(f) for f in fields]
    except ValueError:
        raise MalformedRow(f"line {lineno}: non-numeric coefficient") from None
    if values[0] != 1.0:
        raise MalformedRow(f"line {lineno}: leading term must be 1.0, got {values[0]!r}")
    return RatioCurve(tuple(values[1:]))


def load_ratio_curve(path: str | Path) -> RatioCurve:
    return parse_ratio_curve(Path(path).read_text())
