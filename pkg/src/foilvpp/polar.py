"""
2D foil-section polars: parsing, validation and piecewise-linear lookup.

A polar file is plain text. Lines starting with ``#`` are comments, the
first non-comment line may be the header ``alpha cl cd``, and every data
row holds whitespace-separated ``alpha cl cd`` values (extra columns, as in
wider section-solver dumps, are ignored). Angles are in degrees.
"""

from __future__ import annotations

import bisect
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, NamedTuple

from .errors import DuplicateAlpha, MalformedRow, OutOfRange, TooFewPoints

HEADER = ("alpha", "cl", "cd")


@dataclass(frozen=True)
class PolarPoint:
    alpha: float
    cl: float
    cd: float

    def __post_init__(self):
        for name in ("alpha", "cl", "cd"):
            object.__setattr__(self, name, float(getattr(self, name)))
        if not (math.isfinite(self.alpha) and abs(self.alpha) <= 90.0):
            raise MalformedRow(f"alpha must be finite with |alpha| <= 90, got {self.alpha!r}")
        if not math.isfinite(self.cl):
            raise MalformedRow(f"cl must be finite, got {self.cl!r}")
        if not (math.isfinite(self.cd) and self.cd > 0.0):
            raise MalformedRow(f"cd must be positive, got {self.cd!r} at alpha={self.alpha:g}")


class Coefficients(NamedTuple):
    cl: float
    cd: float


@dataclass(frozen=True)
class PolarTable:
    """Immutable, alpha-sorted polar of one section.

    Construct through :func:`make_polar` or :func:`parse_polar` when the
    input may be unsorted; the constructor itself only validates.
    """

    points: tuple[PolarPoint, ...]
    section_name: str = ""
    _alpha: tuple[float, ...] = field(init=False, repr=False, compare=False)
    _cl: tuple[float, ...] = field(init=False, repr=False, compare=False)
    _cd: tuple[float, ...] = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        pts = tuple(self.points)
        if len(pts) < 3:
            raise TooFewPoints(f"a polar needs at least 3 points, got {len(pts)}")
        for prev, cur in zip(pts, pts[1:]):
            if cur.alpha == prev.alpha:
                raise DuplicateAlpha(f"duplicate alpha {cur.alpha:g}")
            if cur.alpha < prev.alpha:
                raise ValueError("polar points must be strictly increasing in alpha")
        object.__setattr__(self, "points", pts)
        object.__setattr__(self, "_alpha", tuple(p.alpha for p in pts))
        object.__setattr__(self, "_cl", tuple(p.cl for p in pts))
        object.__setattr__(self, "_cd", tuple(p.cd for p in pts))

    @property
    def alpha_range(self) -> tuple[float, float]:
        return self._alpha[0], self._alpha[-1]

    @property
    def alphas(self) -> tuple[float, ...]:
        return self._alpha

    def __len__(self):
        return len(self.points)


def make_polar(points: Iterable[PolarPoint | tuple], section_name: str = "") -> PolarTable:
    """Sort ``points`` by alpha and build a validated table."""
    pts = [p if isinstance(p, PolarPoint) else PolarPoint(*map(float, p)) for p in points]
    pts.sort(key=lambda p: p.alpha)
    return PolarTable(tuple(pts), section_name)


def parse_polar(text: str | Iterable[str], section_name: str = "") -> PolarTable:
    """Parse polar text (a string or an iterable of lines).

    Raises:
        MalformedRow: a data row has fewer than three fields or a
            non-numeric value.
        DuplicateAlpha: two rows share the same angle.
        TooFewPoints: fewer than three data rows.
    """
    lines = text.splitlines() if isinstance(text, str) else text
    points = []
    seen_data = False
    for lineno, raw in enumerate(lines, start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        fields = line.split()
        if not seen_data and [f.lower() for f in fields[:3]] == list(HEADER):
            seen_data = True
            continue
        seen_data = True
        if len(fields) < 3:
            raise MalformedRow(f"line {lineno}: expected 'alpha cl cd', got {line!r}")
        try:
            alpha, cl, cd = (float(f) for f in fields[:3])
        except ValueError:
            raise MalformedRow(f"line {lineno}: non-numeric field in {line!r}") from None
        try:
            points.append(PolarPoint(alpha, cl, cd))
        except MalformedRow as exc:
            raise MalformedRow(f"line {lineno}: {exc}") from None
    if len(points) < 3:
        raise TooFewPoints(f"a polar needs at least 3 points, got {len(points)}")
    points.sort(key=lambda p: p.alpha)
    for prev, cur in zip(points, points[1:]):
        if cur.alpha == prev.alpha:
            raise DuplicateAlpha(f"duplicate alpha {cur.alpha:g}")
    return PolarTable(tuple(points), section_name)


def load_polar(path: str | Path) -> PolarTable:
    path = Path(path)
    return parse_polar(path.read_text(), section_name=path.stem)


def format_polar(table: PolarTable) -> str:
    """Serialize with round-trip exact floats."""
    out = []
    if table.section_name:
        out.append(f"# {table.section_name}")
    out.append(" ".join(HEADER))
    for p in table.points:
        out.append(f"{p.alpha!r} {p.cl!r} {p.cd!r}")
    return "\n".join(out) + "\n"


def _segment(table: PolarTable, alpha: float) -> tuple[int, float]:
    """Return (left knot index, weight of the right knot) for ``alpha``."""
    a = table._alpha
    if not (a[0] <= alpha <= a[-1]):
        raise OutOfRange(alpha, (a[0], a[-1]))
    i = bisect.bisect_right(a, alpha) - 1
    if i >= len(a) - 1:
        return len(a) - 2, 1.0
    if alpha == a[i]:
        return i, 0.0
    return i, (alpha - a[i]) / (a[i + 1] - a[i])


def interpolate(table: PolarTable, alpha: float) -> Coefficients:
    """Linearly interpolate cl and cd at ``alpha`` (degrees); exact at knots."""
    i, t = _segment(table, alpha)
    cl, cd = table._cl, table._cd
    if t == 0.0:
        return Coefficients(cl[i], cd[i])
    if t == 1.0:
        return Coefficients(cl[i + 1], cd[i + 1])
    return Coefficients(cl[i] + t * (cl[i + 1] - cl[i]), cd[i] + t * (cd[i + 1] - cd[i]))


def efficiency(table: PolarTable, alpha: float) -> float:
    """Lift-to-drag ratio cl/cd at ``alpha``."""
    cl, cd = interpolate(table, alpha)
    return cl / cd


def min_drag_alpha(table: PolarTable, lo: float, hi: float) -> float:
    """Angle in ``[lo, hi]`` with the smallest interpolated cd.

    cd is piecewise linear, so the minimum sits on a knot or an end point.
    Ties go to the smallest angle.
    """
    candidates = [lo] + [a for a in table._alpha if lo < a < hi] + [hi]
    best = lo
    best_cd = interpolate(table, lo).cd
    for a in candidates[1:]:
        cd = interpolate(table, a).cd
        if cd < best_cd:
            best, best_cd = a, cd
    return best
