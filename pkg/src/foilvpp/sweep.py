"""Resistance curves over a speed range and comparison between foil sets."""

from __future__ import annotations

import io
import math
from dataclasses import dataclass, field
from typing import Sequence

from .equilibrium import (
    EquilibriumState,
    SolverTolerances,
    YachtConfig,
    bare_hull_resistance,
    solve_equilibrium,
)
from .errors import MismatchedSpeedGrids, NoVerticalBalance
from .hull import KNOT, check_speed

NO_VERTICAL_BALANCE = "NoVerticalBalance"

SWEEP_COLUMNS = (
    "speed_kn",
    "bare_rx_n",
    "total_rx_n",
    "delta_percent",
    "residual_displacement_kg",
    "alpha_main_deg",
    "alpha_rudder_deg",
    "hull_rx_n",
    "main_drag_n",
    "rudder_drag_n",
    "flags",
)


def speed_grid(min_kn: float, max_kn: float, step_kn: float) -> list[float]:
    """Speeds in m/s from a knot range, both ends included."""
    if not step_kn > 0 or max_kn < min_kn:
        raise ValueError(f"bad speed range {min_kn!r}..{max_kn!r} step {step_kn!r}")
    n = int(math.floor((max_kn - min_kn) / step_kn + 1e-9))
    return [(min_kn + i * step_kn) * KNOT for i in range(n + 1)]


@dataclass(frozen=True)
class SweepRequest:
    config: YachtConfig
    speeds: tuple[float, ...]
    label: str = "foils"

    def __post_init__(self):
        speeds = tuple(float(v) for v in self.speeds)
        if not speeds:
            raise ValueError("empty speed list")
        if any(b <= a for a, b in zip(speeds, speeds[1:])):
            raise ValueError("speeds must be strictly increasing")
        object.__setattr__(self, "speeds", speeds)


@dataclass(frozen=True)
class SweepRecord:
    speed: float
    state: EquilibriumState | None
    bare_rx: float
    delta_percent: float
    flags: frozenset = frozenset()

    @property
    def ok(self) -> bool:
        return self.state is not None and self.state.converged


@dataclass(frozen=True)
class SweepResult:
    label: str
    records: tuple[SweepRecord, ...]
    crossover_speeds: tuple[float, ...] = field(default=())

    @property
    def speeds(self) -> tuple[float, ...]:
        return tuple(r.speed for r in self.records)


def run_sweep(request: SweepRequest, tolerances: SolverTolerances | None = None) -> SweepResult:
    """Solve every speed of ``request``.

    Points without vertical balance or without convergence are kept, with
    their flags, and left out of crossover detection.
    """
    for v in request.speeds:
        check_speed(request.config.surfaces, v)
    records = []
    for v in request.speeds:
        bare = bare_hull_resistance(request.config, v)
        try:
            state = solve_equilibrium(request.config, v, tolerances)
        except NoVerticalBalance:
            records.append(SweepRecord(v, None, bare, math.nan, frozenset({NO_VERTICAL_BALANCE})))
            continue
        delta = 100.0 * (state.total_resistance - bare) / bare
        records.append(SweepRecord(v, state, bare, delta, frozenset(str(f) for f in state.flags)))
    partial = SweepResult(request.label, tuple(records))
    return SweepResult(request.label, partial.records, tuple(crossover(partial)))


def crossover(result: SweepResult) -> list[float]:
    """Speeds where ``delta_percent`` changes sign, by linear interpolation
    between neighbouring valid points."""
    pts = [(r.speed, r.delta_percent) for r in result.records if r.ok]
    out = []
    for i, (v, d) in enumerate(pts):
        if d == 0.0:
            before = next((x for _, x in reversed(pts[:i]) if x != 0.0), 0.0)
            after = next((x for _, x in pts[i + 1 :] if x != 0.0), 0.0)
            if before * after < 0.0 and (i == 0 or pts[i - 1][1] != 0.0):
                out.append(v)
            continue
        if i + 1 < len(pts):
            v2, d2 = pts[i + 1]
            if d * d2 < 0.0:
                out.append(v + (v2 - v) * d / (d - d2))
    return out


@dataclass(frozen=True)
class Comparison:
    labels: tuple[str, ...]
    speeds: tuple[float, ...]
    resistance: tuple[tuple[float, ...], ...]  # [speed][label]
    best: tuple[str, ...]


def compare(results: Sequence[SweepResult]) -> Comparison:
    """Total resistance per speed and label, plus the label with the lowest
    resistance at each speed (ties go to the earlier label)."""
    if not results:
        raise ValueError("nothing to compare")
    speeds = results[0].speeds
    for r in results[1:]:
        if r.speeds != speeds:
            raise MismatchedSpeedGrids(f"sweep {r.label!r} does not share the speed grid of {results[0].label!r}")
    rows, best = [], []
    for i in range(len(speeds)):
        row = tuple(
            r.records[i].state.total_resistance if r.records[i].ok else math.nan for r in results
        )
        rows.append(row)
        valid = [(x, j) for j, x in enumerate(row) if not math.isnan(x)]
        best.append(results[min(valid)[1]].label if valid else "")
    return Comparison(tuple(r.label for r in results), speeds, tuple(rows), tuple(best))


# --- CSV ------------------------------------------------------------------------


def fmt(x: float) -> str:
    return f"{x:.9g}"


def sweep_csv(result: SweepResult) -> str:
    buf = io.StringIO()
    buf.write(",".join(SWEEP_COLUMNS) + "\n")
    nan = math.nan
    for r in result.records:
        s = r.state
        values = [r.speed / KNOT, r.bare_rx]
        if s is None:
            values += [nan] * 8
        else:
            values += [
                s.total_resistance,
                r.delta_percent,
                s.residual_displacement,
                s.alpha_main,
                s.alpha_rudder,
                s.hull_rx,
                s.main_drag,
                s.rudder_drag,
            ]
        buf.write(",".join(fmt(x) for x in values) + "," + "|".join(sorted(r.flags)) + "\n")
    for v in result.crossover_speeds:
        buf.write(f"# crossover_speed_kn={fmt(v / KNOT)}\n")
    return buf.getvalue()


def comparison_csv(table: Comparison) -> str:
    buf = io.StringIO()
    buf.write(",".join(["speed_kn"] + [f"{lab}_rx_n" for lab in table.labels] + ["best_label"]) + "\n")
    for v, row, best in zip(table.speeds, table.resistance, table.best):
        buf.write(",".join([fmt(v / KNOT)] + [fmt(x) for x in row] + [best]) + "\n")
    return buf.getvalue()
