"""
Command-line front end.

Exit codes: 0 ok, 2 bad input (parse errors, missing files, values outside
the data domain), 3 rank-deficient fit, 4 non-monotone convergence
sequence, 5 no vertical balance, 6 solver did not converge (report still
written), 7 mismatched speed grids in ``compare``.
"""

from __future__ import annotations

import argparse
import os
import sys
import tempfile
from pathlib import Path

from . import hull, sweep, wing
from .config import load_run_config
from .equilibrium import bare_hull_resistance, solve_equilibrium
from .errors import (
    FoilVppError,
    MalformedRow,
    MismatchedSpeedGrids,
    NonGeometricSequence,
    NonMonotoneSequence,
    NoVerticalBalance,
    RankDeficient,
    ZeroDifference,
)
from .hull import KNOT

EXIT_OK = 0
EXIT_INPUT = 2
EXIT_RANK = 3
EXIT_NON_MONOTONE = 4
EXIT_NO_BALANCE = 5
EXIT_NOT_CONVERGED = 6
EXIT_MISMATCHED = 7

fmt = sweep.fmt


def _write(text: str, out: str | None) -> None:
    """Write ``text`` to stdout or atomically to ``out``."""
    if out is None:
        sys.stdout.write(text)
        return
    target = Path(out)
    fd, tmp = tempfile.mkstemp(dir=target.parent or ".", prefix=f".{target.name}.", suffix=".tmp")
    try:
        with os.fdopen(fd, "w", newline="") as fh:
            fh.write(text)
        os.replace(tmp, target)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def cmd_fit_hull(args) -> int:
    surfaces = hull.fit_surfaces(hull.load_hull_samples(args.hull_file), args.lwl)
    dom = surfaces.fit_domain
    lines = [
        f"domain speed_kn [{fmt(dom.v_min / KNOT)}, {fmt(dom.v_max / KNOT)}]"
        f" displacement_kg [{fmt(dom.d_min)}, {fmt(dom.d_max)}]",
        f"froude [{fmt(hull.froude_number(surfaces, dom.v_min))}, {fmt(hull.froude_number(surfaces, dom.v_max))}]",
    ]
    for name in ("rx", "fz", "my"):
        surf = getattr(surfaces, f"{name}_surface")
        lines.append(f"{name} coefficients {' '.join(fmt(c) for c in surf.coefficients)} rms {fmt(surf.rms_residual)}")
    sys.stdout.write("\n".join(lines) + "\n")
    if args.output:
        _write(hull.format_surfaces(surfaces), args.output)
    return EXIT_OK


def cmd_ar_study(args) -> int:
    samples = sorted(wing.parse_ar_samples(Path(args.ar_file).read_text()), key=lambda s: s.ar)
    if len(samples) < 3:
        raise MalformedRow(f"need at least 3 AR samples, got {len(samples)}")
    coarse, medium, fine = samples[-3:]
    ratio = fine.ar / medium.ar
    if abs(medium.ar / coarse.ar - ratio) > 1e-9 * ratio:
        raise NonGeometricSequence(
            f"largest AR values {coarse.ar:g}, {medium.ar:g}, {fine.ar:g} are not a geometric sequence"
        )
    res = wing.richardson_extrapolate(coarse.value, medium.value, fine.value, ratio)
    lines = [
        f"refinement_ratio {fmt(ratio)}",
        f"order {fmt(res.order)}",
        f"asymptote {fmt(res.asymptote)}",
    ]
    distinct = len({s.ar for s in samples})
    degree = args.degree if args.degree is not None else min(6, distinct - 1)
    curve = wing.fit_ratio_curve(samples, res.asymptote, degree)
    lines.append("ratio_curve " + wing.format_ratio_curve(curve).strip())
    sys.stdout.write("\n".join(lines) + "\n")
    if args.output:
        _write(wing.format_ratio_curve(curve), args.output)
    return EXIT_OK


def _state_report(state, bare_rx: float) -> str:
    rows = [
        ("speed_kn", fmt(state.speed / KNOT)),
        ("alpha_main_deg", fmt(state.alpha_main)),
        ("alpha_rudder_deg", fmt(state.alpha_rudder)),
        ("residual_displacement_kg", fmt(state.residual_displacement)),
        ("hull_rx_n", fmt(state.hull_rx)),
        ("main_drag_n", fmt(state.main_drag)),
        ("rudder_drag_n", fmt(state.rudder_drag)),
        ("total_rx_n", fmt(state.total_resistance)),
        ("bare_rx_n", fmt(bare_rx)),
        ("delta_percent", fmt(100.0 * (state.total_resistance - bare_rx) / bare_rx)),
        ("vertical_residual_n", fmt(state.vertical_residual)),
        ("moment_residual_nm", fmt(state.moment_residual)),
        ("flags", "|".join(sorted(str(f) for f in state.flags))),
    ]
    return "".join(f"{k} = {v}\n" for k, v in rows)


def cmd_solve(args) -> int:
    run = load_run_config(args.config)
    speed = args.speed * KNOT
    state = solve_equilibrium(run.yacht, speed, run.tolerances)
    _write(_state_report(state, bare_hull_resistance(run.yacht, speed)), args.output)
    return EXIT_OK if state.converged else EXIT_NOT_CONVERGED


def _sweep_for(path) -> sweep.SweepResult:
    run = load_run_config(path)
    if run.speeds is None:
        raise MalformedRow(f"{path}: speed.min_kn / speed.max_kn / speed.step_kn are required for a sweep")
    return sweep.run_sweep(sweep.SweepRequest(run.yacht, run.speeds, run.label), run.tolerances)


def cmd_sweep(args) -> int:
    result = _sweep_for(args.config)
    _write(sweep.sweep_csv(result), args.output)
    return EXIT_OK


def cmd_compare(args) -> int:
    results = [_sweep_for(p) for p in args.configs]
    _write(sweep.comparison_csv(sweep.compare(results)), args.output)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="foilvpp", description="Resistance prediction for foil-assisted yachts.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("fit-hull", help="fit quadratic response surfaces to bare-hull data")
    p.add_argument("hull_file")
    p.add_argument("--lwl", type=float, required=True, help="waterline length [m]")
    p.add_argument("-o", "--output", help="write the fitted surfaces to this file")
    p.set_defaults(func=cmd_fit_hull)

    p = sub.add_parser("ar-study", help="Richardson extrapolation and ratio-curve fit of finite-wing samples")
    p.add_argument("ar_file")
    p.add_argument("--degree", type=int, help="ratio polynomial degree (default: min(6, samples-1))")
    p.add_argument("-o", "--output", help="write the fitted ratio curve to this file")
    p.set_defaults(func=cmd_ar_study)

    p = sub.add_parser("solve", help="equilibrium at a single speed")
    p.add_argument("config")
    p.add_argument("--speed", type=float, required=True, help="boat speed [kn]")
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("sweep", help="resistance curve over the configured speed range (CSV)")
    p.add_argument("config")
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("compare", help="compare several configurations on one speed grid (CSV)")
    p.add_argument("configs", nargs="+")
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_compare)
    return parser


_EXIT_CODES = (
    (RankDeficient, EXIT_RANK),
    ((NonMonotoneSequence, ZeroDifference), EXIT_NON_MONOTONE),
    (NoVerticalBalance, EXIT_NO_BALANCE),
    (MismatchedSpeedGrids, EXIT_MISMATCHED),
    ((FoilVppError, ValueError, OSError), EXIT_INPUT),
)


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (FoilVppError, ValueError, OSError) as exc:
        print(f"foilvpp: error: {exc}", file=sys.stderr)
        return next(code for kind, code in _EXIT_CODES if isinstance(exc, kind))


if __name__ == "__main__":
    sys.exit(main())
