import math

import pytest

from foilvpp.equilibrium import EquilibriumState, solve_equilibrium
from foilvpp.errors import MismatchedSpeedGrids, OutOfDomain
from foilvpp.hull import KNOT
from foilvpp.sweep import (
    SWEEP_COLUMNS,
    SweepRecord,
    SweepRequest,
    SweepResult,
    compare,
    comparison_csv,
    crossover,
    run_sweep,
    speed_grid,
    sweep_csv,
)

from oracles import crossover_config, crossover_state
from synth import DEFAULT_RX, hull_set, make_config


def fake_result(pairs, label="x"):
    records = []
    for kn, delta in pairs:
        state = EquilibriumState(kn * KNOT, 0, 0, 0, 0, 0, 0, 0, 0, 0)
        records.append(SweepRecord(kn * KNOT, state, 1.0, delta))
    return SweepResult(label, tuple(records))


def test_speed_grid():
    grid = speed_grid(3.0, 4.0, 0.25)
    assert [round(v / KNOT, 12) for v in grid] == [3.0, 3.25, 3.5, 3.75, 4.0]
    with pytest.raises(ValueError):
        speed_grid(3.0, 4.0, 0.0)


def test_crossover_midpoint():
    assert crossover(fake_result([(4.0, 10.0), (5.0, -10.0)])) == [pytest.approx(4.5 * KNOT, rel=1e-15)]


def test_crossover_none_when_one_sided():
    assert crossover(fake_result([(4.0, 10.0), (5.0, 3.0), (6.0, 0.5)])) == []
    assert crossover(fake_result([(4.0, 0.0), (5.0, 0.0)])) == []


def test_crossover_through_exact_zero_counted_once():
    got = crossover(fake_result([(4.0, 2.0), (5.0, 0.0), (6.0, -3.0)]))
    assert got == [5.0 * KNOT]
    assert crossover(fake_result([(4.0, 2.0), (5.0, 0.0), (6.0, 1.0)])) == []


def test_zero_area_sweep_is_baseline():
    surfaces = hull_set(DEFAULT_RX, my=(30.0, 0, 0, 0, 0, 0))
    cfg = make_config(surfaces, total=1500.0, target=1500.0, main_count=0, rudder_count=0)
    result = run_sweep(SweepRequest(cfg, speed_grid(2.0, 11.0, 0.5)))
    assert all(r.delta_percent == 0.0 for r in result.records)
    assert all(r.state.total_resistance == r.bare_rx for r in result.records)
    assert result.crossover_speeds == ()


@pytest.mark.parametrize("start", [3.0, 3.1])
def test_crossover_fixture(start):
    cfg, _ = crossover_config(5.0)
    result = run_sweep(SweepRequest(cfg, speed_grid(start, 10.0, 0.25)))
    assert len(result.crossover_speeds) == 1
    assert 4.9 <= result.crossover_speeds[0] / KNOT <= 5.1


def test_sweep_matches_closed_form():
    cfg, a4 = crossover_config(5.0)
    result = run_sweep(SweepRequest(cfg, speed_grid(3.0, 13.0, 0.5)))
    for r in result.records:
        disp, alpha, total, bare = crossover_state(r.speed, a4)
        assert r.state.residual_displacement == pytest.approx(disp, abs=0.02)
        assert r.state.alpha_main == pytest.approx(alpha, abs=2e-3)
        assert r.state.total_resistance == pytest.approx(total, abs=0.05)
        assert r.bare_rx == pytest.approx(bare, rel=1e-9)


def test_delta_percent_recomputes_exactly():
    cfg, _ = crossover_config(5.0)
    result = run_sweep(SweepRequest(cfg, speed_grid(3.0, 9.0, 0.5)))
    for r in result.records:
        assert r.delta_percent == 100.0 * (r.state.total_resistance - r.bare_rx) / r.bare_rx


def test_singleton_sweep_equals_solve():
    cfg, _ = crossover_config(5.0)
    v = 6.0 * KNOT
    result = run_sweep(SweepRequest(cfg, [v]))
    assert result.records[0].state == solve_equilibrium(cfg, v)


def test_sweep_rejects_bad_speed_lists():
    cfg, _ = crossover_config(5.0)
    with pytest.raises(ValueError):
        SweepRequest(cfg, [3.0, 2.0])
    with pytest.raises(OutOfDomain):
        run_sweep(SweepRequest(cfg, [1.0 * KNOT, 3.0 * KNOT]))


def test_unbalanced_points_are_recorded_not_fatal():
    surfaces = hull_set(DEFAULT_RX, fz=(-3000.0, 0, 0, 0, 0, 0))
    cfg = make_config(surfaces, total=1500.0, target=1000.0, main_chord=0.25, main_span=2.0)
    result = run_sweep(SweepRequest(cfg, speed_grid(2.0, 11.0, 1.0)))
    failed = [r for r in result.records if r.state is None]
    assert failed and all("NoVerticalBalance" in r.flags and math.isnan(r.delta_percent) for r in failed)
    assert any(r.state is not None for r in result.records)
    csv = sweep_csv(result)
    assert "nan" in csv and "NoVerticalBalance" in csv


def test_sweep_csv_layout():
    cfg, _ = crossover_config(5.0)
    result = run_sweep(SweepRequest(cfg, speed_grid(4.0, 6.0, 0.5)))
    text = sweep_csv(result)
    lines = text.splitlines()
    assert lines[0] == ",".join(SWEEP_COLUMNS)
    assert lines[0] == (
        "speed_kn,bare_rx_n,total_rx_n,delta_percent,residual_displacement_kg,"
        "alpha_main_deg,alpha_rudder_deg,hull_rx_n,main_drag_n,rudder_drag_n,flags"
    )
    first = lines[1].split(",")
    assert first[0] == "4" and first[-1] == "MainFoilSaturated"
    assert len(first[1].replace(".", "").lstrip("0")) <= 9
    assert lines[-1].startswith("# crossover_speed_kn=")
    assert sweep_csv(run_sweep(SweepRequest(cfg, speed_grid(4.0, 6.0, 0.5)))) == text


# --- compare ------------------------------------------------------------------------


def _sweeps():
    grid = speed_grid(3.0, 12.0, 0.5)
    small, _ = crossover_config(5.0)
    # same hull (a4 tuned for the smaller foil), larger main-foil span
    big = make_config(
        small.surfaces, total=1500.0, target=1100.0, main_chord=0.25, main_span=2.6,
        main_alpha=(-4.0, 8.0), rudder_chord=0.05, rudder_span=0.2,
    )
    return run_sweep(SweepRequest(small, grid, "span200")), run_sweep(SweepRequest(big, grid, "span260"))


def test_compare_switches_once():
    small, big = _sweeps()
    table = compare([small, big])
    switches = sum(a != b for a, b in zip(table.best, table.best[1:]))
    assert table.best[0] == "span260" and table.best[-1] == "span200"
    assert switches == 1


def test_compare_permutation_invariant():
    small, big = _sweeps()
    ab, ba = compare([small, big]), compare([big, small])
    assert ab.best == ba.best
    assert [r[::-1] for r in ab.resistance] == list(ba.resistance)


def test_compare_self_tie_goes_to_first():
    small, _ = _sweeps()
    twin = SweepResult("twin", small.records, small.crossover_speeds)
    table = compare([small, twin])
    assert set(table.best) == {"span200"}


def test_compare_single():
    small, _ = _sweeps()
    table = compare([small])
    assert [row[0] for row in table.resistance] == [r.state.total_resistance for r in small.records]
    assert set(table.best) == {"span200"}
    lines = comparison_csv(table).splitlines()
    assert lines[0] == "speed_kn,span200_rx_n,best_label"
    sweep_rows = [line.split(",") for line in sweep_csv(small).splitlines()[1:] if not line.startswith("#")]
    for line, srow in zip(lines[1:], sweep_rows):
        speed, rx, best = line.split(",")
        assert (speed, rx, best) == (srow[0], srow[2], "span200")


def test_compare_mismatched_grids():
    cfg, _ = crossover_config(5.0)
    a = run_sweep(SweepRequest(cfg, speed_grid(3.0, 5.0, 1.0), "a"))
    b = run_sweep(SweepRequest(cfg, speed_grid(3.0, 5.0, 0.5), "b"))
    with pytest.raises(MismatchedSpeedGrids):
        compare([a, b])
