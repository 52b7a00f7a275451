import pytest

from foilvpp.cli import main
from foilvpp.equilibrium import bare_hull_resistance, solve_equilibrium
from foilvpp.hull import KNOT, HullSample, format_hull_samples
from foilvpp.polar import format_polar
from foilvpp.sweep import SweepRequest, run_sweep, speed_grid, sweep_csv

from oracles import EQ_FZ, EQ_MY, brute_force_config, brute_force_equilibrium, crossover_config
from synth import DEFAULT_RX, hull_samples, linear_polar, quad

BRUTE_HULL = dict(rx=(20.0, 0.0, 0.0, 20.0, 0.05, 0.0), fz=(EQ_FZ, 0, 0, 0, 0, 0), my=(EQ_MY, 0, 0, 0, 0, 0))

BASE = {
    "hull_file": "hull.txt",
    "lwl_m": "9.15",
    "polar_file": "polar.txt",
    "total_displacement_kg": "1500",
    "target_displacement_kg": "1100",
    "main_foil.chord_m": "0.25",
    "main_foil.span_m": "2.0",
    "main_foil.element_count": "2",
    "main_foil.alpha_min_deg": "-4",
    "main_foil.alpha_max_deg": "8",
    "rudder_foil.chord_m": "0.1",
    "rudder_foil.span_m": "0.4",
    "rudder_foil.element_count": "2",
    "rudder_foil.x_position_m": "-4",
    "rudder_foil.alpha_min_deg": "-8",
    "rudder_foil.alpha_max_deg": "8",
}


@pytest.fixture
def project(tmp_path):
    (tmp_path / "polar.txt").write_text(format_polar(linear_polar()))
    (tmp_path / "hull.txt").write_text(format_hull_samples(hull_samples(**BRUTE_HULL)))

    def write_config(name="run.cfg", hull=None, **overrides):
        if hull is not None:
            (tmp_path / f"{name}.hull.txt").write_text(format_hull_samples(hull))
            overrides["hull_file"] = f"{name}.hull.txt"
        kv = {**BASE, **{k.replace("__", "."): str(v) for k, v in overrides.items()}}
        path = tmp_path / name
        path.write_text("# test run\n" + "".join(f"{k} = {v}\n" for k, v in kv.items() if v != "None"))
        return path

    write_config.dir = tmp_path
    return write_config


def report(text):
    return dict(line.split(" = ", 1) for line in text.splitlines())


# --- fit-hull -------------------------------------------------------------------------


def test_fit_hull_exact_grid(tmp_path, capsys):
    truth = (2.0, 3.0, 0.5, 0.1, -0.02, 0.004)
    samples = [
        HullSample(kn * KNOT, d, quad(truth, kn * KNOT, d), 1.0, 2.0) for kn in (3, 6, 9) for d in (1000, 1500, 2000)
    ]
    (tmp_path / "h.txt").write_text(format_hull_samples(samples))
    out = tmp_path / "surf.txt"
    assert main(["fit-hull", str(tmp_path / "h.txt"), "--lwl", "9.15", "-o", str(out)]) == 0
    lines = capsys.readouterr().out.splitlines()
    rx = next(line for line in lines if line.startswith("rx "))
    assert float(rx.split()[-1]) < 1e-9
    assert out.exists()


def test_fit_hull_errors(tmp_path):
    (tmp_path / "empty.txt").write_text("# nothing\n")
    assert main(["fit-hull", str(tmp_path / "empty.txt"), "--lwl", "9"]) == 2
    line = [HullSample(kn * KNOT, 1000.0 + 50 * kn, 1, 1, 1) for kn in range(2, 10)]
    (tmp_path / "line.txt").write_text(format_hull_samples(line))
    assert main(["fit-hull", str(tmp_path / "line.txt"), "--lwl", "9"]) == 3
    assert main(["fit-hull", str(tmp_path / "missing.txt"), "--lwl", "9"]) == 2


# --- ar-study -------------------------------------------------------------------------


def run_ar(tmp_path, capsys, rows, *extra):
    path = tmp_path / "ar.txt"
    path.write_text("ar value\n" + "".join(f"{a} {v}\n" for a, v in rows))
    code = main(["ar-study", str(path), *extra])
    out = capsys.readouterr().out
    return code, dict(line.split(" ", 1) for line in out.splitlines())


def test_ar_study_table_orders(tmp_path, capsys):
    code, out = run_ar(tmp_path, capsys, [(12, 3034.37), (24, 2539.55), (48, 2175.41)])
    assert code == 0
    assert float(out["order"]) == pytest.approx(0.44, abs=0.01)
    code, out = run_ar(tmp_path, capsys, [(12, 80295.58), (24, 85935.75), (48, 89683.19)])
    assert float(out["order"]) == pytest.approx(0.59, abs=0.01)


def test_ar_study_first_order_sequence(tmp_path, capsys):
    rows = [(ar, 10.0 + 40.0 / ar) for ar in (2, 4, 8, 16)]
    code, out = run_ar(tmp_path, capsys, rows, "--degree", "1", "-o", str(tmp_path / "curve.txt"))
    assert code == 0
    assert float(out["order"]) == pytest.approx(1.0, abs=1e-9)
    assert float(out["asymptote"]) == pytest.approx(10.0, rel=1e-9)
    c = [float(x) for x in (tmp_path / "curve.txt").read_text().split()]
    assert c[0] == 1.0 and c[1] == pytest.approx(4.0, rel=1e-9)


def test_ar_study_errors(tmp_path, capsys):
    assert run_ar(tmp_path, capsys, [(12, 1.0), (24, 2.0), (48, 1.0)])[0] == 4
    assert run_ar(tmp_path, capsys, [(12, 1.0), (24, 1.0), (48, 1.0)])[0] == 4
    assert run_ar(tmp_path, capsys, [(12, 3.0), (20, 2.0), (48, 1.5)])[0] == 2
    assert run_ar(tmp_path, capsys, [(12, 3.0), (24, 2.0)])[0] == 2


# --- solve ----------------------------------------------------------------------------


def test_solve_matches_brute_force(project, capsys):
    cfg = project()
    assert main(["solve", str(cfg), "--speed", "7"]) == 0
    got = report(capsys.readouterr().out)
    alpha_r, alpha_m, disp = brute_force_equilibrium(brute_force_config(), 7 * KNOT, EQ_FZ, EQ_MY)
    assert float(got["alpha_rudder_deg"]) == pytest.approx(alpha_r, abs=0.02)
    assert float(got["alpha_main_deg"]) == pytest.approx(alpha_m, abs=0.02)
    assert float(got["residual_displacement_kg"]) == pytest.approx(disp, abs=0.2)


def test_solve_output_matches_library(project, capsys):
    cfg = project()
    assert main(["solve", str(cfg), "--speed", "6"]) == 0
    got = report(capsys.readouterr().out)
    state = solve_equilibrium(brute_force_config(), 6 * KNOT)
    assert float(got["total_rx_n"]) == pytest.approx(state.total_resistance, rel=1e-8)


def test_solve_zero_area_is_bare_hull(project, capsys):
    # hull fz = 0: otherwise vertical balance alone moves the hull off full displacement
    hull = hull_samples(rx=DEFAULT_RX, my=(EQ_MY, 0, 0, 0, 0, 0))
    cfg = project(
        hull=hull, main_foil__element_count=0, rudder_foil__element_count=0, target_displacement_kg=1500
    )
    assert main(["solve", str(cfg), "--speed", "5"]) == 0
    got = report(capsys.readouterr().out)
    assert got["total_rx_n"] == got["bare_rx_n"]
    assert float(got["delta_percent"]) == 0.0


def test_solve_exit_codes(project):
    cfg = project()
    assert main(["solve", str(cfg), "--speed", "20"]) == 2
    suction = hull_samples(rx=DEFAULT_RX, fz=(-5000.0, 0, 0, 0, 0, 0))
    assert main(["solve", str(project("suck.cfg", hull=suction)), "--speed", "5"]) == 5
    tight = project(
        "tight.cfg",
        tolerance__angle_deg=0,
        tolerance__displacement_kg=0,
        tolerance__force_n=0,
        tolerance__moment_nm=0,
        tolerance__max_iter=5,
    )
    assert main(["solve", str(tight), "--speed", "9"]) == 6
    assert main(["solve", str(project("bad.cfg", bogus_key=1)), "--speed", "5"]) == 2
    assert main(["solve", str(project("nopolar.cfg", polar_file="nope.txt")), "--speed", "5"]) == 2


# --- sweep / compare ------------------------------------------------------------------


def crossover_project(project, name="cross.cfg", span=2.0):
    cfg, a4 = crossover_config(5.0)
    hull = hull_samples(rx=(20.0, 0.0, 0.0, 20.0, a4, 0.0), speeds_kn=(2.0, 6.0, 10.0, 14.0))
    return project(
        name,
        hull=hull,
        main_foil__span_m=span,
        rudder_foil__chord_m=0.05,
        rudder_foil__span_m=0.2,
        speed__min_kn=3,
        speed__max_kn=10,
        speed__step_kn=0.25,
    )


def test_sweep_writes_crossover(project, capsys):
    path = crossover_project(project)
    assert main(["sweep", str(path)]) == 0
    lines = capsys.readouterr().out.splitlines()
    assert lines[0].startswith("speed_kn,bare_rx_n,total_rx_n")
    cross = [line for line in lines if line.startswith("# crossover_speed_kn=")]
    assert len(cross) == 1 and 4.9 <= float(cross[0].split("=")[1]) <= 5.1


def test_sweep_matches_library(project, capsys):
    path = crossover_project(project)
    assert main(["sweep", str(path)]) == 0
    cfg, _ = crossover_config(5.0)
    lib = sweep_csv(run_sweep(SweepRequest(cfg, speed_grid(3.0, 10.0, 0.25), "cross")))
    cli_rows = [line.split(",") for line in capsys.readouterr().out.splitlines()[1:] if not line.startswith("#")]
    lib_rows = [line.split(",") for line in lib.splitlines()[1:] if not line.startswith("#")]
    assert len(cli_rows) == len(lib_rows)
    for a, b in zip(cli_rows, lib_rows):
        assert a[0] == b[0] and a[-1] == b[-1]
        assert float(a[2]) == pytest.approx(float(b[2]), rel=1e-6)


def test_singleton_sweep_equals_solve(project, capsys):
    path = project(speed__min_kn=6, speed__max_kn=6, speed__step_kn=1)
    assert main(["sweep", str(path)]) == 0
    row = capsys.readouterr().out.splitlines()[1].split(",")
    assert main(["solve", str(path), "--speed", "6"]) == 0
    got = report(capsys.readouterr().out)
    assert row[2] == got["total_rx_n"] and row[5] == got["alpha_main_deg"]


def test_sweep_file_output_is_deterministic(project, capsys):
    path = crossover_project(project)
    out = project.dir / "out.csv"
    assert main(["sweep", str(path), "-o", str(out)]) == 0
    first = out.read_bytes()
    assert main(["sweep", str(path), "-o", str(out)]) == 0
    assert out.read_bytes() == first
    assert capsys.readouterr().out == ""
    assert [p.name for p in project.dir.iterdir() if p.name.endswith(".tmp")] == []


def test_sweep_requires_speed_range(project):
    assert main(["sweep", str(project())]) == 2


def test_compare(project, capsys):
    a = crossover_project(project, "span200.cfg", 2.0)
    b = crossover_project(project, "span260.cfg", 2.6)
    assert main(["compare", str(a), str(b)]) == 0
    lines = capsys.readouterr().out.splitlines()
    assert lines[0] == "speed_kn,span200_rx_n,span260_rx_n,best_label"
    assert {line.split(",")[-1] for line in lines[1:]} <= {"span200", "span260"}

    assert main(["compare", str(a)]) == 0
    single = capsys.readouterr().out.splitlines()
    assert single[0] == "speed_kn,span200_rx_n,best_label"
    assert all(line.endswith(",span200") for line in single[1:])


def test_compare_mismatched_grids(project):
    a = crossover_project(project, "a.cfg")
    b = project("b.cfg", speed__min_kn=3, speed__max_kn=10, speed__step_kn=0.5)
    assert main(["compare", str(a), str(b)]) == 7


def test_bare_hull_reference(project, capsys):
    cfg = project()
    assert main(["solve", str(cfg), "--speed", "4"]) == 0
    got = report(capsys.readouterr().out)
    assert float(got["bare_rx_n"]) == pytest.approx(bare_hull_resistance(brute_force_config(), 4 * KNOT), rel=1e-8)
