import io
import json

import pytest

from casimir_modes import cli
from casimir_modes.complexplane.foucault import TRAJECTORY_COLUMNS
from casimir_modes.io import read_csv
from casimir_modes.spectral import PROFILE_COLUMNS


def run(capsys, *argv):
    code = cli.main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_pressure_json(capsys):
    code, out, _ = run(capsys, "pressure", "--preset", "gold-plasma", "--formula", "corrected")
    assert code == 0
    d = json.loads(out)
    assert d["formula"] == "matsubara_double_primed" and d["model"] == "plasma"
    assert d["value_pa"] == pytest.approx(-0.215282, rel=1e-5)


def test_pressure_is_deterministic(capsys):
    a = run(capsys, "pressure")[1]
    b = run(capsys, "pressure")[1]
    assert a == b


def test_ideal_preset_and_override(capsys):
    _, out, _ = run(capsys, "pressure", "--preset", "ideal-limit", "--formula", "ideal", "--L-nm", "500")
    assert json.loads(out)["value_pa"] == pytest.approx(-16 * 1.3002e-3, rel=1e-3)


def test_count_c2(capsys):
    code, out, _ = run(capsys, "count", "--contour", "c2")
    d = json.loads(out)
    assert code == 0 and d["N"] == -2 and abs(d["raw_re"] + 2) < 1e-3


def test_spectrum_csv_round_trip(capsys):
    code, out, _ = run(capsys, "spectrum", "--points", "11")
    assert code == 0
    assert out.startswith(",".join(PROFILE_COLUMNS) + "\r\n")
    rows = read_csv(io.StringIO(out, newline=""), {c: float for c in PROFILE_COLUMNS[:5]})
    assert len(rows) == 33
    assert len({r["gamma_ev"] for r in rows}) == 3


def test_trajectory_csv(capsys, tmp_path):
    path = tmp_path / "traj.csv"
    code, _, _ = run(capsys, "trajectory", "--d-grid", "1,2,5", "--no-winding", "--output", str(path))
    assert code == 0
    with open(path, newline="") as fh:
        rows = read_csv(fh, {"d_nm": float, "order": int})
    assert list(rows[0]) == list(TRAJECTORY_COLUMNS)
    assert sorted({r["d_nm"] for r in rows}) == [1.0, 2.0, 5.0]


def test_limit_study(capsys):
    code, out, _ = run(capsys, "limit-study", "--gamma-halvings", "2")
    assert code == 0
    rows = read_csv(io.StringIO(out, newline=""))
    assert len(rows) == 3


def test_config_file(capsys, tmp_path):
    ini = tmp_path / "run.ini"
    ini.write_text("[material]\nkind = plasma\nomega_p_ev = 9.0\n[geometry]\nL_nm = 250\n")
    code, out, _ = run(capsys, "pressure", "--config", str(ini))
    assert code == 0 and json.loads(out)["model"] == "plasma"


@pytest.mark.parametrize("argv", [
    ("pressure", "--L-nm", "-5"),
    ("pressure", "--preset", "gold-drude", "--formula", "corrected"),
    ("spectrum", "--k", "0"),
    ("limit-study", "--gamma-halvings", "-1"),
    ("limit-study", "--preset", "gold-plasma"),
])
def test_configuration_errors_exit_2(capsys, argv):
    code, out, err = run(capsys, *argv)
    assert code == 2
    assert out == "" and "error" in err


def test_unknown_ini_key_rejected(capsys, tmp_path):
    ini = tmp_path / "bad.ini"
    ini.write_text("[material]\ncolour = gold\n")
    assert run(capsys, "pressure", "--config", str(ini))[0] == 2


def test_console_script_installed():
    from importlib.metadata import entry_points

    eps = entry_points(group="console_scripts")
    assert any(ep.name == "casimir-modes" and ep.value == "casimir_modes.cli:main" for ep in eps)
