import json
import math
import os
import subprocess
import sys

import numpy as np
import pytest

from twophoton.cli import RunConfig, main
from twophoton.curves import CoincidenceCurve, read_curve_csv, write_atomic
from twophoton.errors import DomainError
from twophoton.polarization import read_polar_csv


def write_config(tmp_path, spectrum, name="run.json", **extra):
    cfg = {"spectrum": spectrum, "D": {"min": -4, "max": 4, "step": 0.25}}
    cfg.update(extra)
    path = tmp_path / name
    path.write_text(json.dumps(cfg))
    return str(path)


SYM = {"family": "symmetric_gaussian", "center": 10, "sigma": 1}


def test_sweep_csv(tmp_path):
    out = tmp_path / "curve.csv"
    assert main(["sweep", "--config", write_config(tmp_path, SYM), "--out", str(out)]) == 0
    curve = read_curve_csv(out)
    assert len(curve) == 33
    i = int(np.argmin(curve.rates))
    assert curve.D[i] == 0 and curve.rates[i] < 1e-8
    lines = out.read_text().splitlines()
    assert lines[0] == "D,rate,rate_normalized"
    assert lines[-2].startswith("# normalization=") and lines[-1].startswith("# spec=")


def test_sweep_deterministic(tmp_path):
    cfg = write_config(tmp_path, {"family": "asymmetric_gaussian", "center": 10, "y_asym": 0.05, "sigma": 1})
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    assert main(["sweep", "--config", cfg, "--out", str(a)]) == 0
    assert main(["sweep", "--config", cfg, "--out", str(b)]) == 0
    assert a.read_bytes() == b.read_bytes()


def test_sweep_to_stdout(tmp_path, capsys):
    assert main(["sweep", "--config", write_config(tmp_path, SYM), "--d-min", "0", "--d-max", "1"]) == 0
    rows = [l for l in capsys.readouterr().out.splitlines() if l and not l.startswith(("#", "D,"))]
    assert len(rows) == 5


def test_symmetry_check_asymmetric(tmp_path):
    out = tmp_path / "report.json"
    spec = {"family": "asymmetric_gaussian", "center": 10, "y_asym": 0.05, "sigma": 1}
    assert main(["symmetry-check", "--config", write_config(tmp_path, spec), "--out", str(out)]) == 0
    report = json.loads(out.read_text())
    assert report["verdict"] == "asymmetric"
    assert report["rate0_normalized"] == pytest.approx(0.1175, abs=1e-4)
    assert report["asymmetry_norm"] == pytest.approx(report["rate0"], rel=1e-10)


def test_symmetry_check_symmetric(tmp_path):
    out = tmp_path / "report.json"
    assert main(["symmetry-check", "--config", write_config(tmp_path, SYM), "--out", str(out)]) == 0
    assert json.loads(out.read_text())["verdict"] == "symmetric"


def test_oracle_compare_passes(tmp_path):
    out = tmp_path / "report.json"
    cfg = write_config(tmp_path, SYM, tol=1e-6)
    assert main(["oracle-compare", "--config", cfg, "--out", str(out)]) == 0
    report = json.loads(out.read_text())
    assert report["passed"] and report["max_deviation"] < 1e-6


def test_oracle_compare_time_shift(tmp_path):
    out = tmp_path / "report.json"
    spec = {"family": "time_shifted", "center": 10, "sigma": 1, "shift": 2.0}
    assert main(["oracle-compare", "--config", write_config(tmp_path, spec), "--out", str(out), "--tol", "1e-6"]) == 0


def test_oracle_compare_without_closed_form(tmp_path):
    spec = {"family": "spdc", "pump": 20, "sigma": 1, "epsilon": 0.5}
    assert main(["oracle-compare", "--config", write_config(tmp_path, spec)]) == 2


def test_polar_sweep(tmp_path):
    out = tmp_path / "polar.csv"
    cfg = write_config(tmp_path, SYM, analyzers=[[0, math.pi / 2], [0.3, 0.3]])
    assert main(["polar-sweep", "--config", cfg, "--out", str(out), "--sign", "singlet"]) == 0
    curves = read_polar_csv(out)
    crossed = curves[(0.0, math.pi / 2)]
    assert crossed.D[np.argmax(crossed.rates)] == 0
    assert np.all(curves[(0.3, 0.3)].rates == 0)


def test_polar_sweep_triplet_dip(tmp_path):
    out = tmp_path / "polar.csv"
    cfg = write_config(tmp_path, SYM, analyzers=[[0.4, 0.4]], sign="triplet")
    assert main(["polar-sweep", "--config", cfg, "--out", str(out)]) == 0
    (curve,) = read_polar_csv(out).values()
    assert curve.D[np.argmin(curve.rates)] == 0


def test_polar_sweep_needs_balanced_splitter(tmp_path):
    assert main(["polar-sweep", "--config", write_config(tmp_path, SYM), "--R", "0.4"]) == 2


def test_flags_override_file(tmp_path):
    out = tmp_path / "curve.csv"
    cfg = write_config(tmp_path, SYM, splitter={"R": 0.5, "T": 0.5})
    assert main(["sweep", "--config", cfg, "--out", str(out), "--R", "0.3", "--d-min", "0", "--d-max", "0"]) == 0
    curve = read_curve_csv(out)
    # (T - R)^2 floor of the dip, normalized to 2N
    assert curve.rates_normalized[0] == pytest.approx(2 * 0.4**2, rel=1e-10)


def test_tabulated_spectrum(tmp_path):
    from twophoton.spectra import SymmetricGaussianProduct, Tabulated, save_tabulated

    axis = np.linspace(4, 16, 121)
    tab = Tabulated(axis, axis, SymmetricGaussianProduct(10, 1)(axis[:, None], axis[None, :]))
    grid_path = tmp_path / "spec.txt"
    save_tabulated(tab, grid_path)
    out = tmp_path / "report.json"
    spec = {"family": "tabulated", "path": str(grid_path)}
    assert main(["symmetry-check", "--config", write_config(tmp_path, spec), "--out", str(out)]) == 0
    assert json.loads(out.read_text())["verdict"] == "symmetric"


@pytest.mark.parametrize(
    "args,field",
    [
        (["--d-step", "-0.1"], "d_step"),
        (["--d-step", "0"], "d_step"),
        (["--tol", "0.5"], "tol"),
        (["--tol", "0"], "tol"),
        (["--R", "0.5", "--T", "0.6"], "splitter"),
    ],
)
def test_config_errors_exit_2(tmp_path, capsys, args, field):
    assert main(["sweep", "--config", write_config(tmp_path, SYM)] + args) == 2
    assert field in capsys.readouterr().err


@pytest.mark.parametrize(
    "spectrum,field",
    [
        ({"family": "lorentzian"}, "spectrum.family"),
        ({"family": "symmetric_gaussian"}, "spectrum.center"),
        ({"family": "symmetric_gaussian", "center": 10, "sigma": -1}, "spectrum"),
        ({"family": "symmetric_gaussian", "center": 10, "width": 1}, "spectrum.width"),
        ({"family": "tabulated"}, "spectrum.path"),
    ],
)
def test_bad_spectrum_exit_2(tmp_path, capsys, spectrum, field):
    assert main(["sweep", "--config", write_config(tmp_path, spectrum)]) == 2
    assert field in capsys.readouterr().err


def test_missing_config_exit_2(tmp_path):
    assert main(["sweep", "--config", str(tmp_path / "nope.json")]) == 2


def test_malformed_json_exit_2(tmp_path):
    path = tmp_path / "bad.json"
    path.write_text("{not json")
    assert main(["sweep", "--config", str(path)]) == 2


def test_unresolvable_spectrum_exit_2(tmp_path):
    spec = {"family": "spdc", "pump": 20, "sigma": 1}
    assert main(["sweep", "--config", write_config(tmp_path, spec), "--tol", "1e-10"]) == 2


def test_numerical_error_exit_3(tmp_path, monkeypatch):
    from twophoton import biphoton
    from twophoton.errors import NumericalConsistencyError

    def broken(*a, **k):
        raise NumericalConsistencyError("negative rate")

    monkeypatch.setattr(biphoton, "sweep", broken)
    assert main(["sweep", "--config", write_config(tmp_path, SYM)]) == 3


def test_D_values_inclusive():
    cfg = RunConfig("sweep", SYM, d_min=-4, d_max=4, d_step=0.25)
    values = cfg.D_values()
    assert len(values) == 33 and values[0] == -4 and values[-1] == 4


def test_atomic_write_leaves_no_temp_files(tmp_path):
    target = tmp_path / "x.csv"
    write_atomic(target, "a\n")
    write_atomic(target, "b\n")
    assert target.read_text() == "b\n"
    assert os.listdir(tmp_path) == ["x.csv"]


def test_csv_parse_back_rejects_bad_curves(tmp_path):
    path = tmp_path / "bad.csv"
    path.write_text("D,rate,rate_normalized\n1,0.5,0.5\n0,0.4,0.4\n# normalization=1\n")
    with pytest.raises(DomainError):
        read_curve_csv(path)
    with pytest.raises(DomainError):
        CoincidenceCurve(((0.0, -1e-3),), 1.0)


def test_console_entry_point(tmp_path):
    out = tmp_path / "c.csv"
    cmd = [sys.executable, "-m", "twophoton", "sweep", "--config", write_config(tmp_path, SYM), "--out", str(out)]
    subprocess.run(cmd, check=True)
    assert read_curve_csv(out).D[0] == -4
