import csv
import json
import subprocess
import sys

import numpy as np
import pytest

from mtspectral.analysis import DecayModel
from mtspectral.basis_core import BasisSpec, Family
from mtspectral.cli import REGISTRY, ConfigError, main, parse_basis


def run_cli(*args, env=None):
    return subprocess.run(
        [sys.executable, "-m", "mtspectral", *args], capture_output=True, text=True, env=env
    )


def read_csv(path):
    with open(path) as fh:
        return list(csv.DictReader(fh))


class TestRegistry:
    def test_seven_entries(self):
        assert list(REGISTRY) == [
            "runge", "quartic", "gauss", "sech", "sinc-runge", "sin-quartic", "wavepacket",
        ]

    @pytest.mark.parametrize("key", list(REGISTRY))
    def test_evaluable_at_origin(self, key):
        assert np.isfinite(REGISTRY[key].evaluator(np.array(0.0)))

    def test_sech_no_overflow(self):
        with np.errstate(over="raise"):
            v = REGISTRY["sech"].evaluator(np.array([1e3, -800.0, 0.0]))
        np.testing.assert_allclose(v, [0, 0, 1])

    def test_decay_tags(self):
        tags = {k: e.expected_decay for k, e in REGISTRY.items()}
        assert tags["quartic"] is DecayModel.EXPONENTIAL
        assert tags["gauss"] is tags["sech"] is DecayModel.STRETCHED_EXP
        assert tags["sinc-runge"] is tags["sin-quartic"] is DecayModel.ALGEBRAIC

    def test_list_command(self, capsys):
        assert main(["list"]) == 0
        out = capsys.readouterr().out
        assert len(out.strip().splitlines()) == 7 and "wavepacket" in out


class TestParseBasis:
    def test_forms(self):
        assert parse_basis("mt") == BasisSpec.mt()
        assert parse_basis("fl:1.0") == BasisSpec.fourier_laguerre(1.0)
        assert parse_basis("hermite:2") == BasisSpec.shifted_hermite(2.0)
        g = parse_basis("gmt:0,0.5,1.5,0.25")
        assert g.family is Family.GENERAL_MT and g.params.lam == 0.5j and g.params.delta == 0.25

    @pytest.mark.parametrize("text", ["bogus", "fl:-2", "gmt:1,0,0,0", "fl:abc", "gmt:1,2"])
    def test_rejects(self, text):
        with pytest.raises(ConfigError):
            parse_basis(text)


def test_decay_runge_csv(tmp_path):
    out = tmp_path / "runge.csv"
    assert main(["decay", "--function", "runge", "--N", "64", "--out", str(out)]) == 0
    rows = read_csv(out)
    assert list(rows[0]) == ["n", "abs_coeff", "re_coeff", "im_coeff"]
    row0 = next(r for r in rows if r["n"] == "0")
    assert float(row0["abs_coeff"]) == pytest.approx(np.sqrt(2 * np.pi) / 3, abs=1e-12)


def test_decay_json_includes_fit(tmp_path):
    out = tmp_path / "gauss.json"
    assert main(["decay", "--function", "gauss", "--N", "256", "--format", "json", "--out", str(out)]) == 0
    payload = json.loads(out.read_text())
    assert payload["best_model"] == "stretched-exp"
    assert set(payload["fits"]) == {"exponential", "stretched-exp", "algebraic"}


def test_orthonormality_laguerre(tmp_path, capsys):
    out = tmp_path / "o.json"
    assert main(["orthonormality", "--basis", "fl:1.0", "--N", "16", "--format", "json", "--out", str(out)]) == 0
    assert json.loads(out.read_text())["max_offdiag"] <= 1e-8


def test_orthonormality_mt_reports_discrete(tmp_path):
    out = tmp_path / "o.json"
    assert main(["orthonormality", "--N", "8", "--format", "json", "--out", str(out)]) == 0
    assert json.loads(out.read_text())["max_discrete_error"] <= 1e-12


def test_pde_advect(tmp_path):
    out = tmp_path / "pde.json"
    code = main(["pde-advect", "--N", "64", "--t", "1.0", "--format", "json", "--out", str(out), "--assert"])
    assert code == 0
    payload = json.loads(out.read_text())
    assert payload["max_norm_drift"] <= 1e-12
    assert [r[0] for r in payload["rows"]] == [16, 32, 64]


def test_compare_hermite_csv(tmp_path):
    out = tmp_path / "cmp.csv"
    assert main(["compare-hermite", "--function", "runge", "--N", "20", "--out", str(out), "--assert"]) == 0
    rows = read_csv(out)
    assert list(rows[0]) == ["x", "error_mt", "error_hermite"] and len(rows) == 2001


def test_identities_assert_passes(capsys):
    assert main(["identities", "--assert"]) == 0
    out = capsys.readouterr().out
    assert "cayley_weight" in out


def test_rho_region(capsys):
    assert main(["rho-region", "--rho", "3"]) == 0
    line = capsys.readouterr().out.strip().splitlines()[1]
    assert [float(v) for v in line.split(",")] == pytest.approx([3.0, 0.625, 0.375])


def test_coeffs_other_bases(tmp_path):
    # Hermite coefficients cover 0..N-1, quadrature-based ones 0..N
    for basis, rows in (("hermite:0", 8), ("fl:1", 9)):
        out = tmp_path / f"{basis}.csv"
        assert main(["coeffs", "--basis", basis, "--N", "8", "--out", str(out)]) == 0
        assert len(read_csv(out)) == rows


class TestExitCodes:
    def test_unknown_function(self, capsys):
        assert main(["decay", "--function", "nope"]) == 2
        assert "unknown function" in capsys.readouterr().err

    def test_bad_basis(self):
        assert main(["orthonormality", "--basis", "fl:-3"]) == 2

    def test_bad_n(self):
        assert main(["coeffs", "--N", "0"]) == 2

    def test_unwritable(self, tmp_path):
        assert main(["coeffs", "--out", str(tmp_path / "missing" / "x.csv")]) == 2

    def test_argparse_error(self):
        with pytest.raises(SystemExit) as exc:
            main(["decay", "--format", "xml"])
        assert exc.value.code == 2

    def test_assertion_failure(self, tmp_path):
        # a Gaussian is the Hermite basis' home ground
        out = tmp_path / "c.csv"
        assert main(["compare-hermite", "--function", "gauss", "--N", "8", "--out", str(out), "--assert"]) == 3


class TestConfigFile:
    def test_values_used_and_flags_win(self, tmp_path):
        cfg = tmp_path / "run.cfg"
        cfg.write_text("# experiment settings\nfunction = quartic\nN = 16\nformat = json\n")
        out = tmp_path / "o.json"
        assert main(["coeffs", "--config", str(cfg), "--N", "8", "--out", str(out)]) == 0
        payload = json.loads(out.read_text())
        assert payload["function"] == "quartic" and payload["N"] == 8

    def test_unknown_key(self, tmp_path):
        cfg = tmp_path / "bad.cfg"
        cfg.write_text("colour = blue\n")
        assert main(["coeffs", "--config", str(cfg)]) == 2

    def test_missing_file(self, tmp_path):
        assert main(["coeffs", "--config", str(tmp_path / "none.cfg")]) == 2


def test_byte_identical_output(tmp_path):
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    for path in (a, b):
        assert main(["decay", "--function", "sech", "--N", "64", "--out", str(path)]) == 0
    assert a.read_bytes() == b.read_bytes()


def test_seed_controls_identities(monkeypatch, capsys):
    outputs = []
    for seed in ("1", "1", "2"):
        monkeypatch.setenv("MTSPECTRAL_SEED", seed)
        main(["identities"])
        outputs.append(capsys.readouterr().out)
    assert outputs[0] == outputs[1] != outputs[2]


def test_module_entry_point():
    proc = run_cli("rho-region", "--rho", "2")
    assert proc.returncode == 0 and proc.stdout.startswith("rho,center_im,radius")
