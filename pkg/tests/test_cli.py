"""Command-line driver: outputs, determinism, exit codes."""

import filecmp
import json
import os

import pytest

from curvedist.cli import main


@pytest.fixture(scope="module")
def famdir(tmp_path_factory):
    out = tmp_path_factory.mktemp("family")
    assert main(["gen-family", "--seed", "0", "--out", str(out)]) == 0
    return out


@pytest.fixture(scope="module")
def analyzed(famdir, tmp_path_factory):
    out = tmp_path_factory.mktemp("analysis")
    curve = str(famdir / "curve_1_1.txt")
    assert main(["parametrize", curve, "--out", str(out)]) == 0
    param = str(out / "curve_1_1.param.txt")
    assert main(["analyze", curve, param, "--out", str(out),
                 "--index", "1"]) == 0
    return out


def test_gen_family_outputs(famdir, capsys):
    assert (famdir / "manifest.txt").exists()
    curves = [p for p in famdir.iterdir() if p.name.startswith("curve_")]
    assert len(curves) == 60


def test_gen_family_deterministic(famdir, tmp_path):
    assert main(["gen-family", "--seed", "0", "--out", str(tmp_path)]) == 0
    assert (tmp_path / "manifest.txt").read_bytes() == \
           (famdir / "manifest.txt").read_bytes()
    for p in tmp_path.iterdir():
        assert filecmp.cmp(p, famdir / p.name, shallow=False)


def test_parametrize_emits_param_and_implicit(analyzed):
    assert (analyzed / "curve_1_1.param.txt").exists()
    assert (analyzed / "curve_1_1.implicit.txt").exists()


def test_analyze_csv_headers_and_report(analyzed):
    bounds = (analyzed / "bounds.csv").read_text().splitlines()
    assert bounds[0] == "i,B1,B2,B"
    assert bounds[1].startswith("1,")
    assert (analyzed / "lattice.csv").read_text().splitlines()[0] == \
        "i,tau1,tau2,tau3,tau4,m,eta"
    evid = (analyzed / "evidence.csv").read_text().splitlines()
    assert evid[0].startswith("i,chi,chi1,chi2,mu,nu,gamma1,gamma2,gamma3")
    report = json.loads((analyzed / "report.json").read_text())
    for section in ("bound", "lattice", "evidence"):
        assert section in report
    assert report["bound"]["B"] >= report["lattice"]["m"]
    plot = (analyzed / "plotdata.csv").read_text().splitlines()
    assert plot[0] == "t,rho1"
    assert len(plot) > 500


def test_analyze_deterministic(analyzed, famdir, tmp_path):
    curve = str(famdir / "curve_1_1.txt")
    param = str(analyzed / "curve_1_1.param.txt")
    assert main(["analyze", curve, param, "--out", str(tmp_path),
                 "--index", "1"]) == 0
    for name in ("bounds.csv", "lattice.csv", "evidence.csv",
                 "report.json", "plotdata.csv"):
        assert (tmp_path / name).read_bytes() == \
               (analyzed / name).read_bytes()


def test_not_rational_exit_code(famdir, tmp_path):
    rc = main(["parametrize", str(famdir / "curve_1_2.txt"),
               "--out", str(tmp_path)])
    assert rc == 2


def test_hypothesis_failure_exit_code(famdir, tmp_path):
    rc = main(["parametrize", str(famdir / "curve_5_4.txt"),
               "--out", str(tmp_path)])
    assert rc == 4


def test_env_override(famdir, tmp_path, monkeypatch):
    monkeypatch.setenv("CURVEDIST_SEED", "7")
    assert main(["gen-family", "--out", str(tmp_path)]) == 0
    assert (tmp_path / "manifest.txt").read_bytes() != \
           (famdir / "manifest.txt").read_bytes()
