"""Command line interface, via click's test runner."""

import json

import pytest
from click.testing import CliRunner

from hppmat import catalog
from hppmat.cli import main


@pytest.fixture
def runner():
    return CliRunner()


def test_sos_command_decided(runner):
    res = runner.invoke(main, ["sos", "U24", "--i", "1", "--j", "2"])
    assert res.exit_code == 0
    assert "SOS" in res.output


def test_sos_writes_json(runner, tmp_path):
    out = tmp_path / "cert.json"
    res = runner.invoke(
        main, ["sos", "U24", "--i", "1", "--j", "2", "--json", str(out)]
    )
    assert res.exit_code == 0
    data = json.loads(out.read_text())
    assert data["type"] == "sos"


def test_verify_command(runner, tmp_path):
    out = tmp_path / "cert.json"
    runner.invoke(main, ["sos", "U24", "--i", "1", "--j", "2", "--json", str(out)])
    res = runner.invoke(main, ["verify", str(out), "U24"])
    assert res.exit_code == 0 and "valid" in res.output
    res = runner.invoke(main, ["verify", str(out), "U25"])
    assert res.exit_code == 1 and "INVALID" in res.output


def test_check_fano(runner):
    res = runner.invoke(main, ["check", "F7"])
    assert res.exit_code == 0
    assert "NOT_HPP" in res.output


def test_check_writes_json(runner, tmp_path):
    out = tmp_path / "verdict.json"
    res = runner.invoke(main, ["check", "F7", "--json", str(out)])
    assert res.exit_code == 0
    data = json.loads(out.read_text())
    assert data["status"] == "NOT_HPP"


def test_hyperbolicity_count(runner):
    res = runner.invoke(main, ["hyperbolicity", "M548", "--count"])
    assert res.exit_code == 0
    assert "6 failing" in res.output


def test_hyperbolicity_witness_and_pass(runner):
    res = runner.invoke(main, ["hyperbolicity", "P8"])
    assert res.exit_code == 0 and "non-real" in res.output
    res = runner.invoke(main, ["hyperbolicity", "U24"])
    assert res.exit_code == 2  # sampling passed: inconclusive


def test_negative_command(runner):
    res = runner.invoke(main, ["negative", "M431", "--i", "6", "--j", "7"])
    assert res.exit_code == 0 and "< 0" in res.output
    res = runner.invoke(main, ["negative", "U24", "--i", "1", "--j", "2"])
    assert res.exit_code == 2


def test_ingleton_command(runner):
    res = runner.invoke(main, ["ingleton", "V8"])
    assert res.exit_code == 0 and "violated" in res.output
    res = runner.invoke(main, ["ingleton", "P8"])
    assert res.exit_code == 0 and "no Ingleton violation" in res.output


def test_face_command(runner):
    res = runner.invoke(main, ["face", "U24", "--flat", "1"])
    assert res.exit_code == 0 and "h = " in res.output


def test_classify_writes_report(runner, tmp_path):
    cat = tmp_path / "cat.txt"
    catalog.write([catalog.builtin("U24"), catalog.builtin("F7")], cat)
    outdir = tmp_path / "rep"
    res = runner.invoke(main, ["classify", str(cat), "--outdir", str(outdir)])
    assert res.exit_code == 0
    assert (outdir / "verdicts.csv").exists()
    assert (outdir / "status_counts.png").exists()
    assert (outdir / "deciding_stages.png").exists()


def test_unknown_name_is_error(runner):
    res = runner.invoke(main, ["check", "definitely-not-a-matroid"])
    assert res.exit_code != 0
