"""Command-line drivers: exit codes, output stability, negative controls."""

import json
import subprocess
import sys
from fractions import Fraction

import pytest

from splitg2 import catalog, scalars
from splitg2.cli import main

BAD_JACOBI = """\
format: splitg2-scenario 1
dim: 4
bracket: 1 2 3 1
bracket: 1 3 1 1
horizontal: 3
"""


def run(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


# -- verify-paper ------------------------------------------------------------------


def test_verify_short_scenario_passes(capsys):
    code, out, _ = run(capsys, "verify-paper", "--scenario", "Ms")
    assert code == 0
    assert out.startswith("splitg2 verify-paper")
    assert "result: pass" in out
    assert "[fail]" not in out


def test_verify_json_schema(capsys):
    code, out, _ = run(capsys, "verify-paper", "--scenario", "Ms",
                       "--format", "json")
    assert code == 0
    doc = json.loads(out)
    assert doc["result"] == "pass"
    assert doc["schema_version"] == 1
    assert doc["counts"]["fail"] == 0
    anchors = {r["anchor"] for r in doc["records"]}
    assert "base.jacobi" in anchors
    assert any(a.startswith("Ms.torsion") for a in anchors)


def test_verify_output_byte_stable(capsys):
    args = ("verify-paper", "--scenario", "Ms", "--seed", "3")
    _, first, _ = run(capsys, *args)
    _, second, _ = run(capsys, *args)
    assert first == second


def test_verify_seed_changes_sample_points(capsys):
    _, a, _ = run(capsys, "verify-paper", "--scenario", "Ms", "--seed", "0")
    _, b, _ = run(capsys, "verify-paper", "--scenario", "Ms", "--seed", "1")
    assert a != b
    assert "result: pass" in a and "result: pass" in b


def test_verify_growth_claims_are_info(capsys):
    code, out, _ = run(capsys, "verify-paper", "--scenario", "Ml")
    assert code == 0
    infos = [ln for ln in out.splitlines() if ln.startswith("[info]")]
    assert any("D_l1" in ln for ln in infos)
    assert any("D_l2" in ln for ln in infos)


def test_verify_vol_scale_rescales_torsion(capsys):
    code, out, _ = run(capsys, "verify-paper", "--scenario", "Ms",
                       "--vol-scale", "3")
    assert code == 0
    assert "result: pass" in out
    # tau0 at scale 3 = 3 * (-18/7)
    assert "-54/7" in out


def test_verify_corrupt_negative_control(capsys):
    code, out, _ = run(capsys, "verify-paper", "--corrupt", "1,5,1")
    assert code == 1
    assert "result: fail" in out
    assert "[fail] base.jacobi" in out
    assert "negative control" in out


def test_verify_corrupt_bad_syntax(capsys):
    code, _, err = run(capsys, "verify-paper", "--corrupt", "5,1,1")
    assert code == 2
    assert "usage error" in err
    code, _, err = run(capsys, "verify-paper", "--corrupt", "zz")
    assert code == 2


def test_verify_rejects_set(capsys):
    code, _, err = run(capsys, "verify-paper", "--scenario", "Ms",
                       "--set", "q=2")
    assert code == 2
    assert "usage error" in err


def test_verify_negative_vol_scale(capsys):
    code, _, err = run(capsys, "verify-paper", "--vol-scale", "-1")
    assert code == 2


# -- torsion ------------------------------------------------------------------------


def test_torsion_symbolic_run(capsys):
    code, out, _ = run(capsys, "torsion", "--scenario", "Ms")
    assert code == 0
    assert "tau0" in out


def test_torsion_specialized_matches_goldens(capsys):
    code, out, _ = run(capsys, "torsion", "--scenario", "Ms", "--set", "q=2",
                       "--format", "json")
    assert code == 0
    doc = json.loads(out)
    payload = doc["torsion"]
    assert payload["vol_scale"] == "1"
    want0 = scalars.parse_scalar(catalog.scenario("Ms").expected.tau0, ())
    assert scalars.equals(scalars.parse_scalar(payload["tau0"], ()), want0)
    assert payload["tau1"] == []
    assert payload["tau2"] == []
    keys = {tuple(k) for k, _ in payload["tau3"]}
    assert keys == set(catalog.scenario("Ms").expected.tau3)


def test_torsion_partial_set_rejected(capsys):
    code, _, err = run(capsys, "torsion", "--scenario", "Ml", "--set", "a=1")
    assert code == 2
    assert "usage error" in err


def test_torsion_excluded_point_rejected(capsys):
    code, _, err = run(capsys, "torsion", "--scenario", "Ms", "--set", "q=0")
    assert code == 1
    assert "error" in err


def test_torsion_duplicate_set_rejected(capsys):
    code, _, err = run(capsys, "torsion", "--scenario", "Ms",
                       "--set", "q=2", "--set", "q=3")
    assert code == 2


def test_torsion_unknown_parameter(capsys):
    code, _, err = run(capsys, "torsion", "--scenario", "Ms", "--set", "z=2")
    assert code == 2


# -- invariants ------------------------------------------------------------------------


def test_invariants_reports_dimensions(capsys):
    code, out, _ = run(capsys, "invariants", "--scenario", "Ms")
    assert code == 0
    assert "result: pass" in out
    assert "dimension" in out


def test_invariants_kind_filter(capsys):
    code, out, _ = run(capsys, "invariants", "--scenario", "Ms",
                       "--kind", "metric")
    assert code == 0
    assert "3-form" not in out.split("result:")[0].split("dimension")[0]


# -- growth -----------------------------------------------------------------------------


def test_growth_default_names(capsys):
    code, out, _ = run(capsys, "growth")
    assert code == 0
    for name in ("D_l1", "D_l2", "D_s1", "D_s2"):
        assert name in out


def test_growth_named_subset(capsys):
    code, out, _ = run(capsys, "growth", "D_s1")
    assert code == 0
    assert "D_s1" in out and "D_l1" not in out


def test_growth_unknown_name(capsys):
    code, _, err = run(capsys, "growth", "D_x9")
    assert code == 2


# -- describe ----------------------------------------------------------------------------


def test_describe_algebra_parses(capsys):
    from splitg2.textio import parse_algebra

    code, out, _ = run(capsys, "describe", "--scenario", "sp2")
    assert code == 0
    doc = parse_algebra(out)
    assert doc.algebra.dim == 10


def test_describe_scenario_round_trip(tmp_path, capsys):
    from splitg2.textio import parse_scenario

    code, out, _ = run(capsys, "describe", "--scenario", "Ms")
    assert code == 0
    doc = parse_scenario(out)
    assert doc.horizontal == 7

    # feed the emitted document back through the torsion command
    path = tmp_path / "ms.txt"
    path.write_text(out)
    code, out2, _ = run(capsys, "torsion", "--input", str(path),
                        "--set", "q=2")
    assert code == 0
    assert "input.jacobi" in out2


def test_describe_rejects_format_flag(capsys):
    code, _, _ = run(capsys, "describe", "--scenario", "Ms",
                     "--format", "json")
    assert code == 2


# -- document input and output paths ---------------------------------------------------------


def test_input_jacobi_violation_fails(tmp_path, capsys):
    path = tmp_path / "bad.txt"
    path.write_text(BAD_JACOBI)
    code, out, _ = run(capsys, "invariants", "--input", str(path))
    assert code == 1
    assert "[fail] input.jacobi" in out
    assert "violation at (1, 2, 3)" in out


def test_input_malformed_is_usage(tmp_path, capsys):
    path = tmp_path / "broken.txt"
    path.write_text("format: nope\n")
    code, _, err = run(capsys, "invariants", "--input", str(path))
    assert code == 2
    assert "parse error" in err


def test_out_writes_file(tmp_path, capsys):
    target = tmp_path / "report.txt"
    code, out, _ = run(capsys, "verify-paper", "--scenario", "Ms",
                       "--out", str(target))
    assert code == 0
    assert out == ""
    assert "result: pass" in target.read_text()


# -- process-level behaviour -------------------------------------------------------------------


def test_entry_point_subprocess():
    proc = subprocess.run(
        [sys.executable, "-m", "splitg2", "describe", "--scenario", "sp2"],
        capture_output=True, text=True,
    )
    assert proc.returncode == 0
    assert proc.stdout.startswith("format: splitg2-algebra 1")


def test_usage_exit_codes(capsys):
    assert run(capsys, "no-such-command")[0] == 2
    assert run(capsys, "verify-paper", "--scenario", "XX")[0] == 2


def test_stdin_input(tmp_path, capsys, monkeypatch):
    import io

    text = catalog.scenario("Ms").text()
    monkeypatch.setattr(sys, "stdin", io.StringIO(text))
    code, out, _ = run(capsys, "invariants", "--input", "-")
    assert code == 0
    assert "result: pass" in out
