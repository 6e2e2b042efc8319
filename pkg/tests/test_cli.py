import json
import subprocess
import sys

import pytest
from hypothesis import given, settings, strategies as st

from ucpt_lab.cli import analyze, main, recheck_analysis


def run(capsys, *args):
    code = main(list(args))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_analyze_key_special_t(capsys):
    code, out, _ = run(capsys, "analyze", '{"family":"key","d":4,"t":"-1/3"}')
    r = json.loads(out)
    assert code == 0
    assert r["extremality"]["ucp_extreme"] is False
    assert r["verdicts"]["AstarA"]["witness_verified"]
    assert all(isinstance(w["coefficient"], (str, dict)) for w in r["verdicts"]["AstarA"]["witness"])


def test_analyze_alpha_beta_ls(capsys):
    code, out, _ = run(capsys, "analyze", '{"family":"ucpt_alpha_beta","alpha":"3/5","beta":"4/5"}', "--set", "LS")
    assert code == 0 and json.loads(out)["verdicts"]["LandauStreater"]["independent"]


def test_analyze_float(capsys):
    code, out, _ = run(capsys, "analyze", '{"family":"key","d":4,"t":"0"}', "--float")
    r = json.loads(out)
    assert code == 0 and r["mode"] == "float" and r["extremality"]["ucp_extreme"]


@pytest.mark.parametrize("arg", ['{"family":"key","d":0,"t":"0"}', "{bad", '{"family":"nope"}',
                                 '{"family":"ucpt_alpha_beta","alpha":"1/2","beta":"1/2"}'])
def test_analyze_input_errors(capsys, arg):
    code, _, err = run(capsys, "analyze", arg)
    assert code == 2 and "error" in err


def test_sweep_key_d3(capsys):
    code, out, _ = run(capsys, "sweep", '{"family":"key","d":3}', "--set", "AstarA")
    s = json.loads(out)["sets"]["AstarA"]
    assert code == 0 and s["root_sets_agree"]
    assert s["gram"]["roots_in_interval"] == ["-1/2"]
    assert {r for r, _ in s["vec"]["exact_roots"]} == {"-1", "-1/2", "1"}


def test_sweep_asymmetric(capsys):
    code, out, _ = run(capsys, "sweep", '{"family":"asymmetric_w"}', "--interval", "-6", "6")
    s = json.loads(out)["sets"]
    assert {r for r, _ in s["AstarA"]["vec"]["exact_roots"]} == {"1", "-1", "-13/3", "-59/84", "19/21", "107/21"}
    assert {r for r, _ in s["AAstar"]["vec"]["exact_roots"]} == {"1", "-1", "-59/84", "-1/7", "19/21", "107/21"}


def test_sweep_even_identically_zero(capsys):
    code, out, _ = run(capsys, "sweep", '{"family":"even_skew","d":4}')
    assert code == 0 and json.loads(out)["sets"]["AstarA"]["identically_zero"]


def test_sweep_errors(capsys):
    assert run(capsys, "sweep", '{"family":"key","d":6}')[0] == 2
    assert run(capsys, "sweep", '{"family":"key","d":3}', "--interval", "1", "0")[0] == 2


def test_verify(capsys):
    code, out, err = run(capsys, "verify", "--check", "d3_dual_factorization", "--check", "omega_spectra")
    r = json.loads(out)
    assert code == 0 and r["overall"] and set(r["checks"]) == {"d3_dual_factorization", "omega_spectra"}
    assert "PASS omega_spectra" in err
    assert run(capsys, "verify", "--check", "unknown_name")[0] == 2


def test_sample(capsys, tmp_path):
    code, out, _ = run(capsys, "sample", '{"d":4,"t":"0","mode":"haar_float","trials":20,"seed":7}')
    assert code == 0 and json.loads(out)["independent_fraction"] == 1.0
    path = tmp_path / "report.json"
    cfg = tmp_path / "cfg.json"
    cfg.write_text('{"d":4,"t":"0","mode":"diagonal","trials":5,"seed":7}')
    code, out, _ = run(capsys, "sample", str(cfg), "--out", str(path))
    assert code == 0 and out == ""
    assert json.loads(path.read_text())["independent_fraction"] == 0.0
    assert run(capsys, "sample", '{"d":4,"mode":"nope"}')[0] == 2


def test_usage_errors(capsys):
    assert run(capsys)[0] == 2
    assert run(capsys, "frobnicate")[0] == 2


def test_console_script_module_entry():
    p = subprocess.run([sys.executable, "-m", "ucpt_lab", "verify", "--check", "eof_bounds"],
                       capture_output=True, text=True)
    assert p.returncode == 0 and json.loads(p.stdout)["overall"]


SPECS = [
    {"family": "key", "d": 4, "t": "-1/3"}, {"family": "key", "d": 3, "t": "1/2"},
    {"family": "ucpt_alpha_beta", "alpha": "1", "beta": "0"},
    {"family": "ucpt_alpha_beta", "alpha": "4/5", "beta": "3/5 i"},
    {"family": "odd_swap", "d": 3, "t": "-1/2"}, {"family": "even_skew", "d": 4, "t": "2/3"},
    {"family": "asymmetric_w", "t": "-1/7"}, {"family": "arveson_ohno"},
]


@settings(max_examples=16)
@given(st.sampled_from(SPECS), st.sampled_from([None, "AstarA", "AAstar", "LS"]))
def test_reports_round_trip(spec, kind):
    report = analyze(spec, kind)
    again = json.loads(json.dumps(report))
    assert recheck_analysis(again)
    assert analyze(again["spec"], kind) == report


def test_recheck_rejects_tampered_witness():
    report = json.loads(json.dumps(analyze({"family": "key", "d": 4, "t": "-1/3"}, "AstarA")))
    report["verdicts"]["AstarA"]["witness"][0]["coefficient"] = "5"
    assert not recheck_analysis(report)
