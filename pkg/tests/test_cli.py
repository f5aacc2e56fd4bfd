import io
import json

from hvn.cli import main

E0 = '[[0,1],[1,1],[1,1],[-1,2],[-1,1]]'


def run(*argv):
    out = io.StringIO()
    code = main(list(argv), stdout=out)
    return code, out.getvalue()


def test_sieve_nonbalanced_csv():
    code, out = run("sieve", "nonbalanced")
    assert code == 0
    lines = out.splitlines()
    assert lines[0] == "j1,j2,e,ells"
    assert lines[1:] == ["0,3,3,13 19 37", "0,4,4,13", "0,6,6,13 19 37", "0,8,8,13 17",
                         "0,12,12,13 19 37", "4,8,12,29"]


def test_sieve_refine():
    code, out = run("sieve", "refine", "--json")
    assert code == 0
    surv = json.loads(out)["survivors"]
    assert {(s["ell"], s["e"]) for s in surv} == {(13, 3), (19, 3), (13, 6), (19, 6)}


def test_nset():
    code, out = run("scarcity", "nset", "--ell", "47")
    assert code == 0
    assert json.loads(out)["n_set"] == [2, 3, 7, 17, 37, 53, 97]


def test_missing_ell_is_usage_error(capsys):
    code, _ = run("scarcity", "nset")
    assert code == 2


def test_unknown_subcommand():
    assert run("frobnicate")[0] == 2


def test_bad_coeffs_usage():
    assert run("curve-info", "--d", "6", "--coeffs", "[1,2]")[0] == 2
    assert run("curve-info", "--d", "6", "--coeffs", "not json")[0] == 2


def test_singular_is_domain_error():
    assert run("curve-info", "--d", "5", "--coeffs", "[0,0,0,0,0]")[0] == 1


def test_bad_threads():
    assert run("scarcity", "nset", "--ell", "47", "--threads", "zero")[0] == 2


def test_curve_info_e0():
    code, out = run("curve-info", "--d", "6", "--coeffs", E0)
    assert code == 0
    data = json.loads(out)
    assert data["j"] == [8000, 0]
    assert all(r["kind"] == "Good" for r in data["reduction"])


def test_count():
    code, out = run("count", "--p", "5", "--coeffs", "[0,0,0,0,1]")
    assert json.loads(out)["count"] == 6


def test_heavenly_e0_at_2():
    code, out = run("heavenly", "--d", "6", "--coeffs", E0, "--ell", "2")
    assert json.loads(out)["status"] == "ProvenHeavenly"


def test_traces_text():
    code, out = run("traces", "--d", "6", "--coeffs", E0, "--ell", "7", "--p-bound", "300", "--text")
    assert code == 0 and out.endswith("\n") and "residues:" in out


def test_totient():
    code, out = run("totient", "--g", "3")
    assert json.loads(out)["max_lcm"] == 30


def test_output_is_deterministic_across_threads():
    a = run("traces", "--d", "6", "--coeffs", E0, "--ell", "13", "--p-bound", "1500", "--threads", "1")
    b = run("traces", "--d", "6", "--coeffs", E0, "--ell", "13", "--p-bound", "1500", "--threads", "2")
    assert a == b


def test_env_thread_fallback(monkeypatch):
    monkeypatch.setenv("HVN_THREADS", "bogus")
    assert run("scarcity", "nset", "--ell", "47")[0] == 2
    monkeypatch.setenv("HVN_THREADS", "auto")
    assert run("scarcity", "nset", "--ell", "47")[0] == 0
