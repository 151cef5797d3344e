from __future__ import annotations

import json
import subprocess
import sys

from mutheta.cli import parse_operator, run
from mutheta.datum import fixture_path, parse_datum_text
from mutheta.theta import OpKind


def ok(argv):
    result = run(argv)
    assert result.exit_code == 0, result.diagnostics
    return result


def test_polygon_example():
    payload = ok(["polygon", "--datum", "fix_inert21.toml"]).payload
    assert payload["slopes"] == ["0", "1/2", "1"]
    assert payload["ordinary"] is False


def test_classify_example():
    payload = ok(["classify", "--datum", "fix_inert21.toml", "--weight", "tau:2,2;taustar:5"]).payload
    flags = payload["flags"]
    assert flags["scalar"] and flags["good"] and not flags["simple"]


def test_empty_argv_is_usage_error():
    result = run([])
    assert result.exit_code == 1 and "usage" in result.diagnostics[0]


def test_unknown_command_is_usage_error():
    assert run(["frobnicate"]).exit_code == 1


def test_parse_and_domain_errors(tmp_path):
    bad = tmp_path / "bad.toml"
    bad.write_text("case = \n")
    assert run(["polygon", "--datum", str(bad)]).exit_code == 2
    assert run(["polygon", "--datum", str(tmp_path / "missing.toml")]).exit_code == 2
    wrong = tmp_path / "wrong.toml"
    wrong.write_text(fixture_path("inert21").read_text().replace("taustar = 1 }", "taustar = 2 }"))
    assert run(["polygon", "--datum", str(wrong)]).exit_code == 3
    assert run(["polygon", "--datum", "c"]).exit_code == 3
    assert run(["classify", "--datum", "inert21", "--weight", "tau:1"]).exit_code == 3
    assert run(["classify", "--datum", "inert21", "--weight", "tau=1"]).exit_code == 2


def test_dump_round_trip(tmp_path):
    text = ok(["datum", "dump", "--datum", "inert21"]).render()
    path = tmp_path / "d.json"
    path.write_text(text)
    again = ok(["datum", "dump", "--datum", str(path)]).render()
    assert again == text
    assert parse_datum_text(text, "json").to_json() == parse_datum_text(again, "json").to_json()


def test_random_datum_is_seeded():
    one = ok(["datum", "random", "--seed", "11"]).render()
    assert one == ok(["datum", "random", "--seed", "11"]).render()
    parse_datum_text(one, "json")


def test_output_is_deterministic():
    argv = ["theta", "cycles", "--datum", "inert21", "--weight", "tau:2,2;taustar:5",
            "--op", "HasseMult|sigma=tau", "--op", "ThetaTilde|lambda=tau:1,0;taustar:1", "--depth", "3"]
    assert ok(argv).render() == ok(argv + ["--workers", "3"]).render()


def test_theta_apply_and_check():
    payload = ok(["theta", "apply", "--datum", "inert21", "--weight", "tau:2,2;taustar:5",
                  "--op", "ThetaTilde|lambda=tau:1,0;taustar:1"]).payload
    assert payload["target"] == {"components": {"tau": [10, 10], "taustar": [17]}}
    payload = ok(["theta", "check", "--datum", "inert21", "--weight", "tau:2,2;taustar:5",
                  "--op", "Theta|lambda=tau:1,0;taustar:1"]).payload
    assert payload["results"][0]["applicable"] is False
    failed = run(["theta", "apply", "--datum", "inert21", "--weight", "tau:2,2;taustar:5",
                  "--op", "Theta|lambda=tau:1,0;taustar:1"])
    assert failed.exit_code == 3 and "not good" in failed.diagnostics[0]


def test_theta_cycles_dot():
    result = ok(["theta", "cycles", "--datum", "inert21", "--op", "HasseMult|sigma=tau",
                 "--depth", "2", "--format", "dot"])
    text = result.render("dot")
    assert text.startswith("digraph {")
    assert text.count("->") == 2


def test_dot_only_for_cycles():
    assert run(["polygon", "--datum", "inert21", "--format", "dot"]).exit_code == 1


def test_table_format():
    text = ok(["classify", "--datum", "inert21", "--weight", "tau:2,2;taustar:5", "--format", "table"]).render("table")
    assert "flags.good\ttrue" in text


def test_weight_file(tmp_path):
    path = tmp_path / "w.json"
    path.write_text(json.dumps({"components": {"tau": [2, 2], "taustar": [5]}}))
    payload = ok(["classify", "--datum", "inert21", "--weight-file", str(path)]).payload
    assert payload["weight"]["components"]["taustar"] == [5]


def test_schur_commands():
    assert ok(["schur", "dim", "--a", "3", "--weight", "2,1,0"]).payload["dim"] == 8
    terms = ok(["schur", "cauchy", "--e", "2", "--a", "2", "--b", "2"]).payload["terms"]
    assert {tuple(t["label"]) for t in terms} == {(2,), (1, 1)}
    assert ok(["schur", "plethysm", "--e", "2", "--a", "2"]).payload["multiplicity_free"]
    assert ok(["schur", "branch", "--weight", "1,1,0", "--blocks", "2,1"]).payload["terms"]
    assert ok(["schur", "admissible", "--datum", "inert21", "--weight", "tau:1,0;taustar:1"]).payload["depth"] == 1


def test_crystal_commands():
    payload = ok(["crystal", "show", "--datum", "inert21"]).payload
    orbit = payload["orbits"][0]
    assert orbit["epsilon"] == [[0, 1, 1], [0, 0, 1]]
    assert orbit["c"] == {"tau": 1, "taustar": 0}
    verify = ok(["crystal", "verify", "--datum", "inert21", "--lemma-literal", "--seed", "3"]).payload
    assert verify["ok"] is True
    assert verify["orbits"][0]["c_orbit_literal_agrees"] is False


def test_galois_orbit():
    payload = ok(["galois", "orbit", "--datum", "inert21", "--weight", "tau:2,2;taustar:5",
                  "--op", "ThetaTilde|lambda=tau:1,0;taustar:1", "--depth", "1"]).payload
    assert [s["exponent"] for s in payload["states"]] == [0, 1]


def test_no_floats_in_payloads():
    def walk(x):
        if isinstance(x, float):
            raise AssertionError(x)
        if isinstance(x, dict):
            for v in x.values():
                walk(v)
        if isinstance(x, list):
            for v in x:
                walk(v)

    for argv in (["polygon", "--datum", "inert21"], ["crystal", "verify", "--datum", "def"],
                 ["classify", "--datum", "inert21", "--weight", "tau:2,1;taustar:3"]):
        walk(ok(argv).payload)


def test_parse_operator_forms(inert21):
    assert parse_operator(inert21, "projector").kind is OpKind.PROJECTOR
    op = parse_operator(inert21, "HasseMult|b=tau:2")
    assert op.exponents == (("tau", 2),)
    op = parse_operator(inert21, "Theta|lambda=tau:1,0;taustar:1|variant=allgood|sigma=tau,taustar")
    assert op.variant == "allgood" and op.sigma == ("tau", "taustar")


def test_console_entry_point():
    proc = subprocess.run([sys.executable, "-m", "mutheta", "polygon", "--datum", "inert21"],
                          capture_output=True, text=True)
    assert proc.returncode == 0 and json.loads(proc.stdout)["ordinary"] is False
    proc = subprocess.run([sys.executable, "-m", "mutheta"], capture_output=True, text=True)
    assert proc.returncode == 1
