import csv
import io
import json
import subprocess
import sys

import pytest

from crux_subdiv import generate, serialize_graph
from crux_subdiv.cli import main

PETERSEN = '{"kind":"petersen"}'


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def as_json(out):
    return json.loads(out)


def test_analyze_petersen(capsys):
    code, out, _ = run(capsys, "analyze", "--spec", PETERSEN)
    rep = as_json(out)
    assert code == 0 and (rep["n"], rep["d"], rep["δ"]) == (10, 3, 3)
    assert rep["components"] == 1 and rep["backend"] in ("numba", "numpy")


def test_crux_hypercube(capsys):
    code, out, _ = run(capsys, "crux", "--spec", '{"kind":"hypercube","dim":3}', "--alpha", "1/2", "--mode", "exact")
    rep = as_json(out)
    assert code == 0 and (rep["lower"], rep["upper"]) == (4, 4)
    code, out, _ = run(capsys, "crux", "--spec", '{"kind":"hypercube","dim":3}', "--alpha", "1/2", "--mode", "sampled")
    rep = as_json(out)
    assert rep["lower"] <= 4 <= rep["upper"]


@pytest.fixture
def petersen_file(tmp_path):
    path = tmp_path / "g.txt"
    path.write_text(serialize_graph(generate({"kind": "petersen"})) + "\n")
    return path


def test_find_then_verify_then_tamper(capsys, tmp_path, petersen_file):
    report = tmp_path / "report.json"
    trace = tmp_path / "trace.jsonl"
    code, _, _ = run(capsys, "find-subdivision", "--graph", str(petersen_file), "--out", str(report), "--trace", str(trace))
    rep = json.loads(report.read_text())
    assert code == 0 and rep["t"] == 4 and rep["verified"]
    assert all(json.loads(line)["stage"] for line in trace.read_text().splitlines())

    code, out, _ = run(capsys, "verify", "--graph", str(petersen_file), "--cert", str(report))
    assert code == 0 and as_json(out)["valid"]

    cert = rep["certificate"]
    key = next(k for k, p in cert["paths"].items() if len(p) > 2)
    cert["paths"][key] = cert["paths"][key][:1] + cert["paths"][key][2:]
    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps(cert))
    code, out, _ = run(capsys, "verify", "--graph", str(petersen_file), "--cert", str(bad))
    rep = as_json(out)
    assert code == 1 and not rep["valid"] and rep["violations"]


def test_verify_garbage_cert(capsys, tmp_path, petersen_file):
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    code, out, _ = run(capsys, "verify", "--graph", str(petersen_file), "--cert", str(bad))
    assert code == 1 and as_json(out)["violations"][0]["kind"] == "malformed"


def test_find_subdivision_exact_mode(capsys):
    code, out, _ = run(capsys, "find-subdivision", "--spec", '{"kind":"complete_bipartite","a":3,"b":3}', "--mode", "exact")
    assert code == 0 and as_json(out)["t"] == 4


def test_gen_round_trip(capsys):
    code, out, _ = run(capsys, "gen", "--spec", '{"kind":"gnp","n":20,"p":0.3}', "--seed", "9")
    again = run(capsys, "gen", "--spec", '{"kind":"gnp","n":20,"p":0.3}', "--seed", "9")[1]
    assert code == 0 and out == again
    assert out.splitlines()[0].startswith("20 ")


def test_expander_commands(capsys):
    code, out, _ = run(capsys, "extract-expander", "--spec", '{"kind":"complete","n":8}', "--eps", "0.05")
    rep = as_json(out)
    assert code == 0 and rep["status"] == "ok" and rep["n"] == 8
    code, out, _ = run(capsys, "check-expander", "--spec", '{"kind":"complete","n":8}', "--eps", "0.05")
    assert code == 0 and as_json(out)["verdict"] == "certified"
    two = '{"kind":"disjoint_union","parts":[{"kind":"complete","n":4},{"kind":"complete","n":4}]}'
    code, out, _ = run(capsys, "check-expander", "--spec", two, "--eps", "0.05")
    rep = as_json(out)
    assert code == 0 and rep["verdict"] == "refuted" and rep["witness_set"] == [0, 1, 2, 3]


def test_profile_sse_gadget(capsys):
    code, out, _ = run(capsys, "profile", "--spec", '{"kind":"complete","n":10}', "--delta", "3/10")
    assert code == 0 and as_json(out)["value"] == "7/9"
    code, out, _ = run(capsys, "sse", "--spec", '{"kind":"complete","n":8}', "--eps", "1/2")
    assert code == 0 and as_json(out)["holds"]
    code, out, _ = run(capsys, "gadget", "--spec", '{"kind":"cycle","n":5}', "--k", "3")
    rep = as_json(out)
    assert code == 0 and (rep["n"], rep["omega"]) == (20, 2)


def test_experiment_commands(capsys, tmp_path):
    table = tmp_path / "rows.csv"
    code, out, _ = run(capsys, "experiment-dichotomy", "--n", "30", "--p", "0.2,0.5", "--trials", "1", "--csv", str(table))
    assert code == 0 and as_json(out)["experiment"] == "dichotomy"
    rows = list(csv.reader(io.StringIO(table.read_text())))
    assert rows[0][0] == "p" and len(rows) == 3
    code, out, _ = run(capsys, "experiment-jung", "--a", "3", "--copies", "2")
    assert code == 0 and as_json(out)["summary"]["equal"]
    code, out, _ = run(capsys, "experiment-bipartite", "--t", "6", "--host", '{"kind":"complete","n":8}')
    assert code == 0 and as_json(out)["summary"]["max_cross_edges"] == 9


def test_config_file(capsys, tmp_path):
    cfg = tmp_path / "cfg.json"
    cfg.write_text(json.dumps({"stages": ["direct"], "oracle_threshold": 0}))
    code, out, _ = run(capsys, "find-subdivision", "--spec", '{"kind":"complete","n":15}', "--config", str(cfg))
    assert code == 0 and as_json(out)["t"] == 15
    cfg.write_text(json.dumps({"warp": 9}))
    code, _, err = run(capsys, "find-subdivision", "--spec", '{"kind":"complete","n":15}', "--config", str(cfg))
    assert code == 2 and "unknown config keys" in err


@pytest.mark.parametrize(
    "argv",
    [
        ["analyze", "--spec", '{"kind":"nope"}'],
        ["analyze", "--spec", "{bad json"],
        ["bogus"],
        ["crux", "--spec", '{"kind":"complete","n":30}', "--alpha", "1/2"],
        ["verify", "--spec", PETERSEN],
        ["profile", "--spec", PETERSEN],
        ["check-expander", "--spec", PETERSEN, "--eps", "0.9"],
    ],
)
def test_usage_errors_exit_two(capsys, argv):
    assert run(capsys, *argv)[0] == 2


def test_console_entry_point_subprocess(tmp_path):
    # the installed module entry, with stdin graph input
    text = serialize_graph(generate({"kind": "cycle", "n": 6})) + "\n"
    proc = subprocess.run(
        [sys.executable, "-m", "crux_subdiv.cli", "analyze", "--graph", "-"],
        input=text,
        capture_output=True,
        text=True,
        check=False,
    )
    assert proc.returncode == 0 and json.loads(proc.stdout)["m"] == 6
    proc = subprocess.run([sys.executable, "-m", "crux_subdiv.cli", "nope"], capture_output=True, text=True, check=False)
    assert proc.returncode == 2 and proc.stderr
