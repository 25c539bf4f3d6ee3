import csv
import io
import json
import subprocess
import sys

import pytest

from pmeandsg.cli import SWEEP_COLUMNS, main
from pmeandsg.families import Lemma4, generate, lemma4_v1
from pmeandsg.graph import read_edge_list, write_edge_list

from .conftest import BOWTIE_TEXT, K3_TEXT, STAR_TEXT


@pytest.fixture
def files(tmp_path):
    out = {}
    for name, text in [("k3", K3_TEXT), ("star", STAR_TEXT), ("bowtie", BOWTIE_TEXT)]:
        path = tmp_path / f"{name}.txt"
        path.write_text(text)
        out[name] = str(path)
    out["empty"] = str(tmp_path / "empty.txt")
    (tmp_path / "empty.txt").write_text("# nothing\n")
    out["bad"] = str(tmp_path / "bad.txt")
    (tmp_path / "bad.txt").write_text("0 1\n2\n")
    return out


def run(capsys, *argv):
    code = main([str(a) for a in argv])
    cap = capsys.readouterr()
    return code, cap.out, cap.err


def run_json(capsys, *argv):
    code, out, err = run(capsys, *argv)
    assert code == 0, err
    return json.loads(out)


def test_peel_k3(capsys, files):
    rep = run_json(capsys, "peel", files["k3"], "--p", "2", "--algo", "gen")
    assert sorted(rep["set_labels"]) == ["0", "1", "2"]
    assert rep["objective"] == 4.0
    assert rep["metrics"]["avg_pth_power_degree"] == 4.0
    for key in ("command", "p", "algo", "set_labels", "metrics", "seconds", "config_echo",
                "order_length"):
        assert key in rep
    assert rep["order_length"] == 3
    assert rep["trace"]["order_labels"] == ["0", "1", "2"]


def test_peel_simple_p1_reports_maxcore(capsys, files):
    rep = run_json(capsys, "peel", files["bowtie"], "--p", "1", "--algo", "simple")
    assert rep["metrics"]["avg_degree"] == pytest.approx(2.4)
    assert rep["maxcore"]["degeneracy"] == 2
    assert len(rep["maxcore"]["set_labels"]) == 5


def test_peel_trace_limit(capsys, files):
    rep = run_json(capsys, "peel", files["bowtie"], "--trace-limit", "2")
    assert "trace" not in rep


def test_peel_lemma4(capsys, tmp_path):
    spec = Lemma4(4, 2000)
    g = generate(spec)
    path = tmp_path / "l4.txt"
    with open(path, "w") as fh:
        write_edge_list(g, fh)
    rep = run_json(capsys, "peel", path, "--p", "2", "--algo", "gen", "--trace-limit", "0")
    assert len(rep["set_labels"]) == 2004
    assert set(rep["set_labels"]) == {g.labels[v] for v in lemma4_v1(spec).tolist()}


def test_input_errors(capsys, files, tmp_path):
    code, _, err = run(capsys, "peel", files["empty"])
    assert code == 2 and "no edges" in err
    code, _, err = run(capsys, "peel", files["bad"])
    assert code == 2 and "line 2" in err and files["bad"] in err
    code, _, err = run(capsys, "peel", tmp_path / "missing.txt")
    assert code == 2
    code, _, err = run(capsys, "exact", files["k3"], "--p", "0.5")
    assert code == 2 and "supermodularity" in err


def test_zero_degree_inputs(capsys, tmp_path):
    path = tmp_path / "pairs.txt"
    path.write_text("0 0\n1 1\n2 3\n")
    code, _, err = run(capsys, "peel", path, "--p", "-1")
    assert code == 0
    path.write_text("0 1\n2 2\n")
    code, out, err = run(capsys, "stats", path, "--p", "-1")
    assert code == 0 and json.loads(out)["metrics"]["m_p"] is None


@pytest.mark.parametrize("exc", ["UndefinedMetricError", "ConvergenceError"])
def test_numeric_errors_exit_3(capsys, files, monkeypatch, exc):
    import pmeandsg.cli as cli
    from pmeandsg import exact, metrics
    err_type = getattr(metrics, exc, None) or getattr(exact, exc)

    def boom(*_a, **_k):
        raise err_type("no luck")

    monkeypatch.setattr(cli, "exact_pmean", boom)
    code, _, err = run(capsys, "exact", files["k3"], "--p", "2")
    assert code == 3 and "no luck" in err


def test_exact(capsys, files):
    rep = run_json(capsys, "exact", files["bowtie"], "--p", "1", "--method", "bruteforce")
    assert rep["objective"] == pytest.approx(2.4)
    rep = run_json(capsys, "exact", files["bowtie"], "--p", "1")
    assert rep["objective"] == pytest.approx(2.4)
    assert rep["iterations"] == len(rep["alpha_trace"]) > 0
    assert rep["metrics"]["avg_pth_power_degree"] == pytest.approx(rep["objective"])


def test_kcore(capsys, files):
    rep = run_json(capsys, "kcore", files["star"])
    assert rep["degeneracy"] == 1
    rep = run_json(capsys, "kcore", files["bowtie"])
    assert rep["degeneracy"] == 2 and rep["components"] == [["0", "1", "2", "3", "4"]]
    assert rep["core_number"] == {str(v): 2 for v in range(5)}


def test_kcore_reports_components(capsys, tmp_path):
    path = tmp_path / "two.txt"
    path.write_text("a b\nb c\nc a\nx y\ny z\nz x\n")
    rep = run_json(capsys, "kcore", path)
    assert rep["components"] == [["a", "b", "c"], ["x", "y", "z"]]


def test_stats(capsys, files, tmp_path):
    rep = run_json(capsys, "stats", files["bowtie"], "--p", "2")
    assert rep["metrics"]["avg_pth_power_degree"] == pytest.approx(6.4)
    assert rep["graph"] == {"n": 5, "m": 6, "self_loops_dropped": 0, "duplicates_collapsed": 0}
    nodes = tmp_path / "nodes.txt"
    nodes.write_text("0\n1\n2\n")
    rep = run_json(capsys, "stats", files["bowtie"], "--nodes", nodes)
    assert rep["metrics"]["set_size"] == 3 and rep["metrics"]["edge_density"] == 1.0
    nodes.write_text("0\nnope\n")
    code, _, err = run(capsys, "stats", files["bowtie"], "--nodes", nodes)
    assert code == 2 and "nope" in err


def test_generate(capsys, tmp_path):
    out = tmp_path / "g.txt"
    code, _, _ = run(capsys, "generate", "--family", "lemma4", "--d", "2", "--D", "3", "-o", out)
    assert code == 0
    g = read_edge_list(out)
    assert (g.n, g.m) == (17, 24)
    code, text, _ = run(capsys, "generate", "--family", "banded", "--n", "10", "--k", "2")
    assert code == 0 and text.startswith("# banded n=10 m=17")
    code, _, err = run(capsys, "generate", "--family", "banded", "--n", "10")
    assert code == 2 and "--k" in err
    code, _, err = run(capsys, "generate", "--family", "banded", "--n", "10", "--k", "5")
    assert code == 2


def test_generate_er_is_seeded(capsys):
    a = run(capsys, "generate", "--family", "er", "--n", "30", "--prob", "0.2", "--seed", "3")
    b = run(capsys, "generate", "--family", "er", "--n", "30", "--prob", "0.2", "--seed", "3")
    c = run(capsys, "generate", "--family", "er", "--n", "30", "--prob", "0.2", "--seed", "4")
    assert a == b and a != c


def _csv_rows(text):
    rows = list(csv.DictReader(io.StringIO(text)))
    return rows


def test_sweep_default_rows(capsys, files):
    code, out, _ = run(capsys, "sweep", files["bowtie"])
    assert code == 0
    assert out.splitlines()[0].split(",") == SWEEP_COLUMNS
    rows = _csv_rows(out)
    assert [r["p"] for r in rows] == ["-inf", "0.5", "1.0", "1.05", "1.5", "2.0"]
    assert rows[0]["algo"] == "maxcore" and rows[0]["fp"] == ""


def test_sweep_k3(capsys, files):
    _, out, _ = run(capsys, "sweep", files["k3"], "--p-list=-inf,0.5,1,2")
    assert {float(r["avg_degree"]) for r in _csv_rows(out)} == {2.0}


@pytest.mark.parametrize("algo", ["gen", "simple"])
def test_sweep_bowtie(capsys, files, algo):
    _, out, _ = run(capsys, "sweep", files["bowtie"], "--p-list", "1,2", "--algo", algo)
    rows = _csv_rows(out)
    assert [float(r["avg_degree"]) for r in rows] == pytest.approx([2.4, 2.4])
    assert float(rows[1]["fp"]) == pytest.approx(6.4)
    assert float(rows[1]["avg_squared_degree"]) == pytest.approx(6.4)


def test_sweep_json_matches_csv(capsys, files):
    args = ["sweep", files["bowtie"], "--p-list", "0.5,1,2", "--no-timing"]
    _, text, _ = run(capsys, *args)
    rep = run_json(capsys, *args, "--format", "json")
    for row, crow in zip(rep["rows"], _csv_rows(text)):
        assert str(row["size"]) == crow["size"]
        assert row["seconds"] is None and crow["seconds"] == ""


@pytest.mark.parametrize("argv", [
    ["peel", "{bowtie}", "--p", "1.5", "--no-timing"],
    ["peel", "{bowtie}", "--p", "1", "--algo", "simple", "--no-timing", "--format", "csv"],
    ["exact", "{bowtie}", "--p", "2", "--no-timing"],
    ["kcore", "{star}", "--no-timing"],
    ["sweep", "{bowtie}", "--no-timing", "--threads", "4"],
])
def test_deterministic_output(capsys, files, argv):
    argv = [a.format(**files) for a in argv]
    first = run(capsys, *argv)
    second = run(capsys, *argv)
    assert first[0] == 0 and first == second


def test_peel_csv(capsys, files):
    _, out, _ = run(capsys, "peel", files["bowtie"], "--p", "2", "--format", "csv")
    rows = _csv_rows(out)
    assert len(rows) == 1 and rows[0]["size"] == "5"


def test_module_entry_point(files):
    proc = subprocess.run([sys.executable, "-m", "pmeandsg", "kcore", files["k3"]],
                          capture_output=True, text=True, check=True)
    assert json.loads(proc.stdout)["degeneracy"] == 2
