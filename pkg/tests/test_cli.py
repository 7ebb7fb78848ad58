import json

from randpoly import cli
from randpoly.sampling import VertexSet


def run(capsys, *argv):
    code = cli.main(list(argv))
    return code, capsys.readouterr()


def test_delta(capsys):
    code, out = run(capsys, "delta")
    assert code == 0
    lines = dict(line.split() for line in out.out.splitlines())
    assert lines["f_max_arg"] == "0.800000000000"
    assert abs(float(lines["delta_star"]) - 0.8295) < 1e-4


def test_sample_graph_pair_metrics(tmp_path, capsys):
    qfile = tmp_path / "q.txt"
    code, _ = run(capsys, "sample", "--n", "2", "--rate", "explicit:1", "--out", str(qfile))
    assert code == 0
    assert VertexSet.read(qfile).points == (0, 1, 2, 3)

    code, out = run(capsys, "graph", "--input", str(qfile))
    assert code == 0 and len(json.loads(out.out)["edges"]) == 4

    code, out = run(capsys, "pair", "--input", str(qfile), "--x", "0", "--y", "3", "--averaging", "1")
    doc = json.loads(out.out)
    assert code == 0 and doc["verdict"] == "NonEdge"
    assert doc["averaging"]["points"] == ["1", "2"]

    code, out = run(capsys, "pair", "--input", str(qfile), "--x", "0b10", "--y", "0b00",
                    "--method", "ORACLE_HYPERPLANE")
    assert json.loads(out.out)["verdict"] == "Edge"

    code, out = run(capsys, "metrics", "--input", str(qfile))
    doc = json.loads(out.out)
    assert doc["density"] == "2/3" and doc["expansion"] == "1" and doc["is_clique"] is False


def test_sweep_csv(capsys):
    code, out = run(capsys, "--seed", "5", "sweep", "--n", "4-5", "--rate", "pow2:c=0.3", "--trials", "2")
    assert code == 0
    lines = out.out.splitlines()
    assert lines[0].startswith("n,rate_label,p,trial,seed")
    assert len(lines) == 5
    code2, out2 = run(capsys, "sweep", "--seed", "5", "--n", "4-5", "--rate", "pow2:c=0.3", "--trials", "2")
    strip = lambda t: [ln.rsplit(",", 1)[0] for ln in t.splitlines()]  # noqa: E731
    assert strip(out.out) == strip(out2.out)


def test_count_tuples(capsys):
    code, out = run(capsys, "count-tuples", "--d", "3", "--k", "2")
    doc = json.loads(out.out)
    assert code == 0 and doc["count"] == doc["closed_form"] == 216


def test_verify_exit_codes(capsys, monkeypatch):
    code, out = run(capsys, "verify", "--n-max", "2", "--full-cube")
    assert code == 0 and json.loads(out.out)["pairs_checked"] == 6

    from randpoly import harness
    from randpoly.adjacency import EdgeStatus

    real = harness.run_verify

    def broken(*args, **kwargs):
        kwargs["classify"] = lambda Q, x, y, m, c: EdgeStatus(m == "LP", None)
        return real(*args, **kwargs)

    monkeypatch.setattr(cli, "run_verify", broken)
    code, out = run(capsys, "verify", "--n-max", "2", "--full-cube")
    assert code == 2
    assert json.loads(out.out)["disagreements"]


def test_invalid_config(capsys):
    assert run(capsys, "sweep", "--n", "4", "--rate", "pow2:c=0.3", "--trials", "0")[0] == 3
    assert run(capsys, "sweep", "--n", "4", "--rate", "nonsense")[0] == 3
    assert run(capsys, "graph")[0] == 3
    assert run(capsys, "verify", "--n-max", "9")[0] == 3
    assert run(capsys, "--help")[0] == 0
