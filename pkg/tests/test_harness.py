import csv
import io
import json
from fractions import Fraction as F

import pytest

from randpoly.adjacency import AUTO, EdgeStatus, edge_status
from randpoly.harness import (CSV_COLUMNS, ConfigError, SweepConfig, TrialRecord, csv_text, emit_csv,
                              emit_graph_json, run_sweep, run_verify)
from randpoly.adjacency import build_graph
from randpoly.sampling import RateSpec, mix64


def strip_elapsed(text):
    return [row[:-1] for row in csv.reader(io.StringIO(text))]


def test_square_record():
    cfg = SweepConfig((2,), (RateSpec("explicit", 1.0),), metrics=("density", "min_degree", "clique",
                                                                    "expansion", "quadruples"))
    (rec,) = run_sweep(cfg)
    assert (rec.num_vertices, rec.num_edges, rec.num_non_edges) == (4, 4, 2)
    assert rec.density == F(2, 3)
    assert rec.is_clique is False
    assert rec.min_degree == 2
    assert rec.expansion == 1
    assert rec.quadruple_count == 2
    assert rec.derived_seed == mix64(0, 0)


def test_empty_record():
    (rec,) = run_sweep(SweepConfig((5,), (RateSpec("explicit", 0.0),)))
    assert rec.num_vertices == 0
    assert rec.row()[6:13] == [""] * 7


def test_canonical_order_and_seeds():
    cfg = SweepConfig((4, 5), (RateSpec("explicit", 0.5), RateSpec("pow2", 0.3)), trials=3, base_seed=9)
    recs = run_sweep(cfg)
    keys = [(r.n, r.rate_label, r.trial_index) for r in recs]
    assert keys == [(n, rate.label, t) for n in (4, 5) for rate in cfg.rates for t in range(3)]
    seeds = [r.derived_seed for r in recs]
    assert seeds == [mix64(9, i) for i in range(12)]
    assert len(set(seeds)) == len(seeds)


def test_csv_deterministic_and_parallel():
    cfg = SweepConfig((6, 7), (RateSpec("explicit", 0.4), RateSpec("pow2", 0.2)), trials=3, base_seed=1,
                      metrics=("density", "min_degree", "clique", "quadruples"))
    a = csv_text(run_sweep(cfg))
    b = csv_text(run_sweep(cfg))
    c = csv_text(run_sweep(SweepConfig(**{**cfg.__dict__, "workers": 3})))
    assert strip_elapsed(a) == strip_elapsed(b) == strip_elapsed(c)
    assert csv_text(run_sweep(cfg), elapsed=False) == csv_text(run_sweep(cfg), elapsed=False)


def test_auto_pair_sampling():
    rate = RateSpec("explicit", 0.5)
    cfg = SweepConfig((8,), (rate,), metrics=("density",), auto_sample_pairs=1000, pair_budget=300)
    (rec,) = run_sweep(cfg)
    assert rec.sampled
    assert rec.num_edges + rec.num_non_edges == 300
    # a full-graph metric keeps the exact density
    cfg = SweepConfig((8,), (rate,), metrics=("density", "min_degree"), auto_sample_pairs=1000)
    (rec,) = run_sweep(cfg)
    assert not rec.sampled and isinstance(rec.density, F)


def test_clique_only_uses_early_exit():
    cfg = SweepConfig((3,), (RateSpec("explicit", 1.0),), metrics=("clique",))
    (rec,) = run_sweep(cfg)
    assert rec.is_clique is False and rec.num_edges is None


def test_expansion_skipped_above_cap(caplog):
    cfg = SweepConfig((6,), (RateSpec("explicit", 1.0),), metrics=("expansion",))
    assert "expansion requested" in caplog.text
    (rec,) = run_sweep(cfg)
    assert rec.num_vertices == 64 and rec.expansion is None


def test_config_errors():
    with pytest.raises(ConfigError):
        SweepConfig((4,), (RateSpec("pow2", 0.5),), trials=0)
    with pytest.raises(ConfigError):
        SweepConfig((4,), (RateSpec("pow2", 0.5),), metrics=("speed",))
    with pytest.raises(ConfigError):
        SweepConfig((4,), (RateSpec("pow2", 0.5),), method="GUESS")


def test_csv_format(tmp_path):
    path = tmp_path / "out.csv"
    emit_csv([], path)
    assert path.read_text() == ",".join(CSV_COLUMNS) + "\n"
    recs = [TrialRecord(3, "pow2:c=0.5000", 2 ** -1.5, 0, 1, 2, 1, F(1), 1, True, 0, 0, None, 1.5),
            TrialRecord(3, "pow2:c=0.5000", 2 ** -1.5, 1, 2, 0)]
    emit_csv(recs, path)
    lines = path.read_text(encoding="utf-8").splitlines()
    assert len(lines) == 3
    assert lines[1] == "3,pow2:c=0.5000,0.353553390593,0,1,2,1,1,1,true,0,0,,1.500"
    assert lines[2].startswith("3,pow2:c=0.5000,0.353553390593,1,2,0,,,,,,,,")
    assert path.read_text().endswith("\n")


def test_graph_json_file(tmp_path, square):
    path = tmp_path / "g.json"
    emit_graph_json(build_graph(square, certificates=True), path)
    doc = json.loads(path.read_text())
    assert doc["edges"] == [[0, 1], [0, 2], [1, 3], [2, 3]]


def test_verify_square():
    rep = run_verify(2, 1, 0, full_cube=True)
    assert rep.ok and rep.pairs_checked == 6


def test_verify_random_small():
    rep = run_verify(5, 15, 3)
    assert rep.ok and rep.trials == 15


def test_verify_reports_injected_fault():
    def faulty(Q, x, y, method, certify):
        s = edge_status(Q, x, y, method, certify)
        if method == AUTO and (x ^ y).bit_count() == 2:
            return EdgeStatus(not s.is_edge, s.certificate)
        return s

    rep = run_verify(2, 1, 0, full_cube=True, classify=faulty)
    assert not rep.ok
    dump = rep.disagreements[0]
    assert dump["vertices"] == ["0", "1", "2", "3"]
    assert dump["verdicts"]["AUTO"] != dump["verdicts"]["LP"]
    with pytest.raises(ConfigError):
        run_verify(7, 1, 0)
