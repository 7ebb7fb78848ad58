"""Parameter sweeps, oracle cross-validation and CSV / JSON output."""

from __future__ import annotations

import csv
import io
import json
import logging
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Callable, Optional, Sequence

from . import metrics as M
from .adjacency import (AUTO, METHODS, EdgeStatus,
                        PolytopeGraph, build_graph, edge_status, find_non_edge, replay)
from .analytics import count_witness_quadruples
from .sampling import RateSpec, SplitMix64, VertexSet, mix64, resolve_rate, sample_vertex_set

log = logging.getLogger(__name__)

CSV_COLUMNS = ("n", "rate_label", "p", "trial", "seed", "num_vertices", "num_edges", "density",
               "min_degree", "is_clique", "num_non_edges", "quadruples", "expansion", "elapsed_ms")
METRICS = ("density", "density_sampled", "min_degree", "clique", "expansion", "quadruples")

DEFAULT_PAIR_BUDGET = 10_000
AUTO_SAMPLE_PAIRS = 200_000
MAX_QUADRUPLE_VERTICES = 5_000


class ConfigError(ValueError):
    pass


@dataclass(frozen=True)
class SweepConfig:
    n_list: tuple[int, ...]
    rates: tuple[RateSpec, ...]
    trials: int = 1
    base_seed: int = 0
    metrics: tuple[str, ...] = ("density", "min_degree", "clique")
    method: str = AUTO
    output: Optional[str] = None
    pair_budget: int = DEFAULT_PAIR_BUDGET
    # density falls back to pair sampling above this many pairs unless some
    # other requested metric needs the whole graph; None disables the fallback
    auto_sample_pairs: Optional[int] = AUTO_SAMPLE_PAIRS
    workers: int = 1

    def __post_init__(self):
        object.__setattr__(self, "n_list", tuple(self.n_list))
        object.__setattr__(self, "rates", tuple(self.rates))
        object.__setattr__(self, "metrics", tuple(self.metrics))
        if self.trials < 1:
            raise ConfigError("trials must be >= 1")
        if not self.n_list or not self.rates:
            raise ConfigError("need at least one dimension and one rate")
        for n in self.n_list:
            if not 1 <= n <= 64:
                raise ConfigError(f"dimension {n} outside [1, 64]")
        bad = set(self.metrics) - set(METRICS)
        if bad:
            raise ConfigError(f"unknown metrics {sorted(bad)}")
        if self.method not in METHODS:
            raise ConfigError(f"unknown method {self.method!r}")
        if self.pair_budget < 1:
            raise ConfigError("pair_budget must be positive")
        if self.workers < 1:
            raise ConfigError("workers must be >= 1")
        if "expansion" in self.metrics:
            for n in self.n_list:
                for rate in self.rates:
                    expected = resolve_rate(rate, n) * 2.0 ** n
                    if expected > M.MAX_EXPANSION_VERTICES:
                        log.warning("expansion requested at n=%d, %s with E|V| = %.1f > %d; "
                                    "trials above the cap will record no expansion",
                                    n, rate.label, expected, M.MAX_EXPANSION_VERTICES)


@dataclass
class TrialRecord:
    n: int
    rate_label: str
    p: float
    trial_index: int
    derived_seed: int
    num_vertices: int
    num_edges: Optional[int] = None
    density: Optional[object] = None
    min_degree: Optional[int] = None
    is_clique: Optional[bool] = None
    num_non_edges: Optional[int] = None
    quadruple_count: Optional[int] = None
    expansion: Optional[Fraction] = None
    elapsed_ms: float = 0.0
    sampled: bool = False

    def row(self) -> list[str]:
        def num(v):
            if v is None:
                return ""
            if isinstance(v, bool):
                return "true" if v else "false"
            if isinstance(v, int):
                return str(v)
            return format(float(v), ".12g")

        return [str(self.n), self.rate_label, num(self.p), str(self.trial_index), str(self.derived_seed),
                str(self.num_vertices), num(self.num_edges), num(self.density), num(self.min_degree),
                num(self.is_clique), num(self.num_non_edges), num(self.quadruple_count),
                num(self.expansion), f"{self.elapsed_ms:.3f}"]


def _cells(config: SweepConfig):
    index = 0
    for n in config.n_list:
        for rate in config.rates:
            for t in range(config.trials):
                yield index, n, rate, t
                index += 1


def run_trial(config: SweepConfig, cell_index: int, n: int, rate: RateSpec, trial: int) -> TrialRecord:
    start = time.perf_counter()
    seed = mix64(config.base_seed, cell_index)
    p = resolve_rate(rate, n)
    Q = sample_vertex_set(n, p, seed, rate)
    N = len(Q)
    rec = TrialRecord(n, rate.label, p, trial, seed, N)
    want = set(config.metrics)
    if N == 0:
        rec.elapsed_ms = (time.perf_counter() - start) * 1000
        return rec

    pairs = N * (N - 1) // 2
    needs_graph = bool(want & {"min_degree", "expansion"})
    too_many = config.auto_sample_pairs is not None and pairs > config.auto_sample_pairs
    full = needs_graph or ("density" in want and not too_many)
    sampled = "density_sampled" in want or ("density" in want and too_many and not needs_graph)

    if full:
        G = build_graph(Q, config.method)
        rec.num_edges = len(G.edges)
        rec.num_non_edges = len(G.non_edges)
        if "density" in want or "density_sampled" in want:
            rec.density = M.density(G)
        if "min_degree" in want:
            rec.min_degree = M.min_degree(G)
        if "clique" in want:
            rec.is_clique = M.is_clique(G)
        if "expansion" in want and 2 <= N <= M.MAX_EXPANSION_VERTICES:
            rec.expansion = M.edge_expansion(G)
    elif sampled:
        G = build_graph(Q, config.method, pair_budget=config.pair_budget, seed=mix64(seed, 1))
        rec.sampled = G.sampled
        rec.num_edges = len(G.edges)
        rec.num_non_edges = len(G.non_edges)
        rec.density = Fraction(len(G.edges), G.num_pairs) if G.num_pairs else Fraction(1)
    if "clique" in want and rec.is_clique is None:
        if full:
            rec.is_clique = M.is_clique(G)
        else:
            rec.is_clique = find_non_edge(Q, config.method) is None
    if "quadruples" in want and N <= MAX_QUADRUPLE_VERTICES:
        rec.quadruple_count = count_witness_quadruples(Q)
    rec.elapsed_ms = (time.perf_counter() - start) * 1000
    return rec


def _run_cell(args):
    config, index, n, rate, t = args
    return index, run_trial(config, index, n, rate, t)


def run_sweep(config: SweepConfig) -> list[TrialRecord]:
    """All (n, rate, trial) cells, in canonical order whatever the worker count."""
    jobs = [(config, index, n, rate, t) for index, n, rate, t in _cells(config)]
    if config.workers > 1:
        with ProcessPoolExecutor(max_workers=config.workers) as pool:
            results = list(pool.map(_run_cell, jobs))
    else:
        results = [_run_cell(job) for job in jobs]
    results.sort(key=lambda item: item[0])
    records = [rec for _, rec in results]
    if config.output:
        emit_csv(records, config.output)
    return records


# --------------------------------------------------------------------------
# output


def csv_text(records: Sequence[TrialRecord], elapsed: bool = True) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    cols = list(CSV_COLUMNS) if elapsed else list(CSV_COLUMNS[:-1])
    writer.writerow(cols)
    for rec in records:
        row = rec.row()
        writer.writerow(row if elapsed else row[:-1])
    return buf.getvalue()


def emit_csv(records: Sequence[TrialRecord], path) -> None:
    Path(path).write_text(csv_text(records), encoding="utf-8")


def graph_json_text(G: PolytopeGraph) -> str:
    return json.dumps(G.to_json(), indent=2) + "\n"


def emit_graph_json(G: PolytopeGraph, path) -> None:
    Path(path).write_text(graph_json_text(G), encoding="utf-8")


# --------------------------------------------------------------------------
# cross-validation of the four deciders


@dataclass
class VerifyReport:
    trials: int = 0
    pairs_checked: int = 0
    disagreements: list = field(default_factory=list)
    replay_failures: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.disagreements and not self.replay_failures

    def to_json(self) -> dict:
        return {
            "trials": self.trials,
            "pairs_checked": self.pairs_checked,
            "ok": self.ok,
            "disagreements": self.disagreements,
            "replay_failures": self.replay_failures,
        }


def _dump(Q: VertexSet, x: int, y: int, verdicts: dict) -> dict:
    w = (Q.n + 3) // 4
    return {
        "n": Q.n,
        "vertices": [format(z, f"0{w}x") for z in Q.points],
        "x": format(x, f"0{w}x"),
        "y": format(y, f"0{w}x"),
        "verdicts": verdicts,
    }


def verify_instance(Q: VertexSet, report: VerifyReport,
                    classify: Callable[..., EdgeStatus] = edge_status) -> None:
    pts = Q.points
    for a in range(len(pts)):
        for b in range(a + 1, len(pts)):
            x, y = pts[a], pts[b]
            results = {m: classify(Q, x, y, m, True) for m in METHODS}
            report.pairs_checked += 1
            verdicts = {m: s.verdict for m, s in results.items()}
            if len(set(verdicts.values())) > 1:
                report.disagreements.append(_dump(Q, x, y, verdicts))
                continue
            for m, s in results.items():
                if s.certificate is None or not replay(Q, x, y, s):
                    dump = _dump(Q, x, y, verdicts)
                    dump["method"] = m
                    dump["certificate"] = s.certificate.to_json() if s.certificate else None
                    report.replay_failures.append(dump)


def run_verify(n_max: int, trials: int, seed: int, n_min: int = 3,
               probabilities: Sequence[float] = (0.2, 0.5, 0.8), full_cube: bool = False,
               classify: Callable[..., EdgeStatus] = edge_status) -> VerifyReport:
    """Sample instances and check that all deciders agree and every certificate replays.

    Trial t draws n uniformly from [n_min, n_max] and p from ``probabilities``
    using the stream seeded by mix64(seed, t); ``full_cube`` replaces the
    sample by all of {0,1}^n_max.
    """
    if not 1 <= n_max <= 6:
        raise ConfigError("verification is limited to n_max <= 6")
    n_min = min(n_min, n_max)
    if full_cube:
        trials = min(trials, 1)
    report = VerifyReport()
    for t in range(trials):
        tseed = mix64(seed, t)
        if full_cube:
            Q = VertexSet.full_cube(n_max)
        else:
            rng = SplitMix64(tseed)
            n = n_min + rng.below(n_max - n_min + 1)
            p = probabilities[rng.below(len(probabilities))]
            Q = sample_vertex_set(n, p, mix64(tseed, 1))
        verify_instance(Q, report, classify)
        report.trials += 1
    return report
