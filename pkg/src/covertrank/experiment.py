"""End-to-end experiment orchestration: build or load a network, generate
logs with a covert node deleted, rank them with each method, evaluate, and
aggregate curves over seeds."""

from __future__ import annotations

from dataclasses import dataclass, replace
from pathlib import Path

import numpy as np

from .evaluation import (
    CURVE_COLUMNS,
    EvalCurves,
    curve_columns,
    evaluate,
    write_curves_csv,
)
from .figures import MEASURES, render_curves_figure
from .graph import Graph, read_edge_list, write_cluster_file, write_edge_list
from .heuristic import heuristic_rank
from .mle import FitConfig, fit, score_logs
from .ranking import RankingResult, write_ranking_csv
from .synthesis import TWO_LINK_PROBABILITY, SynthesisConfig, synthesize
from .transmission import (
    LogDataset,
    count_targets,
    generate_patterns,
    params_from_graph,
    project_logs,
    save_logs,
    save_patterns,
)

__all__ = [
    "ExperimentConfig",
    "SeedRun",
    "MethodSummary",
    "ExperimentResult",
    "resolve_covert",
    "run_experiment",
    "write_experiment_outputs",
]

KNOWN_METHODS = ("mle", "heuristic")


@dataclass(frozen=True)
class ExperimentConfig:
    """Everything needed to reproduce one experiment.

    The network comes either from a synthesis configuration or from an
    edge-list file.  ``covert`` selects the nodes to hide: ``hub`` (maximum
    degree), ``peripheral`` (minimum degree, ties to the lowest index), or a
    comma-separated list of node labels.
    """

    covert: str
    num_logs: int
    seeds: tuple[int, ...]
    methods: tuple[str, ...] = ("mle", "heuristic")
    synthesis: SynthesisConfig | None = None
    edge_list: str | None = None
    cluster_file: str | None = None
    heuristic_clusters: int = 5
    fit: FitConfig = FitConfig()

    def __post_init__(self) -> None:
        if (self.synthesis is None) == (self.edge_list is None):
            raise ValueError("exactly one of synthesis config or edge list is required")
        if not self.covert:
            raise ValueError("covert selection must be non-empty")
        if self.num_logs < 1:
            raise ValueError("num_logs must be a positive integer")
        if not self.seeds:
            raise ValueError("at least one seed is required")
        if len(set(self.seeds)) != len(self.seeds):
            raise ValueError("seeds must be distinct")
        if not self.methods:
            raise ValueError("at least one method is required")
        for m in self.methods:
            if m not in KNOWN_METHODS:
                raise ValueError(f"unknown method {m!r}; known: {KNOWN_METHODS}")
        if len(set(self.methods)) != len(self.methods):
            raise ValueError("methods must be distinct")
        if self.heuristic_clusters < 1:
            raise ValueError("heuristic_clusters must be a positive integer")


@dataclass(eq=False)
class SeedRun:
    """Raw artifacts of one seed: the network, dataset, rankings, and curves."""

    seed: int
    graph: Graph
    covert_nodes: tuple[int, ...]
    dataset: LogDataset
    target_count: int
    rankings: dict[str, RankingResult]
    curves: dict[str, EvalCurves]


@dataclass(eq=False)
class MethodSummary:
    """Mean and standard deviation of one method's curves across seeds."""

    method: str
    mean: dict[str, np.ndarray]
    std: dict[str, np.ndarray]
    per_seed: tuple[EvalCurves, ...]


@dataclass(eq=False)
class ExperimentResult:
    config: ExperimentConfig
    runs: tuple[SeedRun, ...]
    skipped_seeds: tuple[int, ...]
    methods: dict[str, MethodSummary]
    mean_target_count: float


def resolve_covert(g: Graph, spec: str) -> tuple[int, ...]:
    """Turn a covert selector into node indices; must leave some nodes overt."""
    if spec == "hub":
        nodes = (int(np.argmax(g.degrees)),)
    elif spec == "peripheral":
        nodes = (int(np.argmin(g.degrees)),)
    else:
        try:
            nodes = tuple(g.index_of(lab.strip()) for lab in spec.split(","))
        except KeyError as exc:
            raise ValueError(f"covert label not in graph: {exc}") from None
    if len(set(nodes)) != len(nodes):
        raise ValueError("covert nodes must be distinct")
    if len(nodes) >= g.num_nodes:
        raise ValueError("covert set must be a strict subset of the nodes")
    return nodes


def _child_seeds(seed: int, count: int) -> list[int]:
    # Independent integer seeds for the per-seed stages (synthesis, pattern
    # generation, clustering), stable across runs.
    children = np.random.SeedSequence(seed).spawn(count)
    return [int(c.generate_state(1, np.uint64)[0]) for c in children]


def _rank_with(
    method: str, ds: LogDataset, cfg: ExperimentConfig, kmedoid_seed: int
) -> RankingResult:
    if method == "mle":
        return score_logs(fit(ds, cfg.fit), ds)
    return heuristic_rank(ds, cfg.heuristic_clusters, kmedoid_seed)


def run_experiment(cfg: ExperimentConfig) -> ExperimentResult:
    """Run every seed, skipping those whose dataset has no target logs, and
    aggregate the evaluation curves per method."""
    fixed_graph = None
    if cfg.edge_list is not None:
        fixed_graph = read_edge_list(cfg.edge_list, cfg.cluster_file)

    runs: list[SeedRun] = []
    skipped: list[int] = []
    for seed in cfg.seeds:
        synth_seed, pattern_seed, kmedoid_seed = _child_seeds(seed, 3)
        if fixed_graph is not None:
            graph = fixed_graph
        else:
            graph = synthesize(replace(cfg.synthesis, seed=synth_seed))
        covert = resolve_covert(graph, cfg.covert)
        params = params_from_graph(graph)
        patterns = generate_patterns(params, cfg.num_logs, pattern_seed)
        labels = [graph.label_of(j) for j in range(graph.num_nodes)]
        ds = project_logs(patterns, covert, graph.num_nodes, labels=labels)
        targets = count_targets(ds)
        if targets == 0:
            skipped.append(seed)
            continue
        rankings = {
            m: _rank_with(m, ds, cfg, kmedoid_seed) for m in cfg.methods
        }
        curves = {m: evaluate(rankings[m], ds) for m in cfg.methods}
        runs.append(
            SeedRun(
                seed=seed,
                graph=graph,
                covert_nodes=covert,
                dataset=ds,
                target_count=targets,
                rankings=rankings,
                curves=curves,
            )
        )

    if not runs:
        raise ValueError("every seed produced zero target logs; nothing to evaluate")

    summaries: dict[str, MethodSummary] = {}
    for m in cfg.methods:
        per_seed = tuple(run.curves[m] for run in runs)
        stacked = {
            col: np.stack([curve_columns(c)[col] for c in per_seed])
            for col in CURVE_COLUMNS
        }
        mean = {col: arr.mean(axis=0) for col, arr in stacked.items()}
        if len(per_seed) > 1:
            std = {col: arr.std(axis=0, ddof=1) for col, arr in stacked.items()}
        else:
            std = {col: np.zeros_like(arr[0]) for col, arr in stacked.items()}
        summaries[m] = MethodSummary(method=m, mean=mean, std=std, per_seed=per_seed)

    return ExperimentResult(
        config=cfg,
        runs=tuple(runs),
        skipped_seeds=tuple(skipped),
        methods=summaries,
        mean_target_count=float(np.mean([run.target_count for run in runs])),
    )


def _manifest_lines(result: ExperimentResult) -> list[str]:
    cfg = result.config
    lines: list[str] = []
    if cfg.synthesis is not None:
        s = cfg.synthesis
        rule = (
            str(s.edges_per_node)
            if s.edges_per_node is not None
            else f"stochastic-1-or-2(two_link_probability={TWO_LINK_PROBABILITY})"
        )
        lines += [
            "network = synthesis",
            f"nodes = {s.num_nodes}",
            f"clusters = {s.num_clusters}",
            "cluster_contrast = %.12g" % s.cluster_contrast,
            f"edges_per_node = {rule}",
            f"initial_links = {s.resolved_initial_links}",
        ]
    else:
        lines += [
            f"network = {cfg.edge_list}",
            f"cluster_file = {cfg.cluster_file or 'none'}",
        ]
    lines += [
        f"covert = {cfg.covert}",
        f"num_logs = {cfg.num_logs}",
        f"methods = {','.join(cfg.methods)}",
        f"heuristic_clusters = {cfg.heuristic_clusters}",
        "mle_learning_rate = %.12g" % cfg.fit.learning_rate,
        f"mle_max_iterations = {cfg.fit.max_iterations}",
        "mle_convergence_tol = %.12g" % cfg.fit.convergence_tol,
        "mle_parameter_floor = %.12g" % cfg.fit.parameter_floor,
        f"seeds = {','.join(str(s) for s in cfg.seeds)}",
        f"seeds_used = {','.join(str(r.seed) for r in result.runs)}",
        f"seeds_skipped = {','.join(str(s) for s in result.skipped_seeds)}",
        "mean_target_count = %.12g" % result.mean_target_count,
    ]
    for run in result.runs:
        covert_labels = ",".join(run.graph.label_of(j) for j in run.covert_nodes)
        lines.append(f"seed_{run.seed}_covert = {covert_labels}")
        lines.append(f"seed_{run.seed}_targets = {run.target_count}")
    return lines


def write_experiment_outputs(
    result: ExperimentResult, out_dir: str | Path, figures: bool = True
) -> None:
    """Write all experiment artifacts under ``out_dir``.

    The first used seed's graph, logs, patterns, and rankings are written as
    representative raw artifacts; curves are written as per-method means and
    standard deviations plus per-seed raw files, and each measure is rendered
    to a PNG next to the CSVs.
    """
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    first = result.runs[0]

    write_edge_list(first.graph, out / "graph.edges")
    if first.graph.clusters is not None:
        write_cluster_file(first.graph, out / "graph.clusters")
    save_logs(first.dataset, out / "logs.txt")
    save_patterns(first.dataset, out / "patterns.txt")
    for m in result.config.methods:
        write_ranking_csv(first.rankings[m], out / f"ranking-{m}.csv")

    per_seed_dir = out / "per_seed"
    per_seed_dir.mkdir(exist_ok=True)
    for m, summary in result.methods.items():
        write_curves_csv(summary.mean, out / f"curves-{m}.csv")
        write_curves_csv(summary.std, out / f"curves-{m}-std.csv")
        for run in result.runs:
            write_curves_csv(
                curve_columns(run.curves[m]),
                per_seed_dir / f"curves-{m}-seed{run.seed}.csv",
            )

    (out / "manifest.txt").write_text(
        "\n".join(_manifest_lines(result)) + "\n", encoding="utf-8"
    )

    if figures:
        fraction = result.mean_target_count / result.config.num_logs
        per_method = {m: s.mean for m, s in result.methods.items()}
        for measure in MEASURES:
            render_curves_figure(
                per_method, measure, out / f"fig-{measure}.png", fraction
            )
