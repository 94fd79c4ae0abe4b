"""Command-line interface.

Subcommands cover the pipeline stages individually (``synthesize``,
``gen-logs``, ``rank``, ``evaluate``) and end to end (``experiment``).  All
outputs are deterministic given the same flags and seeds.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from .evaluation import curve_columns, evaluate, write_curves_csv
from .experiment import (
    ExperimentConfig,
    resolve_covert,
    run_experiment,
    write_experiment_outputs,
)
from .figures import MEASURES, render_curves_figure
from .graph import graph_stats, read_edge_list, write_cluster_file, write_edge_list
from .heuristic import heuristic_rank
from .mle import FitConfig, fit, save_fit_csv, score_logs
from .ranking import read_ranking_csv, write_ranking_csv
from .synthesis import SynthesisConfig, synthesize
from .transmission import (
    count_targets,
    generate_patterns,
    load_dataset,
    params_from_graph,
    project_logs,
    save_logs,
    save_patterns,
)

_EXPERIMENT_DEFAULTS = {
    "network": "synth",
    "cluster_file": None,
    "nodes": 101,
    "clusters": 5,
    "contrast": 50.0,
    "edges_per_node": None,
    "initial_links": None,
    "covert": "hub",
    "num_logs": 100,
    "methods": "mle,heuristic",
    "heuristic_clusters": 5,
    "learning_rate": FitConfig().learning_rate,
    "max_iterations": FitConfig().max_iterations,
    "tol": FitConfig().convergence_tol,
    "eps": FitConfig().parameter_floor,
    "seeds": "0..19",
    "out": None,
}

_CONFIG_PARSERS = {
    "network": str,
    "cluster_file": str,
    "nodes": int,
    "clusters": int,
    "contrast": float,
    "edges_per_node": int,
    "initial_links": int,
    "covert": str,
    "num_logs": int,
    "methods": str,
    "heuristic_clusters": int,
    "learning_rate": float,
    "max_iterations": int,
    "tol": float,
    "eps": float,
    "seeds": str,
    "out": str,
}


def parse_seeds(spec: str) -> tuple[int, ...]:
    """Parse seed lists like ``0..19`` or ``1,2,5`` (ranges are inclusive)."""
    seeds: list[int] = []
    for part in spec.split(","):
        part = part.strip()
        if not part:
            continue
        if ".." in part:
            lo, hi = part.split("..")
            seeds.extend(range(int(lo), int(hi) + 1))
        else:
            seeds.append(int(part))
    if not seeds:
        raise ValueError(f"no seeds in {spec!r}")
    return tuple(seeds)


def read_config_file(path: str | Path) -> dict:
    """Read a flat ``key = value`` config file (``#`` starts a comment)."""
    values: dict = {}
    for lineno, raw in enumerate(Path(path).read_text(encoding="utf-8").splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ValueError(f"{path}:{lineno}: expected 'key = value'")
        key, value = (s.strip() for s in line.split("=", 1))
        if key not in _CONFIG_PARSERS:
            raise ValueError(f"{path}:{lineno}: unknown key {key!r}")
        values[key] = _CONFIG_PARSERS[key](value)
    return values


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="covertrank",
        description="Rank surveillance logs by the likelihood that a covert "
        "network member was deleted from them.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("synthesize", help="generate a clustered scale-free network")
    p.add_argument("--nodes", type=int, default=101)
    p.add_argument("--clusters", type=int, default=5)
    p.add_argument("--contrast", type=float, default=50.0)
    p.add_argument("--edges-per-node", type=int, default=None)
    p.add_argument("--initial-links", type=int, default=None)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", required=True, help="output directory")

    p = sub.add_parser("gen-logs", help="simulate transmission and project logs")
    p.add_argument("--graph", required=True, help="edge-list file")
    p.add_argument("--covert", default="hub", help="hub | peripheral | labels")
    p.add_argument("--num-logs", type=int, default=100)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", required=True)

    p = sub.add_parser("rank", help="rank a log dataset by suspiciousness")
    p.add_argument("--logs", required=True, help="dataset file")
    p.add_argument("--method", choices=("mle", "heuristic"), required=True)
    p.add_argument("--clusters", type=int, default=5, help="heuristic cluster count")
    p.add_argument("--seed", type=int, default=0, help="heuristic medoid seed")
    p.add_argument("--learning-rate", type=float, default=FitConfig().learning_rate)
    p.add_argument("--max-iters", type=int, default=FitConfig().max_iterations)
    p.add_argument("--tol", type=float, default=FitConfig().convergence_tol)
    p.add_argument("--eps", type=float, default=FitConfig().parameter_floor)
    p.add_argument("--dump-fit", action="store_true", help="also write fitted parameters")
    p.add_argument("--out", required=True)

    p = sub.add_parser("evaluate", help="score a ranking against ground truth")
    p.add_argument("--logs", required=True)
    p.add_argument("--patterns", required=True, help="ground-truth patterns file")
    p.add_argument("--ranking", required=True, help="ranking CSV")
    p.add_argument("--label", default=None, help="method label for output names")
    p.add_argument("--out", required=True)

    p = sub.add_parser("experiment", help="run the full pipeline over many seeds")
    p.add_argument("--config", default=None, help="flat key = value config file")
    p.add_argument("--network", default=None, help="'synth' or an edge-list path")
    p.add_argument("--cluster-file", default=None)
    p.add_argument("--nodes", type=int, default=None)
    p.add_argument("--clusters", type=int, default=None)
    p.add_argument("--contrast", type=float, default=None)
    p.add_argument("--edges-per-node", type=int, default=None)
    p.add_argument("--initial-links", type=int, default=None)
    p.add_argument("--covert", default=None)
    p.add_argument("--num-logs", type=int, default=None)
    p.add_argument("--methods", default=None)
    p.add_argument("--heuristic-clusters", type=int, default=None)
    p.add_argument("--learning-rate", type=float, default=None)
    p.add_argument("--max-iterations", type=int, default=None)
    p.add_argument("--tol", type=float, default=None)
    p.add_argument("--eps", type=float, default=None)
    p.add_argument("--seeds", default=None)
    p.add_argument("--out", default=None)

    return parser


def _cmd_synthesize(args: argparse.Namespace) -> int:
    cfg = SynthesisConfig(
        num_nodes=args.nodes,
        num_clusters=args.clusters,
        cluster_contrast=args.contrast,
        edges_per_node=args.edges_per_node,
        initial_links=args.initial_links,
        seed=args.seed,
    )
    g = synthesize(cfg)
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    write_edge_list(g, out / "graph.edges")
    write_cluster_file(g, out / "graph.clusters")
    stats = graph_stats(g)
    print(
        f"wrote {out / 'graph.edges'}: {g.num_nodes} nodes, {len(g.edges)} edges, "
        f"avg degree {stats.avg_degree:.2f}, avg clustering {stats.avg_clustering:.2f}, "
        f"degree gini {stats.degree_gini:.2f}"
    )
    return 0


def _cmd_gen_logs(args: argparse.Namespace) -> int:
    g = read_edge_list(args.graph)
    covert = resolve_covert(g, args.covert)
    params = params_from_graph(g)
    patterns = generate_patterns(params, args.num_logs, args.seed)
    labels = [g.label_of(j) for j in range(g.num_nodes)]
    ds = project_logs(patterns, covert, g.num_nodes, labels=labels)
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    save_logs(ds, out / "logs.txt")
    save_patterns(ds, out / "patterns.txt")
    covert_labels = ",".join(g.label_of(j) for j in covert)
    print(
        f"wrote {out / 'logs.txt'}: {ds.num_logs} logs over {ds.num_nodes} overt "
        f"nodes, covert {covert_labels}, {count_targets(ds)} target logs"
    )
    return 0


def _cmd_rank(args: argparse.Namespace) -> int:
    ds = load_dataset(args.logs)
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    if args.method == "mle":
        cfg = FitConfig(
            learning_rate=args.learning_rate,
            max_iterations=args.max_iters,
            convergence_tol=args.tol,
            parameter_floor=args.eps,
        )
        result = fit(ds, cfg)
        ranking = score_logs(result, ds)
        if args.dump_fit:
            save_fit_csv(
                result, out / "fit-transmission.csv", out / "fit-initiation.csv"
            )
        note = "converged" if result.converged else "iteration cap reached"
        print(
            f"fit: {len(result.trace) - 1} iterations ({note}), "
            f"final log-likelihood {result.trace[-1]:.4f}"
        )
    else:
        ranking = heuristic_rank(ds, args.clusters, args.seed)
    path = out / f"ranking-{args.method}.csv"
    write_ranking_csv(ranking, path)
    print(f"wrote {path}: top log index {int(ranking.order[0])}")
    return 0


def _cmd_evaluate(args: argparse.Namespace) -> int:
    ds = load_dataset(args.logs, args.patterns)
    ranking = read_ranking_csv(args.ranking)
    label = args.label
    if label is None:
        stem = Path(args.ranking).stem
        label = stem.removeprefix("ranking-") or "method"
    curves = evaluate(ranking, ds)
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    columns = curve_columns(curves)
    write_curves_csv(columns, out / f"curves-{label}.csv")
    fraction = curves.target_count / curves.num_logs
    for measure in MEASURES:
        render_curves_figure(
            {label: columns}, measure, out / f"fig-{measure}.png", fraction
        )
    peak = float(curves.f.max())
    print(
        f"wrote {out / f'curves-{label}.csv'}: {curves.target_count} targets, "
        f"peak F {peak:.3f}"
    )
    return 0


def _cmd_experiment(args: argparse.Namespace) -> int:
    values = dict(_EXPERIMENT_DEFAULTS)
    if args.config is not None:
        values.update(read_config_file(args.config))
    for key in _EXPERIMENT_DEFAULTS:
        flag = getattr(args, key, None)
        if flag is not None:
            values[key] = flag
    if values["out"] is None:
        raise ValueError("an output directory is required (--out or 'out =' in config)")

    if values["network"] == "synth":
        synthesis = SynthesisConfig(
            num_nodes=values["nodes"],
            num_clusters=values["clusters"],
            cluster_contrast=values["contrast"],
            edges_per_node=values["edges_per_node"],
            initial_links=values["initial_links"],
        )
        edge_list = None
    else:
        synthesis = None
        edge_list = values["network"]

    cfg = ExperimentConfig(
        covert=values["covert"],
        num_logs=values["num_logs"],
        seeds=parse_seeds(values["seeds"]),
        methods=tuple(m.strip() for m in values["methods"].split(",") if m.strip()),
        synthesis=synthesis,
        edge_list=edge_list,
        cluster_file=values["cluster_file"],
        heuristic_clusters=values["heuristic_clusters"],
        fit=FitConfig(
            learning_rate=values["learning_rate"],
            max_iterations=values["max_iterations"],
            convergence_tol=values["tol"],
            parameter_floor=values["eps"],
        ),
    )
    result = run_experiment(cfg)
    write_experiment_outputs(result, values["out"])
    print(
        f"{len(result.runs)} seeds used, {len(result.skipped_seeds)} skipped "
        f"(no target logs), mean target count {result.mean_target_count:.2f}"
    )
    for m, summary in result.methods.items():
        print(f"  {m}: peak mean F {float(summary.mean['f'].max()):.3f}")
    print(f"outputs under {values['out']}")
    return 0


_COMMANDS = {
    "synthesize": _cmd_synthesize,
    "gen-logs": _cmd_gen_logs,
    "rank": _cmd_rank,
    "evaluate": _cmd_evaluate,
    "experiment": _cmd_experiment,
}


def main(argv: list[str] | None = None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        return _COMMANDS[args.command](args)
    except (ValueError, OSError, KeyError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
