"""Covert-member discovery from co-occurrence surveillance logs.

The package synthesizes clustered scale-free social networks, simulates
hub-and-spoke influence transmission to produce surveillance logs with
covert nodes deleted, ranks the logs by suspiciousness (a cluster-span
heuristic and a maximum-likelihood anomaly detector), and evaluates the
rankings with precision/recall/F curves against theoretical-limit and
random baselines.
"""

from .evaluation import (
    EvalCurves,
    evaluate,
    f_measure,
    random_baseline,
    theoretical_limit,
)
from .experiment import (
    ExperimentConfig,
    ExperimentResult,
    resolve_covert,
    run_experiment,
    write_experiment_outputs,
)
from .graph import (
    Graph,
    GraphStats,
    clustering_coefficient,
    degree,
    degree_gini,
    graph_stats,
    read_edge_list,
    write_cluster_file,
    write_edge_list,
)
from .heuristic import Clustering, cluster_weight, heuristic_rank, jaccard, kmedoids
from .mle import (
    FitConfig,
    FitResult,
    fit,
    gradients,
    log_likelihood,
    log_probability,
    score_logs,
)
from .ranking import RankingResult, rank_logs
from .synthesis import SynthesisConfig, synthesize
from .transmission import (
    ActivityPattern,
    LogDataset,
    TransmissionParams,
    count_targets,
    generate_patterns,
    load_dataset,
    params_from_graph,
    project_logs,
    save_logs,
    save_patterns,
    target_flags,
)

__version__ = "0.1.0"
