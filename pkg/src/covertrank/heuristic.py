"""Cluster-span heuristic: Jaccard similarity, k-medoids, and log ranking.

Nodes that co-occur across logs are grouped with k-medoids under the
distance 1 - Jaccard, and a log's suspiciousness is the number of clusters
it touches.  Logs that bridge many groups are the ones most likely to have
lost a well-connected covert member.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .ranking import RankingResult, rank_logs
from .transmission import LogDataset

__all__ = ["Clustering", "jaccard", "kmedoids", "cluster_weight", "heuristic_rank"]

_MAX_ITERATIONS = 100


@dataclass(frozen=True)
class Clustering:
    """Cluster assignment for every node that appears in the dataset."""

    cluster_of: dict[int, int]
    medoids: tuple[int, ...]

    def __post_init__(self) -> None:
        for l, medoid in enumerate(self.medoids):
            if self.cluster_of.get(medoid) != l:
                raise ValueError("each medoid must belong to its own cluster")

    @property
    def num_clusters(self) -> int:
        return len(self.medoids)

    def members(self, cluster: int) -> list[int]:
        return sorted(j for j, l in self.cluster_of.items() if l == cluster)


def jaccard(ds: LogDataset, a: int, b: int) -> float:
    """Jaccard coefficient of the two nodes' log-occurrence sets.

    Defined as 0 when neither node appears anywhere (no shared evidence).
    """
    d = ds.matrix
    col_a = d[:, a].astype(bool)
    col_b = d[:, b].astype(bool)
    union = int((col_a | col_b).sum())
    if union == 0:
        return 0.0
    return int((col_a & col_b).sum()) / union


def _appearing_nodes(ds: LogDataset) -> np.ndarray:
    return np.flatnonzero(ds.matrix.any(axis=0))


def _distances(ds: LogDataset, nodes: np.ndarray) -> np.ndarray:
    occ = ds.matrix[:, nodes].astype(np.float64)
    inter = occ.T @ occ
    counts = occ.sum(axis=0)
    union = counts[:, None] + counts[None, :] - inter
    return 1.0 - inter / union


def kmedoids(ds: LogDataset, n_clusters: int, seed: int) -> Clustering:
    """Cluster the dataset's appearing nodes under distance 1 - Jaccard.

    Standard alternation: assign every node to its nearest medoid, then move
    each medoid to the member minimizing summed within-cluster distance,
    until assignments are stable or an iteration cap is reached.  Nodes that
    never appear in a log carry no occurrence information and are excluded.
    Medoids are drawn uniformly without replacement with the given seed;
    ties always resolve to the lowest index, so results are deterministic.
    """
    nodes = _appearing_nodes(ds)
    n = nodes.size
    if n_clusters < 1:
        raise ValueError("need at least one cluster")
    if n_clusters > n:
        raise ValueError(f"{n_clusters} clusters requested but only {n} nodes appear")
    dist = _distances(ds, nodes)
    rng = np.random.default_rng(seed)
    medoids = np.sort(rng.choice(n, size=n_clusters, replace=False))

    assignment = np.full(n, -1, dtype=np.int64)
    for _ in range(_MAX_ITERATIONS):
        new_assignment = np.argmin(dist[:, medoids], axis=1)
        new_assignment[medoids] = np.arange(n_clusters)  # a medoid anchors its cluster
        if np.array_equal(new_assignment, assignment):
            break
        assignment = new_assignment
        for l in range(n_clusters):
            members = np.flatnonzero(assignment == l)
            within = dist[np.ix_(members, members)].sum(axis=1)
            medoids[l] = members[int(np.argmin(within))]

    return Clustering(
        cluster_of={int(nodes[p]): int(assignment[p]) for p in range(n)},
        medoids=tuple(int(nodes[m]) for m in medoids),
    )


def cluster_weight(ds: LogDataset, clustering: Clustering, log_index: int, cluster: int) -> float:
    """Correlation strength between a log and a cluster: the best member's
    presence in the log divided by that member's total appearance count."""
    d = ds.matrix
    if not 0 <= log_index < ds.num_logs:
        raise IndexError(f"log index {log_index} out of range")
    if not 0 <= cluster < clustering.num_clusters:
        raise IndexError(f"cluster index {cluster} out of range")
    best = 0.0
    for node in clustering.members(cluster):
        if d[log_index, node]:
            best = max(best, 1.0 / int(d[:, node].sum()))
    return best


def heuristic_rank(ds: LogDataset, n_clusters: int, seed: int) -> RankingResult:
    """Rank logs by the number of clusters they intersect."""
    clustering = kmedoids(ds, n_clusters, seed)
    d = ds.matrix
    scores = np.zeros(ds.num_logs)
    for l in range(n_clusters):
        members = clustering.members(l)
        scores += d[:, members].any(axis=1)
    return rank_logs(scores)
