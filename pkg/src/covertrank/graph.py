"""Undirected social-network graphs and their topological statistics."""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from pathlib import Path
from typing import Iterable

import numpy as np

__all__ = [
    "Graph",
    "GraphStats",
    "degree",
    "clustering_coefficient",
    "degree_gini",
    "graph_stats",
    "read_edge_list",
    "write_edge_list",
    "write_cluster_file",
]


@dataclass(frozen=True)
class Graph:
    """Immutable undirected graph over nodes ``0 .. num_nodes-1``.

    Edges are unordered pairs stored canonically as ``(u, v)`` with ``u < v``.
    ``clusters`` optionally assigns every node a cluster index in ``0..C-1``;
    ``labels`` optionally names every node (names must be unique).
    """

    num_nodes: int
    edges: frozenset[tuple[int, int]]
    clusters: tuple[int, ...] | None = None
    labels: tuple[str, ...] | None = None

    def __post_init__(self) -> None:
        if self.num_nodes < 1:
            raise ValueError("graph needs at least one node")
        for u, v in self.edges:
            if not (0 <= u < v < self.num_nodes):
                raise ValueError(f"bad edge ({u}, {v}) in a {self.num_nodes}-node graph")
        if self.clusters is not None:
            if len(self.clusters) != self.num_nodes:
                raise ValueError("cluster assignment must cover every node")
            present = set(self.clusters)
            if present != set(range(max(present) + 1)):
                raise ValueError("cluster indices must form a dense range 0..C-1")
        if self.labels is not None:
            if len(self.labels) != self.num_nodes:
                raise ValueError("labels must cover every node")
            if len(set(self.labels)) != self.num_nodes:
                raise ValueError("node labels must be unique")

    @classmethod
    def from_edges(
        cls,
        num_nodes: int,
        edges: Iterable[tuple[int, int]],
        clusters: Iterable[int] | None = None,
        labels: Iterable[str] | None = None,
    ) -> "Graph":
        """Build a graph from an iterable of node-index pairs, normalizing order."""
        canon: set[tuple[int, int]] = set()
        for u, v in edges:
            if u == v:
                raise ValueError(f"self-loop at node {u}")
            canon.add((u, v) if u < v else (v, u))
        return cls(
            num_nodes,
            frozenset(canon),
            tuple(clusters) if clusters is not None else None,
            tuple(labels) if labels is not None else None,
        )

    @cached_property
    def adjacency(self) -> tuple[frozenset[int], ...]:
        neigh: list[set[int]] = [set() for _ in range(self.num_nodes)]
        for u, v in self.edges:
            neigh[u].add(v)
            neigh[v].add(u)
        return tuple(frozenset(s) for s in neigh)

    @cached_property
    def degrees(self) -> np.ndarray:
        return np.array([len(s) for s in self.adjacency], dtype=np.int64)

    @property
    def num_clusters(self) -> int:
        if self.clusters is None:
            raise ValueError("graph has no cluster assignment")
        return max(self.clusters) + 1

    def label_of(self, node: int) -> str:
        _check_node(self, node)
        return self.labels[node] if self.labels is not None else f"n{node}"

    def index_of(self, label: str) -> int:
        """Node index for a label (falls back to the default n<j> scheme)."""
        if self.labels is not None:
            try:
                return self.labels.index(label)
            except ValueError:
                raise KeyError(f"unknown node label {label!r}") from None
        if label.startswith("n") and label[1:].isdigit():
            j = int(label[1:])
            if j < self.num_nodes:
                return j
        raise KeyError(f"unknown node label {label!r}")


@dataclass(frozen=True)
class GraphStats:
    avg_degree: float
    avg_clustering: float
    degree_gini: float


def _check_node(g: Graph, node: int) -> None:
    if not 0 <= node < g.num_nodes:
        raise IndexError(f"node {node} out of range for a {g.num_nodes}-node graph")


def degree(g: Graph, node: int) -> int:
    """Number of edges incident to ``node``."""
    _check_node(g, node)
    return len(g.adjacency[node])


def clustering_coefficient(g: Graph, node: int) -> float:
    """Fraction of the node's neighbor pairs that are themselves linked.

    Nodes with fewer than two neighbors have no neighbor pairs and get 0.
    """
    _check_node(g, node)
    neigh = g.adjacency[node]
    k = len(neigh)
    if k < 2:
        return 0.0
    linked = sum(len(neigh & g.adjacency[u]) for u in neigh) // 2
    return 2.0 * linked / (k * (k - 1))


def degree_gini(g: Graph) -> float:
    """Gini coefficient of the degree sequence (mean-absolute-difference form).

    Returns 0 for graphs whose degrees are all equal, including edgeless ones.
    """
    deg = g.degrees.astype(np.float64)
    mean = deg.mean()
    if mean == 0.0:
        return 0.0
    return float(np.abs(deg[:, None] - deg[None, :]).mean() / (2.0 * mean))


def graph_stats(g: Graph) -> GraphStats:
    """Average degree, average clustering coefficient, and degree Gini."""
    avg_deg = 2.0 * len(g.edges) / g.num_nodes
    avg_cc = float(np.mean([clustering_coefficient(g, j) for j in range(g.num_nodes)]))
    return GraphStats(avg_degree=avg_deg, avg_clustering=avg_cc, degree_gini=degree_gini(g))


def _checked_label(label: str) -> str:
    if not label or any(ch.isspace() for ch in label):
        raise ValueError(f"label {label!r} is empty or contains whitespace")
    return label


def write_edge_list(g: Graph, path: str | Path) -> None:
    """Write one edge per line as two whitespace-separated node labels.

    The format cannot express isolated nodes; loading the file back recovers
    only nodes that appear in at least one edge.
    """
    lines = [
        f"{_checked_label(g.label_of(u))} {_checked_label(g.label_of(v))}"
        for u, v in sorted(g.edges)
    ]
    Path(path).write_text("\n".join(lines) + ("\n" if lines else ""), encoding="utf-8")


def write_cluster_file(g: Graph, path: str | Path) -> None:
    """Write one ``label<TAB>cluster-index`` line per node."""
    if g.clusters is None:
        raise ValueError("graph has no cluster assignment")
    lines = [
        f"{_checked_label(g.label_of(j))}\t{g.clusters[j]}" for j in range(g.num_nodes)
    ]
    Path(path).write_text("\n".join(lines) + "\n", encoding="utf-8")


def read_edge_list(path: str | Path, cluster_path: str | Path | None = None) -> Graph:
    """Load a graph from an edge-list file, with an optional cluster file.

    Node indices are assigned by first appearance in the edge list.  Lines
    starting with ``#`` are ignored.  A cluster file must assign exactly the
    nodes present in the edge list.
    """
    index: dict[str, int] = {}
    edges: set[tuple[int, int]] = set()
    for lineno, raw in enumerate(Path(path).read_text(encoding="utf-8").splitlines(), 1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        parts = line.split()
        if len(parts) != 2:
            raise ValueError(f"{path}:{lineno}: expected two labels, got {len(parts)}")
        a, b = parts
        if a == b:
            raise ValueError(f"{path}:{lineno}: self-loop at {a!r}")
        u = index.setdefault(a, len(index))
        v = index.setdefault(b, len(index))
        pair = (u, v) if u < v else (v, u)
        if pair in edges:
            raise ValueError(f"{path}:{lineno}: duplicate edge {a!r} {b!r}")
        edges.add(pair)
    if not index:
        raise ValueError(f"{path}: no edges found")
    labels = tuple(sorted(index, key=index.__getitem__))

    clusters: tuple[int, ...] | None = None
    if cluster_path is not None:
        assign: dict[str, int] = {}
        for lineno, raw in enumerate(
            Path(cluster_path).read_text(encoding="utf-8").splitlines(), 1
        ):
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            parts = line.split("\t")
            if len(parts) != 2:
                raise ValueError(
                    f"{cluster_path}:{lineno}: expected label<TAB>cluster-index"
                )
            label, cluster = parts[0].strip(), parts[1].strip()
            if label in assign:
                raise ValueError(f"{cluster_path}:{lineno}: duplicate label {label!r}")
            assign[label] = int(cluster)
        if set(assign) != set(labels):
            raise ValueError("cluster file must assign exactly the nodes in the edge list")
        clusters = tuple(assign[lab] for lab in labels)

    return Graph(len(labels), frozenset(edges), clusters=clusters, labels=labels)
