"""Hub-and-spoke influence transmission and surveillance-log datasets.

An activity pattern is the true participant set of one collaborative
activity: an initiator drawn from the initiation distribution plus every
node that independently responded.  A surveillance log is the pattern with
all covert nodes deleted; a dataset is an ordered collection of logs over
the overt nodes, re-indexed densely.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np

from .graph import Graph

__all__ = [
    "TransmissionParams",
    "ActivityPattern",
    "LogDataset",
    "params_from_graph",
    "generate_patterns",
    "project_logs",
    "target_flags",
    "count_targets",
    "save_logs",
    "save_patterns",
    "load_dataset",
]

_SIMPLEX_TOL = 1e-9


@dataclass(frozen=True, eq=False)
class TransmissionParams:
    """Initiation probabilities per node and transmission probabilities per
    ordered node pair.

    ``initiation`` must lie on the probability simplex; ``transmission`` is a
    square matrix with entries in [0, 1] and a zero diagonal (self-response
    is meaningless).  Row sums of ``transmission`` are deliberately not
    constrained: responders react independently, so a well-connected
    initiator may recruit more than one responder on average.
    """

    initiation: np.ndarray
    transmission: np.ndarray

    def __post_init__(self) -> None:
        f = np.asarray(self.initiation, dtype=np.float64)
        r = np.asarray(self.transmission, dtype=np.float64)
        object.__setattr__(self, "initiation", f)
        object.__setattr__(self, "transmission", r)
        if f.ndim != 1:
            raise ValueError("initiation must be a vector")
        n = f.shape[0]
        if r.shape != (n, n):
            raise ValueError("transmission must be a square matrix matching initiation")
        if np.any(f < 0) or abs(float(f.sum()) - 1.0) > _SIMPLEX_TOL:
            raise ValueError("initiation probabilities must be non-negative and sum to 1")
        if np.any(r < 0) or np.any(r > 1):
            raise ValueError("transmission probabilities must lie in [0, 1]")
        if np.any(np.diagonal(r) != 0):
            raise ValueError("transmission diagonal must be zero")

    @property
    def num_nodes(self) -> int:
        return self.initiation.shape[0]


@dataclass(frozen=True)
class ActivityPattern:
    """True participant set of one activity: the initiator plus responders."""

    members: frozenset[int]
    initiator: int

    def __post_init__(self) -> None:
        if not self.members:
            raise ValueError("a pattern has at least its initiator")
        if self.initiator not in self.members:
            raise ValueError("initiator must be a member of the pattern")


@dataclass(frozen=True, eq=False)
class LogDataset:
    """Ordered collection of surveillance logs over densely indexed overt nodes.

    ``overt_nodes`` maps each dense index back to the original node index the
    log was projected from.  When the generating patterns are retained (for
    evaluation only), ``ground_truth`` holds them in original indices and
    ``all_labels`` names the full node set including covert nodes.
    """

    logs: tuple[frozenset[int], ...]
    labels: tuple[str, ...]
    overt_nodes: tuple[int, ...]
    ground_truth: tuple[ActivityPattern, ...] | None = None
    all_labels: tuple[str, ...] | None = None

    def __post_init__(self) -> None:
        n = len(self.labels)
        if len(set(self.labels)) != n:
            raise ValueError("overt node labels must be unique")
        if len(self.overt_nodes) != n:
            raise ValueError("overt_nodes must map every dense index")
        if any(b <= a for a, b in zip(self.overt_nodes, self.overt_nodes[1:])):
            raise ValueError("overt_nodes must be strictly increasing")
        for log in self.logs:
            if any(not 0 <= j < n for j in log):
                raise ValueError("log members must be dense overt indices")
        if self.ground_truth is not None:
            if self.all_labels is None:
                raise ValueError("ground truth requires all_labels for the full node set")
            if len(self.ground_truth) != len(self.logs):
                raise ValueError("ground truth must parallel the logs")
            m = len(self.all_labels)
            for pat in self.ground_truth:
                if any(not 0 <= j < m for j in pat.members):
                    raise ValueError("pattern members must be original node indices")
            if any(j >= m for j in self.overt_nodes):
                raise ValueError("overt_nodes exceed the full node set")

    @property
    def num_logs(self) -> int:
        return len(self.logs)

    @property
    def num_nodes(self) -> int:
        return len(self.labels)

    @cached_property
    def matrix(self) -> np.ndarray:
        """Binary membership matrix: row per log, column per overt node."""
        d = np.zeros((self.num_logs, self.num_nodes), dtype=np.uint8)
        for i, log in enumerate(self.logs):
            for j in log:
                d[i, j] = 1
        return d

    def original_members(self, i: int) -> frozenset[int]:
        """Members of log ``i`` mapped back to original node indices."""
        return frozenset(self.overt_nodes[j] for j in self.logs[i])


def params_from_graph(g: Graph) -> TransmissionParams:
    """Uniform initiation over all nodes; transmission 1 on links, 0 elsewhere.

    Transmission is symmetric because influence travels both ways across a
    link.
    """
    m = g.num_nodes
    f = np.full(m, 1.0 / m)
    r = np.zeros((m, m))
    for u, v in g.edges:
        r[u, v] = r[v, u] = 1.0
    return TransmissionParams(f, r)


def generate_patterns(
    params: TransmissionParams, count: int, seed: int
) -> tuple[ActivityPattern, ...]:
    """Draw ``count`` independent activity patterns.

    Each draw picks an initiator from the initiation distribution, then
    includes every other node independently with its transmission
    probability.
    """
    if count < 0:
        raise ValueError("count must be non-negative")
    rng = np.random.default_rng(seed)
    f = params.initiation
    r = params.transmission
    m = params.num_nodes
    out = []
    for _ in range(count):
        j = int(rng.choice(m, p=f))
        responded = rng.random(m) < r[j]
        members = frozenset(np.flatnonzero(responded)) | {j}
        out.append(ActivityPattern(members=members, initiator=j))
    return tuple(out)


def project_logs(
    patterns: Sequence[ActivityPattern],
    covert: Iterable[int],
    num_nodes: int,
    labels: Sequence[str] | None = None,
) -> LogDataset:
    """Delete covert members from every pattern and re-index the overt nodes.

    The returned dataset keeps the patterns as ground truth so rankings can
    later be scored against them.  Empty logs (patterns made entirely of
    covert nodes) are retained.
    """
    covert_set = frozenset(covert)
    if any(not 0 <= j < num_nodes for j in covert_set):
        raise ValueError("covert indices out of range")
    for pat in patterns:
        if any(not 0 <= j < num_nodes for j in pat.members):
            raise ValueError("pattern members out of range")
    if labels is None:
        labels = [f"n{j}" for j in range(num_nodes)]
    elif len(labels) != num_nodes:
        raise ValueError("labels must cover the full node set")

    overt = tuple(j for j in range(num_nodes) if j not in covert_set)
    dense = {orig: k for k, orig in enumerate(overt)}
    logs = tuple(
        frozenset(dense[j] for j in pat.members if j not in covert_set)
        for pat in patterns
    )
    return LogDataset(
        logs=logs,
        labels=tuple(labels[j] for j in overt),
        overt_nodes=overt,
        ground_truth=tuple(patterns),
        all_labels=tuple(labels),
    )


def target_flags(ds: LogDataset) -> np.ndarray:
    """Boolean flag per log: True where covert deletion altered the pattern."""
    if ds.ground_truth is None:
        raise ValueError("dataset has no ground-truth patterns")
    return np.array(
        [
            ds.original_members(i) != ds.ground_truth[i].members
            for i in range(ds.num_logs)
        ],
        dtype=bool,
    )


def count_targets(ds: LogDataset) -> int:
    """Number of logs that differ from their generating pattern."""
    return int(target_flags(ds).sum())


def _format_log_line(labels: Sequence[str], members: Iterable[int], first: int | None) -> str:
    ordered = sorted(members)
    if first is not None:
        ordered.remove(first)
        ordered.insert(0, first)
    return " ".join(labels[j] for j in ordered)


def save_logs(ds: LogDataset, path: str | Path) -> None:
    """Write the dataset: a ``# nodes:`` header, then one log per line as
    space-separated labels (an empty line is an empty log)."""
    for lab in ds.labels:
        if not lab or any(ch.isspace() for ch in lab):
            raise ValueError(f"label {lab!r} is empty or contains whitespace")
    lines = ["# nodes: " + " ".join(ds.labels)]
    lines.extend(_format_log_line(ds.labels, log, None) for log in ds.logs)
    Path(path).write_text("\n".join(lines) + "\n", encoding="utf-8")


def save_patterns(ds: LogDataset, path: str | Path) -> None:
    """Write the ground-truth patterns in the dataset layout.

    The header lists the full node set (covert included) and each line lists
    one pattern's members with the initiator first.
    """
    if ds.ground_truth is None or ds.all_labels is None:
        raise ValueError("dataset has no ground-truth patterns")
    for lab in ds.all_labels:
        if not lab or any(ch.isspace() for ch in lab):
            raise ValueError(f"label {lab!r} is empty or contains whitespace")
    lines = ["# nodes: " + " ".join(ds.all_labels)]
    lines.extend(
        _format_log_line(ds.all_labels, pat.members, pat.initiator)
        for pat in ds.ground_truth
    )
    Path(path).write_text("\n".join(lines) + "\n", encoding="utf-8")


def _read_layout(path: str | Path) -> tuple[tuple[str, ...], list[list[str]]]:
    raw = Path(path).read_text(encoding="utf-8").split("\n")
    if raw and raw[-1] == "":
        raw.pop()
    if not raw or not raw[0].startswith("# nodes:"):
        raise ValueError(f"{path}: expected a '# nodes:' header line")
    labels = tuple(raw[0][len("# nodes:"):].split())
    if len(set(labels)) != len(labels):
        raise ValueError(f"{path}: node labels must be unique")
    return labels, [line.split() for line in raw[1:]]


def load_dataset(
    logs_path: str | Path, patterns_path: str | Path | None = None
) -> LogDataset:
    """Load a dataset file, optionally paired with its ground-truth patterns.

    With a patterns file the loader checks that every log really is its
    pattern restricted to the overt nodes.
    """
    labels, log_rows = _read_layout(logs_path)
    index = {lab: j for j, lab in enumerate(labels)}
    logs = []
    for lineno, row in enumerate(log_rows, 2):
        try:
            logs.append(frozenset(index[lab] for lab in row))
        except KeyError as exc:
            raise ValueError(f"{logs_path}:{lineno}: unknown node label {exc}") from None

    if patterns_path is None:
        return LogDataset(
            logs=tuple(logs),
            labels=labels,
            overt_nodes=tuple(range(len(labels))),
        )

    all_labels, pat_rows = _read_layout(patterns_path)
    if len(pat_rows) != len(logs):
        raise ValueError("patterns file must have one pattern per log")
    full_index = {lab: j for j, lab in enumerate(all_labels)}
    missing = [lab for lab in labels if lab not in full_index]
    if missing:
        raise ValueError(f"overt labels missing from the patterns header: {missing}")
    overt_nodes = tuple(full_index[lab] for lab in labels)
    order = np.argsort(overt_nodes)
    overt_nodes = tuple(overt_nodes[k] for k in order)
    labels = tuple(labels[k] for k in order)
    remap = {int(old): int(new) for new, old in enumerate(order)}
    logs = [frozenset(remap[j] for j in log) for log in logs]

    patterns = []
    for lineno, row in enumerate(pat_rows, 2):
        if not row:
            raise ValueError(f"{patterns_path}:{lineno}: a pattern cannot be empty")
        try:
            members = [full_index[lab] for lab in row]
        except KeyError as exc:
            raise ValueError(
                f"{patterns_path}:{lineno}: unknown node label {exc}"
            ) from None
        patterns.append(ActivityPattern(members=frozenset(members), initiator=members[0]))

    ds = LogDataset(
        logs=tuple(logs),
        labels=labels,
        overt_nodes=overt_nodes,
        ground_truth=tuple(patterns),
        all_labels=all_labels,
    )
    overt_set = frozenset(overt_nodes)
    for i in range(ds.num_logs):
        if ds.original_members(i) != ds.ground_truth[i].members & overt_set:
            raise ValueError(
                f"log {i} is not the overt projection of its pattern"
            )
    return ds
