"""Suspiciousness rankings: score vectors and the retrieval order they induce."""

from __future__ import annotations

import csv
from dataclasses import dataclass
from pathlib import Path

import numpy as np

__all__ = ["RankingResult", "rank_logs", "write_ranking_csv", "read_ranking_csv"]


@dataclass(frozen=True, eq=False)
class RankingResult:
    """Per-log scores plus the permutation that retrieves logs most-suspicious
    first.

    ``order[k]`` is the index of the log retrieved at position ``k``.  Scores
    along ``order`` are non-increasing, with ties broken by ascending log
    index so rankings are deterministic.
    """

    order: np.ndarray
    scores: np.ndarray

    def __post_init__(self) -> None:
        order = np.asarray(self.order, dtype=np.int64)
        scores = np.asarray(self.scores, dtype=np.float64)
        object.__setattr__(self, "order", order)
        object.__setattr__(self, "scores", scores)
        if order.ndim != 1 or scores.ndim != 1 or order.shape != scores.shape:
            raise ValueError("order and scores must be vectors of equal length")
        if np.isnan(scores).any():
            raise ValueError("scores must not contain NaN")
        if not np.array_equal(np.sort(order), np.arange(order.size)):
            raise ValueError("order must be a permutation of the log indices")
        if not np.array_equal(order, _ranked_order(scores)):
            raise ValueError(
                "order must sort scores non-increasingly with ascending-index ties"
            )

    @property
    def num_logs(self) -> int:
        return int(self.order.size)


def _ranked_order(scores: np.ndarray) -> np.ndarray:
    return np.lexsort((np.arange(scores.size), -scores))


def rank_logs(scores: np.ndarray) -> RankingResult:
    """Build a ranking from a score vector (higher score = more suspicious)."""
    scores = np.asarray(scores, dtype=np.float64)
    return RankingResult(order=_ranked_order(scores), scores=scores)


def write_ranking_csv(ranking: RankingResult, path: str | Path) -> None:
    """Write ``rank,log_index,score`` rows, most suspicious first."""
    with Path(path).open("w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(["rank", "log_index", "score"])
        for pos, idx in enumerate(ranking.order, 1):
            writer.writerow([pos, int(idx), "%.12g" % ranking.scores[idx]])


def read_ranking_csv(path: str | Path) -> RankingResult:
    with Path(path).open(newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        if header != ["rank", "log_index", "score"]:
            raise ValueError(f"{path}: not a ranking file")
        rows = [(int(rank), int(idx), float(score)) for rank, idx, score in reader]
    if [rank for rank, _, _ in rows] != list(range(1, len(rows) + 1)):
        raise ValueError(f"{path}: ranks must run 1..D in order")
    order = np.array([idx for _, idx, _ in rows], dtype=np.int64)
    scores = np.empty(len(rows))
    for _, idx, score in rows:
        scores[idx] = score
    return RankingResult(order=order, scores=scores)
