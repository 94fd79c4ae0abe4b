"""Precision, recall, and F-measure curves with theoretical-limit and
random-retrieval baselines."""

from __future__ import annotations

import csv
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .ranking import RankingResult
from .transmission import LogDataset, target_flags

__all__ = [
    "EvalCurves",
    "f_measure",
    "evaluate",
    "theoretical_limit",
    "random_baseline",
    "CURVE_COLUMNS",
    "curve_columns",
    "write_curves_csv",
]

CURVE_COLUMNS = (
    "precision",
    "recall",
    "f",
    "p_limit",
    "r_limit",
    "f_limit",
    "p_rand",
    "r_rand",
    "f_rand",
)


def f_measure(precision: np.ndarray, recall: np.ndarray) -> np.ndarray:
    """Harmonic mean of precision and recall, 0 where both are 0."""
    p = np.asarray(precision, dtype=np.float64)
    r = np.asarray(recall, dtype=np.float64)
    total = p + r
    with np.errstate(invalid="ignore", divide="ignore"):
        return np.where(total > 0, 2.0 * p * r / np.where(total > 0, total, 1.0), 0.0)


@dataclass(frozen=True, eq=False)
class EvalCurves:
    """Retrieval curves indexed by the number of retrieved logs, 1..D."""

    precision: np.ndarray
    recall: np.ndarray
    f: np.ndarray
    target_count: int
    limit_precision: np.ndarray
    limit_recall: np.ndarray
    limit_f: np.ndarray
    rand_precision: np.ndarray
    rand_recall: np.ndarray
    rand_f: np.ndarray

    @property
    def num_logs(self) -> int:
        return int(self.precision.size)


def theoretical_limit(
    num_logs: int, target_count: int
) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Curves of an oracle that retrieves every target log first."""
    if not 1 <= target_count <= num_logs:
        raise ValueError("target count must lie in 1..num_logs")
    retrieved = np.arange(1, num_logs + 1, dtype=np.float64)
    hits = np.minimum(retrieved, target_count)
    precision = hits / retrieved
    recall = hits / target_count
    return precision, recall, f_measure(precision, recall)


def random_baseline(
    num_logs: int, target_count: int
) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Expected curves of a uniformly random retrieval order."""
    if not 1 <= target_count <= num_logs:
        raise ValueError("target count must lie in 1..num_logs")
    retrieved = np.arange(1, num_logs + 1, dtype=np.float64)
    precision = np.full(num_logs, target_count / num_logs)
    recall = retrieved / num_logs
    return precision, recall, f_measure(precision, recall)


def evaluate(ranking: RankingResult, ds: LogDataset) -> EvalCurves:
    """Score a ranking against the dataset's ground truth.

    A log is relevant when covert deletion altered it.  Only the retrieval
    order matters; the score values themselves are ignored.
    """
    flags = target_flags(ds)
    if ranking.num_logs != ds.num_logs:
        raise ValueError("ranking and dataset sizes differ")
    target_count = int(flags.sum())
    if target_count == 0:
        raise ValueError("no target logs; evaluation vacuous")
    hits = np.cumsum(flags[ranking.order]).astype(np.float64)
    retrieved = np.arange(1, ds.num_logs + 1, dtype=np.float64)
    precision = hits / retrieved
    recall = hits / target_count
    lp, lr, lf = theoretical_limit(ds.num_logs, target_count)
    rp, rr, rf = random_baseline(ds.num_logs, target_count)
    return EvalCurves(
        precision=precision,
        recall=recall,
        f=f_measure(precision, recall),
        target_count=target_count,
        limit_precision=lp,
        limit_recall=lr,
        limit_f=lf,
        rand_precision=rp,
        rand_recall=rr,
        rand_f=rf,
    )


def curve_columns(curves: EvalCurves) -> dict[str, np.ndarray]:
    """The curves as named columns, in CSV order."""
    return {
        "precision": curves.precision,
        "recall": curves.recall,
        "f": curves.f,
        "p_limit": curves.limit_precision,
        "r_limit": curves.limit_recall,
        "f_limit": curves.limit_f,
        "p_rand": curves.rand_precision,
        "r_rand": curves.rand_recall,
        "f_rand": curves.rand_f,
    }


def write_curves_csv(columns: dict[str, np.ndarray], path: str | Path) -> None:
    """Write one row per retrieved count with the standard curve columns."""
    if set(columns) != set(CURVE_COLUMNS):
        raise ValueError(f"expected columns {CURVE_COLUMNS}")
    length = {len(v) for v in columns.values()}
    if len(length) != 1:
        raise ValueError("curve columns must share a length")
    num_logs = length.pop()
    with Path(path).open("w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(["D_r", *CURVE_COLUMNS])
        for i in range(num_logs):
            writer.writerow(
                [i + 1, *("%.12g" % columns[c][i] for c in CURVE_COLUMNS)]
            )
