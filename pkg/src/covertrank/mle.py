"""Maximum-likelihood fitting of the hub-and-spoke model and anomaly scoring.

The probability of one log is a sum over its members as candidate
initiators: the initiator's initiation probability times, for every other
node, the probability that its presence or absence matches the log.  Logs
are independent, so the dataset log-likelihood is the sum of per-log terms.
The fit maximizes it by projected gradient ascent with a backtracking line
search; anomaly scores are negative log-probabilities under the fitted
parameters, so logs the model cannot explain rank first.
"""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .ranking import RankingResult, rank_logs
from .transmission import LogDataset, TransmissionParams

__all__ = [
    "FitConfig",
    "FitResult",
    "log_probability",
    "log_likelihood",
    "gradients",
    "fit",
    "score_logs",
    "save_fit_csv",
]

_MIN_STEP = 1e-18


@dataclass(frozen=True)
class FitConfig:
    """Optimizer settings.

    ``parameter_floor`` keeps every probability strictly inside its box so
    all logs retain positive probability and gradients stay finite.
    ``convergence_tol`` is an absolute threshold on the likelihood change.
    """

    learning_rate: float = 0.5
    max_iterations: int = 500
    convergence_tol: float = 1e-6
    parameter_floor: float = 1e-6
    seed: int = 0

    def __post_init__(self) -> None:
        if self.learning_rate < 0:
            raise ValueError("learning_rate must be non-negative")
        if self.max_iterations < 1:
            raise ValueError("max_iterations must be a positive integer")
        if self.convergence_tol <= 0:
            raise ValueError("convergence_tol must be positive")
        if not 0 < self.parameter_floor < 0.5:
            raise ValueError("parameter_floor must lie in (0, 0.5)")


@dataclass(frozen=True, eq=False)
class FitResult:
    """Fitted parameters over the overt nodes plus the ascent trace."""

    params: TransmissionParams
    trace: np.ndarray
    converged: bool


def _match_factors(d: np.ndarray, r: np.ndarray) -> np.ndarray:
    """factors[i, j, k]: probability that node k's presence in log i matches
    what initiator j would produce; the j == k slot is pinned to 1 so
    products run over responders only."""
    q = (1.0 - d)[:, None, :] + (2.0 * d - 1.0)[:, None, :] * r[None, :, :]
    n = r.shape[0]
    q[:, np.arange(n), np.arange(n)] = 1.0
    return q


def _per_log_probability(
    d: np.ndarray, f: np.ndarray, r: np.ndarray
) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    q = _match_factors(d, r)
    prod = q.prod(axis=2)
    p = np.einsum("ij,j,ij->i", d, f, prod)
    return p, prod, q


def _weighted_log_likelihood(
    d: np.ndarray, weights: np.ndarray, f: np.ndarray, r: np.ndarray
) -> float:
    p, _, _ = _per_log_probability(d, f, r)
    if np.any(p <= 0.0):
        return float("-inf")
    return float(weights @ np.log(p))


def _logsumexp(a: np.ndarray) -> float:
    m = float(np.max(a))
    if m == float("-inf"):
        return m
    return m + float(np.log(np.exp(a - m).sum()))


def _check_row(params: TransmissionParams, row: np.ndarray) -> np.ndarray:
    row = np.asarray(row)
    if row.ndim != 1 or row.shape[0] != params.num_nodes:
        raise ValueError("log row length must match the parameter dimension")
    if not np.isin(row, (0, 1)).all():
        raise ValueError("log row must be binary")
    return row.astype(np.float64)


def log_probability(params: TransmissionParams, row: np.ndarray) -> float:
    """Log-probability of one log (a binary membership row) under the model.

    Computed in the log domain so long products cannot underflow.  An empty
    log has probability zero and returns -inf: no initiator can produce it.
    """
    row = _check_row(params, row)
    members = np.flatnonzero(row)
    if members.size == 0:
        return float("-inf")
    r = params.transmission[members]
    q = (1.0 - row)[None, :] + (2.0 * row - 1.0)[None, :] * r
    q[np.arange(members.size), members] = 1.0
    with np.errstate(divide="ignore"):
        terms = np.log(params.initiation[members]) + np.log(q).sum(axis=1)
    return _logsumexp(terms)


def log_likelihood(params: TransmissionParams, ds: LogDataset) -> float:
    """Dataset log-likelihood; -inf if any log has zero probability."""
    return float(
        sum(log_probability(params, row) for row in ds.matrix)
    )


def _gradients(
    d: np.ndarray, weights: np.ndarray, f: np.ndarray, r: np.ndarray
) -> tuple[np.ndarray, np.ndarray]:
    p, prod, q = _per_log_probability(d, f, r)
    if np.any(p <= 0.0):
        raise ValueError(
            "a log has zero probability; floor the parameters before taking gradients"
        )
    # Leave-one-out products over the match factors, exact even when some
    # factor is 0: with one zero factor only its own slot survives, with two
    # or more every slot is 0.
    zero = q == 0.0
    n_zero = zero.sum(axis=2)
    safe = np.where(zero, 1.0, q)
    prod_nonzero = safe.prod(axis=2)
    loo = np.where(n_zero[:, :, None] == 0, prod_nonzero[:, :, None] / safe, 0.0)
    single = (n_zero[:, :, None] == 1) & zero
    if single.any():
        loo = np.where(single, prod_nonzero[:, :, None], loo)

    wp = weights / p
    lead = (wp[:, None] * d) * f[None, :]
    g_r = np.einsum("in,im,inm->nm", lead, 2.0 * d - 1.0, loo)
    np.fill_diagonal(g_r, 0.0)
    g_f = (d * prod).T @ wp
    return g_r, g_f


def gradients(
    params: TransmissionParams, ds: LogDataset
) -> tuple[np.ndarray, np.ndarray]:
    """Analytic likelihood gradients: a matrix for the transmission entries
    (zero diagonal) and a vector for the initiation probabilities.

    Requires every log to have positive probability; empty logs make that
    impossible and raise.
    """
    d = ds.matrix.astype(np.float64)
    return _gradients(d, np.ones(d.shape[0]), params.initiation, params.transmission)


def _project_initiation(f: np.ndarray, floor: float) -> np.ndarray:
    f = np.maximum(f, floor)
    return f / f.sum()


def _clamp_transmission(r: np.ndarray, floor: float) -> np.ndarray:
    r = np.clip(r, floor, 1.0 - floor)
    np.fill_diagonal(r, 0.0)
    return r


def _initial_parameters(
    d: np.ndarray, floor: float
) -> tuple[np.ndarray, np.ndarray]:
    # Data-driven start: initiation proportional to appearance counts,
    # transmission from co-occurrence fractions.
    appear = d.sum(axis=0)
    f = _project_initiation(appear / appear.sum(), floor)
    cooc = d.T @ d
    r = cooc / np.maximum(appear, 1.0)[:, None]
    return f, _clamp_transmission(r, floor)


def fit(ds: LogDataset, cfg: FitConfig = FitConfig()) -> FitResult:
    """Fit the model to a dataset by projected gradient ascent.

    Empty logs carry no information about who initiated them and would pin
    the likelihood at -inf, so they are excluded from the fit (scoring still
    handles them).  Each iteration takes a gradient step, clamps the
    transmission matrix into its box, re-projects the initiation vector onto
    the simplex, and halves the step until the likelihood does not decrease,
    so the returned trace is non-decreasing.
    """
    full = ds.matrix.astype(np.float64)
    keep = full.sum(axis=1) > 0
    if not keep.any():
        raise ValueError("all logs are empty; nothing to fit")
    # Duplicate logs contribute identical terms; collapse them with weights.
    rows, counts = np.unique(full[keep], axis=0, return_counts=True)
    weights = counts.astype(np.float64)

    floor = cfg.parameter_floor
    f, r = _initial_parameters(full, floor)
    value = _weighted_log_likelihood(rows, weights, f, r)
    if not np.isfinite(value):
        raise ValueError("initial parameters give a zero-probability log")

    trace = [value]
    converged = False
    step = cfg.learning_rate
    for _ in range(cfg.max_iterations):
        g_r, g_f = _gradients(rows, weights, f, r)
        step = min(cfg.learning_rate, step * 2.0)
        while True:
            f_new = _project_initiation(f + step * g_f, floor)
            r_new = _clamp_transmission(r + step * g_r, floor)
            candidate = _weighted_log_likelihood(rows, weights, f_new, r_new)
            if candidate >= value or step < _MIN_STEP:
                break
            step *= 0.5
        if candidate < value:
            # No step of any size improves the likelihood: we are done.
            trace.append(value)
            converged = True
            break
        f, r = f_new, r_new
        trace.append(candidate)
        if abs(candidate - value) < cfg.convergence_tol:
            value = candidate
            converged = True
            break
        value = candidate

    return FitResult(
        params=TransmissionParams(f, r),
        trace=np.array(trace),
        converged=converged,
    )


def score_logs(result: FitResult, ds: LogDataset) -> RankingResult:
    """Rank logs by anomaly score: the negative log-probability under the
    fitted parameters.

    Empty logs are impossible under the model, i.e. maximally anomalous;
    they score +inf and rank first (ties by ascending log index).
    """
    scores = np.array(
        [-log_probability(result.params, row) for row in ds.matrix]
    )
    return rank_logs(scores)


def save_fit_csv(
    result: FitResult, transmission_path: str | Path, initiation_path: str | Path
) -> None:
    """Dump fitted parameters for inspection: the transmission matrix as an
    N x N CSV and the initiation vector as one value per line."""
    r = result.params.transmission
    lines = [",".join("%.12g" % v for v in row) for row in r]
    Path(transmission_path).write_text("\n".join(lines) + "\n", encoding="utf-8")
    f_lines = ["%.12g" % v for v in result.params.initiation]
    Path(initiation_path).write_text("\n".join(f_lines) + "\n", encoding="utf-8")
