"""Seeded Monte Carlo over posterior draws.

Each iteration samples a full chain from the stakeholders' flat-prior
posteriors, solves for absorption probabilities, and records the start
stakeholder's (P_DI, P_S, P_US) triple. Iteration t always uses the random
stream derived from (seed, t), so the output is a pure function of
(spec, iterations, seed) no matter how iterations are scheduled.

Iterations run on a thread pool sized by the `workers` argument, the
INFOFLOW_WORKERS environment variable, or all cores, in that order.
"""

from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from .errors import EmptySampleError, SingularSystemError
from .network import NetworkSpec, _compiled
from .rng import stream

DEFAULT_BINS = 50
WORKERS_ENV = "INFOFLOW_WORKERS"


@dataclass(frozen=True, eq=False)
class SampleStats:
    """Histogram and moments of one scalar sample set."""

    histogram_edges: np.ndarray
    histogram_counts: np.ndarray
    mean: float
    std: float


@dataclass(frozen=True, eq=False)
class SimulationSummary:
    iterations: int
    seed: int
    samples: np.ndarray  # (iterations, 3) columns (P_DI, P_S, P_US) from start
    mean_di: float
    mean_s: float
    mean_us: float
    std_s: float
    histogram_edges: np.ndarray
    histogram_counts: np.ndarray


def summarize(values, bins: int = DEFAULT_BINS) -> SampleStats:
    """Fixed-width histogram over [0, 1] plus mean and sample std.

    The last bin is right-closed, so 1.0 lands in it and counts always sum
    to the sample count. Values are clipped into [0, 1] for bin assignment
    only; moments use the raw values.
    """
    values = np.asarray(values, dtype=float)
    if values.size == 0:
        raise EmptySampleError("cannot summarize an empty sample set")
    if bins < 1:
        raise ValueError(f"bins must be >= 1, got {bins}")
    edges = np.linspace(0.0, 1.0, bins + 1)
    counts, _ = np.histogram(np.clip(values, 0.0, 1.0), bins=edges)
    std = float(np.std(values, ddof=1)) if values.size > 1 else 0.0
    return SampleStats(edges, counts, float(values.mean()), std)


def _worker_count(workers: int | None) -> int:
    if workers is not None:
        return max(1, int(workers))
    env = os.environ.get(WORKERS_ENV)
    if env:
        return max(1, int(env))
    return os.cpu_count() or 1


def _simulate_block(rows, n, start_idx, seed, key, lo, hi, out) -> None:
    """Fill out[lo:hi] with start-state absorption triples.

    Reproduces, value for value, what sampled_chain + absorption_probabilities
    compute per iteration (same stream, same gamma draws and normalization
    order), but without intermediate objects, and solves the whole block as
    one stacked system. tests/test_simulation.py pins this equivalence.
    """
    count = hi - lo
    q = np.zeros((count, n, n))
    r = np.zeros((count, n, 3))
    for t in range(lo, hi):
        qt, rt = q[t - lo], r[t - lo]
        rng = stream(seed, *key, t)
        for row in rows:
            g = rng.standard_gamma(row.alpha)
            theta = g / g.sum()
            theta = theta / theta.sum()
            qt[row.index, row.q_cols] = theta[row.q_sel]
            rt[row.index, row.r_cols] = theta[row.r_sel]
    sums = q.sum(axis=2) + r.sum(axis=2)
    q /= sums[..., np.newaxis]
    r /= sums[..., np.newaxis]
    a = np.eye(n) - q
    try:
        b = np.linalg.solve(a, r)
    except np.linalg.LinAlgError:
        b = None
    if b is None or not np.all(np.isfinite(b)):
        for t in range(lo, hi):  # localize the offending iteration
            try:
                bt = np.linalg.solve(a[t - lo], r[t - lo])
            except np.linalg.LinAlgError:
                bt = None
            if bt is None or not np.all(np.isfinite(bt)):
                raise SingularSystemError(f"iteration {t}: I - Q is singular")
        raise SingularSystemError("I - Q is singular")
    out[lo:hi] = b[:, start_idx, :]


def draw_samples(
    spec: NetworkSpec,
    iterations: int,
    seed: int,
    *,
    workers: int | None = None,
    key: tuple[int, ...] = (),
) -> np.ndarray:
    """(iterations, 3) start-state absorption triples, one per posterior draw.

    `key` prefixes the per-iteration stream path; sweeps use it to give each
    (stakeholder, increment) its own family of streams under one master seed.
    """
    if iterations < 1:
        raise ValueError(f"iterations must be >= 1, got {iterations}")
    _, rows = _compiled(spec)  # validates the spec
    n = len(rows)
    start_idx = spec.ids.index(spec.start)
    samples = np.empty((iterations, 3))
    n_workers = min(_worker_count(workers), iterations)
    if n_workers <= 1:
        _simulate_block(rows, n, start_idx, seed, key, 0, iterations, samples)
        return samples
    bounds = np.linspace(0, iterations, n_workers + 1).astype(int)
    with ThreadPoolExecutor(max_workers=n_workers) as pool:
        futures = [
            pool.submit(_simulate_block, rows, n, start_idx, seed, key, lo, hi, samples)
            for lo, hi in zip(bounds[:-1], bounds[1:])
        ]
        for f in futures:
            f.result()
    return samples


def run(
    spec: NetworkSpec,
    iterations: int,
    seed: int,
    *,
    bins: int = DEFAULT_BINS,
    workers: int | None = None,
) -> SimulationSummary:
    """Monte Carlo estimate of the absorption distribution from the start state."""
    samples = draw_samples(spec, iterations, seed, workers=workers)
    stats = summarize(samples[:, 1], bins=bins)
    mean_di, mean_s, mean_us = samples.mean(axis=0)
    samples.flags.writeable = False
    return SimulationSummary(
        iterations=iterations,
        seed=seed,
        samples=samples,
        mean_di=float(mean_di),
        mean_s=float(mean_s),
        mean_us=float(mean_us),
        std_s=stats.std,
        histogram_edges=stats.histogram_edges,
        histogram_counts=stats.histogram_counts,
    )
