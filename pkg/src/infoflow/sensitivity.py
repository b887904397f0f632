"""Ineffective-flow sensitivity analysis and stakeholder ranking.

A sweep fixes one stakeholder, steps its discarded-information frequency
from 0 up to its total outflow, reallocates the remainder proportionally to
the original targets, and measures the start stakeholder's mean absorption
probabilities at each step. The impact ratio (drop in P_S per unit of
discarded flow) ranks stakeholders by how much their discarding hurts
overall satisfaction.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .dirichlet import CountVector
from .errors import (
    DegenerateRangeError,
    ExceedsTotalError,
    NegativeEntryError,
    NoNonDiTargetsError,
    UnknownStakeholderError,
)
from .markov import absorption_probabilities
from .network import (
    RAW_FREQUENCY,
    FlowRecord,
    NetworkSpec,
    counts_for,
    plug_in_chain,
    require_valid,
)
from .simulation import draw_samples

MONTE_CARLO = "monte-carlo"
PLUG_IN = "plug-in"
_MODE_ALIASES = {
    "mc": MONTE_CARLO,
    "monte-carlo": MONTE_CARLO,
    "plugin": PLUG_IN,
    "plug-in": PLUG_IN,
}

_DI = "DI"


@dataclass(frozen=True, eq=False)
class SweepResult:
    stakeholder: str
    mode: str
    n_di_values: tuple[float, ...]
    means: np.ndarray  # (increments, 3) columns (P_DI, P_S, P_US)
    p_s_max: float  # mean P_S at n_di = 0
    p_s_min: float  # mean P_S at n_di = total outflow
    impact_ratio: float
    samples: np.ndarray | None = None  # (increments, iterations, 3), Monte Carlo only

    @property
    def n_di_min(self) -> float:
        return self.n_di_values[0]

    @property
    def n_di_max(self) -> float:
        return self.n_di_values[-1]


def reallocate(counts: CountVector, di_value: float) -> CountVector:
    """Set the DI entry to `di_value` and spread the remaining total over the
    other entries proportionally to their original frequencies.

    A missing DI entry is created at the conventional label position
    (after transient targets, before S/US). Total outflow is preserved.
    """
    di = float(di_value)
    if di < 0:
        raise NegativeEntryError(f"di_value must be >= 0, got {di}")
    labels = list(counts.labels)
    values = dict(zip(labels, counts.counts))
    if _DI not in values:
        insert_at = len(labels)
        for tail in ("S", "US"):
            if tail in labels:
                insert_at = min(insert_at, labels.index(tail))
        labels.insert(insert_at, _DI)
        values[_DI] = 0.0
    non_di = [lab for lab in labels if lab != _DI]
    if not non_di:
        raise NoNonDiTargetsError("counts contain no non-DI entries")
    total = sum(values.values())
    if di > total * (1 + 1e-12) + 1e-12:
        raise ExceedsTotalError(f"di_value {di} exceeds total outflow {total}")
    di = min(di, total)
    rest = total - values[_DI]
    if rest == 0.0:
        if di != total:
            raise NoNonDiTargetsError(
                "all outflow is already discarded; nothing to scale back up"
            )
        scale = 0.0
    else:
        scale = (total - di) / rest
    new = [di if lab == _DI else values[lab] * scale for lab in labels]
    return CountVector(tuple(labels), new)


def impact_ratio(p_s_max: float, p_s_min: float, n_max: float, n_min: float) -> float:
    """Change in satisfaction probability per unit of discarded flow."""
    if n_max <= n_min:
        raise DegenerateRangeError(f"n_max ({n_max}) must exceed n_min ({n_min})")
    return (p_s_max - p_s_min) / (n_max - n_min)


def _di_grid(total: float, increment: float) -> tuple[float, ...]:
    if increment <= 0:
        raise ValueError(f"increment must be positive, got {increment}")
    values = list(np.arange(0.0, total + increment * 1e-9, increment))
    if not values or values[-1] < total - increment * 1e-9:
        values.append(total)
    values[-1] = total
    return tuple(float(v) for v in values)


def _with_reallocated(spec: NetworkSpec, stakeholder: str, cv: CountVector) -> NetworkSpec:
    kept = tuple(f for f in spec.flows if f.source != stakeholder)
    new = tuple(
        FlowRecord(stakeholder, label, float(v)) for label, v in zip(cv.labels, cv.counts)
    )
    return NetworkSpec(spec.stakeholders, kept + new, spec.start)


def sweep_ineffective(
    spec: NetworkSpec,
    stakeholder: str,
    iterations: int,
    seed: int,
    mode: str = MONTE_CARLO,
    *,
    increment: float = 1.0,
    workers: int | None = None,
) -> SweepResult:
    """Sweep one stakeholder's discarded-flow frequency over 0..total outflow.

    Monte Carlo mode estimates each increment's means from `iterations`
    posterior draws; increment i of stakeholder s uses streams derived from
    (seed, index(s), i, t). Plug-in mode evaluates the raw-frequency chain
    deterministically and ignores `iterations`.
    """
    try:
        mode = _MODE_ALIASES[mode]
    except KeyError:
        raise ValueError(f"unknown sweep mode {mode!r}") from None
    require_valid(spec)
    if stakeholder not in spec.ids:
        raise UnknownStakeholderError(f"unknown stakeholder '{stakeholder}'")
    base = counts_for(spec, stakeholder)
    grid = _di_grid(base.total, increment)
    s_idx = spec.ids.index(stakeholder)
    start_idx = spec.ids.index(spec.start)

    means = np.empty((len(grid), 3))
    all_samples = np.empty((len(grid), iterations, 3)) if mode == MONTE_CARLO else None
    for i, di in enumerate(grid):
        modified = _with_reallocated(spec, stakeholder, reallocate(base, di))
        if mode == MONTE_CARLO:
            samples = draw_samples(
                modified, iterations, seed, workers=workers, key=(s_idx, i)
            )
            all_samples[i] = samples
            means[i] = samples.mean(axis=0)
        else:
            result = absorption_probabilities(plug_in_chain(modified, RAW_FREQUENCY))
            means[i] = result.b[start_idx]

    p_s_max = float(means[0, 1])
    p_s_min = float(means[-1, 1])
    ratio = impact_ratio(p_s_max, p_s_min, grid[-1], grid[0])
    means.flags.writeable = False
    if all_samples is not None:
        all_samples.flags.writeable = False
    return SweepResult(
        stakeholder=stakeholder,
        mode=mode,
        n_di_values=grid,
        means=means,
        p_s_max=p_s_max,
        p_s_min=p_s_min,
        impact_ratio=ratio,
        samples=all_samples,
    )


def rank_details(
    spec: NetworkSpec,
    iterations: int,
    seed: int,
    mode: str = MONTE_CARLO,
    *,
    workers: int | None = None,
) -> list[SweepResult]:
    """Sweep every stakeholder except the start; most impactful first.

    Ties in the impact ratio break by ascending stakeholder id.
    """
    require_valid(spec)
    sweeps = [
        sweep_ineffective(spec, sid, iterations, seed, mode, workers=workers)
        for sid in spec.ids
        if sid != spec.start
    ]
    return sorted(sweeps, key=lambda sw: (-sw.impact_ratio, sw.stakeholder))


def rank_stakeholders(
    spec: NetworkSpec,
    iterations: int,
    seed: int,
    mode: str = MONTE_CARLO,
    *,
    workers: int | None = None,
) -> list[tuple[str, float]]:
    """(stakeholder, impact_ratio) pairs, highest impact first."""
    return [
        (sw.stakeholder, sw.impact_ratio)
        for sw in rank_details(spec, iterations, seed, mode, workers=workers)
    ]
