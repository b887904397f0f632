"""Stakeholder-network domain layer.

A NetworkSpec is the single input document: stakeholders at federal/state/
local levels, directed flow records with observed frequencies, and the start
stakeholder that originates assistance information. Flows may target other
stakeholders or the three absorbing end states DI (discarded), S (satisfied),
US (unsatisfied). This module validates specs and converts them into count
vectors and transition matrices.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from . import dirichlet
from .dirichlet import CountVector
from .errors import UnknownStakeholderError, ValidationError
from .markov import ABSORBING_ORDER, TransitionMatrix, build_canonical

LEVELS = ("federal", "state", "local")

RAW_FREQUENCY = "raw"
POSTERIOR_MEAN = "posterior-mean"
_MODE_ALIASES = {
    "raw": RAW_FREQUENCY,
    "raw-frequency": RAW_FREQUENCY,
    "posterior-mean": POSTERIOR_MEAN,
}


@dataclass(frozen=True)
class Stakeholder:
    id: str
    level: str


@dataclass(frozen=True)
class FlowRecord:
    """One observed flow: `source` is always a stakeholder; `target` may be
    a stakeholder id or one of the absorbing labels DI/S/US."""

    source: str
    target: str
    frequency: float


@dataclass(frozen=True)
class NetworkSpec:
    stakeholders: tuple[Stakeholder, ...]
    flows: tuple[FlowRecord, ...]
    start: str

    def __post_init__(self):
        object.__setattr__(self, "stakeholders", tuple(self.stakeholders))
        object.__setattr__(self, "flows", tuple(self.flows))

    @property
    def ids(self) -> tuple[str, ...]:
        return tuple(s.id for s in self.stakeholders)


@dataclass(frozen=True)
class ValidationReport:
    violations: tuple[str, ...]

    @property
    def ok(self) -> bool:
        return not self.violations


def validate(spec: NetworkSpec) -> ValidationReport:
    """Collect semantic violations; an empty report means every downstream
    operation (counts, plug-in/sampled chains, simulation, sweeps) is safe."""
    v: list[str] = []
    ids = [s.id for s in spec.stakeholders]
    id_set = set(ids)

    for sid in sorted({i for i in ids if ids.count(i) > 1}):
        v.append(f"duplicate stakeholder id '{sid}'")
    for s in spec.stakeholders:
        if s.id in ABSORBING_ORDER:
            v.append(f"reserved absorbing label used as stakeholder id '{s.id}'")
        if s.level not in LEVELS:
            v.append(f"unknown level '{s.level}' for stakeholder '{s.id}'")
    if spec.start not in id_set:
        v.append(f"start stakeholder '{spec.start}' not declared")

    seen_pairs = set()
    for f in spec.flows:
        if f.source not in id_set:
            v.append(f"flow from unknown stakeholder '{f.source}'")
        if f.target not in id_set and f.target not in ABSORBING_ORDER:
            v.append(f"flow to unknown state '{f.target}'")
        if f.source == f.target:
            v.append(f"self-loop on stakeholder '{f.source}'")
        if f.frequency < 0:
            v.append(f"negative frequency {f.frequency} on flow {f.source}->{f.target}")
        pair = (f.source, f.target)
        if pair in seen_pairs:
            v.append(f"duplicate flow {f.source}->{f.target}")
        seen_pairs.add(pair)

    if v:
        return ValidationReport(tuple(v))

    # Structural checks need a well-formed flow list, hence the early return.
    outflow = {sid: 0.0 for sid in ids}
    for f in spec.flows:
        outflow[f.source] += f.frequency
    for sid in ids:
        if outflow[sid] <= 0.0:
            v.append(f"dead-end transient state '{sid}' (no positive outflow)")

    # Absorbing reachability over strictly positive flows.
    reaches = {sid: False for sid in ids}
    changed = True
    while changed:
        changed = False
        for f in spec.flows:
            if f.frequency <= 0 or reaches[f.source]:
                continue
            if f.target in ABSORBING_ORDER or reaches.get(f.target, False):
                reaches[f.source] = True
                changed = True
    for sid in ids:
        if not reaches[sid]:
            v.append(f"no absorbing state reachable from stakeholder '{sid}'")

    return ValidationReport(tuple(v))


def require_valid(spec: NetworkSpec) -> None:
    report = validate(spec)
    if not report.ok:
        raise ValidationError(report)


def counts_for(spec: NetworkSpec, stakeholder: str) -> CountVector:
    """Outgoing frequencies of one stakeholder, labeled by interacting state.

    Label order is deterministic: transient targets in declaration order,
    then DI, S, US. Only states with a flow record present appear, so K is
    the number of actually interacting states.
    """
    ids = spec.ids
    if stakeholder not in ids:
        raise UnknownStakeholderError(f"unknown stakeholder '{stakeholder}'")
    targets = {f.target: f.frequency for f in spec.flows if f.source == stakeholder}
    order = [sid for sid in ids if sid in targets]
    order += [a for a in ABSORBING_ORDER if a in targets]
    return CountVector(tuple(order), [targets[t] for t in order])


@dataclass(frozen=True, eq=False)
class _CompiledRow:
    """Assembly plan for one stakeholder row: posterior parameters plus the
    Q/R column positions of its interacting states."""

    index: int
    counts: CountVector
    alpha: np.ndarray  # flat-prior posterior, 1 + counts
    q_cols: np.ndarray
    q_sel: np.ndarray
    r_cols: np.ndarray
    r_sel: np.ndarray


@lru_cache(maxsize=128)
def _compiled(spec: NetworkSpec):
    """Per-spec assembly plan: validation + per-stakeholder rows, cached."""
    require_valid(spec)
    ids = spec.ids
    state_order = ids + ABSORBING_ORDER
    col = {label: i for i, label in enumerate(state_order)}
    n = len(ids)
    rows = []
    for i, sid in enumerate(ids):
        cv = counts_for(spec, sid)
        q_cols, r_cols, q_sel, r_sel = [], [], [], []
        for j, label in enumerate(cv.labels):
            if label in ABSORBING_ORDER:
                r_cols.append(col[label] - n)
                r_sel.append(j)
            else:
                q_cols.append(col[label])
                q_sel.append(j)
        alpha = 1.0 + cv.counts
        alpha.flags.writeable = False
        rows.append(
            _CompiledRow(
                index=i,
                counts=cv,
                alpha=alpha,
                q_cols=np.asarray(q_cols, dtype=np.intp),
                q_sel=np.asarray(q_sel, dtype=np.intp),
                r_cols=np.asarray(r_cols, dtype=np.intp),
                r_sel=np.asarray(r_sel, dtype=np.intp),
            )
        )
    return state_order, rows


def _assemble(spec: NetworkSpec, row_theta) -> TransitionMatrix:
    state_order, rows = _compiled(spec)
    n = len(rows)
    q = np.zeros((n, n))
    r = np.zeros((n, len(ABSORBING_ORDER)))
    for row in rows:
        theta = row_theta(row.counts)
        q[row.index, row.q_cols] = theta[row.q_sel]
        r[row.index, row.r_cols] = theta[row.r_sel]
    return build_canonical(q, r, state_order)


def plug_in_chain(spec: NetworkSpec, mode: str = RAW_FREQUENCY) -> TransitionMatrix:
    """Deterministic chain: rows are normalized frequencies (raw mode) or the
    mean of the flat-prior posterior (posterior-mean mode)."""
    try:
        mode = _MODE_ALIASES[mode]
    except KeyError:
        raise ValueError(f"unknown plug-in mode {mode!r}") from None
    if mode == RAW_FREQUENCY:
        return _assemble(spec, lambda cv: cv.counts / cv.total)
    return _assemble(
        spec, lambda cv: dirichlet.mean(dirichlet.noninformative_posterior(cv)).theta
    )


def sampled_chain(spec: NetworkSpec, rng: np.random.Generator) -> TransitionMatrix:
    """Stochastic chain: each stakeholder row is one draw from its flat-prior
    posterior. Rows are drawn in declaration order, so the result is a pure
    function of (spec, generator state)."""
    return _assemble(
        spec,
        lambda cv: dirichlet.sample(dirichlet.noninformative_posterior(cv), rng).theta,
    )
