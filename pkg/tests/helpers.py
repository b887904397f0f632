"""Independent oracles shared by the test suite.

These deliberately avoid the library's linear-solve path so that the two
routes check each other.
"""

from __future__ import annotations

import numpy as np


def truncated_power_absorption(q, r, residual_tol=1e-10, max_steps=100_000):
    """Absorption probabilities by accumulating path mass length by length.

    B = sum_k Q^k R, truncated once the not-yet-absorbed transient mass
    (row sums of Q^(k+1)) drops below residual_tol everywhere.
    """
    q = np.asarray(q, dtype=float)
    r = np.asarray(r, dtype=float)
    acc = np.zeros_like(r)
    walk = np.eye(q.shape[0])
    for _ in range(max_steps):
        acc += walk @ r
        walk = walk @ q
        if walk.sum(axis=1).max() < residual_tol:
            return acc
    raise AssertionError("path enumeration did not converge; chain too sticky")


def enumerate_paths_absorption(spec, absorbing=("DI", "S", "US")):
    """Exact raw-frequency absorption from the start stakeholder of an
    acyclic network, by depth-first enumeration of every path."""
    rows: dict[str, list[tuple[str, float]]] = {}
    totals: dict[str, float] = {}
    for f in spec.flows:
        rows.setdefault(f.source, []).append((f.target, f.frequency))
        totals[f.source] = totals.get(f.source, 0.0) + f.frequency
    out = dict.fromkeys(absorbing, 0.0)

    def walk(state: str, mass: float, depth: int) -> None:
        assert depth < 1000, "cycle detected; this oracle needs an acyclic network"
        for target, freq in rows[state]:
            p = mass * freq / totals[state]
            if target in out:
                out[target] += p
            else:
                walk(target, p, depth + 1)

    walk(spec.start, 1.0, 0)
    return np.array([out[k] for k in absorbing])


def random_valid_chain(rng, n_max=5):
    """Random canonical (q, r) blocks with guaranteed absorption: every row
    keeps at least 5% direct absorbing mass."""
    n = int(rng.integers(1, n_max + 1))
    q = rng.random((n, n)) * (rng.random((n, n)) > 0.3)
    r = rng.random((n, 3)) + 0.05
    total = q.sum(axis=1) + r.sum(axis=1)
    return q / total[:, None], r / total[:, None]
