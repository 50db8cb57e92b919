"""Per-slot max-weight scheduling over feasible schedules."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .topology import DEFAULT_ENUMERATION_CAP, EnumerationCapError, UnitGraph


@dataclass(frozen=True, eq=False)
class WeightedProblem:
    weights: np.ndarray  # one entry per decision unit, SU links last
    units: UnitGraph

    def __post_init__(self):
        w = np.asarray(self.weights, dtype=float)
        if w.shape != (self.units.n_units,):
            raise ValueError(f"{w.shape[0] if w.ndim else 0} weights for {self.units.n_units} units")
        object.__setattr__(self, "weights", w)

    def value(self, active) -> float:
        return float(self.weights[np.asarray(active, dtype=bool)].sum())


def solve_exact(prob: WeightedProblem, cap: int = DEFAULT_ENUMERATION_CAP) -> np.ndarray:
    """Maximum-weight feasible activation (bool vector over units).

    Units with weight <= 0 are never activated.  Among optimal schedules the
    lexicographically smallest activation vector is returned.
    """
    if prob.units.n_units > cap:
        raise EnumerationCapError(
            f"exact scheduling over {prob.units.n_units} units exceeds the cap of {cap}; "
            "use solve_gmm")
    w = prob.weights
    positive = w > 0
    scores = prob.units.feasible_float @ np.where(positive, w, 0.0)
    # rows are in ascending lexicographic order, argmax keeps the first maximum
    return prob.units.feasible[int(np.argmax(scores))] & positive


def solve_gmm(prob: WeightedProblem) -> np.ndarray:
    """Greedy maximal schedule: heaviest positive unit first, lower index on ties."""
    w = prob.weights
    excl = prob.units.exclusion
    active = np.zeros(len(w), dtype=bool)
    blocked = np.zeros(len(w), dtype=bool)
    for i in sorted(np.flatnonzero(w > 0), key=lambda i: (-w[i], i)):
        if not blocked[i]:
            active[i] = True
            blocked |= excl[i]
    return active


def solve(prob: WeightedProblem, scheduler: str = "exact") -> np.ndarray:
    if scheduler == "exact":
        return solve_exact(prob)
    if scheduler == "gmm":
        return solve_gmm(prob)
    raise ValueError(f"unknown scheduler {scheduler!r}")
