"""Capacity-region optima by linear programming over schedule time-shares.

A point of either program is a probability vector ``x`` over the feasible
schedules plus the rates it supports; drawing schedules i.i.d. from ``x``
is a queue-independent stationary policy serving exactly those rates.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Iterator

import numpy as np

from .lp import OPTIMAL, lp_solve
from .topology import (DEFAULT_ENUMERATION_CAP, CrnTopology, RouteSet, Schedule,
                       hop_layout)
from .utility import UtilitySpec


class OracleUnsupported(ValueError):
    """The requested utility family has no exact LP oracle."""


@dataclass
class OracleSolution:
    model: str
    status: str
    objective: float | None = None
    rates: np.ndarray | None = None  # r*_l (inelastic) or lambda*_k (elastic)
    shares: np.ndarray | None = None  # over schedules, aligned with ``schedules``
    schedules: np.ndarray | None = None  # bool unit matrix, one row per schedule
    epsilon: float = 0.0
    duality_gap: float | None = None
    extra: dict = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return self.status == OPTIMAL

    def to_dict(self) -> dict:
        doc = {"model": self.model, "status": self.status, "epsilon": self.epsilon,
               "objective": self.objective}
        if self.ok:
            doc["rates"] = [float(r) for r in self.rates]
            doc["shares"] = [
                {"schedule": "".join("1" if b else "0" for b in row), "share": float(s)}
                for row, s in zip(self.schedules, self.shares) if s > 0]
            doc["duality_gap"] = self.duality_gap
        return doc

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2)


def elastic_optimum(topo: CrnTopology, routes: RouteSet, rho, eps: float = 0.0,
                    cap: int = DEFAULT_ENUMERATION_CAP) -> OracleSolution:
    """max sum_k lambda_k such that every hop of route k is served at rate
    >= lambda_k + eps and SU link l at >= sum_k rho_k (lambda_k + eps) over
    the routes through l."""
    layout = hop_layout(topo, routes)
    S = layout.units.enumerate(cap).astype(float)
    nS, K, N = S.shape[0], routes.K, topo.n_su
    rho = np.broadcast_to(np.asarray(rho, dtype=float), (K,))
    nh = layout.n_hops
    # variables: [x_s (nS), lambda_k (K)]
    c = np.concatenate([np.zeros(nS), np.ones(K)])
    A_ub, b_ub = [], []
    for h in range(nh):
        row = np.zeros(nS + K)
        row[:nS] = -S[:, h]
        row[nS + layout.hop_route[h]] = 1.0
        A_ub.append(row)
        b_ub.append(-eps)
    for l in range(N):
        row = np.zeros(nS + K)
        row[:nS] = -S[:, nh + l]
        row[nS:] = rho * layout.membership[:, l]
        A_ub.append(row)
        b_ub.append(-eps * float(rho @ layout.membership[:, l]))
    A_eq = np.concatenate([np.ones(nS), np.zeros(K)])[None, :]
    res = lp_solve(c, A_ub, b_ub, A_eq, [1.0], maximize=True)
    if not res.ok:
        return OracleSolution("elastic", res.status, epsilon=eps)
    return OracleSolution("elastic", OPTIMAL, objective=res.objective, rates=res.x[nS:],
                          shares=_clean_shares(res.x[:nS]), schedules=S.astype(bool),
                          epsilon=eps, duality_gap=res.duality_gap)


def inelastic_optimum(topo: CrnTopology, a_P: float, f: UtilitySpec, g, eps: float = 0.0,
                      cap: int = DEFAULT_ENUMERATION_CAP) -> OracleSolution:
    """max sum_l g_l(r_l) with PU flow f^{-1}(a_P) + eps routed freely over the
    relay links and SU link l served at >= r_l + eps.  Linear g only."""
    N = topo.n_su
    g = [UtilitySpec.from_dict(u) for u in g] if g else [UtilitySpec()]
    if len(g) == 1:
        g = g * N
    if any(u.family != "linear" for u in g):
        raise OracleUnsupported("the inelastic oracle supports linear SU utilities only")
    S = topo.units.enumerate(cap).astype(float)
    nS, L = S.shape[0], topo.n_relay
    demand = f.inverse(a_P) + eps
    # variables: [x_s (nS), flow_e (L), r_l (N)]
    nvar = nS + L + N
    c = np.concatenate([np.zeros(nS + L), [u.theta for u in g]])
    A_ub, b_ub = [], []
    for e in range(L):
        row = np.zeros(nvar)
        row[:nS] = -S[:, e]
        row[nS + e] = 1.0
        A_ub.append(row)
        b_ub.append(0.0)
    for l in range(N):
        row = np.zeros(nvar)
        row[:nS] = -S[:, L + l]
        row[nS + L + l] = 1.0
        A_ub.append(row)
        b_ub.append(-eps)
    A_eq, b_eq = [np.concatenate([np.ones(nS), np.zeros(L + N)])], [1.0]
    # net outflow: demand at s_P, zero at every SU (d_P absorbs)
    for i, node in enumerate(topo.pu_nodes):
        row = np.zeros(nvar)
        for e, (u, v) in enumerate(topo.relay_links):
            if u == node:
                row[nS + e] += 1.0
            if v == node:
                row[nS + e] -= 1.0
        A_eq.append(row)
        b_eq.append(demand if i == 0 else 0.0)
    res = lp_solve(c, A_ub, b_ub, A_eq, b_eq, maximize=True)
    if not res.ok:
        return OracleSolution("inelastic", res.status, epsilon=eps)
    return OracleSolution("inelastic", OPTIMAL, objective=res.objective, rates=res.x[nS + L:],
                          shares=_clean_shares(res.x[:nS]), schedules=S.astype(bool),
                          epsilon=eps, duality_gap=res.duality_gap,
                          extra={"pu_flow": res.x[nS:nS + L].tolist(), "pu_demand": demand})


def _clean_shares(x: np.ndarray) -> np.ndarray:
    x = np.clip(x, 0.0, None)
    return x / x.sum()


def sample_stationary_policy(sol: OracleSolution, seed: int) -> Iterator[np.ndarray]:
    """Endless i.i.d. stream of schedule rows drawn with probabilities ``sol.shares``."""
    if not sol.ok:
        raise ValueError(f"cannot sample from a {sol.status} oracle solution")
    rng = np.random.default_rng(seed)
    cdf = np.cumsum(sol.shares)
    cdf[-1] = 1.0
    while True:
        for u in rng.random(4096):
            yield sol.schedules[int(np.searchsorted(cdf, u, side="right"))]


def schedule_of(row: np.ndarray, topo: CrnTopology, routes: RouteSet | None = None) -> Schedule:
    layout = None if routes is None else hop_layout(topo, routes)
    return Schedule.from_units(row, topo, layout)
