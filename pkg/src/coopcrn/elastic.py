"""Elastic-PU controllers: route admission with SU rewards and hop/link weights."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .maxweight import WeightedProblem, solve
from .queueing import ElasticQueues, SlotDecision
from .topology import CrnTopology, HopLayout, Schedule


@dataclass(frozen=True)
class ElasticParams:
    V2: float
    mu_M: float
    rho: tuple  # reward per route
    A_M: float = 1.0
    epsilon: float = 0.01
    W_P: float = 0.0
    W_S: float = 0.0
    floor_rewards: bool = False

    def __post_init__(self):
        object.__setattr__(self, "rho", tuple(float(r) for r in np.atleast_1d(self.rho)))
        if not self.V2 > 0 or not self.mu_M > 0 or not self.A_M > 0:
            raise ValueError("V2, mu_M and A_M must be positive")
        if any(r < 0 for r in self.rho):
            raise ValueError("route rewards must be >= 0")
        if self.epsilon <= 0 or self.W_P < 0 or self.W_S < 0:
            raise ValueError("epsilon must be > 0 and buffer sizes >= 0")

    def rho_for(self, K: int) -> np.ndarray:
        if len(self.rho) == 1:
            return np.full(K, self.rho[0])
        if len(self.rho) != K:
            raise ValueError(f"{len(self.rho)} rewards for {K} routes")
        return np.asarray(self.rho)


def _route_choice(scores: np.ndarray, threshold: float, amount: float) -> np.ndarray:
    mu = np.zeros(len(scores))
    k = int(np.argmin(scores))  # first minimum: smallest route index on ties
    if scores[k] <= threshold:
        mu[k] = amount
    return mu


def route_scores(q: np.ndarray, u: np.ndarray, layout: HopLayout, rho: np.ndarray) -> np.ndarray:
    """rho_k * sum of q over the SUs on route k, plus the head backlog U_0^k."""
    return rho * (layout.membership @ q) + u[layout.first_hop]


def pu_congestion_elastic(state: ElasticQueues, p: ElasticParams, layout: HopLayout) -> np.ndarray:
    """Per-route admissions: mu_M on the lowest-score route when its score is <= V2."""
    rho = p.rho_for(len(layout.first_hop))
    return _route_choice(route_scores(state.q, state.u, layout, rho), p.V2, p.mu_M)


def hop_weights(state: ElasticQueues, layout: HopLayout) -> WeightedProblem:
    nxt = np.append(state.u[1:], 0.0)
    nxt[layout.last_hop] = 0.0
    return WeightedProblem(np.concatenate([state.u - nxt, state.q]), layout.units)


def reward_arrivals(mu_k: np.ndarray, layout: HopLayout, rho) -> np.ndarray:
    rho = np.broadcast_to(np.asarray(rho, dtype=float), (len(layout.first_hop),))
    return (rho * np.asarray(mu_k, dtype=float)) @ layout.membership


def su_congestion_elastic_arb(Q_l: float, Y_l: float, W_l: float, E_l: float, p: ElasticParams) -> float:
    cap = max(min(W_l + E_l, p.A_M), 0.0)
    return cap if Q_l <= Y_l else 0.0


def pu_congestion_elastic_arb(state: ElasticQueues, p: ElasticParams, layout: HopLayout,
                              W_p: float, E_p: float) -> tuple[float, np.ndarray]:
    """(u_p, per-route admissions) for the arbitrary-arrival PU controller."""
    u_p = p.mu_M if state.y_p <= p.V2 else 0.0
    rho = p.rho_for(len(layout.first_hop))
    scores = route_scores(state.y_l, state.u, layout, rho) - state.y_p
    return u_p, _route_choice(scores, 0.0, max(min(W_p + E_p, p.mu_M), 0.0))


def decide(state: ElasticQueues, p: ElasticParams, topo: CrnTopology, layout: HopLayout,
           scheduler: str = "exact", E_p: float = 0.0, E_l=None) -> SlotDecision:
    n = topo.n_su
    rho = p.rho_for(len(layout.first_hop))
    if state.arbitrary:
        E_l = np.zeros(n) if E_l is None else E_l
        A = np.array([su_congestion_elastic_arb(state.q[l], state.y_l[l], state.w_l[l], E_l[l], p)
                      for l in range(n)])
        u_p, mu = pu_congestion_elastic_arb(state, p, layout, state.w_p, E_p)
    else:
        A = np.zeros(n)
        u_p = 0.0
        mu = pu_congestion_elastic(state, p, layout)
    active = solve(hop_weights(state, layout), scheduler)
    return SlotDecision(
        schedule=Schedule.from_units(active, topo, layout),
        pu_admission=mu,
        su_admissions=A,
        aux_pu=u_p,
        exo_pu=E_p,
        exo_su=E_l,
        su_rewards=reward_arrivals(mu, layout, rho),
    )
