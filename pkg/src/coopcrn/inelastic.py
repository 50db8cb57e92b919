"""Inelastic-PU controllers: SU congestion control, R(t) regulation, PU
admission and back-pressure link weights, for backlogged and
arbitrary-arrival transport layers."""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .maxweight import WeightedProblem, solve
from .queueing import InelasticQueues, SlotDecision
from .topology import CrnTopology, Schedule
from .utility import UtilitySpec, penalized_rate


@dataclass(frozen=True)
class InelasticParams:
    V1: float
    q_M: float
    mu_M: float
    A_M: float
    a_P: float
    f: UtilitySpec = field(default_factory=UtilitySpec)
    g: tuple = ()  # one UtilitySpec per SU; empty means linear theta=1 for all
    epsilon: float = 0.05
    W_P: float = 0.0
    W_S: float = 0.0

    def __post_init__(self):
        for name in ("V1", "q_M", "mu_M", "A_M"):
            if not getattr(self, name) > 0:
                raise ValueError(f"{name} must be positive")
        if self.q_M < self.mu_M:
            raise ValueError(f"q_M={self.q_M} must be at least mu_M={self.mu_M}")
        if self.a_P < 0 or self.epsilon <= 0:
            raise ValueError("a_P must be >= 0 and epsilon > 0")
        if self.W_P < 0 or self.W_S < 0:
            raise ValueError("transport buffer sizes must be >= 0")
        object.__setattr__(self, "f", UtilitySpec.from_dict(self.f))
        object.__setattr__(self, "g", tuple(UtilitySpec.from_dict(u) for u in self.g))

    def g_l(self, l: int) -> UtilitySpec:
        if not self.g:
            return UtilitySpec()
        return self.g[l] if len(self.g) > 1 else self.g[0]

    @property
    def min_rate(self) -> float:
        """f^{-1}(a_P), the per-slot arrival to the virtual queue Z."""
        return self.f.inverse(self.a_P)

    def buffer_condition(self, n_su: int) -> bool:
        """q_M > (mu_M^2 + N + 1) / epsilon + mu_M."""
        return self.q_M > (self.mu_M ** 2 + n_su + 1) / self.epsilon + self.mu_M


def su_congestion(Q_l: float, p: InelasticParams, l: int = 0) -> float:
    """A_l(t) minimizing A*Q_l - V1*g_l(A) over [0, A_M]."""
    return penalized_rate(p.g_l(l), Q_l, p.V1, p.A_M)


def r_regulator(U_p: float, Z: float, p: InelasticParams) -> float:
    if U_p * (p.q_M - p.mu_M) / p.q_M - Z > 0:
        return 0.0
    return p.mu_M


def pu_congestion(U_sP: float, p: InelasticParams) -> float:
    return 0.0 if p.q_M - p.mu_M - U_sP <= 0 else p.mu_M


def link_weights(state: InelasticQueues, p: InelasticParams, topo: CrnTopology) -> WeightedProblem:
    """Relay link (m, n): (U_p / q_M)(U_m - U_n) with U_{d_P} = 0; SU link l: Q_l."""
    u_ext = np.append(state.u, 0.0)
    relay = (state.u_p / p.q_M) * (u_ext[topo.relay_src] - u_ext[topo.relay_dst])
    return WeightedProblem(np.concatenate([relay, state.q]), topo.units)


def su_congestion_arb(Y_l: float, Q_l: float, W_l: float, E_l: float,
                      p: InelasticParams, l: int = 0) -> tuple[float, float]:
    """(u_l, A_l) for the arbitrary-arrival SU controller."""
    u_l = penalized_rate(p.g_l(l), Y_l, p.V1, p.A_M)
    cap = max(min(W_l + E_l, p.A_M), 0.0)
    return u_l, (cap if Q_l <= Y_l else 0.0)


def r_regulator_arb(Y_p: float, Z: float, U_p: float, W_p: float, E_p: float,
                    p: InelasticParams) -> tuple[float, float]:
    """(u_p, R) for the arbitrary-arrival R(t) regulator."""
    u_p = p.mu_M if Y_p - Z <= 0 else 0.0
    R = min(W_p + E_p, p.mu_M) if (p.q_M - p.mu_M) / p.q_M * U_p - Y_p <= 0 else 0.0
    return u_p, R


def pu_congestion_arb(U_sP: float, W_p: float, E_p: float, p: InelasticParams) -> float:
    return 0.0 if p.q_M - p.mu_M - U_sP <= 0 else min(W_p + E_p, p.mu_M)


def decide(state: InelasticQueues, p: InelasticParams, topo: CrnTopology,
           scheduler: str = "exact", E_p: float = 0.0, E_l=None) -> SlotDecision:
    """All four control parts for one slot, from the start-of-slot state."""
    n = topo.n_su
    if state.arbitrary:
        E_l = np.zeros(n) if E_l is None else E_l
        aux_su = np.empty(n)
        A = np.empty(n)
        for l in range(n):
            aux_su[l], A[l] = su_congestion_arb(state.y_l[l], state.q[l], state.w_l[l], E_l[l], p, l)
        u_p, R = r_regulator_arb(state.y_p, state.z, state.u_p, state.w_p, E_p, p)
        mu = pu_congestion_arb(state.u[0], state.w_p, E_p, p)
    else:
        aux_su, u_p = None, 0.0
        A = np.array([su_congestion(state.q[l], p, l) for l in range(n)])
        R = r_regulator(state.u_p, state.z, p)
        mu = pu_congestion(state.u[0], p)
    active = solve(link_weights(state, p, topo), scheduler)
    return SlotDecision(
        schedule=Schedule.from_units(active, topo),
        pu_admission=mu,
        su_admissions=A,
        virtual_rate=R,
        aux_pu=u_p,
        aux_su=aux_su,
        exo_pu=E_p,
        exo_su=E_l,
    )
