"""Queue state and one-slot queue dynamics for both PU models.

All backlogs are non-negative reals.  Within a slot every departure is
computed from the start-of-slot backlog (store-and-forward: a packet
received in slot t is servable from slot t+1), and admissions are added
after service.
"""
from __future__ import annotations

import csv
from dataclasses import dataclass, field, replace
from typing import NamedTuple

import numpy as np

from .topology import CrnTopology, HopLayout, Schedule, is_feasible


class InfeasibleScheduleError(ValueError):
    """A step was asked to apply a schedule outside the feasible set."""


@dataclass(frozen=True, eq=False)
class InelasticQueues:
    u: np.ndarray  # PU backlog per node in topo.pu_nodes (s_P first; d_P not stored)
    q: np.ndarray  # SU backlog per secondary node
    u_p: float = 0.0
    z: float = 0.0
    # transport layer, arbitrary-arrival mode only
    w_p: float = 0.0
    w_l: np.ndarray | None = None
    y_p: float = 0.0
    y_l: np.ndarray | None = None

    @classmethod
    def zeros(cls, topo: CrnTopology, arbitrary: bool = False) -> "InelasticQueues":
        n = topo.n_su
        extra = dict(w_l=np.zeros(n), y_l=np.zeros(n)) if arbitrary else {}
        return cls(u=np.zeros(len(topo.pu_nodes)), q=np.zeros(n), **extra)

    @property
    def arbitrary(self) -> bool:
        return self.w_l is not None


@dataclass(frozen=True, eq=False)
class ElasticQueues:
    u: np.ndarray  # U_m^k flattened in HopLayout order (U_{H_k+1}^k = 0 not stored)
    q: np.ndarray
    w_p: float = 0.0
    w_l: np.ndarray | None = None
    y_p: float = 0.0
    y_l: np.ndarray | None = None
    reward_residual: np.ndarray | None = None

    @classmethod
    def zeros(cls, topo: CrnTopology, layout: HopLayout, arbitrary: bool = False) -> "ElasticQueues":
        n = topo.n_su
        extra = dict(w_l=np.zeros(n), y_l=np.zeros(n)) if arbitrary else {}
        return cls(u=np.zeros(layout.n_hops), q=np.zeros(n), reward_residual=np.zeros(n), **extra)

    @property
    def arbitrary(self) -> bool:
        return self.w_l is not None


@dataclass(eq=False)
class SlotDecision:
    schedule: Schedule
    pu_admission: float | np.ndarray  # mu_{p s_P}, or per-route mu_{-1,0}^k
    su_admissions: np.ndarray  # A_l
    virtual_rate: float = 0.0  # R(t)
    aux_pu: float = 0.0  # u_p(t)
    aux_su: np.ndarray | None = None  # u_l(t)
    exo_pu: float = 0.0  # E_p(t)
    exo_su: np.ndarray | None = None  # E_l(t)
    su_rewards: np.ndarray | None = None  # elastic: sum_k rho_k mu^k 1{l on route k}

    @property
    def total_pu_admission(self) -> float:
        return float(np.sum(self.pu_admission))


class SlotFlows(NamedTuple):
    delivered: float | np.ndarray  # PU packets reaching d_P (per route in elastic mode)
    su_served: np.ndarray
    su_arrivals: np.ndarray


def _pos(x):
    return np.maximum(x, 0.0)


def step_inelastic(state: InelasticQueues, dec: SlotDecision, topo: CrnTopology,
                   min_rate: float = 0.0, check: bool = True) -> tuple[InelasticQueues, SlotFlows]:
    """Advance the inelastic queues by one slot.

    ``min_rate`` is f^{-1}(a_P), the per-slot arrival to the virtual service
    queue Z.  In arbitrary-arrival mode Z is served by the auxiliary u_p
    instead of R.
    """
    if check and not is_feasible(topo, dec.schedule):
        raise InfeasibleScheduleError(f"infeasible schedule {dec.schedule!r}")
    n = len(state.u)
    active = dec.schedule.relay_active
    src = topo.relay_src[active]
    dst = topo.relay_dst[active]
    # at most one active outgoing link per node, so each sends min(U, 1)
    sent = np.minimum(state.u[src], 1.0)
    u = state.u - np.bincount(src, weights=sent, minlength=n)
    into = np.bincount(dst, weights=sent, minlength=n + 1)
    delivered = float(into[n])
    u = u + into[:n]
    u[0] += float(dec.pu_admission)

    s = dec.schedule.su_active.astype(float)
    served = np.minimum(state.q, s)
    q = state.q - served + dec.su_admissions

    u_p = max(state.u_p - float(dec.pu_admission), 0.0) + dec.virtual_rate
    z_service = dec.aux_pu if state.arbitrary else dec.virtual_rate
    z = max(state.z - z_service, 0.0) + min_rate
    new = replace(state, u=u, q=q, u_p=u_p, z=z)
    return new, SlotFlows(delivered, served, np.asarray(dec.su_admissions, dtype=float))


def step_elastic(state: ElasticQueues, dec: SlotDecision, layout: HopLayout,
                 floor_rewards: bool = False, check_topo: CrnTopology | None = None,
                 routes=None) -> tuple[ElasticQueues, SlotFlows]:
    """Advance the per-route PU queues and SU queues by one slot.

    Backlogged mode credits reward arrivals to Q_l; arbitrary-arrival mode
    credits the admitted A_l (rewards then feed the virtual Y_l queues in
    :func:`step_transport`).
    """
    if check_topo is not None and not is_feasible(check_topo, dec.schedule, routes):
        raise InfeasibleScheduleError(f"infeasible schedule {dec.schedule!r}")
    hops = dec.schedule.hop_active
    sent = np.where(hops, np.minimum(state.u, 1.0), 0.0)
    u = state.u - sent
    # hop h feeds queue h+1 unless it is the last hop of its route
    interior = np.ones(len(u), dtype=bool)
    interior[layout.last_hop] = False
    fwd = np.where(interior, sent, 0.0)
    u[1:] += fwd[:-1]
    delivered = sent[layout.last_hop]
    mu = np.broadcast_to(np.asarray(dec.pu_admission, dtype=float), (len(layout.first_hop),))
    u[layout.first_hop] += mu

    s = dec.schedule.su_active.astype(float)
    served = np.minimum(state.q, s)
    residual = state.reward_residual
    if state.arbitrary:
        arrivals = np.asarray(dec.su_admissions, dtype=float)
    else:
        arrivals = np.asarray(dec.su_rewards, dtype=float)
        if floor_rewards:
            acc = residual + arrivals
            arrivals = np.floor(acc)
            residual = acc - arrivals
    q = state.q - served + arrivals
    new = replace(state, u=u, q=q, reward_residual=residual)
    return new, SlotFlows(delivered, served, arrivals)


def step_transport(state, dec: SlotDecision, caps: tuple[float, float]):
    """Transport-layer backlogs W and virtual queues Y (arbitrary-arrival mode).

    ``caps`` is ``(W_P, W_S)``.
    """
    if not state.arbitrary:
        raise ValueError("transport queues exist only in arbitrary-arrival mode")
    W_P, W_S = caps
    A = np.asarray(dec.su_admissions, dtype=float)
    E_l = np.zeros_like(A) if dec.exo_su is None else np.asarray(dec.exo_su, dtype=float)
    mu = dec.total_pu_admission
    w_l = np.minimum(_pos(state.w_l + E_l - A), W_S)
    w_p = min(max(state.w_p + dec.exo_pu - mu, 0.0), W_P)
    if isinstance(state, ElasticQueues):
        y_p = max(state.y_p - mu, 0.0) + dec.aux_pu
        y_l = _pos(state.y_l - A) + dec.su_rewards
    else:
        y_p = max(state.y_p - dec.virtual_rate, 0.0) + dec.aux_pu
        y_l = _pos(state.y_l - A) + dec.aux_su
    return replace(state, w_p=w_p, w_l=w_l, y_p=y_p, y_l=y_l)


def snapshot_rows(slot: int, state) -> list[tuple]:
    """Queue snapshot as ``(slot, queue_id, value)`` rows."""
    rows = [(slot, f"U[{i}]", float(v)) for i, v in enumerate(state.u)]
    rows += [(slot, f"Q[{i}]", float(v)) for i, v in enumerate(state.q)]
    if isinstance(state, InelasticQueues):
        rows += [(slot, "Up", state.u_p), (slot, "Z", state.z)]
    if state.arbitrary:
        rows.append((slot, "Wp", state.w_p))
        rows += [(slot, f"W[{i}]", float(v)) for i, v in enumerate(state.w_l)]
        rows.append((slot, "Yp", state.y_p))
        rows += [(slot, f"Y[{i}]", float(v)) for i, v in enumerate(state.y_l)]
    return rows


def write_snapshots(path, rows) -> None:
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["slot", "queue_id", "value"])
        w.writerows(rows)
