import csv
from dataclasses import replace

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from coopcrn.elastic import reward_arrivals
from coopcrn.instances import mesh5, one_relay
from coopcrn.queueing import (ElasticQueues, InelasticQueues, InfeasibleScheduleError, SlotDecision,
                              snapshot_rows, step_elastic, step_inelastic, step_transport,
                              write_snapshots)
from coopcrn.topology import Schedule, enumerate_feasible, hop_layout


def dec(schedule, mu=0.0, A=None, n=1, **kw):
    return SlotDecision(schedule, mu, np.zeros(n) if A is None else np.asarray(A, float), **kw)


def test_empty_queue_sends_nothing(one):
    topo, _ = one
    st0 = InelasticQueues.zeros(topo)
    st1, flows = step_inelastic(st0, dec(Schedule([1, 0], [0])), topo)
    assert st1.u.tolist() == [0.0, 0.0] and flows.delivered == 0.0


def test_virtual_transport_queue(one):
    topo, _ = one
    st0 = replace(InelasticQueues.zeros(topo), u_p=2.0)
    st1, _ = step_inelastic(st0, dec(Schedule.empty(topo), mu=1.0, virtual_rate=0.5), topo)
    assert st1.u_p == 1.5


def test_su_queue_service_then_admission(one):
    topo, _ = one
    st0 = replace(InelasticQueues.zeros(topo), q=np.array([3.0]))
    st1, flows = step_inelastic(st0, dec(Schedule([0, 0], [1]), A=[2.0]), topo)
    assert st1.q[0] == 4.0 and flows.su_served[0] == 1.0


def test_relay_forwarding_and_delivery(one):
    topo, _ = one
    st0 = replace(InelasticQueues.zeros(topo), u=np.array([2.0, 0.5]))
    st1, flows = step_inelastic(st0, dec(Schedule([0, 1], [0])), topo)
    assert flows.delivered == 0.5 and st1.u.tolist() == [2.0, 0.0]
    st2, _ = step_inelastic(st0, dec(Schedule([1, 0], [0]), mu=1.0), topo)
    assert st2.u.tolist() == [2.0, 1.5]


def test_z_queue_service_source(one):
    topo, _ = one
    st0 = replace(InelasticQueues.zeros(topo), z=1.0)
    st1, _ = step_inelastic(st0, dec(Schedule.empty(topo), virtual_rate=1.0), topo, min_rate=0.2)
    assert st1.z == pytest.approx(0.2)
    arb = replace(InelasticQueues.zeros(topo, arbitrary=True), z=1.0)
    st2, _ = step_inelastic(arb, dec(Schedule.empty(topo), virtual_rate=1.0, aux_pu=0.25), topo, min_rate=0.2)
    assert st2.z == pytest.approx(0.95)


def test_infeasible_schedule_rejected(one):
    topo, _ = one
    with pytest.raises(InfeasibleScheduleError):
        step_inelastic(InelasticQueues.zeros(topo), dec(Schedule([1, 1], [0])), topo)


def test_elastic_conveyor(one):
    topo, routes = one
    layout = hop_layout(topo, routes)
    st0 = replace(ElasticQueues.zeros(topo, layout), u=np.array([1.0, 0.0]))
    sched = Schedule([1, 0], [0], [1, 0])
    st1, flows = step_elastic(st0, dec(sched, mu=np.zeros(1), su_rewards=np.zeros(1)), layout,
                              check_topo=topo, routes=routes)
    assert st1.u.tolist() == [0.0, 1.0]
    assert flows.delivered.tolist() == [0.0]


def test_elastic_reward_arrival(one):
    topo, routes = one
    layout = hop_layout(topo, routes)
    st0 = ElasticQueues.zeros(topo, layout)
    mu = np.array([1.0])
    st1, _ = step_elastic(st0, dec(Schedule.empty(topo, layout), mu=mu,
                                   su_rewards=reward_arrivals(mu, layout, [2.0])), layout)
    assert st1.q[0] == 2.0
    assert st1.u[0] == 1.0


def test_floor_counter():
    topo, routes = one_relay()
    layout = hop_layout(topo, routes)
    st = ElasticQueues.zeros(topo, layout)
    got = []
    for _ in range(4):
        st, flows = step_elastic(st, dec(Schedule.empty(topo, layout), mu=np.zeros(1),
                                         su_rewards=np.array([0.4])), layout, floor_rewards=True)
        got.append(float(flows.su_arrivals[0]))
    assert got == [0.0, 0.0, 1.0, 0.0]
    assert st.reward_residual[0] == pytest.approx(0.6)


def test_transport_zero_buffer_keeps_w_empty(one):
    topo, _ = one
    st = InelasticQueues.zeros(topo, arbitrary=True)
    for e in (0.5, 3.0, 1.0):
        st = step_transport(st, dec(Schedule.empty(topo), A=[0.2], exo_su=np.array([e]),
                                    aux_su=np.zeros(1)), caps=(0.0, 0.0))
        assert st.w_l[0] == 0.0 and st.w_p == 0.0


def test_transport_buffer_cap(one):
    topo, _ = one
    st = replace(InelasticQueues.zeros(topo, arbitrary=True), w_p=5.0)
    st = step_transport(st, dec(Schedule.empty(topo), mu=2.0, exo_pu=1.0, aux_su=np.zeros(1)), caps=(3.0, 10.0))
    assert st.w_p == 3.0


def test_transport_virtual_queue(one):
    topo, _ = one
    st = replace(InelasticQueues.zeros(topo, arbitrary=True), y_l=np.array([1.0]))
    st = step_transport(st, dec(Schedule.empty(topo), A=[2.0], aux_su=np.array([0.5])), caps=(0.0, 0.0))
    assert st.y_l[0] == 0.5


def test_transport_requires_arbitrary_mode(one):
    topo, _ = one
    with pytest.raises(ValueError):
        step_transport(InelasticQueues.zeros(topo), dec(Schedule.empty(topo)), caps=(1.0, 1.0))


def test_snapshot_csv(tmp_path, one):
    topo, _ = one
    st = InelasticQueues.zeros(topo, arbitrary=True)
    rows = snapshot_rows(3, st)
    path = tmp_path / "snap.csv"
    write_snapshots(path, rows)
    with open(path) as fh:
        read = list(csv.reader(fh))
    assert read[0] == ["slot", "queue_id", "value"]
    assert {r[1] for r in read[1:]} >= {"U[0]", "Q[0]", "Up", "Z", "Wp", "Yp", "W[0]", "Y[0]"}


MESH, MESH_ROUTES = mesh5()
MESH_SCHEDS = enumerate_feasible(MESH)
MESH_LAYOUT = hop_layout(MESH, MESH_ROUTES)
MESH_HOP_SCHEDS = enumerate_feasible(MESH, MESH_ROUTES)
backlog = st.floats(0, 50, allow_nan=False)


@settings(max_examples=200, deadline=None)
@given(u=st.lists(backlog, min_size=6, max_size=6), q=st.lists(backlog, min_size=5, max_size=5),
       k=st.integers(0, len(MESH_SCHEDS) - 1), mu=st.floats(0, 3),
       A=st.lists(st.floats(0, 2), min_size=5, max_size=5))
def test_inelastic_step_properties(u, q, k, mu, A):
    st0 = replace(InelasticQueues.zeros(MESH), u=np.array(u), q=np.array(q), u_p=3.0, z=1.0)
    sched = MESH_SCHEDS[k]
    st1, flows = step_inelastic(st0, dec(sched, mu=mu, A=A, n=5, virtual_rate=1.0), MESH, min_rate=0.3)
    assert (st1.u >= 0).all() and (st1.q >= 0).all() and st1.u_p >= 0 and st1.z >= 0
    # packets are created only by admission and destroyed only at the destination
    assert st1.u.sum() == pytest.approx(st0.u.sum() + mu - flows.delivered, abs=1e-9)
    assert st1.q.sum() == pytest.approx(st0.q.sum() - flows.su_served.sum() + sum(A), abs=1e-9)
    # next backlog <= [U - scheduled out]^+ + scheduled in
    n = len(st0.u)
    act = sched.relay_active
    out = np.bincount(MESH.relay_src[act], minlength=n + 1)[:n]
    inn = np.bincount(MESH.relay_dst[act], minlength=n + 1)[:n]
    bound = np.maximum(st0.u - out, 0) + inn
    bound[0] += mu
    assert (st1.u <= bound + 1e-12).all()


@settings(max_examples=200, deadline=None)
@given(u=st.lists(backlog, min_size=MESH_LAYOUT.n_hops, max_size=MESH_LAYOUT.n_hops),
       q=st.lists(backlog, min_size=5, max_size=5),
       k=st.integers(0, len(MESH_HOP_SCHEDS) - 1), route=st.integers(0, 2), mu=st.floats(0, 2))
def test_elastic_step_properties(u, q, k, route, mu):
    st0 = replace(ElasticQueues.zeros(MESH, MESH_LAYOUT), u=np.array(u), q=np.array(q))
    mu_k = np.zeros(3)
    mu_k[route] = mu
    rewards = reward_arrivals(mu_k, MESH_LAYOUT, [1.0, 0.5, 2.0])
    sched = MESH_HOP_SCHEDS[k]
    st1, flows = step_elastic(st0, dec(sched, mu=mu_k, n=5, su_rewards=rewards), MESH_LAYOUT,
                              check_topo=MESH, routes=MESH_ROUTES)
    assert (st1.u >= 0).all() and (st1.q >= 0).all()
    assert st1.u.sum() == pytest.approx(st0.u.sum() + mu - flows.delivered.sum(), abs=1e-9)
    for r in range(3):
        sl = MESH_LAYOUT.hop_route == r
        assert st1.u[sl].sum() == pytest.approx(st0.u[sl].sum() + mu_k[r] - flows.delivered[r], abs=1e-9)
