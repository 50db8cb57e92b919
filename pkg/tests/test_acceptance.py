"""Acceptance criteria 1-10.

Each test records one ``PASS``/``FAIL`` line per criterion; the lines are
printed in pytest's terminal summary (see ``conftest.py``).  Run alone with
``pytest tests/test_acceptance.py`` or ``python tests/test_acceptance.py``.
"""
import itertools
import sys
import time

import numpy as np
import pytest

from coopcrn.elastic import ElasticParams, reward_arrivals
from coopcrn.inelastic import InelasticParams
from coopcrn.instances import line3, mesh5, one_relay, two_route
from coopcrn.maxweight import WeightedProblem, solve_exact, solve_gmm
from coopcrn.oracle import elastic_optimum, sample_stationary_policy, schedule_of
from coopcrn.queueing import ElasticQueues, SlotDecision, step_elastic
from coopcrn.sim import ArrivalSpec, SimConfig, evaluate, run, solve_oracle
from coopcrn.topology import enumerate_feasible, hop_layout

from conftest import brute_feasible, brute_feasible_set, random_topology

RESULTS: list[str] = []

FIXTURES = {"one_relay": one_relay, "line3": line3, "mesh5": mesh5, "two_route": two_route}

# (fixture, V, q_M, mu_M, A_M) for the buffer-bound runs
INELASTIC_GRID = [("one_relay", 10.0, 62.0, 1.0, 1.0),
                  ("line3", 50.0, 40.0, 2.0, 2.0),
                  ("mesh5", 250.0, 100.0, 1.0, 1.0)]
ELASTIC_GRID = [("one_relay", 10.0, 1.0), ("line3", 50.0, 2.0), ("mesh5", 250.0, 1.0)]

OUTSIDE_PU = ArrivalSpec("bernoulli", p=0.6)
OUTSIDE_SU = (ArrivalSpec("bernoulli", p=0.9),)


def record(n: int, ok: bool, detail: str) -> None:
    line = f"{'PASS' if ok else 'FAIL'} criterion {n}: {detail}"
    RESULTS.append(line)
    print(line)
    assert ok, line


def theorem2_cfg(name, V2, T=200_000):
    topo, routes = FIXTURES[name]()
    p = ElasticParams(V2=V2, mu_M=1.0, rho=(1.0,), A_M=1.0, epsilon=0.01)
    return SimConfig(topo, p, "elastic", routes, T=T, seed=2024, strict=True)


def theorem1_cfg(V1, T=200_000):
    topo, routes = one_relay()
    p = InelasticParams(V1=V1, q_M=62.0, mu_M=1.0, A_M=1.0, a_P=0.2, epsilon=0.05)
    return SimConfig(topo, p, "inelastic", routes, T=T, seed=2024, strict=True)


def arbitrary_cfg(model, name, V, T=100_000):
    topo, routes = FIXTURES[name]()
    if model == "inelastic":
        p = InelasticParams(V1=V, q_M=62.0, mu_M=1.0, A_M=1.0, a_P=0.2, epsilon=0.05, W_P=5.0, W_S=5.0)
    else:
        p = ElasticParams(V2=V, mu_M=1.0, rho=(1.0,), A_M=1.0, epsilon=0.01, W_P=5.0, W_S=5.0)
    return SimConfig(topo, p, model, routes, "arbitrary", T=T, seed=7, strict=True,
                     pu_arrivals=OUTSIDE_PU, su_arrivals=OUTSIDE_SU)


# -- 1 ----------------------------------------------------------------------

def test_criterion_1_feasibility_oracle_equivalence():
    rng = np.random.default_rng(1001)
    t0 = time.perf_counter()
    mismatches = 0
    for _ in range(200):
        topo = random_topology(rng, max_vertices=12)
        got = [tuple(int(b) for b in s.units()) for s in enumerate_feasible(topo)]
        if got != brute_feasible_set(topo):
            mismatches += 1
    elapsed = time.perf_counter() - t0
    record(1, mismatches == 0 and elapsed < 10.0,
           f"200 random conflict graphs, {mismatches} mismatches, {elapsed:.2f} s (< 10 s)")


# -- 2 ----------------------------------------------------------------------

def test_criterion_2_exact_scheduler_optimality():
    rng = np.random.default_rng(2002)
    exact_bad = gmm_bad = 0
    worst = np.inf
    for _ in range(500):
        topo = random_topology(rng, max_vertices=12)
        # integer weights keep both sums exact, so equality is checked without tolerance
        w = rng.integers(-5, 21, size=topo.n_vertices).astype(float)
        prob = WeightedProblem(w, topo.units)
        best = max(float(np.dot(v, w)) for v in itertools.product((0, 1), repeat=topo.n_vertices)
                   if brute_feasible(topo, v))
        exact = prob.value(solve_exact(prob))
        greedy = prob.value(solve_gmm(prob))
        delta = max(topo.units.max_degree, 1)
        exact_bad += exact != best
        gmm_bad += greedy < best / delta
        if best > 0:
            worst = min(worst, greedy / best)
    record(2, exact_bad == 0 and gmm_bad == 0,
           f"500 weighted instances, exact != brute {exact_bad}, gmm below opt/Delta {gmm_bad}, "
           f"worst gmm ratio {worst:.3f}")


# -- 3 ----------------------------------------------------------------------

def test_criterion_3_pu_buffer_bound_inelastic():
    details, ok = [], True
    for name, V1, q_M, mu_M, A_M in INELASTIC_GRID:
        topo, routes = FIXTURES[name]()
        p = InelasticParams(V1=V1, q_M=q_M, mu_M=mu_M, A_M=A_M, a_P=0.1, epsilon=0.05)
        s = run(SimConfig(topo, p, "inelastic", routes, T=100_000, seed=3, strict=True)).stats
        ok &= s.max_u_backlog <= q_M and s.violations == 0
        details.append(f"{name} max U {s.max_u_backlog:g} <= q_M {q_M:g}")
    record(3, ok, "; ".join(details))


# -- 4 ----------------------------------------------------------------------

def test_criterion_4_pu_buffer_bound_elastic():
    details, ok = [], True
    for name, V2, mu_M in ELASTIC_GRID:
        topo, routes = FIXTURES[name]()
        for mode in ("backlogged", "arbitrary"):
            p = ElasticParams(V2=V2, mu_M=mu_M, rho=(1.0,), A_M=1.0, W_P=5.0, W_S=5.0)
            cfg = SimConfig(topo, p, "elastic", routes, mode, T=100_000, seed=4, strict=True,
                            pu_arrivals=OUTSIDE_PU if mode == "arbitrary" else None,
                            su_arrivals=OUTSIDE_SU if mode == "arbitrary" else ())
            s = run(cfg).stats
            bound = (2 * mu_M if mode == "arbitrary" else mu_M) + V2
            ok &= s.max_u_backlog <= bound and s.violations == 0
            details.append(f"{name}/{mode} {s.max_u_backlog:g} <= {bound:g}")
    record(4, ok, "; ".join(details))


# -- 5 ----------------------------------------------------------------------

def test_criterion_5_theorem2_throughput_gap():
    details, ok = [], True
    for name in ("one_relay", "two_route"):
        for V2 in (10.0, 50.0, 250.0):
            cfg = theorem2_cfg(name, V2)
            t0 = time.perf_counter()
            res, b, rep = evaluate(cfg)
            elapsed = time.perf_counter() - t0
            if name == "one_relay":
                ok &= abs(elastic_optimum(cfg.topo, cfg.routes, [1.0]).objective - 1 / 3) < 1e-12
            passed = res.stats.pu_rate >= b.gap_rhs and elapsed < 60.0
            ok &= passed
            details.append(f"{name} V2={V2:g}: {res.stats.pu_rate:.4f} >= {b.gap_rhs:.4f} ({elapsed:.0f} s)")
    record(5, ok, "; ".join(details))


# -- 6 ----------------------------------------------------------------------

def test_criterion_6_theorem1_utility_gap():
    details, ok = [], True
    for V1 in (10.0, 50.0, 250.0):
        cfg = theorem1_cfg(V1)
        assert cfg.params.buffer_condition(cfg.topo.n_su)
        res, b, rep = evaluate(cfg)
        s = res.stats
        gap_ok = s.su_utility >= b.gap_rhs
        min_ok = s.pu_utility >= cfg.params.a_P - 0.02
        ok &= gap_ok and min_ok
        details.append(f"V1={V1:g}: sum g {s.su_utility:.4f} >= {b.gap_rhs:.4f}, f(mu) {s.pu_utility:.4f} >= 0.18")
    record(6, ok, "; ".join(details))


# -- 7 ----------------------------------------------------------------------

def test_criterion_7_reward_proportionality():
    worst = 0.0
    for name, rho in (("two_route", (1.0, 0.5)), ("mesh5", (1.0, 0.5, 2.0)), ("one_relay", (1.5,))):
        topo, routes = FIXTURES[name]()
        p = ElasticParams(V2=50.0, mu_M=1.0, rho=rho)
        s = run(SimConfig(topo, p, "elastic", routes, T=50_000, seed=5)).stats
        layout = hop_layout(topo, routes)
        expect = (np.array(rho) * np.array(s.route_rates)) @ layout.membership
        worst = max(worst, float(np.abs(np.array(s.su_rates) - expect).max()))
    record(7, worst <= 1e-12, f"max |SU admission - sum rho_k lambda_k| = {worst:.3g} (<= 1e-12)")


# -- 8 ----------------------------------------------------------------------

def test_criterion_8_arbitrary_arrivals():
    details, ok = [], True
    runs = [("inelastic", "one_relay", 50.0), ("inelastic", "one_relay", 250.0),
            ("elastic", "one_relay", 50.0), ("elastic", "one_relay", 250.0),
            ("elastic", "two_route", 50.0), ("elastic", "two_route", 250.0)]
    for model, name, V in runs:
        cfg = arbitrary_cfg(model, name, V)
        res, b, rep = evaluate(cfg)
        # arrivals must lie outside the capacity region
        if model == "inelastic":
            outside = cfg.su_arrival(0).mean > solve_oracle(cfg, eps=0.0).objective
        else:
            outside = cfg.pu_arrivals.mean > elastic_optimum(cfg.topo, cfg.routes, [1.0]).objective
        checks = {c.name: c for c in rep.checks}
        gap = checks["utility_gap_thm3" if model == "inelastic" else "throughput_gap_thm4"]
        caps = checks["transport_cap_pu"].passed and checks["transport_cap_su"].passed
        ok &= outside and gap.passed and caps and res.stats.violations == 0
        details.append(f"{model}/{name} V={V:g}: {gap.lhs:.4f} >= {gap.rhs:.4f}, "
                       f"W_p {res.stats.max_transport['W_p']:g} <= 5, W_l {res.stats.max_transport['W_l']:g} <= 5")
    record(8, ok, "; ".join(details))


# -- 9 ----------------------------------------------------------------------

def stationary_backlog(name, T=100_000, seed=9):
    topo, routes = FIXTURES[name]()
    layout = hop_layout(topo, routes)
    sol = elastic_optimum(topo, routes, [1.0])
    lam = np.clip(sol.rates - 0.01, 0.0, None)
    rewards = reward_arrivals(lam, layout, [1.0])
    state = ElasticQueues.zeros(topo, layout)
    stream = sample_stationary_policy(sol, seed)
    total = np.empty(T)
    for t in range(T):
        dec = SlotDecision(schedule_of(next(stream), topo, routes), lam, np.zeros(topo.n_su),
                           su_rewards=rewards)
        state, _ = step_elastic(state, dec, layout)
        total[t] = state.u.sum() + state.q.sum()
    return total


def test_criterion_9_stationary_policy():
    details, ok = [], True
    for name in ("one_relay", "two_route", "mesh5"):
        total = stationary_backlog(name)
        q = np.array_split(total, 4)
        second, last = q[1].mean(), q[3].mean()
        passed = last <= 2 * second
        ok &= passed
        details.append(f"{name} Q4 avg {last:.2f} <= 2 x Q2 avg {second:.2f}")
    record(9, ok, "; ".join(details))


# -- 10 ---------------------------------------------------------------------

def test_criterion_10_determinism():
    cfgs = [theorem2_cfg("one_relay", 50.0), arbitrary_cfg("inelastic", "one_relay", 50.0)]
    first = [run(c).stats.to_json() for c in cfgs]
    again = [run(c).stats.to_json() for c in cfgs]
    same = first == again
    record(10, same, f"{len(cfgs)} acceptance runs repeated with the same seed, summary JSON identical")


if __name__ == "__main__":
    sys.exit(pytest.main([__file__, "-q"]))
