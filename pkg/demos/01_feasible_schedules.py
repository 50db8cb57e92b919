"""
Feasible schedules and max-weight scheduling
============================================

Build the five-relay mesh, list its feasible link schedules and compare
the exact max-weight scheduler with the greedy one on random weights.
"""

import numpy as np

from coopcrn import build_topology, enumerate_feasible, is_feasible, Schedule
from coopcrn.instances import mesh5
from coopcrn.maxweight import WeightedProblem, solve_exact, solve_gmm

# A tiny network first: s -> 1 -> d, relay 1 also has its own SU link.
# No conflict edges, yet node 1 cannot receive and talk to its partner at once.
topo = build_topology([1], [("s", 1), (1, "d")])
print(is_feasible(topo, Schedule([1, 0], [1])))  # False: single transceiver
print(is_feasible(topo, Schedule([1, 0], [0])))  # True

# The mesh: ten relay links, five SU links, a handful of interference edges
topo, routes = mesh5()
scheds = enumerate_feasible(topo)
print(f"{topo.n_vertices} links, {len(scheds)} feasible schedules")
print("largest schedule activates", max(s.units().sum() for s in scheds), "links")

# Random back-pressure style weights, some negative
rng = np.random.default_rng(0)
ratios = []
for _ in range(200):
    w = rng.normal(1.0, 2.0, size=topo.n_vertices)
    prob = WeightedProblem(w, topo.units)
    best = prob.value(solve_exact(prob))
    if best > 0:
        ratios.append(prob.value(solve_gmm(prob)) / best)
ratios = np.array(ratios)
print(f"greedy / exact weight: mean {ratios.mean():.3f}, worst {ratios.min():.3f}")
print(f"guaranteed floor 1/Delta = {1 / topo.units.max_degree:.3f}")
