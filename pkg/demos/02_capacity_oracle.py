"""
Capacity region optima
======================

Solve the time-share linear programs on the small fixtures and look at
how the optimum shrinks when every rate must keep an epsilon of slack.
"""

import numpy as np
from coopcrn import UtilitySpec, elastic_optimum, inelastic_optimum
from coopcrn.instances import FIXTURES

# One relay, all three links in mutual conflict.
# Elastic PU: every admitted PU packet earns the relay one SU packet.
topo, routes = FIXTURES["one_relay"]()
sol = elastic_optimum(topo, routes, rho=[1.0])
print("elastic optimum", sol.objective)  # two hops + one SU link share the channel
print(sol.to_json())

# Without rewards the two PU hops split the slot evenly
print("rho = 0:", elastic_optimum(topo, routes, rho=[0.0]).objective)

# Inelastic PU asking for utility 0.2 with f(x) = x
lin = UtilitySpec("linear", 1.0)
print("inelastic optimum", inelastic_optimum(topo, 0.2, lin, [lin]).objective)

# Slack epsilon: the objective falls monotonically and hits infeasibility
for name in ("one_relay", "two_route", "mesh5"):
    topo, routes = FIXTURES[name]()
    row = []
    for eps in np.linspace(0.0, 0.3, 7):
        s = elastic_optimum(topo, routes, [1.0], eps)
        row.append(f"{s.objective:.3f}" if s.ok else "  -  ")
    print(f"{name:10s}", " ".join(row))
