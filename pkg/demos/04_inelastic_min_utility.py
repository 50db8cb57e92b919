"""
Inelastic PU with a minimum utility
===================================

The PU only needs f(rate) >= a_P; the SUs get whatever capacity is left.
Watch the virtual queues U_p and Z settle and the SU utility approach
the LP optimum.
"""

import numpy as np

from coopcrn import InelasticParams, SimConfig, evaluate
from coopcrn.instances import one_relay

topo, routes = one_relay()
p = InelasticParams(V1=250.0, q_M=62.0, mu_M=1.0, A_M=1.0, a_P=0.2, epsilon=0.05)
print("buffer condition holds:", p.buffer_condition(topo.n_su))

cfg = SimConfig(topo, p, "inelastic", routes, T=100_000, seed=1)
res, bounds, report = evaluate(cfg)
s = res.stats
print(f"PU rate {s.pu_rate:.4f}  f = {s.pu_utility:.4f}  (target {p.a_P})")
print(f"SU utility {s.su_utility:.4f}  LP optimum at eps {bounds.optimum:.4f}")
for line in report.lines():
    print(" ", line)

# virtual queue trajectories, sampled every 10k slots
up, z = res.records["Up"], res.records["Z"]
for t in range(0, cfg.T, 10_000):
    print(f"t={t:6d}  U_p={up[t]:7.1f}  Z={z[t]:7.1f}  U_s={res.records['U'][t, 0]:5.1f}")
print("max PU backlog", np.max(res.records["U"]), "<= q_M =", p.q_M)
